"""
Ideals of the multiperplex and multicomplex rings.

Every ideal is principal and is fixed by the set ``J`` of idempotent indices on
which its members may be nonzero: the ideal is the direct sum of the lines
through ``eps_j`` for ``j`` in ``J`` (real lines for the multiperplex flavor,
complex lines for the multicomplex one). Ideals are therefore stored as index
sets and every lattice operation is a set operation.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import FrozenSet

import numpy as np

from .core import DEFAULT_TOL, Multicomplex, check_level, zero
from .errors import FlavorError, IndexRangeError, LevelError
from .idempotent import (
    IdempotentRep,
    epsilon,
    from_idempotent,
    is_multiperplex,
    to_idempotent,
    zero_threshold,
)

__all__ = [
    "Flavor",
    "IdealSpec",
    "generator",
    "contains",
    "meet",
    "join",
    "is_minimal",
    "is_maximal",
    "hyperplane",
    "minimal",
    "complexify",
    "realize",
    "quotient_rep",
]


class Flavor(enum.Enum):
    MULTIPERPLEX = "multiperplex"
    MULTICOMPLEX = "multicomplex"


@dataclass(frozen=True)
class IdealSpec:
    """The ideal generated by ``sum(eps_j for j in indices)``.

    An empty index set is the zero ideal; the full set is the whole ring.
    """

    level: int
    indices: FrozenSet[int]
    flavor: Flavor = Flavor.MULTICOMPLEX

    def __post_init__(self):
        check_level(self.level, minimum=2)
        object.__setattr__(self, "indices", frozenset(int(j) for j in self.indices))
        object.__setattr__(self, "flavor", Flavor(self.flavor))
        size = self.size
        bad = sorted(j for j in self.indices if not 0 <= j < size)
        if bad:
            raise IndexRangeError(f"indices {bad} out of range for level {self.level}")

    @property
    def size(self):
        """Number of canonical idempotents at this level."""
        return 1 << (self.level - 1)

    @property
    def complement(self):
        return frozenset(range(self.size)) - self.indices

    def is_zero(self):
        return not self.indices

    def is_whole(self):
        return len(self.indices) == self.size


def _compatible(i1, i2):
    if i1.level != i2.level:
        raise LevelError(f"level mismatch: {i1.level} vs {i2.level}")
    if i1.flavor is not i2.flavor:
        raise FlavorError(f"flavor mismatch: {i1.flavor.value} vs {i2.flavor.value}")


def generator(ideal):
    """The idempotent generator ``sum(eps_j for j in J)`` in the standard basis."""
    out = zero(ideal.level)
    for j in sorted(ideal.indices):
        out = out + epsilon(ideal.level, j)
    return out


def contains(ideal, x, tol=DEFAULT_TOL):
    """Membership: every component outside ``J`` vanishes.

    For the multiperplex flavor ``x`` must itself be multiperplex.
    """
    if x.level != ideal.level:
        raise LevelError(f"level mismatch: ideal {ideal.level} vs element {x.level}")
    r = x if isinstance(x, IdempotentRep) else to_idempotent(x)
    if ideal.flavor is Flavor.MULTIPERPLEX and not is_multiperplex(r, tol):
        raise FlavorError("multiperplex ideal queried with a non-multiperplex element")
    mod = np.abs(r.comps)
    outside = sorted(ideal.complement)
    return bool(np.all(mod[outside] <= zero_threshold(mod, tol)))


def meet(i1, i2):
    _compatible(i1, i2)
    return IdealSpec(i1.level, i1.indices & i2.indices, i1.flavor)


def join(i1, i2):
    _compatible(i1, i2)
    return IdealSpec(i1.level, i1.indices | i2.indices, i1.flavor)


def is_minimal(ideal):
    return len(ideal.indices) == 1


def is_maximal(ideal):
    return len(ideal.indices) == ideal.size - 1


def minimal(level, p, flavor=Flavor.MULTICOMPLEX):
    """The line through ``eps_p``."""
    return IdealSpec(level, {p}, flavor)


def hyperplane(level, p, flavor=Flavor.MULTIPERPLEX):
    """Elements annihilated by ``eps_p``: all indices except ``p``.

    The multiperplex flavor is the real hyperplane; the multicomplex one is its
    complexification.
    """
    level = check_level(level, minimum=2)
    size = 1 << (level - 1)
    if not 0 <= p < size:
        raise IndexRangeError(f"idempotent index {p} out of range for level {level}")
    return IdealSpec(level, frozenset(range(size)) - {p}, flavor)


def complexify(ideal):
    if ideal.flavor is not Flavor.MULTIPERPLEX:
        raise FlavorError("complexify expects a multiperplex ideal")
    return IdealSpec(ideal.level, ideal.indices, Flavor.MULTICOMPLEX)


def realize(ideal):
    if ideal.flavor is not Flavor.MULTICOMPLEX:
        raise FlavorError("realize expects a multicomplex ideal")
    return IdealSpec(ideal.level, ideal.indices, Flavor.MULTIPERPLEX)


def quotient_rep(x, ideal):
    """Canonical coset representative of ``x`` modulo the ideal.

    Keeps the components outside ``J``; two elements share a representative
    exactly when their difference lies in the ideal. The result has the same
    type as ``x``.
    """
    if x.level != ideal.level:
        raise LevelError(f"level mismatch: ideal {ideal.level} vs element {x.level}")
    r = x if isinstance(x, IdempotentRep) else to_idempotent(x)
    comps = r.comps.copy()
    comps[sorted(ideal.indices)] = 0.0
    out = IdempotentRep(r.level, comps)
    return out if isinstance(x, IdempotentRep) else from_idempotent(out)
