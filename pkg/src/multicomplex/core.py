"""
Multicomplex numbers in the standard basis.

A level-n number is stored as ``2**n`` real coefficients. Coefficient ``A`` is
attached to the unit ``i_A``, where bit ``k-1`` of the integer ``A`` says whether
the principal unit ``i_k`` takes part in the product (``A == 0`` is the real
unit 1). With this indexing the product of two units is

    i_A * i_B = (-1)**popcount(A & B) * i_(A ^ B)

because every shared principal unit contributes one factor ``i_k**2 = -1``.

The product implemented here (:func:`mul_standard`) is the plain O(4**n)
convolution. It is kept slow on purpose: it is the reference against which the
idempotent fast path is checked.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

import numpy as np

from .errors import LevelError

__all__ = [
    "MAX_LEVEL",
    "DEFAULT_TOL",
    "Multicomplex",
    "ConjugationMask",
    "check_level",
    "popcount_parity",
    "unit",
    "zero",
    "one",
    "real",
    "add",
    "sub",
    "scale",
    "mul_standard",
    "conjugate",
    "compose_masks",
    "approx_eq",
]

MAX_LEVEL = int(os.environ.get("MULTICOMPLEX_MAX_LEVEL", "16"))
DEFAULT_TOL = 1e-12


def check_level(level, minimum=1):
    if isinstance(level, bool) or not isinstance(level, (int, np.integer)):
        raise LevelError(f"level must be an integer, got {level!r}")
    level = int(level)
    if not minimum <= level <= MAX_LEVEL:
        raise LevelError(f"level {level} outside [{minimum}, {MAX_LEVEL}]")
    return level


@lru_cache(maxsize=None)
def _parity_table(level):
    """Parity of popcount for every mask below 2**level."""
    idx = np.arange(1 << level, dtype=np.int64)
    parity = np.zeros(1 << level, dtype=np.int64)
    while idx.any():
        parity ^= idx & 1
        idx = idx >> 1
    parity.setflags(write=False)
    return parity


def popcount_parity(masks, level):
    """(-1)**popcount as +1/-1 for each entry of ``masks``."""
    return 1 - 2 * _parity_table(level)[np.asarray(masks)]


class Multicomplex:
    """A multicomplex number of a fixed level in the standard basis.

    Instances are immutable; the coefficient array is read-only.
    """

    __slots__ = ("level", "coeffs")

    def __init__(self, level, coeffs):
        level = check_level(level)
        arr = np.array(coeffs, dtype=np.float64).reshape(-1)
        if arr.shape[0] != 1 << level:
            raise LevelError(
                f"level {level} needs {1 << level} coefficients, got {arr.shape[0]}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def _adopt(cls, level, arr):
        """Wrap a freshly built float array without copying it."""
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        arr.setflags(write=False)
        out = object.__new__(cls)
        object.__setattr__(out, "level", level)
        object.__setattr__(out, "coeffs", arr)
        return out

    def __setattr__(self, name, value):
        raise AttributeError("Multicomplex is immutable")

    def __repr__(self):
        return f"Multicomplex(level={self.level}, coeffs={self.coeffs.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, Multicomplex):
            return NotImplemented
        return self.level == other.level and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        # + 0.0 folds -0.0 into 0.0 so equal values hash equally
        return hash((self.level, (self.coeffs + 0.0).tobytes()))

    def __add__(self, other):
        other = _coerce(other, self.level)
        if other is None:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other, self.level)
        if other is None:
            return NotImplemented
        return sub(self, other)

    def __rsub__(self, other):
        other = _coerce(other, self.level)
        if other is None:
            return NotImplemented
        return sub(other, self)

    def __neg__(self):
        return Multicomplex(self.level, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)) and not isinstance(other, bool):
            return scale(self, other)
        if isinstance(other, Multicomplex):
            return mul_standard(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def is_zero(self):
        return not np.any(self.coeffs)

    def max_norm(self):
        return float(np.max(np.abs(self.coeffs)))


NumberLike = Union[Multicomplex, int, float]


def _coerce(value, level):
    if isinstance(value, Multicomplex):
        return value
    if isinstance(value, (int, float, np.floating, np.integer)) and not isinstance(value, bool):
        return real(level, float(value))
    return None


def _same_level(a, b):
    if a.level != b.level:
        raise LevelError(f"level mismatch: {a.level} vs {b.level}")
    return a.level


def unit(level, units):
    """The unit ``i_A``.

    ``units`` is either a bitmask or an iterable of principal-unit numbers
    (1-based), so ``unit(3, {1, 3})`` and ``unit(3, 0b101)`` are both ``i1 i3``.
    """
    level = check_level(level)
    mask = units if isinstance(units, (int, np.integer)) else units_to_mask(units, level)
    if not 0 <= mask < 1 << level:
        raise LevelError(f"unit mask {mask} does not fit level {level}")
    coeffs = np.zeros(1 << level)
    coeffs[mask] = 1.0
    return Multicomplex(level, coeffs)


def units_to_mask(units: Iterable[int], level):
    mask = 0
    for k in units:
        if not 1 <= k <= level:
            raise LevelError(f"principal unit i{k} does not exist at level {level}")
        mask |= 1 << (k - 1)
    return mask


def mask_to_units(mask):
    return [k + 1 for k in range(mask.bit_length()) if mask >> k & 1]


def zero(level):
    return Multicomplex(level, np.zeros(1 << check_level(level)))


def real(level, x):
    coeffs = np.zeros(1 << check_level(level))
    coeffs[0] = x
    return Multicomplex(level, coeffs)


def one(level):
    return real(level, 1.0)


def add(a, b):
    level = _same_level(a, b)
    return Multicomplex(level, a.coeffs + b.coeffs)


def sub(a, b):
    level = _same_level(a, b)
    return Multicomplex(level, a.coeffs - b.coeffs)


def scale(a, r):
    return Multicomplex(a.level, a.coeffs * float(r))


def mul_standard(a, b):
    """Reference product: ``result[A ^ B] += sign(A, B) * a[A] * b[B]``.

    One vectorised row per nonzero coefficient of ``a``; O(4**n) overall.
    """
    level = _same_level(a, b)
    size = 1 << level
    idx = np.arange(size)
    out = np.zeros(size)
    for A in np.flatnonzero(a.coeffs):
        targets = idx ^ A
        signs = popcount_parity(idx & A, level)
        # A ^ idx is a permutation, so no target repeats within a row
        out[targets] += signs * (a.coeffs[A] * b.coeffs)
    return Multicomplex(level, out)


@dataclass(frozen=True)
class ConjugationMask:
    """A composition of principal conjugations, one bit per principal unit.

    Bit ``k-1`` set means the conjugation flipping ``i_k`` is applied. The empty
    mask is the identity and the full mask is the total conjugation Lambda.
    """

    level: int
    mask: int

    def __post_init__(self):
        check_level(self.level)
        if not 0 <= self.mask < 1 << self.level:
            raise LevelError(f"mask {self.mask} does not fit level {self.level}")

    @classmethod
    def from_units(cls, level, units):
        return cls(level, units_to_mask(units, level))

    @classmethod
    def identity(cls, level):
        return cls(level, 0)

    @classmethod
    def full(cls, level):
        return cls(level, (1 << level) - 1)

    def units(self):
        return mask_to_units(self.mask)

    def __mul__(self, other):
        if not isinstance(other, ConjugationMask):
            return NotImplemented
        return compose_masks(self, other)


def _as_mask(m, level):
    if isinstance(m, ConjugationMask):
        if m.level != level:
            raise LevelError(f"level mismatch: mask level {m.level} vs number level {level}")
        return m.mask
    return ConjugationMask(level, int(m)).mask


def conjugate(a, m):
    """Flip the sign of every principal unit selected by ``m``.

    ``m`` may be a :class:`ConjugationMask` or a raw bitmask.
    """
    mask = _as_mask(m, a.level)
    signs = popcount_parity(np.arange(1 << a.level) & mask, a.level)
    return Multicomplex(a.level, signs * a.coeffs)


def compose_masks(m1, m2):
    if m1.level != m2.level:
        raise LevelError(f"level mismatch: {m1.level} vs {m2.level}")
    return ConjugationMask(m1.level, m1.mask ^ m2.mask)


def approx_eq(a, b, tol=DEFAULT_TOL):
    """Relative max-norm comparison: ``|a-b|_inf <= tol * max(1, |a|_inf, |b|_inf)``."""
    _same_level(a, b)
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    diff = float(np.max(np.abs(a.coeffs - b.coeffs)))
    return diff <= tol * max(1.0, a.max_norm(), b.max_norm())
