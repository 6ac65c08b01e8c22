"""
Kets over a free M_n-module, the multicomplex scalar product, and the spectral
decomposition of self-adjoint operators.

Kets are coordinate vectors in a fixed orthonormal working basis and are stored
as complex slices of shape ``(2**(n-1), m)``; slice ``p`` is the ket's
projection onto the complex space attached to ``eps_p``. Everything below works
slice by slice.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .core import DEFAULT_TOL, Multicomplex, check_level
from .errors import IndexRangeError, LevelError, NotSelfAdjointError, NullConeError, ShapeError
from .idempotent import IdempotentRep, Multiperplex, to_idempotent
from .linalg import McMatrix, matvec, project_matrix

__all__ = [
    "Ket",
    "SpectralResult",
    "ket_project",
    "null_cone_components",
    "is_null_cone_ket",
    "scalar_product",
    "complex_product",
    "normalize",
    "riesz_vector",
    "apply_operator",
    "operator_project",
    "is_self_adjoint",
    "hermitian_eig_slice",
    "spectral_decompose",
    "outer_product",
]

HERMITIAN_TOL = 1e-10


class Ket:
    """A vector of m multicomplex coordinates."""

    __slots__ = ("level", "slices")

    def __init__(self, level, slices):
        level = check_level(level, minimum=2)
        arr = np.array(slices, dtype=np.complex128)
        size = 1 << (level - 1)
        if arr.ndim != 2 or arr.shape[0] != size or arr.shape[1] == 0:
            raise ShapeError(f"expected slices of shape ({size}, m), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("ket coordinates must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "slices", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Ket is immutable")

    def __repr__(self):
        return f"Ket(level={self.level}, m={self.m})"

    @property
    def m(self):
        return self.slices.shape[1]

    @classmethod
    def from_entries(cls, level, entries):
        level = check_level(level, minimum=2)
        cols = []
        for v in entries:
            if isinstance(v, Multicomplex):
                v = to_idempotent(v)
            if isinstance(v, IdempotentRep):
                if v.level != level:
                    raise LevelError(f"entry level {v.level} differs from ket level {level}")
                cols.append(v.comps)
            else:
                cols.append(np.full(1 << (level - 1), complex(v)))
        return cls(level, np.array(cols).T)

    @classmethod
    def basis(cls, level, m, l):
        """The working basis ket ``e_l`` (0-based)."""
        if not 0 <= l < m:
            raise IndexRangeError(f"basis index {l} out of range for dimension {m}")
        return cls.from_entries(level, [1.0 if k == l else 0.0 for k in range(m)])

    @classmethod
    def zeros(cls, level, m):
        return cls(level, np.zeros((1 << (level - 1), m)))

    def entry(self, l):
        return IdempotentRep(self.level, self.slices[:, l])

    def entries(self):
        return [self.entry(l) for l in range(self.m)]

    def __add__(self, other):
        if not isinstance(other, Ket):
            return NotImplemented
        _check_pair(self, other)
        return Ket(self.level, self.slices + other.slices)

    def __sub__(self, other):
        if not isinstance(other, Ket):
            return NotImplemented
        _check_pair(self, other)
        return Ket(self.level, self.slices - other.slices)

    def __neg__(self):
        return Ket(self.level, -self.slices)

    def scaled(self, factor):
        """Multiply every coordinate by a multicomplex scalar."""
        if isinstance(factor, Multicomplex):
            factor = to_idempotent(factor)
        if isinstance(factor, IdempotentRep):
            if factor.level != self.level:
                raise LevelError(f"level mismatch: {factor.level} vs {self.level}")
            return Ket(self.level, factor.comps[:, None] * self.slices)
        return Ket(self.level, complex(factor) * self.slices)

    __rmul__ = scaled


def _check_pair(u, v):
    if u.level != v.level:
        raise LevelError(f"level mismatch: {u.level} vs {v.level}")
    if u.m != v.m:
        raise ShapeError(f"dimension mismatch: {u.m} vs {v.m}")


def ket_project(v, p):
    if not 0 <= p < v.slices.shape[0]:
        raise IndexRangeError(f"idempotent index {p} out of range for level {v.level}")
    return v.slices[p].copy()


def null_cone_components(v, tol=DEFAULT_TOL):
    norms = np.linalg.norm(v.slices, axis=1)
    bound = tol * (1.0 + float(np.max(norms)))
    return [int(p) for p in np.flatnonzero(norms <= bound)]


def is_null_cone_ket(v, tol=DEFAULT_TOL):
    """True when some slice of ``v`` vanishes (zero included)."""
    return bool(null_cone_components(v, tol))


def scalar_product(u, v):
    """Multicomplex scalar product, conjugate-linear in the first argument."""
    _check_pair(u, v)
    return IdempotentRep(u.level, np.einsum("pi,pi->p", np.conj(u.slices), v.slices))


def complex_product(u, v):
    """The induced complex-valued product: sum of the slice products."""
    _check_pair(u, v)
    return complex(np.vdot(u.slices, v.slices))


def normalize(v, tol=DEFAULT_TOL):
    """Scale by ``sum(a_k**-0.5 eps_k)`` where ``(v, v) = sum(a_k eps_k)``."""
    dead = null_cone_components(v, tol)
    if dead:
        raise NullConeError(f"cannot normalize: slices {dead} vanish (0-based)", dead)
    norms = np.linalg.norm(v.slices, axis=1)
    return Ket(v.level, v.slices / norms[:, None])


def riesz_vector(f_values):
    """The ket representing the functional with values ``f_values`` on the working basis.

    Its coordinates are the total conjugates of the values, so that
    ``(psi, phi) = sum_l f(e_l) phi_l``.
    """
    if not f_values:
        raise ShapeError("functional needs at least one value")
    reps = [to_idempotent(f) if isinstance(f, Multicomplex) else f for f in f_values]
    level = reps[0].level
    if any(r.level != level for r in reps):
        raise LevelError("functional values disagree on level")
    return Ket(level, np.conj(np.array([r.comps for r in reps]).T))


def apply_operator(a, v):
    return matvec(a, v)


def operator_project(a, p):
    return project_matrix(a, p)


def _hermitian_defect(h):
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def is_self_adjoint(a, tol=HERMITIAN_TOL):
    """Every slice is Hermitian within ``tol`` relative to its largest entry."""
    for s in a.slices:
        if _hermitian_defect(s) > tol * max(1.0, float(np.max(np.abs(s)))):
            return False
    return True


def _phase_fix(vec, cutoff):
    for x in vec:
        if abs(x) > cutoff:
            return vec * (abs(x) / x)
    return vec


def hermitian_eig_slice(h, tol=HERMITIAN_TOL, max_sweeps=100):
    """Cyclic Jacobi for a Hermitian complex matrix.

    Each rotation first removes the phase of ``h[p, q]`` and then applies the
    real symmetric Jacobi rotation. Returns ``(eigenvalues, vectors)`` with
    eigenvalues ascending and eigenvectors as columns, each phase-fixed so its
    first nonzero entry is real positive. Within a cluster of equal eigenvalues
    the vectors are ordered lexicographically, largest first.
    """
    a = np.array(h, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if _hermitian_defect(a) > tol * scale:
        raise NotSelfAdjointError("slice is not Hermitian")
    a = (a + a.conj().T) / 2
    m = a.shape[0]
    v = np.eye(m, dtype=np.complex128)
    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= eps * max(np.linalg.norm(a), eps):
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    values = np.diag(a).real.copy()
    cutoff = 1e-12
    vecs = np.array([_phase_fix(v[:, k], cutoff) for k in range(m)]).T
    cluster = tol * max(1.0, float(np.max(np.abs(values))) if m else 1.0)
    # sort by eigenvalue; ties broken by descending lexicographic entries
    order = sorted(range(m), key=lambda k: values[k])
    ranked = []
    i = 0
    while i < m:
        j = i + 1
        while j < m and values[order[j]] - values[order[i]] <= cluster:
            j += 1
        group = order[i:j]
        group.sort(key=lambda k: _lex_key(vecs[:, k]), reverse=True)
        ranked.extend(group)
        i = j
    return values[ranked], vecs[:, ranked]


def _lex_key(vec):
    return tuple(x for z in np.round(vec, 9) for x in (z.real, z.imag))


@dataclass(frozen=True)
class SpectralResult:
    eigenvalues: List[Multiperplex]
    eigenkets: List[Ket]
    residual: float

    def reconstruct(self):
        """``sum(lambda_l |psi_l><psi_l|)``."""
        total = None
        for lam, psi in zip(self.eigenvalues, self.eigenkets):
            term = outer_product(psi, psi).scaled(lam)
            total = term if total is None else total + term
        return total


def spectral_decompose(a, tol=HERMITIAN_TOL):
    """Eigen-decomposition of a self-adjoint operator.

    Each slice is diagonalised separately and slice eigenpairs are paired by
    their ascending rank, so eigenvalue ``l`` collects the ``l``-th smallest
    eigenvalue of every slice.
    """
    if not is_self_adjoint(a, tol):
        raise NotSelfAdjointError("operator is not self-adjoint")
    size, m = a.slices.shape[0], a.m
    lam = np.zeros((size, m))
    vec = np.zeros((size, m, m), dtype=np.complex128)
    for p, s in enumerate(a.slices):
        lam[p], vec[p] = hermitian_eig_slice(s, tol)
    eigenvalues = [Multiperplex(a.level, lam[:, l]) for l in range(m)]
    eigenkets = [Ket(a.level, vec[:, :, l]) for l in range(m)]
    recon = np.einsum("pl,pil,pjl->pij", lam, vec, np.conj(vec))
    residual = float(np.max(np.abs(recon - a.slices)))
    return SpectralResult(eigenvalues, eigenkets, residual)


def outer_product(u, v):
    """``|u><v|``, acting as ``chi -> u (v, chi)``."""
    _check_pair(u, v)
    return McMatrix(u.level, np.einsum("pi,pj->pij", u.slices, np.conj(v.slices)))
