"""
Square matrices over M_n.

A matrix is held as its stack of complex slices ``A_p = P_p(A)``, one per
canonical idempotent, with shape ``(2**(n-1), m, m)``. Determinant, inverse and
products are computed slice by slice and reassembled; elimination directly in
multicomplex arithmetic is avoided because pivots may be zero divisors.
"""
from __future__ import annotations

import numpy as np

from .core import Multicomplex, check_level
from .errors import IndexRangeError, LevelError, ShapeError, SingularMatrixError
from .idempotent import IdempotentRep, to_idempotent

__all__ = [
    "McMatrix",
    "lu_factor",
    "lu_det",
    "lu_inverse",
    "project_matrix",
    "det",
    "is_singular",
    "singular_components",
    "invert_matrix",
    "matmul",
    "matvec",
    "adjoint_matrix",
]

SINGULAR_TOL = 1e-10


def _as_rep(value, level):
    if isinstance(value, IdempotentRep):
        if value.level != level:
            raise LevelError(f"entry level {value.level} differs from matrix level {level}")
        return value.comps
    if isinstance(value, Multicomplex):
        if value.level != level:
            raise LevelError(f"entry level {value.level} differs from matrix level {level}")
        return to_idempotent(value).comps
    return np.full(1 << (level - 1), complex(value))


class McMatrix:
    """An m x m multicomplex matrix stored as complex slices."""

    __slots__ = ("level", "slices")

    def __init__(self, level, slices):
        level = check_level(level, minimum=2)
        arr = np.array(slices, dtype=np.complex128)
        size = 1 << (level - 1)
        if arr.ndim != 3 or arr.shape[0] != size or arr.shape[1] != arr.shape[2]:
            raise ShapeError(f"expected slices of shape ({size}, m, m), got {arr.shape}")
        if arr.shape[1] == 0:
            raise ShapeError("matrix dimension must be positive")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "slices", arr)

    def __setattr__(self, name, value):
        raise AttributeError("McMatrix is immutable")

    def __repr__(self):
        return f"McMatrix(level={self.level}, m={self.m})"

    @property
    def m(self):
        return self.slices.shape[1]

    @classmethod
    def from_entries(cls, level, rows):
        """Build from a nested list of entries (IdempotentRep, Multicomplex or scalars)."""
        level = check_level(level, minimum=2)
        m = len(rows)
        if any(len(row) != m for row in rows):
            raise ShapeError("matrix must be square")
        comps = np.array([[_as_rep(v, level) for v in row] for row in rows])
        return cls(level, np.transpose(comps.reshape(m, m, -1), (2, 0, 1)))

    @classmethod
    def identity(cls, level, m):
        size = 1 << (check_level(level, minimum=2) - 1)
        return cls(level, np.broadcast_to(np.eye(m), (size, m, m)))

    @classmethod
    def diag(cls, level, entries):
        m = len(entries)
        rows = [[entries[i] if i == j else 0.0 for j in range(m)] for i in range(m)]
        return cls.from_entries(level, rows)

    def entry(self, i, j):
        return IdempotentRep(self.level, self.slices[:, i, j])

    def entries(self):
        return [[self.entry(i, j) for j in range(self.m)] for i in range(self.m)]

    def __add__(self, other):
        if not isinstance(other, McMatrix):
            return NotImplemented
        _check_pair(self, other)
        return McMatrix(self.level, self.slices + other.slices)

    def __sub__(self, other):
        if not isinstance(other, McMatrix):
            return NotImplemented
        _check_pair(self, other)
        return McMatrix(self.level, self.slices - other.slices)

    def __matmul__(self, other):
        if isinstance(other, McMatrix):
            return matmul(self, other)
        return matvec(self, other)

    def scaled(self, factor):
        """Entrywise product with a multicomplex scalar."""
        f = _as_rep(factor, self.level)
        return McMatrix(self.level, f[:, None, None] * self.slices)


def _check_pair(a, b):
    if a.level != b.level:
        raise LevelError(f"level mismatch: {a.level} vs {b.level}")
    if a.m != b.m:
        raise ShapeError(f"dimension mismatch: {a.m} vs {b.m}")


def lu_factor(a):
    """Doolittle LU with partial pivoting on modulus.

    Returns ``(lu, perm, sign)`` with ``a[perm] = L @ U`` packed in ``lu`` and
    ``sign`` the parity of the row permutation. A zero pivot column is left in
    place; the determinant then comes out as zero.
    """
    lu = np.array(a, dtype=np.complex128)
    m = lu.shape[0]
    perm = np.arange(m)
    sign = 1
    for k in range(m):
        piv = k + int(np.argmax(np.abs(lu[k:, k])))
        if piv != k:
            lu[[k, piv]] = lu[[piv, k]]
            perm[[k, piv]] = perm[[piv, k]]
            sign = -sign
        if lu[k, k] == 0:
            continue
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm, sign


def lu_det(a):
    lu, _, sign = lu_factor(a)
    return sign * complex(np.prod(np.diag(lu)))


def lu_inverse(a):
    """Inverse through the LU factors, one forward/back substitution per column."""
    lu, perm, _ = lu_factor(a)
    m = lu.shape[0]
    rhs = np.eye(m, dtype=np.complex128)[perm]
    for k in range(m):
        rhs[k + 1:] -= np.outer(lu[k + 1:, k], rhs[k])
    for k in range(m - 1, -1, -1):
        rhs[k] /= lu[k, k]
        rhs[:k] -= np.outer(lu[:k, k], rhs[k])
    return rhs


def project_matrix(a, p):
    if not 0 <= p < a.slices.shape[0]:
        raise IndexRangeError(f"idempotent index {p} out of range for level {a.level}")
    return a.slices[p].copy()


def det(a):
    """Determinant assembled from the slice determinants."""
    return IdempotentRep(a.level, [lu_det(s) for s in a.slices])


def singular_components(a, tol=SINGULAR_TOL):
    """Slices whose determinant is negligible: ``|det| <= tol * (1 + ||A_p||_F)**m``."""
    out = []
    for p, s in enumerate(a.slices):
        bound = tol * (1.0 + np.linalg.norm(s)) ** a.m
        if abs(lu_det(s)) <= bound:
            out.append(p)
    return out


def is_singular(a, tol=SINGULAR_TOL):
    """A matrix is singular when its determinant lies in the null cone."""
    return bool(singular_components(a, tol))


def invert_matrix(a, tol=SINGULAR_TOL):
    dead = singular_components(a, tol)
    if dead:
        raise SingularMatrixError(
            f"singular matrix: determinant components {dead} vanish (0-based)", dead
        )
    return McMatrix(a.level, [lu_inverse(s) for s in a.slices])


def matmul(a, b):
    _check_pair(a, b)
    return McMatrix(a.level, a.slices @ b.slices)


def matvec(a, v):
    from .hilbert import Ket

    if a.level != v.level:
        raise LevelError(f"level mismatch: {a.level} vs {v.level}")
    if a.m != v.m:
        raise ShapeError(f"dimension mismatch: {a.m} vs {v.m}")
    return Ket(a.level, np.einsum("pij,pj->pi", a.slices, v.slices))


def adjoint_matrix(a):
    """Slicewise conjugate transpose."""
    return McMatrix(a.level, np.conj(np.transpose(a.slices, (0, 2, 1))))
