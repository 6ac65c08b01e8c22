"""
Canonical idempotent representation.

For level n >= 2 every multicomplex number is a complex combination of the
``2**(n-1)`` mutually orthogonal idempotents ``eps_p``; in that basis addition,
multiplication, inversion and the total conjugation act componentwise.

Index convention: ``eps_p`` is the product over ``j = 2..n`` of ``gamma_j`` when
bit ``j-2`` of ``p`` is 0 and of ``gamma'_j`` when it is 1, where

    gamma_j  = (1 + i_(j-1) i_j) / 2,
    gamma'_j = (1 - i_(j-1) i_j) / 2.

The most significant bit of ``p`` belongs to level n, so the first half of the
components sit on ``gamma_n`` and the second half on ``gamma'_n``. The complex
scalar ``i`` of the components is the unit ``i_1``.
"""
from __future__ import annotations

import threading
from functools import lru_cache

import numpy as np

from .core import (
    DEFAULT_TOL,
    ConjugationMask,
    Multicomplex,
    check_level,
    conjugate,
    mul_standard,
    one,
    unit,
)
from .errors import FlavorError, IndexRangeError, LevelError, NullConeError

__all__ = [
    "IdempotentRep",
    "Multiperplex",
    "gamma",
    "gamma_prime",
    "epsilon",
    "to_idempotent",
    "from_idempotent",
    "project",
    "add_fast",
    "sub_fast",
    "mul_fast",
    "zero_threshold",
    "vanishing_components",
    "is_zero_divisor",
    "invert",
    "lambda_conjugate",
    "conjugate_idem",
    "enumerate_conjugate_orbit",
    "is_multiperplex",
    "split_perplex",
    "leq",
    "mnorm",
]


def zero_threshold(moduli, tol=DEFAULT_TOL):
    """Cutoff below which a component counts as vanished: ``tol * (1 + max modulus)``."""
    moduli = np.asarray(moduli)
    top = float(np.max(moduli)) if moduli.size else 0.0
    return tol * (1.0 + top)


class IdempotentRep:
    """Components of a multicomplex number over the canonical idempotents."""

    __slots__ = ("level", "comps")

    def __init__(self, level, comps):
        level = check_level(level, minimum=2)
        arr = np.array(comps, dtype=np.complex128).reshape(-1)
        if arr.shape[0] != 1 << (level - 1):
            raise LevelError(
                f"level {level} needs {1 << (level - 1)} components, got {arr.shape[0]}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("components must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "comps", arr)

    @classmethod
    def _adopt(cls, level, arr):
        """Wrap a freshly built complex array without copying it."""
        if not np.all(np.isfinite(arr)):
            raise ValueError("components must be finite")
        arr.setflags(write=False)
        out = object.__new__(cls)
        object.__setattr__(out, "level", level)
        object.__setattr__(out, "comps", arr)
        return out

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __repr__(self):
        return f"{type(self).__name__}(level={self.level}, comps={self.comps.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, IdempotentRep):
            return NotImplemented
        return self.level == other.level and np.array_equal(self.comps, other.comps)

    def __hash__(self):
        return hash((self.level, (self.comps + 0.0).tobytes()))

    def __len__(self):
        return self.comps.shape[0]

    def __add__(self, other):
        other = _coerce(other, self.level)
        return NotImplemented if other is None else add_fast(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other, self.level)
        return NotImplemented if other is None else sub_fast(self, other)

    def __rsub__(self, other):
        other = _coerce(other, self.level)
        return NotImplemented if other is None else sub_fast(other, self)

    def __neg__(self):
        return IdempotentRep(self.level, -self.comps)

    def __mul__(self, other):
        other = _coerce(other, self.level)
        return NotImplemented if other is None else mul_fast(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other, self.level)
        return NotImplemented if other is None else mul_fast(self, invert(other))

    def to_standard(self):
        return from_idempotent(self)

    def max_modulus(self):
        return float(np.max(np.abs(self.comps)))

    @classmethod
    def scalar(cls, level, z):
        """The complex number ``z`` as an element of M_level."""
        level = check_level(level, minimum=2)
        return cls(level, np.full(1 << (level - 1), complex(z)))

    @classmethod
    def basis(cls, level, p):
        """``eps_p`` in component form."""
        level = check_level(level, minimum=2)
        _check_index(level, p)
        comps = np.zeros(1 << (level - 1), dtype=np.complex128)
        comps[p] = 1.0
        return cls(level, comps)


class Multiperplex(IdempotentRep):
    """An element fixed by the total conjugation: every component is real."""

    __slots__ = ()

    def __init__(self, level, comps, tol=DEFAULT_TOL):
        arr = np.array(comps, dtype=np.complex128).reshape(-1)
        bound = zero_threshold(np.abs(arr), tol)
        bad = np.flatnonzero(np.abs(arr.imag) > bound)
        if bad.size:
            raise FlavorError(f"components {bad.tolist()} are not real; not multiperplex")
        super().__init__(level, arr.real)

    @property
    def values(self):
        """The real components as a float array."""
        return self.comps.real

    @classmethod
    def of(cls, r, tol=DEFAULT_TOL):
        if isinstance(r, Multiperplex):
            return r
        return cls(r.level, r.comps, tol)


def _coerce(value, level):
    if isinstance(value, IdempotentRep):
        return value
    if isinstance(value, (int, float, complex, np.number)) and not isinstance(value, bool):
        return IdempotentRep.scalar(level, value)
    return None


def _same_level(a, b):
    if a.level != b.level:
        raise LevelError(f"level mismatch: {a.level} vs {b.level}")
    return a.level


def _check_index(level, p):
    if not 0 <= p < 1 << (level - 1):
        raise IndexRangeError(f"idempotent index {p} out of range for level {level}")


def gamma(level, j):
    """``gamma_j = (1 + i_(j-1) i_j)/2`` as a level-``level`` number."""
    return _gamma(level, j, +1)


def gamma_prime(level, j):
    """``gamma'_j = (1 - i_(j-1) i_j)/2``."""
    return _gamma(level, j, -1)


def _gamma(level, j, sign):
    level = check_level(level, minimum=2)
    if not 2 <= j <= level:
        raise IndexRangeError(f"gamma_{j} undefined at level {level}; need 2 <= j <= {level}")
    coeffs = np.zeros(1 << level)
    coeffs[0] = 0.5
    coeffs[(1 << (j - 2)) | (1 << (j - 1))] = 0.5 * sign
    return Multicomplex(level, coeffs)


@lru_cache(maxsize=256)
def epsilon(level, p):
    """``eps_p`` in the standard basis, built as the product of gamma factors."""
    level = check_level(level, minimum=2)
    _check_index(level, p)
    out = one(level)
    for j in range(2, level + 1):
        factor = gamma_prime(level, j) if p >> (j - 2) & 1 else gamma(level, j)
        out = mul_standard(out, factor)
    return out


_scratch = threading.local()


def _scratch_buffer(size):
    """Per-thread temporary, reused across calls to spare fresh allocations."""
    buf = getattr(_scratch, "buf", None)
    if buf is None or buf.size < size:
        buf = np.empty(size, np.complex128)
        _scratch.buf = buf
    return buf[:size]


def _peel(z, tmp):
    """One forward level, in place: split on ``gamma_k`` / ``gamma'_k``.

    ``z`` has shape (blocks, width) over units ``i_2..i_k``. Writing
    ``eta = eta1 + eta2 i_k`` with ``eta1 = a + b i_(k-1)`` and
    ``eta2 = c + d i_(k-1)``, the gamma_k branch is
    ``eta1 - eta2 i_(k-1) = (a + d) + (b - c) i_(k-1)`` and the gamma'_k branch
    is ``(a - d) + (b + c) i_(k-1)``. When ``eta2`` is a plain complex number,
    ``i_(k-1)`` is ``i_1``, the scalar i.
    """
    blocks, width = z.shape
    if width == 2:
        t = tmp[:blocks]
        np.multiply(z[:, 1], 1j, out=t)
        np.add(z[:, 0], t, out=z[:, 1])
        z[:, 0] -= t
        return z.reshape(blocks * 2, 1)
    q = z.reshape(blocks, 2, 2, width // 4)
    a, b, c, d = q[:, 0, 0], q[:, 0, 1], q[:, 1, 0], q[:, 1, 1]
    t = tmp[: c.size].reshape(c.shape)
    np.copyto(t, c)
    np.subtract(a, d, out=c)
    a += d
    np.add(b, t, out=d)
    b -= t
    return z.reshape(blocks * 2, width // 2)


def _unpeel(z, tmp):
    """Inverse of :func:`_peel` up to a factor 2, in place."""
    pairs, width = z.shape
    blocks = pairs // 2
    if width == 1:
        o = z.reshape(blocks, 2)
        t = tmp[:blocks]
        np.subtract(o[:, 0], o[:, 1], out=t)
        o[:, 0] += o[:, 1]
        np.multiply(t, 1j, out=o[:, 1])
        return o
    q = z.reshape(blocks, 2, 2, width // 2)
    a, b, c, d = q[:, 0, 0], q[:, 0, 1], q[:, 1, 0], q[:, 1, 1]
    t = tmp[: c.size].reshape(c.shape)
    np.copyto(t, c)
    np.subtract(d, b, out=c)
    b += d
    np.subtract(a, t, out=d)
    a += t
    return z.reshape(blocks, width * 2)


def to_idempotent(a):
    """Standard basis -> canonical idempotent components, O(n 2**n).

    Peels one level at a time, from i_n down to i_2, in a single work buffer.
    """
    level = check_level(a.level, minimum=2)
    # pairs (x_A, x_(A+i1)) are the complex coefficient over units i_2..i_n
    z = a.coeffs.view(np.complex128).reshape(1, -1).copy()
    tmp = _scratch_buffer(z.size // 2)
    for _ in range(level - 1):
        z = _peel(z, tmp)
    return IdempotentRep._adopt(level, z.reshape(-1))


def from_idempotent(r):
    """Inverse of :func:`to_idempotent`."""
    level = r.level
    z = r.comps.reshape(-1, 1).copy()
    tmp = _scratch_buffer(z.size // 2)
    for _ in range(level - 1):
        z = _unpeel(z, tmp)
    # each level doubled the result; the power of two rescales exactly
    z = z.reshape(-1)
    z *= 0.5 ** (level - 1)
    return Multicomplex._adopt(level, z.view(np.float64))


def _rep(x):
    return x if isinstance(x, IdempotentRep) else to_idempotent(x)


def project(r, p):
    """The complex component of ``r`` on ``eps_p``; a ring homomorphism onto C."""
    r = _rep(r)
    _check_index(r.level, p)
    return complex(r.comps[p])


def add_fast(a, b):
    return IdempotentRep(_same_level(a, b), a.comps + b.comps)


def sub_fast(a, b):
    return IdempotentRep(_same_level(a, b), a.comps - b.comps)


def mul_fast(a, b):
    return IdempotentRep(_same_level(a, b), a.comps * b.comps)


def vanishing_components(r, tol=DEFAULT_TOL):
    """0-based indices of components whose modulus is below the zero threshold."""
    mod = np.abs(_rep(r).comps)
    return [int(p) for p in np.flatnonzero(mod <= zero_threshold(mod, tol))]


def is_zero_divisor(r, tol=DEFAULT_TOL, include_zero=False):
    """True when some component vanishes.

    Zero itself is reported only with ``include_zero=True``; with it the
    predicate is membership in the null cone.
    """
    r = _rep(r)
    dead = vanishing_components(r, tol)
    if len(dead) == len(r):
        return include_zero
    return bool(dead)


def invert(r, tol=DEFAULT_TOL):
    """Componentwise reciprocal. Raises :class:`NullConeError` on zero divisors."""
    r = _rep(r)
    dead = vanishing_components(r, tol)
    if dead:
        raise NullConeError(
            f"not invertible: components {dead} vanish (0-based)", dead
        )
    return IdempotentRep(r.level, 1.0 / r.comps)


def lambda_conjugate(r):
    """The total conjugation; each eps_p is fixed, so components are conjugated."""
    r = _rep(r)
    return IdempotentRep(r.level, np.conj(r.comps))


def conjugate_idem(r, m):
    """Any composition of principal conjugations, via the standard basis."""
    r = _rep(r)
    return to_idempotent(conjugate(from_idempotent(r), m))


def enumerate_conjugate_orbit(level, tol=DEFAULT_TOL):
    """Distinct images of ``gamma_2 ... gamma_n`` under all 2**n conjugations.

    Works entirely in the standard basis, so it is independent of the
    transform. Returns standard-basis numbers in first-seen order.
    """
    level = check_level(level, minimum=2)
    base = one(level)
    for j in range(2, level + 1):
        base = mul_standard(base, gamma(level, j))
    seen = []
    for mask in range(1 << level):
        img = conjugate(base, ConjugationMask(level, mask))
        if not any(np.max(np.abs(img.coeffs - s.coeffs)) <= tol for s in seen):
            seen.append(img)
    return seen


def is_multiperplex(r, tol=DEFAULT_TOL):
    r = _rep(r)
    bound = zero_threshold(np.abs(r.comps), tol)
    return bool(np.all(np.abs(r.comps.imag) <= bound))


def split_perplex(r):
    """``r = d1 + i d2`` with both parts multiperplex."""
    r = _rep(r)
    return Multiperplex(r.level, r.comps.real), Multiperplex(r.level, r.comps.imag)


def leq(a, b, tol=DEFAULT_TOL):
    """Componentwise (product) order on multiperplex numbers."""
    _same_level(a, b)
    for x in (a, b):
        if not is_multiperplex(x, tol):
            raise FlavorError("order is only defined on multiperplex numbers")
    return bool(np.all(a.comps.real <= b.comps.real))


def mnorm(r):
    """Multiperplex-valued norm: the componentwise modulus."""
    r = _rep(r)
    return Multiperplex(r.level, np.abs(r.comps))
