import numpy as np
import pytest

from multicomplex.errors import NotSelfAdjointError, NullConeError
from multicomplex.hilbert import (
    Ket,
    apply_operator,
    complex_product,
    hermitian_eig_slice,
    is_null_cone_ket,
    is_self_adjoint,
    ket_project,
    normalize,
    null_cone_components,
    outer_product,
    riesz_vector,
    scalar_product,
    spectral_decompose,
)
from multicomplex.idempotent import IdempotentRep, gamma, gamma_prime, is_multiperplex, to_idempotent
from multicomplex.linalg import McMatrix, invert_matrix
from oracles import random_hermitian, random_ket, random_matrix, random_number, rel_err


def rand_scalar(rng, level):
    return to_idempotent(random_number(rng, level))


@pytest.mark.parametrize("level,m", [(2, 3), (3, 5), (4, 6)])
def test_scalar_product_axioms(rng, level, m):
    for _ in range(50):
        u, v, w = (random_ket(rng, level, m) for _ in range(3))
        a, b = rand_scalar(rng, level), rand_scalar(rng, level)
        # linear in the second slot
        lhs = scalar_product(u, v.scaled(a) + w.scaled(b))
        rhs = a * scalar_product(u, v) + b * scalar_product(u, w)
        assert rel_err(lhs.comps, rhs.comps) <= 1e-10
        # Lambda-Hermitian
        swapped = scalar_product(v, u)
        assert rel_err(scalar_product(u, v).comps, np.conj(swapped.comps)) <= 1e-10
        # definite
        self_prod = scalar_product(u, u)
        assert is_multiperplex(self_prod) and np.all(self_prod.comps.real > 0)
    zero = Ket.zeros(level, m)
    assert scalar_product(zero, zero) == IdempotentRep(level, np.zeros(1 << (level - 1)))


def test_null_cone_kets(rng):
    v = random_ket(rng, 3, 4)
    assert not is_null_cone_ket(v)
    assert not any(abs(z) <= 1e-12 for z in scalar_product(v, v).comps)
    slices = np.array(v.slices)
    slices[1] = 0
    w = Ket(3, slices)
    assert null_cone_components(w) == [1]
    assert is_null_cone_ket(w)
    assert abs(scalar_product(w, w).comps[1]) == 0
    with pytest.raises(NullConeError) as info:
        normalize(w)
    assert info.value.indices == (1,)


def test_normalize(rng):
    v = normalize(random_ket(rng, 3, 4))
    assert rel_err(scalar_product(v, v).comps, np.ones(4)) <= 1e-12


def test_direct_sum_gram_is_identity():
    level, m = 3, 3
    size = 1 << (level - 1)
    kets = []
    for p in range(size):
        for l in range(m):
            slices = np.zeros((size, m), dtype=complex)
            slices[p, l] = 1.0
            kets.append(Ket(level, slices))
    gram = np.array([[complex_product(a, b) for b in kets] for a in kets])
    assert np.array_equal(gram, np.eye(size * m))


def test_riesz_representation(rng):
    level, m = 3, 4
    for _ in range(20):
        values = [rand_scalar(rng, level) for _ in range(m)]
        psi = riesz_vector(values)
        for _ in range(10):
            phi = random_ket(rng, level, m)
            direct = sum((values[l] * phi.entry(l) for l in range(m)), IdempotentRep.scalar(level, 0))
            assert rel_err(scalar_product(psi, phi).comps, direct.comps) <= 1e-10


def test_basis_change_keeps_slices_spanning(rng):
    level, m = 3, 4
    _, s = random_matrix(rng, level, m)
    assert np.all([np.linalg.matrix_rank(sl) == m for sl in s.slices])
    for p in range(1 << (level - 1)):
        cols = np.array([ket_project(apply_operator(s, Ket.basis(level, m, l)), p) for l in range(m)])
        assert np.linalg.matrix_rank(cols) == m


def test_null_cone_slices_survive_basis_change(rng):
    level, m = 3, 3
    _, s = random_matrix(rng, level, m)
    v = random_ket(rng, level, m)
    slices = np.array(v.slices)
    slices[3] = 0
    v = Ket(level, slices)
    assert null_cone_components(apply_operator(s, v)) == [3]
    assert null_cone_components(apply_operator(invert_matrix(s), v)) == [3]


def test_commutation_with_ket_projector(rng):
    level, m = 3, 3
    c = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    a = McMatrix(level, np.broadcast_to(c, (4, m, m)))
    v = random_ket(rng, level, m)
    for p in range(4):
        assert np.allclose(ket_project(apply_operator(a, v), p), c @ ket_project(v, p))


def test_jacobi_against_numpy(rng):
    for m in range(1, 7):
        b = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        h = b + b.conj().T
        vals, vecs = hermitian_eig_slice(h)
        assert np.allclose(vals, np.linalg.eigvalsh(h), atol=1e-10)
        assert np.allclose(vecs.conj().T @ vecs, np.eye(m), atol=1e-12)
        assert np.allclose(h @ vecs, vecs * vals, atol=1e-10)
        for k in range(m):
            first = vecs[np.flatnonzero(np.abs(vecs[:, k]) > 1e-12)[0], k]
            assert abs(first.imag) <= 1e-15 and first.real > 0


def test_jacobi_known_cases():
    vals, vecs = hermitian_eig_slice(np.diag([1.0, 0.0]))
    assert vals.tolist() == [0.0, 1.0]
    assert np.array_equal(vecs, [[0, 1], [1, 0]])
    vals, _ = hermitian_eig_slice(np.array([[0, -1j], [1j, 0]]))
    assert np.allclose(vals, [-1, 1])


def test_degenerate_slices_are_ordered_deterministically():
    vals, vecs = hermitian_eig_slice(np.eye(3))
    assert vals.tolist() == [1.0, 1.0, 1.0]
    assert np.array_equal(vecs, np.eye(3))


@pytest.mark.parametrize("level,m", [(2, 2), (3, 4), (4, 3)])
def test_spectral_decomposition(rng, level, m):
    for _ in range(20):
        a = random_hermitian(rng, level, m)
        result = spectral_decompose(a)
        assert result.residual <= 1e-9
        assert np.max(np.abs(result.reconstruct().slices - a.slices)) <= 1e-9
        for lam in result.eigenvalues:
            assert is_multiperplex(lam, 1e-10)
        for i, psi in enumerate(result.eigenkets):
            for j, phi in enumerate(result.eigenkets):
                expected = np.ones(1 << (level - 1)) if i == j else 0
                assert np.allclose(scalar_product(psi, phi).comps, expected, atol=1e-9)
            image = apply_operator(a, psi)
            assert np.allclose(image.slices, psi.scaled(result.eigenvalues[i]).slices, atol=1e-9)


def test_eigenkets_orthogonal_when_gap_outside_null_cone(rng):
    a = random_hermitian(rng, 3, 4)
    result = spectral_decompose(a)
    for i in range(4):
        for j in range(4):
            gap = result.eigenvalues[i] - result.eigenvalues[j]
            if np.all(np.abs(gap.comps) > 1e-10):
                psi, phi = result.eigenkets[i], result.eigenkets[j]
                assert np.max(np.abs(scalar_product(psi, phi).comps)) <= 1e-10


def test_idempotent_diagonal_example():
    a = McMatrix.diag(2, [gamma(2, 2), gamma_prime(2, 2)])
    result = spectral_decompose(a)
    assert [lam.comps.tolist() for lam in result.eigenvalues] == [[0, 0], [1, 1]]
    # (0, eps1 e2 + eps2 e1) and (1, eps1 e1 + eps2 e2)
    assert np.array_equal(result.eigenkets[0].slices, [[0, 1], [1, 0]])
    assert np.array_equal(result.eigenkets[1].slices, [[1, 0], [0, 1]])
    assert result.residual == 0


def test_not_self_adjoint(rng):
    _, a = random_matrix(rng, 2, 3)
    assert not is_self_adjoint(a)
    with pytest.raises(NotSelfAdjointError):
        spectral_decompose(a)


def test_outer_product_acts_as_projector(rng):
    psi = normalize(random_ket(rng, 3, 3))
    proj = outer_product(psi, psi)
    v = random_ket(rng, 3, 3)
    expected = psi.scaled(scalar_product(psi, v))
    assert np.allclose(apply_operator(proj, v).slices, expected.slices)
    assert np.allclose((proj @ proj).slices, proj.slices)
