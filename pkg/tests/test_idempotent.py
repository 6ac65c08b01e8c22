import numpy as np
import pytest

from multicomplex.core import ConjugationMask, Multicomplex, conjugate, mul_standard, one, real, unit, zero
from multicomplex.errors import FlavorError, IndexRangeError, LevelError, NullConeError
from multicomplex.idempotent import (
    IdempotentRep,
    Multiperplex,
    conjugate_idem,
    enumerate_conjugate_orbit,
    epsilon,
    from_idempotent,
    gamma,
    gamma_prime,
    invert,
    is_multiperplex,
    is_zero_divisor,
    lambda_conjugate,
    leq,
    mnorm,
    mul_fast,
    project,
    split_perplex,
    to_idempotent,
    vanishing_components,
)
from oracles import dyadic_number, random_number, rel_err


def test_known_transforms_at_level_two():
    assert np.allclose(to_idempotent(unit(2, [2])).comps, [-1j, 1j])
    assert np.allclose(to_idempotent(unit(2, [1])).comps, [1j, 1j])
    assert np.allclose(to_idempotent(gamma(2, 2)).comps, [1, 0])
    assert np.allclose(to_idempotent(gamma_prime(2, 2)).comps, [0, 1])
    assert np.allclose(to_idempotent(one(2)).comps, [1, 1])


def test_top_unit_splits_on_gamma_pair():
    # i_n = -i_(n-1) (gamma_n - gamma'_n)
    lhs = unit(3, [3])
    rhs = -mul_standard(unit(3, [2]), gamma(3, 3) - gamma_prime(3, 3))
    assert lhs == rhs


@pytest.mark.parametrize("level", range(2, 7))
def test_epsilon_transforms_to_unit_vectors(level):
    for p in range(1 << (level - 1)):
        assert to_idempotent(epsilon(level, p)) == IdempotentRep.basis(level, p)


@pytest.mark.parametrize("level", range(2, 9))
def test_roundtrip(rng, level):
    for _ in range(100):
        x = random_number(rng, level)
        back = from_idempotent(to_idempotent(x))
        assert rel_err(back.coeffs, x.coeffs) <= 1e-12


@pytest.mark.parametrize("level", range(2, 6))
def test_fast_product_matches_standard(rng, level):
    for _ in range(100):
        a, b = random_number(rng, level), random_number(rng, level)
        fast = mul_fast(to_idempotent(a), to_idempotent(b))
        slow = to_idempotent(mul_standard(a, b))
        assert rel_err(fast.comps, slow.comps) <= 1e-10


@pytest.mark.parametrize("level", range(2, 5))
def test_projection_is_a_ring_homomorphism(rng, level):
    a, b = random_number(rng, level), random_number(rng, level)
    for p in range(1 << (level - 1)):
        assert abs(project(a + b, p) - project(a, p) - project(b, p)) <= 1e-10
        assert abs(project(mul_standard(a, b), p) - project(a, p) * project(b, p)) <= 1e-10


@pytest.mark.parametrize("level", range(2, 7))
def test_idempotent_identities_exact(level):
    size = 1 << (level - 1)
    eps = [epsilon(level, p) for p in range(size)]
    total = zero(level)
    for p in range(size):
        total = total + eps[p]
        assert conjugate(eps[p], ConjugationMask.full(level)) == eps[p]
        for q in range(size):
            assert mul_standard(eps[p], eps[q]) == (eps[q] if p == q else zero(level))
    assert total == one(level)


def test_gamma_pair_annihilates():
    for level in range(2, 6):
        for j in range(2, level + 1):
            assert mul_standard(gamma(level, j), gamma_prime(level, j)) == zero(level)
            assert mul_standard(gamma(level, j), gamma(level, j)) == gamma(level, j)


@pytest.mark.parametrize("level", range(2, 7))
def test_orbit_is_the_idempotent_basis(level):
    orbit = enumerate_conjugate_orbit(level)
    assert len(orbit) == 1 << (level - 1)
    assert set(orbit) == {epsilon(level, p) for p in range(1 << (level - 1))}


def test_invert_and_null_cone(rng):
    for level in (2, 3, 4):
        x = random_number(rng, level)
        r = to_idempotent(x)
        prod = from_idempotent(r * invert(r))
        assert rel_err(prod.coeffs, one(level).coeffs) <= 1e-10
    r = IdempotentRep(3, [1, 0, 2j, 0])
    with pytest.raises(NullConeError) as info:
        invert(r)
    assert info.value.indices == (1, 3)
    assert vanishing_components(r) == [1, 3]


def test_division_operator():
    a = IdempotentRep(2, [2, 4j])
    b = IdempotentRep(2, [1, 2])
    assert a / b == IdempotentRep(2, [2, 2j])
    with pytest.raises(NullConeError):
        a / IdempotentRep(2, [1, 0])


def test_zero_divisor_predicate():
    assert is_zero_divisor(IdempotentRep(2, [1, 0]))
    assert not is_zero_divisor(IdempotentRep(2, [1, 1e-3]))
    assert not is_zero_divisor(IdempotentRep(2, [0, 0]))
    assert is_zero_divisor(IdempotentRep(2, [0, 0]), include_zero=True)
    # below tol relative to the largest modulus
    assert is_zero_divisor(IdempotentRep(2, [1e6, 1e-9]))


def test_zero_divisor_law_on_supports(rng):
    level = 3
    for _ in range(100):
        sa = rng.random(4) < 0.5
        sb = rng.random(4) < 0.5
        a = IdempotentRep(level, sa * (1 + rng.random(4)))
        b = IdempotentRep(level, sb * (1 + rng.random(4)))
        prod = a * b
        assert np.all((np.abs(prod.comps) == 0) == ~(sa & sb))
        if sa.any() and sb.any():
            assert (prod == IdempotentRep(level, np.zeros(4))) == (not (sa & sb).any())


def test_gamma_products_are_zero_divisors():
    assert is_zero_divisor(gamma(3, 2))
    assert is_zero_divisor(mul_standard(gamma(3, 2), gamma(3, 3)))


def test_lambda_is_componentwise_conjugation(rng):
    for level in (2, 3, 4):
        x = random_number(rng, level)
        via_standard = to_idempotent(conjugate(x, ConjugationMask.full(level)))
        assert rel_err(lambda_conjugate(x).comps, via_standard.comps) <= 1e-12
        assert rel_err(conjugate_idem(x, (1 << level) - 1).comps, via_standard.comps) <= 1e-12


def test_conjugations_permute_the_idempotents():
    level = 3
    for mask in range(8):
        images = {conjugate(epsilon(level, p), mask) for p in range(4)}
        assert images == {epsilon(level, p) for p in range(4)}


def test_multiperplex_classification(rng):
    x = random_number(rng, 3)
    d = mul_standard(conjugate(x, ConjugationMask.full(3)), x)
    assert is_multiperplex(d)
    assert not is_multiperplex(unit(3, [1]))
    d1, d2 = split_perplex(x)
    assert rel_err((d1 + d2 * 1j).comps, to_idempotent(x).comps) <= 1e-14
    with pytest.raises(FlavorError):
        Multiperplex(2, [1, 1j])


def test_norm_properties(rng):
    for level in (2, 3, 4, 5):
        for _ in range(200):
            a, b = random_number(rng, level), random_number(rng, level)
            na, nb = mnorm(a), mnorm(b)
            assert np.all(na.values >= 0)
            assert leq(mnorm(to_idempotent(a) + to_idempotent(b)), na + nb)
            lam = mnorm(lambda_conjugate(a) * to_idempotent(a))
            assert rel_err(lam.comps, (na * na).comps) <= 1e-10


def test_norm_of_known_value():
    r = IdempotentRep(2, [3, 4j])
    assert mnorm(r) == Multiperplex(2, [3, 4])


def test_order_rejects_non_multiperplex():
    with pytest.raises(FlavorError):
        leq(IdempotentRep(2, [1j, 0]), IdempotentRep(2, [1, 1]))
    assert leq(Multiperplex(2, [1, 2]), Multiperplex(2, [1, 3]))
    assert not leq(Multiperplex(2, [1, 2]), Multiperplex(2, [3, 1]))


def test_scalar_arithmetic():
    r = IdempotentRep(2, [1, 2])
    assert r + 1 == IdempotentRep(2, [2, 3])
    assert 2 * r == IdempotentRep(2, [2, 4])
    assert 1 - r == IdempotentRep(2, [0, -1])
    assert to_idempotent(real(2, 5.0)) == IdempotentRep.scalar(2, 5.0)


def test_dyadic_roundtrip_is_exact(rng):
    for level in range(2, 7):
        x = dyadic_number(rng, level)
        assert from_idempotent(to_idempotent(x)) == x


def test_index_and_level_errors():
    with pytest.raises(IndexRangeError):
        epsilon(2, 2)
    with pytest.raises(IndexRangeError):
        gamma(3, 4)
    with pytest.raises(LevelError):
        to_idempotent(Multicomplex(1, [1, 0]))
    with pytest.raises(LevelError):
        IdempotentRep(3, [1, 2])
    with pytest.raises(LevelError):
        IdempotentRep(2, [1, 2]) + IdempotentRep(3, [1, 2, 3, 4])
