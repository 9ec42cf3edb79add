"""Cyclotomic integer arithmetic and the relative norm equation solver."""

from spinorkit.exactfield import Scalar
from spinorkit.normsolve import (
    s2_totally_positive,
    solve_norm,
    z8_abs_norm,
    z8_conj,
    z8_divmod,
    z8_gcd,
    z8_is_zero,
    z8_mul,
    z8_relative_norm,
    z8_sub,
    z8_to_scalar,
)
from spinorkit.prng import SplitMix64, random_scalar


def random_z8(rng, bound=9):
    return tuple(rng.randint(-bound, bound) for _ in range(4))


def test_z8_ring_laws():
    rng = SplitMix64(1)
    for _ in range(300):
        a, b, c = (random_z8(rng) for _ in range(3))
        assert z8_mul(a, z8_mul(b, c)) == z8_mul(z8_mul(a, b), c)
        assert z8_mul(a, b) == z8_mul(b, a)
        assert z8_conj(z8_conj(a)) == a
        assert z8_conj(z8_mul(a, b)) == z8_mul(z8_conj(a), z8_conj(b))
        # absolute norm is multiplicative
        assert z8_abs_norm(z8_mul(a, b)) == z8_abs_norm(a) * z8_abs_norm(b)


def test_z8_division_is_euclidean():
    rng = SplitMix64(2)
    for _ in range(200):
        a = random_z8(rng)
        b = random_z8(rng, 5)
        if z8_is_zero(b):
            continue
        q, r = z8_divmod(a, b)
        assert z8_sub(a, z8_mul(q, b)) == r
        assert abs(z8_abs_norm(r)) < abs(z8_abs_norm(b))


def test_z8_gcd_divides_both():
    rng = SplitMix64(3)
    for _ in range(60):
        g0 = random_z8(rng, 3)
        a = z8_mul(g0, random_z8(rng, 3))
        b = z8_mul(g0, random_z8(rng, 3))
        if z8_is_zero(a) and z8_is_zero(b):
            continue
        g = z8_gcd(a, b)
        for x in (a, b):
            _, r = z8_divmod(x, g)
            assert z8_is_zero(r)
        # g0 divides the gcd
        _, r = z8_divmod(g, g0) if not z8_is_zero(g0) else (None, (0, 0, 0, 0))
        assert z8_is_zero(r)


def test_relative_norm_is_totally_positive():
    rng = SplitMix64(4)
    for _ in range(100):
        a = random_z8(rng)
        if z8_is_zero(a):
            continue
        assert s2_totally_positive(z8_relative_norm(a))


def test_solve_norm_round_trip():
    rng = SplitMix64(5)
    solved = 0
    for _ in range(150):
        z = random_scalar(rng)
        if z.is_zero():
            continue
        target = z * z.conj()
        sigma = solve_norm(target)
        assert sigma is not None
        assert sigma * sigma.conj() == target
        solved += 1
    assert solved > 100


def test_solve_norm_rejects_non_norms():
    # totally positive non-norm, negative, and non-totally-positive targets
    assert solve_norm(Scalar(3, 0, 1, 0)) is None
    assert solve_norm(Scalar(7)) is None
    assert solve_norm(Scalar(-2)) is None
    assert solve_norm(Scalar(0, 0, 1, 0)) is None


def test_z8_to_scalar_basis():
    assert z8_to_scalar((1, 0, 0, 0)) == Scalar(1)
    assert z8_to_scalar((0, 0, 1, 0)) == Scalar.i()
    assert z8_to_scalar((0, 1, 0, -1)) == Scalar.sqrt2()
    zeta = z8_to_scalar((0, 1, 0, 0))
    assert zeta * zeta == Scalar.i()
