"""Exact solver for the relative norm equation x * conj(x) = m over Q(i, sqrt2).

Factoring a nonzero isotropic Hermitian element as +/- u (x) ubar requires a
field element whose complex-conjugation norm equals a given totally positive
element of Q(sqrt2).  Q(i, sqrt2) is the 8th cyclotomic field; its ring of
integers Z[zeta8] is a norm-Euclidean PID, so the equation is solved by
factoring the target over Z[sqrt2], lifting each prime through the relative
quadratic extension (via Euclidean gcds with a square root of -1 in the
residue field), and fixing the leftover unit.  Returns None when the equation
has no solution in the field; that verdict is exact, not a search cutoff.

Elements of Z[zeta8] are 4-tuples of integers in the basis (1, z, z^2, z^3)
with z^4 = -1; elements of Z[sqrt2] are integer pairs (p, q) = p + q*sqrt2.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Optional, Tuple

from .exactfield import Scalar

Z8 = Tuple[int, int, int, int]
S2 = Tuple[int, int]

Z8_ONE: Z8 = (1, 0, 0, 0)
Z8_I: Z8 = (0, 0, 1, 0)  # i = z^2
Z8_ZETA_PLUS_ONE: Z8 = (1, 1, 0, 0)  # 1 + z; relative norm 2 + sqrt2
S2_ONE: S2 = (1, 0)
S2_SQRT2: S2 = (0, 1)
S2_FUND: S2 = (1, 1)  # 1 + sqrt2, the fundamental unit (norm -1)
S2_FUND_INV: S2 = (-1, 1)  # sqrt2 - 1
S2_FUND_SQ: S2 = (3, 2)  # 3 + 2*sqrt2, generator of the totally positive units
S2_FUND_SQ_INV: S2 = (3, -2)


# -- Z[zeta8] arithmetic -------------------------------------------------------


def z8_add(a: Z8, b: Z8) -> Z8:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def z8_sub(a: Z8, b: Z8) -> Z8:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])


def z8_neg(a: Z8) -> Z8:
    return (-a[0], -a[1], -a[2], -a[3])


def z8_mul(a: Z8, b: Z8) -> Z8:
    out = [0, 0, 0, 0]
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if not bj:
                continue
            k = i + j
            if k < 4:
                out[k] += ai * bj
            else:
                out[k - 4] -= ai * bj  # z^4 = -1
    return tuple(out)


def z8_pow(a: Z8, n: int) -> Z8:
    out = Z8_ONE
    base = a
    while n:
        if n & 1:
            out = z8_mul(out, base)
        base = z8_mul(base, base)
        n >>= 1
    return out


def z8_conj(a: Z8) -> Z8:
    """Complex conjugation: z -> z^-1 = -z^3."""
    return (a[0], -a[3], -a[2], -a[1])


def z8_galois(a: Z8) -> Z8:
    """The automorphism sqrt2 -> -sqrt2 (z -> z^5 = -z), fixing i."""
    return (a[0], -a[1], a[2], -a[3])


def z8_is_zero(a: Z8) -> bool:
    return a == (0, 0, 0, 0)


def z8_relative_norm(a: Z8) -> S2:
    """a * conj(a), an element of Z[sqrt2] (totally nonnegative)."""
    n = z8_mul(a, z8_conj(a))
    p, q = s2_from_z8(n)
    return (p, q)


def z8_abs_norm(a: Z8) -> int:
    """Product of all four Galois conjugates; the absolute norm to Z."""
    rel = z8_relative_norm(a)
    return rel[0] * rel[0] - 2 * rel[1] * rel[1]


def s2_from_z8(a: Z8) -> S2:
    """Interpret an element known to lie in Z[sqrt2]; sqrt2 = z - z^3."""
    if a[2] != 0 or a[1] != -a[3]:
        raise ValueError(f"{a} is not in Z[sqrt2]")
    return (a[0], a[1])


def z8_from_s2(m: S2) -> Z8:
    return (m[0], m[1], 0, -m[1])


def z8_from_int(n: int) -> Z8:
    return (n, 0, 0, 0)


def _round_half_up(x: Fraction) -> int:
    return (x + Fraction(1, 2)).__floor__()


def z8_divmod(a: Z8, b: Z8) -> Tuple[Z8, Z8]:
    """Euclidean division: remainder has strictly smaller absolute norm.

    Nearest-integer rounding in the power basis almost always suffices in this
    norm-Euclidean field; a small offset search guarantees the bound.
    """
    nb = z8_abs_norm(b)
    if nb == 0:
        raise ZeroDivisionError("division by zero in Z[zeta8]")
    num = z8_mul(a, z8_mul(z8_conj(b), z8_mul(z8_galois(b), z8_galois(z8_conj(b)))))
    coords = [Fraction(x, nb) for x in num]
    base = [_round_half_up(x) for x in coords]
    best = None
    for off0 in (0, -1, 1):
        for off1 in (0, -1, 1):
            for off2 in (0, -1, 1):
                for off3 in (0, -1, 1):
                    q = (base[0] + off0, base[1] + off1, base[2] + off2, base[3] + off3)
                    r = z8_sub(a, z8_mul(q, b))
                    nr = abs(z8_abs_norm(r))
                    if best is None or nr < best[0]:
                        best = (nr, q, r)
                    if nr == 0:
                        return best[1], best[2]
    nr, q, r = best
    if nr >= abs(nb):
        raise ArithmeticError("Euclidean division failed to reduce the norm")
    return q, r


def z8_gcd(a: Z8, b: Z8) -> Z8:
    while not z8_is_zero(b):
        _, r = z8_divmod(a, b)
        a, b = b, r
    return a


def z8_divides_exactly(a: Z8, b: Z8) -> Optional[Z8]:
    """a / b when exact, else None."""
    q, r = z8_divmod(a, b)
    return q if z8_is_zero(r) else None


# -- Z[sqrt2] arithmetic -------------------------------------------------------


def s2_mul(a: S2, b: S2) -> S2:
    return (a[0] * b[0] + 2 * a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def s2_norm(a: S2) -> int:
    return a[0] * a[0] - 2 * a[1] * a[1]


def s2_sign(a: S2) -> int:
    """Exact sign of p + q*sqrt2 in the real embedding sqrt2 > 0."""
    p, q = a
    if p == 0 and q == 0:
        return 0
    if p >= 0 and q >= 0:
        return 1
    if p <= 0 and q <= 0:
        return -1
    if p > 0:
        return 1 if p * p > 2 * q * q else -1
    return 1 if p * p < 2 * q * q else -1


def s2_conj(a: S2) -> S2:
    return (a[0], -a[1])


def s2_totally_positive(a: S2) -> bool:
    return s2_sign(a) > 0 and s2_sign(s2_conj(a)) > 0


def s2_divides_exactly(a: S2, b: S2) -> Optional[S2]:
    nb = s2_norm(b)
    if nb == 0:
        raise ZeroDivisionError
    num = s2_mul(a, s2_conj(b))
    if num[0] % nb or num[1] % nb:
        return None
    return (num[0] // nb, num[1] // nb)


def s2_divmod(a: S2, b: S2) -> Tuple[S2, S2]:
    nb = s2_norm(b)
    num = s2_mul(a, s2_conj(b))
    q = (_round_half_up(Fraction(num[0], nb)), _round_half_up(Fraction(num[1], nb)))
    best = None
    for off0 in (0, -1, 1):
        for off1 in (0, -1, 1):
            qq = (q[0] + off0, q[1] + off1)
            r = (a[0] - s2_mul(qq, b)[0], a[1] - s2_mul(qq, b)[1])
            nr = abs(s2_norm(r))
            if best is None or nr < best[0]:
                best = (nr, qq, r)
    nr, qq, r = best
    if nr >= abs(nb):
        raise ArithmeticError("Euclidean division failed in Z[sqrt2]")
    return qq, r


def s2_gcd(a: S2, b: S2) -> S2:
    while b != (0, 0):
        _, r = s2_divmod(a, b)
        a, b = b, r
    return a


def _s2_unit_log(u: S2) -> Optional[Tuple[int, int]]:
    """Write a unit as sign * (1 + sqrt2)^k; None if u is not a unit."""
    if abs(s2_norm(u)) != 1:
        return None
    k = 0
    cur = u
    while cur not in ((1, 0), (-1, 0)):
        # |cur| > 1 in the real embedding: peel a fundamental unit off
        p, q = cur
        big = s2_sign((p - 1, q)) > 0 or s2_sign((p + 1, q)) < 0  # |p + q sqrt2| > 1
        if big:
            cur = s2_mul(cur, S2_FUND_INV)
            k += 1
        else:
            cur = s2_mul(cur, S2_FUND)
            k -= 1
        if abs(k) > 4096:
            raise ArithmeticError("unit logarithm failed to terminate")
    sign = 1 if cur == (1, 0) else -1
    return sign, k


def _normalize_totally_positive(pi: S2) -> Optional[S2]:
    """Totally positive associate of pi, when one exists (norm(pi) > 0)."""
    if s2_norm(pi) < 0:
        pi = s2_mul(pi, S2_FUND)  # fundamental unit has norm -1
    if s2_norm(pi) < 0:
        return None
    if s2_sign(pi) < 0:
        pi = (-pi[0], -pi[1])
    return pi if s2_totally_positive(pi) else None


def _sqrt2_primes_above(p: int) -> list:
    """The primes of Z[sqrt2] above a rational prime, as a deterministic list."""
    from sympy.ntheory import sqrt_mod

    if p == 2:
        return [S2_SQRT2]
    if p % 8 in (1, 7):
        t = int(sqrt_mod(2, p))
        pi = s2_gcd((p, 0), (t, -1))
        return [pi, s2_conj(pi)]
    return [(p, 0)]


def _lift_prime(pi: S2, p: int) -> Optional[Z8]:
    """An element sigma of Z[zeta8] with sigma * conj(sigma) = pi exactly.

    pi must be a totally positive prime of Z[sqrt2] lying over the odd
    rational prime p, with -1 a square in the residue field.
    """
    from sympy.ntheory import sqrt_mod

    if p % 4 == 1:
        r: Z8 = z8_from_int(int(sqrt_mod(p - 1, p)))
    else:
        # p = 3 mod 8: the residue field is F_{p^2}; -1/2 is a square mod p
        inv2 = pow(2, -1, p)
        b = int(sqrt_mod((-inv2) % p, p))
        r = z8_from_s2((0, b))
    sigma = z8_gcd(z8_from_s2(pi), z8_sub(r, Z8_I))
    rel = z8_relative_norm(sigma)
    ratio = s2_divides_exactly(rel, pi)
    if ratio is None:
        return None
    log = _s2_unit_log(ratio)
    if log is None or log[0] != 1 or log[1] % 2 != 0:
        return None
    t = log[1] // 2
    unit = S2_FUND_INV if t > 0 else S2_FUND
    for _ in range(abs(t)):
        sigma = z8_mul(sigma, z8_from_s2(unit))
    return sigma


def solve_norm_s2(m: S2) -> Optional[Z8]:
    """x in Z[zeta8] with x * conj(x) = m, or None when no solution exists."""
    from sympy import factorint

    if m == (0, 0):
        return (0, 0, 0, 0)
    if not s2_totally_positive(m):
        return None
    big_norm = s2_norm(m)
    x = Z8_ONE
    remaining = m
    for p in sorted(int(prime) for prime in factorint(big_norm)):
        for pi in _sqrt2_primes_above(p):
            exponent = 0
            while True:
                quotient = s2_divides_exactly(remaining, pi)
                if quotient is None:
                    break
                remaining = quotient
                exponent += 1
            if exponent == 0:
                continue
            if p == 2:
                x = z8_mul(x, z8_pow(Z8_ZETA_PLUS_ONE, exponent))
                continue
            pi_pos = _normalize_totally_positive(pi)
            if pi_pos is None:
                return None
            if p % 8 == 7:
                # relatively inert: -1 is not a square mod p
                if exponent % 2:
                    return None
                x = z8_mul(x, z8_pow(z8_from_s2(pi_pos), exponent // 2))
            else:
                sigma = _lift_prime(pi_pos, p)
                if sigma is None:
                    return None
                x = z8_mul(x, z8_pow(sigma, exponent))
    # remaining is now a unit; fold it together with the unit debt of the lifts
    rel = z8_relative_norm(x)
    residual = s2_divides_exactly(m, rel)
    if residual is None:
        return None
    log = _s2_unit_log(residual)
    if log is None or log[0] != 1 or log[1] % 2 != 0:
        return None
    k = log[1] // 2
    unit = S2_FUND if k > 0 else S2_FUND_INV
    for _ in range(abs(k)):
        x = z8_mul(x, z8_from_s2(unit))
    if z8_relative_norm(x) != m:
        raise ArithmeticError("norm equation postcondition failed")
    return x


# -- field-level interface -----------------------------------------------------


def z8_to_scalar(a: Z8, denominator: int = 1) -> Scalar:
    c0, c1, c2, c3 = a
    return Scalar(
        Fraction(c0, denominator),
        Fraction(c2, denominator),
        Fraction(c1 - c3, 2 * denominator),
        Fraction(c1 + c3, 2 * denominator),
    )


def solve_norm(w: Scalar) -> Optional[Scalar]:
    """sigma in Q(i, sqrt2) with sigma * conj(sigma) = w, or None.

    w must be a real element (a + c*sqrt2).  Solutions exist exactly when w is
    a relative norm; totally positive is necessary but not sufficient.
    """
    if not w.is_real():
        raise ValueError("norm targets must be real elements of Q(sqrt2)")
    if w.is_zero():
        return Scalar.zero()
    den = lcm(int(w.a.denominator), int(w.c.denominator))
    p = w.a * den * den
    q = w.c * den * den
    assert p.denominator == 1 and q.denominator == 1
    x = solve_norm_s2((int(p), int(q)))
    if x is None:
        return None
    return z8_to_scalar(x, den)
