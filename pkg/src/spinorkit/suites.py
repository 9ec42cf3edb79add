"""Seeded property suites: every identity the kernel asserts, re-checked exactly.

Each suite draws its inputs from a per-trial counter-based substream, so a
(suite, seed, trials) triple always examines the same inputs, trials can run
in parallel without changing the report, and reports are byte-identical
across runs.  A failure record carries the offending input and both sides of
the broken identity; the suites are theorem checks, so any failure is an
implementation bug, never a property of the inputs.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .diracw import EndW, gamma, k_hermiticity_check
from .exactfield import Scalar
from .fnforms import (
    MatrixForm,
    Poly,
    TangentForm,
    VectorForm,
    bianchi_residual,
    covariant_differential,
    curvature,
    fn_bracket,
)
from .fockalg import (
    FockState,
    OperatorElement,
    Sector,
    Statistics,
    Universe,
    absorb,
    apply_generators,
    basis_monomials,
    basis_states,
    emit,
    exterior_product,
    interior_product,
    normal_order,
    op_apply,
    super_bracket,
)
from .prng import SplitMix64, random_scalar, stream_for
from .spintensor import EpsilonStructure, ScaledTensor, Variance, e, g_pairing, pauli_tetrad


@dataclass
class SuiteReport:
    suite: str
    seed: int
    trials: int
    failures: List[Dict[str, object]] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        # elapsed is intentionally absent: reports must be byte-identical
        # across runs for identical (suite, seed, trials)
        return {
            "failures": self.failures,
            "seed": self.seed,
            "suite": self.suite,
            "trials": self.trials,
        }


def thread_budget() -> int:
    """Worker cap from SPINORKIT_THREADS; at least 1."""
    raw = os.environ.get("SPINORKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_trials(fn: Callable[[int], Optional[dict]], trials: int) -> List[dict]:
    """Run independent trials, in parallel when allowed; order-stable output."""
    workers = thread_budget()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, range(trials)))
    else:
        results = [fn(t) for t in range(trials)]
    return [r for r in results if r is not None]


# -- domain samplers -------------------------------------------------------------


def random_mink(rng: SplitMix64) -> ScaledTensor:
    r1 = Scalar(rng.fraction(), 0, rng.fraction(), 0)
    r2 = Scalar(rng.fraction(), 0, rng.fraction(), 0)
    z = random_scalar(rng)
    return ScaledTensor(
        (Variance.U, Variance.U_BAR),
        {(1, 1): r1, (2, 2): r2, (1, 2): z, (2, 1): z.conj()},
    )


def random_spinor(rng: SplitMix64) -> ScaledTensor:
    return ScaledTensor(
        (Variance.U,), {(1,): random_scalar(rng), (2,): random_scalar(rng)}
    )


def random_spin_frame(rng: SplitMix64, eps: EpsilonStructure):
    while True:
        b1 = random_spinor(rng)
        c = random_spinor(rng)
        omega = eps.eps_value(b1, c)
        if b1.is_zero() or omega.is_zero():
            continue
        return b1, c.scaled(omega.inverse())


def random_poly(rng: SplitMix64, dim: int, max_degree: int = 2, terms: int = 2) -> Poly:
    out = Poly(dim)
    for _ in range(terms):
        exps = tuple(rng.randint(0, max_degree) for _ in range(dim))
        if sum(exps) > max_degree:
            continue
        out = out + Poly(dim, {exps: random_scalar(rng)})
    return out


def random_tangent_form(rng: SplitMix64, dim: int, degree: int) -> TangentForm:
    import itertools

    comps = {}
    for axes in itertools.combinations(range(dim), degree):
        for out_axis in range(dim):
            if rng.randint(0, 1):
                comps[(axes, out_axis)] = random_poly(rng, dim)
    return TangentForm(dim, degree, comps)


def random_connection(rng: SplitMix64, dim: int = 3, fibre: int = 2) -> MatrixForm:
    comps = {}
    for axis in range(dim):
        comps[(axis,)] = tuple(
            tuple(random_poly(rng, dim) for _ in range(fibre)) for _ in range(fibre)
        )
    return MatrixForm(dim, 1, fibre, comps)


def random_vector_form(rng: SplitMix64, dim: int, fibre: int, degree: int) -> VectorForm:
    import itertools

    comps = {}
    for axes in itertools.combinations(range(dim), degree):
        comps[axes] = tuple(random_poly(rng, dim) for _ in range(fibre))
    return VectorForm(dim, degree, fibre, comps)


SMALL_UNIVERSE = Universe(
    [
        Sector("f", Statistics.FERMION, (1, 2, 3)),
        Sector("b", Statistics.BOSON, (1, 2, 3)),
    ]
)


def random_fock_state(rng: SplitMix64, universe: Universe, monomials, terms=3, dual=False):
    acc = FockState(universe, {}, dual)
    for _ in range(terms):
        mono = monomials[rng.randint(0, len(monomials) - 1)]
        acc = acc + FockState(universe, {mono: random_scalar(rng)}, dual)
    return acc


def random_rank1(rng: SplitMix64, universe: Universe, dual=False) -> FockState:
    sector_idx = rng.randint(0, len(universe.sectors) - 1)
    sector = universe.sectors[sector_idx]
    acc = FockState(universe, {}, dual)
    for mode in sector.modes:
        acc = acc + FockState.mode(universe, sector.name, mode, dual).scaled(
            random_scalar(rng)
        )
    return acc


def random_generator_word(rng: SplitMix64, universe: Universe, max_len: int = 4):
    length = rng.randint(0, max_len)
    gens = []
    for _ in range(length):
        kind = "+" if rng.randint(0, 1) else "-"
        sector_idx = rng.randint(0, len(universe.sectors) - 1)
        modes = universe.sectors[sector_idx].modes
        gens.append((kind, sector_idx, modes[rng.randint(0, len(modes) - 1)]))
    return gens


# -- the suites -------------------------------------------------------------------


def _suite_clifford(seed: int, trials: int) -> List[dict]:
    def one(trial: int):
        rng = stream_for(seed, f"clifford#{trial}")
        y, yp = random_mink(rng), random_mink(rng)
        gy, gyp = gamma(y), gamma(yp)
        got = gy * gyp + gyp * gy
        expected = EndW.identity().scaled(Scalar(2) * g_pairing(y, yp))
        if got != expected:
            return {
                "trial": trial,
                "input": f"y = {y}; y' = {yp}",
                "expected": str(expected),
                "got": str(got),
            }
        return None

    return _map_trials(one, trials)


_MINK_DIAG = (1, -1, -1, -1)


def _suite_pauli(seed: int, trials: int) -> List[dict]:
    eps = EpsilonStructure()

    def one(trial: int):
        rng = stream_for(seed, f"pauli#{trial}")
        b1, b2 = random_spin_frame(rng, eps)
        tetrad = eps.pauli_tetrad(b1, b2)
        for i, ti in enumerate(tetrad):
            for j, tj in enumerate(tetrad):
                want = Scalar(_MINK_DIAG[i]) if i == j else Scalar.zero()
                got = eps.g_pairing(ti, tj)
                if got != want:
                    return {
                        "trial": trial,
                        "input": f"b1 = {b1}; b2 = {b2}; entry = ({i},{j})",
                        "expected": str(want),
                        "got": str(got),
                    }
        return None

    return _map_trials(one, trials)


def _signature_witnesses():
    from .diracw import DiracVector, k_form

    witnesses = [
        (DiracVector((Scalar(1), Scalar(0), Scalar(1), Scalar(0))), Scalar(2)),
        (DiracVector((Scalar(0), Scalar(1), Scalar(0), Scalar(1))), Scalar(2)),
        (DiracVector((Scalar(1), Scalar(0), Scalar(-1), Scalar(0))), Scalar(-2)),
        (DiracVector((Scalar(0), Scalar(1), Scalar(0), Scalar(-1))), Scalar(-2)),
    ]
    values = [k_form(w, w) for w, _ in witnesses]
    expected = [v for _, v in witnesses]
    ortho = all(
        k_form(witnesses[i][0], witnesses[j][0]).is_zero()
        for i in range(4)
        for j in range(4)
        if i != j
    )
    return values, expected, ortho


def _suite_signature(seed: int, trials: int) -> List[dict]:
    failures: List[dict] = []
    values, expected, ortho = _signature_witnesses()
    if values != expected or not ortho:
        failures.append(
            {
                "trial": -1,
                "input": "k-diagonalization witnesses",
                "expected": str([str(v) for v in expected]),
                "got": str([str(v) for v in values]),
            }
        )

    def one(trial: int):
        rng = stream_for(seed, f"signature#{trial}")
        y = random_mink(rng)
        if not k_hermiticity_check(y):
            return {
                "trial": trial,
                "input": f"y = {y}",
                "expected": "k(gamma[y] psi, phi) = k(psi, gamma[y] phi)",
                "got": "k-hermiticity failed on H",
            }
        if not y.is_zero() and k_hermiticity_check(y.scaled(Scalar.i())):
            return {
                "trial": trial,
                "input": f"i*y with y = {y}",
                "expected": "k-hermiticity must fail off H",
                "got": "anti-Hermitian element passed",
            }
        return None

    failures.extend(_map_trials(one, trials))
    return failures


def _suite_fn_bracket(seed: int, trials: int) -> List[dict]:
    def one(trial: int):
        rng = stream_for(seed, f"fn-bracket#{trial}")
        dim = rng.choice((2, 3))
        r = rng.randint(0, dim)
        s = rng.randint(0, dim - r)
        zeta = random_tangent_form(rng, dim, r)
        xi = random_tangent_form(rng, dim, s)
        lhs = fn_bracket(zeta, xi)
        rhs = fn_bracket(xi, zeta).scaled(Scalar(-((-1) ** (r * s))))
        if lhs != rhs:
            return {
                "trial": trial,
                "input": f"dim={dim} r={r} s={s}; zeta = {zeta}; xi = {xi}",
                "expected": "graded antisymmetry",
                "got": f"lhs = {lhs}; rhs = {rhs}",
            }
        return None

    failures = _map_trials(one, trials)

    jacobi_rounds = max(1, trials // 10)

    def jacobi(trial: int):
        rng = stream_for(seed, f"fn-jacobi#{trial}")
        dim = rng.choice((2, 3))
        r = rng.randint(0, dim)
        s = rng.randint(0, dim - r)
        t = rng.randint(0, dim - r - s)
        zeta = random_tangent_form(rng, dim, r)
        xi = random_tangent_form(rng, dim, s)
        eta = random_tangent_form(rng, dim, t)
        lhs = fn_bracket(zeta, fn_bracket(xi, eta))
        rhs = fn_bracket(fn_bracket(zeta, xi), eta) + fn_bracket(
            xi, fn_bracket(zeta, eta)
        ).scaled(Scalar((-1) ** (r * s)))
        if lhs != rhs:
            return {
                "trial": trial,
                "input": f"dim={dim} degrees=({r},{s},{t})",
                "expected": "graded Jacobi identity",
                "got": f"lhs = {lhs}; rhs = {rhs}",
            }
        return None

    failures.extend(
        {**f, "trial": f["trial"] + trials} for f in _map_trials(jacobi, jacobi_rounds)
    )
    return failures


def _suite_bianchi(seed: int, trials: int) -> List[dict]:
    def one(trial: int):
        rng = stream_for(seed, f"bianchi#{trial}")
        a = random_connection(rng, dim=3, fibre=2)
        f = curvature(a)
        residual = bianchi_residual(a)
        if not residual.is_zero():
            return {
                "trial": trial,
                "input": f"A = {a}",
                "expected": "dF + [A, F] = 0",
                "got": str(residual),
            }
        degree = rng.randint(0, 1)
        phi = random_vector_form(rng, 3, 2, degree)
        lhs = covariant_differential(a, covariant_differential(a, phi))
        rhs = f.wedge_vector(phi)
        if lhs != rhs:
            return {
                "trial": trial,
                "input": f"A = {a}; phi = {phi}",
                "expected": "d_A d_A phi = F /\\ phi",
                "got": f"lhs = {lhs}; rhs = {rhs}",
            }
        return None

    return _map_trials(one, trials)


def _suite_car_ccr(seed: int, trials: int) -> List[dict]:
    universe = SMALL_UNIVERSE
    failures: List[dict] = []
    basis = basis_states(universe, 3)
    identity = OperatorElement.identity(universe)
    zero = OperatorElement(universe)
    for sector in universe.sectors:
        for i in sector.modes:
            zi = FockState.mode(universe, sector.name, i)
            di = FockState.mode(universe, sector.name, i, dual=True)
            for j in sector.modes:
                zj = FockState.mode(universe, sector.name, j)
                dj = FockState.mode(universe, sector.name, j, dual=True)
                bracket = super_bracket(absorb(di), emit(zj))
                expected = identity if i == j else zero
                if bracket != expected:
                    failures.append(
                        {
                            "trial": -1,
                            "input": f"[[a[{sector.name}:{i}], a+[{sector.name}:{j}]]]",
                            "expected": str(expected),
                            "got": str(bracket),
                        }
                    )
                    continue
                for n, psi in enumerate(basis):
                    want = psi if i == j else FockState(universe, {})
                    got = op_apply(bracket, psi)
                    if got != want:
                        failures.append(
                            {
                                "trial": n,
                                "input": f"bracket on basis state {psi}",
                                "expected": str(want),
                                "got": str(got),
                            }
                        )
                if not super_bracket(absorb(di), absorb(dj)).is_zero():
                    failures.append(
                        {
                            "trial": -1,
                            "input": f"[[a[{sector.name}:{i}], a[{sector.name}:{j}]]]",
                            "expected": "0",
                            "got": "nonzero",
                        }
                    )
                if not super_bracket(emit(zi), emit(zj)).is_zero():
                    failures.append(
                        {
                            "trial": -1,
                            "input": f"[[a+[{sector.name}:{i}], a+[{sector.name}:{j}]]]",
                            "expected": "0",
                            "got": "nonzero",
                        }
                    )
    # cross-sector brackets vanish too
    f1 = FockState.mode(universe, "f", 1)
    b1 = FockState.mode(universe, "b", 1)
    if not super_bracket(emit(f1), emit(b1)).is_zero():
        failures.append(
            {
                "trial": -1,
                "input": "[[a+[f:1], a+[b:1]]]",
                "expected": "0",
                "got": "nonzero",
            }
        )
    return failures


def _suite_normal_order(seed: int, trials: int) -> List[dict]:
    universe = SMALL_UNIVERSE
    basis = basis_states(universe, 3)

    def one(trial: int):
        rng = stream_for(seed, f"normal-order#{trial}")
        gens = random_generator_word(rng, universe)
        element = normal_order(universe, gens)
        for psi in basis:
            expected = apply_generators(universe, gens, psi)
            got = op_apply(element, psi)
            if got != expected:
                return {
                    "trial": trial,
                    "input": f"word = {gens}; psi = {psi}",
                    "expected": str(expected),
                    "got": str(got),
                }
        return None

    return _map_trials(one, trials)


def _suite_adjunction(seed: int, trials: int) -> List[dict]:
    universe = SMALL_UNIVERSE
    deep = [m for m in basis_monomials(universe, 3) if sum(len(p) for p in m) >= 2]

    def one(trial: int):
        rng = stream_for(seed, f"adjunction#{trial}")
        zeta = random_rank1(rng, universe, dual=True)
        xi = random_rank1(rng, universe, dual=True)
        psi = random_fock_state(rng, universe, deep, terms=3)
        if zeta.is_zero() or xi.is_zero() or psi.is_zero():
            return None
        lhs = interior_product(exterior_product(zeta, xi), psi)
        rhs = interior_product(xi, interior_product(zeta, psi))
        if lhs != rhs:
            return {
                "trial": trial,
                "input": f"zeta = {zeta}; xi = {xi}; psi = {psi}",
                "expected": str(rhs),
                "got": str(lhs),
            }
        return None

    return _map_trials(one, trials)


SUITES: Dict[str, Callable[[int, int], List[dict]]] = {
    "adjunction": _suite_adjunction,
    "bianchi": _suite_bianchi,
    "car-ccr": _suite_car_ccr,
    "clifford": _suite_clifford,
    "fn-bracket": _suite_fn_bracket,
    "normal-order": _suite_normal_order,
    "pauli": _suite_pauli,
    "signature": _suite_signature,
}

SUITE_NAMES = tuple(sorted(SUITES))


class UnknownSuiteError(ValueError):
    pass


def run_suite(name: str, seed: int, trials: int) -> SuiteReport:
    if name not in SUITES:
        raise UnknownSuiteError(
            f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)} or 'all'"
        )
    if trials <= 0:
        raise ValueError("trials must be positive")
    start = time.monotonic()
    failures = SUITES[name](seed, trials)
    elapsed = time.monotonic() - start
    return SuiteReport(name, seed, trials, failures, elapsed)


def run_all(seed: int, trials: int) -> List[SuiteReport]:
    return [run_suite(name, seed, trials) for name in SUITE_NAMES]
