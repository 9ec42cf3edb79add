"""Multi-particle states, interior products, CAR/CCR and normal ordering."""

import pytest

from spinorkit.exactfield import Scalar
from spinorkit.fockalg import (
    FockState,
    OperatorElement,
    RankError,
    Sector,
    SectorMismatchError,
    Statistics,
    Universe,
    absorb,
    apply_generators,
    basis_monomials,
    basis_states,
    emit,
    exterior_product,
    interior_product,
    monomial_grade,
    normal_order,
    op_apply,
    pairing,
    state_to_json,
    super_bracket,
    word_generators,
)
from spinorkit.prng import SplitMix64, random_scalar

FERMI = Universe([Sector("f", Statistics.FERMION, (1, 2, 3))])
BOSE = Universe([Sector("b", Statistics.BOSON, (1, 2, 3))])
MIXED = Universe(
    [
        Sector("f", Statistics.FERMION, (1, 2, 3)),
        Sector("b", Statistics.BOSON, (1, 2, 3)),
    ]
)


def st(universe, sector, mode, dual=False):
    return FockState.mode(universe, sector, mode, dual)


def vac(universe):
    return FockState.vacuum(universe)


def random_state(rng, universe, max_rank=3, dual=False, terms=3):
    basis = basis_monomials(universe, max_rank)
    acc = FockState(universe, {}, dual)
    for _ in range(terms):
        mono = basis[rng.randint(0, len(basis) - 1)]
        acc = acc + FockState(universe, {mono: random_scalar(rng)}, dual)
    return acc


def random_rank1(rng, universe, dual=False):
    sector_idx = rng.randint(0, len(universe.sectors) - 1)
    sector = universe.sectors[sector_idx]
    acc = FockState(universe, {}, dual)
    for mode in sector.modes:
        acc = acc + st(universe, sector.name, mode, dual).scaled(random_scalar(rng))
    return acc


# -- exterior product ---------------------------------------------------------


def test_fermion_wedge_signs():
    z1, z2 = st(FERMI, "f", 1), st(FERMI, "f", 2)
    both = exterior_product(z1, z2)
    assert both.terms == {((1, 2),): Scalar.one()}
    assert exterior_product(z2, z1).terms == {((1, 2),): Scalar(-1)}
    assert exterior_product(z1, z1).is_zero()


def test_boson_symmetric_product():
    z1 = st(BOSE, "b", 1)
    twice = exterior_product(z1, z1)
    assert twice.terms == {((1, 1),): Scalar.one()}
    z2 = st(BOSE, "b", 2)
    assert exterior_product(z1, z2) == exterior_product(z2, z1)


def test_vacuum_is_the_unit():
    rng = SplitMix64(1)
    for universe in (FERMI, BOSE, MIXED):
        psi = random_state(rng, universe)
        assert exterior_product(vac(universe), psi) == psi
        assert exterior_product(psi, vac(universe)) == psi


def test_exterior_is_associative():
    rng = SplitMix64(2)
    for universe in (FERMI, MIXED):
        for _ in range(25):
            a = random_state(rng, universe, max_rank=2, terms=2)
            b = random_state(rng, universe, max_rank=2, terms=2)
            c = random_state(rng, universe, max_rank=2, terms=2)
            assert exterior_product(exterior_product(a, b), c) == exterior_product(
                a, exterior_product(b, c)
            )


def test_super_commutativity():
    # psi <> phi = (-1)^{|phi||psi|} phi <> psi on definite-grade monomials
    for universe in (FERMI, MIXED):
        for m1 in basis_monomials(universe, 2):
            for m2 in basis_monomials(universe, 2):
                a = FockState(universe, {m1: Scalar.one()})
                b = FockState(universe, {m2: Scalar.one()})
                g1 = monomial_grade(universe, m1)
                g2 = monomial_grade(universe, m2)
                lhs = exterior_product(a, b)
                rhs = exterior_product(b, a).scaled(Scalar((-1) ** (g1 * g2)))
                assert lhs == rhs


def test_bosonic_factor_commutes_with_everything():
    rng = SplitMix64(3)
    for _ in range(30):
        psi = random_state(rng, MIXED)
        boson = st(MIXED, "b", rng.randint(1, 3))
        assert exterior_product(boson, psi) == exterior_product(psi, boson)


def test_sector_universe_mismatch():
    with pytest.raises(SectorMismatchError):
        exterior_product(st(FERMI, "f", 1), st(BOSE, "b", 1))
    with pytest.raises(SectorMismatchError):
        exterior_product(st(FERMI, "f", 1), st(FERMI, "f", 1, dual=True))


# -- interior product ------------------------------------------------------------


def test_interior_rank1_examples():
    # <zeta1, z1> = 1 gives the vacuum
    out = interior_product(st(FERMI, "f", 1, dual=True), st(FERMI, "f", 1))
    assert out == vac(FERMI)
    # fermi: zeta1 | (z1 <> z2) = z2
    z12 = exterior_product(st(FERMI, "f", 1), st(FERMI, "f", 2))
    assert interior_product(st(FERMI, "f", 1, dual=True), z12) == st(FERMI, "f", 2)
    # and hitting the second slot picks up the Koszul sign
    assert interior_product(st(FERMI, "f", 2, dual=True), z12) == st(FERMI, "f", 1).scaled(
        Scalar(-1)
    )
    # bose: zeta1 | (z1 <> z1) = 2 z1
    z11 = exterior_product(st(BOSE, "b", 1), st(BOSE, "b", 1))
    assert interior_product(st(BOSE, "b", 1, dual=True), z11) == st(BOSE, "b", 1).scaled(
        Scalar(2)
    )


def test_interior_is_a_graded_derivation():
    # zeta | (z <> phi) = <zeta, z> phi + (-1)^{|zeta||z|} z <> (zeta | phi),
    # phrased through the absorption operator so the vacuum term is covered
    rng = SplitMix64(4)
    for universe in (FERMI, BOSE, MIXED):
        for _ in range(40):
            zeta = random_rank1(rng, universe, dual=True)
            z = random_rank1(rng, universe)
            phi = random_state(rng, universe, max_rank=2, terms=2)
            if phi.is_zero() or z.is_zero() or zeta.is_zero():
                continue
            lhs = op_apply(absorb(zeta), exterior_product(z, phi))
            scalar = pairing(zeta, z)
            z_grade = z.grades()[0]
            zeta_grade = zeta.grades()[0]
            sign = Scalar((-1) ** (z_grade * zeta_grade))
            inner = op_apply(absorb(zeta), phi)
            rhs = phi.scaled(scalar) + exterior_product(z, inner).scaled(sign)
            assert lhs == rhs
            # on vacuum-free homogeneous states the pure interior product agrees
            top = FockState(
                universe,
                {m: c for m, c in phi.terms.items() if sum(len(p) for p in m) >= 1},
            )
            if not top.is_zero():
                assert interior_product(zeta, top) == op_apply(absorb(zeta), top)


def test_adjunction_identity():
    # (zeta <> xi) | psi = xi | (zeta | psi) whenever the contraction stays on
    # the state side (rank psi >= rank zeta + rank xi)
    rng = SplitMix64(5)
    for universe in (FERMI, BOSE, MIXED):
        for _ in range(60):
            zeta = random_rank1(rng, universe, dual=True)
            xi = random_rank1(rng, universe, dual=True)
            psi = random_state(rng, universe, max_rank=3, terms=3)
            psi = FockState(
                universe,
                {m: c for m, c in psi.terms.items() if sum(len(p) for p in m) >= 2},
            )
            if psi.is_zero() or zeta.is_zero() or xi.is_zero():
                continue
            lhs = interior_product(exterior_product(zeta, xi), psi)
            rhs = interior_product(xi, interior_product(zeta, psi))
            assert lhs == rhs


def test_transpose_property_of_dual_contraction():
    # <lam | psi, phi> = <lam, psi <> phi> for every basis combination
    universe = MIXED
    duals = basis_states(universe, 2, dual=True)
    states1 = basis_states(universe, 1)
    for lam in duals:
        lam_rank = lam.rank()
        for psi in states1:
            if lam_rank <= psi.rank():
                continue
            reduced = interior_product(lam, psi)
            for phi in basis_states(universe, lam_rank - psi.rank()):
                if phi.rank() != lam_rank - psi.rank():
                    continue
                lhs = pairing(reduced, phi)
                rhs = pairing(lam, exterior_product(psi, phi))
                assert lhs == rhs


# -- emission and absorption --------------------------------------------------------


def test_emit_absorb_on_vacuum():
    z1 = st(MIXED, "f", 1)
    zeta1 = st(MIXED, "f", 1, dual=True)
    assert op_apply(emit(z1), vac(MIXED)) == z1
    assert op_apply(absorb(zeta1), vac(MIXED)).is_zero()
    assert op_apply(absorb(zeta1) * emit(z1), vac(MIXED)) == vac(MIXED)


def test_rank_enforcement():
    z12 = exterior_product(st(FERMI, "f", 1), st(FERMI, "f", 2))
    with pytest.raises(RankError):
        emit(z12)
    with pytest.raises(SectorMismatchError):
        emit(st(FERMI, "f", 1, dual=True))
    with pytest.raises(SectorMismatchError):
        absorb(st(FERMI, "f", 1))


def test_transposition_duality_of_operators():
    # <lam, a[zeta] psi> = <a+[zeta] lam, psi>: absorption transposes to
    # exterior multiplication on the dual side
    universe = MIXED
    zeta = st(universe, "f", 2, dual=True)
    for lam in basis_states(universe, 1, dual=True):
        for psi in basis_states(universe, 2):
            if psi.rank() != lam.rank() + 1:
                continue
            lhs = pairing(lam, op_apply(absorb(zeta), psi))
            rhs = pairing(exterior_product(zeta, lam), psi)
            assert lhs == rhs
    # mirror: <lam, a+[z] psi> = <z | lam, psi>; rank-1 lam is plain pairing
    z = st(universe, "b", 1)
    for lam in basis_states(universe, 2, dual=True):
        for psi in basis_states(universe, 1):
            if lam.rank() != psi.rank() + 1 or psi.rank() < 1:
                continue
            lhs = pairing(lam, op_apply(emit(z), psi))
            rhs = pairing(interior_product(lam, z), psi)
            assert lhs == rhs


# -- super-brackets and CAR/CCR -------------------------------------------------------


def identity_of(universe):
    return OperatorElement.identity(universe)


def test_car_ccr_bracket_examples():
    for universe, sector in ((FERMI, "f"), (BOSE, "b")):
        a1 = absorb(st(universe, sector, 1, dual=True))
        c1 = emit(st(universe, sector, 1))
        c2 = emit(st(universe, sector, 2))
        assert super_bracket(a1, c1) == identity_of(universe)
        assert super_bracket(c1, c2).is_zero()
        assert super_bracket(a1, absorb(st(universe, sector, 2, dual=True))).is_zero()


def test_car_nilpotency():
    c1 = emit(st(FERMI, "f", 1))
    assert (c1 * c1).is_zero()
    # bosonic emissions are not nilpotent
    b1 = emit(st(BOSE, "b", 1))
    assert not (b1 * b1).is_zero()


def test_ccr_exhaustive_on_basis():
    # <<a[zeta_i], a+[z_j]>> acts as delta_ij on every basis state
    universe = MIXED
    basis = basis_states(universe, 3)
    for s_name, modes in (("f", (1, 2, 3)), ("b", (1, 2, 3))):
        for i in modes:
            for j in modes:
                bracket = super_bracket(
                    absorb(st(universe, s_name, i, dual=True)),
                    emit(st(universe, s_name, j)),
                )
                expected = (
                    identity_of(universe) if i == j else OperatorElement(universe)
                )
                assert bracket == expected
                for psi in basis:
                    want = psi if i == j else FockState(universe, {})
                    assert op_apply(bracket, psi) == want


def test_super_bracket_golden_value():
    # <<a+[z1] a[zeta2], a+[z2]>> = a+[z1] for fermions; frozen after checking
    # both sides as endomorphisms on the exhaustive basis
    universe = FERMI
    x = emit(st(universe, "f", 1)) * absorb(st(universe, "f", 2, dual=True))
    y = emit(st(universe, "f", 2))
    bracket = super_bracket(x, y)
    golden = emit(st(universe, "f", 1))
    assert bracket == golden
    for psi in basis_states(universe, 3):
        lhs = op_apply(x, op_apply(y, psi)) - op_apply(y, op_apply(x, psi))
        assert lhs == op_apply(golden, psi)


def test_mixed_sector_operators_super_commute():
    # operators in different sectors super-commute: odd-odd pairs anticommute
    universe = MIXED
    cf = emit(st(universe, "f", 1))
    cb = emit(st(universe, "b", 1))
    assert super_bracket(cf, cb).is_zero()
    assert cf * cb == cb * cf  # boson sector is even: plain commutation
    cf2 = emit(st(universe, "f", 2))
    assert cf * cf2 == (cf2 * cf).scaled(Scalar(-1))


# -- normal ordering -------------------------------------------------------------------


def test_normal_order_contraction_term():
    for universe, sector, swap_sign in ((FERMI, "f", -1), (BOSE, "b", 1)):
        gens = [("-", 0, 1), ("+", 0, 1)]  # a[zeta1] a+[z1]
        ordered = normal_order(universe, gens)
        a_then_c = emit(st(universe, sector, 1)) * absorb(
            st(universe, sector, 1, dual=True)
        )
        expected = a_then_c.scaled(Scalar(swap_sign)) + identity_of(universe)
        assert ordered == expected


def test_normal_order_idempotent_on_normal_words():
    universe = MIXED
    gens = [("+", 0, 1), ("-", 1, 2)]
    element = normal_order(universe, gens)
    again = OperatorElement(universe)
    for word, coeff in element.terms.items():
        again = again + normal_order(universe, word_generators(universe, word)).scaled(coeff)
    assert again == element


def test_absorption_reordering_antisymmetry():
    # [a(zeta1), a(zeta2)] fermionic: the two orders differ by a sign
    one_two = normal_order(FERMI, [("-", 0, 1), ("-", 0, 2)])
    two_one = normal_order(FERMI, [("-", 0, 2), ("-", 0, 1)])
    assert one_two == two_one.scaled(Scalar(-1))
    assert normal_order(FERMI, [("-", 0, 1), ("-", 0, 1)]).is_zero()


def random_word(rng, universe, max_len=4):
    length = rng.randint(0, max_len)
    gens = []
    for _ in range(length):
        kind = "+" if rng.randint(0, 1) else "-"
        sector_idx = rng.randint(0, len(universe.sectors) - 1)
        mode = universe.sectors[sector_idx].modes[
            rng.randint(0, len(universe.sectors[sector_idx].modes) - 1)
        ]
        gens.append((kind, sector_idx, mode))
    return gens


def test_normal_order_equals_raw_composition():
    rng = SplitMix64(6)
    universe = MIXED
    basis = basis_states(universe, 2)
    for _ in range(40):
        gens = random_word(rng, universe)
        element = normal_order(universe, gens)
        for psi in basis:
            assert op_apply(element, psi) == apply_generators(universe, gens, psi)


def test_operator_product_is_associative():
    rng = SplitMix64(7)
    universe = MIXED
    for _ in range(20):
        x = normal_order(universe, random_word(rng, universe, 3))
        y = normal_order(universe, random_word(rng, universe, 3))
        z = normal_order(universe, random_word(rng, universe, 3))
        assert (x * y) * z == x * (y * z)


def test_op_of_scalar_and_composition():
    universe = MIXED
    rng = SplitMix64(8)
    psi = random_state(rng, universe)
    assert op_apply(OperatorElement.of_scalar(universe, Scalar(3)), psi) == psi.scaled(
        Scalar(3)
    )
    # emit z1 emit z2 on the vacuum is z1 <> z2
    z1, z2 = st(universe, "f", 1), st(universe, "f", 2)
    assert op_apply(emit(z1) * emit(z2), vac(universe)) == exterior_product(z1, z2)


def test_basis_enumeration_count():
    # fermion parts 8, boson parts 20, filtered by total rank <= 3
    assert len(basis_monomials(MIXED, 3)) == 63
    assert len(basis_monomials(FERMI, 3)) == 8


def test_state_json_dump_is_deterministic():
    state = exterior_product(st(MIXED, "f", 1), st(MIXED, "f", 2)).scaled(
        Scalar(1, 1)
    ) + st(MIXED, "b", 1).scaled(Scalar(0, 0, 1))
    dump = state_to_json(state)
    assert dump == state_to_json(state)
    assert '"f:1^f:2"' in dump and '"b:1"' in dump
    assert '"1+i"' in dump and '"r2"' in dump


def test_universe_validation():
    with pytest.raises(ValueError):
        Sector("f", Statistics.FERMION, (1, 1))
    with pytest.raises(ValueError):
        Universe([Sector("a", Statistics.BOSON, (1,)), Sector("a", Statistics.BOSON, (2,))])
    with pytest.raises(ValueError):
        FockState(FERMI, {((2, 1),): Scalar.one()})
    with pytest.raises(ValueError):
        FockState(FERMI, {((9,),): Scalar.one()})
