"""Multi-particle state spaces over finite mode sets and the operator algebra.

A universe declares finitely many sectors, each bosonic or fermionic with a
finite ordered mode set.  States are finite linear combinations of canonical
monomials (strictly increasing fermion mode lists, sorted boson multisets,
sectors in declaration order); the Koszul sign of any reordering is absorbed
into the coefficient, and the grade of a monomial is its fermion count mod 2.

The same monomial machinery realizes the dual space, so the interior product
is the graded derivation in both directions, emission/absorption operators are
single-generator words, and every operator element is stored normal-ordered:
all emissions left of all absorptions, both sides canonical.  Products
compose and re-normal-order via the super-commutation relation
a[zeta] a+[z] = (-1)^{|zeta||z|} a+[z] a[zeta] + <zeta, z> id.
"""

from __future__ import annotations

import enum
import json
from typing import Dict, Iterable, List, Tuple

from .exactfield import Scalar


class Statistics(enum.Enum):
    BOSON = "boson"
    FERMION = "fermion"


class SectorMismatchError(ValueError):
    """Operands live over different universes or mix dual with non-dual."""


class RankError(ValueError):
    """Operation requires a rank-1 (single particle) argument."""


class Sector:
    __slots__ = ("name", "statistics", "modes")

    def __init__(self, name: str, statistics: Statistics, modes: Iterable[int]):
        modes = tuple(modes)
        if len(set(modes)) != len(modes):
            raise ValueError(f"duplicate modes in sector {name}")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "statistics", statistics)
        object.__setattr__(self, "modes", modes)

    def __setattr__(self, name, value):
        raise AttributeError("Sector is immutable")

    @property
    def is_fermion(self) -> bool:
        return self.statistics is Statistics.FERMION

    def __eq__(self, other):
        if not isinstance(other, Sector):
            return NotImplemented
        return (self.name, self.statistics, self.modes) == (
            other.name,
            other.statistics,
            other.modes,
        )

    def __hash__(self):
        return hash((self.name, self.statistics, self.modes))

    def __repr__(self):
        modes = ",".join(map(str, self.modes))
        return f"sector {self.name}: {self.statistics.value} [{modes}]"


class Universe:
    """An ordered family of sectors; the ordering fixes the canonical monomial form."""

    __slots__ = ("sectors", "_index")

    def __init__(self, sectors: Iterable[Sector]):
        sectors = tuple(sectors)
        names = [s.name for s in sectors]
        if len(set(names)) != len(names):
            raise ValueError("duplicate sector names")
        object.__setattr__(self, "sectors", sectors)
        object.__setattr__(self, "_index", {s.name: i for i, s in enumerate(sectors)})

    def __setattr__(self, name, value):
        raise AttributeError("Universe is immutable")

    def sector_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SectorMismatchError(f"unknown sector {name!r}") from None

    def check_mode(self, sector_idx: int, mode: int):
        sector = self.sectors[sector_idx]
        if mode not in sector.modes:
            raise ValueError(f"mode {mode} not in sector {sector.name}")

    def __eq__(self, other):
        if not isinstance(other, Universe):
            return NotImplemented
        return self.sectors == other.sectors

    def __hash__(self):
        return hash(self.sectors)

    def __repr__(self):
        return "universe { " + "; ".join(repr(s) for s in self.sectors) + " }"


# A monomial is a tuple over sectors of mode tuples: fermion entries strictly
# increasing, boson entries sorted with repeats.
Monomial = Tuple[Tuple[int, ...], ...]


def vacuum_monomial(universe: Universe) -> Monomial:
    return tuple(() for _ in universe.sectors)


def monomial_rank(m: Monomial) -> int:
    return sum(len(part) for part in m)


def monomial_grade(universe: Universe, m: Monomial) -> int:
    return (
        sum(len(part) for part, s in zip(m, universe.sectors) if s.is_fermion) % 2
    )


def _flat_keys(universe: Universe, m: Monomial, fermions_only: bool):
    """Canonical flat item list as (sector_idx, mode) keys."""
    out = []
    for idx, part in enumerate(m):
        if fermions_only and not universe.sectors[idx].is_fermion:
            continue
        out.extend((idx, mode) for mode in part)
    return out


def monomial_product(universe: Universe, m1: Monomial, m2: Monomial):
    """(sign, canonical monomial), or None when a fermion mode repeats."""
    parts: List[Tuple[int, ...]] = []
    for idx, (p1, p2) in enumerate(zip(m1, m2)):
        sector = universe.sectors[idx]
        if sector.is_fermion and set(p1) & set(p2):
            return None
        parts.append(tuple(sorted(p1 + p2)))
    odd1 = _flat_keys(universe, m1, fermions_only=True)
    odd2 = _flat_keys(universe, m2, fermions_only=True)
    crossings = sum(1 for a in odd1 for b in odd2 if b < a)
    return ((-1) ** crossings, tuple(parts))


def _validate_monomial(universe: Universe, m: Monomial):
    m = tuple(tuple(part) for part in m)
    if len(m) != len(universe.sectors):
        raise SectorMismatchError("monomial sector count mismatch")
    for idx, part in enumerate(m):
        sector = universe.sectors[idx]
        for mode in part:
            universe.check_mode(idx, mode)
        if sector.is_fermion:
            if any(a >= b for a, b in zip(part, part[1:])):
                raise ValueError(f"fermion part {part} not strictly increasing")
        else:
            if any(a > b for a, b in zip(part, part[1:])):
                raise ValueError(f"boson part {part} not sorted")
    return m


class FockState:
    """Sparse linear combination of canonical monomials; `dual` marks the dual space."""

    __slots__ = ("universe", "dual", "terms")

    def __init__(self, universe: Universe, terms=None, dual: bool = False):
        clean: Dict[Monomial, Scalar] = {}
        for mono, coeff in (terms or {}).items():
            mono = _validate_monomial(universe, mono)
            coeff = Scalar.coerce(coeff)
            if not coeff.is_zero():
                clean[mono] = coeff
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "dual", bool(dual))
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("FockState is immutable")

    @classmethod
    def vacuum(cls, universe: Universe, dual: bool = False) -> "FockState":
        return cls(universe, {vacuum_monomial(universe): Scalar.one()}, dual)

    @classmethod
    def mode(cls, universe: Universe, sector: str, mode: int, dual: bool = False) -> "FockState":
        idx = universe.sector_index(sector)
        universe.check_mode(idx, mode)
        mono = tuple((mode,) if i == idx else () for i in range(len(universe.sectors)))
        return cls(universe, {mono: Scalar.one()}, dual)

    def _check_mate(self, other: "FockState"):
        if self.universe != other.universe:
            raise SectorMismatchError("states live over different universes")
        if self.dual != other.dual:
            raise SectorMismatchError("cannot mix dual and non-dual states")

    def is_zero(self) -> bool:
        return not self.terms

    def ranks(self):
        return sorted({monomial_rank(m) for m in self.terms})

    def rank(self) -> int:
        """The common rank of a homogeneous state; raises if mixed."""
        ranks = self.ranks()
        if len(ranks) != 1:
            raise RankError(f"state has mixed ranks {ranks}")
        return ranks[0]

    def grades(self):
        return sorted({monomial_grade(self.universe, m) for m in self.terms})

    def vacuum_coefficient(self) -> Scalar:
        return self.terms.get(vacuum_monomial(self.universe), Scalar.zero())

    def __add__(self, other: "FockState") -> "FockState":
        self._check_mate(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, Scalar.zero()) + coeff
        return FockState(self.universe, terms, self.dual)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + other.scaled(Scalar(-1))

    def __neg__(self) -> "FockState":
        return self.scaled(Scalar(-1))

    def scaled(self, factor) -> "FockState":
        factor = Scalar.coerce(factor)
        return FockState(
            self.universe, {m: c * factor for m, c in self.terms.items()}, self.dual
        )

    def __mul__(self, factor):
        return self.scaled(factor)

    __rmul__ = __mul__

    def __xor__(self, other: "FockState") -> "FockState":
        return exterior_product(self, other)

    def __eq__(self, other):
        if not isinstance(other, FockState):
            return NotImplemented
        return (
            self.universe == other.universe
            and self.dual == other.dual
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(
            (self.universe, self.dual, tuple(sorted(self.terms.items())))
        )

    def __str__(self) -> str:
        return format_state(self)

    __repr__ = __str__


def format_monomial(universe: Universe, m: Monomial) -> str:
    chunks = []
    for idx, part in enumerate(m):
        name = universe.sectors[idx].name
        chunks.extend(f"{name}:{mode}" for mode in part)
    return "^".join(chunks) if chunks else "vac"


def format_state(state: FockState) -> str:
    if state.is_zero():
        return "0"
    chunks = []
    for mono in sorted(state.terms):
        coeff = state.terms[mono]
        label = format_monomial(state.universe, mono)
        chunks.append(f"{label} * ({coeff})")
    prefix = "dual " if state.dual else ""
    return prefix + " + ".join(chunks)


def state_to_json(state: FockState) -> str:
    """Deterministic JSON dump with canonical monomial keys."""
    payload = {
        "dual": state.dual,
        "sectors": [
            {
                "name": s.name,
                "statistics": s.statistics.value,
                "modes": list(s.modes),
            }
            for s in state.universe.sectors
        ],
        "terms": {
            format_monomial(state.universe, m): str(c)
            for m, c in state.terms.items()
        },
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ": "))


# -- exterior product ------------------------------------------------------------


def exterior_product(phi: FockState, psi: FockState) -> FockState:
    """The super-commutative product; the vacuum is the unit."""
    phi._check_mate(psi)
    universe = phi.universe
    terms: Dict[Monomial, Scalar] = {}
    for m1, c1 in phi.terms.items():
        for m2, c2 in psi.terms.items():
            prod = monomial_product(universe, m1, m2)
            if prod is None:
                continue
            sign, mono = prod
            add = c1 * c2 * Scalar(sign)
            terms[mono] = terms.get(mono, Scalar.zero()) + add
    return FockState(universe, terms, phi.dual)


# -- interior product -------------------------------------------------------------


def _contract_rank1(universe: Universe, sector_idx: int, mode: int, m: Monomial):
    """Graded-derivation contraction of a single (dual) mode into a monomial.

    Yields (sign, reduced monomial) per occurrence; fermionic contractions pick
    up the parity of the fermions standing to the left of the hit.
    """
    part = m[sector_idx]
    if mode not in part:
        return
    is_fermion = universe.sectors[sector_idx].is_fermion
    if is_fermion:
        fermions_before = 0
        for idx in range(sector_idx):
            if universe.sectors[idx].is_fermion:
                fermions_before += len(m[idx])
        position = part.index(mode)
        sign = (-1) ** (fermions_before + position)
        new_part = part[:position] + part[position + 1:]
        reduced = tuple(
            new_part if i == sector_idx else p for i, p in enumerate(m)
        )
        yield sign, reduced
    else:
        # bosons cross everything freely; one term per occurrence
        position = part.index(mode)
        multiplicity = part.count(mode)
        new_part = part[:position] + part[position + 1:]
        reduced = tuple(
            new_part if i == sector_idx else p for i, p in enumerate(m)
        )
        for _ in range(multiplicity):
            yield 1, reduced


def _monomial_items(m: Monomial):
    for idx, part in enumerate(m):
        for mode in part:
            yield idx, mode


def _contract_monomial(universe: Universe, contractor: Monomial, target: Monomial):
    """Full contraction of `contractor` into `target`, peeling leftmost first.

    rank(contractor) <= rank(target); returns dict of reduced monomials.
    """
    acc: Dict[Monomial, Scalar] = {target: Scalar.one()}
    for sector_idx, mode in _monomial_items(contractor):
        nxt: Dict[Monomial, Scalar] = {}
        for mono, coeff in acc.items():
            for sign, reduced in _contract_rank1(universe, sector_idx, mode, mono):
                add = coeff * Scalar(sign)
                nxt[reduced] = nxt.get(reduced, Scalar.zero()) + add
        acc = {m: c for m, c in nxt.items() if not c.is_zero()}
        if not acc:
            break
    return acc


class MixedRankError(ValueError):
    """Interior product fell on both sides of the duality at once."""


def interior_product(lam: FockState, psi: FockState):
    """Contraction between a dual state and a state.

    Each monomial pair contributes on the side of higher rank; equal ranks
    produce the scalar pairing, returned as a rank-0 (non-dual) state.  A
    combination landing on both sides at once raises MixedRankError.
    """
    if lam.universe != psi.universe:
        raise SectorMismatchError("states live over different universes")
    if not lam.dual or psi.dual:
        raise SectorMismatchError("interior product needs (dual, non-dual) operands")
    universe = lam.universe
    state_terms: Dict[Monomial, Scalar] = {}
    dual_terms: Dict[Monomial, Scalar] = {}
    state_side_hit = False
    dual_side_hit = False
    for d_mono, d_coeff in lam.terms.items():
        for m_mono, m_coeff in psi.terms.items():
            base = d_coeff * m_coeff
            if monomial_rank(d_mono) <= monomial_rank(m_mono):
                state_side_hit = True
                for mono, coeff in _contract_monomial(universe, d_mono, m_mono).items():
                    state_terms[mono] = state_terms.get(mono, Scalar.zero()) + base * coeff
            else:
                dual_side_hit = True
                for mono, coeff in _contract_monomial(universe, m_mono, d_mono).items():
                    dual_terms[mono] = dual_terms.get(mono, Scalar.zero()) + base * coeff
    state_part = FockState(universe, state_terms, dual=False)
    dual_part = FockState(universe, dual_terms, dual=True)
    if not dual_part.is_zero() and not state_part.is_zero():
        raise MixedRankError("contraction produced both a state and a dual state")
    if not dual_part.is_zero():
        return dual_part
    if not state_part.is_zero():
        return state_part
    # zero result: keep the side determined by the rank comparison when unambiguous
    return dual_part if (dual_side_hit and not state_side_hit) else state_part


def pairing(lam: FockState, psi: FockState) -> Scalar:
    """Scalar duality pairing <lam, psi> of equal-rank states."""
    if lam.is_zero() or psi.is_zero():
        return Scalar.zero()
    result = interior_product(lam, psi)
    if result.dual or any(monomial_rank(m) for m in result.terms):
        raise RankError("pairing needs equal total ranks")
    return result.vacuum_coefficient()


# -- operator algebra ----------------------------------------------------------

# A generator is ('+', sector_idx, mode) for emission or ('-', sector_idx, mode)
# for absorption.  A stored word is a pair (emit monomial, absorb monomial).
Generator = Tuple[str, int, int]
Word = Tuple[Monomial, Monomial]


class OperatorElement:
    """Normal-ordered element of the graded operator algebra."""

    __slots__ = ("universe", "terms")

    def __init__(self, universe: Universe, terms=None):
        clean: Dict[Word, Scalar] = {}
        for (emit_m, absorb_m), coeff in (terms or {}).items():
            emit_m = _validate_monomial(universe, emit_m)
            absorb_m = _validate_monomial(universe, absorb_m)
            coeff = Scalar.coerce(coeff)
            if not coeff.is_zero():
                clean[(emit_m, absorb_m)] = coeff
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("OperatorElement is immutable")

    @classmethod
    def identity(cls, universe: Universe) -> "OperatorElement":
        vac = vacuum_monomial(universe)
        return cls(universe, {(vac, vac): Scalar.one()})

    @classmethod
    def of_scalar(cls, universe: Universe, c) -> "OperatorElement":
        return cls.identity(universe).scaled(c)

    def is_zero(self) -> bool:
        return not self.terms

    def word_grade(self, word: Word) -> int:
        emit_m, absorb_m = word
        return (
            monomial_grade(self.universe, emit_m)
            + monomial_grade(self.universe, absorb_m)
        ) % 2

    def grades(self):
        return sorted({self.word_grade(w) for w in self.terms})

    def graded_parts(self):
        """(even part, odd part)."""
        even: Dict[Word, Scalar] = {}
        odd: Dict[Word, Scalar] = {}
        for word, coeff in self.terms.items():
            (even if self.word_grade(word) == 0 else odd)[word] = coeff
        return (
            OperatorElement(self.universe, even),
            OperatorElement(self.universe, odd),
        )

    def _check_mate(self, other: "OperatorElement"):
        if self.universe != other.universe:
            raise SectorMismatchError("operators live over different universes")

    def __add__(self, other: "OperatorElement") -> "OperatorElement":
        self._check_mate(other)
        terms = dict(self.terms)
        for word, coeff in other.terms.items():
            terms[word] = terms.get(word, Scalar.zero()) + coeff
        return OperatorElement(self.universe, terms)

    def __sub__(self, other: "OperatorElement") -> "OperatorElement":
        return self + other.scaled(Scalar(-1))

    def __neg__(self) -> "OperatorElement":
        return self.scaled(Scalar(-1))

    def scaled(self, factor) -> "OperatorElement":
        factor = Scalar.coerce(factor)
        return OperatorElement(
            self.universe, {w: c * factor for w, c in self.terms.items()}
        )

    def __mul__(self, other):
        """Composition followed by normal reordering; or a scalar multiple."""
        if not isinstance(other, OperatorElement):
            return self.scaled(other)
        self._check_mate(other)
        out = OperatorElement(self.universe)
        for w1, c1 in self.terms.items():
            gens1 = word_generators(self.universe, w1)
            for w2, c2 in other.terms.items():
                gens = gens1 + word_generators(self.universe, w2)
                piece = normal_order(self.universe, gens).scaled(c1 * c2)
                out = out + piece
        return out

    def __rmul__(self, factor):
        return self.scaled(factor)

    def apply(self, psi: FockState) -> FockState:
        """Evaluate the endomorphism: contract the absorb part, wedge the emit part."""
        if psi.dual:
            raise SectorMismatchError("operators act on non-dual states")
        if self.universe != psi.universe:
            raise SectorMismatchError("operator and state universes differ")
        universe = self.universe
        out_terms: Dict[Monomial, Scalar] = {}
        for (emit_m, absorb_m), coeff in self.terms.items():
            for m_mono, m_coeff in psi.terms.items():
                if monomial_rank(absorb_m) > monomial_rank(m_mono):
                    continue
                contracted = _contract_monomial(universe, absorb_m, m_mono)
                for mono, c in contracted.items():
                    prod = monomial_product(universe, emit_m, mono)
                    if prod is None:
                        continue
                    sign, result = prod
                    add = coeff * m_coeff * c * Scalar(sign)
                    out_terms[result] = out_terms.get(result, Scalar.zero()) + add
        return FockState(universe, out_terms, dual=False)

    __call__ = apply

    def __eq__(self, other):
        if not isinstance(other, OperatorElement):
            return NotImplemented
        return self.universe == other.universe and self.terms == other.terms

    def __hash__(self):
        return hash((self.universe, tuple(sorted(self.terms.items()))))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        chunks = []
        for emit_m, absorb_m in sorted(self.terms):
            coeff = self.terms[(emit_m, absorb_m)]
            e_label = format_monomial(self.universe, emit_m)
            a_label = format_monomial(self.universe, absorb_m)
            chunks.append(f"emit[{e_label}]*absorb[{a_label}] * ({coeff})")
        return " + ".join(chunks)

    __repr__ = __str__


def _rank1_items(state: FockState):
    """(coefficient, sector_idx, mode) for each term of a rank-1 state."""
    items = []
    for mono, coeff in state.terms.items():
        if monomial_rank(mono) != 1:
            raise RankError("emission/absorption needs a rank-1 argument")
        ((sector_idx, mode),) = tuple(_monomial_items(mono))
        items.append((coeff, sector_idx, mode))
    return items


def emit(z: FockState) -> OperatorElement:
    """Emission operator a+[z] phi = z <> phi for a rank-1 state z."""
    if z.dual:
        raise SectorMismatchError("emit takes a non-dual rank-1 state")
    universe = z.universe
    vac = vacuum_monomial(universe)
    terms: Dict[Word, Scalar] = {}
    for coeff, sector_idx, mode in _rank1_items(z):
        mono = tuple(
            (mode,) if i == sector_idx else () for i in range(len(universe.sectors))
        )
        terms[(mono, vac)] = terms.get((mono, vac), Scalar.zero()) + coeff
    return OperatorElement(universe, terms)


def absorb(zeta: FockState) -> OperatorElement:
    """Absorption operator a[zeta] phi = zeta | phi for a rank-1 dual state."""
    if not zeta.dual:
        raise SectorMismatchError("absorb takes a dual rank-1 state")
    universe = zeta.universe
    vac = vacuum_monomial(universe)
    terms: Dict[Word, Scalar] = {}
    for coeff, sector_idx, mode in _rank1_items(zeta):
        mono = tuple(
            (mode,) if i == sector_idx else () for i in range(len(universe.sectors))
        )
        terms[(vac, mono)] = terms.get((vac, mono), Scalar.zero()) + coeff
    return OperatorElement(universe, terms)


def word_generators(universe: Universe, word: Word) -> Tuple[Generator, ...]:
    """Expand a stored word into its generator sequence (left factor acts last).

    The absorb monomial zeta_{a1} <> ... <> zeta_{ak} (ascending) acts by
    peeling the leftmost factor first, so its generator sequence is descending.
    """
    emit_m, absorb_m = word
    gens: List[Generator] = [("+", s, m) for s, m in _monomial_items(emit_m)]
    gens.extend(("-", s, m) for s, m in reversed(tuple(_monomial_items(absorb_m))))
    return tuple(gens)


def _generator_grade(universe: Universe, gen: Generator) -> int:
    return 1 if universe.sectors[gen[1]].is_fermion else 0


def _fold_monomial(universe: Universe, items):
    """Wedge rank-1 items left to right; (sign, monomial) or None on nilpotency."""
    sign = 1
    mono = vacuum_monomial(universe)
    for sector_idx, mode in items:
        single = tuple(
            (mode,) if i == sector_idx else () for i in range(len(universe.sectors))
        )
        prod = monomial_product(universe, mono, single)
        if prod is None:
            return None
        s, mono = prod
        sign *= s
    return sign, mono


def normal_order(universe: Universe, gens) -> OperatorElement:
    """The unique normal-ordered element equal to the composition of `gens`.

    Rewrites adjacent absorb-emit pairs with the super-commutation relation,
    then canonicalizes both sides of each fully ordered word.
    """
    gens = tuple(gens)
    out: Dict[Word, Scalar] = {}

    def emit_word(gens: Tuple[Generator, ...], coeff: Scalar):
        if coeff.is_zero():
            return
        split = next(
            (
                i
                for i in range(len(gens) - 1)
                if gens[i][0] == "-" and gens[i + 1][0] == "+"
            ),
            None,
        )
        if split is None:
            emissions = [(g[1], g[2]) for g in gens if g[0] == "+"]
            absorptions = [(g[1], g[2]) for g in gens if g[0] == "-"]
            folded_e = _fold_monomial(universe, emissions)
            if folded_e is None:
                return
            # reversed: word order w1..wk realizes zeta_{wk} <> ... <> zeta_{w1}
            folded_a = _fold_monomial(universe, reversed(absorptions))
            if folded_a is None:
                return
            sign = folded_e[0] * folded_a[0]
            word = (folded_e[1], folded_a[1])
            out[word] = out.get(word, Scalar.zero()) + coeff * Scalar(sign)
            return
        a_gen, e_gen = gens[split], gens[split + 1]
        swap_sign = (
            -1
            if _generator_grade(universe, a_gen) and _generator_grade(universe, e_gen)
            else 1
        )
        swapped = gens[:split] + (e_gen, a_gen) + gens[split + 2:]
        emit_word(swapped, coeff * Scalar(swap_sign))
        if a_gen[1] == e_gen[1] and a_gen[2] == e_gen[2]:
            contracted = gens[:split] + gens[split + 2:]
            emit_word(contracted, coeff)

    emit_word(gens, Scalar.one())
    return OperatorElement(universe, out)


def op_word(universe: Universe, gens) -> OperatorElement:
    """op of a tensor word: the normal-ordered image of the composition."""
    return normal_order(universe, gens)


def op_apply(x: OperatorElement, psi: FockState) -> FockState:
    return x.apply(psi)


def apply_generators(universe: Universe, gens, psi: FockState) -> FockState:
    """Raw composition: apply generators right to left, one at a time."""
    out = psi
    for kind, sector_idx, mode in reversed(tuple(gens)):
        single = FockState.mode(
            universe, universe.sectors[sector_idx].name, mode, dual=(kind == "-")
        )
        if kind == "+":
            out = exterior_product(single, out)
        else:
            # as an endomorphism of the state space, absorption kills the vacuum
            kept = FockState(
                universe,
                {m: c for m, c in out.terms.items() if monomial_rank(m) >= 1},
            )
            if kept.is_zero():
                out = FockState(universe, {})
            else:
                out = interior_product(single, kept)
    return out


def super_bracket(x: OperatorElement, y: OperatorElement) -> OperatorElement:
    """XY - (-1)^{|X||Y|} YX on definite-grade parts, extended bilinearly."""
    x._check_mate(y)
    out = OperatorElement(x.universe)
    for xe, x_grade in zip(x.graded_parts(), (0, 1)):
        if xe.is_zero():
            continue
        for ye, y_grade in zip(y.graded_parts(), (0, 1)):
            if ye.is_zero():
                continue
            sign = Scalar((-1) ** (x_grade * y_grade))
            out = out + xe * ye - (ye * xe).scaled(sign)
    return out


# -- exhaustive bases -----------------------------------------------------------


def basis_monomials(universe: Universe, max_rank: int):
    """All canonical monomials of total rank <= max_rank, deterministic order."""
    import itertools

    per_sector: List[List[Tuple[int, ...]]] = []
    for sector in universe.sectors:
        parts: List[Tuple[int, ...]] = []
        for r in range(max_rank + 1):
            if sector.is_fermion:
                parts.extend(itertools.combinations(sector.modes, r))
            else:
                parts.extend(
                    itertools.combinations_with_replacement(sector.modes, r)
                )
        per_sector.append(parts)
    out = []
    for combo in itertools.product(*per_sector):
        if monomial_rank(combo) <= max_rank:
            out.append(tuple(combo))
    out.sort()
    return out


def basis_states(universe: Universe, max_rank: int, dual: bool = False):
    return [
        FockState(universe, {m: Scalar.one()}, dual)
        for m in basis_monomials(universe, max_rank)
    ]
