"""Two-spinor tensors, the complex symplectic form and the generated Minkowski pairing.

The primitive space is a two-dimensional complex vector space U carrying a
half unit of length.  Tensors over U and its dual/conjugate variants are kept
sparse, with a variance tag per slot and a single rational unit exponent.  A
normalized symplectic 2-form (fixed up to phase by eps(e1, e2) = 1 in the
standard basis) generates the bilinear pairing g on U (x) Ubar whose restriction
to the Hermitian subspace is a Lorentz metric, the Pauli tetrads, and the null
decomposition of isotropic Hermitian elements.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Dict, Iterable, Tuple

from .exactfield import Scalar, UnitMismatchError


class VarianceError(TypeError):
    """Slot signature of a tensor does not match the operation."""


class DegenerateBasisError(ValueError):
    """The two given spinors do not form a basis."""


class NullDecompositionError(ValueError):
    """Base class for null-decomposition failures."""


class NonNullError(NullDecompositionError):
    """Input is not isotropic; carries the exact value of g(y, y)."""

    def __init__(self, g_value: Scalar):
        super().__init__(f"vector is not null: g(y,y) = {g_value}")
        self.g_value = g_value


class ZeroVectorError(NullDecompositionError):
    """The zero vector has no product decomposition."""


class NotFactorableError(NullDecompositionError):
    """Null over the field, but u with y = +/- u (x) ubar has no exact representative."""


class Variance(enum.Enum):
    U = "U"
    U_DUAL = "U*"
    U_BAR = "Ubar"
    U_BAR_DUAL = "Ubar*"

    @property
    def dual(self) -> "Variance":
        return _DUAL[self]

    @property
    def conjugate(self) -> "Variance":
        return _CONJ[self]

    @property
    def unit_weight(self) -> Fraction:
        # U carries L^(1/2); dual slots carry the opposite exponent.
        return Fraction(1, 2) if self in (Variance.U, Variance.U_BAR) else Fraction(-1, 2)

    def __str__(self) -> str:
        return self.value


_DUAL = {
    Variance.U: Variance.U_DUAL,
    Variance.U_DUAL: Variance.U,
    Variance.U_BAR: Variance.U_BAR_DUAL,
    Variance.U_BAR_DUAL: Variance.U_BAR,
}
_CONJ = {
    Variance.U: Variance.U_BAR,
    Variance.U_BAR: Variance.U,
    Variance.U_DUAL: Variance.U_BAR_DUAL,
    Variance.U_BAR_DUAL: Variance.U_DUAL,
}

Index = Tuple[int, ...]


def default_unit(slots: Tuple[Variance, ...]) -> Fraction:
    return sum((s.unit_weight for s in slots), Fraction(0))


class ScaledTensor:
    """Sparse tensor over the two-spinor space with variance tags and a unit exponent.

    Entries map multi-indices (components 1 or 2) to nonzero scalars; absent
    keys are zero.  Instances are immutable.
    """

    __slots__ = ("slots", "unit", "entries")

    def __init__(self, slots: Iterable[Variance], entries: Dict[Index, Scalar], unit: Fraction | None = None):
        slots = tuple(slots)
        if unit is None:
            unit = default_unit(slots)
        clean: Dict[Index, Scalar] = {}
        for key, value in entries.items():
            key = tuple(key)
            if len(key) != len(slots) or any(k not in (1, 2) for k in key):
                raise VarianceError(f"bad index {key} for slots {slots}")
            value = Scalar.coerce(value)
            if not value.is_zero():
                clean[key] = value
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "unit", Fraction(unit))
        object.__setattr__(self, "entries", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ScaledTensor is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, slots: Iterable[Variance], unit: Fraction | None = None) -> "ScaledTensor":
        return cls(slots, {}, unit)

    @classmethod
    def basis(cls, variance: Variance, index: int, unit: Fraction | None = None) -> "ScaledTensor":
        return cls((variance,), {(index,): Scalar.one()}, unit)

    @classmethod
    def from_matrix(cls, slots, matrix, unit: Fraction | None = None) -> "ScaledTensor":
        """2-slot tensor from a 2x2 nested sequence of scalars."""
        entries = {}
        for a in (1, 2):
            for b in (1, 2):
                entries[(a, b)] = Scalar.coerce(matrix[a - 1][b - 1])
        return cls(slots, entries, unit)

    # -- structure -----------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.slots)

    def is_zero(self) -> bool:
        return not self.entries

    def get(self, key: Index) -> Scalar:
        return self.entries.get(tuple(key), Scalar.zero())

    def component_matrix(self):
        """2x2 component list for a 2-slot tensor."""
        if self.rank != 2:
            raise VarianceError("component_matrix needs a 2-slot tensor")
        return [[self.get((a, b)) for b in (1, 2)] for a in (1, 2)]

    # -- linear operations -----------------------------------------------------

    def _check_compatible(self, other: "ScaledTensor"):
        if self.slots != other.slots:
            raise VarianceError(f"slot mismatch: {self.slots} vs {other.slots}")
        if self.unit != other.unit:
            raise UnitMismatchError(f"unit mismatch: {self.unit} vs {other.unit}")

    def __add__(self, other: "ScaledTensor") -> "ScaledTensor":
        self._check_compatible(other)
        entries = dict(self.entries)
        for key, value in other.entries.items():
            entries[key] = entries.get(key, Scalar.zero()) + value
        return ScaledTensor(self.slots, entries, self.unit)

    def __sub__(self, other: "ScaledTensor") -> "ScaledTensor":
        return self + (-other)

    def __neg__(self) -> "ScaledTensor":
        return self.scaled(Scalar(-1))

    def scaled(self, factor) -> "ScaledTensor":
        factor = Scalar.coerce(factor)
        return ScaledTensor(
            self.slots, {k: v * factor for k, v in self.entries.items()}, self.unit
        )

    def __mul__(self, other):
        """Scalar multiple, or tensor product when `other` is a tensor."""
        if isinstance(other, ScaledTensor):
            return self.tensor(other)
        return self.scaled(other)

    def __rmul__(self, other):
        return self.scaled(other)

    def tensor(self, other: "ScaledTensor") -> "ScaledTensor":
        entries = {}
        for k1, v1 in self.entries.items():
            for k2, v2 in other.entries.items():
                entries[k1 + k2] = v1 * v2
        return ScaledTensor(self.slots + other.slots, entries, self.unit + other.unit)

    def conj(self) -> "ScaledTensor":
        """Componentwise conjugate; every slot moves to its conjugate space."""
        return ScaledTensor(
            tuple(s.conjugate for s in self.slots),
            {k: v.conj() for k, v in self.entries.items()},
            self.unit,
        )

    def contract(self, pos1: int, pos2: int) -> "ScaledTensor":
        """Natural pairing of a slot with its dual slot; unit weights cancel."""
        if pos1 == pos2:
            raise VarianceError("cannot contract a slot with itself")
        lo, hi = sorted((pos1, pos2))
        if self.slots[lo].dual is not self.slots[hi]:
            raise VarianceError(
                f"slots {self.slots[lo]} and {self.slots[hi]} are not dual"
            )
        keep = [i for i in range(self.rank) if i not in (lo, hi)]
        slots = tuple(self.slots[i] for i in keep)
        entries: Dict[Index, Scalar] = {}
        for key, value in self.entries.items():
            if key[lo] != key[hi]:
                continue
            new_key = tuple(key[i] for i in keep)
            entries[new_key] = entries.get(new_key, Scalar.zero()) + value
        return ScaledTensor(slots, entries, self.unit)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScaledTensor):
            return NotImplemented
        return (
            self.slots == other.slots
            and self.unit == other.unit
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.slots, self.unit, tuple(sorted(self.entries.items(), key=lambda kv: kv[0]))))

    def __str__(self) -> str:
        return format_tensor(self)

    def __repr__(self) -> str:
        return f"ScaledTensor({self})"


def format_tensor(t: ScaledTensor) -> str:
    """Canonical DSL text, e.g. ``tensor [U,Ubar] { (1,1): 1; (1,2): i }``."""
    slots = ",".join(str(s) for s in t.slots)
    body = "; ".join(
        f"({','.join(map(str, key))}): {value}"
        for key, value in sorted(t.entries.items())
    )
    unit = "" if t.unit == default_unit(t.slots) else f" unit={t.unit}"
    return f"tensor [{slots}]{unit} {{ {body} }}" if body else f"tensor [{slots}]{unit} {{ }}"


# -- basis shorthands ---------------------------------------------------------


def e(i: int) -> ScaledTensor:
    return ScaledTensor.basis(Variance.U, i)


def ebar(i: int) -> ScaledTensor:
    return ScaledTensor.basis(Variance.U_BAR, i)


def estar(i: int) -> ScaledTensor:
    return ScaledTensor.basis(Variance.U_DUAL, i)


def ebarstar(i: int) -> ScaledTensor:
    return ScaledTensor.basis(Variance.U_BAR_DUAL, i)


_UU = (Variance.U, Variance.U_BAR)


def _require_uu(t: ScaledTensor, what: str):
    if t.slots != _UU:
        raise VarianceError(f"{what} needs slots [U,Ubar], got {t.slots}")


# -- Hermitian structure (independent of the symplectic form) ------------------


def hermitian_transpose(t: ScaledTensor) -> ScaledTensor:
    """(u (x) vbar)-dagger = v (x) ubar, extended real-linearly."""
    _require_uu(t, "hermitian_transpose")
    entries = {(b, a): v.conj() for (a, b), v in t.entries.items()}
    return ScaledTensor(_UU, entries, t.unit)


def is_hermitian(t: ScaledTensor) -> bool:
    return t.slots == _UU and hermitian_transpose(t) == t


def hermitian_split(t: ScaledTensor) -> Tuple[ScaledTensor, ScaledTensor]:
    """Unique (h, h') with t = h + i*h', both dagger-fixed."""
    _require_uu(t, "hermitian_split")
    dag = hermitian_transpose(t)
    half = Scalar(Fraction(1, 2))
    h = (t + dag).scaled(half)
    hp = (t - dag).scaled(half / Scalar.i())
    return h, hp


def mink_trace(y: ScaledTensor) -> Scalar:
    _require_uu(y, "mink_trace")
    return y.get((1, 1)) + y.get((2, 2))


# -- the symplectic form and everything it generates ---------------------------

_J = ((0, 1), (-1, 0))  # component matrix of the phase-1 symplectic form


class EpsilonStructure:
    """The normalized complex symplectic form on U, fixed up to a phase.

    The phase must be unit-modulus; all phase-invariant derived objects (the
    pairing g, the Dirac map) are unchanged under rephasing, which the test
    suite asserts by rebuilding with phase i.
    """

    def __init__(self, phase: Scalar | int = 1):
        phase = Scalar.coerce(phase)
        if phase * phase.conj() != Scalar.one():
            raise ValueError(f"epsilon phase must have unit modulus, got {phase}")
        self.phase = phase

    # eps as a tensor with slots [U*, U*] and unit exponent -1.
    def eps_tensor(self) -> ScaledTensor:
        return ScaledTensor(
            (Variance.U_DUAL, Variance.U_DUAL),
            {(1, 2): self.phase, (2, 1): -self.phase},
            Fraction(-1),
        )

    def eps_value(self, u: ScaledTensor, v: ScaledTensor) -> Scalar:
        if u.slots != (Variance.U,) or v.slots != (Variance.U,):
            raise VarianceError("eps_value needs two [U] tensors")
        total = Scalar.zero()
        for (a,), x in u.entries.items():
            for (b,), y in v.entries.items():
                j = _J[a - 1][b - 1]
                if j:
                    total = total + x * y * Scalar(j)
        return total * self.phase

    def epsbar_value(self, ub: ScaledTensor, vb: ScaledTensor) -> Scalar:
        return self.eps_value(ub.conj(), vb.conj()).conj()

    def eps_flat(self, u: ScaledTensor) -> ScaledTensor:
        """U -> U*; <eps_flat(u), v> = eps(u, v)."""
        if u.slots != (Variance.U,):
            raise VarianceError("eps_flat needs a [U] tensor")
        entries: Dict[Index, Scalar] = {}
        for (a,), x in u.entries.items():
            for b in (1, 2):
                j = _J[a - 1][b - 1]
                if j:
                    prev = entries.get((b,), Scalar.zero())
                    entries[(b,)] = prev + x * self.phase * Scalar(j)
        return ScaledTensor((Variance.U_DUAL,), entries, u.unit - 1)

    def eps_sharp(self, lam: ScaledTensor) -> ScaledTensor:
        """U* -> U; the inverse of eps_flat with a sign: eps_sharp(eps_flat(u)) = -u."""
        if lam.slots != (Variance.U_DUAL,):
            raise VarianceError("eps_sharp needs a [U*] tensor")
        inv_phase = self.phase.conj()  # unit modulus
        l1, l2 = lam.get((1,)), lam.get((2,))
        entries = {(1,): -inv_phase * l2, (2,): inv_phase * l1}
        return ScaledTensor((Variance.U,), entries, lam.unit + 1)

    def epsbar_flat(self, ub: ScaledTensor) -> ScaledTensor:
        """Ubar -> Ubar*, the conjugate of eps_flat."""
        if ub.slots != (Variance.U_BAR,):
            raise VarianceError("epsbar_flat needs a [Ubar] tensor")
        return self.eps_flat(ub.conj()).conj()

    def epsbar_sharp(self, lamb: ScaledTensor) -> ScaledTensor:
        if lamb.slots != (Variance.U_BAR_DUAL,):
            raise VarianceError("epsbar_sharp needs a [Ubar*] tensor")
        return self.eps_sharp(lamb.conj()).conj()

    # -- Minkowski pairing ----------------------------------------------------

    def g_pairing(self, y: ScaledTensor, yp: ScaledTensor) -> Scalar:
        """g(u (x) vbar, u' (x) v'bar) = eps(u, u') epsbar(vbar, v'bar)."""
        _require_uu(y, "g_pairing")
        _require_uu(yp, "g_pairing")
        if y.unit + yp.unit != 2:
            raise UnitMismatchError(
                f"g needs total unit exponent 2, got {y.unit} + {yp.unit}"
            )
        total = Scalar.zero()
        # |phase|^2 = 1 makes g phase-independent; keep the factor anyway.
        factor = self.phase * self.phase.conj()
        for (a, b), x in y.entries.items():
            for (c, d), z in yp.entries.items():
                j = _J[a - 1][c - 1] * _J[b - 1][d - 1]
                if j:
                    total = total + x * z * Scalar(j)
        return total * factor

    def is_mink_vector(self, y: ScaledTensor) -> bool:
        return is_hermitian(y)

    # -- Pauli tetrad -----------------------------------------------------------

    def pauli_tetrad(self, b1: ScaledTensor, b2: ScaledTensor):
        """Four Hermitian elements built from a basis of U via Pauli matrices.

        The Gram matrix under g is |eps(b1,b2)|^2 * diag(1,-1,-1,-1); it equals
        the Minkowski matrix exactly when the basis is eps-unimodular and the
        basis vectors carry the standard half unit.
        """
        for b in (b1, b2):
            if b.slots != (Variance.U,):
                raise VarianceError("pauli_tetrad needs [U] tensors")
        if b1.unit != b2.unit:
            raise UnitMismatchError("basis spinors must carry equal unit exponents")
        if self.eps_value(b1, b2).is_zero():
            raise DegenerateBasisError("basis spinors are linearly dependent")
        c1, c2 = b1.conj(), b2.conj()
        inv_r2 = Scalar.one() / Scalar.sqrt2()
        i = Scalar.i()
        t11, t12 = b1.tensor(c1), b1.tensor(c2)
        t21, t22 = b2.tensor(c1), b2.tensor(c2)
        theta0 = (t11 + t22).scaled(inv_r2)
        theta1 = (t12 + t21).scaled(inv_r2)
        theta2 = (t21 - t12).scaled(i * inv_r2)
        theta3 = (t11 - t22).scaled(inv_r2)
        return theta0, theta1, theta2, theta3

    # -- null decomposition ------------------------------------------------------

    def null_decompose(self, y: ScaledTensor) -> Tuple[int, ScaledTensor]:
        """Write a nonzero isotropic Hermitian y as sign * u (x) ubar.

        The sign +1 marks the future orientation.  u is determined up to a
        unit-modulus scalar; the representative returned is the deterministic
        output of the exact norm-equation solver.  Raises NonNullError,
        ZeroVectorError, or NotFactorableError (the last when the required
        norm equation has no solution in Q(i, sqrt2)).
        """
        from .normsolve import solve_norm

        _require_uu(y, "null_decompose")
        if not is_hermitian(y):
            raise VarianceError("null_decompose needs a Hermitian (dagger-fixed) element")
        if y.is_zero():
            raise ZeroVectorError("zero vector has no null decomposition")
        # g(y, y) = 2 det of the component matrix, independent of the phase
        det = y.get((1, 1)) * y.get((2, 2)) - y.get((1, 2)) * y.get((2, 1))
        g_yy = det * Scalar(2)
        if not g_yy.is_zero():
            raise NonNullError(g_yy)
        sign = mink_trace(y).real_sign()
        # Hermitian, rank one, nonzero: the trace cannot vanish.
        assert sign != 0
        w = y.scaled(Scalar(sign))
        # pivot column j with W[j][j] != 0 spans the image; v0 = column_j / W[j][j]
        pivot = 1 if not w.get((1, 1)).is_zero() else 2
        w_jj = w.get((pivot, pivot))
        if w_jj.is_zero():
            # both diagonal entries vanish: Hermitian rank-1 forces y = 0
            raise ZeroVectorError("degenerate Hermitian matrix")
        v0 = (w.get((1, pivot)) / w_jj, w.get((2, pivot)) / w_jj)
        sigma = solve_norm(w_jj)
        if sigma is None:
            raise NotFactorableError(
                f"null element with pivot norm {w_jj} has no spinor square root over Q(i,sqrt2)"
            )
        half_unit = y.unit / 2
        u = ScaledTensor(
            (Variance.U,),
            {(1,): sigma * v0[0], (2,): sigma * v0[1]},
            half_unit,
        )
        check = u.tensor(u.conj())
        if ScaledTensor(_UU, check.entries, y.unit) != w:
            raise NotFactorableError("norm solver returned an inconsistent factor")
        return sign, u


STANDARD = EpsilonStructure()


def eps_flat(u: ScaledTensor) -> ScaledTensor:
    return STANDARD.eps_flat(u)


def eps_sharp(lam: ScaledTensor) -> ScaledTensor:
    return STANDARD.eps_sharp(lam)


def g_pairing(y: ScaledTensor, yp: ScaledTensor) -> Scalar:
    return STANDARD.g_pairing(y, yp)


def pauli_tetrad(b1: ScaledTensor, b2: ScaledTensor):
    return STANDARD.pauli_tetrad(b1, b2)


def null_decompose(y: ScaledTensor) -> Tuple[int, ScaledTensor]:
    return STANDARD.null_decompose(y)
