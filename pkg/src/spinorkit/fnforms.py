"""Differential forms with exact polynomial coefficients on a coordinate chart.

Forms live on R^m with 1 <= m <= 4; coefficients are polynomials over
Q(i, sqrt2), so every identity below is decided exactly.  Components are
stored on strictly increasing axis subsets; all signs flow from sorting
permutation parity.  Scalar-, tangent-, vector- and matrix-valued forms share
the same skeleton:

* exterior differential and wedge products,
* Lie derivative along a polynomial vector field (direct coordinate formula,
  with the Cartan identity kept as an independent test),
* the Frolicher-Nijenhuis bracket of tangent-valued forms via the five-term
  rule on decomposables,
* covariant differential d_A = d + A /\\ . , curvature F = dA + A /\\ A, and the
  Bianchi residual dF + [A, F] which must vanish identically.
"""

from __future__ import annotations

from typing import Dict, Tuple

from .exactfield import Scalar

AXIS_NAMES = "xyzw"

Exponents = Tuple[int, ...]
Axes = Tuple[int, ...]


class ChartError(ValueError):
    """Dimension or fibre mismatch between chart objects."""


class DegreeOverflowError(ValueError):
    """Requested form degree exceeds the chart dimension."""


def _check_dim(dim: int):
    if not 1 <= dim <= 4:
        raise ChartError(f"chart dimension must be 1..4, got {dim}")


class Poly:
    """Sparse multivariate polynomial with Scalar coefficients."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Dict[Exponents, Scalar] | None = None):
        _check_dim(dim)
        clean: Dict[Exponents, Scalar] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != dim or any(e < 0 for e in exps):
                raise ChartError(f"bad exponent tuple {exps} for dim {dim}")
            coeff = Scalar.coerce(coeff)
            if not coeff.is_zero():
                clean[exps] = coeff
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, dim: int, value) -> "Poly":
        return cls(dim, {(0,) * dim: Scalar.coerce(value)})

    @classmethod
    def var(cls, dim: int, axis: int) -> "Poly":
        exps = [0] * dim
        exps[axis] = 1
        return cls(dim, {tuple(exps): Scalar.one()})

    def is_zero(self) -> bool:
        return not self.terms

    def _binop(self, other: "Poly", negate: bool) -> "Poly":
        if self.dim != other.dim:
            raise ChartError("polynomial dimension mismatch")
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            add = -coeff if negate else coeff
            terms[exps] = terms.get(exps, Scalar.zero()) + add
        return Poly(self.dim, terms)

    def __add__(self, other: "Poly") -> "Poly":
        return self._binop(other, False)

    def __sub__(self, other: "Poly") -> "Poly":
        return self._binop(other, True)

    def __neg__(self) -> "Poly":
        return self.scaled(Scalar(-1))

    def scaled(self, factor) -> "Poly":
        factor = Scalar.coerce(factor)
        return Poly(self.dim, {k: v * factor for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scaled(other)
        if self.dim != other.dim:
            raise ChartError("polynomial dimension mismatch")
        terms: Dict[Exponents, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                terms[key] = terms.get(key, Scalar.zero()) + c1 * c2
        return Poly(self.dim, terms)

    __rmul__ = __mul__

    def diff(self, axis: int) -> "Poly":
        terms: Dict[Exponents, Scalar] = {}
        for exps, coeff in self.terms.items():
            k = exps[axis]
            if k == 0:
                continue
            new = list(exps)
            new[axis] = k - 1
            key = tuple(new)
            terms[key] = terms.get(key, Scalar.zero()) + coeff * Scalar(k)
        return Poly(self.dim, terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.terms.items()))))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for exps, coeff in sorted(self.terms.items()):
            factors = []
            for axis, power in enumerate(exps):
                if power == 1:
                    factors.append(AXIS_NAMES[axis])
                elif power > 1:
                    factors.append(f"{AXIS_NAMES[axis]}^{power}")
            body = "*".join(factors)
            cs = str(coeff)
            if body:
                cs = body if cs == "1" else (f"-{body}" if cs == "-1" else f"({cs})*{body}")
            chunks.append(cs)
        return " + ".join(chunks)

    __repr__ = __str__


def _merge_axes(s1: Axes, s2: Axes):
    """Concatenate-and-sort with Koszul sign; None when an axis repeats."""
    merged = list(s1 + s2)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(merged)):
        j = i
        while j > 0 and merged[j - 1] > merged[j]:
            merged[j - 1], merged[j] = merged[j], merged[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and merged[j - 1] == merged[j]:
            return None
    return sign, tuple(merged)


def _subsets_ok(axes: Axes, dim: int):
    if any(not 0 <= a < dim for a in axes):
        raise ChartError(f"axis out of range in {axes}")
    if any(a >= b for a, b in zip(axes, axes[1:])):
        raise ChartError(f"axes must be strictly increasing, got {axes}")


class Form:
    """Scalar-valued differential form with polynomial coefficients."""

    __slots__ = ("dim", "degree", "comps")

    def __init__(self, dim: int, degree: int, comps: Dict[Axes, Poly] | None = None):
        _check_dim(dim)
        if degree < 0:
            raise DegreeOverflowError("negative degree")
        clean: Dict[Axes, Poly] = {}
        for axes, poly in (comps or {}).items():
            axes = tuple(axes)
            if len(axes) != degree:
                raise ChartError(f"component {axes} has wrong arity for degree {degree}")
            _subsets_ok(axes, dim)
            if poly.dim != dim:
                raise ChartError("component polynomial on wrong chart")
            if not poly.is_zero():
                clean[axes] = poly
        if degree > dim and clean:
            raise DegreeOverflowError(f"degree {degree} exceeds dimension {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "comps", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Form is immutable")

    def is_zero(self) -> bool:
        return not self.comps

    def __add__(self, other: "Form") -> "Form":
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise ChartError("form shape mismatch")
        comps = dict(self.comps)
        for axes, poly in other.comps.items():
            comps[axes] = comps.get(axes, Poly(self.dim)) + poly
        return Form(self.dim, self.degree, comps)

    def __sub__(self, other: "Form") -> "Form":
        return self + other.scaled(Scalar(-1))

    def __neg__(self) -> "Form":
        return self.scaled(Scalar(-1))

    def scaled(self, factor) -> "Form":
        return Form(
            self.dim, self.degree, {k: v.scaled(factor) for k, v in self.comps.items()}
        )

    def wedge(self, other: "Form") -> "Form":
        if self.dim != other.dim:
            raise ChartError("wedge across different charts")
        out: Dict[Axes, Poly] = {}
        for s1, p1 in self.comps.items():
            for s2, p2 in other.comps.items():
                merged = _merge_axes(s1, s2)
                if merged is None:
                    continue
                sign, axes = merged
                add = (p1 * p2).scaled(Scalar(sign))
                out[axes] = out.get(axes, Poly(self.dim)) + add
        return Form(self.dim, self.degree + other.degree, out)

    def d(self) -> "Form":
        out: Dict[Axes, Poly] = {}
        for axes, poly in self.comps.items():
            for j in range(self.dim):
                if j in axes:
                    continue
                dp = poly.diff(j)
                if dp.is_zero():
                    continue
                sign, new_axes = _merge_axes((j,), axes)
                out[new_axes] = out.get(new_axes, Poly(self.dim)) + dp.scaled(Scalar(sign))
        return Form(self.dim, self.degree + 1, out)

    def interior(self, field) -> "Form":
        """Contraction with a polynomial vector field (list of dim polynomials)."""
        if self.degree == 0:
            return Form(self.dim, 0)
        out: Dict[Axes, Poly] = {}
        for axes, poly in self.comps.items():
            for t, axis in enumerate(axes):
                u_comp = field[axis]
                if u_comp.is_zero():
                    continue
                rest = axes[:t] + axes[t + 1:]
                add = (u_comp * poly).scaled(Scalar((-1) ** t))
                out[rest] = out.get(rest, Poly(self.dim)) + add
        return Form(self.dim, self.degree - 1, out)

    def lie(self, field) -> "Form":
        """Lie derivative along a polynomial vector field, coordinate formula."""
        out: Dict[Axes, Poly] = {}

        def accumulate(axes, poly):
            if not poly.is_zero():
                out[axes] = out.get(axes, Poly(self.dim)) + poly

        for axes, poly in self.comps.items():
            directional = Poly(self.dim)
            for j in range(self.dim):
                directional = directional + field[j] * poly.diff(j)
            accumulate(axes, directional)
            # frame terms: replace axis s_t by j with weight d(u^{s_t})/dx^j
            for t, axis in enumerate(axes):
                for j in range(self.dim):
                    du = field[axis].diff(j)
                    if du.is_zero():
                        continue
                    if j in axes and j != axis:
                        continue
                    if j == axis:
                        accumulate(axes, du * poly)
                        continue
                    merged = _merge_axes((j,), axes[:t] + axes[t + 1:])
                    if merged is None:
                        continue
                    sign, new_axes = merged
                    # dx^j lands in slot t of the original ordering
                    accumulate(new_axes, (du * poly).scaled(Scalar(sign * (-1) ** t)))
        return Form(self.dim, self.degree, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.degree == other.degree
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.dim, self.degree, tuple(sorted(self.comps.items(), key=lambda kv: kv[0]))))

    def __str__(self) -> str:
        return format_form(self)

    __repr__ = __str__


def _axes_label(axes: Axes) -> str:
    return "^".join("d" + AXIS_NAMES[a] for a in axes) if axes else "1"


def format_form(f: Form) -> str:
    body = "; ".join(
        f'{_axes_label(axes)} : poly "{poly}"' for axes, poly in sorted(f.comps.items())
    )
    return f"form deg={f.degree} dim={f.dim} {{ {body} }}"


class TangentForm:
    """Tangent-valued form: sum of (scalar form) (x) coordinate vector field."""

    __slots__ = ("dim", "degree", "comps")

    def __init__(self, dim: int, degree: int, comps=None):
        _check_dim(dim)
        clean: Dict[Tuple[Axes, int], Poly] = {}
        for (axes, out_axis), poly in (comps or {}).items():
            axes = tuple(axes)
            if len(axes) != degree:
                raise ChartError("component arity mismatch")
            _subsets_ok(axes, dim)
            if not 0 <= out_axis < dim:
                raise ChartError(f"output axis {out_axis} out of range")
            if poly.dim != dim:
                raise ChartError("component polynomial on wrong chart")
            if not poly.is_zero():
                clean[(axes, out_axis)] = poly
        if degree > dim and clean:
            raise DegreeOverflowError(f"degree {degree} exceeds dimension {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "comps", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TangentForm is immutable")

    @classmethod
    def vector_field(cls, dim: int, components) -> "TangentForm":
        comps = {}
        for axis, poly in enumerate(components):
            comps[((), axis)] = poly
        return cls(dim, 0, comps)

    def field_components(self):
        """For a degree-0 form: the dim polynomial components."""
        if self.degree != 0:
            raise ChartError("not a vector field")
        return [self.comps.get(((), j), Poly(self.dim)) for j in range(self.dim)]

    def is_zero(self) -> bool:
        return not self.comps

    def __add__(self, other: "TangentForm") -> "TangentForm":
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise ChartError("tangent form shape mismatch")
        comps = dict(self.comps)
        for key, poly in other.comps.items():
            comps[key] = comps.get(key, Poly(self.dim)) + poly
        return TangentForm(self.dim, self.degree, comps)

    def __sub__(self, other: "TangentForm") -> "TangentForm":
        return self + other.scaled(Scalar(-1))

    def __neg__(self) -> "TangentForm":
        return self.scaled(Scalar(-1))

    def scaled(self, factor) -> "TangentForm":
        return TangentForm(
            self.dim, self.degree, {k: v.scaled(factor) for k, v in self.comps.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TangentForm):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.degree == other.degree
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.dim, self.degree, tuple(sorted(self.comps.items(), key=lambda kv: (kv[0][0], kv[0][1])))))

    def __str__(self) -> str:
        body = "; ".join(
            f'{_axes_label(axes)} -> axis {AXIS_NAMES[out]} : poly "{poly}"'
            for (axes, out), poly in sorted(
                self.comps.items(), key=lambda kv: (kv[0][0], kv[0][1])
            )
        )
        return f"form deg={self.degree} dim={self.dim} {{ {body} }}"

    __repr__ = __str__


def fn_bracket(zeta: TangentForm, xi: TangentForm) -> TangentForm:
    """Frolicher-Nijenhuis bracket via the five-term rule on decomposables.

    For decomposables l (x) u and m (x) v (u, v coordinate fields, so [u,v]
    and the frame terms of L[u] vanish):

        fnb = l /\\ (L[u] m) (x) v  -  (L[v] l) /\\ m (x) u
              + (-1)^r (v | l) /\\ dm (x) u  +  (-1)^r dl /\\ (u | m) (x) v
    """
    if zeta.dim != xi.dim:
        raise ChartError("bracket across different charts")
    dim = zeta.dim
    r, s = zeta.degree, xi.degree
    if r + s > dim:
        raise DegreeOverflowError(
            f"bracket degree {r}+{s} exceeds chart dimension {dim}"
        )
    out: Dict[Tuple[Axes, int], Poly] = {}

    def accumulate(form: Form, out_axis: int, sign: int = 1):
        for axes, poly in form.comps.items():
            if sign != 1:
                poly = poly.scaled(Scalar(sign))
            key = (axes, out_axis)
            prev = out.get(key)
            out[key] = poly if prev is None else prev + poly

    sign_r = (-1) ** r
    for (s_axes, j), lam_poly in zeta.comps.items():
        lam = Form(dim, r, {s_axes: lam_poly})
        d_lam = lam.d()
        for (t_axes, k), mu_poly in xi.comps.items():
            mu = Form(dim, s, {t_axes: mu_poly})
            # term 2: l /\ (d_j m) (x) v
            dj_mu = Form(dim, s, {t_axes: mu_poly.diff(j)})
            accumulate(lam.wedge(dj_mu), k)
            # term 3: - (d_k l) /\ m (x) u
            dk_lam = Form(dim, r, {s_axes: lam_poly.diff(k)})
            accumulate(dk_lam.wedge(mu), j, -1)
            # term 4: (-1)^r (v | l) /\ dm (x) u
            if k in s_axes:
                v_lam = lam.interior(_basis_field(dim, k))
                accumulate(v_lam.wedge(mu.d()), j, sign_r)
            # term 5: (-1)^r dl /\ (u | m) (x) v
            if j in t_axes:
                u_mu = mu.interior(_basis_field(dim, j))
                accumulate(d_lam.wedge(u_mu), k, sign_r)
    return TangentForm(dim, r + s, out)


def _basis_field(dim: int, axis: int):
    fields = []
    for j in range(dim):
        fields.append(Poly.const(dim, 1) if j == axis else Poly(dim))
    return fields


def lie_bracket(u: TangentForm, v: TangentForm) -> TangentForm:
    """Lie bracket of vector fields; the degree-(0,0) case of the bracket."""
    return fn_bracket(u, v)


# -- vector- and matrix-valued forms ------------------------------------------


class VectorForm:
    """Form with values in a fibre C^k (components are k-tuples of polynomials)."""

    __slots__ = ("dim", "degree", "fibre", "comps")

    def __init__(self, dim: int, degree: int, fibre: int, comps=None):
        _check_dim(dim)
        if fibre < 1:
            raise ChartError("fibre dimension must be positive")
        clean: Dict[Axes, tuple] = {}
        for axes, vec in (comps or {}).items():
            axes = tuple(axes)
            if len(axes) != degree:
                raise ChartError("component arity mismatch")
            _subsets_ok(axes, dim)
            vec = tuple(vec)
            if len(vec) != fibre or any(p.dim != dim for p in vec):
                raise ChartError("bad fibre vector")
            if any(not p.is_zero() for p in vec):
                clean[axes] = vec
        if degree > dim and clean:
            raise DegreeOverflowError(f"degree {degree} exceeds dimension {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "fibre", fibre)
        object.__setattr__(self, "comps", clean)

    def __setattr__(self, name, value):
        raise AttributeError("VectorForm is immutable")

    def is_zero(self) -> bool:
        return not self.comps

    def _zero_vec(self):
        return tuple(Poly(self.dim) for _ in range(self.fibre))

    def __add__(self, other: "VectorForm") -> "VectorForm":
        if (self.dim, self.degree, self.fibre) != (other.dim, other.degree, other.fibre):
            raise ChartError("vector form shape mismatch")
        comps = dict(self.comps)
        for axes, vec in other.comps.items():
            base = comps.get(axes, self._zero_vec())
            comps[axes] = tuple(a + b for a, b in zip(base, vec))
        return VectorForm(self.dim, self.degree, self.fibre, comps)

    def __sub__(self, other: "VectorForm") -> "VectorForm":
        return self + other.scaled(Scalar(-1))

    def scaled(self, factor) -> "VectorForm":
        return VectorForm(
            self.dim,
            self.degree,
            self.fibre,
            {k: tuple(p.scaled(factor) for p in v) for k, v in self.comps.items()},
        )

    def d(self) -> "VectorForm":
        out: Dict[Axes, tuple] = {}
        for axes, vec in self.comps.items():
            for j in range(self.dim):
                if j in axes:
                    continue
                dvec = tuple(p.diff(j) for p in vec)
                if all(p.is_zero() for p in dvec):
                    continue
                sign, new_axes = _merge_axes((j,), axes)
                base = out.get(new_axes, self._zero_vec())
                out[new_axes] = tuple(
                    b + p.scaled(Scalar(sign)) for b, p in zip(base, dvec)
                )
        return VectorForm(self.dim, self.degree + 1, self.fibre, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorForm):
            return NotImplemented
        return (
            (self.dim, self.degree, self.fibre) == (other.dim, other.degree, other.fibre)
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.dim, self.degree, self.fibre, tuple(sorted(self.comps.items(), key=lambda kv: kv[0]))))

    def __str__(self) -> str:
        body = "; ".join(
            f"{_axes_label(axes)} : [" + ", ".join(f'poly "{p}"' for p in vec) + "]"
            for axes, vec in sorted(self.comps.items())
        )
        return f"vform deg={self.degree} dim={self.dim} fibre={self.fibre} {{ {body} }}"

    __repr__ = __str__


class MatrixForm:
    """Form with values in k x k matrices of polynomials (a connection/curvature)."""

    __slots__ = ("dim", "degree", "fibre", "comps")

    def __init__(self, dim: int, degree: int, fibre: int, comps=None):
        _check_dim(dim)
        if fibre < 1:
            raise ChartError("fibre dimension must be positive")
        clean: Dict[Axes, tuple] = {}
        for axes, mat in (comps or {}).items():
            axes = tuple(axes)
            if len(axes) != degree:
                raise ChartError("component arity mismatch")
            _subsets_ok(axes, dim)
            mat = tuple(tuple(row) for row in mat)
            if len(mat) != fibre or any(len(row) != fibre for row in mat):
                raise ChartError("bad fibre matrix")
            if any(p.dim != dim for row in mat for p in row):
                raise ChartError("matrix polynomial on wrong chart")
            if any(not p.is_zero() for row in mat for p in row):
                clean[axes] = mat
        if degree > dim and clean:
            raise DegreeOverflowError(f"degree {degree} exceeds dimension {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "fibre", fibre)
        object.__setattr__(self, "comps", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixForm is immutable")

    def is_zero(self) -> bool:
        return not self.comps

    def _zero_mat(self):
        return tuple(
            tuple(Poly(self.dim) for _ in range(self.fibre)) for _ in range(self.fibre)
        )

    def __add__(self, other: "MatrixForm") -> "MatrixForm":
        if (self.dim, self.degree, self.fibre) != (other.dim, other.degree, other.fibre):
            raise ChartError("matrix form shape mismatch")
        comps = dict(self.comps)
        for axes, mat in other.comps.items():
            base = comps.get(axes, self._zero_mat())
            comps[axes] = tuple(
                tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(base, mat)
            )
        return MatrixForm(self.dim, self.degree, self.fibre, comps)

    def __sub__(self, other: "MatrixForm") -> "MatrixForm":
        return self + other.scaled(Scalar(-1))

    def scaled(self, factor) -> "MatrixForm":
        return MatrixForm(
            self.dim,
            self.degree,
            self.fibre,
            {
                k: tuple(tuple(p.scaled(factor) for p in row) for row in m)
                for k, m in self.comps.items()
            },
        )

    def d(self) -> "MatrixForm":
        out: Dict[Axes, tuple] = {}
        for axes, mat in self.comps.items():
            for j in range(self.dim):
                if j in axes:
                    continue
                dmat = tuple(tuple(p.diff(j) for p in row) for row in mat)
                if all(p.is_zero() for row in dmat for p in row):
                    continue
                sign, new_axes = _merge_axes((j,), axes)
                base = out.get(new_axes, self._zero_mat())
                out[new_axes] = tuple(
                    tuple(b + p.scaled(Scalar(sign)) for b, p in zip(r1, r2))
                    for r1, r2 in zip(base, dmat)
                )
        return MatrixForm(self.dim, self.degree + 1, self.fibre, out)

    def wedge_matrix(self, other: "MatrixForm") -> "MatrixForm":
        """Wedge of forms combined with matrix multiplication on the fibre."""
        if self.dim != other.dim or self.fibre != other.fibre:
            raise ChartError("matrix wedge shape mismatch")
        n = self.fibre
        out: Dict[Axes, tuple] = {}
        for s1, m1 in self.comps.items():
            for s2, m2 in other.comps.items():
                merged = _merge_axes(s1, s2)
                if merged is None:
                    continue
                sign, axes = merged
                prod = [
                    [Poly(self.dim) for _ in range(n)] for _ in range(n)
                ]
                for i in range(n):
                    for j in range(n):
                        acc = Poly(self.dim)
                        for k in range(n):
                            acc = acc + m1[i][k] * m2[k][j]
                        prod[i][j] = acc.scaled(Scalar(sign))
                base = out.get(axes)
                if base is None:
                    out[axes] = tuple(tuple(row) for row in prod)
                else:
                    out[axes] = tuple(
                        tuple(a + b for a, b in zip(r1, r2))
                        for r1, r2 in zip(base, prod)
                    )
        return MatrixForm(self.dim, self.degree + other.degree, self.fibre, out)

    def wedge_vector(self, other: VectorForm) -> VectorForm:
        """Matrix form acting on a vector-valued form."""
        if self.dim != other.dim or self.fibre != other.fibre:
            raise ChartError("matrix/vector wedge shape mismatch")
        n = self.fibre
        out: Dict[Axes, tuple] = {}
        for s1, mat in self.comps.items():
            for s2, vec in other.comps.items():
                merged = _merge_axes(s1, s2)
                if merged is None:
                    continue
                sign, axes = merged
                prod = []
                for i in range(n):
                    acc = Poly(self.dim)
                    for k in range(n):
                        acc = acc + mat[i][k] * vec[k]
                    prod.append(acc.scaled(Scalar(sign)))
                base = out.get(axes, tuple(Poly(self.dim) for _ in range(n)))
                out[axes] = tuple(b + p for b, p in zip(base, prod))
        return VectorForm(self.dim, self.degree + other.degree, self.fibre, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixForm):
            return NotImplemented
        return (
            (self.dim, self.degree, self.fibre) == (other.dim, other.degree, other.fibre)
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.dim, self.degree, self.fibre, tuple(sorted(self.comps.items(), key=lambda kv: kv[0]))))

    def __str__(self) -> str:
        body = "; ".join(
            f"{_axes_label(axes)} : ["
            + ", ".join(
                "[" + ", ".join(f'poly "{p}"' for p in row) + "]" for row in mat
            )
            + "]"
            for axes, mat in sorted(self.comps.items())
        )
        return f"mform deg={self.degree} dim={self.dim} fibre={self.fibre} {{ {body} }}"

    __repr__ = __str__


# -- gauge calculus ------------------------------------------------------------


def ext_derivative(omega):
    """Exterior differential of a scalar-, vector- or matrix-valued form."""
    if isinstance(omega, (Form, VectorForm, MatrixForm)):
        return omega.d()
    raise ChartError(f"cannot differentiate {type(omega).__name__}")


def lie_derivative(field: TangentForm, omega: Form) -> Form:
    """Lie derivative of a scalar form along a vector field (degree-0 tangent form)."""
    return omega.lie(field.field_components())


def covariant_differential(a: MatrixForm, phi: VectorForm) -> VectorForm:
    """d_A phi = d phi + A /\\ phi for a degree-1 connection form A."""
    if a.degree != 1:
        raise ChartError("connection form must have degree 1")
    return phi.d() + a.wedge_vector(phi)


def curvature(a: MatrixForm) -> MatrixForm:
    """F = dA + A /\\ A."""
    if a.degree != 1:
        raise ChartError("connection form must have degree 1")
    return a.d() + a.wedge_matrix(a)


def bianchi_residual(a: MatrixForm) -> MatrixForm:
    """dF + A /\\ F - F /\\ A; identically zero for every connection form."""
    f = curvature(a)
    return f.d() + a.wedge_matrix(f) - f.wedge_matrix(a)
