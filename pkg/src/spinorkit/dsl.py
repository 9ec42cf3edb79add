"""Text DSL: tensor/form/state literals, expression evaluation, canonical printing.

A program is a sequence of statements:

    universe { sector f: fermion [1,2,3]; sector b: boson [1,2] }
    let y = e1 * eb1
    g( e1*eb1, e2*eb2 )            -- prints 1
    f:1 ^ f:2 * (1+i)              -- fock exterior product, scalar rescale

Scalar literals are ordinary arithmetic over the constants `i` and `r2`
(so `1-3/2*i` is exact), `^` is the exterior/wedge product, `|` the interior
product, a trailing `'` dualizes a fock state.  Every value prints in its
canonical form, and literals round-trip bit-exactly through their printers.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import diracw, fnforms, fockalg, spintensor
from .exactfield import Scalar
from .fnforms import AXIS_NAMES, Form, MatrixForm, Poly, TangentForm, VectorForm
from .fockalg import FockState, OperatorElement, Sector, Statistics, Universe
from .spintensor import ScaledTensor, Variance


class DslError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


_PUNCT = set("()[]{},;:*^|'=+-/\"->")
_TWO_CHAR = ("->",)


class Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind  # 'int' | 'name' | 'punct' | 'string' | 'eof'
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Token({self.kind}, {self.value!r})"


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise DslError("unterminated string", line, col)
                j += 1
            if j >= n:
                raise DslError("unterminated string", line, col)
            tokens.append(Token("string", text[i + 1: j], line, col))
            col += j - i + 1
            i = j + 1
            continue
        if text.startswith("->", i):
            tokens.append(Token("punct", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", int(text[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise DslError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", None, line, col))
    return tokens


_VARIANCES = {
    "U": Variance.U,
    "U*": Variance.U_DUAL,
    "Ubar": Variance.U_BAR,
    "Ubar*": Variance.U_BAR_DUAL,
}


def _poly_from_string(text: str, dim: int, line: int, col: int) -> Poly:
    """Parse a polynomial string like 'x^2*y + (1+i)*z - 3/2'."""
    sub = Parser(tokenize(text), Environment())
    try:
        poly = sub._parse_poly_sum(dim)
        sub.expect_eof()
    except DslError as exc:
        raise DslError(f"in poly string {text!r}: {exc}", line, col) from None
    return poly


class Environment:
    def __init__(self):
        self.bindings: Dict[str, object] = {}
        self.universe: Optional[Universe] = None

    def predefined(self, name: str):
        eps = spintensor.STANDARD
        table = {
            "i": Scalar.i(),
            "r2": Scalar.sqrt2(),
            "e1": spintensor.e(1),
            "e2": spintensor.e(2),
            "eb1": spintensor.ebar(1),
            "eb2": spintensor.ebar(2),
            "es1": spintensor.estar(1),
            "es2": spintensor.estar(2),
            "ebs1": spintensor.ebarstar(1),
            "ebs2": spintensor.ebarstar(2),
            "id4": diracw.EndW.identity(),
        }
        if name in table:
            return table[name]
        if name in ("theta0", "theta1", "theta2", "theta3"):
            tetrad = eps.pauli_tetrad(spintensor.e(1), spintensor.e(2))
            return tetrad[int(name[-1])]
        if name == "vac":
            if self.universe is None:
                raise KeyError(name)
            return FockState.vacuum(self.universe)
        raise KeyError(name)


def _call_split(tau, psi):
    return diracw.observer_split(tau, psi)


def _call_apply(op, arg):
    if isinstance(op, diracw.EndW) and isinstance(arg, diracw.DiracVector):
        return op.apply(arg)
    if isinstance(op, OperatorElement) and isinstance(arg, FockState):
        return op.apply(arg)
    raise TypeError(f"apply() cannot act with {type(op).__name__} on {type(arg).__name__}")


_FUNCTIONS = {
    "g": lambda y, yp: spintensor.g_pairing(y, yp),
    "gamma": lambda y: diracw.gamma(y),
    "fnb": lambda z, x: fnforms.fn_bracket(z, x),
    "d": lambda w: fnforms.ext_derivative(w),
    "lie": lambda u, w: fnforms.lie_derivative(u, w),
    "curv": lambda a: fnforms.curvature(a),
    "bianchi": lambda a: fnforms.bianchi_residual(a),
    "covd": lambda a, phi: fnforms.covariant_differential(a, phi),
    "eps_flat": lambda u: spintensor.eps_flat(u),
    "eps_sharp": lambda lam: spintensor.eps_sharp(lam),
    "dagger": lambda t: spintensor.hermitian_transpose(t),
    "hsplit": lambda t: spintensor.hermitian_split(t),
    "tetrad": lambda b1, b2: spintensor.pauli_tetrad(b1, b2),
    "nulldec": lambda y: spintensor.null_decompose(y),
    "adjoint": lambda psi: diracw.dirac_adjoint(psi),
    "k": lambda psi, phi: diracw.k_form(psi, phi),
    "cc": lambda psi: diracw.charge_conjugate(psi),
    "split": _call_split,
    "apply": _call_apply,
    "emit": lambda z: fockalg.emit(z),
    "absorb": lambda z: fockalg.absorb(z),
    "sbracket": lambda x, y: fockalg.super_bracket(x, y),
    "pair": lambda lam, psi: fockalg.pairing(lam, psi),
    "json": lambda state: fockalg.state_to_json(state),
    "conj": lambda x: x.conj(),
}


class Parser:
    def __init__(self, tokens: List[Token], env: Environment):
        self.tokens = tokens
        self.pos = 0
        self.env = env

    # -- cursor helpers ---------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise DslError(message, tok.line, tok.col)

    def match_punct(self, value: str) -> bool:
        tok = self.peek()
        if tok.kind == "punct" and tok.value == value:
            self.pos += 1
            return True
        return False

    def expect_punct(self, value: str):
        if not self.match_punct(value):
            self.error(f"expected {value!r}")

    def match_name(self, value: str) -> bool:
        tok = self.peek()
        if tok.kind == "name" and tok.value == value:
            self.pos += 1
            return True
        return False

    def expect_name(self) -> str:
        tok = self.peek()
        if tok.kind != "name":
            self.error("expected a name")
        self.pos += 1
        return tok.value

    def expect_int(self) -> int:
        tok = self.peek()
        if tok.kind != "int":
            self.error("expected an integer")
        self.pos += 1
        return tok.value

    def expect_eof(self):
        if self.peek().kind != "eof":
            self.error("unexpected trailing input")

    # -- program --------------------------------------------------------------

    def parse_program(self) -> List[str]:
        outputs: List[str] = []
        while self.peek().kind != "eof":
            if self.match_punct(";"):
                continue
            if self.peek().kind == "name" and self.peek().value == "universe":
                self.advance()
                self._parse_universe_stmt()
                continue
            if self.peek().kind == "name" and self.peek().value == "let":
                self.advance()
                name = self.expect_name()
                self.expect_punct("=")
                value = self.parse_expr()
                self.env.bindings[name] = value
                continue
            value = self.parse_expr()
            outputs.append(format_value(value))
        return outputs

    def _parse_universe_stmt(self):
        name = None
        if self.peek().kind == "name" and self.peek().value != "sector":
            name = self.expect_name()
        self.expect_punct("{")
        sectors = []
        while not self.match_punct("}"):
            if self.match_punct(";"):
                continue
            if not self.match_name("sector"):
                self.error("expected 'sector'")
            s_name = self.expect_name()
            self.expect_punct(":")
            kind = self.expect_name()
            if kind not in ("fermion", "boson"):
                self.error("sector kind must be 'fermion' or 'boson'")
            self.expect_punct("[")
            modes = [self.expect_int()]
            while self.match_punct(","):
                modes.append(self.expect_int())
            self.expect_punct("]")
            stats = Statistics.FERMION if kind == "fermion" else Statistics.BOSON
            sectors.append(Sector(s_name, stats, modes))
        universe = Universe(sectors)
        self.env.universe = universe
        if name:
            self.env.bindings[name] = universe

    # -- expressions -------------------------------------------------------------

    def parse_expr(self):
        return self._parse_additive()

    def _parse_additive(self):
        value = self._parse_multiplicative()
        while True:
            if self.match_punct("+"):
                value = _binop_add(value, self._parse_multiplicative(), self)
            elif self.match_punct("-"):
                rhs = self._parse_multiplicative()
                value = _binop_add(value, _negate(rhs, self), self)
            else:
                return value

    def _parse_multiplicative(self):
        value = self._parse_wedge()
        while True:
            if self.match_punct("*"):
                value = _binop_mul(value, self._parse_wedge(), self)
            elif self.match_punct("/"):
                value = _binop_div(value, self._parse_wedge(), self)
            elif self.match_punct("|"):
                value = _binop_interior(value, self._parse_wedge(), self)
            else:
                return value

    def _parse_wedge(self):
        value = self._parse_unary()
        while self.match_punct("^"):
            value = _binop_wedge(value, self._parse_unary(), self)
        return value

    def _parse_unary(self):
        if self.match_punct("-"):
            return _negate(self._parse_unary(), self)
        return self._parse_postfix()

    def _parse_postfix(self):
        value = self._parse_atom()
        while self.match_punct("'"):
            value = _dualize(value, self)
        return value

    def _parse_atom(self):
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return Scalar(tok.value)
        if tok.kind == "punct" and tok.value == "(":
            self.advance()
            value = self.parse_expr()
            self.expect_punct(")")
            return value
        if tok.kind == "name":
            if tok.value == "tensor":
                self.advance()
                return self._parse_tensor_literal()
            if tok.value == "dirac":
                self.advance()
                return self._parse_dirac_literal()
            if tok.value in ("form", "mform", "vform"):
                self.advance()
                return self._parse_form_literal(tok.value)
            self.advance()
            name = tok.value
            # mode reference  sector:mode
            if self.peek().kind == "punct" and self.peek().value == ":":
                nxt = self.tokens[self.pos + 1]
                if nxt.kind == "int":
                    self.advance()
                    mode = self.expect_int()
                    if self.env.universe is None:
                        self.error("no universe declared for mode reference", tok)
                    try:
                        return FockState.mode(self.env.universe, name, mode)
                    except Exception as exc:
                        self.error(str(exc), tok)
            if self.peek().kind == "punct" and self.peek().value == "(":
                return self._parse_call(name, tok)
            if name in self.env.bindings:
                return self.env.bindings[name]
            try:
                return self.env.predefined(name)
            except KeyError:
                self.error(f"unknown name {name!r}", tok)
        self.error("expected an expression")

    def _parse_call(self, name: str, tok: Token):
        fn = _FUNCTIONS.get(name)
        if fn is None:
            self.error(f"unknown function {name!r}", tok)
        self.expect_punct("(")
        args = []
        if not self.match_punct(")"):
            args.append(self.parse_expr())
            while self.match_punct(","):
                args.append(self.parse_expr())
            self.expect_punct(")")
        try:
            return fn(*args)
        except DslError:
            raise
        except Exception as exc:
            self.error(f"{type(exc).__name__}: {exc}", tok)

    # -- literals -----------------------------------------------------------------

    def _parse_variance(self) -> Variance:
        name = self.expect_name()
        if self.match_punct("*"):
            name += "*"
        variance = _VARIANCES.get(name)
        if variance is None:
            self.error(f"unknown variance {name!r}")
        return variance

    def _parse_fraction(self) -> Fraction:
        sign = -1 if self.match_punct("-") else 1
        num = self.expect_int()
        den = 1
        if self.match_punct("/"):
            den = self.expect_int()
        return Fraction(sign * num, den)

    def _parse_tensor_literal(self) -> ScaledTensor:
        self.expect_punct("[")
        slots = [self._parse_variance()]
        while self.match_punct(","):
            slots.append(self._parse_variance())
        self.expect_punct("]")
        unit = None
        if self.peek().kind == "name" and self.peek().value == "unit":
            self.advance()
            self.expect_punct("=")
            unit = self._parse_fraction()
        self.expect_punct("{")
        entries = {}
        while not self.match_punct("}"):
            if self.match_punct(";"):
                continue
            self.expect_punct("(")
            index = [self.expect_int()]
            while self.match_punct(","):
                index.append(self.expect_int())
            self.expect_punct(")")
            self.expect_punct(":")
            value = self.parse_expr()
            if not isinstance(value, Scalar):
                self.error("tensor entries must be scalars")
            entries[tuple(index)] = value
        try:
            return ScaledTensor(slots, entries, unit)
        except Exception as exc:
            self.error(str(exc))

    def _parse_dirac_literal(self) -> diracw.DiracVector:
        self.expect_punct("(")
        if not self.match_name("u"):
            self.error("expected 'u' component")
        self.expect_punct(":")
        self.expect_punct("[")
        u1 = self.parse_expr()
        self.expect_punct(",")
        u2 = self.parse_expr()
        self.expect_punct("]")
        self.expect_punct(",")
        if not self.match_name("lbar"):
            self.error("expected 'lbar' component")
        self.expect_punct(":")
        self.expect_punct("[")
        l1 = self.parse_expr()
        self.expect_punct(",")
        l2 = self.parse_expr()
        self.expect_punct("]")
        self.expect_punct(")")
        return diracw.DiracVector((u1, u2, l1, l2))

    def _parse_axes_label(self, dim: int) -> Tuple[int, ...]:
        tok = self.peek()
        if tok.kind == "int" and tok.value == 1:
            self.advance()
            return ()
        axes = []
        while True:
            name = self.expect_name()
            if len(name) != 2 or name[0] != "d" or name[1] not in AXIS_NAMES[:dim]:
                self.error(f"bad differential {name!r}")
            axes.append(AXIS_NAMES.index(name[1]))
            if not self.match_punct("^"):
                break
        return tuple(axes)

    def _parse_poly_value(self, dim: int) -> Poly:
        if not self.match_name("poly"):
            self.error("expected 'poly \"...\"'")
        tok = self.peek()
        if tok.kind != "string":
            self.error("expected a quoted polynomial")
        self.advance()
        return _poly_from_string(tok.value, dim, tok.line, tok.col)

    def _parse_form_literal(self, keyword: str):
        header = {}
        for key in ("deg", "dim") + (("fibre",) if keyword in ("mform", "vform") else ()):
            if not self.match_name(key):
                self.error(f"expected '{key}='")
            self.expect_punct("=")
            header[key] = self.expect_int()
        degree, dim = header["deg"], header["dim"]
        fibre = header.get("fibre")
        self.expect_punct("{")
        scalar_comps: Dict[Tuple[int, ...], Poly] = {}
        tangent_comps = {}
        matrix_comps = {}
        vector_comps = {}
        is_tangent = False
        while not self.match_punct("}"):
            if self.match_punct(";"):
                continue
            axes = self._parse_axes_label(dim)
            if self.match_punct("->"):
                if not self.match_name("axis"):
                    self.error("expected 'axis'")
                axis_name = self.expect_name()
                if axis_name not in AXIS_NAMES[:dim]:
                    self.error(f"bad axis {axis_name!r}")
                self.expect_punct(":")
                poly = self._parse_poly_value(dim)
                tangent_comps[(axes, AXIS_NAMES.index(axis_name))] = poly
                is_tangent = True
                continue
            self.expect_punct(":")
            if keyword == "mform":
                matrix_comps[axes] = self._parse_poly_matrix(dim, fibre)
            elif keyword == "vform":
                vector_comps[axes] = self._parse_poly_vector(dim, fibre)
            else:
                scalar_comps[axes] = self._parse_poly_value(dim)
        try:
            if keyword == "mform":
                return MatrixForm(dim, degree, fibre, matrix_comps)
            if keyword == "vform":
                return VectorForm(dim, degree, fibre, vector_comps)
            if is_tangent:
                if scalar_comps:
                    self.error("cannot mix scalar and tangent components")
                return TangentForm(dim, degree, tangent_comps)
            return Form(dim, degree, scalar_comps)
        except Exception as exc:
            self.error(str(exc))

    def _parse_poly_vector(self, dim: int, fibre: int):
        self.expect_punct("[")
        polys = [self._parse_poly_value(dim)]
        while self.match_punct(","):
            polys.append(self._parse_poly_value(dim))
        self.expect_punct("]")
        if len(polys) != fibre:
            self.error(f"expected {fibre} fibre components, got {len(polys)}")
        return tuple(polys)

    def _parse_poly_matrix(self, dim: int, fibre: int):
        self.expect_punct("[")
        rows = [self._parse_poly_vector(dim, fibre)]
        while self.match_punct(","):
            rows.append(self._parse_poly_vector(dim, fibre))
        self.expect_punct("]")
        if len(rows) != fibre:
            self.error(f"expected {fibre} fibre rows, got {len(rows)}")
        return tuple(rows)

    # -- polynomial sub-grammar ----------------------------------------------------

    def _parse_poly_sum(self, dim: int) -> Poly:
        total = self._parse_poly_term(dim, self.match_punct("-"))
        while True:
            if self.match_punct("+"):
                total = total + self._parse_poly_term(dim, self.match_punct("-"))
            elif self.match_punct("-"):
                total = total + self._parse_poly_term(dim, True)
            else:
                return total

    def _parse_poly_term(self, dim: int, negated: bool) -> Poly:
        coeff = Scalar(-1) if negated else Scalar.one()
        exps = [0] * dim
        while True:
            tok = self.peek()
            if tok.kind == "int":
                self.advance()
                num = tok.value
                if self.match_punct("/"):
                    den = self.expect_int()
                    coeff = coeff * Scalar(Fraction(num, den))
                else:
                    coeff = coeff * Scalar(num)
            elif tok.kind == "name" and tok.value == "i":
                self.advance()
                coeff = coeff * Scalar.i()
            elif tok.kind == "name" and tok.value == "r2":
                self.advance()
                coeff = coeff * Scalar.sqrt2()
            elif tok.kind == "name" and tok.value in AXIS_NAMES[:dim]:
                self.advance()
                power = 1
                if self.match_punct("^"):
                    power = self.expect_int()
                exps[AXIS_NAMES.index(tok.value)] += power
            elif tok.kind == "punct" and tok.value == "(":
                self.advance()
                inner = self._parse_poly_sum(dim)
                self.expect_punct(")")
                if inner.terms and all(e == 0 for k in inner.terms for e in k):
                    coeff = coeff * inner.terms[(0,) * dim]
                elif not inner.terms:
                    coeff = coeff * Scalar.zero()
                else:
                    self.error("parenthesized poly factors must be scalar")
            else:
                break
            if not self.match_punct("*"):
                break
        return Poly(dim, {tuple(exps): coeff})


# -- operator dispatch -------------------------------------------------------------


def _negate(value, parser):
    if hasattr(value, "__neg__"):
        return -value
    parser.error(f"cannot negate {type(value).__name__}")


def _binop_add(a, b, parser):
    if isinstance(a, Scalar) and isinstance(b, Scalar):
        return a + b
    if type(a) is type(b) and hasattr(a, "__add__"):
        try:
            return a + b
        except Exception as exc:
            parser.error(f"{type(exc).__name__}: {exc}")
    parser.error(
        f"cannot add {type(a).__name__} and {type(b).__name__}"
    )


def _binop_mul(a, b, parser):
    try:
        if isinstance(a, Scalar) and not isinstance(b, Scalar):
            a, b = b, a
        if isinstance(a, ScaledTensor) and isinstance(b, ScaledTensor):
            return a.tensor(b)
        if isinstance(b, Scalar):
            if isinstance(a, Scalar):
                return a * b
            if hasattr(a, "scaled"):
                return a.scaled(b)
        if type(a) is type(b) and isinstance(a, (diracw.EndW, OperatorElement, Poly)):
            return a * b
    except DslError:
        raise
    except Exception as exc:
        parser.error(f"{type(exc).__name__}: {exc}")
    parser.error(f"cannot multiply {type(a).__name__} and {type(b).__name__}")


def _binop_div(a, b, parser):
    if isinstance(b, Scalar):
        try:
            if isinstance(a, Scalar):
                return a / b
            if hasattr(a, "scaled"):
                return a.scaled(b.inverse())
        except ZeroDivisionError:
            parser.error("division by zero")
    parser.error(f"cannot divide {type(a).__name__} by {type(b).__name__}")


def _binop_wedge(a, b, parser):
    try:
        if isinstance(a, FockState) and isinstance(b, FockState):
            return fockalg.exterior_product(a, b)
        if isinstance(a, Form) and isinstance(b, Form):
            return a.wedge(b)
        if isinstance(a, MatrixForm) and isinstance(b, MatrixForm):
            return a.wedge_matrix(b)
        if isinstance(a, MatrixForm) and isinstance(b, VectorForm):
            return a.wedge_vector(b)
    except DslError:
        raise
    except Exception as exc:
        parser.error(f"{type(exc).__name__}: {exc}")
    parser.error(f"cannot wedge {type(a).__name__} with {type(b).__name__}")


def _binop_interior(a, b, parser):
    try:
        if isinstance(a, FockState) and isinstance(b, FockState):
            return fockalg.interior_product(a, b)
    except DslError:
        raise
    except Exception as exc:
        parser.error(f"{type(exc).__name__}: {exc}")
    parser.error(
        f"cannot contract {type(a).__name__} with {type(b).__name__}"
    )


def _dualize(value, parser):
    if isinstance(value, FockState):
        return FockState(value.universe, value.terms, not value.dual)
    parser.error(f"cannot dualize {type(value).__name__}")


def format_value(value) -> str:
    if isinstance(value, Scalar):
        return str(value)
    if isinstance(value, tuple):
        return "(" + ", ".join(format_value(v) for v in value) + ")"
    if isinstance(value, int):
        return str(value)
    return str(value)


def eval_program(text: str, env: Optional[Environment] = None) -> List[str]:
    """Evaluate a DSL program; returns the printed form of each expression."""
    env = env or Environment()
    parser = Parser(tokenize(text), env)
    outputs = parser.parse_program()
    parser.expect_eof()
    return outputs
