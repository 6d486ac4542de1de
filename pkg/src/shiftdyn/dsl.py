"""A small textual language (.kws files) for weight families and operators.

One space per file: a ``family`` block (weights v(m,k,j), exponent p, scalar
lambda, hints), plus optional ``weights`` and ``symbol`` declarations.
Expressions compile to log-space numpy evaluators, and to exact Fraction
evaluators when every operation is rational.  ``min``-recursions may refer to
the previous level through ``prev(offset)``.

Grammar (informative)::

    spec      := decl+
    decl      := family | weights | symbol
    family    := "family" NAME "{" ("p" "=" INT)? ("lambda" "=" INT)?
                 "v(m,k,j)" "=" cases ("hints" "{" hint ("," hint)* "}")? "}"
    weights   := "weights" NAME "=" expr
    symbol    := "symbol" NAME "=" NAME "(" ")"
    cases     := ("when" pred "->" expr ";")* expr
    pred      := cmp ("and" cmp)*
    cmp       := expr ("=="|"!="|"<="|">="|"<"|">") expr
    expr      := arithmetic over m k j with + - * / % ^ and calls:
                 exp log log2 sqrt logfactorial nu2 oddpart ceillog2
                 min(e, ...) prev(INT)

Comments run from ``#`` to end of line.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np

from .classifier import ScanBounds, SpaceSpec, Structure
from .conjugacy import WeightSequence, unit_weights
from .symbols import BUILTIN_SYMBOLS, Symbol, successor_symbol
from .weights import (
    DecreasingInLevel,
    Exponent,
    IncreasingInGrade,
    LimitZero,
    TailMonotone,
    WeightFamily,
)

LOG2 = math.log(2.0)


class DslError(ValueError):
    """Parse or compile failure with a source position."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str  # m | k | j


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * / % ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple


@dataclass(frozen=True)
class Prev:
    offset: int


@dataclass(frozen=True)
class Cmp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pred:
    terms: tuple  # conjunction of Cmp


Expr = Union[Num, Var, BinOp, Neg, Call, Prev]


@dataclass(frozen=True)
class Cases:
    branches: tuple  # of (Pred, Expr)
    default: Expr


@dataclass(frozen=True)
class FamilyDecl:
    name: str
    p: Optional[int]
    lam: Optional[int]
    body: Cases
    hints: tuple


@dataclass(frozen=True)
class WeightsDecl:
    name: str
    expr: Expr


@dataclass(frozen=True)
class SymbolDecl:
    name: str
    builtin: str


@dataclass(frozen=True)
class SpecAST:
    decls: tuple


KNOWN_HINTS = (
    "decreasing-in-level",
    "increasing-in-grade",
    "limit-zero",
    "tail-monotone-down",
)

UNARY_FNS = ("exp", "log", "log2", "sqrt", "logfactorial", "nu2", "oddpart", "ceillog2")


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_-]*)
  | (?P<op>->|==|!=|<=|>=|[-+*/%^(){},;=<>])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # num | name | op | eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str) -> DslError:
        t = self.cur
        return DslError(msg, t.line, t.col)

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        t = self.cur
        if t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.accept(kind, text)
        if t is None:
            want = text or kind
            raise self.error(f"expected {want!r}, found {self.cur.text!r}")
        return t

    # -- declarations ------------------------------------------------------

    def parse_spec(self) -> SpecAST:
        decls = []
        while self.cur.kind != "eof":
            decls.append(self.parse_decl())
        if not decls:
            raise self.error("empty specification")
        return SpecAST(tuple(decls))

    def parse_decl(self):
        if self.accept("name", "family"):
            return self.parse_family()
        if self.accept("name", "weights"):
            name = self.expect("name").text
            self.expect("op", "=")
            return WeightsDecl(name, self.parse_expr())
        if self.accept("name", "symbol"):
            name = self.expect("name").text
            self.expect("op", "=")
            builtin = self.expect("name").text
            self.expect("op", "(")
            self.expect("op", ")")
            if builtin not in BUILTIN_SYMBOLS:
                raise self.error(f"unknown symbol builtin {builtin!r}")
            return SymbolDecl(name, builtin)
        raise self.error("expected 'family', 'weights', or 'symbol'")

    def parse_family(self) -> FamilyDecl:
        name = self.expect("name").text
        self.expect("op", "{")
        p = lam = None
        if self.accept("name", "p"):
            self.expect("op", "=")
            p = int(self.expect("num").text)
        if self.accept("name", "lambda"):
            self.expect("op", "=")
            lam = int(self.expect("num").text)
        self.expect("name", "v")
        self.expect("op", "(")
        for var, sep in (("m", ","), ("k", ","), ("j", ")")):
            self.expect("name", var)
            self.expect("op", sep)
        self.expect("op", "=")
        body = self.parse_cases()
        hints = ()
        if self.accept("name", "hints"):
            self.expect("op", "{")
            names = [self.parse_hint()]
            while self.accept("op", ","):
                names.append(self.parse_hint())
            self.expect("op", "}")
            hints = tuple(sorted(set(names)))
        self.expect("op", "}")
        return FamilyDecl(name, p, lam, body, hints)

    def parse_hint(self) -> str:
        t = self.expect("name")
        if t.text not in KNOWN_HINTS:
            raise DslError(f"unknown hint {t.text!r}", t.line, t.col)
        return t.text

    # -- expressions -------------------------------------------------------

    def parse_cases(self) -> Cases:
        branches = []
        while self.accept("name", "when"):
            pred = self.parse_pred()
            self.expect("op", "->")
            expr = self.parse_expr()
            self.expect("op", ";")
            branches.append((pred, expr))
        return Cases(tuple(branches), self.parse_expr())

    def parse_pred(self) -> Pred:
        terms = [self.parse_cmp()]
        while self.accept("name", "and"):
            terms.append(self.parse_cmp())
        return Pred(tuple(terms))

    def parse_cmp(self) -> Cmp:
        left = self.parse_expr()
        for op in ("==", "!=", "<=", ">=", "<", ">"):
            if self.accept("op", op):
                return Cmp(op, left, self.parse_expr())
        raise self.error("expected a comparison operator")

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while True:
            if self.accept("op", "+"):
                node = BinOp("+", node, self.parse_term())
            elif self.accept("op", "-"):
                node = BinOp("-", node, self.parse_term())
            else:
                return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while True:
            for op in ("*", "/", "%"):
                if self.accept("op", op):
                    node = BinOp(op, node, self.parse_unary())
                    break
            else:
                return node

    def parse_unary(self) -> Expr:
        if self.accept("op", "-"):
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.accept("op", "^"):
            return BinOp("^", base, self.parse_unary())  # right-associative
        return base

    def parse_atom(self) -> Expr:
        if t := self.accept("num"):
            return Num(int(t.text))
        if self.accept("op", "("):
            node = self.parse_expr()
            self.expect("op", ")")
            return node
        t = self.cur
        if t.kind == "name":
            name = t.text
            if name in ("m", "k", "j"):
                self.i += 1
                return Var(name)
            if name == "prev":
                self.i += 1
                self.expect("op", "(")
                off = int(self.expect("num").text)
                self.expect("op", ")")
                return Prev(off)
            if name == "min":
                self.i += 1
                self.expect("op", "(")
                args = [self.parse_expr()]
                while self.accept("op", ","):
                    args.append(self.parse_expr())
                self.expect("op", ")")
                if len(args) < 2:
                    raise DslError("min needs at least two arguments", t.line, t.col)
                return Call("min", tuple(args))
            if name in UNARY_FNS:
                self.i += 1
                self.expect("op", "(")
                arg = self.parse_expr()
                self.expect("op", ")")
                return Call(name, (arg,))
            raise DslError(f"unknown identifier {name!r}", t.line, t.col)
        raise self.error(f"expected an expression, found {t.text!r}")


def parse(text: str) -> SpecAST:
    return _Parser(text).parse_spec()


# ---------------------------------------------------------------------------
# Canonical formatter
# ---------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "%": 2, "neg": 3, "^": 4}


def _fmt(e: Expr, parent_prec: int = 0, right_of_pow: bool = False) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Prev):
        return f"prev({e.offset})"
    if isinstance(e, Call):
        return f"{e.fn}({', '.join(_fmt(a) for a in e.args)})"
    if isinstance(e, Neg):
        inner = _fmt(e.operand, _PREC["neg"])
        out = f"-{inner}"
        return f"({out})" if parent_prec > _PREC["neg"] or right_of_pow else out
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        if e.op == "^":
            left = _fmt(e.left, p + 1)
            right = _fmt(e.right, p, right_of_pow=False)
            if isinstance(e.right, (BinOp, Neg)):
                right = f"({_fmt(e.right)})"
            out = f"{left}^{right}"
        else:
            left = _fmt(e.left, p)
            right = _fmt(e.right, p + 1)
            sep = f" {e.op} " if p == 1 else e.op
            out = f"{left}{sep}{right}"
        return f"({out})" if p < parent_prec else out
    raise TypeError(f"not an expression: {e!r}")


def _fmt_pred(p: Pred) -> str:
    return " and ".join(f"{_fmt(c.left)} {c.op} {_fmt(c.right)}" for c in p.terms)


def _fmt_cases(c: Cases) -> str:
    parts = [f"when {_fmt_pred(p)} -> {_fmt(e)};" for p, e in c.branches]
    parts.append(_fmt(c.default))
    return " ".join(parts)


def format_ast(ast: SpecAST) -> str:
    lines = []
    for d in ast.decls:
        if isinstance(d, FamilyDecl):
            lines.append(f"family {d.name} {{")
            if d.p is not None:
                lines.append(f"  p = {d.p}")
            if d.lam is not None:
                lines.append(f"  lambda = {d.lam}")
            lines.append(f"  v(m,k,j) = {_fmt_cases(d.body)}")
            if d.hints:
                lines.append(f"  hints {{ {', '.join(d.hints)} }}")
            lines.append("}")
        elif isinstance(d, WeightsDecl):
            lines.append(f"weights {d.name} = {_fmt(d.expr)}")
        elif isinstance(d, SymbolDecl):
            lines.append(f"symbol {d.name} = {d.builtin}()")
        else:
            raise TypeError(f"not a declaration: {d!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _uses(e, pred) -> bool:
    if pred(e):
        return True
    if isinstance(e, BinOp):
        return _uses(e.left, pred) or _uses(e.right, pred)
    if isinstance(e, Neg):
        return _uses(e.operand, pred)
    if isinstance(e, Call):
        return any(_uses(a, pred) for a in e.args)
    return False


def _cases_use(c: Cases, pred) -> bool:
    exprs = [e for _, e in c.branches] + [c.default]
    preds = [t for p, _ in c.branches for t in p.terms]
    return any(_uses(e, pred) for e in exprs) or any(
        _uses(t.left, pred) or _uses(t.right, pred) for t in preds
    )


_EXACT_FNS = ("nu2", "oddpart", "ceillog2")


def _is_exact(e) -> bool:
    if isinstance(e, (Num, Var, Prev)):
        return True
    if isinstance(e, Neg):
        return _is_exact(e.operand)
    if isinstance(e, BinOp):
        if e.op == "^" and not _integer_valued(e.right):
            return False
        return _is_exact(e.left) and _is_exact(e.right)
    if isinstance(e, Call):
        return (e.fn in _EXACT_FNS or e.fn == "min") and all(_is_exact(a) for a in e.args)
    return False


def _integer_valued(e) -> bool:
    if isinstance(e, Num):
        return True
    if isinstance(e, Var):
        return True
    if isinstance(e, Neg):
        return _integer_valued(e.operand)
    if isinstance(e, BinOp):
        return e.op in ("+", "-", "*", "%") and _integer_valued(e.left) and _integer_valued(e.right)
    if isinstance(e, Call):
        return e.fn in _EXACT_FNS and all(_integer_valued(a) for a in e.args)
    return False


def _nu2(j: int) -> int:
    return (j & -j).bit_length() - 1


def _oddpart(j: int) -> int:
    return j >> _nu2(j)


def _ceillog2(j: int) -> int:
    return (j - 1).bit_length()


class _ExactEvaluator:
    """Scalar Fraction evaluation with per-level memoized recursion."""

    def __init__(self, body: Cases):
        self.body = body
        self.memo: dict[tuple[int, int, int], Fraction] = {}

    def value(self, m: int, k: int, j: int) -> Fraction:
        key = (m, k, j)
        if key not in self.memo:
            self.memo[key] = self._cases(self.body, m, k, j)
        return self.memo[key]

    def _cases(self, c: Cases, m: int, k: int, j: int) -> Fraction:
        for p, e in c.branches:
            if all(self._cmp(t, m, k, j) for t in p.terms):
                return self._expr(e, m, k, j)
        return self._expr(c.default, m, k, j)

    def _cmp(self, t: Cmp, m, k, j) -> bool:
        a, b = self._expr(t.left, m, k, j), self._expr(t.right, m, k, j)
        return {
            "==": a == b,
            "!=": a != b,
            "<=": a <= b,
            ">=": a >= b,
            "<": a < b,
            ">": a > b,
        }[t.op]

    def _expr(self, e, m, k, j) -> Fraction:
        if isinstance(e, Num):
            return Fraction(e.value)
        if isinstance(e, Var):
            return Fraction({"m": m, "k": k, "j": j}[e.name])
        if isinstance(e, Neg):
            return -self._expr(e.operand, m, k, j)
        if isinstance(e, Prev):
            if m <= 1:
                raise DslError("prev() reached level 0: recursion without base level")
            return self.value(m - 1, k, j + e.offset)
        if isinstance(e, BinOp):
            a = self._expr(e.left, m, k, j)
            b = self._expr(e.right, m, k, j)
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            if e.op == "*":
                return a * b
            if e.op == "/":
                return a / b
            if e.op == "%":
                return Fraction(int(a) % int(b))
            if e.op == "^":
                return a ** int(b)
        if isinstance(e, Call):
            if e.fn == "min":
                return min(self._expr(a, m, k, j) for a in e.args)
            arg = int(self._expr(e.args[0], m, k, j))
            return Fraction({"nu2": _nu2, "oddpart": _oddpart, "ceillog2": _ceillog2}[e.fn](arg))
        raise TypeError(f"not exactly evaluable: {e!r}")


class _LogEvaluator:
    """Vectorized log-space evaluation over index arrays.

    ``_log`` evaluates log of a positive-valued expression; ``_lin`` evaluates
    the plain value (used for exponents, predicates, and subtractions).
    Levels are evaluated top-down with a cache so ``prev`` costs one lookup.
    """

    def __init__(self, body: Cases, max_prev: int):
        self.body = body
        self.max_prev = max_prev
        self.cache: dict[tuple[int, int, int], np.ndarray] = {}

    def row(self, m: int, k: int, top: int) -> np.ndarray:
        """log v^(m,k)_j for j = 1..top."""
        key = (m, k, top)
        if key not in self.cache:
            js = np.arange(1, top + 1, dtype=np.int64)
            self.cache[key] = self._cases_log(self.body, m, k, js)
        return self.cache[key]

    def _prev_log(self, m: int, k: int, js: np.ndarray, off: int) -> np.ndarray:
        if m <= 1:
            raise DslError("prev() reached level 0: recursion without base level")
        top = int(js.max()) + off
        return self.row(m - 1, k, top)[js + off - 1]

    def _cases_log(self, c: Cases, m, k, js) -> np.ndarray:
        # evaluate each arm only where it is selected: guarded recursion
        # (e.g. a base case at m == 1) must not run outside its guard
        out = np.empty(js.shape, dtype=float)
        remaining = np.ones(js.shape, dtype=bool)
        for p, e in c.branches:
            mask = remaining.copy()
            for t in p.terms:
                mask &= self._cmp(t, m, k, js)
            if mask.any():
                out[mask] = self._log(e, m, k, js[mask])
            remaining &= ~mask
        if remaining.any():
            out[remaining] = self._log(c.default, m, k, js[remaining])
        return out

    def _cmp(self, t: Cmp, m, k, js) -> np.ndarray:
        a, b = self._lin(t.left, m, k, js), self._lin(t.right, m, k, js)
        return {
            "==": a == b,
            "!=": a != b,
            "<=": a <= b,
            ">=": a >= b,
            "<": a < b,
            ">": a > b,
        }[t.op]

    def _lin(self, e, m, k, js):
        if isinstance(e, Num):
            return float(e.value)
        if isinstance(e, Var):
            return {"m": float(m), "k": float(k), "j": js.astype(float)}[e.name]
        if isinstance(e, Neg):
            return -self._lin(e.operand, m, k, js)
        if isinstance(e, Prev):
            return np.exp(self._prev_log(m, k, js, e.offset))
        if isinstance(e, BinOp):
            a = self._lin(e.left, m, k, js)
            b = self._lin(e.right, m, k, js)
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            if e.op == "*":
                return a * b
            if e.op == "/":
                return a / b
            if e.op == "%":
                return np.asarray(a).astype(np.int64) % np.asarray(b).astype(np.int64)
            if e.op == "^":
                with np.errstate(over="ignore", invalid="ignore"):
                    return np.asarray(a, dtype=float) ** np.asarray(b, dtype=float)
        if isinstance(e, Call):
            if e.fn == "min":
                return np.minimum.reduce([self._lin(a, m, k, js) for a in e.args])
            a = self._lin(e.args[0], m, k, js)
            if e.fn in _EXACT_FNS:
                ints = np.asarray(a).astype(np.int64)
                if e.fn == "nu2":
                    return _nu2_vec(ints).astype(float)
                if e.fn == "oddpart":
                    return (ints >> _nu2_vec(ints)).astype(float)
                return _ceillog2_vec(ints).astype(float)
            if e.fn == "exp":
                return np.exp(a)
            if e.fn == "log":
                return np.log(a)
            if e.fn == "log2":
                return np.log2(a)
            if e.fn == "sqrt":
                return np.sqrt(a)
            if e.fn == "logfactorial":
                arr = np.atleast_1d(np.asarray(a, dtype=float))
                return np.array([math.lgamma(x + 1.0) for x in arr]).reshape(np.shape(a))
        raise TypeError(f"not evaluable: {e!r}")

    def _log(self, e, m, k, js):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self._log_inner(e, m, k, js)

    def _log_inner(self, e, m, k, js):
        if isinstance(e, Num):
            return math.log(e.value) if e.value > 0 else -math.inf
        if isinstance(e, Var):
            return np.log(self._lin(e, m, k, js))
        if isinstance(e, Prev):
            return self._prev_log(m, k, js, e.offset)
        if isinstance(e, BinOp):
            if e.op == "*":
                return self._log_inner(e.left, m, k, js) + self._log_inner(e.right, m, k, js)
            if e.op == "/":
                return self._log_inner(e.left, m, k, js) - self._log_inner(e.right, m, k, js)
            if e.op == "^":
                return self._lin(e.right, m, k, js) * self._log_inner(e.left, m, k, js)
            if e.op == "+":
                return np.logaddexp(
                    self._log_inner(e.left, m, k, js), self._log_inner(e.right, m, k, js)
                )
            # subtraction leaves log space; positivity is probe-checked
            return np.log(self._lin(e, m, k, js))
        if isinstance(e, Call):
            if e.fn == "min":
                return np.minimum.reduce([self._log_inner(a, m, k, js) for a in e.args])
            if e.fn == "exp":
                return self._lin(e.args[0], m, k, js) + np.zeros(js.shape)
            if e.fn == "sqrt":
                return 0.5 * self._log_inner(e.args[0], m, k, js)
            if e.fn == "logfactorial":
                a = self._lin(e.args[0], m, k, js)
                from math import lgamma

                vals = np.array([lgamma(x + 1.0) for x in np.atleast_1d(a)])
                return np.log(vals.reshape(np.shape(a)))
        return np.log(self._lin(e, m, k, js))


def _nu2_vec(js: np.ndarray) -> np.ndarray:
    j = js.copy()
    out = np.zeros(j.shape, dtype=np.int64)
    mask = (j > 0) & ((j & 1) == 0)
    while mask.any():
        out[mask] += 1
        j[mask] >>= 1
        mask = (j > 0) & ((j & 1) == 0)
    return out


def _ceillog2_vec(js: np.ndarray) -> np.ndarray:
    v = js - 1
    out = np.zeros(v.shape, dtype=np.int64)
    mask = v > 0
    while mask.any():
        out[mask] += 1
        v = v >> 1
        mask = v > 0
    return out


# ---------------------------------------------------------------------------
# Compile
# ---------------------------------------------------------------------------

PROBE_INDICES = sorted(set(range(1, 1025)) | {
    j for t in range(1, 21) for j in ((1 << t) - 1, 1 << t, (1 << t) + 1)
})
PROBE_LEVELS = 8


class HintRejectedError(ValueError):
    def __init__(self, hint: str, probe: dict):
        super().__init__(f"hint {hint!r} contradicted at probe {probe}")
        self.hint = hint
        self.probe = probe


def _max_prev_offset(c: Cases) -> int:
    best = 0

    def walk(e):
        nonlocal best
        if isinstance(e, Prev):
            best = max(best, e.offset)
        elif isinstance(e, BinOp):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, Neg):
            walk(e.operand)
        elif isinstance(e, Call):
            for a in e.args:
                walk(a)

    for _, e in c.branches:
        walk(e)
    walk(c.default)
    return best


def compile_family(decl: FamilyDecl) -> WeightFamily:
    body = decl.body
    max_prev = _max_prev_offset(body)
    log_ev = _LogEvaluator(body, max_prev)
    grade_constant = not _cases_use(body, lambda e: isinstance(e, Var) and e.name == "k")

    def log_eval_array(m, k, js):
        js = np.asarray(js, dtype=np.int64)
        top = int(js.max())
        return log_ev.row(m, k, top)[js - 1]

    def log_eval(m, k, j):
        return float(log_eval_array(m, k, np.array([j], dtype=np.int64))[0])

    exact_eval = None
    if _is_exact(body.default) and all(
        _is_exact(e) and all(_is_exact(t.left) and _is_exact(t.right) for t in p.terms)
        for p, e in body.branches
    ):
        exact = _ExactEvaluator(body)

        def exact_eval(m, k, j):
            return exact.value(m, k, j)

    hint_objs = []
    for h in decl.hints:
        hint_objs.append(
            {
                "decreasing-in-level": DecreasingInLevel(),
                "increasing-in-grade": IncreasingInGrade(),
                "limit-zero": LimitZero(None, None),
                "tail-monotone-down": TailMonotone(1, None, None, "down"),
            }[h]
        )
    fam = WeightFamily(
        decl.name,
        log_eval,
        log_eval_array=log_eval_array,
        hints=tuple(hint_objs),
        exact_eval=exact_eval,
        grade_constant=grade_constant,
    )
    _probe_family(fam, decl)
    return fam


def _probe_family(fam: WeightFamily, decl: FamilyDecl) -> None:
    js = np.array(PROBE_INDICES, dtype=np.int64)
    grades = (1,) if fam.grade_constant else (1, 2, 4, 8)
    rows = {}
    for m in range(1, PROBE_LEVELS + 1):
        for k in grades:
            vals = fam.log_weights(m, k, js)
            if np.any(np.isnan(vals)) or np.any(vals == math.inf):
                bad = int(js[np.where(np.isnan(vals) | (vals == math.inf))[0][0]])
                raise DslError(
                    f"family {decl.name!r}: non-positive value at probe "
                    f"(m={m}, k={k}, j={bad})"
                )
            rows[(m, k)] = vals
    for h in decl.hints:
        _check_hint(h, rows, js, grades, decl.name)


def _check_hint(h: str, rows, js, grades, name: str) -> None:
    tol = 1e-9
    if h == "decreasing-in-level":
        for m in range(1, PROBE_LEVELS):
            for k in grades:
                diff = rows[(m + 1, k)] - rows[(m, k)]
                if np.any(diff > tol):
                    j = int(js[int(np.argmax(diff))])
                    raise HintRejectedError(h, {"m": m, "k": k, "j": j})
    elif h == "increasing-in-grade":
        if len(grades) > 1:
            for m in range(1, PROBE_LEVELS + 1):
                for a, b in zip(grades, grades[1:]):
                    diff = rows[(m, a)] - rows[(m, b)]
                    if np.any(diff > tol):
                        j = int(js[int(np.argmax(diff))])
                        raise HintRejectedError(h, {"m": m, "k": (a, b), "j": j})
    elif h == "limit-zero":
        for k in grades:
            row = rows[(PROBE_LEVELS, k)]
            if not row[-1] <= min(row[0], -LOG2) - 1e-12:
                raise HintRejectedError(h, {"m": PROBE_LEVELS, "k": k, "j": int(js[-1])})
    elif h == "tail-monotone-down":
        dense = np.arange(0, 1024)  # probe prefix is contiguous there
        for m in range(1, PROBE_LEVELS + 1):
            for k in grades:
                seg = rows[(m, k)][dense]
                diff = np.diff(seg)
                if np.any(diff > tol):
                    j = int(js[dense[int(np.argmax(diff))] + 1])
                    raise HintRejectedError(h, {"m": m, "k": k, "j": j})


def compile_weights(decl: WeightsDecl) -> WeightSequence:
    ev = _LogEvaluator(Cases((), decl.expr), 0)
    exact = _ExactEvaluator(Cases((), decl.expr)) if _is_exact(decl.expr) else None

    def value(j):
        if exact is not None:
            return exact.value(1, 1, int(j))
        return math.exp(log_modulus(j))

    def log_modulus(j):
        return float(ev._log(decl.expr, 1, 1, np.array([int(j)], dtype=np.int64))[0])

    return WeightSequence(decl.name, value, log_modulus, exact=exact is not None)


def compile_spec(ast: SpecAST, bounds: Optional[ScanBounds] = None) -> SpaceSpec:
    families = [d for d in ast.decls if isinstance(d, FamilyDecl)]
    if len(families) != 1:
        raise DslError(f"expected exactly one family declaration, found {len(families)}")
    decl = families[0]
    fam = compile_family(decl)
    w = unit_weights()
    psi: Symbol = successor_symbol()
    for d in ast.decls:
        if isinstance(d, WeightsDecl):
            w = compile_weights(d)
        elif isinstance(d, SymbolDecl):
            psi = BUILTIN_SYMBOLS[d.builtin]()
    structure = _structure_from_hints(decl.hints)
    kw = {}
    if bounds is not None:
        kw["bounds"] = bounds
    return SpaceSpec(
        name=decl.name,
        family=fam,
        p=Exponent(decl.p if decl.p is not None else 2),
        w=w,
        psi=psi,
        lam=decl.lam if decl.lam is not None else 1,
        structure=structure,
        **kw,
    )


def _structure_from_hints(hints: tuple) -> Structure:
    if "limit-zero" in hints and "tail-monotone-down" in hints:
        return Structure(
            limit_zero=lambda m, k: True,
            tail_monotone_start=lambda m, k: 1,
            notes="derived from declared limit-zero and tail-monotone hints",
        )
    if "limit-zero" in hints:
        return Structure(limit_zero=lambda m, k: True, notes="derived from declared hints")
    return Structure()


def load(path: str, bounds: Optional[ScanBounds] = None) -> SpaceSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return compile_spec(parse(fh.read()), bounds)


# ---------------------------------------------------------------------------
# Random well-formed specs (for fuzz/lattice tests)
# ---------------------------------------------------------------------------


def random_ast(rng) -> SpecAST:
    """A seeded, well-formed, positive-by-construction family declaration."""
    name = f"fam{rng.randrange(10_000)}"
    shift = rng.randrange(0, 3)
    base_choices = [
        BinOp("^", Var("j"), Neg(Var("m"))),
        Call("exp", (Neg(BinOp("*", Var("m"), Var("j"))),)),
        Call(
            "exp",
            (Neg(BinOp("*", Var("m"), Call("log", (BinOp("+", Var("j"), Num(2)),)))),),
        ),
        BinOp("^", Num(2), Neg(BinOp("+", Call("nu2", (Var("j"),)), Num(1)))),
        BinOp("/", Num(1), BinOp("+", Var("j"), Num(shift))),
    ]
    base = rng.choice(base_choices)
    if rng.random() < 0.4:
        scale = rng.randrange(1, 4)
        base = BinOp("*", Num(scale), base)
    body: Cases
    if rng.random() < 0.3:
        body = Cases(
            ((Pred((Cmp("==", Var("m"), Num(1)),)), base),),
            Call("min", (Prev(0), Prev(1))),
        )
    else:
        body = Cases((), base)
    hints = ()
    p = rng.choice([None, 1, 2])
    return SpecAST((FamilyDecl(name, p, None, body, hints),))


def random_source(rng) -> str:
    return format_ast(random_ast(rng))
