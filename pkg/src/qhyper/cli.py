"""Command-line front end: expression grammar, computations, verification suites.

Grammar (whitespace-insensitive; juxtaposition means multiplication)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/")? unary)*
    unary   := "-" unary | power
    power   := primary ("^" exponent)*
    exponent:= ["-"] INT | "(" ["-"] INT ")"
    primary := INT | "q" | "(" expr ")" | atom
    atom    := "t[" INT "," INT "]"
             | "tb[" INT "," INT "]" ["^(" INT ")"]
             | "bin[" INT "](" ["-"] INT "," INT ")"
             | "Dq" | "Dqinv"
             | "E[" INT "," INT "]" | "F[" INT "," INT "]" | "La[" INT "]"

``tb[i,j]^(m)`` is the divided-power generator of order ``m`` (order 1 when
the suffix is absent), ``bin[k](c,m)`` the q-binomial of the diagonal entry
``t[k,k]``.  Division is only allowed by scalars.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .qring import LaurentZ, RationalQ, fmt_coeff

SCHEMA = 1


class ParseError(ValueError):
    """Malformed expression; ``pos`` is the character offset."""

    def __init__(self, message: str, pos: int | None = None):
        super().__init__(message if pos is None else f"{message} (at position {pos})")
        self.pos = pos


class EvalError(ValueError):
    """Well-formed expression that cannot be evaluated in the requested algebra."""


# ---------------------------------------------------------------------------
# Syntax tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Q:
    pass


@dataclass(frozen=True)
class Atom:
    name: str  # t, tb, bin, Dq, Dqinv, E, F, La
    args: tuple[int, ...] = ()


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>tb|bin|t|Dqinv|Dq|E|F|La|q)(?![A-Za-z])|(?P<op>[-+*/^(),\[\]]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            pos += len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def integer(self, signed: bool = False) -> int:
        sign = 1
        if signed and self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind != "int":
            raise ParseError(f"expected an integer, found {val or 'end of input'!r}", pos)
        return sign * int(val)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def _starts_primary(self) -> bool:
        kind, val, _ = self.peek()
        return kind in ("int", "name") or (kind == "op" and val == "(")

    def term(self):
        node = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                node = BinOp(val, node, self.unary())
            elif self._starts_primary():
                node = BinOp("*", node, self.unary())
            else:
                return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.primary()
        while self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            if self.peek()[1] == "(":
                self.take()
                e = self.integer(signed=True)
                self.expect(")")
            else:
                e = self.integer(signed=True)
            node = Pow(node, e)
        return node

    def _indices(self, count: int) -> tuple[int, ...]:
        self.expect("[")
        out = [self.integer()]
        for _ in range(count - 1):
            self.expect(",")
            out.append(self.integer())
        self.expect("]")
        return tuple(out)

    def primary(self):
        kind, val, pos = self.take()
        if kind == "int":
            return Num(int(val))
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind != "name":
            raise ParseError(f"unexpected {val or 'end of input'!r}", pos)
        if val == "q":
            return Q()
        if val in ("Dq", "Dqinv"):
            return Atom(val)
        if val in ("t", "E", "F"):
            return Atom(val, self._indices(2))
        if val == "La":
            return Atom(val, self._indices(1))
        if val == "tb":
            i, j = self._indices(2)
            m = 1
            if self.peek()[1] == "^" and self.peek(1)[1] == "(":
                self.take()
                self.take()
                m = self.integer()
                self.expect(")")
            return Atom("tb", (i, j, m))
        if val == "bin":
            (k,) = self._indices(1)
            self.expect("(")
            c = self.integer(signed=True)
            self.expect(",")
            m = self.integer()
            self.expect(")")
            return Atom("bin", (k, c, m))
        raise ParseError(f"unknown name {val!r}", pos)


def parse(text: str):
    """Parse an expression into a syntax tree."""
    return _Parser(text).parse()


def _prec(node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def to_text(node) -> str:
    """Print a syntax tree; ``parse(to_text(x)) == x``."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Q):
        return "q"
    if isinstance(node, Atom):
        a = node.args
        if node.name in ("Dq", "Dqinv"):
            return node.name
        if node.name == "La":
            return f"La[{a[0]}]"
        if node.name == "tb":
            return f"tb[{a[0]},{a[1]}]^({a[2]})"
        if node.name == "bin":
            return f"bin[{a[0]}]({a[1]},{a[2]})"
        return f"{node.name}[{a[0]},{a[1]}]"
    if isinstance(node, Neg):
        inner = to_text(node.arg)
        return f"-{inner}" if _prec(node.arg) >= 3 else f"-({inner})"
    if isinstance(node, Pow):
        base = to_text(node.base)
        if _prec(node.base) < 5:
            base = f"({base})"
        return f"{base}^{node.exp}" if node.exp >= 0 else f"{base}^({node.exp})"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        left = to_text(node.left)
        if _prec(node.left) < p:
            left = f"({left})"
        right = to_text(node.right)
        if _prec(node.right) <= p or isinstance(node.right, Neg):
            right = f"({right})"
        sep = f" {node.op} " if node.op in "+-" else node.op
        return f"{left}{sep}{right}"
    raise TypeError(f"not a syntax node: {node!r}")


def atoms(node) -> set[str]:
    if isinstance(node, Atom):
        return {node.name}
    if isinstance(node, Neg):
        return atoms(node.arg)
    if isinstance(node, Pow):
        return atoms(node.base)
    if isinstance(node, BinOp):
        return atoms(node.left) | atoms(node.right)
    return set()


def parse_scalar(text: str):
    """Parse a coefficient such as ``q^2 - 1 + q^-1`` or ``(1)/(q - 1)``.

    Returns a :class:`LaurentZ` when the value is a Laurent polynomial,
    otherwise a :class:`RationalQ`.
    """
    node = parse(text)
    if atoms(node):
        raise ParseError("a scalar may not contain generators")
    val = _eval_scalar(node)
    return val.to_laurent() if val.is_laurent() else val


def _eval_scalar(node) -> RationalQ:
    if isinstance(node, Num):
        return RationalQ.from_int(node.value)
    if isinstance(node, Q):
        return RationalQ.coerce(LaurentZ.q_power(1))
    if isinstance(node, Neg):
        return -_eval_scalar(node.arg)
    if isinstance(node, Pow):
        base = _eval_scalar(node.base)
        if node.exp < 0:
            if not base:
                raise EvalError("division by zero")
            return base.inverse() ** -node.exp
        return base ** node.exp
    if isinstance(node, BinOp):
        a, b = _eval_scalar(node.left), _eval_scalar(node.right)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if not b:
            raise EvalError("division by zero")
        return a / b
    raise EvalError(f"not a scalar: {to_text(node)}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

_MATRIX_ATOMS = {"t", "Dq", "Dqinv"}
_HYPER_ATOMS = {"tb", "bin"}
_DUAL_ATOMS = {"E", "F", "La"}


def _coeff(r: RationalQ):
    return r.to_laurent() if r.is_laurent() else r


class Evaluator:
    """Evaluate syntax trees in one algebra: ``matrix``, ``hyper`` or ``dual``."""

    def __init__(self, n: int, algebra: str = "M", kind: str = "matrix"):
        if n < 1:
            raise EvalError("n must be positive")
        if algebra not in ("M", "GL", "SL"):
            raise EvalError(f"unknown algebra {algebra!r}")
        self.n = n
        self.algebra = algebra
        self.kind = kind

    @classmethod
    def for_tree(cls, node, n: int, algebra: str = "M") -> "Evaluator":
        names = atoms(node)
        if names & _DUAL_ATOMS:
            if names & (_MATRIX_ATOMS | _HYPER_ATOMS):
                raise EvalError("dual-group letters cannot be mixed with matrix generators")
            return cls(n, algebra, "dual")
        if names & _HYPER_ATOMS:
            return cls(n, algebra, "hyper")
        return cls(n, algebra, "matrix")

    # -- atoms ----------------------------------------------------------------
    def _check(self, *idx: int) -> None:
        for i in idx:
            if not 1 <= i <= self.n:
                raise EvalError(f"index {i} out of range 1..{self.n}")

    def one(self):
        from .dualside import DualElem
        from .hyper import HyperElem, basis
        from .qmatrix import GLElem, QMatElem

        if self.kind == "dual":
            return DualElem.one(self.n)
        if self.kind == "hyper":
            b = basis(self.n)
            return HyperElem(b, {b.alg.zero_mono: LaurentZ.one()})
        one = QMatElem.one(self.n)
        return GLElem(one) if self.algebra == "GL" else one

    def atom(self, a: Atom):
        from .dualside import DualElem
        from .hyper import HyperElem, basis, contract, gen_binom, gen_tb
        from .qmatrix import GLElem, QMatElem, qdet

        n = self.n
        name, args = a.name, a.args
        if name in _DUAL_ATOMS:
            if self.kind != "dual":
                raise EvalError("dual-group letters need a dual-group expression")
            if name == "La":
                self._check(*args)
                return DualElem.La(n, args[0])
            i, j = args
            self._check(i, j)
            if name == "E":
                if not i < j:
                    raise EvalError("E[i,j] needs i < j")
                return DualElem.E(n, i, j)
            if not i > j:
                raise EvalError("F[i,j] needs i > j")
            return DualElem.F(n, i, j)
        if self.kind == "dual":
            raise EvalError("matrix generators cannot appear in a dual-group expression")
        if name == "Dqinv" and self.algebra == "M":
            raise EvalError("Dqinv needs --algebra GL")
        if self.kind == "hyper":
            b = basis(n)
            if name == "tb":
                i, j, m = args
                self._check(i, j)
                if i == j:
                    raise EvalError("tb[i,j] needs i != j")
                return gen_tb(n, i, j, m)
            if name == "bin":
                k, c, m = args
                self._check(k)
                return gen_binom(n, k, c, m)
            if name == "t":
                self._check(*args)
                return contract(QMatElem.gen(n, *args))
            if name == "Dq":
                return contract(qdet(n))
            return HyperElem(b, {b.alg.zero_mono: LaurentZ.one()}, dqinv=1)
        if name == "t":
            self._check(*args)
            x = QMatElem.gen(n, *args)
        elif name == "Dq":
            x = qdet(n)
        else:
            return GLElem.dqinv(n)
        return GLElem(x) if self.algebra == "GL" else x

    # -- tree walk ------------------------------------------------------------
    def value(self, node):
        """Scalars come back as :class:`RationalQ`, everything else as an algebra element."""
        if isinstance(node, (Num, Q)):
            return _eval_scalar(node)
        if isinstance(node, Atom):
            return self.atom(node)
        if isinstance(node, Neg):
            v = self.value(node.arg)
            return -v if isinstance(v, RationalQ) else v.scale(LaurentZ.from_int(-1))
        if isinstance(node, Pow):
            v = self.value(node.base)
            if isinstance(v, RationalQ):
                return self._scalar_pow(v, node.exp)
            if node.exp < 0:
                return self._inverse(v, node) ** -node.exp
            return v ** node.exp
        a, b = self.value(node.left), self.value(node.right)
        sa, sb = isinstance(a, RationalQ), isinstance(b, RationalQ)
        if node.op == "/":
            if not sb:
                raise EvalError("division is only defined by scalars")
            if not b:
                raise EvalError("division by zero")
            return a / b if sa else a.scale(_coeff(b.inverse()))
        if sa and sb:
            return {"+": a + b, "-": a - b, "*": a * b}[node.op]
        if node.op == "*":
            if sa:
                return b.scale(_coeff(a))
            if sb:
                return a.scale(_coeff(b))
            return a * b
        if sa:
            a = self.one().scale(_coeff(a))
        if sb:
            b = self.one().scale(_coeff(b))
        return a + b if node.op == "+" else a - b

    @staticmethod
    def _scalar_pow(v: RationalQ, e: int) -> RationalQ:
        if e < 0:
            if not v:
                raise EvalError("division by zero")
            return v.inverse() ** -e
        return v ** e

    def _inverse(self, v, node):
        from .dualside import DualElem
        from .qmatrix import GLElem

        if isinstance(v, DualElem):
            try:
                return v ** -1
            except ValueError as exc:
                raise EvalError(str(exc)) from None
        if isinstance(node.base, Atom) and node.base.name == "Dq" and self.algebra == "GL":
            if isinstance(v, GLElem):
                return GLElem.dqinv(self.n)
        raise EvalError(f"negative powers are not defined for {to_text(node.base)}")

    def evaluate(self, node):
        v = self.value(node)
        if isinstance(v, RationalQ):
            v = self.one().scale(_coeff(v))
        return self.finish(v)

    def finish(self, v):
        from .qmatrix import GLElem

        if isinstance(v, GLElem):
            return v.normalized()
        if self.algebra != "SL" or self.kind == "dual":
            return v
        from .hyper import HyperElem, basis
        from .qmatrix import sl_project

        if isinstance(v, HyperElem):
            proj = sl_project(v.expand().to_qmat())
            out = basis(self.n).contract(proj)
            out.context = "SL"
            return out
        return sl_project(v)


def evaluate(text: str, n: int, algebra: str = "M"):
    node = parse(text)
    return Evaluator.for_tree(node, n, algebra).evaluate(node)


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _tensor_text(alg, t) -> str:
    if t.is_zero():
        return "0"
    parts = []
    for (a, b), c in sorted(t.terms.items(), key=lambda kv: (alg.deglex(kv[0][0]), alg.deglex(kv[0][1])), reverse=True):
        ctext = fmt_coeff(c)
        body = f"{alg.show_mono(a)} @ {alg.show_mono(b)}"
        if ctext == "1":
            parts.append(body)
        elif ctext == "-1":
            parts.append("-" + body)
        else:
            parts.append(f"({ctext}) {body}")
    return " + ".join(parts).replace("+ -", "- ")


def _json_value(v):
    if hasattr(v, "to_json"):
        return v.to_json()
    if isinstance(v, (LaurentZ, RationalQ)):
        return str(v)
    return str(v)


@dataclass
class SuiteReport:
    """Outcome of a verification suite; it passes iff there are no failures."""

    suite: str
    params: dict
    cases: int
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "cases": self.cases,
            "failures": sorted(self.failures),
            "seconds": round(self.seconds, 3),
            "ok": self.ok,
            "details": self.details,
        }

    def text(self) -> str:
        head = f"{self.suite}: {'PASS' if self.ok else 'FAIL'}  cases={self.cases}  time={self.seconds:.2f}s"
        params = "  ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        lines = [head, f"  params: {params}"]
        for k, v in sorted(self.details.items()):
            lines.append(f"  {k}: {v}")
        for f in sorted(self.failures)[:50]:
            lines.append(f"  failure: {f}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------


def _suite_pbw(a) -> SuiteReport:
    from math import comb

    from .qmatrix import manin_system

    fails, cases = [], 0
    deg = a.deg or 6
    for n in range(2, a.n + 1):
        sys_ = manin_system(n)
        done = sys_.complete(deg)
        cases += 1
        if not done.certificate.confluent or done.certificate.rules_added:
            fails.append(f"n={n}: completion added {done.certificate.rules_added} rules")
        counts = done.normal_word_counts(deg)
        for d, c in enumerate(counts):
            cases += 1
            if c != comb(d + n * n - 1, d):
                fails.append(f"n={n} degree {d}: {c} normal words")
    return SuiteReport("pbw", {"n": a.n, "deg": deg}, cases, fails)


def _suite_hopf(a) -> SuiteReport:
    from .qmatrix import hopf_report

    fails, cases = [], 0
    for n in range(2, a.n + 1):
        rep = hopf_report(n)
        for k, v in rep.items():
            cases += 1
            if not v:
                fails.append(f"n={n}: {k}")
    return SuiteReport("hopf", {"n": a.n}, cases, fails)


def _suite_integrality(a) -> SuiteReport:
    from .hyper import integrality_sweep, roundtrip_check

    deg = a.deg or (6 if a.n <= 2 else 4)
    rep = integrality_sweep(a.n, deg)
    fails = [f"{v}" for v in rep.get("violations", [])]
    rt = roundtrip_check(a.n, min(deg, 3))
    if not rt:
        fails.append("contract(expand(x)) != x for some basis element")
    return SuiteReport("integrality", {"n": a.n, "deg": deg}, (rep["pairs"] or 0) + 1, fails)


def _suite_relations(a) -> SuiteReport:
    from .hyper import coproduct_closed_form, gen_binom, gen_tb, hyper_coproduct, relation_check, relation_instances

    fails, cases = [], 0
    max_exp = a.max_exp or 3
    for n in range(2, a.n + 1):
        for inst in relation_instances(n, max_exp, 2, "standard"):
            cases += 1
            if not relation_check(inst):
                fails.append(inst.label())
        top = min(max_exp, 2)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                for h in range(1, top + 1):
                    cases += 1
                    if coproduct_closed_form("tb", n, i, j, h) != hyper_coproduct(gen_tb(n, i, j, h)):
                        fails.append(f"coproduct tb[{i},{j}]^({h}), n={n}")
            for c in range(-2, 3):
                for k in range(1, top + 1):
                    cases += 1
                    if coproduct_closed_form("binom", n, i, c, k) != hyper_coproduct(gen_binom(n, i, c, k)):
                        fails.append(f"coproduct bin[{i}]({c},{k}), n={n}")
    return SuiteReport("relations", {"n": a.n, "max_exp": max_exp}, cases, fails)


def _suite_classical(a) -> SuiteReport:
    from .hyper import cocommutative_at_one, q1_bracket_report

    fails, cases = [], 0
    for n in range(2, a.n + 1):
        rep = q1_bracket_report(n)
        cases += rep.get("cases", 0)
        fails += [f"n={n}: {f}" for f in rep.get("failures", [])]
        cc = cocommutative_at_one(n, a.deg or 3)
        cases += cc.get("cases", 0)
        fails += [f"n={n}: not cocommutative on {f}" for f in cc.get("failures", [])]
    return SuiteReport("classical", {"n": a.n, "deg": a.deg or 3}, cases, fails)


def _suite_phi(a) -> SuiteReport:
    from .hyper import phi_power_check

    rep = phi_power_check(a.n, a.ell)
    fails = [] if rep["ok"] else [f"phi^{a.ell} - 1 does not vanish at eps (n={a.n})"]
    return SuiteReport("phi-power", {"n": a.n, "ell": a.ell}, 1, fails, details={"terms": rep["terms"]})


def _suite_frobenius(a) -> SuiteReport:
    from .hyper import frobenius_comultiplicative, frobenius_multiplicative, phi_power_check
    from .qmatrix import frobenius_restricted

    fails, cases = [], 0
    deg = a.deg or 4
    mult = frobenius_multiplicative(a.n, a.ell, deg)
    cases += mult.get("pairs", 0)
    fails += [f"multiplicativity: {f}" for f in mult.get("failures", [])]
    comult = frobenius_comultiplicative(a.n, a.ell, 2 * a.ell)
    cases += comult.get("cases", 0)
    fails += [f"comultiplicativity: {f}" for f in comult.get("failures", [])]
    phi = phi_power_check(a.n, a.ell)
    cases += 1
    if not phi["ok"]:
        fails.append("phi^ell - 1 does not vanish at eps")
    res = frobenius_restricted(a.n, a.ell)
    cases += res["commutator_pairs"] + a.n * a.n
    fails += res["commutator_failures"] + res["coproduct_failures"]
    return SuiteReport("frobenius", {"n": a.n, "ell": a.ell, "deg": deg}, cases, fails)


def _suite_root_images(a) -> SuiteReport:
    from .dualside import root_image_report

    fails, cases = [], 0
    for n in range(2, a.n + 1):
        rep = root_image_report(n, a.max_exp or 3, 2)
        cases += rep["instances"]
        fails += [f"n={n} {kind}{params}" for kind, params in rep["failures"]]
    return SuiteReport("root-images", {"n": a.n, "max_exp": a.max_exp or 3}, cases, fails)


def _suite_qdet(a) -> SuiteReport:
    from .dualside import corner_minor_check, xi_manin_check, xi_qdet_check

    fails, cases = [], 0
    for n in range(1, a.n + 1):
        cases += 1
        if not xi_qdet_check(n):
            fails.append(f"image of Dq at n={n}")
        if n >= 2:
            rep = xi_manin_check(n)
            cases += rep["relations"]
            fails += [f"n={n}: relation {y} {x}" for y, x in rep["failures"]]
            cm = corner_minor_check(n)
            cases += n
            fails += [f"n={n}: corner minor {l}" for l, ok in cm["minors"].items() if not ok]
    return SuiteReport("qdet-image", {"n": a.n}, cases, fails)


def _suite_expansions(a) -> SuiteReport:
    from .dualside import expansion_suite

    rep = expansion_suite(a.max_exp or 4)
    return SuiteReport("expansions", {"max_m": a.max_exp or 4}, rep["checks"], list(rep["failures"]))


def _suite_pairing(a) -> SuiteReport:
    from .dualside import integrality_scan, torus_pairing_check

    tor = torus_pairing_check(3, 3)
    fails = [f"torus value chi={c} z={z}" for c, z in tor["failures"]]
    scan = integrality_scan(a.n, a.deg or 4, a.zrange)
    fails += [f"{v['tau']} against {v['u']}: {v['value']}" for v in scan["violations"]]
    return SuiteReport("pairing", {"n": a.n, "deg": a.deg or 4, "zrange": a.zrange},
                       tor["instances"] + scan["pairs"], fails)


def _suite_sl2(a) -> SuiteReport:
    from .hyper import sl2_relation_check

    rep = sl2_relation_check()
    return SuiteReport("sl2", {"n": 2}, 1, [] if rep["ok"] else ["SL2 relation does not vanish"])


SUITES: dict[str, Callable] = {
    "pbw": _suite_pbw,
    "hopf": _suite_hopf,
    "integrality": _suite_integrality,
    "relations": _suite_relations,
    "classical": _suite_classical,
    "phi-power": _suite_phi,
    "frobenius": _suite_frobenius,
    "root-images": _suite_root_images,
    "qdet-image": _suite_qdet,
    "expansions": _suite_expansions,
    "pairing": _suite_pairing,
    "sl2": _suite_sl2,
}


def run_suite(name: str, **kwargs) -> SuiteReport:
    defaults = {"n": 2, "ell": 3, "max_exp": None, "deg": None, "zrange": 3}
    defaults.update(kwargs)
    args = argparse.Namespace(**defaults)
    t0 = time.time()
    rep = SUITES[name](args)
    rep.seconds = time.time() - t0
    return rep


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _parse_u(text: str, n: int):
    from .dualside import UMonomial

    N = n * (n - 1) // 2
    parts = {"e": (0,) * N, "z": (0,) * n, "f": (0,) * N}
    for m in re.finditer(r"([ezf])\s*=\s*[\[(]?\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*[\])]?", text):
        vals = tuple(int(x) for x in (m.group(2) or "").replace(" ", "").split(",") if x)
        parts[m.group(1)] = vals
    if not re.fullmatch(r"\s*([ezf]\s*=\s*[\[(]?[-\d,\s]*[\])]?\s*[;,]?\s*)+", text):
        raise EvalError(f"cannot read monomial label {text!r}; use e=..;z=..;f=..")
    try:
        return UMonomial(parts["e"], parts["z"], parts["f"])
    except ValueError as exc:
        raise EvalError(str(exc)) from None


def _cmd_value(a, text: str):
    node = parse(text)
    ev = Evaluator.for_tree(node, a.n, a.algebra)
    return node, ev, ev.evaluate(node)


def _rules_normalform(a):
    from .ncalg import Alphabet, RewriteSystem, letters_of, parse_poly

    try:
        with open(a.rules) as fh:
            text = fh.read()
    except OSError as exc:
        raise EvalError(f"cannot read rule file: {exc}") from None
    header = re.search(r"^#\s*letters:(.*)$", text, re.M)
    names = header.group(1).split() if header else letters_of(text)
    for tok in re.findall(r"[A-Za-z]+\[[^\]]*\]", a.expr):
        if tok not in names:
            names.append(tok)
    alphabet = Alphabet(names)
    try:
        sys_ = RewriteSystem.loads(text, alphabet)
        poly = parse_poly(a.expr, alphabet)
    except (ValueError, KeyError) as exc:
        raise EvalError(f"bad rule file or input: {exc}") from None
    if a.degree_bound:
        sys_ = sys_.complete(a.degree_bound)
    red = sys_.reduce(poly)
    rows = sorted(red.terms.items(), key=lambda t: (len(t[0]), t[0]), reverse=True)
    body = " + ".join(_scaled(fmt_coeff(c), alphabet.show(w)) for w, c in rows) or "0"
    return body, {"terms": [[alphabet.show(w), str(c)] for w, c in rows]}


def cmd_normalform(a):
    if a.rules:
        return _rules_normalform(a)
    _, _, v = _cmd_value(a, a.expr)
    return str(v), _json_value(v)


def cmd_mul(a):
    node = BinOp("*", parse(a.left), parse(a.right))
    ev = Evaluator.for_tree(node, a.n, a.algebra)
    v = ev.evaluate(node)
    return str(v), _json_value(v)


def cmd_coproduct(a):
    from .hyper import HyperElem, hyper_coproduct
    from .qmatrix import GLElem, QMatElem, algebra, coproduct, gl_coproduct

    _, ev, v = _cmd_value(a, a.expr)
    if isinstance(v, HyperElem):
        if v.dqinv:
            raise EvalError("coproducts in the integral basis are computed without Dqinv")
        t = hyper_coproduct(v)
        return str(t), {"terms": [[v.basis.show(x), v.basis.show(y), str(c)] for (x, y), c in sorted(t.terms.items())]}
    if isinstance(v, GLElem):
        t = gl_coproduct(v)
        k = v.k
        text = _tensor_text(algebra(a.n), t)
        if k:
            text = f"({text}) (Dqinv^{k} @ Dqinv^{k})" if k > 1 else f"({text}) (Dqinv @ Dqinv)"
        return text, {"dqinv": k, "terms": _tensor_rows(algebra(a.n), t)}
    if isinstance(v, QMatElem):
        if a.algebra == "SL":
            raise EvalError("coproduct is computed in M or GL")
        t = coproduct(v)
        return _tensor_text(v.alg, t), {"terms": _tensor_rows(v.alg, t)}
    raise EvalError("coproduct is defined for matrix and integral-form expressions")


def _scaled(ctext: str, body: str) -> str:
    if ctext == "1":
        return body
    if re.fullmatch(r"-?\d+", ctext):
        return f"{ctext} {body}"
    return f"({ctext}) {body}"


def _tensor_rows(alg, t) -> list:
    return [[alg.show_mono(x), alg.show_mono(y), str(c)] for (x, y), c in sorted(t.terms.items())]


def cmd_antipode(a):
    from .qmatrix import GLElem, QMatElem, antipode

    if a.algebra != "GL":
        raise EvalError("the antipode needs --algebra GL")
    _, _, v = _cmd_value(a, a.expr)
    if not isinstance(v, (GLElem, QMatElem)):
        raise EvalError("antipode is computed on matrix expressions")
    s = antipode(v).normalized()
    return str(s), _json_value(s)


def cmd_xi(a):
    from .dualside import xi

    _, ev, v = _cmd_value(a, a.expr)
    if ev.kind == "dual":
        raise EvalError("the embedding takes a matrix or integral-form expression")
    img = xi(v, a.variant)
    return str(img), _json_value(img)


def cmd_pair(a):
    from .dualside import DualElem, pairing, xi

    _, ev, v = _cmd_value(a, a.expr)
    if ev.kind != "dual":
        v = xi(v)
    if not isinstance(v, DualElem):
        raise EvalError("pairing needs a dual-group element")
    u = _parse_u(a.u, a.n)
    val = pairing(v, u)
    return fmt_coeff(val), {"u": str(u), "value": str(val), "integral": val.is_laurent()}


def cmd_frobenius(a):
    from .hyper import HyperElem, basis, frobenius_elem

    _, _, v = _cmd_value(a, a.expr)
    if not isinstance(v, HyperElem):
        b = basis(a.n)
        v = b.contract(v)
    if not v.integral:
        raise EvalError("the Frobenius map is defined on integral elements")
    img = frobenius_elem(v, a.ell)
    b = v.basis
    if not img:
        return "0 @ q=1", {"terms": []}
    parts = []
    rows = []
    for m in sorted(img, key=b.alg.deglex, reverse=True):
        c = img[m]
        ctext = str(c)
        mono = b.show(m)
        rows.append([mono, ctext])
        parts.append(mono if ctext == "1" else f"({ctext}) {mono}")
    return " + ".join(parts) + " @ q=1", {"ell": a.ell, "terms": rows}


def cmd_scan(a):
    from .dualside import integrality_scan

    rep = integrality_scan(a.n, a.deg or 4, a.zrange)
    text = (
        f"scan n={rep['n']} deg<={rep['deg_bound']} z in [-{a.zrange},{a.zrange}]^{a.n}: "
        f"{rep['monomials']} monomials, {rep['pairs']} pairings, {len(rep['violations'])} violations"
    )
    for v in rep["violations"][:20]:
        text += f"\n  {v['tau']} against {v['u']}: {v['value']}"
    return text, rep, rep["ok"]


def cmd_verify(a):
    names = list(SUITES) if a.suite == "all" else [a.suite]
    kwargs = dict(n=a.n, ell=a.ell, max_exp=a.max_exp, deg=a.deg, zrange=a.zrange)
    if a.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=a.jobs) as pool:
            futures = [pool.submit(run_suite, name, **kwargs) for name in names]
            reports = [f.result() for f in futures]
    else:
        reports = [run_suite(name, **kwargs) for name in names]
    text = "\n".join(r.text() for r in reports)
    data = {"reports": [r.to_json() for r in reports]}
    return text, data, all(r.ok for r in reports)


COMMANDS = {
    "normalform": cmd_normalform,
    "mul": cmd_mul,
    "coproduct": cmd_coproduct,
    "antipode": cmd_antipode,
    "pair": cmd_pair,
    "xi": cmd_xi,
    "frobenius": cmd_frobenius,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qhyper", description="Exact computations with quantum matrices and their integral forms.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="matrix size (default 2)")
    common.add_argument("--algebra", choices=("M", "GL", "SL"), default="M")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("normalform", "coproduct", "antipode", "xi", "frobenius", "pair"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("expr")
        if name == "frobenius":
            sp.add_argument("--ell", type=int, default=3)
        if name == "pair":
            sp.add_argument("--u", required=True, help='monomial label, e.g. "e=1;z=0,1;f=0"')
        if name == "normalform":
            sp.add_argument("--rules", help="rule-set file (one LHS -> RHS rule per line)")
            sp.add_argument("--degree-bound", dest="degree_bound", type=int, default=None,
                            help="complete the rule set up to this word length first")
        if name == "xi":
            sp.add_argument("--variant", choices=("rescaled", "unscaled"), default="rescaled")
    sp = sub.add_parser("mul", parents=[common])
    sp.add_argument("left")
    sp.add_argument("right")
    sp = sub.add_parser("scan", parents=[common])
    sp.add_argument("--deg", type=int, default=4)
    sp.add_argument("--zrange", type=int, default=3)
    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    sp.add_argument("--ell", type=int, default=3)
    sp.add_argument("--max-exp", dest="max_exp", type=int, default=None)
    sp.add_argument("--deg", type=int, default=None)
    sp.add_argument("--zrange", type=int, default=3)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes for --suite all")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else 2
    if a.n < 1:
        print("error: --n must be positive", file=sys.stderr)
        return 2
    if getattr(a, "ell", 3) < 3 or getattr(a, "ell", 3) % 2 == 0:
        print("error: --ell must be an odd integer >= 3", file=sys.stderr)
        return 2
    try:
        out = COMMANDS[a.command](a)
    except (ParseError, EvalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text, data = out[0], out[1]
    ok = out[2] if len(out) > 2 else True
    if a.json:
        payload = {"schema": SCHEMA, "command": a.command, "n": a.n, "ok": ok, "result": data}
        if hasattr(a, "expr"):
            payload["input"] = a.expr
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print(text)
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
