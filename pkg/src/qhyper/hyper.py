"""Integral forms spanned by divided powers and binomial generators.

Basis monomials are exponent tuples in the letter order of
:mod:`qhyper.qmatrix`.  An off-diagonal entry ``h`` stands for the divided
power ``tb[i,j]^(h) = t[i,j]^h / ((q - q^-1)^h [h]!)``; a diagonal entry
``k`` stands for the binomial ``(t[l,l]; 0 choose k)``.

Every basis monomial is written as ``P / c`` with ``P`` an integral
combination of t-monomials whose leading term is ``t^tau`` with a unit
coefficient, and ``c`` a Laurent polynomial.  Contraction back to the
basis is then a triangular elimination that never leaves ``Z[q, q^-1]``;
the only divisions are exact divisions by the products ``c_a c_b`` and
those are where integrality is certified (or refuted).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from math import comb
from typing import Iterable, Iterator, Sequence

from .ncalg import power_binomial_coeffs
from .qmatrix import (
    GLElem,
    ManinAlgebra,
    Mono,
    QMatElem,
    algebra,
    coproduct_mono,
    qdet,
    sl_project,
)
from .qring import (
    QQ,
    CycloZ,
    LaurentZ,
    RationalQ,
    bal_binom,
    bal_fact,
    fmt_coeff,
    gauss_binom,
    laurent_lcm,
    qfact,
    specialize_eps,
    specialize_one,
)

_ONE = LaurentZ.one()
_ZERO = LaurentZ.zero()
Q1 = LaurentZ.q_power(1)


class IntegralityError(ArithmeticError):
    """A product or coproduct of integral basis elements left the integral lattice."""


def _add_into(acc: dict, key, c) -> None:
    v = acc.get(key)
    v = c if v is None else v + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _lz(c) -> LaurentZ:
    if isinstance(c, LaurentZ):
        return c
    if isinstance(c, int):
        return LaurentZ.from_int(c)
    r = RationalQ.coerce(c)
    if not r.is_laurent():
        raise TypeError("coefficient is not a Laurent polynomial")
    return r.to_laurent()


def _split_scalar(c) -> tuple[LaurentZ, LaurentZ]:
    """``c = num / den`` with Laurent ``num`` and ``den``."""
    if isinstance(c, (int, LaurentZ)):
        return LaurentZ.coerce(c), _ONE
    r = RationalQ.coerce(c)
    return LaurentZ(0, r.num), LaurentZ(0, r.den)


def _maybe_laurent(r: RationalQ):
    return r.to_laurent() if r.is_laurent() else r


# ---------------------------------------------------------------------------
# Ambient fractions: integral numerator over a Laurent denominator
# ---------------------------------------------------------------------------


class Frac:
    """``num / den`` with ``num`` an integral combination of t-monomials."""

    __slots__ = ("alg", "num", "den")

    def __init__(self, alg: ManinAlgebra, num: dict, den: LaurentZ = _ONE):
        self.alg = alg
        self.num = {m: c for m, c in num.items() if c}
        self.den = den

    @classmethod
    def from_qmat(cls, a: QMatElem) -> "Frac":
        den = _ONE
        for c in a.terms.values():
            _, d = _split_scalar(c)
            if d != _ONE:
                den = laurent_lcm(den, d)
        num = {}
        for m, c in a.terms.items():
            cn, cd = _split_scalar(c)
            num[m] = cn * den.divexact(cd)
        return cls(a.alg, num, den)

    def to_qmat(self) -> QMatElem:
        d = RationalQ.coerce(self.den)
        return QMatElem(self.alg, {m: _maybe_laurent(RationalQ.coerce(c) / d) for m, c in self.num.items()})

    def one_like(self) -> "Frac":
        return Frac(self.alg, {self.alg.zero_mono: _ONE})

    def zero_like(self) -> "Frac":
        return Frac(self.alg, {})

    def __add__(self, other) -> "Frac":
        if not isinstance(other, Frac):
            other = self.one_like().scale(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            num = dict(self.num)
            for m, c in other.num.items():
                _add_into(num, m, c)
            return Frac(self.alg, num, self.den)
        den = laurent_lcm(self.den, other.den)
        f1 = den.divexact(self.den)
        f2 = den.divexact(other.den)
        num = {m: c * f1 for m, c in self.num.items()}
        for m, c in other.num.items():
            _add_into(num, m, c * f2)
        return Frac(self.alg, num, den)

    __radd__ = __add__

    def __neg__(self) -> "Frac":
        return Frac(self.alg, {m: -c for m, c in self.num.items()}, self.den)

    def __sub__(self, other) -> "Frac":
        if not isinstance(other, Frac):
            other = self.one_like().scale(other)
        return self + (-other)

    def __rsub__(self, other) -> "Frac":
        return (-self) + other

    def scale(self, c) -> "Frac":
        cn, cd = _split_scalar(c)
        if not cn:
            return self.zero_like()
        return Frac(self.alg, {m: v * cn for m, v in self.num.items()}, self.den * cd)

    def __mul__(self, other) -> "Frac":
        if not isinstance(other, Frac):
            return self.scale(other)
        return Frac(self.alg, self.alg.mul_terms(self.num, other.num), self.den * other.den)

    def __rmul__(self, other) -> "Frac":
        return self.scale(other)

    def __pow__(self, e: int) -> "Frac":
        out = self.one_like()
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other) -> bool:
        if not isinstance(other, Frac):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Frac({self.to_qmat()})"


# ---------------------------------------------------------------------------
# Generators as ambient elements
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def binom_numerator(c: int, k: int) -> tuple[LaurentZ, ...]:
    """Coefficients (by power of X) of ``prod_{s=1}^k (q^{c+1-s} X - 1)``."""
    poly = [_ONE]
    for s in range(1, k + 1):
        a = LaurentZ.q_power(c + 1 - s)
        new = [_ZERO] * (len(poly) + 1)
        for p, v in enumerate(poly):
            new[p + 1] = new[p + 1] + v * a
            new[p] = new[p] - v
        poly = new
    return tuple(poly)


@lru_cache(maxsize=None)
def binom_denominator(k: int) -> LaurentZ:
    out = _ONE
    for s in range(1, k + 1):
        out = out * (LaurentZ.q_power(s) - 1)
    return out


def _diag_poly(alg: ManinAlgebra, l: int, coeffs: Sequence[LaurentZ], base: Mono | None = None) -> dict:
    k = alg.index[(l, l)]
    out = {}
    for p, v in enumerate(coeffs):
        if v:
            m = list(base or alg.zero_mono)
            m[k] += p
            out[tuple(m)] = v
    return out


def tb(n: int, i: int, j: int, h: int) -> Frac:
    """Divided power ``tb[i,j]^(h)``."""
    if i == j:
        raise ValueError("divided powers are for off-diagonal entries")
    alg = algebra(n)
    return Frac(alg, {alg.unit_mono(alg.index[(i, j)], h): _ONE}, QQ ** h * bal_fact(h))


def t_entry(n: int, i: int, j: int) -> Frac:
    alg = algebra(n)
    return Frac(alg, {alg.unit_mono(alg.index[(i, j)]): _ONE})


def binom(n: int, l: int, c: int, k: int) -> Frac:
    """``(t[l,l]; c choose k)``."""
    alg = algebra(n)
    return Frac(alg, _diag_poly(alg, l, binom_numerator(c, k)), binom_denominator(k))


def curly(n: int, l: int, c: int, k: int, r: int) -> Frac:
    """``{t[l,l]; c over k, r} = sum_s q^{C(s+1,2)} (r choose s)_q (t[l,l]; c+s choose k-r)``."""
    alg = algebra(n)
    if k < r:
        return Frac(alg, {})
    acc: list[LaurentZ] = [_ZERO] * (k - r + 1)
    for s in range(r + 1):
        w = gauss_binom(r, s).shift(comb(s + 1, 2))
        for p, v in enumerate(binom_numerator(c + s, k - r)):
            acc[p] = acc[p] + w * v
    return Frac(alg, _diag_poly(alg, l, acc), binom_denominator(k - r))


# ---------------------------------------------------------------------------
# The basis and contraction
# ---------------------------------------------------------------------------


class HyperBasis:
    """Expansion data ``P_tau``, ``c_tau`` and the triangular contraction for size ``n``."""

    def __init__(self, n: int):
        self.n = n
        self.alg = algebra(n)
        self.diag = [self.alg.index[(k, k)] for k in range(1, n + 1)]
        self.diag_set = set(self.diag)
        self._p: dict[Mono, dict] = {}
        self._c: dict[Mono, LaurentZ] = {}
        self._prod: dict[tuple[Mono, Mono], dict[Mono, LaurentZ]] = {}
        self._cop: dict[Mono, dict] = {}

    def c_tau(self, m: Mono) -> LaurentZ:
        hit = self._c.get(m)
        if hit is None:
            hit = _ONE
            for k, e in enumerate(m):
                if not e:
                    continue
                if k in self.diag_set:
                    hit = hit * binom_denominator(e)
                else:
                    hit = hit * QQ ** e * bal_fact(e)
            self._c[m] = hit
        return hit

    def unit_tau(self, m: Mono) -> LaurentZ:
        """Leading coefficient of ``P_tau``: ``q^{-sum C(k,2)}`` over diagonal entries."""
        return LaurentZ.q_power(-sum(comb(m[k], 2) for k in self.diag))

    def p_tau(self, m: Mono) -> dict:
        hit = self._p.get(m)
        if hit is None:
            base = list(m)
            for k in self.diag:
                base[k] = 0
            hit = {tuple(base): _ONE}
            for l, k in zip(range(1, self.n + 1), self.diag):
                e = m[k]
                if not e:
                    continue
                coeffs = binom_numerator(0, e)
                new = {}
                for mono, v in hit.items():
                    for p, w in enumerate(coeffs):
                        if w:
                            mm = list(mono)
                            mm[k] += p
                            _add_into(new, tuple(mm), v * w)
                hit = new
            self._p[m] = hit
        return hit

    def expand(self, m: Mono) -> Frac:
        return Frac(self.alg, dict(self.p_tau(m)), self.c_tau(m))

    def contract_numerator(self, f: dict) -> dict:
        """Coordinates ``y`` with ``f = sum_mu y_mu * M_mu`` for integral ``f`` (so ``y_mu = coef * c_mu``)."""
        rem = dict(f)
        out: dict = {}
        while rem:
            top = max(sum(m) for m in rem)
            layer = [m for m in rem if sum(m) == top]
            for mu in layer:
                c = rem.get(mu)
                if not c:
                    continue
                scale = c.shift(sum(comb(mu[k], 2) for k in self.diag))
                for mono, v in self.p_tau(mu).items():
                    _add_into(rem, mono, -(scale * v))
                _add_into(out, mu, scale * self.c_tau(mu))
        return out

    def contract(self, x) -> "HyperElem":
        if isinstance(x, GLElem):
            out = self.contract(x.num)
            out.dqinv = x.k
            return out
        if isinstance(x, QMatElem):
            x = Frac.from_qmat(x)
        ys = self.contract_numerator(x.num)
        terms = {}
        for mu, y in ys.items():
            q = y.divexact(x.den)
            terms[mu] = q if q is not None else RationalQ.coerce(y) / RationalQ.coerce(x.den)
        return HyperElem(self, terms)

    # -- products ---------------------------------------------------------------
    def product(self, a: Mono, b: Mono) -> dict[Mono, LaurentZ]:
        """Integral coordinates of ``M_a M_b``; raises :class:`IntegralityError` otherwise."""
        key = (a, b)
        hit = self._prod.get(key)
        if hit is not None:
            return hit
        num = self.alg.mul_terms(self.p_tau(a), self.p_tau(b))
        den = self.c_tau(a) * self.c_tau(b)
        out = {}
        for mu, y in self.contract_numerator(num).items():
            q = y.divexact(den)
            if q is None:
                raise IntegralityError(
                    f"non-integral structure constant for {self.show(a)} * {self.show(b)} at {self.show(mu)}"
                )
            out[mu] = q
        self._prod[key] = out
        return out

    def coproduct(self, m: Mono) -> dict[tuple[Mono, Mono], LaurentZ]:
        """Integral coordinates of ``Delta(M_tau)`` in the basis of the tensor square."""
        hit = self._cop.get(m)
        if hit is not None:
            return hit
        delta_p: dict = {}
        for mono, v in self.p_tau(m).items():
            for key, w in coproduct_mono(self.alg, mono).terms.items():
                _add_into(delta_p, key, v * w)
        out = self._contract_tensor(delta_p, self.c_tau(m))
        self._cop[m] = out
        return out

    def _contract_tensor(self, delta: dict, den: LaurentZ) -> dict:
        by_right: dict = {}
        for (a, b), c in delta.items():
            by_right.setdefault(b, {})[a] = c
        stage: dict = {}
        for b, left in by_right.items():
            for mu, y in self.contract_numerator(left).items():
                stage.setdefault(mu, {})[b] = y
        out: dict = {}
        for mu, right in stage.items():
            for nu, y in self.contract_numerator(right).items():
                q = y.divexact(den)
                if q is None:
                    raise IntegralityError(f"non-integral coproduct coordinate at {self.show(mu)} (x) {self.show(nu)}")
                out[(mu, nu)] = q
        return out

    # -- display ------------------------------------------------------------------
    def show(self, m: Mono) -> str:
        parts = []
        for k, (i, j) in enumerate(self.alg.letters):
            e = m[k]
            if not e:
                continue
            if i == j:
                parts.append(f"bin[{i}](0,{e})")
            else:
                parts.append(f"tb[{i},{j}]^({e})")
        return " ".join(parts) if parts else "1"

    def monomials(self, max_degree: int) -> list[Mono]:
        out = []
        for d in range(max_degree + 1):
            out.extend(self.alg.monomials(d))
        return out

    def mono_from_entries(self, entries: dict[tuple[int, int], int]) -> Mono:
        m = [0] * self.alg.N
        for (i, j), e in entries.items():
            m[self.alg.index[(i, j)]] += e
        return tuple(m)


@lru_cache(maxsize=None)
def basis(n: int) -> HyperBasis:
    return HyperBasis(n)


class HyperElem:
    """Coordinates in the integral basis (plus an optional power of ``D_q^-1``)."""

    __slots__ = ("basis", "terms", "dqinv", "context")

    def __init__(self, b: HyperBasis, terms: dict | None = None, dqinv: int = 0, context: str = "M"):
        self.basis = b
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        self.dqinv = dqinv
        self.context = context

    @classmethod
    def monomial(cls, n: int, m: Mono, coeff=None) -> "HyperElem":
        return cls(basis(n), {tuple(m): _ONE if coeff is None else coeff})

    @classmethod
    def from_entries(cls, n: int, entries: dict[tuple[int, int], int], coeff=None) -> "HyperElem":
        b = basis(n)
        return cls(b, {b.mono_from_entries(entries): _ONE if coeff is None else coeff})

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def integral(self) -> bool:
        return all(isinstance(c, LaurentZ) or RationalQ.coerce(c).is_laurent() for c in self.terms.values())

    def one_like(self) -> "HyperElem":
        return HyperElem(self.basis, {self.basis.alg.zero_mono: _ONE})

    def zero_like(self) -> "HyperElem":
        return HyperElem(self.basis, {})

    def __add__(self, other) -> "HyperElem":
        if not isinstance(other, HyperElem):
            other = self.one_like().scale(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            _add_into(terms, m, c)
        return HyperElem(self.basis, terms, self.dqinv)

    __radd__ = __add__

    def __neg__(self) -> "HyperElem":
        return HyperElem(self.basis, {m: -c for m, c in self.terms.items()}, self.dqinv)

    def __sub__(self, other) -> "HyperElem":
        if not isinstance(other, HyperElem):
            other = self.one_like().scale(other)
        return self + (-other)

    def scale(self, c) -> "HyperElem":
        if not c:
            return self.zero_like()
        return HyperElem(self.basis, {m: c * v for m, v in self.terms.items()}, self.dqinv)

    def __mul__(self, other) -> "HyperElem":
        if not isinstance(other, HyperElem):
            return self.scale(other)
        return hyper_multiply(self, other)

    def __rmul__(self, other) -> "HyperElem":
        return self.scale(other)

    def __pow__(self, e: int) -> "HyperElem":
        out = self.one_like()
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, HyperElem):
            return NotImplemented
        return self.basis is other.basis and (self - other).is_zero() and self.dqinv == other.dqinv

    __hash__ = None  # type: ignore[assignment]

    def expand(self) -> Frac:
        out = Frac(self.basis.alg, {})
        for m, c in self.terms.items():
            out = out + self.basis.expand(m).scale(c)
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        alg = self.basis.alg
        for m in sorted(self.terms, key=alg.deglex, reverse=True):
            ctext = fmt_coeff(self.terms[m])
            mono = self.basis.show(m)
            if ctext == "1":
                parts.append(mono)
            elif ctext == "-1":
                parts.append("-" + mono)
            elif mono == "1":
                parts.append(f"({ctext})" if " " in ctext else ctext)
            else:
                parts.append(f"({ctext}) {mono}" if (" " in ctext or "/" in ctext) else f"{ctext} {mono}")
        s = " + ".join(parts).replace("+ -", "- ")
        if self.dqinv:
            s = f"({s}) Dqinv" + (f"^{self.dqinv}" if self.dqinv > 1 else "")
        return s

    def __repr__(self) -> str:
        return f"HyperElem({self})"

    def to_json(self) -> dict:
        alg = self.basis.alg
        rows = []
        for m in sorted(self.terms, key=alg.deglex, reverse=True):
            rows.append({"tau": alg.tau(m), "dqinv": self.dqinv, "coeff": RationalQ.coerce(self.terms[m]).to_json()})
        return {"context": self.context, "n": self.n, "integral": self.integral, "terms": rows}


def expand(x) -> Frac:
    if isinstance(x, HyperElem):
        return x.expand()
    raise TypeError("expand takes a HyperElem")


def contract(a, n: int | None = None) -> HyperElem:
    if isinstance(a, Frac):
        return basis(a.alg.n).contract(a)
    if isinstance(a, GLElem):
        return basis(a.n).contract(a)
    return basis(a.n).contract(a)


def hyper_multiply(x: HyperElem, y: HyperElem) -> HyperElem:
    if x.basis is not y.basis:
        raise ValueError("size mismatch")
    b = x.basis
    out: dict = {}
    for ma, ca in x.terms.items():
        for mb, cb in y.terms.items():
            c = ca * cb
            for mu, v in b.product(ma, mb).items():
                _add_into(out, mu, c * v)
    res = HyperElem(b, out, x.dqinv + y.dqinv)
    if x.integral and y.integral and not res.integral:
        raise IntegralityError("product of integral elements is not integral")
    return res


def hyper_counit(x: HyperElem):
    out = _ZERO
    for m, c in x.terms.items():
        e = counit_of_basis(x.basis, m)
        if e:
            out = c * e + out
    return out


def counit_of_basis(b: HyperBasis, m: Mono) -> LaurentZ:
    """``eps(M_tau)``: zero with any divided power, else ``prod (0 choose k)_q = [k == 0]``."""
    return _ONE if not any(m) else _ZERO


# ---------------------------------------------------------------------------
# Generators as basis elements (with c != 0 rewritten to c = 0)
# ---------------------------------------------------------------------------


def gen_tb(n: int, i: int, j: int, h: int) -> HyperElem:
    return HyperElem.from_entries(n, {(i, j): h})


def gen_binom(n: int, l: int, c: int, k: int) -> HyperElem:
    """``(t[l,l]; c choose k)`` rewritten into ``c = 0`` binomials."""
    return basis(n).contract(binom(n, l, c, k))


def binom_shift_expansion(c: int, t: int) -> dict[int, LaurentZ]:
    """Coefficients ``a_p`` with ``(X; c choose t) = sum_p a_p (X; 0 choose p)`` from the shift identities."""
    out: dict[int, LaurentZ] = {}
    if c >= 0:
        for p in range(0, min(c, t) + 1):
            out[t - p] = gauss_binom(c, p).shift((c - p) * (t - p))
    else:
        cc = -c
        for p in range(0, t + 1):
            v = gauss_binom(p + cc - 1, p).shift(-t * (cc + p) + p * (p + 1) // 2)
            out[t - p] = v * ((-1) ** p)
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# Relation families
# ---------------------------------------------------------------------------


FAMILIES = ("qDP", "qBC", "HV1", "HV2", "HV3", "CD1", "CD2", "D1", "D2", "D3p", "D3m", "D4p", "D4m")


@dataclass(frozen=True)
class RelationInstance:
    family: str
    n: int
    indices: tuple
    params: tuple
    variant: str = "standard"

    def label(self) -> str:
        idx = ",".join(map(str, self.indices))
        par = ",".join(map(str, self.params))
        tag = "" if self.variant == "standard" else f"[{self.variant}]"
        return f"{self.family}{tag}({idx}; {par})"


def _sum(items: Iterable[Frac], alg: ManinAlgebra) -> Frac:
    out = Frac(alg, {})
    for x in items:
        out = out + x
    return out


def relation_sides(inst: RelationInstance) -> tuple[Frac, Frac]:
    f = inst.family
    n = inst.n
    alg = algebra(n)
    if f == "qDP":
        (i, j), (r, s) = inst.indices, inst.params
        lhs = tb(n, i, j, r) * tb(n, i, j, s)
        rhs = tb(n, i, j, r + s).scale(bal_binom(r + s, s))
        return lhs, rhs
    if f == "qBC":
        return _qbc_sides(inst)
    if f == "HV1":
        (kind, i, j, k), (h, ff) = inst.indices, inst.params
        if kind == "row":
            x, y = tb(n, i, j, h), tb(n, i, k, ff)
        else:
            x, y = tb(n, j, i, h), tb(n, k, i, ff)
        return x * y, (y * x).scale(LaurentZ.q_power(h * ff))
    if f in ("HV2", "HV3"):
        (kind, i, j), (c, k, h) = inst.indices, inst.params
        shift = h if f == "HV2" else -h
        x = tb(n, i, j, h) if kind == "row" else tb(n, j, i, h)
        return binom(n, i, c, k) * x, x * binom(n, i, c + shift, k)
    if f == "CD1":
        (l, i, j), (c, k, h) = inst.indices, inst.params
        x = tb(n, i, j, h)
        return binom(n, l, c, k) * x, x * binom(n, l, c, k)
    if f == "CD2":
        (i, j, l, k), (h, ff) = inst.indices, inst.params
        x, y = tb(n, i, j, h), tb(n, l, k, ff)
        return x * y, y * x
    if f == "D1":
        (i, j, l, k), (h, ff) = inst.indices, inst.params
        lhs = tb(n, l, k, ff) * tb(n, i, j, h)
        terms = []
        for s in range(min(h, ff) + 1):
            coef = LaurentZ.q_power(comb(s + 1, 2) - s * (h + ff - s), (-1) ** s) * QQ ** s * bal_fact(s)
            terms.append((tb(n, i, j, h - s) * tb(n, i, k, s) * tb(n, l, j, s) * tb(n, l, k, ff - s)).scale(coef))
        return lhs, _sum(terms, alg)
    if f == "D2":
        (i, j), (h, k, r, s) = inst.indices, inst.params
        lhs = binom(n, j, k, r) * binom(n, i, h, s)
        terms = []
        for p in range(min(r, s) + 1):
            expo = p * ((h + k) - (r + s)) - comb(p, 2)
            coef = LaurentZ.q_power(expo, (-1) ** p) * QQ ** p * bal_fact(p)
            term = tb(n, i, j, p) * curly(n, i, h - p, s, p) * curly(n, j, k - p, r, p) * tb(n, j, i, p)
            terms.append(term.scale(coef))
        return lhs, _sum(terms, alg)
    if f in ("D3p", "D3m"):
        return _d3_sides(inst)
    if f in ("D4p", "D4m"):
        return _d4_sides(inst)
    raise ValueError(f"unknown relation family {f!r}")


def _qbc_sides(inst: RelationInstance) -> tuple[Frac, Frac]:
    n = inst.n
    (which, l), params = inst.indices, inst.params
    B = lambda c, t: binom(n, l, c, t)  # noqa: E731
    if which == "product":
        c, t, s = params
        return B(c, t) * B(c - t, s), B(c, t + s).scale(gauss_binom(t + s, t))
    if which == "pascal":
        c, t = params
        lhs = B(c + 1, t) - B(c, t).scale(LaurentZ.q_power(t))
        rhs = B(c, t - 1) if t >= 1 else B(c, 0).scale(0)
        return lhs, rhs
    if which == "commute":
        c, m, s, k = params
        return B(c, m) * B(s, k), B(s, k) * B(c, m)
    if which == "shift_pos":
        c, t = params
        rhs = _sum((B(0, t - p).scale(gauss_binom(c, p).shift((c - p) * (t - p))) for p in range(min(c, t) + 1)), algebra(n))
        return B(c, t), rhs
    if which == "zero":
        (c,) = params
        return B(c, 0), B(c, 0).one_like()
    if which == "shift_neg":
        c, t = params
        terms = []
        for p in range(t + 1):
            coef = gauss_binom(p + c - 1, p).shift(-t * (c + p) + p * (p + 1) // 2) * ((-1) ** p)
            terms.append(B(0, t - p).scale(coef))
        return B(-c, t), _sum(terms, algebra(n))
    if which == "difference":
        c, t = params
        lhs = B(c + 1, t) - B(c, t)
        x = B(0, 0).one_like() + B(0, 1).scale(Q1 - 1)
        rhs = (x * B(c, t - 1)).scale(LaurentZ.q_power(c - t + 1))
        return lhs, rhs
    raise ValueError(f"unknown binomial identity {which!r}")


def _d3_sides(inst: RelationInstance) -> tuple[Frac, Frac]:
    """Both right-hand forms share one left side; ``params[-1]`` selects the form."""
    n = inst.n
    alg = algebra(n)
    (i, j, k), (h, f, form) = inst.indices, inst.params
    Afn = lambda r, s: comb(r + 1, 2) + comb(s, 2) - r * (h + f - r)  # noqa: E731
    qm1 = Q1 - 1
    terms = []
    if inst.family == "D3p":
        lhs = tb(n, j, k, f) * tb(n, i, j, h)
        for r in range(min(h, f) + 1):
            for s in range(r + 1):
                coef = LaurentZ.q_power(Afn(r, s), (-1) ** r) * qm1 ** s * qfact(s) * gauss_binom(r, s)
                if form == 1:
                    term = tb(n, i, j, h - r) * tb(n, i, k, r) * tb(n, j, k, f - r) * binom(n, j, f - r, s)
                else:
                    term = tb(n, i, j, h - r) * tb(n, i, k, r) * binom(n, j, 0, s) * tb(n, j, k, f - r)
                terms.append(term.scale(coef))
    else:
        l = k
        lhs = tb(n, l, j, f) * tb(n, j, i, h)
        for r in range(min(h, f) + 1):
            for s in range(r + 1):
                coef = LaurentZ.q_power(Afn(r, s), (-1) ** r) * qm1 ** s * qfact(s) * gauss_binom(r, s)
                if form == 1:
                    term = binom(n, j, h - r, s) * tb(n, j, i, h - r) * tb(n, l, i, r) * tb(n, l, j, f - r)
                else:
                    term = tb(n, j, i, h - r) * binom(n, j, 0, s) * tb(n, l, i, r) * tb(n, l, j, f - r)
                terms.append(term.scale(coef))
    return lhs, _sum(terms, alg)


def _d4_sides(inst: RelationInstance) -> tuple[Frac, Frac]:
    n = inst.n
    alg = algebra(n)
    terms = []
    if inst.family == "D4p":
        (i, l, j), (c, k, f) = inst.indices, inst.params
        lhs = tb(n, l, j, f) * binom(n, i, c, k)
        for s in range(min(f, k) + 1):
            if inst.variant == "alternate":
                coef = LaurentZ.q_power(comb(s + 1, 2) - s * (f - k + c)) * QQ ** s * bal_fact(s)
                cur = curly(n, i, c, k, s)
            else:
                coef = LaurentZ.q_power(comb(s + 1, 2) - s * (f + k - c), (-1) ** s) * QQ ** s * bal_fact(s)
                cur = curly(n, i, c - 2 * s, k, s)
            term = cur * tb(n, i, j, s) * tb(n, l, i, s) * tb(n, l, j, f - s)
            terms.append(term.scale(coef))
    else:
        (i, h, l), (c, k, f) = inst.indices, inst.params
        lhs = binom(n, l, c, k) * tb(n, i, h, f)
        for s in range(min(f, k) + 1):
            if inst.variant == "alternate":
                coef = LaurentZ.q_power(comb(s + 1, 2) - s * (f - k + c)) * QQ ** s * bal_fact(s)
                cur = curly(n, l, c, k, s)
            else:
                coef = LaurentZ.q_power(comb(s + 1, 2) - s * (f + k - c), (-1) ** s) * QQ ** s * bal_fact(s)
                cur = curly(n, l, c - 2 * s, k, s)
            term = tb(n, i, h, f - s) * tb(n, i, l, s) * tb(n, l, h, s) * cur
            terms.append(term.scale(coef))
    return lhs, _sum(terms, alg)


def relation_check(inst: RelationInstance) -> bool:
    lhs, rhs = relation_sides(inst)
    return (lhs - rhs).is_zero()


# ---------------------------------------------------------------------------
# Tensor square in basis coordinates and closed coproduct formulas
# ---------------------------------------------------------------------------


class HTensor:
    """Element of the tensor square, coordinates on pairs of basis monomials."""

    __slots__ = ("basis", "terms")

    def __init__(self, b: HyperBasis, terms: dict | None = None):
        self.basis = b
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def pure(cls, x: HyperElem, y: HyperElem) -> "HTensor":
        return cls(x.basis, {(a, b): ca * cb for a, ca in x.terms.items() for b, cb in y.terms.items()})

    @classmethod
    def one(cls, b: HyperBasis) -> "HTensor":
        z = b.alg.zero_mono
        return cls(b, {(z, z): _ONE})

    def __add__(self, other: "HTensor") -> "HTensor":
        terms = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(terms, k, c)
        return HTensor(self.basis, terms)

    def __neg__(self) -> "HTensor":
        return HTensor(self.basis, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "HTensor") -> "HTensor":
        return self + (-other)

    def scale(self, c) -> "HTensor":
        return HTensor(self.basis, {k: c * v for k, v in self.terms.items()}) if c else HTensor(self.basis)

    def __mul__(self, other: "HTensor") -> "HTensor":
        b = self.basis
        out: dict = {}
        for (a1, a2), c in self.terms.items():
            for (b1, b2), d in other.terms.items():
                left = b.product(a1, b1)
                right = b.product(a2, b2)
                cd = c * d
                for m1, v1 in left.items():
                    for m2, v2 in right.items():
                        _add_into(out, (m1, m2), cd * v1 * v2)
        return HTensor(b, out)

    def flip(self) -> "HTensor":
        return HTensor(self.basis, {(b, a): c for (a, b), c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, HTensor):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        show = self.basis.show
        parts = [f"({fmt_coeff(c)}) {show(a)} @ {show(b)}" for (a, b), c in sorted(self.terms.items())]
        return " + ".join(parts)


def hyper_coproduct(x: HyperElem) -> HTensor:
    """Coproduct computed in the ambient tensor square and contracted on both legs."""
    out: dict = {}
    for m, c in x.terms.items():
        for key, v in x.basis.coproduct(m).items():
            _add_into(out, key, c * v)
    return HTensor(x.basis, out)


def _binom_elem(n: int, l: int, c: int, t: int) -> HyperElem:
    """``(t[l,l]; c choose t)`` via the shift identities (no ambient computation)."""
    b = basis(n)
    k = b.alg.index[(l, l)]
    terms = {}
    for p, v in binom_shift_expansion(c, t).items():
        m = [0] * b.alg.N
        m[k] = p
        terms[tuple(m)] = v
    return HyperElem(b, terms)


def _power_elem(n: int, l: int, e: int) -> HyperElem:
    """``t[l,l]^e`` in binomial coordinates."""
    b = basis(n)
    k = b.alg.index[(l, l)]
    terms = {}
    for p, v in enumerate(power_binomial_coeffs(e)):
        m = [0] * b.alg.N
        m[k] = p
        terms[tuple(m)] = v
    return HyperElem(b, terms)


def _diag_tensor_binom(n: int, l: int, sigma: int, t: int) -> HTensor:
    """``(x (x) x; sigma choose t)`` for ``x = t[l,l]`` with the split ``sigma = a + b``.

    Uses ``(XY; a+b choose t) = sum_{r+s=t} q^{-rs} (X; a choose r)(Y; b choose s)(q^b Y)^r``
    for commuting ``X``, ``Y``.
    """
    a = sigma // 2
    bb = sigma - a
    out = HTensor(basis(n))
    for r in range(t + 1):
        s = t - r
        left = _binom_elem(n, l, a, r)
        right = _binom_elem(n, l, bb, s) * _power_elem(n, l, r)
        out = out + HTensor.pure(left, right).scale(LaurentZ.q_power(-r * s + bb * r))
    return out


def _diag_tensor_curly(n: int, l: int, sigma: int, t: int, r: int) -> HTensor:
    out = HTensor(basis(n))
    if t < r:
        return out
    for s in range(r + 1):
        out = out + _diag_tensor_binom(n, l, sigma + s, t - r).scale(gauss_binom(r, s).shift(comb(s + 1, 2)))
    return out


def _hook_divided_power(n: int, i: int, ks: Sequence[int], h: int) -> HTensor:
    """``(sum_{k in ks} tb[i,k] (x) tb[k,i])^(h)`` by the q^2-commuting multinomial expansion."""
    b = basis(n)
    out = HTensor(b)
    ks = list(ks)
    from .ncalg import compositions

    for es in compositions(h, len(ks)) if ks else ([()] if h == 0 else []):
        coef = LaurentZ.q_power(sum(comb(e + 1, 2) for e in es) - comb(h + 1, 2))
        term = HTensor.one(b)
        for k, e in zip(ks, es):
            if e:
                coef = coef * bal_fact(e)
                term = term * HTensor.pure(gen_tb(n, i, k, e), gen_tb(n, k, i, e))
        out = out + term.scale(coef)
    return out


def coproduct_closed_binom(n: int, i: int, c: int, k: int) -> HTensor:
    """Closed formula for the coproduct of ``(t[i,i]; c choose k)``.

    Writing ``Delta(t[i,i]) = a + (q - q^-1)^2 (U + V)`` with ``a = t[i,i] (x) t[i,i]``
    and ``U``, ``V`` the hook sums below and above ``i``, the binomial is
    peeled twice by the q^2-commutation expansion: first ``V`` (which
    q^2-commutes past ``a + U``), then ``U``.
    """
    lower = list(range(1, i))
    upper = list(range(i + 1, n + 1))
    out = HTensor(basis(n))
    for r in range(k + 1):
        vr = _hook_divided_power(n, i, upper, r)
        if vr.is_zero():
            continue
        c1 = c - 2 * r
        inner = HTensor(basis(n))
        for s in range(r + 1):
            cc = c1 + s
            m = k - r
            w_s = gauss_binom(r, s).shift(comb(s + 1, 2))
            for h in range(m + 1):
                uh = _hook_divided_power(n, i, lower, h)
                if uh.is_zero():
                    continue
                piece = uh * _diag_tensor_curly(n, i, cc - 2 * h, m, h)
                inner = inner + piece.scale(w_s * QQ ** h * LaurentZ.q_power(h * (cc - m)))
        out = out + (inner * vr).scale(QQ ** r * LaurentZ.q_power(r * (c - k)))
    return out


def coproduct_closed_divided(n: int, i: int, j: int, h: int) -> HTensor:
    """Closed formula for the coproduct of ``tb[i,j]^(h)``."""
    b = basis(n)
    out = HTensor(b)
    from .ncalg import compositions

    qm1 = Q1 - 1
    for es in compositions(h, n):
        ei, ej = es[i - 1], es[j - 1]
        base = LaurentZ.q_power(sum(comb(e, 2) for e in es) - comb(h, 2)) * QQ ** (h - ei - ej)
        for k, e in enumerate(es, start=1):
            if k not in (i, j):
                base = base * bal_fact(e)
        for r in range(ei + 1):
            for s in range(ej + 1):
                coef = base * LaurentZ.q_power(comb(r, 2) + comb(s, 2)) * qfact(r) * qfact(s)
                coef = coef * gauss_binom(ei, r) * gauss_binom(ej, s) * qm1 ** (r + s)
                left = HyperElem(b, {b.alg.zero_mono: _ONE})
                right = HyperElem(b, {b.alg.zero_mono: _ONE})
                for k, e in enumerate(es, start=1):
                    if k == i:
                        lf, rf = gen_binom0(n, i, r), gen_tb(n, i, j, e)
                    elif k == j:
                        lf, rf = gen_tb(n, i, j, e), gen_binom0(n, j, s)
                    else:
                        if not e:
                            continue
                        lf, rf = gen_tb(n, i, k, e), gen_tb(n, k, j, e)
                    left = left * lf
                    right = right * rf
                out = out + HTensor.pure(left, right).scale(coef)
    return out


def gen_binom0(n: int, l: int, k: int) -> HyperElem:
    return HyperElem.from_entries(n, {(l, l): k})


def coproduct_closed_form(kind: str, n: int, *params: int) -> HTensor:
    """``kind`` is ``"binom"`` with ``(l, c, k)`` or ``"tb"`` with ``(i, j, h)``."""
    if kind == "binom":
        return coproduct_closed_binom(n, *params)
    if kind == "tb":
        return coproduct_closed_divided(n, *params)
    raise ValueError(f"unknown generator kind {kind!r}")


# ---------------------------------------------------------------------------
# Relation suite enumeration
# ---------------------------------------------------------------------------


def relation_instances(n: int, max_exp: int = 3, max_c: int = 2, variant: str = "standard") -> Iterator[RelationInstance]:
    """Every valid index pattern of every family for size ``n``.

    ``variant`` selects the form of the two diagonal-corner families; the
    other families have a single form.
    """
    R = range(1, n + 1)
    E = range(max_exp + 1)
    C = range(-max_c, max_c + 1)
    for i in R:
        for j in R:
            if i != j:
                for r in E:
                    for s in E:
                        yield RelationInstance("qDP", n, (i, j), (r, s))
    for l in R:
        for c in C:
            yield RelationInstance("qBC", n, ("zero", l), (c,))
            for t in E:
                yield RelationInstance("qBC", n, ("pascal", l), (c, t))
                if t >= 1:
                    yield RelationInstance("qBC", n, ("difference", l), (c, t))
                if c >= 0:
                    yield RelationInstance("qBC", n, ("shift_pos", l), (c, t))
                if c >= 1:
                    yield RelationInstance("qBC", n, ("shift_neg", l), (c, t))
                for s in E:
                    yield RelationInstance("qBC", n, ("product", l), (c, t, s))
            for m in E:
                for s in C:
                    for k in E:
                        yield RelationInstance("qBC", n, ("commute", l), (c, m, s, k))
    for i in R:
        for j in R:
            for k in R:
                if i != j < k != i:
                    for h in E:
                        for f in E:
                            yield RelationInstance("HV1", n, ("row", i, j, k), (h, f))
                            yield RelationInstance("HV1", n, ("col", i, j, k), (h, f))
    for i in R:
        for j in R:
            if i == j:
                continue
            fam = "HV2" if i < j else "HV3"
            for c in C:
                for k in E:
                    for h in E:
                        yield RelationInstance(fam, n, ("row", i, j), (c, k, h))
                        yield RelationInstance(fam, n, ("col", i, j), (c, k, h))
                        for l in R:
                            if i < l < j or i > l > j:
                                yield RelationInstance("CD1", n, (l, i, j), (c, k, h))
    for i, j, l, k in iproduct(R, repeat=4):
        if j != i < l != k < j:
            for h in E:
                for f in E:
                    yield RelationInstance("CD2", n, (i, j, l, k), (h, f))
    for i, j, l, k in iproduct(R, repeat=4):
        if i < l and j < k and len({i, j, l, k}) == 4:
            for h in E:
                for f in E:
                    yield RelationInstance("D1", n, (i, j, l, k), (h, f))
    for i in R:
        for j in R:
            if i < j:
                for h in C:
                    for k in C:
                        for r in E:
                            for s in E:
                                yield RelationInstance("D2", n, (i, j), (h, k, r, s))
    for i, j, k in iproduct(R, repeat=3):
        if i < j < k:
            for h in E:
                for f in E:
                    for form in (1, 2):
                        yield RelationInstance("D3p", n, (i, j, k), (h, f, form))
                        yield RelationInstance("D3m", n, (i, j, k), (h, f, form))
    for a, b, c3 in iproduct(R, repeat=3):
        if len({a, b, c3}) < 3:
            continue
        # (i, l, j): t[l,j]^(f) against (t[i,i]; c choose k), i the smallest index
        if a < min(b, c3):
            for c in C:
                for k in E:
                    for f in E:
                        yield RelationInstance("D4p", n, (a, b, c3), (c, k, f), variant)
        # (i, h, l): (t[l,l]; c choose k) against t[i,h]^(f), l the largest index
        if c3 > max(a, b):
            for c in C:
                for k in E:
                    for f in E:
                        yield RelationInstance("D4m", n, (a, b, c3), (c, k, f), variant)


# ---------------------------------------------------------------------------
# Structure tables and specializations
# ---------------------------------------------------------------------------


@dataclass
class StructureTable:
    n: int
    context: str
    degree: int
    domain: str  # "LaurentZ", "int" or "CycloZ(ell)"
    table: dict = field(default_factory=dict)
    seconds: float = 0.0

    def __len__(self) -> int:
        return len(self.table)

    def product(self, a: Mono, b: Mono) -> dict:
        return self.table[(a, b)]


def build_structure_table(n: int, degree: int, context: str = "M", factor_degree: int | None = None) -> StructureTable:
    """Integral structure constants for all basis pairs of total degree at most ``degree``.

    With ``factor_degree`` set, pairs are taken with each factor of degree at
    most ``factor_degree`` instead.  Any non-integral constant raises
    :class:`IntegralityError`.
    """
    if context != "M":
        raise ValueError("structure tables are built for the matrix-algebra context")
    b = basis(n)
    t0 = time.perf_counter()
    out = StructureTable(n, context, degree if factor_degree is None else 2 * factor_degree, "LaurentZ")
    top = degree if factor_degree is None else factor_degree
    monos = b.monomials(top)
    for ma in monos:
        da = sum(ma)
        for mb in monos:
            if factor_degree is None and da + sum(mb) > degree:
                continue
            out.table[(ma, mb)] = b.product(ma, mb)
    out.seconds = time.perf_counter() - t0
    return out


def _spec_coeff(at):
    if at == "one":
        return specialize_one, "int"
    if isinstance(at, tuple) and at[0] == "eps":
        ell = at[1]
        return (lambda x: specialize_eps(x, ell)), f"CycloZ({ell})"
    raise ValueError("specialization point is 'one' or ('eps', ell)")


def _spec_dict(d: dict, f) -> dict:
    out = {}
    for k, v in d.items():
        w = f(v)
        if w:
            out[k] = w
    return out


def specialize_table(tbl: StructureTable, at) -> StructureTable:
    """Coefficient-wise image of a generic table at ``q = 1`` or ``q = eps``."""
    f, tag = _spec_coeff(at)
    out = StructureTable(tbl.n, tbl.context, tbl.degree, tag)
    out.table = {k: _spec_dict(v, f) for k, v in tbl.table.items()}
    return out


def specialize_elem(x: HyperElem, at) -> dict:
    f, _ = _spec_coeff(at)
    return _spec_dict({m: LaurentZ.coerce(c) if not isinstance(c, LaurentZ) else c for m, c in x.terms.items()}, f)


def specialize_htensor(x: HTensor, at) -> dict:
    f, _ = _spec_coeff(at)
    return _spec_dict(x.terms, f)


def _spec_product(b: HyperBasis, x: dict, y: dict, at, zero) -> dict:
    """Product of specialized coordinate vectors using specialized structure constants."""
    f, _ = _spec_coeff(at)
    out: dict = {}
    for ma, ca in x.items():
        for mb, cb in y.items():
            for mu, v in b.product(ma, mb).items():
                w = f(v)
                if w:
                    _add_into(out, mu, ca * cb * w)
    return out


# ---------------------------------------------------------------------------
# The q = 1 specialization against the dual Lie algebra brackets
# ---------------------------------------------------------------------------


def lie_generator(n: int, kind: str, i: int) -> HyperElem:
    """Image of a simple generator of the dual Lie algebra under the ``q = 1`` identification.

    ``e_i = e[i,i+1]`` corresponds to ``(-1) tb[i,i+1]``; ``f_i = f[i+1,i]``
    to ``tb[i+1,i]``; ``g_s`` to ``bin[s](0,1)``.
    """
    if kind == "e":
        return gen_tb(n, i, i + 1, 1).scale(LaurentZ.from_int(-1))
    if kind == "f":
        return gen_tb(n, i + 1, i, 1)
    if kind == "g":
        return gen_binom0(n, i, 1)
    raise ValueError(kind)


def _bracket_at_one(b: HyperBasis, x: dict, y: dict) -> dict:
    xy = _spec_product(b, x, y, "one", 0)
    yx = _spec_product(b, y, x, "one", 0)
    out = dict(xy)
    for m, c in yx.items():
        _add_into(out, m, -c)
    return out


def q1_bracket_report(n: int) -> dict:
    """Check the generator brackets of the dual Lie algebra on the ``q = 1`` structure constants."""
    b = basis(n)
    one = lambda x: specialize_elem(x, "one")  # noqa: E731
    gens = {("g", s): one(lie_generator(n, "g", s)) for s in range(1, n + 1)}
    for i in range(1, n):
        gens[("e", i)] = one(lie_generator(n, "e", i))
        gens[("f", i)] = one(lie_generator(n, "f", i))
    failures = []
    cases = 0

    def expect(label, got, want):
        nonlocal cases
        cases += 1
        diff = dict(got)
        for m, c in want.items():
            _add_into(diff, m, -c)
        if diff:
            failures.append(label)

    def scaled(x, c):
        return {m: v * c for m, v in x.items() if v * c}

    for i in range(1, n + 1):
        for j in range(1, n):
            coef = (1 if i == j else 0) - (1 if i - 1 == j else 0)
            for kind in ("f", "e"):
                expect(f"[g{i},{kind}{j}]", _bracket_at_one(b, gens[("g", i)], gens[(kind, j)]), scaled(gens[(kind, j)], coef))
    for k in range(1, n):
        for l in range(1, n):
            expect(f"[f{k},e{l}]", _bracket_at_one(b, gens[("f", k)], gens[("e", l)]), {})
    for k in range(1, n + 1):
        for l in range(1, n + 1):
            expect(f"[g{k},g{l}]", _bracket_at_one(b, gens[("g", k)], gens[("g", l)]), {})
    for i in range(1, n):
        for j in range(1, n):
            for kind in ("f", "e"):
                x, y = gens[(kind, i)], gens[(kind, j)]
                if abs(i - j) > 1:
                    expect(f"[{kind}{i},{kind}{j}]", _bracket_at_one(b, x, y), {})
                elif abs(i - j) == 1:
                    expect(f"[{kind}{i},[{kind}{i},{kind}{j}]]", _bracket_at_one(b, x, _bracket_at_one(b, x, y)), {})
    return {"n": n, "cases": cases, "failures": failures, "ok": not failures}


def cocommutative_at_one(n: int, degree: int) -> dict:
    b = basis(n)
    failures = []
    monos = b.monomials(degree)
    for m in monos:
        d = specialize_htensor(hyper_coproduct(HyperElem(b, {m: _ONE})), "one")
        flipped = {(y, x): c for (x, y), c in d.items()}
        if d != flipped:
            failures.append(b.show(m))
    return {"n": n, "degree": degree, "cases": len(monos), "failures": failures, "ok": not failures}


# ---------------------------------------------------------------------------
# Quantum Frobenius at a root of unity
# ---------------------------------------------------------------------------


def frobenius_mono(m: Mono, ell: int) -> Mono | None:
    if any(e % ell for e in m):
        return None
    return tuple(e // ell for e in m)


def frobenius(x: dict, ell: int) -> dict:
    """Frobenius image of CycloZ coordinates (at ``eps``); the result lives on the ``q = 1`` basis."""
    out: dict = {}
    for m, c in x.items():
        img = frobenius_mono(m, ell)
        if img is not None:
            _add_into(out, img, c)
    return out


def frobenius_elem(x: HyperElem, ell: int) -> dict:
    return frobenius(specialize_elem(x, ("eps", ell)), ell)


def _lift_int_product(b: HyperBasis, x: dict, y: dict, ell: int) -> dict:
    """Product in the ``q = 1`` table with CycloZ coefficients (integers embedded)."""
    out: dict = {}
    for ma, ca in x.items():
        for mb, cb in y.items():
            for mu, v in b.product(ma, mb).items():
                w = specialize_one(v)
                if w:
                    _add_into(out, mu, ca * cb * CycloZ.from_int_at(ell, w))
    return out


def frobenius_multiplicative(n: int, ell: int, factor_degree: int) -> dict:
    """``Fr(M_a M_b) = Fr(M_a) Fr(M_b)`` for all basis pairs with each factor of degree at most ``factor_degree``."""
    b = basis(n)
    t0 = time.perf_counter()
    monos = b.monomials(factor_degree)
    failures = []
    unit = CycloZ.one_at(ell)
    for ma in monos:
        fa = frobenius({ma: unit}, ell)
        for mb in monos:
            lhs = frobenius(_spec_dict(b.product(ma, mb), lambda v: specialize_eps(v, ell)), ell)
            fb = frobenius({mb: unit}, ell)
            rhs = _lift_int_product(b, fa, fb, ell) if fa and fb else {}
            if lhs != rhs:
                failures.append(f"{b.show(ma)} * {b.show(mb)}")
    return {
        "n": n, "ell": ell, "factor_degree": factor_degree, "cases": len(monos) ** 2,
        "failures": failures, "ok": not failures, "seconds": time.perf_counter() - t0,
    }


def frobenius_comultiplicative(n: int, ell: int, max_order: int) -> dict:
    """``(Fr (x) Fr) Delta = Delta Fr`` on the generators ``tb[i,j]^(h)`` and ``bin[l](0,k)``."""
    b = basis(n)
    gens = []
    for h in range(max_order + 1):
        for (i, j) in b.alg.letters:
            gens.append(HyperElem.from_entries(n, {(i, j): h}))
    failures = []
    for g in gens:
        d = specialize_htensor(hyper_coproduct(g), ("eps", ell))
        lhs: dict = {}
        for (x, y), c in d.items():
            fx, fy = frobenius_mono(x, ell), frobenius_mono(y, ell)
            if fx is not None and fy is not None:
                _add_into(lhs, (fx, fy), c)
        rhs: dict = {}
        for m, c in frobenius_elem(g, ell).items():
            for key, v in b.coproduct(m).items():
                w = specialize_one(v)
                if w:
                    _add_into(rhs, key, c * CycloZ.from_int_at(ell, w))
        if lhs != rhs:
            (m,) = g.terms
            failures.append(b.show(m))
    return {"n": n, "ell": ell, "cases": len(gens), "failures": failures, "ok": not failures}


def phi_element(n: int) -> Frac:
    """Ambient preimage of ``Lambda_1 Lambda_2^2 ... Lambda_n^n``: the product of the lower-right corner minors."""
    from .qmatrix import qminor

    out = Frac(algebra(n), {algebra(n).zero_mono: _ONE})
    for l in range(1, n + 1):
        idx = list(range(l, n + 1))
        out = out * Frac.from_qmat(qminor(n, idx, idx))
    return out


def phi_power_check(n: int, ell: int) -> dict:
    """``phi^ell - 1`` has integral coordinates that all vanish at ``eps``."""
    from .ncalg import vanishes_at_root_of_unity

    x = basis(n).contract(phi_element(n) ** ell - 1)
    integral = x.integral
    ok = integral and vanishes_at_root_of_unity(x.terms, ell)
    return {"n": n, "ell": ell, "integral": integral, "terms": len(x.terms), "ok": ok}


# ---------------------------------------------------------------------------
# SL_2 and GL
# ---------------------------------------------------------------------------


def sl2_relation() -> HyperElem:
    """The four-term relation among size-2 generators forced by ``D_q = 1``."""
    b1 = gen_binom0(2, 1, 1)
    b2 = gen_binom0(2, 2, 1)
    tt = gen_tb(2, 1, 2, 1) * gen_tb(2, 2, 1, 1)
    return b1 + b2 + (b1 * b2).scale(Q1 - 1) - tt.scale((Q1 + 1) * QQ)


def sl2_relation_check() -> dict:
    rel = sl2_relation()
    amb = rel.expand().to_qmat()
    in_sl = sl_project(amb)
    expected = (qdet(2) - 1).scale(RationalQ.coerce(Q1 - 1).inverse())
    return {
        "vanishes_in_SL": in_sl.is_zero(),
        "nonzero_in_M": not amb.is_zero(),
        "equals_det_minus_one_over_q_minus_one": (amb - expected).is_zero(),
        "ok": in_sl.is_zero() and not amb.is_zero() and (amb - expected).is_zero(),
    }


def gl_contract(x: GLElem) -> HyperElem:
    """Coordinates of the numerator, tagged with the single power ``delta`` of ``D_q^-1``."""
    out = basis(x.n).contract(x.num)
    out.dqinv = x.k
    out.context = "GL"
    return out


# ---------------------------------------------------------------------------
# Axiom sweeps in basis coordinates
# ---------------------------------------------------------------------------


def integrality_sweep(n: int, degree: int) -> dict:
    t0 = time.perf_counter()
    try:
        tbl = build_structure_table(n, degree)
        return {"n": n, "degree": degree, "pairs": len(tbl), "violations": [], "ok": True,
                "seconds": time.perf_counter() - t0}
    except IntegralityError as exc:
        return {"n": n, "degree": degree, "pairs": None, "violations": [str(exc)], "ok": False,
                "seconds": time.perf_counter() - t0}


def roundtrip_check(n: int, degree: int) -> bool:
    b = basis(n)
    for m in b.monomials(degree):
        x = HyperElem(b, {m: _ONE})
        if b.contract(x.expand()) != x:
            return False
    return True


def _coproduct_left(t: HTensor) -> dict:
    """``(Delta (x) id)`` of a tensor, as triples."""
    out: dict = {}
    for (a, c), v in t.terms.items():
        for (x, y), w in t.basis.coproduct(a).items():
            _add_into(out, (x, y, c), v * w)
    return out


def _coproduct_right(t: HTensor) -> dict:
    out: dict = {}
    for (a, c), v in t.terms.items():
        for (x, y), w in t.basis.coproduct(c).items():
            _add_into(out, (a, x, y), v * w)
    return out


def hopf_sweep(n: int, degree: int) -> dict:
    """Coassociativity and both counit axioms on all basis monomials up to ``degree``."""
    b = basis(n)
    failures = []
    monos = b.monomials(degree)
    for m in monos:
        d = hyper_coproduct(HyperElem(b, {m: _ONE}))
        if _coproduct_left(d) != _coproduct_right(d):
            failures.append(("coassociativity", b.show(m)))
        left: dict = {}
        right: dict = {}
        for (x, y), c in d.terms.items():
            ex, ey = counit_of_basis(b, x), counit_of_basis(b, y)
            if ex:
                _add_into(left, y, c * ex)
            if ey:
                _add_into(right, x, c * ey)
        if left != {m: _ONE} or right != {m: _ONE}:
            failures.append(("counit", b.show(m)))
    return {"n": n, "degree": degree, "cases": len(monos), "failures": failures, "ok": not failures}
