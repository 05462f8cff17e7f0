"""The dual quantum group side: generators and relations, the embedding of
quantum matrices into it, and the evaluation pairing against the quantized
enveloping algebra.

Letters are ordered E-block (roots ``(i, j)``, ``i < j``, lexicographic),
then the torus (``La[1], La[1]^-1, La[2], ...``), then the F-block
(``F[j,i]``, ``j > i``, lexicographic).  A normal word is therefore a PBW
word ``E^eta La^m F^phi``; :class:`DualElem` stores it as the triple of
exponent tuples with ``m`` in ``Z^n``.

Multiplication of PBW words only needs the completed rules inside the E-block
and inside the F-block: torus letters scale E and F letters by powers of ``q``
and E letters commute with F letters, so those moves are done in closed form.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from math import comb
from typing import Iterator, Sequence

from .ncalg import Alphabet, RewriteSystem, compositions, curly_elem, qbinom_elem
from .qmatrix import GLElem, QMatElem, algebra, qdet, qminor
from .qring import QQ, LaurentZ, RationalQ, bal_fact, fmt_coeff, gauss_binom, neg_gauss_binom

Root = tuple[int, int]
Key = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


def upper_roots(n: int) -> list[Root]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def lower_roots(n: int) -> list[Root]:
    return [(j, i) for j in range(1, n + 1) for i in range(1, n + 1) if j > i]


def _weight(root: Root, k: int) -> int:
    """Exponent ``w`` in ``La_k X = q^w X La_k`` for ``X = E[a,b]`` or ``F[b,a]``."""
    a, b = min(root), max(root)
    return (k == a) - (k == b)


def _q(e: int) -> RationalQ:
    return RationalQ.coerce(LaurentZ.q_power(e))


def _qint_r(k: int) -> RationalQ:
    return RationalQ.coerce(bal_fact(k)) * RationalQ.coerce(bal_fact(k - 1)).inverse() if k else RationalQ.zero()


# ---------------------------------------------------------------------------
# The presentation
# ---------------------------------------------------------------------------


def hg_alphabet(n: int) -> Alphabet:
    names = [f"E[{i},{j}]" for i, j in upper_roots(n)]
    for k in range(1, n + 1):
        names += [f"La[{k}]", f"La[{k}]^-1"]
    names += [f"F[{j},{i}]" for j, i in lower_roots(n)]
    return Alphabet(names)


def hg_relations(n: int) -> list[dict]:
    """Defining relations ``p = 0`` as word -> coefficient dictionaries."""
    A = hg_alphabet(n)
    one = RationalQ.one()
    qq2 = _q(1) + _q(-1)
    rels: list[dict] = []

    def rel(*pairs):
        out: dict = {}
        for c, names in pairs:
            w = A.word(*names)
            out[w] = out.get(w, RationalQ.zero()) + c
        return {w: c for w, c in out.items() if c}

    tor = [(k, s) for k in range(1, n + 1) for s in (1, -1)]
    tname = {(k, s): f"La[{k}]" if s == 1 else f"La[{k}]^-1" for k, s in tor}
    for k in range(1, n + 1):
        rels.append(rel((one, (tname[k, 1], tname[k, -1])), (-one, ())))
        rels.append(rel((one, (tname[k, -1], tname[k, 1])), (-one, ())))
    for (k, s), (l, t) in iproduct(tor, tor):
        if k > l:
            rels.append(rel((one, (tname[k, s], tname[l, t])), (-one, (tname[l, t], tname[k, s]))))
    for (k, s) in tor:
        for a, b in upper_roots(n):
            e, f = f"E[{a},{b}]", f"F[{b},{a}]"
            w = s * _weight((a, b), k)
            rels.append(rel((one, (tname[k, s], e)), (-_q(w), (e, tname[k, s]))))
            rels.append(rel((one, (f, tname[k, s])), (-_q(-w), (tname[k, s], f))))
    simple = [(i, i + 1) for i in range(1, n)]
    for (a, b) in simple:
        for (c, d) in simple:
            rels.append(rel((one, (f"F[{d},{c}]", f"E[{a},{b}]")), (-one, (f"E[{a},{b}]", f"F[{d},{c}]"))))
    for x, y in iproduct(range(1, n), repeat=2):
        ex, ey = f"E[{x},{x + 1}]", f"E[{y},{y + 1}]"
        fx, fy = f"F[{x + 1},{x}]", f"F[{y + 1},{y}]"
        if abs(x - y) > 1 and x > y:
            rels.append(rel((one, (ex, ey)), (-one, (ey, ex))))
            rels.append(rel((one, (fx, fy)), (-one, (fy, fx))))
        elif abs(x - y) == 1:
            for a, b in ((ex, ey), (fx, fy)):
                rels.append(rel((one, (a, a, b)), (-qq2, (a, b, a)), (one, (b, a, a))))
    # composite root vectors: E[i,j] = E[i,k] E[k,j] - q^-1 E[k,j] E[i,k],
    # F[j,i] = F[j,k] F[k,i] - q F[k,i] F[j,k]
    for i, j in upper_roots(n):
        for k in range(i + 1, j):
            rels.append(rel((one, (f"E[{i},{j}]",)), (-one, (f"E[{i},{k}]", f"E[{k},{j}]")),
                            (_q(-1), (f"E[{k},{j}]", f"E[{i},{k}]"))))
            rels.append(rel((one, (f"F[{j},{i}]",)), (-one, (f"F[{j},{k}]", f"F[{k},{i}]")),
                            (_q(1), (f"F[{k},{i}]", f"F[{j},{k}]"))))
    return rels


def _seed_system(n: int) -> RewriteSystem:
    """Orient every defining relation independently (completion interreduces)."""
    A = hg_alphabet(n)
    sys_ = RewriteSystem(A, RationalQ)
    extra = []
    for r in hg_relations(n):
        lhs, rhs = sys_._orient(r)
        if lhs in sys_.rules:
            extra.append(r)
            continue
        sys_.add_rule(lhs, rhs)
    return sys_, extra


@lru_cache(maxsize=None)
def hg_system(n: int, degree_bound: int = 4) -> RewriteSystem:
    """Completed rewriting system of the dual group of rank ``n``."""
    if n < 1:
        raise ValueError("n must be positive")
    seed, extra = _seed_system(n)
    for r in extra:
        seed = _with_relation(seed, r)
    return seed.complete(degree_bound).interreduce()


def _with_relation(sys_: RewriteSystem, rel: dict) -> RewriteSystem:
    red = sys_.reduce_terms(rel)
    if not red:
        return sys_
    out = sys_.copy()
    lhs, rhs = out._orient(red)
    if lhs in out.rules:
        raise AssertionError("relation reduces to an existing left-hand side")
    out.add_rule(lhs, rhs)
    return out


def pbw_count(n: int, degree: int) -> int:
    """Number of PBW words ``E^eta La^m F^phi`` of length ``degree`` (``|m|`` counted)."""
    N = n * (n - 1) // 2

    def torus(t: int) -> int:
        # integer vectors of l1-norm t in Z^n
        return sum(comb(n, k) * comb(t - 1, k - 1) * 2 ** k for k in range(1, n + 1)) if t else 1

    total = 0
    for a in range(degree + 1):
        for t in range(degree - a + 1):
            b = degree - a - t
            total += comb(a + N - 1, a) * torus(t) * comb(b + N - 1, b)
    return total


def hg_dimension_report(n: int, max_degree: int, degree_bound: int = 4) -> dict:
    sys_ = hg_system(n, degree_bound)
    counts = sys_.normal_word_counts(max_degree)
    expected = [pbw_count(n, d) for d in range(max_degree + 1)]
    A = sys_.alphabet
    e_letters = [A.index[f"E[{i},{j}]"] for i, j in upper_roots(n)]
    e_counts = sys_.normal_word_counts(max_degree, e_letters)
    N = len(e_letters)
    return {
        "counts": counts,
        "expected": expected,
        "e_counts": e_counts,
        "e_expected": [comb(d + N - 1, d) for d in range(max_degree + 1)],
        "ok": counts == expected and e_counts == [comb(d + N - 1, d) for d in range(max_degree + 1)],
    }


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


class DualGroup:
    """Multiplication data for PBW words of the dual group of rank ``n``."""

    def __init__(self, n: int, degree_bound: int = 4):
        self.n = n
        self.upper = upper_roots(n)
        self.lower = lower_roots(n)
        self.system = hg_system(n, degree_bound)
        A = self.system.alphabet
        self.e_letter = [A.index[f"E[{i},{j}]"] for i, j in self.upper]
        self.f_letter = [A.index[f"F[{j},{i}]"] for j, i in self.lower]
        self._e_pos = {x: k for k, x in enumerate(self.e_letter)}
        self._f_pos = {x: k for k, x in enumerate(self.f_letter)}
        self._emul: dict = {}
        self._fmul: dict = {}
        self.zero_root = (0,) * len(self.upper)
        self.zero_torus = (0,) * n

    def e_weight(self, eta: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(e * _weight(r, k) for r, e in zip(self.upper, eta)) for k in range(1, self.n + 1))

    def f_weight(self, phi: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(e * _weight(r, k) for r, e in zip(self.lower, phi)) for k in range(1, self.n + 1))

    def _block_mul(self, a, b, letters, pos, memo) -> dict:
        key = (a, b)
        hit = memo.get(key)
        if hit is not None:
            return hit
        word = tuple(x for x, e in zip(letters, a) for _ in range(e)) + tuple(x for x, e in zip(letters, b) for _ in range(e))
        out = {}
        for w, c in self.system.reduce_terms({word: RationalQ.one()}).items():
            ex = [0] * len(letters)
            for x in w:
                ex[pos[x]] += 1
            out[tuple(ex)] = c
        memo[key] = out
        return out

    def mul_key(self, x: Key, y: Key) -> dict:
        a, m, b = x
        c, p, d = y
        expo = sum(mk * wk for mk, wk in zip(m, self.e_weight(c))) - sum(pk * wk for pk, wk in zip(p, self.f_weight(b)))
        scal = _q(expo)
        torus = tuple(u + v for u, v in zip(m, p))
        es = self._block_mul(a, c, self.e_letter, self._e_pos, self._emul) if any(a) and any(c) else {tuple(u + v for u, v in zip(a, c)): RationalQ.one()}
        fs = self._block_mul(b, d, self.f_letter, self._f_pos, self._fmul) if any(b) and any(d) else {tuple(u + v for u, v in zip(b, d)): RationalQ.one()}
        out = {}
        for e, ce in es.items():
            for f, cf in fs.items():
                out[(e, torus, f)] = scal * ce * cf
        return out

    def key_word(self, key: Key) -> tuple[int, ...]:
        """The normal word of the rewriting system spelling ``key``."""
        A = self.system.alphabet
        eta, m, phi = key
        w = [x for x, e in zip(self.e_letter, eta) for _ in range(e)]
        for k, mk in enumerate(m, start=1):
            name = f"La[{k}]" if mk > 0 else f"La[{k}]^-1"
            w += [A.index[name]] * abs(mk)
        w += [x for x, e in zip(self.f_letter, phi) for _ in range(e)]
        return tuple(w)

    def word_key(self, word: Sequence[int]) -> Key:
        A = self.system.alphabet
        eta = [0] * len(self.upper)
        phi = [0] * len(self.lower)
        m = [0] * self.n
        for x in word:
            if x in self._e_pos:
                eta[self._e_pos[x]] += 1
            elif x in self._f_pos:
                phi[self._f_pos[x]] += 1
            else:
                name = A.names[x]
                k = int(name[3:name.index("]")])
                m[k - 1] += -1 if name.endswith("^-1") else 1
        return (tuple(eta), tuple(m), tuple(phi))


@lru_cache(maxsize=None)
def dual_group(n: int) -> DualGroup:
    return DualGroup(n)


def _add_into(acc: dict, key, c) -> None:
    v = acc.get(key)
    v = c if v is None else v + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class DualElem:
    """Element of the dual group in PBW normal form, coefficients in Q(q)."""

    __slots__ = ("group", "terms")

    def __init__(self, group: DualGroup, terms: dict | None = None):
        self.group = group
        self.terms = {k: RationalQ.coerce(c) for k, c in (terms or {}).items() if c}

    @property
    def n(self) -> int:
        return self.group.n

    # constructors --------------------------------------------------------------
    @classmethod
    def word(cls, n: int, eta=None, m=None, phi=None, coeff=None) -> "DualElem":
        g = dual_group(n)
        eta = tuple(eta) if eta is not None else g.zero_root
        phi = tuple(phi) if phi is not None else g.zero_root
        m = tuple(m) if m is not None else g.zero_torus
        return cls(g, {(eta, m, phi): RationalQ.one() if coeff is None else coeff})

    @classmethod
    def one(cls, n: int) -> "DualElem":
        return cls.word(n)

    @classmethod
    def E(cls, n: int, i: int, j: int, power: int = 1) -> "DualElem":
        g = dual_group(n)
        eta = [0] * len(g.upper)
        eta[g.upper.index((i, j))] = power
        return cls.word(n, eta=eta)

    @classmethod
    def F(cls, n: int, j: int, i: int, power: int = 1) -> "DualElem":
        g = dual_group(n)
        phi = [0] * len(g.lower)
        phi[g.lower.index((j, i))] = power
        return cls.word(n, phi=phi)

    @classmethod
    def La(cls, n: int, k: int, power: int = 1) -> "DualElem":
        m = [0] * n
        m[k - 1] = power
        return cls.word(n, m=m)

    @classmethod
    def torus(cls, n: int, m: Sequence[int]) -> "DualElem":
        return cls.word(n, m=m)

    @classmethod
    def from_poly(cls, n: int, poly) -> "DualElem":
        """Reduce a free-algebra polynomial over the alphabet of :func:`hg_alphabet`."""
        g = dual_group(n)
        out: dict = {}
        for w, c in g.system.reduce_terms(poly.terms).items():
            _add_into(out, g.word_key(w), RationalQ.coerce(c))
        return cls(g, out)

    def one_like(self) -> "DualElem":
        g = self.group
        return DualElem(g, {(g.zero_root, g.zero_torus, g.zero_root): RationalQ.one()})

    def zero_like(self) -> "DualElem":
        return DualElem(self.group, {})

    # arithmetic ----------------------------------------------------------------
    def _wrap(self, terms: dict) -> "DualElem":
        out = DualElem.__new__(DualElem)
        out.group = self.group
        out.terms = terms
        return out

    def __add__(self, other) -> "DualElem":
        if not isinstance(other, DualElem):
            other = self.one_like().scale(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(terms, k, c)
        return self._wrap(terms)

    __radd__ = __add__

    def __neg__(self) -> "DualElem":
        return self._wrap({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "DualElem":
        if not isinstance(other, DualElem):
            other = self.one_like().scale(other)
        return self + (-other)

    def __rsub__(self, other) -> "DualElem":
        return (-self) + other

    def scale(self, c) -> "DualElem":
        c = RationalQ.coerce(c)
        if not c:
            return self._wrap({})
        return self._wrap({k: c * v for k, v in self.terms.items()})

    def __mul__(self, other) -> "DualElem":
        if not isinstance(other, DualElem):
            return self.scale(other)
        if other.group is not self.group:
            raise ValueError("rank mismatch")
        out: dict = {}
        g = self.group
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                c = c1 * c2
                for k, v in g.mul_key(k1, k2).items():
                    _add_into(out, k, c * v)
        return self._wrap(out)

    def __rmul__(self, other) -> "DualElem":
        return self.scale(other)

    def __pow__(self, e: int) -> "DualElem":
        if e < 0:
            if len(self.terms) != 1:
                raise ValueError("only torus words have negative powers")
            (key, c), = self.terms.items()
            if any(key[0]) or any(key[2]):
                raise ValueError("only torus words have negative powers")
            return DualElem(self.group, {(key[0], tuple(-x * -e for x in key[1]), key[2]): c.inverse() ** -e})
        out = self.one_like()
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, DualElem):
            return self.group is other.group and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    # display -------------------------------------------------------------------
    def show_key(self, key: Key) -> str:
        g = self.group
        eta, m, phi = key
        parts = []
        for (i, j), e in zip(g.upper, eta):
            if e:
                parts.append(f"E[{i},{j}]" + (f"^{e}" if e != 1 else ""))
        for k, e in enumerate(m, start=1):
            if e:
                parts.append(f"La[{k}]" + (f"^{e}" if e != 1 else ""))
        for (j, i), e in zip(g.lower, phi):
            if e:
                parts.append(f"F[{j},{i}]" + (f"^{e}" if e != 1 else ""))
        return "*".join(parts) if parts else "1"

    def sorted_keys(self) -> list[Key]:
        return sorted(self.terms, key=lambda k: (sum(k[0]) + sum(map(abs, k[1])) + sum(k[2]), k), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for key in self.sorted_keys():
            coeff = fmt_coeff(self.terms[key])
            if " " in coeff.strip():
                coeff = f"({coeff})"
            mono = self.show_key(key)
            if mono == "1":
                out.append(coeff)
            elif coeff == "1":
                out.append(mono)
            elif coeff == "-1":
                out.append("-" + mono)
            else:
                out.append(f"{coeff}*{mono}")
        return " + ".join(out).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"DualElem(n={self.n}, {self})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"e": list(k[0]), "torus": list(k[1]), "f": list(k[2]), "coeff": self.terms[k].to_json()}
                for k in self.sorted_keys()
            ],
        }


# ---------------------------------------------------------------------------
# The embedding of quantum matrices
# ---------------------------------------------------------------------------


XI_VARIANTS = ("rescaled", "unscaled")


@lru_cache(maxsize=None)
def xi_generator(n: int, i: int, j: int, variant: str = "rescaled") -> DualElem:
    """Image of the matrix entry ``t[i,j]``; bars denote multiplication by ``q - q^-1``.

    ``unscaled`` uses the lower root vectors ``F[k,j]`` as they are; that map is
    not multiplicative once a composite lower root occurs (``n >= 3``).
    ``rescaled`` uses ``q^(-2(k-j-1)) F[k,j]`` throughout, which restores
    multiplicativity.
    """
    if variant not in XI_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    qq = RationalQ.coerce(QQ)
    E = lambda a, b: DualElem.E(n, a, b).scale(qq)
    La = lambda k: DualElem.La(n, k)

    def F(a: int, b: int) -> DualElem:
        fix = _q(-2 * (a - b - 1)) if variant == "rescaled" else RationalQ.one()
        return DualElem.F(n, a, b).scale(qq * fix)

    def tail(lo: int) -> DualElem:
        out = DualElem.word(n).zero_like()
        for k in range(lo + 1, n + 1):
            out = out + E(i, k) * La(k) * F(k, j)
        return out

    if i < j:
        return (E(i, j) * La(j)).scale(-_mq(j - i - 1)) - tail(j).scale(_mq(j - i - 2))
    if i == j:
        return La(i) - tail(i).scale(_q(-2))
    return (La(i) * F(i, j)).scale(_mq(j - i - 1)) - tail(i).scale(_mq(j - i - 2))


def _mq(e: int) -> RationalQ:
    """``(-q)^e``."""
    return _q(e) * RationalQ.from_int(-1 if e % 2 else 1)


class _XiCache:
    def __init__(self, n: int, variant: str):
        self.n = n
        self.variant = variant
        self.alg = algebra(n)
        self.memo: dict = {self.alg.zero_mono: DualElem.one(n)}

    def mono(self, m) -> DualElem:
        hit = self.memo.get(m)
        if hit is not None:
            return hit
        last = max(k for k in range(len(m)) if m[k])
        prev = list(m)
        prev[last] -= 1
        i, j = self.alg.letters[last]
        out = self.mono(tuple(prev)) * xi_generator(self.n, i, j, self.variant)
        self.memo[m] = out
        return out


@lru_cache(maxsize=None)
def _xi_cache(n: int, variant: str = "rescaled") -> _XiCache:
    return _XiCache(n, variant)


def torus_product(n: int, power: int = 1, start: int = 1) -> DualElem:
    """``(La[start] ... La[n])^power``."""
    m = [0] * n
    for k in range(start, n + 1):
        m[k - 1] = power
    return DualElem.torus(n, m)


def xi(a, variant: str = "rescaled") -> DualElem:
    """Image of a quantum-matrix element (M or GL context, or an integral-form element)."""
    from .hyper import Frac, HyperElem

    if isinstance(a, HyperElem):
        out = xi(a.expand(), variant)
        return out * torus_product(a.n, -a.dqinv) if a.dqinv else out
    if isinstance(a, GLElem):
        out = xi(a.num, variant)
        return out * torus_product(a.n, -a.k) if a.k else out
    if isinstance(a, Frac):
        cache = _xi_cache(a.alg.n, variant)
        out = DualElem.word(a.alg.n).zero_like()
        for m, c in a.num.items():
            out = out + cache.mono(m).scale(c)
        return out.scale(RationalQ.coerce(a.den).inverse())
    if isinstance(a, QMatElem):
        if a.context == "SL":
            raise ValueError("the embedding is implemented for the M and GL contexts")
        cache = _xi_cache(a.n, variant)
        out = DualElem.word(a.n).zero_like()
        for m, c in a.terms.items():
            out = out + cache.mono(m).scale(c)
        return out
    raise TypeError(f"cannot embed {type(a).__name__}")


def xi_manin_check(n: int, variant: str = "rescaled") -> dict:
    """Images of the matrix entries satisfy every commutation rule of the Manin algebra."""
    alg = algebra(n)
    failures = []
    for (y, x), rhs in alg.rule_words():
        iy, jy = alg.letters[y]
        ix, jx = alg.letters[x]
        lhs = xi_generator(n, iy, jy, variant) * xi_generator(n, ix, jx, variant)
        acc = lhs.zero_like()
        for (u, v), c in rhs:
            acc = acc + (xi_generator(n, *alg.letters[u], variant) * xi_generator(n, *alg.letters[v], variant)).scale(c)
        if not (lhs - acc).is_zero():
            failures.append((alg.name(y), alg.name(x)))
    return {"n": n, "variant": variant, "relations": len(alg.rules), "failures": failures, "ok": not failures}


def xi_qdet_check(n: int, variant: str = "rescaled") -> bool:
    """The determinant maps to the single torus word ``La[1] ... La[n]``."""
    if n == 1:
        return True  # t[1,1] -> La[1] with nothing else in rank one
    return xi(qdet(n), variant) == torus_product(n)


def corner_minor(n: int, l: int) -> QMatElem:
    rows = list(range(l, n + 1))
    return qminor(n, rows, rows)


def corner_minor_check(n: int) -> dict:
    """Each lower-right principal minor maps to ``La[l] ... La[n]``."""
    res = {l: xi(corner_minor(n, l)) == torus_product(n, 1, l) for l in range(1, n + 1)}
    return {"n": n, "minors": res, "ok": all(res.values())}


# ---------------------------------------------------------------------------
# Closed forms for the images of the integral generators
# ---------------------------------------------------------------------------


def _inv_fact(e: int) -> RationalQ:
    return RationalQ.coerce(bal_fact(e)).inverse()


def _root_word(n: int, eta: dict, m: dict, phi: dict, variant: str) -> DualElem:
    """``prod E^(eta) La^m prod F^(phi)`` (divided powers), lower roots rescaled per variant."""
    g = dual_group(n)
    e = tuple(eta.get(r, 0) for r in g.upper)
    f = tuple(phi.get(r, 0) for r in g.lower)
    t = tuple(m.get(k, 0) for k in range(1, n + 1))
    c = RationalQ.one()
    for x in eta.values():
        c = c * _inv_fact(x)
    for (a, b), x in phi.items():
        c = c * _inv_fact(x)
        if variant == "rescaled":
            c = c * _q(-2 * (a - b - 1) * x)
    return DualElem(g, {(e, t, f): c})


def root_image_closed(kind: str, n: int, params: Sequence[int], variant: str = "rescaled") -> DualElem:
    """Closed-form right side.

    ``upper``/``lower``: ``params = (i, j, m)``; ``diagonal``: ``params = (h, c, k)``.
    """
    qq = RationalQ.coerce(QQ)
    out = DualElem.one(n).zero_like()
    if kind in ("upper", "lower"):
        i, j, m = params
        if (kind == "upper") != (i < j):
            raise ValueError("index order does not match the kind")
        pre = _q(m * (j - i - 2) - comb(m, 2)) * RationalQ.from_int(-1 if (m * (j - i + 1)) % 2 else 1)
        top = j if kind == "upper" else i
        for es in compositions(m, n - top + 1):
            e0, rest = es[0], es[1:]
            coeff = pre * qq ** (m - e0) * _q(sum(comb(e, 2) for e in rest))
            for e in rest:
                coeff = coeff * RationalQ.coerce(bal_fact(e))
            if kind == "upper":
                coeff = coeff * _q(e0) * RationalQ.from_int(-1 if e0 % 2 else 1)
                eta = {(i, j): e0}
                eta.update({(i, top + s): e for s, e in enumerate(rest, start=1)})
                mm = {j: e0}
                mm.update({top + s: e for s, e in enumerate(rest, start=1)})
                phi = {(top + s, j): e for s, e in enumerate(rest, start=1)}
            else:
                coeff = coeff * _q(m * e0)
                eta = {(i, top + s): e for s, e in enumerate(rest, start=1)}
                mm = {i: e0}
                mm.update({top + s: e for s, e in enumerate(rest, start=1)})
                phi = {(i, j): e0}
                phi.update({(top + s, j): e for s, e in enumerate(rest, start=1)})
            word = _root_word(n, {r: e for r, e in eta.items() if e}, mm, {r: e for r, e in phi.items() if e}, variant)
            out = out + word.scale(coeff)
        return out
    if kind != "diagonal":
        raise ValueError(f"unknown kind {kind!r}")
    h, c, k = params
    La_h = DualElem.La(n, h)
    for r in range(k + 1):
        base = _q(r * (c - k - 2) - comb(r, 2)) * qq ** r
        if variant == "rescaled" and r % 2:
            base = -base  # the sum over k enters the diagonal image with a minus sign
        for es in compositions(r, n - h):
            coeff = base * _q(sum(comb(e, 2) for e in es))
            for e in es:
                coeff = coeff * RationalQ.coerce(bal_fact(e))
            eta = {(h, h + s): e for s, e in enumerate(es, start=1) if e}
            mm = {h + s: e for s, e in enumerate(es, start=1) if e}
            phi = {(h + s, h): e for s, e in enumerate(es, start=1) if e}
            left = _root_word(n, eta, {}, {}, variant)
            right = _root_word(n, {}, mm, phi, variant)
            out = out + (left * curly_elem(La_h, c - r, k, r) * right).scale(coeff)
    return out


def root_image_direct(kind: str, n: int, params: Sequence[int], variant: str = "rescaled") -> DualElem:
    """Direct image: the embedding applied to the expanded generator."""
    from .hyper import binom, tb

    if kind in ("upper", "lower"):
        i, j, m = params
        return xi(tb(n, i, j, m), variant)
    h, c, k = params
    return xi(binom(n, h, c, k), variant)


def root_image_check(kind: str, n: int, params: Sequence[int], variant: str = "rescaled") -> bool:
    return root_image_direct(kind, n, params, variant) == root_image_closed(kind, n, params, variant)


def root_image_instances(n: int, max_m: int = 3, max_c: int = 2) -> Iterator[tuple[str, tuple[int, ...]]]:
    for i, j in iproduct(range(1, n + 1), repeat=2):
        if i == j:
            continue
        for m in range(max_m + 1):
            yield ("upper" if i < j else "lower", (i, j, m))
    for h in range(1, n + 1):
        for c in range(-max_c, max_c + 1):
            for k in range(max_m + 1):
                yield ("diagonal", (h, c, k))


def root_image_report(n: int, max_m: int = 3, max_c: int = 2, variant: str = "rescaled") -> dict:
    failures = [(kind, p) for kind, p in root_image_instances(n, max_m, max_c) if not root_image_check(kind, n, p, variant)]
    total = sum(1 for _ in root_image_instances(n, max_m, max_c))
    return {"n": n, "variant": variant, "instances": total, "failures": failures, "ok": not failures}


# ---------------------------------------------------------------------------
# Evaluation pairing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UMonomial:
    """Exponent label of ``prod Ebar^e prod G^z prod Fbar^f`` (``Xbar = (q - q^-1) X``)."""

    e: tuple[int, ...]
    z: tuple[int, ...]
    f: tuple[int, ...]

    def __post_init__(self):
        n = len(self.z)
        N = n * (n - 1) // 2
        if len(self.e) != N or len(self.f) != N:
            raise ValueError(f"root exponent vectors must have length {N} for rank {n}")
        if any(x < 0 for x in self.e + self.f):
            raise ValueError("root exponents must be natural numbers")

    @property
    def n(self) -> int:
        return len(self.z)

    @classmethod
    def torus(cls, z: Sequence[int]) -> "UMonomial":
        N = len(z) * (len(z) - 1) // 2
        return cls((0,) * N, tuple(z), (0,) * N)

    def __str__(self) -> str:
        return f"e={','.join(map(str, self.e))};z={','.join(map(str, self.z))};f={','.join(map(str, self.f))}"


def _word_pairing(n: int, key: Key, u: UMonomial) -> RationalQ:
    eta, m, phi = key
    if eta != u.e or phi != u.f:
        return RationalQ.zero()
    out = _q(sum(a * b for a, b in zip(m, u.z)))
    g = dual_group(n)
    for (i, j), h in zip(g.upper, eta):
        if h:
            out = out * RationalQ.coerce(bal_fact(h)) * RationalQ.from_int(-1 if h % 2 else 1)
    for idx, (i, j) in enumerate(g.upper):
        h = eta[idx]
        p = phi[g.lower.index((j, i))]
        if p:
            out = out * RationalQ.coerce(bal_fact(p))
        out = out * _mq((j - i - 1) * (p - h))
    return out


def pairing(x: DualElem, u: UMonomial) -> RationalQ:
    """Evaluation pairing of a dual-group element against a PBW monomial of the enveloping algebra."""
    if u.n != x.n:
        raise ValueError("rank mismatch")
    out = RationalQ.zero()
    for key, c in x.terms.items():
        if key[0] == u.e and key[2] == u.f:
            out = out + c * _word_pairing(x.n, key, u)
    return out


def _ent_half(chi: int) -> int:
    return chi // 2


def _z_choose(z: int, chi: int) -> LaurentZ:
    """Gaussian binomial ``(z choose chi)_q`` for any integer ``z``."""
    if z >= 0:
        return gauss_binom(z, chi)
    return neg_gauss_binom(-z, chi)


def torus_pairing_check(chi_max: int = 3, z_max: int = 3, n: int = 2) -> dict:
    """``<La^m, G^z> = q^{m z}`` reproduces the binomial torus values of the closed pairing formula."""
    failures = []
    count = 0
    N = n * (n - 1) // 2
    for chi in range(chi_max + 1):
        x = qbinom_elem(DualElem.La(n, 1), 0, chi) * DualElem.La(n, 1, -_ent_half(chi))
        for z in range(-z_max, z_max + 1):
            u = UMonomial((0,) * N, (z,) + (0,) * (n - 1), (0,) * N)
            got = pairing(x, u)
            want = RationalQ.coerce(_z_choose(z, chi).shift(-z * _ent_half(chi)))
            count += 1
            if got != want:
                failures.append((chi, z))
    return {"instances": count, "failures": failures, "ok": not failures}


def _laurent_or_none(c: RationalQ) -> LaurentZ | None:
    return c.to_laurent() if c.is_laurent() else None


def integrality_scan(n: int, deg_bound: int, z_range: int, variant: str = "rescaled") -> dict:
    """Pair images of the integral basis against enveloping monomials with matching root exponents."""
    from .hyper import basis

    t0 = time.time()
    b = basis(n)
    violations = []
    pairs = 0
    monos = 0
    zs = list(iproduct(range(-z_range, z_range + 1), repeat=n))
    for d in range(deg_bound + 1):
        for mono in b.alg.monomials(d):
            monos += 1
            img = xi(b.expand(mono), variant)
            shapes = sorted({(k[0], k[2]) for k in img.terms})
            for e, f in shapes:
                for z in zs:
                    u = UMonomial(e, z, f)
                    val = pairing(img, u)
                    pairs += 1
                    if _laurent_or_none(val) is None:
                        violations.append({"tau": b.show(mono), "u": str(u), "value": str(val)})
    return {
        "n": n,
        "deg_bound": deg_bound,
        "z_range": z_range,
        "monomials": monos,
        "pairs": pairs,
        "violations": violations,
        "seconds": round(time.time() - t0, 3),
        "ok": not violations,
    }


# ---------------------------------------------------------------------------
# Linear algebra on images: preimages of torus words, injectivity
# ---------------------------------------------------------------------------


def _solve(columns: list[dict], target: dict) -> list[RationalQ] | None:
    """Exact solution of ``sum_c x_c columns[c] = target`` over Q(q), or ``None``."""
    keys = sorted({k for col in columns for k in col} | set(target))
    rows = [[col.get(k, RationalQ.zero()) for col in columns] + [target.get(k, RationalQ.zero())] for k in keys]
    ncol = len(columns)
    pivots = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    sol = [RationalQ.zero()] * ncol
    for i, c in enumerate(pivots):
        sol[c] = rows[i][-1]
    return sol


def preimage_spot_check(l: int, n: int, deg_bound: int, variant: str = "rescaled") -> dict:
    """Is ``La[l] ... La[n]`` the image of a combination of t-monomials of degree <= ``deg_bound``?"""
    if n > 3:
        raise ValueError("spot checks are limited to n <= 3")
    alg = algebra(n)
    cache = _xi_cache(n, variant)
    monos = [m for d in range(deg_bound + 1) for m in alg.monomials(d)]
    cols = [cache.mono(m).terms for m in monos]
    target = torus_product(n, 1, l).terms
    sol = _solve(cols, target)
    if sol is None:
        return {"l": l, "n": n, "deg_bound": deg_bound, "status": "inconclusive", "ok": None}
    pre = QMatElem(alg, {m: c for m, c in zip(monos, sol) if c})
    verified = xi(pre, variant) == torus_product(n, 1, l)
    return {"l": l, "n": n, "deg_bound": deg_bound, "status": "solved", "preimage": str(pre), "ok": verified}


_PRIME = (1 << 61) - 1


def _mod_value(c: RationalQ, q0: int, p: int) -> int | None:
    num = int(c.num(q0)) % p
    den = int(c.den(q0)) % p
    if den == 0:
        return None
    return num * pow(den, -1, p) % p


def injectivity_rank(n: int, degree: int, seed: int = 0, variant: str = "rescaled") -> dict:
    """Rank of the embedding on degree-``degree`` t-monomials, certified at a random ``q`` mod a prime.

    Full rank after specialization implies full column rank over Q(q).
    """
    import flint

    alg = algebra(n)
    cache = _xi_cache(n, variant)
    monos = alg.monomials(degree)
    cols = [cache.mono(m).terms for m in monos]
    keys = sorted({k for col in cols for k in col})
    index = {k: r for r, k in enumerate(keys)}
    rng = random.Random(seed)
    for _ in range(10):
        q0 = rng.randrange(2, _PRIME - 1)
        entries = [0] * (len(keys) * len(monos))
        good = True
        for c, col in enumerate(cols):
            for k, v in col.items():
                x = _mod_value(v, q0, _PRIME)
                if x is None:
                    good = False
                    break
                entries[index[k] * len(monos) + c] = x
            if not good:
                break
        if good:
            break
    else:
        raise ArithmeticError("could not find a good evaluation point")
    mat = flint.nmod_mat(len(keys), len(monos), entries, _PRIME)
    rank = mat.rank()
    return {"n": n, "degree": degree, "columns": len(monos), "rows": len(keys), "rank": rank, "ok": rank == len(monos)}


# ---------------------------------------------------------------------------
# q-identity suites on concrete witnesses
# ---------------------------------------------------------------------------


def _hg_tail(n: int, h: int) -> list[DualElem]:
    """``E[h,s] La[s] F'[s,h]`` for ``s > h`` (lower roots rescaled as in the embedding)."""
    return [
        (DualElem.E(n, h, s) * DualElem.La(n, s) * DualElem.F(n, s, h)).scale(_q(-2 * (s - h - 1)))
        for s in range(h + 1, n + 1)
    ]


def expansion_suite(max_m: int = 4, ts: Sequence[int] = (-2, -1, 0, 1, 2)) -> dict:
    """Multinomial, divided-power and binomial expansion identities on fixed witnesses."""
    from .ncalg import check_power_expansion, check_binomial_expansion

    t = lambda n, i, j: QMatElem.gen(n, i, j).scale(RationalQ.one())
    q = RationalQ.coerce(LaurentZ.q_power(1))
    results: list[dict] = []

    def record(name: str, ok: bool):
        results.append({"check": name, "ok": bool(ok)})

    # sums of q-commuting elements: plain powers and divided powers
    multinomial = [
        ("t[1,1] + t[1,2] + t[1,3] in M3", [t(3, 1, 1), t(3, 1, 2), t(3, 1, 3)]),
        ("t[1,2] + t[2,2] in M2", [t(2, 1, 2), t(2, 2, 2)]),
        ("La[1] + E[1,2] in the dual group", [DualElem.La(2, 1), DualElem.E(2, 1, 2)]),
    ]
    for label, xs in multinomial:
        for m in range(max_m + 1):
            record(f"multinomial {label}, m={m}", check_power_expansion(xs, q, m, "a"))
    divided = [
        ("E[1,s] La[s] F'[s,1], s=2,3", _hg_tail(3, 1)),
        ("E[1,2] La[2], E[1,3] La[3] F'[3,2]", [DualElem.E(3, 1, 2) * DualElem.La(3, 2),
                                               (DualElem.E(3, 1, 3) * DualElem.La(3, 3) * DualElem.F(3, 3, 2))]),
    ]
    for label, ys in divided:
        for m in range(max_m + 1):
            record(f"divided {label}, m={m}", check_power_expansion(ys, q, m, "b"))
    # binomials of x + (q - q^-1)^2 w
    w12 = (DualElem.E(2, 1, 2) * DualElem.La(2, 2) * DualElem.F(2, 2, 1))
    binomial = [
        ("a1", {"x": DualElem.La(2, 1), "w": w12.scale(-_q(-2))}),
        ("a2", {"x": DualElem.La(2, 1), "w": w12.scale(-_q(-2))}),
        ("c1", {"x": DualElem.La(2, 2), "w": w12}),
        ("c2", {"x": DualElem.La(2, 2), "w": w12}),
        ("b", {"x": t(2, 1, 1), "y": t(2, 1, 2), "z": t(2, 2, 1)}),
        ("d", {"x": t(2, 2, 2), "y": t(2, 1, 2), "z": t(2, 2, 1)}),
    ]
    for variant, wit in binomial:
        for m in range(max_m + 1):
            for c in ts:
                record(f"binomial {variant}, m={m}, t={c}", check_binomial_expansion(variant, m, c, **wit))
    # root-of-unity vanishing of integral coordinates
    from .hyper import basis, gen_tb, phi_power_check
    from .ncalg import vanishes_at_root_of_unity

    for ell in (3, 5):
        for n in (2, 3) if ell == 3 else (2,):
            record(f"vanishing phi^{ell} - 1, n={n}", phi_power_check(n, ell)["ok"])
        for n, (i, j) in ((2, (1, 2)), (2, (2, 1)), (3, (1, 3))):
            y = gen_tb(n, i, j, 1) ** ell
            record(f"vanishing tb[{i},{j}]^{ell}, n={n}", y.integral and vanishes_at_root_of_unity(y.terms, ell))
        x = basis(2).contract(t(2, 1, 1) ** ell - 1)
        record(f"vanishing t[1,1]^{ell} - 1, n=2", x.integral and vanishes_at_root_of_unity(x.terms, ell))
    failures = [r["check"] for r in results if not r["ok"]]
    return {"checks": len(results), "failures": failures, "ok": not failures}
