"""Quantum n x n matrices: PBW normal form, determinant, bialgebra and Hopf structure.

A monomial is an exponent tuple indexed by the fixed letter order
(strictly upper entries lexicographically, then the diagonal, then strictly
lower entries lexicographically).  Products are computed by a memoized
right-append of single letters: if the new letter is smaller than the last
letter present, the corresponding two-letter commutation rule is applied
and the rest is folded back in recursively.  Structure constants live in
``Z[q, q^-1]``; element coefficients may be Laurent or rational.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator, Sequence

from .ncalg import Alphabet, NCPoly, RewriteSystem
from .qring import QQ, CycloZ, LaurentZ, RationalQ, fmt_coeff, specialize_eps

Mono = tuple[int, ...]
Entry = tuple[int, int]

_ONE = LaurentZ.one()


class ContextError(ValueError):
    """Operands belong to different algebras."""


class AxiomError(RuntimeError):
    """A Hopf axiom failed while constructing a structure map."""


def letter_order(n: int) -> list[Entry]:
    upper = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i < j]
    diag = [(k, k) for k in range(1, n + 1)]
    lower = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i > j]
    return upper + diag + lower


def _inversions(perm: Sequence[int]) -> int:
    return sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])


def _add_into(acc: dict, key, c) -> None:
    v = acc.get(key)
    v = c if v is None else v + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class ManinAlgebra:
    """Structure constants of the quantum matrix bialgebra of size ``n``."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.letters = letter_order(n)
        self.index = {e: k for k, e in enumerate(self.letters)}
        self.N = n * n
        self.rules: dict[tuple[int, int], list[tuple[tuple[int, int], LaurentZ]]] = {}
        for y in range(self.N):
            for x in range(y):
                self.rules[(y, x)] = self._rule(y, x)
        self._memo: dict[tuple[Mono, int], dict[Mono, LaurentZ]] = {}
        self._mono_memo: dict[tuple[Mono, Mono], dict[Mono, LaurentZ]] = {}
        self.zero_mono: Mono = (0,) * self.N

    # -- the four commutation families ------------------------------------------
    def _rule(self, y: int, x: int) -> list[tuple[tuple[int, int], LaurentZ]]:
        """Rewrite ``y x`` (``y`` later than ``x``) as a combination of smaller words."""
        (r1, c1), (r2, c2) = self.letters[y], self.letters[x]
        q, qi = LaurentZ.q_power(1), LaurentZ.q_power(-1)
        if r1 == r2:
            # t[r,a] t[r,b] = q t[r,b] t[r,a] for a < b
            return [((x, y), q if c1 < c2 else qi)]
        if c1 == c2:
            return [((x, y), q if r1 < r2 else qi)]
        if (r1 - r2) * (c1 - c2) < 0:
            return [((x, y), _ONE)]
        # diagonal position: a = t[i,k], d = t[j,l] with i < j, k < l
        if r1 < r2:
            a, d = y, x
        else:
            a, d = x, y
        (i, k), (j, l) = self.letters[a], self.letters[d]
        b, c = self.index[(i, l)], self.index[(j, k)]
        bc = (min(b, c), max(b, c))
        if y == d:
            # d a = a d - (q - q^-1) b c
            out = [((a, d), _ONE), (bc, -QQ)]
        else:
            # a d = d a + (q - q^-1) b c
            out = [((d, a), _ONE), (bc, QQ)]
        for word, _ in out:
            if (2, word) >= (2, (y, x)):
                raise AssertionError("commutation rule is not order-decreasing")
        return out

    def rule_words(self) -> Iterator[tuple[tuple[int, int], list[tuple[tuple[int, int], LaurentZ]]]]:
        yield from sorted(self.rules.items())

    def name(self, k: int) -> str:
        i, j = self.letters[k]
        return f"t[{i},{j}]"

    # -- multiplication ----------------------------------------------------------
    def unit_mono(self, k: int, e: int = 1) -> Mono:
        m = [0] * self.N
        m[k] = e
        return tuple(m)

    def mul_mono_letter(self, m: Mono, x: int) -> dict[Mono, LaurentZ]:
        key = (m, x)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        last = -1
        for k in range(self.N - 1, -1, -1):
            if m[k]:
                last = k
                break
        if x >= last:
            mm = list(m)
            mm[x] += 1
            res = {tuple(mm): _ONE}
        else:
            mm = list(m)
            mm[last] -= 1
            base = tuple(mm)
            res = {}
            for (u, v), c in self.rules[(last, x)]:
                for w1, c1 in self.mul_mono_letter(base, u).items():
                    for w2, c2 in self.mul_mono_letter(w1, v).items():
                        _add_into(res, w2, c * c1 * c2)
        self._memo[key] = res
        return res

    def mul_mono(self, a: Mono, b: Mono) -> dict[Mono, LaurentZ]:
        key = (a, b)
        hit = self._mono_memo.get(key)
        if hit is not None:
            return hit
        cur = {a: _ONE}
        for x in range(self.N):
            for _ in range(b[x]):
                nxt: dict = {}
                for w, c in cur.items():
                    for w2, c2 in self.mul_mono_letter(w, x).items():
                        _add_into(nxt, w2, c * c2)
                cur = nxt
        self._mono_memo[key] = cur
        return cur

    def mul_terms(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                c = c1 * c2
                for m, c3 in self.mul_mono(m1, m2).items():
                    _add_into(out, m, c * c3)
        return out

    # -- words and monomials -------------------------------------------------------
    def word_of(self, m: Mono) -> tuple[int, ...]:
        return tuple(k for k in range(self.N) for _ in range(m[k]))

    def mono_of_word(self, w: Iterable[int]) -> Mono:
        m = [0] * self.N
        for k in w:
            m[k] += 1
        return tuple(m)

    def deglex(self, m: Mono) -> tuple[int, tuple[int, ...]]:
        w = self.word_of(m)
        return (len(w), w)

    def tau(self, m: Mono) -> list[list[int]]:
        t = [[0] * self.n for _ in range(self.n)]
        for k, (i, j) in enumerate(self.letters):
            t[i - 1][j - 1] = m[k]
        return t

    def mono_from_tau(self, tau: Sequence[Sequence[int]]) -> Mono:
        return tuple(tau[i - 1][j - 1] for (i, j) in self.letters)

    def show_mono(self, m: Mono) -> str:
        parts = []
        for k in range(self.N):
            if m[k] == 1:
                parts.append(self.name(k))
            elif m[k] > 1:
                parts.append(f"{self.name(k)}^{m[k]}")
        return " ".join(parts) if parts else "1"

    def monomials(self, degree: int) -> list[Mono]:
        out = []

        def rec(k: int, left: int, acc: list[int]):
            if k == self.N - 1:
                out.append(tuple(acc + [left]))
                return
            for e in range(left, -1, -1):
                rec(k + 1, left - e, acc + [e])

        if self.N == 0:
            return [()]
        rec(0, degree, [])
        return out

    # -- rewriting-system view ---------------------------------------------------------
    def alphabet(self) -> Alphabet:
        return Alphabet([self.name(k) for k in range(self.N)])

    def rewrite_system(self, domain=LaurentZ) -> RewriteSystem:
        sys_ = RewriteSystem(self.alphabet(), domain)
        for (y, x), rhs in self.rules.items():
            terms = {w: (RationalQ.coerce(c) if domain is RationalQ else c) for w, c in rhs}
            sys_.add_rule((y, x), terms)
        return sys_


@lru_cache(maxsize=None)
def algebra(n: int) -> ManinAlgebra:
    return ManinAlgebra(n)


def manin_system(n: int, domain=LaurentZ) -> RewriteSystem:
    """The commutation relations as a rewriting system; normal words are sorted words."""
    return algebra(n).rewrite_system(domain)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


class QMatElem:
    """Element of the quantum matrix algebra, in the PBW monomial basis."""

    __slots__ = ("alg", "terms", "context")

    def __init__(self, alg: ManinAlgebra, terms: dict | None = None, context: str = "M"):
        self.alg = alg
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        self.context = context

    @classmethod
    def _raw(cls, alg, terms, context="M") -> "QMatElem":
        out = cls.__new__(cls)
        out.alg = alg
        out.terms = terms
        out.context = context
        return out

    # constructors
    @classmethod
    def one(cls, n: int) -> "QMatElem":
        alg = algebra(n)
        return cls._raw(alg, {alg.zero_mono: _ONE})

    @classmethod
    def zero(cls, n: int) -> "QMatElem":
        return cls._raw(algebra(n), {})

    @classmethod
    def gen(cls, n: int, i: int, j: int) -> "QMatElem":
        alg = algebra(n)
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexError(f"t[{i},{j}] out of range for n={n}")
        return cls._raw(alg, {alg.unit_mono(alg.index[(i, j)]): _ONE})

    @classmethod
    def monomial(cls, n: int, m: Mono, coeff=None) -> "QMatElem":
        return cls._raw(algebra(n), {tuple(m): _ONE if coeff is None else coeff})

    @classmethod
    def scalar(cls, n: int, c) -> "QMatElem":
        alg = algebra(n)
        return cls(alg, {alg.zero_mono: c})

    @property
    def n(self) -> int:
        return self.alg.n

    def one_like(self) -> "QMatElem":
        return QMatElem._raw(self.alg, {self.alg.zero_mono: _ONE}, self.context)

    def zero_like(self) -> "QMatElem":
        return QMatElem._raw(self.alg, {}, self.context)

    def _check(self, other: "QMatElem") -> None:
        if other.alg is not self.alg or other.context != self.context:
            raise ContextError(
                f"context mismatch: ({self.context}, n={self.n}) vs ({other.context}, n={other.n})"
            )

    # arithmetic
    def __add__(self, other) -> "QMatElem":
        if not isinstance(other, QMatElem):
            other = self.one_like().scale(other)
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            _add_into(terms, m, c)
        return QMatElem._raw(self.alg, terms, self.context)

    __radd__ = __add__

    def __neg__(self) -> "QMatElem":
        return QMatElem._raw(self.alg, {m: -c for m, c in self.terms.items()}, self.context)

    def __sub__(self, other) -> "QMatElem":
        if not isinstance(other, QMatElem):
            other = self.one_like().scale(other)
        return self + (-other)

    def __rsub__(self, other) -> "QMatElem":
        return (-self) + other

    def scale(self, c) -> "QMatElem":
        if not c:
            return self.zero_like()
        return QMatElem._raw(self.alg, {m: c * v for m, v in self.terms.items()}, self.context)

    def __mul__(self, other) -> "QMatElem":
        if isinstance(other, GLElem):
            return NotImplemented
        if not isinstance(other, QMatElem):
            return self.scale(other)
        self._check(other)
        return QMatElem._raw(self.alg, self.alg.mul_terms(self.terms, other.terms), self.context)

    def __rmul__(self, other) -> "QMatElem":
        return self.scale(other)

    def __pow__(self, e: int) -> "QMatElem":
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
        if isinstance(other, int):
            other = self.one_like().scale(LaurentZ.from_int(other)) if other else self.zero_like()
        if not isinstance(other, QMatElem):
            return NotImplemented
        return self.alg is other.alg and (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def leading(self) -> tuple[Mono, object]:
        m = max(self.terms, key=self.alg.deglex)
        return m, self.terms[m]

    def coeff(self, m: Mono):
        return self.terms.get(tuple(m), LaurentZ.zero())

    def map_coeffs(self, f) -> "QMatElem":
        return QMatElem(self.alg, {m: f(c) for m, c in self.terms.items()}, self.context)

    def is_integral(self) -> bool:
        return all(isinstance(c, (LaurentZ, int)) or RationalQ.coerce(c).is_laurent() for c in self.terms.values())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=self.alg.deglex, reverse=True):
            c = self.terms[m]
            mono = self.alg.show_mono(m)
            ctext = fmt_coeff(c)
            if ctext == "1":
                parts.append(mono)
            elif ctext == "-1":
                parts.append(f"-{mono}" if mono != "1" else "-1")
            elif mono == "1":
                parts.append(f"({ctext})" if " " in ctext else ctext)
            else:
                parts.append(f"({ctext}) {mono}" if " " in ctext or "/" in ctext else f"{ctext} {mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"QMatElem(n={self.n}, {self})"

    def to_json(self) -> dict:
        rows = []
        for m in sorted(self.terms, key=self.alg.deglex, reverse=True):
            c = self.terms[m]
            rows.append({"tau": self.alg.tau(m), "dqinv": 0, "coeff": RationalQ.coerce(c).to_json()})
        return {"context": self.context, "n": self.n, "terms": rows}


def gen(n: int, i: int, j: int) -> QMatElem:
    return QMatElem.gen(n, i, j)


def normal_form(p: NCPoly, n: int) -> QMatElem:
    """Normal form of a free-algebra polynomial over the letters ``t[i,j]`` (letter index = order)."""
    alg = algebra(n)
    out: dict = {}
    for w, c in p.terms.items():
        cur = {alg.zero_mono: _ONE}
        for x in w:
            nxt: dict = {}
            for m, c1 in cur.items():
                for m2, c2 in alg.mul_mono_letter(m, x).items():
                    _add_into(nxt, m2, c1 * c2)
            cur = nxt
        for m, c1 in cur.items():
            _add_into(out, m, c * c1)
    return QMatElem(alg, out)


def multiply(a: QMatElem, b: QMatElem) -> QMatElem:
    return a * b


def qminor(n: int, rows: Sequence[int], cols: Sequence[int]) -> QMatElem:
    """Quantum minor on the given (increasing) rows and columns."""
    rows, cols = list(rows), list(cols)
    if len(rows) != len(cols):
        raise ValueError("square minors only")
    out = QMatElem.zero(n) if rows else QMatElem.one(n)
    for perm in permutations(range(len(cols))):
        term = QMatElem.one(n)
        for r, p in zip(rows, perm):
            term = term * QMatElem.gen(n, r, cols[p])
        out = out + term.scale(LaurentZ.q_power(_inversions(perm), (-1) ** _inversions(perm)))
    return out


@lru_cache(maxsize=None)
def _qdet_cached(n: int) -> QMatElem:
    return qminor(n, range(1, n + 1), range(1, n + 1))


def qdet(n: int) -> QMatElem:
    return _qdet_cached(n)


def complement_minor(n: int, row: int, col: int) -> QMatElem:
    """Quantum minor deleting ``row`` and ``col``."""
    return qminor(n, [r for r in range(1, n + 1) if r != row], [c for c in range(1, n + 1) if c != col])


# ---------------------------------------------------------------------------
# Coalgebra structure
# ---------------------------------------------------------------------------


class Tensor:
    """Finite sum of pure tensors ``x (x) y``; keys are pairs of keys of the legs."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    def __add__(self, other: "Tensor") -> "Tensor":
        terms = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(terms, k, c)
        return Tensor(terms)

    def __neg__(self) -> "Tensor":
        return Tensor({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    def scale(self, c) -> "Tensor":
        return Tensor({k: c * v for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def flip(self) -> "Tensor":
        return Tensor({(b, a): c for (a, b), c in self.terms.items()})

    def map_coeffs(self, f) -> "Tensor":
        return Tensor({k: f(c) for k, c in self.terms.items()})

    def __len__(self) -> int:
        return len(self.terms)


def tensor_mul(alg: ManinAlgebra, x: Tensor, y: Tensor) -> Tensor:
    out: dict = {}
    for (a1, b1), c1 in x.terms.items():
        for (a2, b2), c2 in y.terms.items():
            c = c1 * c2
            left = alg.mul_mono(a1, a2)
            right = alg.mul_mono(b1, b2)
            for ma, ca in left.items():
                cc = c * ca
                for mb, cb in right.items():
                    _add_into(out, (ma, mb), cc * cb)
    return Tensor(out)


def pure(a: QMatElem, b: QMatElem) -> Tensor:
    return Tensor({(m1, m2): c1 * c2 for m1, c1 in a.terms.items() for m2, c2 in b.terms.items()})


@lru_cache(maxsize=None)
def _delta_letter(n: int, k: int) -> Tensor:
    alg = algebra(n)
    i, j = alg.letters[k]
    return Tensor({
        (alg.unit_mono(alg.index[(i, m)]), alg.unit_mono(alg.index[(m, j)])): _ONE for m in range(1, n + 1)
    })


def coproduct_mono(alg: ManinAlgebra, m: Mono) -> Tensor:
    memo = _coproduct_memo.setdefault(alg.n, {})
    hit = memo.get(m)
    if hit is not None:
        return hit
    if not any(m):
        out = Tensor({(alg.zero_mono, alg.zero_mono): _ONE})
    else:
        last = max(k for k in range(alg.N) if m[k])
        rest = list(m)
        rest[last] -= 1
        out = tensor_mul(alg, coproduct_mono(alg, tuple(rest)), _delta_letter(alg.n, last))
    memo[m] = out
    return out


_coproduct_memo: dict[int, dict[Mono, Tensor]] = {}


def coproduct(a: QMatElem) -> Tensor:
    out = Tensor()
    for m, c in a.terms.items():
        out = out + coproduct_mono(a.alg, m).scale(c)
    return out


def counit_mono(alg: ManinAlgebra, m: Mono) -> int:
    for k, (i, j) in enumerate(alg.letters):
        if i != j and m[k]:
            return 0
    return 1


def counit(a: QMatElem):
    out = LaurentZ.zero()
    for m, c in a.terms.items():
        if counit_mono(a.alg, m):
            out = c + out
    return out


def tensor_apply_left(alg: ManinAlgebra, t: Tensor, f) -> dict:
    """Apply ``f`` (mono -> dict of keys) to the left leg; returns a dict keyed ``(key, right)``."""
    out: dict = {}
    for (a, b), c in t.terms.items():
        for k, c2 in f(a).items():
            _add_into(out, (k, b), c * c2)
    return out


def coassociativity_defect(a: QMatElem) -> dict:
    """``(Delta (x) id) Delta a - (id (x) Delta) Delta a`` as a dict on monomial triples."""
    alg = a.alg
    d = coproduct(a)
    out: dict = {}
    for (x, y), c in d.terms.items():
        for (x1, x2), c1 in coproduct_mono(alg, x).terms.items():
            _add_into(out, (x1, x2, y), c * c1)
        for (y1, y2), c2 in coproduct_mono(alg, y).terms.items():
            _add_into(out, (x, y1, y2), -(c * c2))
    return out


def counit_defect(a: QMatElem) -> tuple[QMatElem, QMatElem]:
    """``(eps (x) id) Delta a - a`` and ``(id (x) eps) Delta a - a``."""
    alg = a.alg
    d = coproduct(a)
    left: dict = {}
    right: dict = {}
    for (x, y), c in d.terms.items():
        if counit_mono(alg, x):
            _add_into(left, y, c)
        if counit_mono(alg, y):
            _add_into(right, x, c)
    return QMatElem(alg, left) - a, QMatElem(alg, right) - a


# ---------------------------------------------------------------------------
# General linear group: fractions num * D^-k
# ---------------------------------------------------------------------------


class GLElem:
    """``num * D_q^{-k}`` with ``num`` in the matrix bialgebra (``D_q`` is central)."""

    __slots__ = ("num", "k")

    def __init__(self, num: QMatElem, k: int = 0):
        if k < 0:
            num = num * qdet(num.n) ** (-k)
            k = 0
        self.num = num
        self.k = k

    @property
    def n(self) -> int:
        return self.num.n

    @classmethod
    def dqinv(cls, n: int, power: int = 1) -> "GLElem":
        return cls(QMatElem.one(n), power)

    def _align(self, other: "GLElem") -> tuple[QMatElem, QMatElem, int]:
        if other.n != self.n:
            raise ContextError("size mismatch")
        k = max(self.k, other.k)
        d = qdet(self.n)
        a = self.num * d ** (k - self.k) if k > self.k else self.num
        b = other.num * d ** (k - other.k) if k > other.k else other.num
        return a, b, k

    def __add__(self, other) -> "GLElem":
        if not isinstance(other, GLElem):
            other = GLElem(self.num.one_like().scale(other) if other else self.num.zero_like())
        a, b, k = self._align(other)
        return GLElem(a + b, k)

    __radd__ = __add__

    def __neg__(self) -> "GLElem":
        return GLElem(-self.num, self.k)

    def __sub__(self, other) -> "GLElem":
        if not isinstance(other, GLElem):
            other = GLElem(self.num.one_like().scale(other) if other else self.num.zero_like())
        return self + (-other)

    def __mul__(self, other) -> "GLElem":
        if isinstance(other, QMatElem):
            other = GLElem(other)
        if not isinstance(other, GLElem):
            return GLElem(self.num.scale(other), self.k)
        return GLElem(self.num * other.num, self.k + other.k)

    def __rmul__(self, other) -> "GLElem":
        if isinstance(other, QMatElem):
            return GLElem(other) * self
        return GLElem(self.num.scale(other), self.k)

    def __pow__(self, e: int) -> "GLElem":
        return GLElem(self.num ** e, self.k * e)

    def scale(self, c) -> "GLElem":
        return GLElem(self.num.scale(c), self.k)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, QMatElem):
            other = GLElem(other)
        if isinstance(other, int):
            other = GLElem(QMatElem.scalar(self.n, LaurentZ.from_int(other)))
        if not isinstance(other, GLElem):
            return NotImplemented
        a, b, _ = self._align(other)
        return (a - b).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def normalized(self) -> "GLElem":
        """Cancel powers of ``D_q`` from the numerator where exact division succeeds."""
        num, k = self.num, self.k
        while k > 0:
            quo = divide_by_qdet(num)
            if quo is None:
                break
            num, k = quo, k - 1
        return GLElem(num, k)

    def __str__(self) -> str:
        if self.k == 0:
            return str(self.num)
        tail = "Dqinv" if self.k == 1 else f"Dqinv^{self.k}"
        return f"({self.num}) {tail}"

    def __repr__(self) -> str:
        return f"GLElem({self})"

    def to_json(self) -> dict:
        out = self.num.to_json()
        out["context"] = "GL"
        for row in out["terms"]:
            row["dqinv"] = self.k
        return out


def divide_by_qdet(x: QMatElem) -> QMatElem | None:
    """Return ``y`` with ``D_q y = x`` if the leading-term division goes through, else ``None``."""
    alg = x.alg
    n = alg.n
    d = qdet(n)
    diag = [alg.index[(k, k)] for k in range(1, n + 1)]
    rem = x
    quo: dict = {}
    guard = 0
    while not rem.is_zero():
        guard += 1
        if guard > 10000:
            return None
        lead, c = rem.leading()
        if any(lead[k] == 0 for k in diag):
            return None
        mu = list(lead)
        for k in diag:
            mu[k] -= 1
        mu = tuple(mu)
        prod = d * QMatElem.monomial(n, mu)
        plead, pc = prod.leading()
        if plead != lead:
            return None
        factor = RationalQ.coerce(c) / RationalQ.coerce(pc)
        if factor.is_laurent():
            factor = factor.to_laurent()
        _add_into(quo, mu, factor)
        rem = rem - prod.scale(factor)
    return QMatElem(alg, quo)


def gl_extend(a: QMatElem) -> GLElem:
    return GLElem(a, 0)


def gl_coproduct(x: GLElem) -> Tensor:
    """Keys are ``((mono, k), (mono, k))``."""
    out: dict = {}
    for (m1, m2), c in coproduct(x.num).terms.items():
        _add_into(out, ((m1, x.k), (m2, x.k)), c)
    return Tensor(out)


def gl_counit(x: GLElem):
    return counit(x.num)


def gl_coassociativity_defect(x: GLElem) -> dict:
    return coassociativity_defect(x.num)


@lru_cache(maxsize=None)
def _antipode_generators(n: int) -> dict[int, GLElem]:
    alg = algebra(n)
    images = {}
    for k, (i, j) in enumerate(alg.letters):
        images[k] = GLElem(complement_minor(n, j, i).scale(LaurentZ.q_power(i - j, (-1) ** ((i - j) % 2))), 1)
    # verify the antipode axiom on generators in both composition orders
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            left = GLElem(QMatElem.zero(n))
            right = GLElem(QMatElem.zero(n))
            for m in range(1, n + 1):
                left = left + images[alg.index[(i, m)]] * QMatElem.gen(n, m, j)
                right = right + QMatElem.gen(n, i, m) * images[alg.index[(m, j)]]
            target = 1 if i == j else 0
            if not (left == target and right == target):
                raise AxiomError(f"antipode axiom fails at ({i},{j}) for n={n}")
    return images


def antipode_generator(n: int, i: int, j: int) -> GLElem:
    alg = algebra(n)
    return _antipode_generators(n)[alg.index[(i, j)]]


def untransposed_cofactor_antipode(n: int, i: int, j: int) -> GLElem:
    """Untransposed cofactor candidate: sign ``(-1)^(i+j)``, minor without row ``i`` and column ``j``."""
    return GLElem(complement_minor(n, i, j).scale(LaurentZ.from_int((-1) ** (i + j))), 1)


def antipode_axiom_holds(n: int, images) -> bool:
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            left = GLElem(QMatElem.zero(n))
            right = GLElem(QMatElem.zero(n))
            for m in range(1, n + 1):
                left = left + images(i, m) * QMatElem.gen(n, m, j)
                right = right + QMatElem.gen(n, i, m) * images(m, j)
            target = 1 if i == j else 0
            if not (left == target and right == target):
                return False
    return True


def antipode(x) -> GLElem:
    """Antipode of a GL element (an algebra anti-morphism with ``S(D^-1) = D``)."""
    if isinstance(x, QMatElem):
        x = GLElem(x)
    n = x.n
    alg = x.num.alg
    images = _antipode_generators(n)
    out = GLElem(QMatElem.zero(n))
    for m, c in x.num.terms.items():
        term = GLElem(QMatElem.one(n))
        for letter in reversed(alg.word_of(m)):
            term = term * images[letter]
        out = out + term.scale(c)
    if x.k:
        out = GLElem(out.num * qdet(n) ** x.k, out.k)
    return out


def hopf_report(n: int) -> dict[str, bool]:
    """Coassociativity, counit and antipode axioms on the generators, plus group-likeness of ``D_q``."""
    alg = algebra(n)
    gens = [QMatElem.gen(n, i, j) for (i, j) in alg.letters]
    d = qdet(n)
    coassoc = all(not coassociativity_defect(g) for g in gens) and not coassociativity_defect(d)
    cu = all(a.is_zero() and b.is_zero() for a, b in map(counit_defect, gens))
    try:
        _antipode_generators(n)
        anti = True
    except AxiomError:
        anti = False
    sdinv = antipode(GLElem.dqinv(n)) == GLElem(d)
    grouplike = coproduct(d) == pure(d, d)
    return {
        "coassociativity": coassoc,
        "counit": cu,
        "antipode": anti and sdinv,
        "qdet_grouplike": grouplike,
    }


# ---------------------------------------------------------------------------
# Special linear group: bounded completion with D_q = 1
# ---------------------------------------------------------------------------


class SLContext:
    """Normal forms modulo ``D_q - 1`` via bounded completion."""

    def __init__(self, n: int, degree_bound: int):
        self.n = n
        self.alg = algebra(n)
        self.degree_bound = degree_bound
        base = self.alg.rewrite_system(RationalQ)
        rel = {}
        for m, c in qdet(n).terms.items():
            rel[self.alg.word_of(m)] = RationalQ.coerce(c)
        rel[()] = rel.get((), RationalQ.zero()) - RationalQ.one()
        lead = max(rel, key=lambda w: (len(w), w))
        rhs = {w: -c / rel[lead] for w, c in rel.items() if w != lead}
        base.add_rule(lead, rhs)
        self.system = base.complete(degree_bound)

    def project(self, a: QMatElem) -> QMatElem:
        if a.degree() > self.degree_bound:
            raise ValueError(
                f"degree {a.degree()} exceeds the completion certificate degree {self.degree_bound}"
            )
        terms: dict = {}
        for m, c in a.terms.items():
            terms[self.alg.word_of(m)] = RationalQ.coerce(c)
        red = self.system.reduce_terms(terms)
        out: dict = {}
        for w, c in red.items():
            if list(w) != sorted(w):
                raise AssertionError("SL normal word is not a sorted monomial")
            _add_into(out, self.alg.mono_of_word(w), c)
        return QMatElem(self.alg, out, "SL")


@lru_cache(maxsize=None)
def sl_context(n: int, degree_bound: int = 4) -> SLContext:
    return SLContext(n, degree_bound)


def sl_project(a: QMatElem, degree_bound: int | None = None) -> QMatElem:
    bound = max(degree_bound or 0, a.degree(), 2 * a.n if a.n <= 2 else a.n + 1)
    return sl_context(a.n, bound).project(a)


def sl_normal(m: Mono, alg: ManinAlgebra) -> bool:
    return min(m[alg.index[(k, k)]] for k in range(1, alg.n + 1)) == 0


# ---------------------------------------------------------------------------
# Frobenius on the restricted form at a root of unity
# ---------------------------------------------------------------------------


def specialize_elem(a: QMatElem, ell: int) -> dict[Mono, CycloZ]:
    out = {}
    for m, c in a.terms.items():
        v = specialize_eps(LaurentZ.coerce(c), ell)
        if v:
            out[m] = v
    return out


def specialize_tensor(t: Tensor, ell: int) -> dict:
    out = {}
    for k, c in t.terms.items():
        v = specialize_eps(LaurentZ.coerce(c), ell)
        if v:
            out[k] = v
    return out


def frobenius_restricted(n: int, ell: int) -> dict:
    """Check that ell-th powers of generators commute and are matrix-coproduct-like at ``q = eps``."""
    alg = algebra(n)
    powers = {k: QMatElem.gen(n, *alg.letters[k]) ** ell for k in range(alg.N)}
    failures = []
    pairs = 0
    for a in range(alg.N):
        for b in range(a + 1, alg.N):
            pairs += 1
            comm = powers[a] * powers[b] - powers[b] * powers[a]
            if specialize_elem(comm, ell):
                failures.append(f"[{alg.name(a)}^{ell}, {alg.name(b)}^{ell}]")
    coprod_fail = []
    for k, (i, j) in enumerate(alg.letters):
        lhs = coproduct(powers[k])
        rhs = Tensor()
        for m in range(1, n + 1):
            rhs = rhs + pure(powers[alg.index[(i, m)]], powers[alg.index[(m, j)]])
        if specialize_tensor(lhs - rhs, ell):
            coprod_fail.append(f"Delta({alg.name(k)}^{ell})")
    return {
        "n": n,
        "ell": ell,
        "commutator_pairs": pairs,
        "commutator_failures": failures,
        "coproduct_failures": coprod_fail,
        "ok": not failures and not coprod_fail,
    }


__all__ = [
    "AxiomError",
    "ContextError",
    "GLElem",
    "ManinAlgebra",
    "QMatElem",
    "SLContext",
    "Tensor",
    "algebra",
    "antipode",
    "antipode_axiom_holds",
    "antipode_generator",
    "coassociativity_defect",
    "complement_minor",
    "coproduct",
    "coproduct_mono",
    "counit",
    "counit_defect",
    "divide_by_qdet",
    "frobenius_restricted",
    "gen",
    "gl_coproduct",
    "gl_counit",
    "gl_extend",
    "hopf_report",
    "letter_order",
    "manin_system",
    "multiply",
    "normal_form",
    "untransposed_cofactor_antipode",
    "pure",
    "qdet",
    "qminor",
    "sl_context",
    "sl_project",
    "tensor_mul",
]

