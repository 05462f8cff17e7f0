"""Free noncommutative algebras, rewriting to normal form, bounded completion.

Words are tuples of letter indices; the letter index is also its precedence.
Monomials are compared degree-lexicographically: longer words are larger, and
words of equal length compare left to right by letter index.

Besides the rewriting engine this module hosts the q-identity checks for
sums of q-commuting elements (multinomial and divided-power expansions,
binomials of ``x + (q - q^-1)^2 w``, root-of-unity vanishing).  Those checks
are written against a tiny element protocol (``+``, ``-``, ``*``, scalar
``*``, ``is_zero``, ``one_like``) so they run on free-algebra elements,
quantum-matrix elements and dual-group elements alike.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, Sequence

from .qring import (
    QQ,
    CycloZ,
    LaurentZ,
    RationalQ,
    bal_fact,
    gauss_binom,
    gauss_multinom,
    qfact,
    specialize_eps,
)

Word = tuple[int, ...]

DEFAULT_RULE_CEILING = 5000


class CompletionError(RuntimeError):
    """Raised when completion exceeds the configured rule ceiling."""


class HypothesisError(ValueError):
    """A commutation hypothesis of an identity check does not hold."""


def rule_ceiling() -> int:
    return int(os.environ.get("QHYPER_DEGREE_CEILING", DEFAULT_RULE_CEILING))


def deglex_key(word: Word) -> tuple[int, Word]:
    return (len(word), word)


# ---------------------------------------------------------------------------
# Alphabet, polynomials
# ---------------------------------------------------------------------------


class Alphabet:
    """Ordered letters; position in the sequence is the precedence."""

    def __init__(self, names: Sequence[str]):
        if len(set(names)) != len(names):
            raise ValueError("letters must be distinct")
        self.names = tuple(names)
        self.index = {name: i for i, name in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def word(self, *names: str) -> Word:
        return tuple(self.index[n] for n in names)

    def show(self, word: Word) -> str:
        return " ".join(self.names[i] for i in word) if word else "1"

    def parse_word(self, text: str) -> Word:
        toks = _LETTER_RE.findall(text)
        if "".join(toks) != text.replace(" ", ""):
            raise ValueError(f"cannot split {text!r} into letters")
        return tuple(self.index[t] for t in toks)


_LETTER_RE = re.compile(r"[A-Za-z]+(?:\[[^\]]*\])?(?:\^-?\d+)?")


class NCPoly:
    """Finite linear combination of words with nonzero coefficients.

    ``domain`` is the coefficient class (``RationalQ``, ``LaurentZ``, ...).
    When ``system`` is set, products are reduced to normal form.
    """

    __slots__ = ("terms", "domain", "system")

    def __init__(self, terms: dict | None = None, domain=RationalQ, system: "RewriteSystem | None" = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}
        self.domain = domain
        self.system = system

    # construction helpers
    @classmethod
    def word(cls, word: Word, coeff=None, domain=RationalQ, system=None) -> "NCPoly":
        c = domain.one() if coeff is None else coeff
        return cls({tuple(word): c}, domain, system)

    def _wrap(self, terms: dict) -> "NCPoly":
        out = NCPoly.__new__(NCPoly)
        out.terms = terms
        out.domain = self.domain
        out.system = self.system
        return out

    def one_like(self) -> "NCPoly":
        return self._wrap({(): self.domain.one()})

    def zero_like(self) -> "NCPoly":
        return self._wrap({})

    def _scalar(self, c):
        if isinstance(c, self.domain):
            return c
        if self.domain is CycloZ:
            raise TypeError("use CycloZ values directly")
        return self.domain.coerce(c)

    # arithmetic
    def __add__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            other = self.one_like().scale(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            v = terms.get(w)
            v = c if v is None else v + c
            if v:
                terms[w] = v
            else:
                terms.pop(w, None)
        return self._wrap(terms)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return self._wrap({w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            other = self.one_like().scale(other)
        return self + (-other)

    def __rsub__(self, other) -> "NCPoly":
        return (-self) + other

    def scale(self, c) -> "NCPoly":
        c = self._scalar(c)
        if not c:
            return self._wrap({})
        return self._wrap({w: c * v for w, v in self.terms.items()})

    def __mul__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            return self.scale(other)
        if self.system is not None:
            return self.system.mul(self, other)
        terms: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = terms.get(w)
                c = c1 * c2
                v = c if v is None else v + c
                if v:
                    terms[w] = v
                else:
                    terms.pop(w, None)
        return self._wrap(terms)

    def __rmul__(self, other) -> "NCPoly":
        return self.scale(other)

    def __pow__(self, e: int) -> "NCPoly":
        out = self.one_like()
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            if other == 0:
                return not self.terms
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def leading(self) -> tuple[Word, object]:
        w = max(self.terms, key=deglex_key)
        return w, self.terms[w]

    def show(self, alphabet: Alphabet) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=deglex_key, reverse=True):
            parts.append(f"({self.terms[w]}) {alphabet.show(w)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"NCPoly({len(self.terms)} terms)"


# ---------------------------------------------------------------------------
# Rewriting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: NCPoly


@dataclass(frozen=True)
class Certificate:
    degree_bound: int
    confluent: bool
    rules_added: int
    ambiguities_checked: int


def _invert(c):
    if isinstance(c, RationalQ):
        return c.inverse()
    if isinstance(c, LaurentZ):
        if not c.is_unit():
            raise ZeroDivisionError(f"leading coefficient {c} is not a unit of Z[q,q^-1]")
        return c ** -1
    if isinstance(c, int):
        if c not in (1, -1):
            raise ZeroDivisionError("non-unit integer leading coefficient")
        return c
    raise ZeroDivisionError(f"cannot invert {c!r}")


class RewriteSystem:
    """Rules ``lhs -> rhs`` with every word of ``rhs`` deglex-smaller than ``lhs``."""

    def __init__(self, alphabet: Alphabet, domain=RationalQ, rules: Iterable[tuple[Word, NCPoly]] = ()):
        self.alphabet = alphabet
        self.domain = domain
        self.rules: dict[Word, dict[Word, object]] = {}
        self.certificate: Certificate | None = None
        self._memo: dict[tuple[Word, int], dict[Word, object]] = {}
        self._lens: list[int] = []
        for lhs, rhs in rules:
            self.add_rule(lhs, rhs)

    # -- rule management ------------------------------------------------------
    def add_rule(self, lhs: Word, rhs) -> None:
        lhs = tuple(lhs)
        terms = rhs.terms if isinstance(rhs, NCPoly) else dict(rhs)
        if lhs in self.rules:
            raise ValueError(f"duplicate left-hand side {self.alphabet.show(lhs)}")
        key = deglex_key(lhs)
        for w in terms:
            if deglex_key(w) >= key:
                raise ValueError(
                    f"rule {self.alphabet.show(lhs)} -> ... has non-smaller word {self.alphabet.show(w)}"
                )
        self.rules[lhs] = {w: c for w, c in terms.items() if c}
        self._lens = sorted({len(l) for l in self.rules})
        self._memo.clear()
        self.certificate = None

    def remove_rule(self, lhs: Word) -> None:
        del self.rules[lhs]
        self._lens = sorted({len(l) for l in self.rules})
        self._memo.clear()
        self.certificate = None

    def copy(self) -> "RewriteSystem":
        out = RewriteSystem(self.alphabet, self.domain)
        out.rules = {l: dict(r) for l, r in self.rules.items()}
        out._lens = list(self._lens)
        out.certificate = self.certificate
        return out

    def rule_list(self) -> list[RewriteRule]:
        return [RewriteRule(l, NCPoly(dict(r), self.domain)) for l, r in sorted(self.rules.items(), key=lambda t: deglex_key(t[0]))]

    def poly(self, terms: dict | None = None) -> NCPoly:
        return NCPoly(terms or {}, self.domain, self)

    def gen(self, name: str) -> NCPoly:
        return NCPoly.word(self.alphabet.word(name), domain=self.domain, system=self)

    def one(self) -> NCPoly:
        return NCPoly.word((), domain=self.domain, system=self)

    # -- reduction ------------------------------------------------------------
    def _append(self, w: Word, x: int) -> dict[Word, object]:
        """Normal form of ``w x`` for a normal word ``w``."""
        key = (w, x)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        wx = w + (x,)
        rules = self.rules
        result = None
        for L in self._lens:
            if L > len(wx):
                break
            rhs = rules.get(wx[len(wx) - L:])
            if rhs is not None:
                prefix = wx[: len(wx) - L]
                result = {}
                for rw, c in rhs.items():
                    for nw, nc in self._append_word(prefix, rw).items():
                        v = result.get(nw)
                        nc = c * nc
                        v = nc if v is None else v + nc
                        if v:
                            result[nw] = v
                        else:
                            result.pop(nw, None)
                break
        if result is None:
            result = {wx: self.domain.one()}
        self._memo[key] = result
        return result

    def _append_word(self, w: Word, word: Word) -> dict[Word, object]:
        cur = {w: self.domain.one()}
        for x in word:
            nxt: dict = {}
            for u, c in cur.items():
                for nw, nc in self._append(u, x).items():
                    v = nxt.get(nw)
                    nc = c * nc
                    v = nc if v is None else v + nc
                    if v:
                        nxt[nw] = v
                    else:
                        nxt.pop(nw, None)
            cur = nxt
        return cur

    def reduce_terms(self, terms: dict) -> dict[Word, object]:
        out: dict = {}
        for w, c in terms.items():
            for nw, nc in self._append_word((), w).items():
                v = out.get(nw)
                nc = c * nc
                v = nc if v is None else v + nc
                if v:
                    out[nw] = v
                else:
                    out.pop(nw, None)
        return out

    def reduce(self, p: NCPoly) -> NCPoly:
        return NCPoly(self.reduce_terms(p.terms), self.domain, self)

    def mul(self, a: NCPoly, b: NCPoly) -> NCPoly:
        out: dict = {}
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                c = c1 * c2
                for nw, nc in self._append_word(w1, w2).items():
                    v = out.get(nw)
                    nc = c * nc
                    v = nc if v is None else v + nc
                    if v:
                        out[nw] = v
                    else:
                        out.pop(nw, None)
        return NCPoly(out, self.domain, self)

    def is_normal(self, word: Word) -> bool:
        for L in self._lens:
            for i in range(len(word) - L + 1):
                if word[i:i + L] in self.rules:
                    return False
        return True

    # -- completion -----------------------------------------------------------
    def ambiguities(self, degree_bound: int) -> Iterator[tuple[Word, NCPoly, NCPoly]]:
        """Yield ``(word, side1, side2)`` for overlap and inclusion ambiguities."""
        for l1, r1 in list(self.rules.items()):
            for l2, r2 in list(self.rules.items()):
                yield from self._pair_ambiguities(l1, r1, l2, r2, degree_bound)

    def _pair_ambiguities(self, l1, r1, l2, r2, degree_bound):
        # overlaps: suffix of l1 equals prefix of l2
        for k in range(1, min(len(l1), len(l2))):
            if l1[-k:] == l2[:k]:
                word = l1 + l2[k:]
                if len(word) > degree_bound:
                    continue
                s1 = {rw + l2[k:]: c for rw, c in r1.items()}
                s2 = {l1[:-k] + rw: c for rw, c in r2.items()}
                yield word, s1, s2
        # inclusions: l2 is a proper factor of l1
        if l1 != l2 and len(l2) <= len(l1) and len(l1) <= degree_bound:
            for p in range(len(l1) - len(l2) + 1):
                if l1[p:p + len(l2)] == l2:
                    s1 = dict(r1)
                    s2 = {l1[:p] + rw + l1[p + len(l2):]: c for rw, c in r2.items()}
                    yield l1, s1, s2

    def _orient(self, terms: dict) -> tuple[Word, dict]:
        lead = max(terms, key=deglex_key)
        inv = _invert(terms[lead])
        rhs = {w: -(c * inv) for w, c in terms.items() if w != lead}
        return lead, rhs

    def complete(self, degree_bound: int, ceiling: int | None = None) -> "RewriteSystem":
        """Bounded completion: resolve every ambiguity of degree <= ``degree_bound``."""
        ceiling = rule_ceiling() if ceiling is None else ceiling
        sys_ = self.copy()
        added = 0
        checked = 0
        queue: list[tuple[Word, dict, dict]] = list(sys_.ambiguities(degree_bound))
        pending_relations: list[dict] = []
        while queue or pending_relations:
            if pending_relations:
                diff = sys_.reduce_terms(pending_relations.pop())
            else:
                _, s1, s2 = queue.pop()
                checked += 1
                a = sys_.reduce_terms(s1)
                b = sys_.reduce_terms(s2)
                diff = dict(a)
                for w, c in b.items():
                    v = diff.get(w)
                    v = -c if v is None else v - c
                    if v:
                        diff[w] = v
                    else:
                        diff.pop(w, None)
            if not diff:
                continue
            lhs, rhs = sys_._orient(diff)
            # interreduce: rules whose lhs contains the new lhs become relations again
            for old in list(sys_.rules):
                if old != lhs and any(old[i:i + len(lhs)] == lhs for i in range(len(old) - len(lhs) + 1)):
                    rel = dict(sys_.rules[old])
                    rel = {w: -c for w, c in rel.items()}
                    rel[old] = sys_.domain.one()
                    sys_.remove_rule(old)
                    pending_relations.append(rel)
            sys_.add_rule(lhs, rhs)
            added += 1
            if len(sys_.rules) > ceiling:
                raise CompletionError(f"rule count exceeded ceiling {ceiling} during completion")
            new_r = sys_.rules[lhs]
            for l2, r2 in list(sys_.rules.items()):
                queue.extend(sys_._pair_ambiguities(lhs, new_r, l2, r2, degree_bound))
                if l2 != lhs:
                    queue.extend(sys_._pair_ambiguities(l2, r2, lhs, new_r, degree_bound))
        sys_.certificate = Certificate(degree_bound, True, added, checked)
        return sys_

    def interreduce(self) -> "RewriteSystem":
        """Drop rules whose left side contains another left side and which the
        remaining rules already imply."""
        out = self.copy()
        cert = out.certificate
        for lhs in sorted(out.rules, key=deglex_key, reverse=True):
            others = [l for l in out.rules if l != lhs]
            if not any(lhs[i:i + len(l)] == l for l in others for i in range(len(lhs) - len(l) + 1)):
                continue
            rel = {w: -c for w, c in out.rules[lhs].items()}
            rel[lhs] = out.domain.one()
            trial = out.copy()
            trial.remove_rule(lhs)
            if not trial.reduce_terms(rel):
                out = trial
        out.certificate = cert
        return out

    @classmethod
    def from_relations(cls, alphabet: Alphabet, relations: Iterable[NCPoly | dict], domain=RationalQ) -> "RewriteSystem":
        """Orient relations (``p = 0``) one by one, reducing each by the rules so far."""
        sys_ = cls(alphabet, domain)
        for rel in relations:
            terms = rel.terms if isinstance(rel, NCPoly) else rel
            red = sys_.reduce_terms(terms)
            if red:
                lhs, rhs = sys_._orient(red)
                for old in list(sys_.rules):
                    if any(old[i:i + len(lhs)] == lhs for i in range(len(old) - len(lhs) + 1)):
                        raise ValueError("relation order would require interreduction; use complete()")
                sys_.add_rule(lhs, rhs)
        return sys_

    # -- graded counts ----------------------------------------------------------
    def normal_word_counts(self, max_degree: int, letters: Sequence[int] | None = None) -> list[int]:
        """Number of normal words of each length ``0..max_degree``."""
        letters = list(range(len(self.alphabet))) if letters is None else list(letters)
        counts = [0] * (max_degree + 1)
        counts[0] = 1
        frontier: list[Word] = [()]
        for d in range(1, max_degree + 1):
            nxt = []
            for w in frontier:
                for x in letters:
                    wx = w + (x,)
                    if not any(wx[len(wx) - L:] in self.rules for L in self._lens if L <= len(wx)):
                        nxt.append(wx)
            counts[d] = len(nxt)
            frontier = nxt
        return counts

    # -- text format ------------------------------------------------------------
    def dumps(self) -> str:
        lines = []
        for rule in self.rule_list():
            rhs = " + ".join(
                f"{_coeff_text(c)} {self.alphabet.show(w)}" if w else _coeff_text(c) for w, c in sorted(rule.rhs.terms.items(), key=lambda t: deglex_key(t[0]), reverse=True)
            ) or "0"
            lines.append(f"{self.alphabet.show(rule.lhs)} -> {rhs}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def loads(cls, text: str, alphabet: Alphabet, domain=RationalQ) -> "RewriteSystem":
        """Parse ``LHS -> coeff WORD + coeff WORD ...`` lines (coefficients as ``(...)`` or integers)."""
        sys_ = cls(alphabet, domain)
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            lhs_text, rhs_text = line.split("->")
            lhs = alphabet.parse_word(lhs_text.strip())
            terms: dict = {}
            rhs_text = rhs_text.strip()
            if rhs_text != "0":
                for coeff_text, word_text in _split_rhs(rhs_text):
                    w = alphabet.parse_word(word_text) if word_text not in ("", "1") else ()
                    c = _parse_coeff(coeff_text, domain)
                    terms[w] = terms.get(w, domain.zero()) + c
            sys_.add_rule(lhs, terms)
        return sys_


def parse_poly(text: str, alphabet: Alphabet, domain=RationalQ) -> NCPoly:
    """Read ``coeff WORD + coeff WORD ...`` (a missing coefficient means 1)."""
    terms: dict = {}
    text = text.strip()
    if text != "0":
        for coeff_text, word_text in _split_rhs(text):
            w = alphabet.parse_word(word_text) if word_text not in ("", "1") else ()
            terms[w] = terms.get(w, domain.zero()) + _parse_coeff(coeff_text, domain)
    return NCPoly(terms, domain)


def letters_of(text: str) -> list[str]:
    """Bracketed letters in order of first appearance, skipping comments."""
    seen: dict[str, None] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        for tok in re.findall(r"[A-Za-z]+\[[^\]]*\]", line):
            seen.setdefault(tok, None)
    return list(seen)


def _coeff_text(c) -> str:
    if isinstance(c, (RationalQ, LaurentZ)):
        s = str(c)
        return s if re.fullmatch(r"-?\d+", s) else f"({s})"
    return str(c)


def _split_rhs(text: str) -> list[tuple[str, str]]:
    out = []
    i = 0
    n = len(text)
    while i < n:
        while i < n and text[i] in " +":
            i += 1
        if i >= n:
            break
        if text[i] == "(":
            depth = 0
            j = i
            while True:
                if text[j] == "(":
                    depth += 1
                elif text[j] == ")":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            coeff = text[i + 1:j]
            i = j + 1
        elif text[i].isalpha():
            coeff = "1"
        else:
            m = re.match(r"-?\d+", text[i:])
            if not m:
                raise ValueError(f"expected coefficient at {text[i:]!r}")
            coeff = m.group(0)
            i += m.end()
        m = re.match(r"\s*((?:[A-Za-z]+(?:\[[^\]]*\])?(?:\^-?\d+)?\s*)*)", text[i:])
        word = m.group(1).strip() if m else ""
        i += m.end() if m else 0
        if not word:
            unit = re.match(r"\s+1(?=\s*(?:\+|$))", text[i:])
            if unit:
                i += unit.end()
        out.append((coeff, word))
    return out


def _parse_coeff(text: str, domain):
    from .cli import parse_scalar  # local import: the scalar grammar lives with the CLI parser

    return domain.coerce(parse_scalar(text)) if domain is not CycloZ else parse_scalar(text)


# ---------------------------------------------------------------------------
# Element calculus shared by all algebras
# ---------------------------------------------------------------------------


def subst(poly: LaurentZ, value: RationalQ) -> RationalQ:
    """Evaluate a Laurent polynomial in ``q`` at a rational function ``value``."""
    value = RationalQ.coerce(value)
    out = RationalQ.zero()
    for e, c in poly.terms.items():
        out = out + RationalQ.from_int(c) * value ** e
    return out


def divided_power(x, m: int):
    """``x^(m) = x^m / [m]_q!``."""
    return (x ** m).scale(RationalQ.coerce(bal_fact(m)).inverse())


def qbinom_elem(x, c: int, m: int):
    """``(x; c choose m) = prod_{s=1}^m (q^{c+1-s} x - 1)/(q^s - 1)``."""
    out = x.one_like()
    for s in range(1, m + 1):
        factor = x.scale(LaurentZ.q_power(c + 1 - s)) - x.one_like()
        out = out * factor.scale(RationalQ.coerce(LaurentZ.q_power(s) - 1).inverse())
    return out


def curly_elem(x, c: int, m: int, r: int):
    """``{x; c over m, r} = sum_s q^{C(s+1,2)} (r choose s)_q (x; c+s choose m-r)``."""
    out = x.zero_like()
    if m < r:
        return out
    for s in range(r + 1):
        coeff = gauss_binom(r, s).shift(comb(s + 1, 2))
        out = out + qbinom_elem(x, c + s, m - r).scale(coeff)
    return out


def _compositions(m: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if m == 0:
            yield ()
        return
    if parts == 1:
        yield (m,)
        return
    for k in range(m + 1):
        for rest in _compositions(m - k, parts - 1):
            yield (k,) + rest


def compositions(m: int, parts: int) -> list[tuple[int, ...]]:
    return list(_compositions(m, parts))


def _commutes_with(a, b, p) -> bool:
    return (a * b - (b * a).scale(p)).is_zero()


def check_power_expansion(xs: Sequence, p, m: int, part: str = "a") -> bool:
    """Multinomial (part ``a``) or divided-power (part ``b``) expansion of a sum.

    Part ``a`` needs ``x_i x_j = p x_j x_i``; part ``b`` needs
    ``y_i y_j = p^2 y_j y_i`` (``i < j``).  Violations raise
    :class:`HypothesisError`.
    """
    p = RationalQ.coerce(p)
    factor = p if part == "a" else p * p
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if not _commutes_with(xs[i], xs[j], factor):
                raise HypothesisError(f"elements {i} and {j} do not satisfy the commutation hypothesis")
    total = xs[0].zero_like()
    for x in xs:
        total = total + x
    s = len(xs)
    if part == "a":
        lhs = total ** m
        pinv = p.inverse()
        rhs = xs[0].zero_like()
        for ks in compositions(m, s):
            coeff = subst(gauss_multinom(m, *ks[:-1]), pinv)
            term = xs[0].one_like()
            for x, k in zip(xs, ks):
                term = term * x ** k
            rhs = rhs + term.scale(coeff)
        return (lhs - rhs).is_zero()
    if part != "b":
        raise ValueError("part must be 'a' or 'b'")

    def pfact(k: int) -> RationalQ:
        return subst(bal_fact(k), p)

    lhs = (total ** m).scale(pfact(m).inverse())
    rhs = xs[0].zero_like()
    for ks in compositions(m, s):
        expo = sum(comb(k + 1, 2) for k in ks) - comb(m + 1, 2)
        term = xs[0].one_like()
        for y, k in zip(xs, ks):
            term = term * (y ** k).scale(pfact(k).inverse())
        rhs = rhs + term.scale(p ** expo)
    return (lhs - rhs).is_zero()


BINOMIAL_EXPANSION_VARIANTS = ("a1", "a2", "b", "c1", "c2", "d")


def binomial_expansion_hypotheses(variant: str, x, y=None, z=None, w=None) -> bool:
    q = RationalQ.coerce(LaurentZ.q_power(1))
    q2 = q * q
    if variant in ("a1", "a2"):
        return _commutes_with(x, w, q2)
    if variant == "b":
        return _commutes_with(x, y, q) and _commutes_with(x, z, q) and _commutes_with(y, z, 1)
    if variant in ("c1", "c2"):
        return _commutes_with(w, x, q2)
    if variant == "d":
        return _commutes_with(y, x, q) and _commutes_with(z, x, q) and _commutes_with(z, y, 1)
    raise ValueError(f"unknown variant {variant!r}")


def binomial_expansion_sides(variant: str, m: int, t: int, x, y=None, z=None, w=None):
    """Both sides of the binomial expansion of ``x + (q - q^-1)^2 (w or y z)``."""
    qq2 = QQ * QQ
    if variant in ("a1", "a2", "c1", "c2"):
        arg = x + w.scale(qq2)
    else:
        arg = x + (y * z).scale(qq2)
    lhs = qbinom_elem(arg, t, m)
    rhs = x.zero_like()
    for r in range(m + 1):
        coeff = QQ ** r * LaurentZ.q_power(r * (t - m))
        if variant == "a1":
            term = divided_power(w, r) * curly_elem(x, t, m, r)
        elif variant == "a2":
            term = curly_elem(x, t - 2 * r, m, r) * divided_power(w, r)
        elif variant == "c1":
            term = curly_elem(x, t, m, r) * divided_power(w, r)
        elif variant == "c2":
            term = divided_power(w, r) * curly_elem(x, t - 2 * r, m, r)
        elif variant == "b":
            coeff = coeff * bal_fact(r)
            term = divided_power(y, r) * curly_elem(x, t - r, m, r) * divided_power(z, r)
        elif variant == "d":
            coeff = coeff * bal_fact(r)
            term = divided_power(z, r) * curly_elem(x, t - r, m, r) * divided_power(y, r)
        else:
            raise ValueError(f"unknown variant {variant!r}")
        rhs = rhs + term.scale(coeff)
    return lhs, rhs


def check_binomial_expansion(variant: str, m: int, t: int, x, y=None, z=None, w=None) -> bool:
    if not binomial_expansion_hypotheses(variant, x, y, z, w):
        raise HypothesisError(f"hypotheses of variant {variant} fail for the given witnesses")
    lhs, rhs = binomial_expansion_sides(variant, m, t, x, y, z, w)
    return (lhs - rhs).is_zero()


def power_binomial_coeffs(m: int) -> list[LaurentZ]:
    """Coefficients ``c_k`` with ``x^m = sum_k c_k (x; 0 choose k)``.

    ``c_k = q^{C(k,2)} (m choose k)_q (q - 1)^k (k)_q!``.
    """
    qm1 = LaurentZ.from_terms({1: 1, 0: -1})
    return [gauss_binom(m, k).shift(comb(k, 2)) * qm1 ** k * qfact(k) for k in range(m + 1)]


def vanishes_at_root_of_unity(coords: dict, ell: int) -> bool:
    """All integral coordinates ``coords`` (LaurentZ values) vanish at ``q = eps``.

    Callers pass the integral-basis coordinates of ``x^ell - 1`` (binomial
    mode) or of ``y^ell`` (divided mode).
    """
    return all(specialize_eps(LaurentZ.coerce(c), ell).is_zero() for c in coords.values())


def free_algebra(names: Sequence[str], domain=RationalQ) -> RewriteSystem:
    return RewriteSystem(Alphabet(names), domain)


def tensor_square_system(base: RewriteSystem, suffixes: tuple[str, str] = ("_L", "_R")) -> RewriteSystem:
    """Presentation of ``A (x) A``: two copies of ``base`` whose letters commute.

    Left-copy letters precede right-copy letters.
    """
    names = base.alphabet.names
    n = len(names)
    alpha = Alphabet([nm + suffixes[0] for nm in names] + [nm + suffixes[1] for nm in names])
    out = RewriteSystem(alpha, base.domain)
    for lhs, rhs in base.rules.items():
        out.add_rule(lhs, rhs)
        out.add_rule(tuple(i + n for i in lhs), {tuple(i + n for i in w): c for w, c in rhs.items()})
    one = base.domain.one()
    for a in range(n):
        for b in range(n):
            out.add_rule((b + n, a), {(a, b + n): one})
    return out


def tensor_pure(sys2: RewriteSystem, left: NCPoly, right: NCPoly) -> NCPoly:
    """The element ``left (x) right`` of a :func:`tensor_square_system`."""
    n = len(sys2.alphabet) // 2
    shifted = NCPoly({tuple(i + n for i in w): c for w, c in right.terms.items()}, sys2.domain, sys2)
    lft = NCPoly(dict(left.terms), sys2.domain, sys2)
    return lft * shifted


__all__ = [
    "Alphabet",
    "Certificate",
    "CompletionError",
    "HypothesisError",
    "NCPoly",
    "RewriteRule",
    "RewriteSystem",
    "Word",
    "check_power_expansion",
    "letters_of",
    "parse_poly",
    "check_binomial_expansion",
    "vanishes_at_root_of_unity",
    "compositions",
    "curly_elem",
    "deglex_key",
    "divided_power",
    "free_algebra",
    "binomial_expansion_sides",
    "power_binomial_coeffs",
    "qbinom_elem",
    "subst",
    "tensor_pure",
    "tensor_square_system",
]

