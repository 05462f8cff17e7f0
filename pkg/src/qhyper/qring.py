"""Exact coefficient rings and q-combinatorics.

Three coefficient domains are provided:

* :class:`LaurentZ`  -- Laurent polynomials in ``q`` with integer coefficients,
* :class:`RationalQ` -- rational functions in ``q`` over the rationals,
* :class:`CycloZ`    -- the quotient ``Z[q]/(Phi_ell)`` at an odd ``ell >= 3``.

All three share one small protocol (``zero``, ``one``, ``from_int``, ``+``,
``-``, ``*``, ``==``, ``bool``) so that the rewriting engine can run over any
of them.  Polynomial kernels (products, gcds) are delegated to FLINT.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Union

import flint

_P = flint.fmpz_poly
_TERM_RE = re.compile(r"([+-]?\d+)\*q\^(-?\d+)")
_Q = flint.fmpq_poly

IntLike = Union[int, "LaurentZ"]


def _strip_low(poly: flint.fmpz_poly) -> tuple[int, flint.fmpz_poly]:
    """Split ``poly`` as ``q^k * p`` with ``p(0) != 0``."""
    k = 0
    while poly[k] == 0:
        k += 1
    return k, (poly.right_shift(k) if k else poly)


# ---------------------------------------------------------------------------
# LaurentZ
# ---------------------------------------------------------------------------


class LaurentZ:
    """Element of ``Z[q, q^-1]``, stored as ``q^val * poly(q)`` with ``poly(0) != 0``.

    The zero element has ``val == 0`` and the zero polynomial.  Instances are
    immutable.
    """

    __slots__ = ("val", "poly", "_hash")

    def __init__(self, val: int = 0, poly: flint.fmpz_poly | None = None, *, _raw: bool = False):
        if poly is None:
            poly = _P([])
        if not _raw:
            if poly.is_zero():
                val = 0
            else:
                k, poly = _strip_low(poly)
                val += k
        self.val = val
        self.poly = poly
        self._hash = None

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls) -> "LaurentZ":
        return _LZ_ZERO

    @classmethod
    def one(cls) -> "LaurentZ":
        return _LZ_ONE

    @classmethod
    def from_int(cls, c: int) -> "LaurentZ":
        return cls(0, _P([int(c)]))

    @classmethod
    def q_power(cls, e: int, c: int = 1) -> "LaurentZ":
        """The monomial ``c * q^e``."""
        if c == 0:
            return _LZ_ZERO
        return cls(e, _P([c]), _raw=True)

    @classmethod
    def from_terms(cls, terms: Mapping[int, int]) -> "LaurentZ":
        terms = {int(e): int(c) for e, c in terms.items() if c}
        if not terms:
            return _LZ_ZERO
        lo = min(terms)
        coeffs = [0] * (max(terms) - lo + 1)
        for e, c in terms.items():
            coeffs[e - lo] = c
        return cls(lo, _P(coeffs), _raw=True)

    @classmethod
    def coerce(cls, x) -> "LaurentZ":
        if isinstance(x, LaurentZ):
            return x
        if isinstance(x, int):
            return cls.from_int(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentZ")

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict[int, int]:
        """Exponent -> nonzero coefficient mapping."""
        return {self.val + i: int(c) for i, c in enumerate(self.poly.coeffs()) if c}

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __bool__(self) -> bool:
        return not self.poly.is_zero()

    @property
    def low(self) -> int:
        return self.val

    @property
    def high(self) -> int:
        return self.val + self.poly.degree()

    def is_unit(self) -> bool:
        """True for ``+-q^k``, the units of ``Z[q, q^-1]``."""
        return self.poly.degree() == 0 and abs(int(self.poly[0])) == 1

    def is_integer(self) -> bool:
        return self.is_zero() or (self.val == 0 and self.poly.degree() == 0)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "LaurentZ":
        if isinstance(other, int):
            other = LaurentZ.from_int(other)
        elif not isinstance(other, LaurentZ):
            return NotImplemented
        if not other.poly:
            return self
        if not self.poly:
            return other
        a, b = self, other
        if a.val > b.val:
            a, b = b, a
        p = a.poly + b.poly.left_shift(b.val - a.val)
        return LaurentZ(a.val, p)

    __radd__ = __add__

    def __neg__(self) -> "LaurentZ":
        return LaurentZ(self.val, -self.poly, _raw=True)

    def __sub__(self, other) -> "LaurentZ":
        if isinstance(other, int):
            other = LaurentZ.from_int(other)
        elif not isinstance(other, LaurentZ):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentZ":
        return LaurentZ.coerce(other) - self

    def __mul__(self, other) -> "LaurentZ":
        if isinstance(other, int):
            if other == 0:
                return _LZ_ZERO
            return LaurentZ(self.val, self.poly * other, _raw=True)
        if not isinstance(other, LaurentZ):
            return NotImplemented
        if not self.poly or not other.poly:
            return _LZ_ZERO
        return LaurentZ(self.val + other.val, self.poly * other.poly, _raw=True)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LaurentZ":
        if e < 0:
            if not self.is_unit():
                raise ZeroDivisionError("only units of Z[q,q^-1] have negative powers")
            c = int(self.poly[0])
            return LaurentZ.q_power(-self.val * (-e), c ** (-e))
        return LaurentZ(self.val * e, self.poly ** e, _raw=True)

    def shift(self, k: int) -> "LaurentZ":
        """Multiply by ``q^k``."""
        if not self.poly:
            return self
        return LaurentZ(self.val + k, self.poly, _raw=True)

    def divexact(self, other: "LaurentZ") -> "LaurentZ | None":
        """Return ``self / other`` if it lies in ``Z[q, q^-1]``, else ``None``."""
        other = LaurentZ.coerce(other)
        if not other.poly:
            raise ZeroDivisionError("division by zero")
        if not self.poly:
            return self
        num = _Q(self.poly)
        quo, rem = divmod(num, _Q(other.poly))
        if not rem.is_zero() or quo.denom() != 1:
            return None
        return LaurentZ(self.val - other.val, quo.numer())

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentZ.from_int(other)
        elif isinstance(other, RationalQ):
            return RationalQ.coerce(self) == other
        elif not isinstance(other, LaurentZ):
            return NotImplemented
        return self.val == other.val and self.poly == other.poly

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.val, tuple(int(c) for c in self.poly.coeffs())))
        return self._hash

    # -- substitutions ------------------------------------------------------
    def evaluate(self, x):
        """Evaluate at a nonzero number ``x`` (int or Fraction)."""
        x = Fraction(x)
        total = Fraction(0)
        for e, c in self.terms.items():
            total += c * x ** e
        return total

    def at_one(self) -> int:
        return sum(int(c) for c in self.poly.coeffs())

    def subs_power(self, k: int) -> "LaurentZ":
        """Substitute ``q -> q^k`` (``k`` may be negative)."""
        return LaurentZ.from_terms({e * k: c for e, c in self.terms.items()})

    def bar(self) -> "LaurentZ":
        """The involution ``q -> q^-1``."""
        return self.subs_power(-1)

    # -- text ---------------------------------------------------------------
    def __str__(self) -> str:
        if not self.poly:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            parts.append(f"{c}*q^{e}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"LaurentZ({self})"

    def pretty(self) -> str:
        """Human-oriented form, e.g. ``q^2 - 1 + q^-1``."""
        if not self.poly:
            return "0"
        out = []
        for e, c in sorted(self.terms.items(), reverse=True):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == 0:
                body = str(a)
            else:
                qp = "q" if e == 1 else f"q^{e}"
                body = qp if a == 1 else f"{a}*{qp}"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self) -> dict[str, str]:
        return {str(e): str(c) for e, c in sorted(self.terms.items(), reverse=True)}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "LaurentZ":
        return cls.from_terms({int(e): int(c) for e, c in data.items()})

    @classmethod
    def parse(cls, text: str) -> "LaurentZ":
        """Parse the ``c*q^e + ...`` encoding of ``str`` or the ``pretty`` form."""
        compact = text.replace(" ", "")
        if compact == "0":
            return _LZ_ZERO
        terms: dict[int, int] = {}
        pos = 0
        for m in _TERM_RE.finditer(compact):
            if m.start() != pos:
                break
            c, e = int(m.group(1)), int(m.group(2))
            terms[e] = terms.get(e, 0) + c
            pos = m.end()
        if terms and pos == len(compact):
            return cls.from_terms(terms)
        from .cli import parse_scalar  # general scalar grammar

        try:
            val = parse_scalar(text)
        except ValueError as exc:
            raise ValueError(f"bad Laurent encoding: {exc}") from None
        if not isinstance(val, LaurentZ):
            raise ValueError(f"{text!r} is not a Laurent polynomial")
        return val


_LZ_ZERO = LaurentZ(0, _P([]), _raw=True)
_LZ_ONE = LaurentZ(0, _P([1]), _raw=True)
Q = LaurentZ.q_power(1)
QINV = LaurentZ.q_power(-1)


# ---------------------------------------------------------------------------
# RationalQ
# ---------------------------------------------------------------------------


class RationalQ:
    """Element of ``Q(q)`` as a reduced fraction ``num/den`` of integer polynomials.

    Canonical form: ``gcd(num, den) = 1`` in ``Z[q]`` (contents included) and
    the leading coefficient of ``den`` is positive.  Negative powers of ``q``
    live in the denominator.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: flint.fmpz_poly, den: flint.fmpz_poly | None = None, *, _reduced: bool = False):
        if den is None:
            den = _P([1])
        if not _reduced:
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            if num.is_zero():
                den = _P([1])
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = divmod(num, g)[0]
                    den = divmod(den, g)[0]
            if den.leading_coefficient() < 0:
                num, den = -num, -den
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def zero(cls) -> "RationalQ":
        return _RQ_ZERO

    @classmethod
    def one(cls) -> "RationalQ":
        return _RQ_ONE

    @classmethod
    def from_int(cls, c: int) -> "RationalQ":
        return cls(_P([int(c)]), _reduced=True)

    @classmethod
    def from_laurent(cls, x: LaurentZ) -> "RationalQ":
        if x.val >= 0:
            return cls(x.poly.left_shift(x.val), _reduced=True)
        return cls(x.poly, _P([1]).left_shift(-x.val))

    @classmethod
    def from_fraction(cls, f: Fraction) -> "RationalQ":
        return cls(_P([f.numerator]), _P([f.denominator]))

    @classmethod
    def coerce(cls, x) -> "RationalQ":
        if isinstance(x, RationalQ):
            return x
        if isinstance(x, LaurentZ):
            return cls.from_laurent(x)
        if isinstance(x, int):
            return cls.from_int(x)
        if isinstance(x, Fraction):
            return cls.from_fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RationalQ")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "RationalQ":
        if not isinstance(other, RationalQ):
            try:
                other = RationalQ.coerce(other)
            except TypeError:
                return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return RationalQ(self.num + other.num, self.den)
        return RationalQ(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalQ":
        return RationalQ(-self.num, self.den, _reduced=True)

    def __sub__(self, other) -> "RationalQ":
        if not isinstance(other, RationalQ):
            try:
                other = RationalQ.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalQ":
        return RationalQ.coerce(other) - self

    def __mul__(self, other) -> "RationalQ":
        if not isinstance(other, RationalQ):
            try:
                other = RationalQ.coerce(other)
            except TypeError:
                return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return _RQ_ZERO
        if self.den.is_one() and other.den.is_one():
            return RationalQ(self.num * other.num, self.den, _reduced=True)
        return RationalQ(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalQ":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalQ(self.den, self.num)

    def __truediv__(self, other) -> "RationalQ":
        return self * RationalQ.coerce(other).inverse()

    def __rtruediv__(self, other) -> "RationalQ":
        return RationalQ.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "RationalQ":
        if e < 0:
            return self.inverse() ** (-e)
        return RationalQ(self.num ** e, self.den ** e, _reduced=True)

    # -- comparison / conversion -------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalQ):
            try:
                other = RationalQ.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((tuple(int(c) for c in self.num.coeffs()), tuple(int(c) for c in self.den.coeffs())))
        return self._hash

    def is_laurent(self) -> bool:
        """True when the value lies in ``Z[q, q^-1]``."""
        d = self.den
        return int(d.leading_coefficient()) == 1 and d == _P([1]).left_shift(d.degree())

    def to_laurent(self) -> LaurentZ:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return LaurentZ(-self.den.degree(), self.num)

    def at_one(self) -> Fraction:
        d = int(self.den(1))
        if d == 0:
            raise ZeroDivisionError("pole at q = 1")
        return Fraction(int(self.num(1)), d)

    def __str__(self) -> str:
        if self.is_laurent():
            return self.to_laurent().pretty()
        num = LaurentZ(0, self.num).pretty()
        den = LaurentZ(0, self.den).pretty()
        return f"({num})/({den})"

    def __repr__(self) -> str:
        return f"RationalQ({self})"

    def to_json(self):
        if self.is_laurent():
            return self.to_laurent().to_json()
        return {
            "num": LaurentZ(0, self.num).to_json(),
            "den": LaurentZ(0, self.den).to_json(),
        }


_RQ_ZERO = RationalQ(_P([]), _P([1]), _reduced=True)
_RQ_ONE = RationalQ(_P([1]), _P([1]), _reduced=True)


# ---------------------------------------------------------------------------
# Cyclotomic quotient
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _cyclo_poly(ell: int) -> flint.fmpz_poly:
    return _P.cyclotomic(ell)


@lru_cache(maxsize=None)
def _totient(ell: int) -> int:
    return _cyclo_poly(ell).degree()


def _check_ell(ell: int) -> None:
    if ell < 3 or ell % 2 == 0:
        raise ValueError(f"ell must be odd and >= 3, got {ell}")


class CycloZ:
    """Residue class in ``Z[q]/(Phi_ell(q))``; ``q`` maps to a primitive ``ell``-th root."""

    __slots__ = ("ell", "residue")

    def __init__(self, ell: int, residue: Iterable[int]):
        _check_ell(ell)
        residue = tuple(int(c) for c in residue)
        if len(residue) != _totient(ell):
            raise ValueError("residue length must equal the degree of Phi_ell")
        self.ell = ell
        self.residue = residue

    @classmethod
    def _from_poly(cls, ell: int, poly: flint.fmpz_poly) -> "CycloZ":
        phi = _cyclo_poly(ell)
        if poly.degree() >= phi.degree():
            poly = divmod(poly, phi)[1]
        coeffs = [int(c) for c in poly.coeffs()]
        coeffs += [0] * (_totient(ell) - len(coeffs))
        return cls(ell, coeffs)

    def _poly(self) -> flint.fmpz_poly:
        return _P(list(self.residue))

    @classmethod
    def zero_at(cls, ell: int) -> "CycloZ":
        return cls(ell, [0] * _totient(ell))

    @classmethod
    def one_at(cls, ell: int) -> "CycloZ":
        return cls.from_int_at(ell, 1)

    @classmethod
    def from_int_at(cls, ell: int, c: int) -> "CycloZ":
        return cls(ell, [c] + [0] * (_totient(ell) - 1))

    def _lift(self, other) -> "CycloZ":
        if isinstance(other, CycloZ):
            if other.ell != self.ell:
                raise ValueError("mismatched cyclotomic orders")
            return other
        if isinstance(other, int):
            return CycloZ.from_int_at(self.ell, other)
        if isinstance(other, LaurentZ):
            return specialize_eps(other, self.ell)
        raise TypeError(f"cannot coerce {type(other).__name__} to CycloZ")

    def __add__(self, other) -> "CycloZ":
        other = self._lift(other)
        return CycloZ(self.ell, [a + b for a, b in zip(self.residue, other.residue)])

    __radd__ = __add__

    def __neg__(self) -> "CycloZ":
        return CycloZ(self.ell, [-a for a in self.residue])

    def __sub__(self, other) -> "CycloZ":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "CycloZ":
        return self._lift(other) - self

    def __mul__(self, other) -> "CycloZ":
        other = self._lift(other)
        return CycloZ._from_poly(self.ell, self._poly() * other._poly())

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "CycloZ":
        if e < 0:
            raise ValueError("negative powers of a residue are not supported")
        out = CycloZ.one_at(self.ell)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self) -> bool:
        return any(self.residue)

    def is_zero(self) -> bool:
        return not any(self.residue)

    def __eq__(self, other) -> bool:
        try:
            other = self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.residue == other.residue

    def __hash__(self) -> int:
        return hash((self.ell, self.residue))

    def __str__(self) -> str:
        return LaurentZ(0, self._poly()).pretty().replace("q", "e")

    def __repr__(self) -> str:
        return f"CycloZ(ell={self.ell}, {list(self.residue)})"

    def to_json(self) -> dict:
        return {"ell": self.ell, "residue": list(self.residue)}

    @classmethod
    def from_json(cls, data: Mapping) -> "CycloZ":
        return cls(int(data["ell"]), data["residue"])


def cyclotomic(ell: int) -> LaurentZ:
    """The ``ell``-th cyclotomic polynomial as an element of ``Z[q]``."""
    if ell < 1:
        raise ValueError("ell must be positive")
    return LaurentZ(0, _cyclo_poly(ell))


@lru_cache(maxsize=None)
def _qinv_residue(ell: int) -> flint.fmpz_poly:
    # phi(0) = +-1, so q * (phi(q) - phi(0))/q * (-1/phi(0)) = 1 modulo phi.
    phi = _cyclo_poly(ell)
    c0 = int(phi[0])
    inv = -(phi - c0).right_shift(1) * c0
    check = divmod(inv.left_shift(1), phi)[1]
    assert check == _P([1])
    return divmod(inv, phi)[1]


def specialize_eps(x: LaurentZ, ell: int) -> CycloZ:
    """Image of ``x`` in ``Z[q]/(Phi_ell)``; ``q^-1`` goes to the inverse residue of ``q``."""
    _check_ell(ell)
    x = LaurentZ.coerce(x)
    if not x:
        return CycloZ.zero_at(ell)
    phi = _cyclo_poly(ell)
    if x.val >= 0:
        return CycloZ._from_poly(ell, x.poly.left_shift(x.val))
    inv = _qinv_residue(ell)
    scale = divmod(inv ** (-x.val), phi)[1]
    return CycloZ._from_poly(ell, x.poly * scale)


def specialize_one(x: LaurentZ) -> int:
    """Evaluate at ``q = 1``."""
    return LaurentZ.coerce(x).at_one()


# ---------------------------------------------------------------------------
# q-numbers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def qint(n: int) -> LaurentZ:
    """``(n)_q = (q^n - 1)/(q - 1)``; for negative ``n`` this is ``-q^n (-n)_q``."""
    if n >= 0:
        return LaurentZ.from_terms({e: 1 for e in range(n)})
    return LaurentZ.from_terms({e: -1 for e in range(n, 0)})


@lru_cache(maxsize=None)
def qfact(n: int) -> LaurentZ:
    """``(n)_q!``."""
    if n < 0:
        raise ValueError("factorial of a negative integer")
    out = LaurentZ.one()
    for k in range(2, n + 1):
        out = out * qint(k)
    return out


@lru_cache(maxsize=None)
def gauss_binom(n: int, s: int) -> LaurentZ:
    """Gaussian binomial ``(n choose s)_q``.

    For ``n >= 0`` and ``s > n`` the value is zero.  Negative ``n`` is
    delegated to :func:`neg_gauss_binom`.
    """
    if s < 0:
        raise ValueError("lower index must be a natural number")
    if n < 0:
        return neg_gauss_binom(-n, s)
    if s > n:
        return LaurentZ.zero()
    out = qfact(n).divexact(qfact(s) * qfact(n - s))
    assert out is not None
    return out


def gauss_multinom(n: int, *ks: int) -> LaurentZ:
    """Gaussian multinomial ``(n; k_1, ..., k_r)_q``; a remainder part ``n - sum(k)`` is implied."""
    if any(k < 0 for k in ks):
        raise ValueError("multinomial parts must be natural numbers")
    if sum(ks) > n:
        raise ValueError("multinomial parts exceed the total")
    out = LaurentZ.one()
    rest = n
    for k in ks:
        out = out * gauss_binom(rest, k)
        rest -= k
    return out


@lru_cache(maxsize=None)
def neg_gauss_binom(n: int, s: int) -> LaurentZ:
    """``(-n choose s)_q`` for ``n >= 1``.

    Uses ``(-1)^s q^{-ns - C(s,2)} (n-1+s choose s)_q``, which is the value of
    ``prod_{k=1}^{s} (q^{-n-k+1} - 1)/(q^k - 1)``.
    """
    if n < 1 or s < 0:
        raise ValueError("need n >= 1 and s >= 0")
    sign = -1 if s % 2 else 1
    return gauss_binom(n - 1 + s, s).shift(-n * s - comb(s, 2)) * sign


@lru_cache(maxsize=None)
def bal_int(n: int) -> LaurentZ:
    """Balanced ``[n]_q = (q^n - q^-n)/(q - q^-1)``."""
    if n < 0:
        return -bal_int(-n)
    return LaurentZ.from_terms({n - 1 - 2 * k: 1 for k in range(n)})


@lru_cache(maxsize=None)
def bal_fact(n: int) -> LaurentZ:
    """Balanced ``[n]_q!``."""
    if n < 0:
        raise ValueError("factorial of a negative integer")
    out = LaurentZ.one()
    for k in range(2, n + 1):
        out = out * bal_int(k)
    return out


@lru_cache(maxsize=None)
def bal_binom(n: int, s: int) -> LaurentZ:
    """Balanced ``[n over s]_q``; zero when ``s > n``."""
    if n < 0 or s < 0:
        raise ValueError("need natural arguments")
    if s > n:
        return LaurentZ.zero()
    out = bal_fact(n).divexact(bal_fact(s) * bal_fact(n - s))
    assert out is not None
    return out


def bal_from_gauss(n: int, s: int) -> LaurentZ:
    """Bridge identity ``[n over s]_q = q^{-s(n-s)} (n choose s)_{q^2}``."""
    return gauss_binom(n, s).subs_power(2).shift(-s * (n - s))


#: ``q - q^{-1}``, the ubiquitous rescaling factor.
QQ = LaurentZ.from_terms({1: 1, -1: -1})


def laurent(x) -> LaurentZ:
    return LaurentZ.coerce(x)


def rational(x) -> RationalQ:
    return RationalQ.coerce(x)


def dumps_laurent(x: LaurentZ) -> str:
    return json.dumps(x.to_json(), sort_keys=False)


def fmt_coeff(c) -> str:
    """Compact text for any coefficient value (ints, Laurent, rational, cyclotomic)."""
    if isinstance(c, LaurentZ):
        return c.pretty()
    return str(c)


def as_rational(c) -> RationalQ:
    return RationalQ.coerce(c)


def laurent_gcd(a: LaurentZ, b: LaurentZ) -> LaurentZ:
    """A gcd in ``Z[q, q^-1]`` (defined up to a unit; normalized to a positive leading coefficient)."""
    a, b = LaurentZ.coerce(a), LaurentZ.coerce(b)
    if not a:
        return b
    if not b:
        return a
    g = a.poly.gcd(b.poly)
    if g.degree() >= 0 and int(g[g.degree()]) < 0:
        g = -g
    return LaurentZ(0, g)


def laurent_lcm(a: LaurentZ, b: LaurentZ) -> LaurentZ:
    g = laurent_gcd(a, b)
    quo = (LaurentZ.coerce(a) * LaurentZ.coerce(b)).divexact(g)
    assert quo is not None
    return quo
