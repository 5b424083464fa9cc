"""Exact univariate polynomials and rational functions over the rationals.

Coefficients are :class:`fractions.Fraction`; index equals degree.  Rational
functions are kept canonical after every operation: ``gcd(num, den) == 1``
and the denominator is monic.  That makes structural equality coincide with
mathematical equality, which the coefficient tests rely on.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

VARIABLES = ("u", "v", "w", "x")


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, _RationalABC)):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class Poly:
    """Dense polynomial with Fraction coefficients (lowest degree first)."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    # -- construction -----------------------------------------------------
    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def linear_power(cls, a, k: int) -> "Poly":
        """(x + a)**k by the binomial theorem."""
        a = _frac(a)
        out = [Fraction(0)] * (k + 1)
        binom = 1
        for i in range(k + 1):
            out[i] = binom * a ** (k - i)
            binom = binom * (k - i) // (i + 1)
        return cls(out)

    # -- queries ------------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.constant(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = _frac(other)
            if c == 0:
                return Poly()
            return Poly(c * x for x in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.constant(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv = 1 / other.lead
        if len(rem) - 1 < dq:
            return Poly(), self
        quo = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv
            if c:
                quo[k - dq] = c
                for i, b in enumerate(other.coeffs):
                    rem[k - dq + i] -= c * b
        return Poly(quo), Poly(rem[:dq])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = 1 / self.lead
        return Poly(c * inv for c in self.coeffs)

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive integral (sign kept on the quotient)."""
        if self.is_zero():
            return Fraction(0)
        from math import gcd, lcm

        num = 0
        den = 1
        for c in self.coeffs:
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    def derivative(self) -> "Poly":
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)

    def scale_arg(self, s) -> "Poly":
        """p(s*x)."""
        s = _frac(s)
        return Poly(c * s**k for k, c in enumerate(self.coeffs))

    def reverse(self, degree: int | None = None) -> "Poly":
        """x**degree * p(1/x)."""
        d = self.degree if degree is None else degree
        cs = list(self.coeffs) + [Fraction(0)] * (d + 1 - len(self.coeffs))
        return Poly(reversed(cs[: d + 1]))

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate(self, x, convert=None):
        """Horner evaluation; ``convert`` maps each Fraction into x's number type."""
        if convert is None:
            return self(x)
        acc = convert(0)
        for c in reversed(self.coeffs):
            acc = acc * x + convert(c)
        return acc

    def to_string(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm over Q."""
    while not b.is_zero():
        a, b = b, a % b.monic()
    return a.monic()


_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\*?)?(?:([a-z])(?:\^(\d+))?)?$")


def parse_poly(text: str, var: str) -> Poly:
    """Inverse of :meth:`Poly.to_string`."""
    s = text.replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if s == "0":
        return Poly()
    if not s.startswith(("+", "-")):
        s = "+" + s
    out: dict[int, Fraction] = {}
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        m = _TERM.match(body)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"cannot parse term {body!r}")
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        if m.group(2) is None:
            k = 0
        else:
            if m.group(2) != var:
                raise ValueError(f"term {body!r} is not in variable {var!r}")
            k = int(m.group(3)) if m.group(3) else 1
        out[k] = out.get(k, Fraction(0)) + (coef if sign == "+" else -coef)
    deg = max(out) if out else -1
    return Poly(out.get(k, 0) for k in range(deg + 1))


class RationalFunction:
    """Canonical quotient num/den of polynomials in one named variable."""

    __slots__ = ("num", "den", "var")

    def __init__(self, num, den=None, var: str = "v", *, _normalized: bool = False):
        if var not in VARIABLES:
            raise ValueError(f"unknown variable tag {var!r}")
        if not isinstance(num, Poly):
            num = Poly.constant(num)
        if den is None:
            den = Poly.constant(1)
        elif not isinstance(den, Poly):
            den = Poly.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            if num.is_zero():
                den = Poly.constant(1)
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num.exact_div(g), den.exact_div(g)
                lc = den.lead
                if lc != 1:
                    num, den = num * (1 / lc), den * (1 / lc)
        self.num = num
        self.den = den
        self.var = var

    # -- construction -----------------------------------------------------
    @classmethod
    def constant(cls, c, var: str = "v") -> "RationalFunction":
        return cls(Poly.constant(c), Poly.constant(1), var, _normalized=True)

    @classmethod
    def variable(cls, var: str = "v") -> "RationalFunction":
        return cls(Poly.monomial(1), Poly.constant(1), var, _normalized=True)

    @classmethod
    def from_poly(cls, p: Poly, var: str = "v") -> "RationalFunction":
        return cls(p, Poly.constant(1), var, _normalized=True)

    @classmethod
    def parse(cls, text: str) -> "RationalFunction":
        """Parse the canonical ``(num) / (den)`` form produced by :meth:`canonical`."""
        m = re.fullmatch(r"\s*\[(\w)\]\s*(.*)", text)
        if not m:
            raise ValueError("canonical form must start with the variable tag, e.g. '[w] ...'")
        var, body = m.group(1), m.group(2)
        depth = 0
        split = None
        for i, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "/" and depth == 0:
                split = i
        if split is None:
            raise ValueError("canonical form needs a top-level ' / '")
        return cls(parse_poly(body[:split].strip(), var), parse_poly(body[split + 1 :].strip(), var), var)

    # -- helpers ------------------------------------------------------------
    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.var != self.var and not (other.is_constant() or self.is_constant()):
                raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        if isinstance(other, Poly):
            return RationalFunction.from_poly(other, self.var)
        return RationalFunction.constant(_frac(other), self.var)

    def _var_with(self, other: "RationalFunction") -> str:
        return self.var if not self.is_constant() else other.var

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def with_var(self, var: str) -> "RationalFunction":
        return RationalFunction(self.num, self.den, var, _normalized=True)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        var = self._var_with(o)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den, var)
        g = poly_gcd(self.den, o.den)
        if g.degree == 0:
            return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den, var)
        a, b = self.den.exact_div(g), o.den.exact_div(g)
        return RationalFunction(self.num * b + o.num * a, a * o.den, var)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, self.var, _normalized=True)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    def __mul__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        var = self._var_with(o)
        if o.is_constant():
            c = o.num[0]
            if c == 0:
                return RationalFunction.constant(0, var)
            return RationalFunction(self.num * c, self.den, var, _normalized=True)
        if self.is_constant():
            return o * self
        # cross-cancel first so the final gcd works on smaller operands
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1, d2 = (self.num.exact_div(g1), o.den.exact_div(g1)) if g1.degree > 0 else (self.num, o.den)
        n2, d1 = (o.num.exact_div(g2), self.den.exact_div(g2)) if g2.degree > 0 else (o.num, self.den)
        return RationalFunction(n1 * n2, d1 * d2, var, _normalized=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num, self.var)

    def __truediv__(self, other) -> "RationalFunction":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "RationalFunction":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num**k, self.den**k, self.var, _normalized=True)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Poly)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        same_var = self.var == other.var or (self.is_constant() and other.is_constant())
        return same_var and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- evaluation & output ----------------------------------------------
    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            return self.num(Fraction(x)) / self.den(Fraction(x))
        return self.num.evaluate(x, type(x)) / self.den.evaluate(x, type(x))

    def evaluate(self, x, convert) -> object:
        """Evaluate at a non-exact point; ``convert`` turns Fractions into x's type."""
        return self.num.evaluate(x, convert) / self.den.evaluate(x, convert)

    def degree(self) -> int:
        """Degree at infinity: deg(num) - deg(den)."""
        if self.is_zero():
            return -(10**9)
        return self.num.degree - self.den.degree

    def canonical(self) -> str:
        """Stable text form ``[var] (num) / (den)`` with p/q coefficients."""
        return f"[{self.var}] ({self.num.to_string(self.var)}) / ({self.den.to_string(self.var)})"

    def pretty(self) -> str:
        """Human form, e.g. ``-(w^4 + 66*w^3 + 53*w^2 - 8)/(192*(w+1)^3)``."""
        var = self.var
        if self.is_zero():
            return "0"
        den = self.den
        factors = []
        for shift, label in ((0, var), (1, f"({var}+1)")):
            base = Poly((shift, 1))
            k = 0
            while den.degree > 0:
                q, r = den.divmod(base)
                if not r.is_zero():
                    break
                den, k = q, k + 1
            if k:
                factors.append(label if k == 1 else f"{label}^{k}")
        cn, cd = self.num.content(), den.content()
        top, rest = self.num * (1 / cn), den * (1 / cd)
        scale = cn / cd
        sign = ""
        if top.lead < 0:
            top, sign = -top, "-"
        top = top * scale.numerator
        if scale.denominator != 1:
            factors.insert(0, str(scale.denominator))
        if rest.degree > 0:
            factors.append(f"({rest.to_string(var)})")
        top_s = top.to_string(var)
        if not factors:
            return sign + top_s
        if len(top.coeffs) - top.coeffs.count(0) > 1:
            top_s = f"({top_s})"
        den_s = "*".join(factors)
        if len(factors) > 1:
            den_s = f"({den_s})"
        return f"{sign}{top_s}/{den_s}"

    def __repr__(self) -> str:
        return f"RationalFunction({self.canonical()!r})"


def rf_sum(terms: Sequence[RationalFunction], var: str) -> RationalFunction:
    total = RationalFunction.constant(0, var)
    for t in terms:
        total = total + t
    return total
