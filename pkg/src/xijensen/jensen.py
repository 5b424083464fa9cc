"""Jensen-type polynomial families built from gamma(n) and their hyperbolicity.

Coefficients are either exact rationals (Hermite, Laguerre, or J/P/Q built
from rational stand-ins for gamma) or intervals carrying the certified error
radius of each oracle value.  :func:`certify_hyperbolic` counts real roots
with a Sturm sequence, exactly in the first case and in interval arithmetic in
the second.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

from .coefficients import gen_binomial
from .errors import InputError
from .polynomial import Poly, poly_gcd

DEFAULT_BITS = 256

CERTIFIED_REAL = "certified-real-rooted"
CERTIFIED_NONREAL = "certified-has-nonreal-root"
UNDECIDED = "undecided"


def _iv_context(bits: int) -> MPIntervalContext:
    iv = MPIntervalContext()
    iv.prec = bits
    return iv


def _ends(x):
    """Interval endpoints as raw libmp values (no rounding)."""
    return x._mpi_


def _sign(x):
    """+1, -1, 0 (exactly zero) or None (interval straddles 0)."""
    lo, hi = _ends(x)
    if libmp.mpf_sign(lo) > 0:
        return 1
    if libmp.mpf_sign(hi) < 0:
        return -1
    if lo == libmp.fzero and hi == libmp.fzero:
        return 0
    return None


def _certainly_less(x, y) -> bool:
    """Every point of interval x lies below every point of interval y."""
    return libmp.mpf_lt(_ends(x)[1], _ends(y)[0])


def _mid_rad(x):
    lo, hi = (mpmath.mpf(e) for e in _ends(x))
    return (lo + hi) / 2, (hi - lo) / 2


def _is_exact_zero(x) -> bool:
    return _sign(x) == 0


class RealPoly:
    """Real polynomial, coefficients low to high.

    ``exact`` holds a rational :class:`Poly` when all coefficients are known
    exactly; ``coeffs`` always holds interval enclosures at ``bits`` precision.
    """

    def __init__(self, coeffs, bits: int, exact: Poly | None = None):
        self.bits = bits
        self.iv = _iv_context(bits)
        cs = [self.iv.mpf(c) if not _is_interval(c) else c for c in coeffs]
        while cs and _is_exact_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)
        self.exact = exact

    @classmethod
    def from_exact(cls, p: Poly, bits: int = DEFAULT_BITS) -> "RealPoly":
        iv = _iv_context(bits)
        return cls([_iv_fraction(c, iv) for c in p.coeffs], bits, p)

    @property
    def degree(self) -> int:
        if self.exact is not None:
            return self.exact.degree
        return len(self.coeffs) - 1

    def is_exact(self) -> bool:
        return self.exact is not None

    def midpoints(self) -> list:
        return [c.mid for c in self.coeffs]

    def radii(self) -> list:
        return [c.delta / 2 for c in self.coeffs]

    def leading_excludes_zero(self) -> bool:
        return bool(self.coeffs) and _sign(self.coeffs[-1]) not in (None, 0)

    def with_bits(self, bits: int) -> "RealPoly":
        return RealPoly(self.coeffs, bits, self.exact)

    def derivative(self) -> "RealPoly":
        if self.exact is not None:
            return RealPoly.from_exact(self.exact.derivative(), self.bits)
        return RealPoly([c * k for k, c in enumerate(self.coeffs)][1:], self.bits)

    def __call__(self, x):
        acc = self.iv.mpf(0)
        x = self.iv.mpf(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        if self.exact is not None:
            return f"RealPoly({self.exact.to_string('x')})"
        return f"RealPoly(degree={self.degree}, bits={self.bits})"


def _is_interval(x) -> bool:
    return hasattr(x, "_mpi_")


def _iv_fraction(c: Fraction, iv):
    c = Fraction(c)
    if c.denominator == 1:
        return iv.mpf(c.numerator)
    return iv.mpf(c.numerator) / c.denominator


# ---------------------------------------------------------------------------
# classical families


def hermite(d: int) -> RealPoly:
    """Physicists' Hermite polynomial d! sum_r (-1)^r (2X)^(d-2r) / (r! (d-2r)!)."""
    return RealPoly.from_exact(hermite_exact(d))


def hermite_exact(d: int) -> Poly:
    if d < 0:
        raise InputError("hermite needs d >= 0")
    out = Poly()
    for r in range(d // 2 + 1):
        c = Fraction(math.factorial(d) * (-1) ** r * 2 ** (d - 2 * r), math.factorial(r) * math.factorial(d - 2 * r))
        out = out + Poly.monomial(d - 2 * r, c)
    return out


def laguerre(d: int, alpha) -> RealPoly:
    return RealPoly.from_exact(laguerre_exact(d, alpha))


def laguerre_exact(d: int, alpha) -> Poly:
    """L_d^(alpha)(x) = sum_k binom(d+alpha, d-k) (-1)^k x^k / k!, alpha rational."""
    if d < 0:
        raise InputError("laguerre needs d >= 0")
    alpha = _rational(alpha)
    out = Poly()
    for k in range(d + 1):
        c = gen_binomial(d + alpha, d - k) * Fraction((-1) ** k, math.factorial(k))
        out = out + Poly.monomial(k, c)
    return out


def _rational(x) -> Fraction:
    if isinstance(x, float):
        raise InputError("alpha must be rational (int, Fraction or 'p/q' string)")
    return Fraction(x)


# ---------------------------------------------------------------------------
# gamma inputs


@dataclass(frozen=True)
class _Coef:
    """A real coefficient: exact Fraction or (midpoint, radius) pair."""

    exact: Fraction | None = None
    mid: object = None
    rad: object = None

    def interval(self, iv):
        if self.exact is not None:
            return _iv_fraction(self.exact, iv)
        m, r = iv.mpf(self.mid), iv.mpf(self.rad)
        return iv.mpf([(m - r).a, (m + r).b])


def _as_coef(value) -> _Coef:
    if isinstance(value, (int, Fraction)):
        return _Coef(exact=Fraction(value))
    # values are kept as given: re-wrapping an mpf would round it to the global precision
    if hasattr(value, "value") and hasattr(value, "error"):
        return _Coef(mid=value.value, rad=value.error)
    if isinstance(value, tuple) and len(value) == 2:
        return _Coef(mid=value[0], rad=value[1])
    return _Coef(mid=value, rad=0)


def gamma_table(gammas, n: int, d: int) -> list[_Coef]:
    """gamma(n), ..., gamma(n+d) from a mapping n -> value or a sequence of OracleResults."""
    if isinstance(gammas, Mapping):
        lookup = gammas
    elif isinstance(gammas, Sequence):
        lookup = {g.n: g for g in gammas}
    else:
        raise InputError("gammas must be a mapping or a sequence of oracle results")
    missing = [k for k in range(n, n + d + 1) if k not in lookup]
    if missing:
        raise InputError(f"missing gamma values for n = {missing}")
    return [_as_coef(lookup[k]) for k in range(n, n + d + 1)]


def _bits_for(table: list[_Coef]) -> int:
    best = DEFAULT_BITS
    for c in table:
        if c.exact is None and c.rad and c.mid:
            rel = abs(mpmath.mpf(c.rad) / mpmath.mpf(c.mid))
            if rel > 0:
                best = max(best, int(-mpmath.log(rel, 2)) + 64)
    return best


def _combine(scalars: list, table: list[_Coef], polys: list[Poly], bits: int | None = None) -> RealPoly:
    """sum_j scalars[j] * table[j] * polys[j]; exact when every table entry is."""
    if all(c.exact is not None for c in table):
        out = Poly()
        for s, c, p in zip(scalars, table, polys):
            if s:
                out = out + p * (Fraction(s) * c.exact)
        return RealPoly.from_exact(out, bits or DEFAULT_BITS)
    bits = bits or _bits_for(table)
    iv = _iv_context(bits)
    deg = max(p.degree for p in polys)
    acc = [None] * (deg + 1)
    for s, c, p in zip(scalars, table, polys):
        if not s:
            continue
        weight = c.interval(iv) * _iv_fraction(s, iv)
        for k, pk in enumerate(p.coeffs):
            if pk == 0:
                continue  # keeps structural zeros exact
            term = weight * _iv_fraction(pk, iv)
            acc[k] = term if acc[k] is None else acc[k] + term
    return RealPoly([iv.mpf(0) if a is None else a for a in acc], bits)


def jensen_J(d: int, n: int, gammas, bits: int | None = None) -> RealPoly:
    """J^(d,n)(X) = sum_j binom(d, j) gamma(n+j) X^j."""
    _check_dn(d, n)
    table = gamma_table(gammas, n, d)
    return _combine([math.comb(d, j) for j in range(d + 1)], table, [Poly.monomial(j) for j in range(d + 1)], bits)


def jensen_P(d: int, n: int, gammas, bits: int | None = None) -> RealPoly:
    """P^(d,n)(X) = sum_j binom(d, j) gamma(n+j) H_(d-j)(X)."""
    _check_dn(d, n)
    table = gamma_table(gammas, n, d)
    return _combine([math.comb(d, j) for j in range(d + 1)], table, [hermite_exact(d - j) for j in range(d + 1)], bits)


def jensen_Q(d: int, n: int, alpha, gammas, bits: int | None = None) -> RealPoly:
    """Q^(d,n,alpha)(x) = sum_j binom(d+alpha, j) gamma(n+j) x^j L^(alpha)_(d-j)(x), alpha >= -2."""
    _check_dn(d, n)
    alpha = _rational(alpha)
    if alpha < -2:
        raise InputError("jensen_Q is defined here for alpha >= -2")
    table = gamma_table(gammas, n, d)
    scalars = [gen_binomial(d + alpha, j) for j in range(d + 1)]
    polys = [Poly.monomial(j) * laguerre_exact(d - j, alpha) for j in range(d + 1)]
    return _combine(scalars, table, polys, bits)


def _check_dn(d: int, n: int) -> None:
    if d < 1 or n < 0:
        raise InputError("need d >= 1 and n >= 0")


# ---------------------------------------------------------------------------
# Jensen polynomials of formal power series Phi(z) = sum c_j z^j / j!


def jensen_g(c: Sequence, d: int) -> Poly:
    """g_d(Phi; x) = sum_j binom(d, j) c_j x^j."""
    _need(c, d)
    return sum((Poly.monomial(j, math.comb(d, j) * Fraction(c[j])) for j in range(d + 1)), Poly())


def jensen_g_star(c: Sequence, d: int) -> Poly:
    """Reciprocal x^d g_d(Phi; 1/x) = sum_j binom(d, j) c_j x^(d-j)."""
    _need(c, d)
    return sum((Poly.monomial(d - j, math.comb(d, j) * Fraction(c[j])) for j in range(d + 1)), Poly())


def _need(c: Sequence, d: int) -> None:
    if d < 0 or len(c) < d + 1:
        raise InputError(f"need coefficients c_0..c_{d}")


def series_product(c: Sequence, o: Sequence, m: int) -> list[Fraction]:
    """Coefficients (in the z^k/k! normalization) of the product, up to index m."""
    return [sum(math.comb(k, j) * Fraction(c[j]) * Fraction(o[k - j]) for j in range(k + 1)) for k in range(m + 1)]


def gauss_series(m: int) -> list[Fraction]:
    """exp(-z^2) = sum o_k z^k / k!: o_2k = (-1)^k (2k)!/k!, odd terms 0."""
    return [Fraction((-1) ** (k // 2) * math.factorial(k), math.factorial(k // 2)) if k % 2 == 0 else Fraction(0) for k in range(m + 1)]


@dataclass(frozen=True)
class ProductJensen:
    """Both sides of the product rule for g*_d; ``direct`` from the product series."""

    direct: Poly
    combined: Poly

    def agree(self) -> bool:
        return self.direct == self.combined


def jensen_of_product(phi: Sequence, omega: Sequence, d: int, reciprocal: bool = True) -> ProductJensen:
    """g*_d(Phi*Omega) two ways: from the product coefficients and as
    sum_j binom(d, j) c_j g*_(d-j)(Omega).  With ``reciprocal=False`` the
    non-reciprocal form sum_j binom(d, j) c_j x^j g_(d-j)(Omega) is used.
    """
    _need(phi, d)
    _need(omega, d)
    prod = series_product(phi, omega, d)
    if reciprocal:
        direct = jensen_g_star(prod, d)
        combined = sum(
            (jensen_g_star(omega, d - j) * (math.comb(d, j) * Fraction(phi[j])) for j in range(d + 1)), Poly()
        )
    else:
        direct = jensen_g(prod, d)
        combined = sum(
            (Poly.monomial(j) * jensen_g(omega, d - j) * (math.comb(d, j) * Fraction(phi[j])) for j in range(d + 1)),
            Poly(),
        )
    return ProductJensen(direct, combined)


# ---------------------------------------------------------------------------
# hyperbolicity


@dataclass(frozen=True)
class HyperbolicityVerdict:
    status: str
    real_root_count: int | None
    precision_used: int  # bits; 0 for an exact decision
    degree: int
    note: str = ""

    @property
    def certified(self) -> bool:
        return self.status != UNDECIDED

    @property
    def real_rooted(self) -> bool:
        return self.status == CERTIFIED_REAL


def _square_free_parts(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: p = lead * prod a_i^i with a_i square-free, coprime."""
    out = []
    a = p.monic()
    b = a.derivative()
    g = poly_gcd(a, b)
    c = a // g
    dpart = b // g - c.derivative()
    i = 1
    while c.degree > 0:
        h = poly_gcd(c, dpart)
        if h.degree > 0:
            out.append((h, i))
        c = c // h
        dpart = dpart // h - c.derivative()
        i += 1
    return out


def _sturm_count_exact(p: Poly) -> int:
    """Distinct real roots of a polynomial with rational coefficients."""
    if p.degree <= 0:
        return 0
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        r = -(chain[-2] % chain[-1])
        if r.is_zero():
            break
        chain.append(r)
    return _variations_at_infinity([(q.lead > 0) - (q.lead < 0) for q in chain], [q.degree for q in chain])


def _variations_at_infinity(leading_signs: list[int], degrees: list[int]) -> int:
    def var(signs):
        s = [x for x in signs if x]
        return sum(1 for a, b in zip(s, s[1:]) if a != b)

    plus = var(leading_signs)
    minus = var([sg * (-1) ** dg for sg, dg in zip(leading_signs, degrees)])
    return minus - plus


def _certify_exact(p: Poly) -> HyperbolicityVerdict:
    if p.is_zero():
        raise InputError("zero polynomial")
    deg = p.degree
    if deg == 0:
        return HyperbolicityVerdict(CERTIFIED_REAL, 0, 0, 0)
    real = sum(mult * _sturm_count_exact(part) for part, mult in _square_free_parts(p))
    status = CERTIFIED_REAL if real == deg else CERTIFIED_NONREAL
    return HyperbolicityVerdict(status, real, 0, deg)


def _iv_rem(a: list, b: list, iv) -> list:
    """Remainder of a by b; the cancelled top coefficients are set to exact 0."""
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    for k in range(len(r) - 1, db - 1, -1):
        q = r[k] / lead
        for i in range(db):
            r[k - db + i] = r[k - db + i] - q * b[i]
        r[k] = iv.mpf(0)
    out = r[:db]
    while out and _is_exact_zero(out[-1]):
        out.pop()
    return out


def _certify_intervals(p: RealPoly, bits: int) -> HyperbolicityVerdict:
    iv = _iv_context(bits)
    cs = [iv.mpf(c) for c in p.coeffs]
    deg = len(cs) - 1
    if deg < 0:
        raise InputError("zero polynomial")
    if _sign(cs[-1]) is None:
        return HyperbolicityVerdict(UNDECIDED, None, bits, deg, "leading coefficient not separated from 0")
    zeros_at_origin = 0
    while len(cs) > 1 and _is_exact_zero(cs[0]):
        cs.pop(0)
        zeros_at_origin += 1
    core_deg = len(cs) - 1
    if core_deg <= 1:
        return HyperbolicityVerdict(CERTIFIED_REAL, deg, bits, deg)
    chain = [cs, [c * k for k, c in enumerate(cs)][1:]]
    while len(chain[-1]) > 1:
        r = _iv_rem(chain[-2], chain[-1], iv)
        if not r:
            return HyperbolicityVerdict(UNDECIDED, None, bits, deg, "repeated root suspected")
        if _sign(r[-1]) is None:
            return HyperbolicityVerdict(UNDECIDED, None, bits, deg, "Sturm remainder not separated from 0")
        chain.append([-c for c in r])
    signs = [_sign(q[-1]) for q in chain]
    degrees = [len(q) - 1 for q in chain]
    distinct = _variations_at_infinity(signs, degrees)
    # the chain ends in a nonzero constant, so the core polynomial is square-free
    status = CERTIFIED_REAL if distinct == core_deg else CERTIFIED_NONREAL
    return HyperbolicityVerdict(status, distinct + zeros_at_origin, bits, deg)


def certify_hyperbolic(p: RealPoly, max_precision: int = 4096, rebuild=None) -> HyperbolicityVerdict:
    """Decide whether all roots of ``p`` are real.

    Exact polynomials are decided exactly (repeated roots allowed).  Interval
    polynomials use an interval Sturm chain; on an undecided outcome the
    working precision is doubled, and ``rebuild(bits)`` (when given) is asked
    for tighter input coefficients, until ``max_precision`` bits.
    """
    if p.is_exact():
        return _certify_exact(p.exact)
    bits = p.bits
    while True:
        verdict = _certify_intervals(p, bits)
        if verdict.certified or 2 * bits > max_precision:
            return verdict
        bits *= 2
        if rebuild is not None:
            p = rebuild(bits)


# ---------------------------------------------------------------------------
# Turan-type criteria


@dataclass(frozen=True)
class TuranSum:
    value: object  # midpoint of the enclosure of S
    upper: object
    flag: bool  # S < 1 certified: P^(d,n) has real simple roots


def turan_sufficient(d: int, n: int, gammas) -> TuranSum:
    """S = sum_(j=2..d) d/(2^j j!) binom(d, j) gamma(n+j)^2 / gamma(n)^2, flag S < 1."""
    _check_dn(d, n)
    table = gamma_table(gammas, n, d)
    iv = _iv_context(_bits_for(table))
    g0 = table[0].interval(iv)
    s = iv.mpf(0)
    for j in range(2, d + 1):
        ratio = table[j].interval(iv) / g0
        s += _iv_fraction(Fraction(d * math.comb(d, j), 2**j * math.factorial(j)), iv) * ratio * ratio
    mid, rad = _mid_rad(s)
    return TuranSum(mid, mid + rad, _certainly_less(s, iv.mpf(1)))


def turan_hermite_condition(coeffs: Sequence) -> bool | None:
    """The Hermite-expansion test sum_(j<=d-2) 2^j j! c_j^2 < 2^d (d-1)! c_d^2 for G = sum c_j H_j.

    Coefficients are exact or interval-like (_Coef inputs); None if undecided.
    """
    d = len(coeffs) - 1
    table = [_as_coef(c) if not isinstance(c, _Coef) else c for c in coeffs]
    iv = _iv_context(_bits_for(table))
    cs = [c.interval(iv) for c in table]
    lhs = iv.mpf(0)
    for j in range(d - 1):
        lhs += 2**j * math.factorial(j) * cs[j] * cs[j]
    rhs = 2**d * math.factorial(d - 1) * cs[d] * cs[d]
    diff = rhs - lhs
    sg = _sign(diff)
    return None if sg is None else sg > 0


def gamma_ratio_bound_check(n: int, j: int, c, gammas) -> bool:
    """Whether gamma(n+j)/gamma(n) < 1.01 (3 c^2 log(n)^2 / (16 n))^j holds (certified)."""
    if n < 2 or j < 0:
        raise InputError("need n >= 2, j >= 0")
    if c < 1:
        raise InputError("need c >= 1")
    if j == 0:
        return True
    table = gamma_table_sparse(gammas, [n, n + j])
    iv = _iv_context(_bits_for(table))
    ratio = table[1].interval(iv) / table[0].interval(iv)
    cc = iv.mpf(c) if not isinstance(c, Fraction) else _iv_fraction(c, iv)
    bound = iv.mpf(101) / 100 * (3 * cc * cc * iv.log(n) ** 2 / (16 * n)) ** j
    return _certainly_less(ratio, bound)


def gamma_table_sparse(gammas, indices) -> list[_Coef]:
    lookup = gammas if isinstance(gammas, Mapping) else {g.n: g for g in gammas}
    missing = [k for k in indices if k not in lookup]
    if missing:
        raise InputError(f"missing gamma values for n = {missing}")
    return [_as_coef(lookup[k]) for k in indices]
