"""Exact coefficient families of the Laplace-method expansions.

Every family is returned as a canonical :class:`RationalFunction` (or
:class:`Poly` / ``Fraction`` where the object is polynomial or scalar).
Variable tags follow the expansions they feed: ``u`` for the log-series
coefficients and the e_r family, ``v`` for the a_r families, ``w`` for the
xi / Turan / gamma corrections.

All generators are pure and memoized; the memo tolerates concurrent readers
and serializes inserts.
"""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .bell import bell_partial_ordinary
from .errors import InputError
from .polynomial import Poly, RationalFunction

LOG_SERIES_LEN = 64
# coefficients of log(1 + x): 1, -1/2, 1/3, ...
LOG_SERIES = tuple(Fraction((-1) ** (k + 1), k) for k in range(1, LOG_SERIES_LEN + 1))


def memoized(fn):
    cache: dict = {}
    lock = threading.Lock()

    @functools.wraps(fn)
    def wrapper(*args):
        try:
            return cache[args]
        except KeyError:
            pass
        value = fn(*args)
        with lock:
            return cache.setdefault(args, value)

    wrapper.cache = cache
    return wrapper


def odd_double_factorial(k: int) -> int:
    """(2k-1)!! with the convention (-1)!! = 1."""
    out = 1
    for t in range(1, 2 * k, 2):
        out *= t
    return out


def gen_binomial(top: Fraction, m: int) -> Fraction:
    """binom(top, m) for rational top, as a falling factorial over m!."""
    if m < 0:
        return Fraction(0)
    top = Fraction(top)
    out = Fraction(1)
    for k in range(m):
        out *= top - k
    return out / factorial(m)


def _log_bell(i: int, j: int) -> Fraction:
    return bell_partial_ordinary(i, j, LOG_SERIES)


# ---------------------------------------------------------------------------
# Laurent-polynomial scratch arithmetic (exponent -> coefficient).  Used only
# to accumulate sums over a common denominator before one final reduction.


def _laurent_mul(a: dict, b: dict) -> dict:
    out: dict[int, Fraction] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: c for k, c in out.items() if c}


def _laurent_add(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + scale * c
    return {k: c for k, c in out.items() if c}


def _laurent_from_poly(p: Poly, sign: int = 1) -> dict:
    return {sign * k: c for k, c in enumerate(p.coeffs) if c}


def _laurent_to_rf(num: dict, den: Poly, var: str) -> RationalFunction:
    if not num:
        return RationalFunction.constant(0, var)
    low = min(num)
    shift = -low if low < 0 else 0
    top = Poly(num.get(k - shift, 0) for k in range(max(num) + shift + 1))
    return RationalFunction(top, den * Poly.monomial(shift), var)


# ---------------------------------------------------------------------------
# log(1 + log(1+x)/u) coefficients


@memoized
def _ell_in_s(i: int) -> Poly:
    """l_i as a polynomial in s = 1/u."""
    cs = [Fraction(0)] * (i + 1)
    for j in range(1, i + 1):
        cs[j] = _log_bell(i, j) * Fraction((-1) ** (j + 1), j)
    return Poly(cs)


@memoized
def ell_coeff(i: int) -> RationalFunction:
    """l_i(u): coefficient of x**i in log(1 + log(1+x)/u)."""
    if i < 1:
        raise InputError("ell_coeff needs i >= 1")
    s = _ell_in_s(i)
    return _laurent_to_rf(_laurent_from_poly(s, -1), Poly.constant(1), "u")


@memoized
def _bell_of_ells(i: int, j: int) -> Poly:
    """B-hat_{i,j}(l_3, l_4, ...) as a polynomial in s = 1/v."""
    seq = [_ell_in_s(k) for k in range(3, max(i - j + 1, 1) + 3)]
    out = bell_partial_ordinary(i, j, seq)
    return out if isinstance(out, Poly) else Poly.constant(out)


# ---------------------------------------------------------------------------
# suitable weight functions


@dataclass(frozen=True)
class SuitableFn:
    """Weight f(t) = t**beta, optionally times exp(-(log t)**2 / 16).

    ``coeff(m)`` is f_m(v), the x**m coefficient of f(t(1+x))/f(t) at t = e**v.
    """

    beta: Fraction = Fraction(0)
    gauss: bool = False

    def __post_init__(self):
        object.__setattr__(self, "beta", Fraction(self.beta))

    @property
    def kind(self) -> str:
        return "power-times-gauss" if self.gauss else "power"

    @property
    def growth(self) -> int:
        """The lambda of the suitability definition: deg f_m <= growth*m."""
        return 1 if self.gauss else 0

    def coeff(self, m: int) -> Poly:
        return _suitable_coeff(self, m)

    def is_unit(self) -> bool:
        return self.beta == 0 and not self.gauss

    def log_at(self, v, mp):
        """log f(e**v) evaluated in the mpmath context ``mp``."""
        out = mp.mpf(self.beta.numerator) / self.beta.denominator * v
        if self.gauss:
            out -= v * v / 16
        return out

    def label(self) -> str:
        base = f"t^{self.beta}"
        return base + "*gauss" if self.gauss else base

    @classmethod
    def parse(cls, text: str) -> "SuitableFn":
        """Parse ``power:5/4`` or ``gauss:5/4``."""
        kind, _, beta = text.partition(":")
        if kind not in ("power", "gauss") or not beta:
            raise InputError(f"bad weight descriptor {text!r}; use power:BETA or gauss:BETA")
        return cls(Fraction(beta), kind == "gauss")


UNIT = SuitableFn()


@memoized
def pq_coeffs(i: int) -> tuple[Poly, Fraction]:
    """(p_i(v), q_i) for exp(-(v/8) log(1+x)) and exp(-log(1+x)**2/16)."""
    if i < 0:
        raise InputError("pq_coeffs needs i >= 0")
    p = Poly()
    for j in range(i + 1):
        c = _log_bell(i, j) * Fraction((-1) ** j, 8**j * factorial(j))
        p = p + Poly.monomial(j, c)
    q = Fraction(0)
    for j in range(i // 2 + 1):
        q += _log_bell(i, 2 * j) * Fraction((-1) ** j, 16**j * factorial(j))
    return p, q


@memoized
def _suitable_coeff(f: SuitableFn, m: int) -> Poly:
    if m < 0:
        return Poly()
    if not f.gauss:
        return Poly.constant(gen_binomial(f.beta, m))
    out = Poly()
    for j1 in range(m + 1):
        b = gen_binomial(f.beta, j1)
        if b == 0:
            continue
        for j2 in range(m - j1 + 1):
            p, _ = pq_coeffs(j2)
            _, q = pq_coeffs(m - j1 - j2)
            if q:
                out = out + p * (b * q)
    return out


# ---------------------------------------------------------------------------
# a_r(v) and a_r(f; v)

_RATIO_DEN = Poly((1, 1))  # v + 1


@memoized
def a_coeff(r: int) -> RationalFunction:
    """a_r(v) of the plain Laplace expansion of int (log t)**n e**(-alpha t) dt."""
    if r < 0:
        raise InputError("a_coeff needs r >= 0")
    num: dict = {}
    for j in range(2 * r + 1):
        b = _bell_of_ells(2 * r, j)
        if b.is_zero():
            continue
        coef = Fraction(odd_double_factorial(j + r), factorial(j))
        term = _laurent_from_poly(b, -1)
        term = _laurent_mul(term, {2 * (j + r): coef})
        term = _laurent_mul(term, _laurent_from_poly(_RATIO_DEN ** (2 * r - j)))
        num = _laurent_add(num, term)
    return _laurent_to_rf(num, _RATIO_DEN ** (3 * r), "v")


@memoized
def a_coeff_f(r: int, f: SuitableFn) -> RationalFunction:
    """a_r(f; v) for the weighted integral int (log t)**n e**(-alpha t) f(t) dt."""
    if r < 0:
        raise InputError("a_coeff_f needs r >= 0")
    num: dict = {}
    for j in range(2 * r + 1):
        inner: dict = {}
        for i in range(j, 2 * r + 1):
            b = _bell_of_ells(i, j)
            fm = f.coeff(2 * r - i)
            if b.is_zero() or fm.is_zero():
                continue
            inner = _laurent_add(inner, _laurent_mul(_laurent_from_poly(b, -1), _laurent_from_poly(fm)))
        if not inner:
            continue
        coef = Fraction(odd_double_factorial(j + r), factorial(j))
        term = _laurent_mul(inner, {2 * (j + r): coef})
        term = _laurent_mul(term, _laurent_from_poly(_RATIO_DEN ** (2 * r - j)))
        num = _laurent_add(num, term)
    return _laurent_to_rf(num, _RATIO_DEN ** (3 * r), "v")


# ---------------------------------------------------------------------------
# e_r(n, u) and the symbolic collapse back to a_r


@memoized
def e_coeff(r: int) -> tuple[RationalFunction, ...]:
    """e_r(n, u) as its coefficients of n**0, n**1, ... (rational functions in u)."""
    if r < 0:
        raise InputError("e_coeff needs r >= 0")
    out = []
    for j in range(r // 3 + 1):
        b = _bell_of_ells(r - 2 * j, j)
        rf = _laurent_to_rf(_laurent_from_poly(b, -1), Poly.constant(1), "u")
        out.append(rf * Fraction(1, factorial(j)))
    return tuple(out)


@memoized
def epsilon_coeff(r: int, f: SuitableFn) -> tuple[RationalFunction, ...]:
    """epsilon_r(n, u) = sum_j e_j(n, u) f_{r-j}(u), as coefficients of powers of n."""
    out: list[RationalFunction] = []
    for j in range(r + 1):
        fm = RationalFunction.from_poly(f.coeff(r - j), "u")
        for k, c in enumerate(e_coeff(j)):
            while len(out) <= k:
                out.append(RationalFunction.constant(0, "u"))
            out[k] = out[k] + c * fm
    return tuple(out)


def a_coeff_via_e(r: int, f: SuitableFn = UNIT) -> RationalFunction:
    """a_r(f; v) recomputed by collecting powers of n in sum_m a*_m / n**m.

    Independent assembly path used to cross-check :func:`a_coeff_f`.
    """
    ratio = RationalFunction(Poly((0, 0, 1)), _RATIO_DEN, "u")
    total = RationalFunction.constant(0, "u")
    for j in range(2 * r + 1):
        m = r + j
        eps = epsilon_coeff(2 * m, f)
        if j < len(eps) and not eps[j].is_zero():
            total = total + eps[j] * (ratio**m) * odd_double_factorial(m)
    return total.with_var("v")


# ---------------------------------------------------------------------------
# xi, Turan and gamma corrections


def _combine_shifted(k: int, hi: RationalFunction, lo: RationalFunction) -> RationalFunction:
    """2**(-k-1) (2 hi - 3 w lo): merges the beta = 5/4 and 1/4 expansions."""
    w = RationalFunction.variable("w")
    return (hi.with_var("w") * 2 - w * lo.with_var("w") * 3) * Fraction(1, 2 ** (k + 1))


@memoized
def mu_coeff(k: int) -> RationalFunction:
    """mu_k(w) in the expansion of xi^(2n)(1/2); mu_0 = 1."""
    if k < 0:
        raise InputError("mu_coeff needs k >= 0")
    if k == 0:
        return RationalFunction.constant(1, "w")
    return _combine_shifted(
        k,
        a_coeff_f(k, SuitableFn(Fraction(5, 4))),
        a_coeff_f(k - 1, SuitableFn(Fraction(1, 4))),
    )


@memoized
def tau_coeff(k: int) -> RationalFunction:
    """tau_k(w) in the expansion of the Turan coefficients b_2n; tau_0 = 1."""
    if k < 0:
        raise InputError("tau_coeff needs k >= 0")
    if k == 0:
        return RationalFunction.constant(1, "w")
    return _combine_shifted(
        k,
        a_coeff_f(k, SuitableFn(Fraction(5, 4), gauss=True)),
        a_coeff_f(k - 1, SuitableFn(Fraction(1, 4), gauss=True)),
    )


_STIRLING_SEQ = tuple(Fraction(2 * (-1) ** k, k + 2) for k in range(1, LOG_SERIES_LEN + 1))


@memoized
def stirling_kappa(m: int) -> Fraction:
    """kappa_m in Gamma(n+1) ~ sqrt(2 pi n)(n/e)**n (1 + kappa_1/n + ...)."""
    if m < 0:
        raise InputError("stirling_kappa needs m >= 0")
    total = Fraction(0)
    for j in range(2 * m + 1):
        total += gen_binomial(Fraction(-2 * m - 1, 2), j) * bell_partial_ordinary(2 * m, j, _STIRLING_SEQ)
    return odd_double_factorial(m) * total


@memoized
def kappa_star(k: int) -> Fraction:
    """Coefficients of n!/(2n)! ~ (e/(4n))**n / sqrt(2) (1 + kappa*_1/n + ...)."""
    if k < 0:
        raise InputError("kappa_star needs k >= 0")
    return sum((Fraction(1, (-2) ** j) * stirling_kappa(j) * stirling_kappa(k - j) for j in range(k + 1)), Fraction(0))


@memoized
def c_coeff(k: int) -> RationalFunction:
    """c_k(w) in the expansion of gamma(n)."""
    if k < 0:
        raise InputError("c_coeff needs k >= 0")
    total = RationalFunction.constant(0, "w")
    for j in range(k + 1):
        total = total + mu_coeff(j) * kappa_star(k - j)
    return total


FAMILIES = ("ell", "a", "af", "mu", "tau", "kappa", "kappastar", "c")


def coefficient(family: str, index: int, f: SuitableFn | None = None):
    """Dispatch used by the CLI ``coeff`` command."""
    if family == "ell":
        return ell_coeff(index)
    if family == "a":
        return a_coeff(index)
    if family == "af":
        return a_coeff_f(index, f or UNIT)
    if family == "mu":
        return mu_coeff(index)
    if family == "tau":
        return tau_coeff(index)
    if family == "kappa":
        return stirling_kappa(index)
    if family == "kappastar":
        return kappa_star(index)
    if family == "c":
        return c_coeff(index)
    raise InputError(f"unknown coefficient family {family!r}; choose from {', '.join(FAMILIES)}")
