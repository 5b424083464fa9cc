"""Direct high-precision evaluation of xi^(2n)(1/2), gamma(n), b_2n and I_alpha(f; n).

Every integral is taken over t in [1, inf) after the substitution t = e**x.
The returned :class:`OracleResult` carries an absolute error bound made of

* the theta-series truncation (explicit geometric majorant),
* the two discarded tails of the integration window (explicit majorants),
* the quadrature term: the difference between the last two refinement
  levels of a geometrically convergent rule,
* accumulated rounding at working precision.

The first two and the last are rigorous; the quadrature term is an
a-posteriori estimate that over-states the error of the finer level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .cache import OracleCache
from .coefficients import UNIT, SuitableFn
from .errors import DomainError, InputError, PrecisionExhausted
from .quadrature import Window, locate_window, tanh_sinh, trapezoid
from .realeval import EvalContext, incomplete_gamma_tail_bound, to_sci

# sum_{m >= 2} m**4 e**(-pi (m**2 - 1)) < 1.4e-3; padded
_OMEGA_HIGHER_TERMS = Fraction(101, 100)


@dataclass
class OracleResult:
    """Value with absolute error bound; ``kind`` in {xi, gamma, b2n, I}."""

    value: object
    error: object
    n: int
    kind: str
    target_digits: int = 20

    @property
    def rel_error(self):
        return self.error / abs(self.value) if self.value else self.error

    @property
    def certified_digits(self) -> int:
        """Significant digits guaranteed by the relative error bound."""
        rel = self.rel_error
        if rel <= 0:
            return 10**6
        return max(0, int(mpmath.floor(-mpmath.log10(rel))))

    def to_sci(self, digits: int | None = None) -> str:
        d = self.target_digits if digits is None else digits
        return to_sci(self.value, max(1, min(d, self.certified_digits)))

    def interval(self):
        return self.value - self.error, self.value + self.error


@dataclass
class ThetaKernel:
    """Truncation order M of the omega series and the t cutoff it was sized for."""

    order: int
    cutoff: object = None

    @classmethod
    def for_digits(cls, dps: int) -> "ThetaKernel":
        m = 1
        while _theta_rel_tail(m) > cls.tolerance(dps):
            m += 1
        return cls(m)

    @staticmethod
    def tolerance(dps: int) -> float:
        return 10.0 ** (-dps - 5)

    def rel_tail_bound(self) -> float:
        """Relative error of the truncated series, valid for every t >= 1."""
        return _theta_rel_tail(self.order)

    def abs_tail_bound(self, t, mp):
        """Absolute majorant of the omitted terms m > M at t."""
        m = self.order + 1
        return 2 * (2 * mp.pi**2 * m**4 * t * t) * mp.exp(-mp.pi * m * m * t)


def _theta_rel_tail(order: int, t: float = 1.0) -> float:
    # omitted/first <= sum_{m>M} m^4 e^{-pi(m^2-1)t} / (1 - 3/(2 pi t)), worst at t = 1;
    # consecutive terms shrink by more than half, hence the factor 2
    m = order + 1
    return 2 * m**4 * math.exp(-math.pi * (m * m - 1) * t) / (1 - 3 / (2 * math.pi * t))


def _order_at(t, max_order: int, tol: float) -> int:
    """Fewest terms whose relative truncation error at t is below tol."""
    tf = float(min(t, 10**6))
    m = 1
    while m < max_order and _theta_rel_tail(m, tf) > tol:
        m += 1
    return m


def omega(t, kernel: ThetaKernel, ctx: EvalContext):
    """omega(t) = sum_m (2 pi^2 m^4 t^2 - 3 pi m^2 t) e^(-pi m^2 t) for t >= 1."""
    mp = ctx.mp
    t = ctx.convert(t)
    if t < 1:
        raise DomainError("omega is evaluated for t >= 1 only")
    return _omega_series(t, kernel.order, mp)


def _omega_series(t, order: int, mp):
    pi = mp.pi
    q = mp.exp(-pi * t)
    a = 2 * pi * pi * t * t
    b = 3 * pi * t
    total = mp.zero
    qm = q  # q**(m*m), updated via q**(2m+1)
    step = q**3
    for m in range(1, order + 1):
        m2 = m * m
        total += (a * m2 * m2 - b * m2) * qm
        qm *= step
        step *= q * q
    return total


def omega_from_theta(t, order: int, mp):
    """1/2 (3 t theta'(t) + 2 t^2 theta''(t)) from the theta-derivative series."""
    pi = mp.pi
    d1 = mp.zero
    d2 = mp.zero
    for k in range(1, order + 1):
        e = mp.exp(-pi * k * k * t)
        d1 += -2 * pi * k * k * e
        d2 += 2 * pi * pi * k**4 * e
    return (3 * t * d1 + 2 * t * t * d2) / 2


# ---------------------------------------------------------------------------
# generic machinery


@dataclass
class _Integrand:
    """x-domain integrand x**power * exp(shape(x)) with shape built from parts."""

    power: int
    alpha: object  # exp(-alpha e^x)
    beta: object  # t**beta, i.e. exp(beta x), including the dt = e^x dx Jacobian
    gauss: bool
    theta_order: int | None  # None: plain e^{-alpha t}; else omega(t) replaces it
    theta_tol: float = 0.0  # per-point truncation target; the order adapts to t


def _make_functions(itg: _Integrand, mp):
    alpha, beta, power, gauss, order = itg.alpha, itg.beta, itg.power, itg.gauss, itg.theta_order
    tol = itg.theta_tol

    def omega_at(t):
        return _omega_series(t, _order_at(t, order, tol) if tol else order, mp)

    def core(x):
        t = mp.exp(x)
        if order is None:
            body = mp.exp(beta * x - alpha * t)
        else:
            body = omega_at(t) * mp.exp(beta * x)
        if gauss:
            body *= mp.exp(-x * x / 16)
        return body

    def f(x):
        if x <= 0:
            return mp.zero if power else core(mp.zero)
        return x**power * core(x)

    def logf(x):
        if x <= 0:
            if power:
                return mp.ninf
            x = mp.zero
            return mp.log(core(x))
        t = mp.exp(x)
        if order is None:
            val = beta * x - alpha * t
        else:
            val = mp.log(omega_at(t)) + beta * x
        if gauss:
            val -= x * x / 16
        return power * mp.log(x) + val

    return f, logf


def _right_tail_bound(itg: _Integrand, hi, mp, ctx: EvalContext):
    """Majorant of the integral beyond x = hi, in the t variable.

    With t >= T = e**hi the integrand is at most
    K (log t)**p t**b e**(-alpha t) (gauss factor <= 1 dropped); choosing
    c = alpha - p/(T log T) - max(b, 0)/T > 0 makes the part of the integrand
    apart from e**(-ct) non-increasing on [T, inf).
    """
    p = itg.power
    if itg.theta_order is None:
        alpha, b, scale = itg.alpha, itg.beta - 1, mp.one
    else:
        alpha, b = mp.pi, itg.beta + 1  # omega(t) <= 2 pi^2 t^2 e^{-pi t} (1.01)
        scale = 2 * mp.pi**2 * mp.mpf(_OMEGA_HIGHER_TERMS.numerator) / _OMEGA_HIGHER_TERMS.denominator
    big_t = mp.exp(hi)
    lt = mp.log(big_t)
    c = alpha - p / (big_t * lt) - max(b, 0) / big_t
    if c <= 0:
        return None
    head = lt**p * big_t**b * mp.exp(-(alpha - c) * big_t)
    return scale * head * incomplete_gamma_tail_bound(big_t, 0, c, ctx)


def _integrate(itg: _Integrand, ctx: EvalContext, rtol=None):
    """Integral over x in (0, inf) with an absolute error bound."""
    mp = ctx.mp
    drop = (ctx.dps + 12) * mp.log(10)
    f, logf = _make_functions(itg, mp)
    win: Window = locate_window(logf, drop, mp)
    goal = mp.mpf(10) ** (-(ctx.dps - 4)) if rtol is None else rtol
    # a window reaching close to 0 is not flat at its left end: integrate from 0
    near_zero = win.clipped or win.lo < win.peak / 4
    if near_zero:
        quad = tanh_sinh(f, mp.zero, win.hi, goal, mp)
    else:
        quad = trapezoid(f, win.lo, win.hi, goal, mp)
    value = quad.value
    hi = win.hi
    right = _right_tail_bound(itg, hi, mp, ctx)
    while right is None or right > goal * value:
        hi = hi + 1
        right = _right_tail_bound(itg, hi, mp, ctx)
        if hi > win.hi + 40:
            raise PrecisionExhausted("could not certify the right tail")
    if hi != win.hi:
        # the extra stretch [win.hi, hi] is bounded by its length times f(win.hi)
        right += (hi - win.hi) * f(win.hi)
    left = mp.zero if near_zero else win.lo * f(win.lo)
    theta = mp.zero
    if itg.theta_order is not None:
        theta = value * (itg.theta_tol or _theta_rel_tail(itg.theta_order))
    rounding = value * quad.points * mp.mpf(2) ** (-mp.prec + 4)
    error = quad.error + right + left + theta + rounding
    return value, error, win


def _finish(value, error, n: int, kind: str, ctx: EvalContext) -> OracleResult:
    rel = error / value
    if rel > ctx.mp.mpf(10) ** (-ctx.target_digits):
        raise PrecisionExhausted(
            f"{kind}({n}): achieved relative error {to_sci(rel, 3)} above target 1e-{ctx.target_digits}",
            achieved=rel,
        )
    return OracleResult(value, error, n, kind, ctx.target_digits)


def _cached(cache: OracleCache | None, kind: str, n: int, ctx: EvalContext):
    if cache is None:
        return None
    hit = cache.get(kind, n, ctx.target_digits)
    if hit is None:
        return None
    return OracleResult(ctx.mp.mpf(hit["value"]), ctx.mp.mpf(hit["error"]), n, kind, ctx.target_digits)


def _store(cache: OracleCache | None, res: OracleResult, ctx: EvalContext) -> OracleResult:
    if cache is not None:
        cache.put(res.kind, res.n, ctx.target_digits, to_sci(res.value, ctx.dps), to_sci(res.error, 6))
    return res


def _theta_integrand(power: int, gauss: bool, ctx: EvalContext) -> _Integrand:
    kernel = ThetaKernel.for_digits(ctx.dps)
    # t^{-3/4} and the Jacobian e^x: exp(x/4)
    return _Integrand(power, None, ctx.mp.mpf(1) / 4, gauss, kernel.order, ThetaKernel.tolerance(ctx.dps))


# ---------------------------------------------------------------------------
# public oracles


def xi_deriv(n: int, ctx: EvalContext, cache: OracleCache | None = None) -> OracleResult:
    """xi^(2n)(1/2) = 2^(1-2n) int_1^inf (log t)^(2n) omega(t) t^(-3/4) dt."""
    if n < 0:
        raise InputError("xi_deriv needs n >= 0")
    hit = _cached(cache, "xi", n, ctx)
    if hit is not None:
        return hit
    mp = ctx.mp
    value, error, _ = _integrate(_theta_integrand(2 * n, False, ctx), ctx)
    scale = mp.mpf(2) ** (1 - 2 * n)
    return _store(cache, _finish(value * scale, error * scale, n, "xi", ctx), ctx)


def gamma_coeff(n: int, ctx: EvalContext, cache: OracleCache | None = None) -> OracleResult:
    """gamma(n) = n!/(2n)! xi^(2n)(1/2)."""
    if n < 0:
        raise InputError("gamma_coeff needs n >= 0")
    hit = _cached(cache, "gamma", n, ctx)
    if hit is not None:
        return hit
    mp = ctx.mp
    xi = xi_deriv(n, ctx, cache)
    ratio = mp.mpf(math.factorial(n)) / mp.mpf(math.factorial(2 * n))
    value = xi.value * ratio
    error = xi.error * ratio + abs(value) * 3 * ctx.eps()
    return _store(cache, _finish(value, error, n, "gamma", ctx), ctx)


def b2n(n: int, ctx: EvalContext, cache: OracleCache | None = None) -> OracleResult:
    """Turan coefficient b_2n = (2^(4n-1) (2n)!)^-1 int (log t)^2n omega(t) t^-3/4 e^-(log t)^2/16 dt.

    n = 0 is accepted as well (needed to sum the Hermite expansion).
    """
    if n < 0:
        raise InputError("b2n needs n >= 0")
    hit = _cached(cache, "b2n", n, ctx)
    if hit is not None:
        return hit
    mp = ctx.mp
    value, error, _ = _integrate(_theta_integrand(2 * n, True, ctx), ctx)
    scale = 1 / (mp.mpf(2) ** (4 * n - 1) * mp.mpf(math.factorial(2 * n)))
    value, error = value * scale, error * scale + abs(value * scale) * 2 * ctx.eps()
    return _store(cache, _finish(value, error, n, "b2n", ctx), ctx)


def laplace_integral(n: int, alpha, f: SuitableFn | None, ctx: EvalContext) -> OracleResult:
    """I_alpha(f; n) = int_1^inf (log t)^n e^(-alpha t) f(t) dt (f = None means f = 1)."""
    if n < 1:
        raise InputError("laplace_integral needs n >= 1")
    mp = ctx.mp
    alpha = ctx.convert(alpha)
    if alpha <= 0:
        raise InputError("alpha must be positive")
    f = f or UNIT
    beta = ctx.convert(f.beta) + 1  # Jacobian e^x
    itg = _Integrand(n, alpha, beta, f.gauss, None)
    value, error, _ = _integrate(itg, ctx)
    return _finish(value, error, n, "I", ctx)


# ---------------------------------------------------------------------------
# second, independent route for xi^(2n)(1/2)


def xi_deriv_via_phi(n: int, ctx: EvalContext):
    """xi^(2n)(1/2) = 2 int_0^inf Phi(y) y^(2n) dy with Phi(y) = 2 e^(y/2) omega(e^(2y)).

    Uses the theta-derivative form of omega and mpmath's Gauss-Legendre
    quadrature over panels around the peak, sharing no code with
    :func:`xi_deriv` beyond the context.  Returns (value, error estimate).
    """
    mp = ctx.mp
    order = ThetaKernel.for_digits(ctx.dps).order

    def phi(y):
        return 2 * mp.exp(y / 2) * omega_from_theta(mp.exp(2 * y), order, mp)

    def integrand(y):
        return phi(y) * y ** (2 * n) if n else phi(y)

    # peak of y^{2n} Phi(y) sits near y = W(2n/pi)/2 with width ~ 1/sqrt(n)
    if n:
        center = mp.lambertw(mp.mpf(2 * n) / mp.pi).real / 2
        width = center / mp.sqrt(2 * n * (1 + 2 * center)) + mp.mpf(1) / 100
        pts = sorted({mp.zero} | {center + k * width for k in range(-60, 61, 4) if center + k * width > 0})
    else:
        pts = [mp.zero, mp.mpf(1) / 4, mp.mpf(1) / 2, mp.one, mp.mpf(2)]
    pts.append(mp.inf)
    value, err = mp.quad(integrand, pts, method="gauss-legendre", error=True, maxdegree=10)
    return 2 * value, 2 * err


def xi_half_closed_form(ctx: EvalContext):
    """xi(1/2) = -(1/8) pi^(-1/4) Gamma(1/4) zeta(1/2)."""
    mp = ctx.mp
    return -mp.pi ** (-mp.mpf(1) / 4) * mp.gamma(mp.mpf(1) / 4) * mp.zeta(mp.mpf(1) / 2) / 8
