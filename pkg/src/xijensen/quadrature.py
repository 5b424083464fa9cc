"""High-precision quadrature for sharply peaked positive integrands.

The integrands met here are analytic, positive and unimodal on (0, inf).
:func:`locate_window` brackets the region where the integrand exceeds
``peak * exp(-drop)``; inside it :func:`trapezoid` (interior windows, where
the integrand is negligible at both ends, so the rule converges
geometrically) or :func:`tanh_sinh` (windows clipped at 0) is refined by
halving the step until two successive levels agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import PrecisionExhausted


@dataclass
class Window:
    lo: object
    hi: object
    peak: object
    log_peak: object
    clipped: bool  # lo was clipped to the domain start


@dataclass
class QuadResult:
    value: object
    error: object  # difference of the last two refinement levels
    points: int
    levels: int


def _golden_max(logf, a, b, mp, iters: int = 80):
    invphi = (mp.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = logf(c), logf(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = logf(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = logf(d)
    x = (a + b) / 2
    return x, logf(x)


def _bisect_level(logf, inside, outside, level, mp, iters: int = 60):
    """Point between ``inside`` (logf >= level) and ``outside`` (logf < level)."""
    for _ in range(iters):
        mid = (inside + outside) / 2
        if logf(mid) >= level:
            inside = mid
        else:
            outside = mid
    return outside


def locate_window(logf: Callable, drop, mp, step=None, start=0, max_x=200) -> Window:
    """Bracket {x >= start : logf(x) >= max logf - drop} for a unimodal logf.

    ``logf`` may return ``-inf`` at ``start``.  The scan uses ``step`` (default
    1/32) so peaks narrower than the step are still caught by the golden
    refinement around the best grid point.
    """
    step = mp.mpf(1) / 32 if step is None else mp.mpf(step)
    start = mp.mpf(start)
    best_x, best = start, logf(start)
    x, prev = start, best
    k = 0
    while x < max_x:
        k += 1
        x = start + k * step
        val = logf(x)
        if val > best:
            best_x, best = x, val
        # past the peak and far below it: stop scanning
        if val < prev and val < best - drop - 20:
            break
        prev = val
    else:
        raise PrecisionExhausted("integrand peak not found inside the scan range")
    a = max(start, best_x - step)
    b = best_x + step
    peak, log_peak = _golden_max(logf, a, b, mp)
    if log_peak < best:
        peak, log_peak = best_x, best
    level = log_peak - drop
    if logf(start) >= level:
        lo, clipped = start, True
    else:
        lo, clipped = _bisect_level(logf, peak, start, level, mp), False
    hi_out = peak + step
    while logf(hi_out) >= level:
        hi_out = peak + 2 * (hi_out - peak)
    hi = _bisect_level(logf, peak, hi_out, level, mp)
    return Window(lo, hi, peak, log_peak, clipped)


def trapezoid(f: Callable, a, b, rtol, mp, min_levels: int = 4, max_levels: int = 14, initial_panels: int = 16) -> QuadResult:
    """Doubling trapezoid rule on [a, b]."""
    h = (b - a) / initial_panels
    total = (f(a) + f(b)) / 2 + mp.fsum(f(a + k * h) for k in range(1, initial_panels))
    est = total * h
    points = initial_panels + 1
    panels = initial_panels
    for level in range(1, max_levels + 1):
        h /= 2
        new = mp.fsum(f(a + (2 * k - 1) * h) for k in range(1, panels + 1))
        points += panels
        panels *= 2
        total += new
        prev, est = est, total * h
        err = abs(est - prev)
        if level >= min_levels and err <= rtol * abs(est):
            return QuadResult(est, err, points, level)
    return QuadResult(est, err, points, max_levels)


def tanh_sinh(f: Callable, a, b, rtol, mp, min_levels: int = 3, max_levels: int = 12) -> QuadResult:
    """Doubly-exponential rule on [a, b] with step halving.

    Abscissae near the endpoints are formed from their distance to the end so
    no precision is lost to cancellation.
    """
    half = (b - a) / 2
    pi2 = mp.pi / 2
    tiny = mp.mpf(2) ** (-mp.prec - 20)

    def node(t):
        u = pi2 * mp.sinh(t)
        e2u = mp.exp(2 * abs(u))
        gap = 2 * half / (e2u + 1)  # distance to the nearer endpoint
        x = b - gap if t > 0 else a + gap if t < 0 else a + half
        ch = mp.cosh(u)
        weight = half * pi2 * mp.cosh(t) / (ch * ch)
        return x, weight

    def contribution(t):
        x, wt = node(t)
        if wt < tiny:
            return mp.zero, True
        if x <= a or x >= b:
            return mp.zero, True
        return wt * f(x), False

    def sweep(h, odd_only: bool, floor):
        # stop an outward sweep once terms are negligible and still shrinking
        acc = []
        count = 0
        for sign in (1, -1):
            k = 1
            prev = None
            while True:
                if odd_only and k % 2 == 0:
                    k += 1
                    continue
                val, done = contribution(sign * k * h)
                count += 1
                acc.append(val)
                if done or k * h > 7:
                    break
                if floor is not None and prev is not None and abs(val) < floor and abs(val) <= prev:
                    break
                prev = abs(val)
                k += 1
        return mp.fsum(acc), count
    h = mp.mpf(1) / 2
    center, _ = contribution(mp.zero)
    side, points = sweep(h, False, None)
    total = center + side
    est = total * h
    points += 1
    err = abs(est)  # no refinement yet: nothing is known
    for level in range(1, max_levels + 1):
        h /= 2
        new, cnt = sweep(h, True, abs(est) * rtol / (h * 10**6))
        points += cnt
        total += new
        prev, est = est, total * h
        err = abs(est - prev)
        if level >= min_levels and err <= rtol * abs(est):
            return QuadResult(est, err, points, level)
    return QuadResult(est, err, points, max_levels)
