"""Arbitrary-precision real evaluation: contexts, Lambert W, tail majorants.

Numbers are mpmath ``mpf`` values.  Each :class:`EvalContext` owns a private
mpmath context, so independent evaluations never touch the global
``mpmath.mp`` precision and can run side by side in threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
from mpmath import libmp

from .errors import DomainError, InputError

LOG2_10 = math.log2(10)
MIN_PREC = 64


@dataclass
class EvalContext:
    """Target accuracy plus guard digits; derives the working precision."""

    target_digits: int = 20
    guard_digits: int = 10
    mp: mpmath.MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.target_digits < 1 or self.guard_digits < 1:
            raise InputError("target and guard digits must be positive")
        self.mp = mpmath.MPContext()
        self.mp.prec = self.prec

    @property
    def dps(self) -> int:
        return self.target_digits + self.guard_digits

    @property
    def prec(self) -> int:
        return max(MIN_PREC, math.ceil(self.dps * LOG2_10) + 4)

    @classmethod
    def for_index(cls, n: int, target_digits: int = 20) -> "EvalContext":
        """Context for quantities of size ~10**(-2.5 n): guard = ceil(n/10) + 30."""
        return cls(target_digits, math.ceil(0.1 * n) + 30)

    def with_target(self, target_digits: int) -> "EvalContext":
        return EvalContext(target_digits, self.guard_digits)

    def eps(self):
        return self.mp.mpf(2) ** (-self.prec)

    def convert(self, x):
        """Bring ints, Fractions, strings or foreign mpfs into this context."""
        mp = self.mp
        if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
            return mp.mpf(x.numerator) / x.denominator
        return mp.mpf(x)


def to_sci(x, digits: int) -> str:
    """Decimal scientific string with exactly ``digits`` significant digits."""
    if digits < 1:
        raise InputError("need at least one digit")
    if not hasattr(x, "_mpf_"):
        x = mpmath.mpf(x)
    text = libmp.to_str(x._mpf_, digits, strip_zeros=False, min_fixed=1, max_fixed=0)
    return text if "e" in text or not text[-1].isdigit() else text + "e+0"


def from_sci(text: str, ctx: EvalContext):
    return ctx.mp.mpf(text)


def significand(text: str) -> tuple[str, int]:
    """Split ``d.ddde-N`` into the digit string and the exponent."""
    mant, _, exp = text.partition("e")
    neg = mant.startswith("-")
    digits = mant.lstrip("-").replace(".", "")
    return ("-" if neg else "") + digits, int(exp or 0)


def common_digits(a: str, b: str) -> int:
    """Number of leading significand digits two sci strings share (0 if exponents differ)."""
    da, ea = significand(a)
    db, eb = significand(b)
    if ea != eb:
        return 0
    k = 0
    for x, y in zip(da, db):
        if x != y:
            break
        k += 1
    return k


# ---------------------------------------------------------------------------
# Lambert W, principal branch on [0, inf)


def lambert_w(x, ctx: EvalContext, max_iter: int = 200):
    """W(x) for x >= 0 by Halley iteration, residual-checked at working precision."""
    mp = ctx.mp
    x = ctx.convert(x)
    if x < 0:
        raise DomainError("lambert_w is implemented for x >= 0 only")
    if x == 0:
        return mp.zero
    e = mp.e
    if x >= e:
        lx = mp.log(x)
        w = lx - mp.log(lx) if lx > 1 else lx
    else:
        w = x / (1 + x)
    tol = mp.mpf(2) ** (-ctx.prec + 8)
    for _ in range(max_iter):
        ew = mp.exp(w)
        f = w * ew - x
        wp1 = w + 1
        step = f / (ew * wp1 - (w + 2) * f / (2 * wp1))
        w -= step
        if abs(step) <= tol * (1 + abs(w)):
            break
    else:
        raise ArithmeticError("lambert_w: Halley iteration did not converge")
    return w


def lambert_residual(w, x, ctx: EvalContext):
    """|W e**W - x| / x."""
    mp = ctx.mp
    x = ctx.convert(x)
    return abs(w * mp.exp(w) - x) / x if x else abs(w)


def lambert_w_shift_bounds(x, c, ctx: EvalContext):
    """Bounds ((1 - 1/W(x)) log c, log c) on W(cx) - W(x), for c >= 1 and W(x) > 1.

    Also checks the sandwich numerically and raises ArithmeticError if it fails
    by more than working-precision noise.
    """
    mp = ctx.mp
    x, c = ctx.convert(x), ctx.convert(c)
    if x <= 0 or c < 1:
        raise DomainError("need x > 0 and c >= 1")
    wx = lambert_w(x, ctx)
    if wx <= 1:
        raise DomainError("need W(x) > 1, i.e. x > e")
    lc = mp.log(c)
    lo, hi = (1 - 1 / wx) * lc, lc
    diff = lambert_w(c * x, ctx) - wx
    slack = mp.mpf(2) ** (-ctx.prec + 16) * (1 + abs(diff))
    if not (lo - slack <= diff <= hi + slack):
        raise ArithmeticError("W shift sandwich violated")
    return lo, hi


def incomplete_gamma_tail_bound(a, r, c, ctx: EvalContext):
    """Majorant c**(-r-1) 2**r ((ac)**r + Gamma(r+1)) e**(-ac) of int_a^inf e**(-cx) x**r dx."""
    mp = ctx.mp
    a, r, c = ctx.convert(a), ctx.convert(r), ctx.convert(c)
    if a < 0 or r < 0 or c <= 0:
        raise InputError("need a >= 0, r >= 0, c > 0")
    ac = a * c
    power = mp.one if r == 0 else ac**r
    return c ** (-r - 1) * mp.mpf(2) ** r * (power + mp.gamma(r + 1)) * mp.exp(-ac)
