"""Partial sums of the large-n expansions, evaluated from the exact coefficients.

Each ``expand_*`` returns main term, the individual correction terms
``coef_k(w)/n**k`` for ``1 <= k < order`` and their combination
``value = main * (1 + sum(corrections))``.  No remainder is added.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import coefficients as cf
from .coefficients import UNIT, SuitableFn
from .errors import InputError
from .realeval import EvalContext, lambert_w

SMALL_N = 10
SMALL_N_FLAG = "asymptotic regime not reached"


@dataclass
class ExpansionResult:
    target: str
    n: int
    order: int
    value: object
    main_term: object
    corrections: list = field(default_factory=list)
    w_or_u: object = None
    flags: list = field(default_factory=list)

    @property
    def correction_sum(self):
        return sum(self.corrections) if self.corrections else 0


def _check(n: int, order: int) -> list:
    if not isinstance(n, int) or n < 2:
        raise InputError("expansions need an integer n >= 2")
    if not isinstance(order, int) or order < 1:
        raise InputError("expansion order must be an integer >= 1")
    return [SMALL_N_FLAG] if n < SMALL_N else []


def _context(n: int, ctx: EvalContext | None) -> EvalContext:
    # the main terms raise numbers near 1 to the n-th power: widen the guard
    return ctx if ctx is not None else EvalContext.for_index(n)


def _corrections(family, w, n: int, order: int, ctx: EvalContext) -> list:
    mp = ctx.mp
    nn = mp.mpf(n)
    return [family(k).evaluate(w, ctx.convert) / nn**k for k in range(1, order)]


def _result(target, n, order, main, corr, w, flags) -> ExpansionResult:
    total = 1 + (sum(corr) if corr else 0)
    return ExpansionResult(target, n, order, main * total, main, corr, w, flags)


def expand_gamma(n: int, order: int, ctx: EvalContext | None = None) -> ExpansionResult:
    """gamma(n) ~ 4 pi^2 e^(7w/4) sqrt(w/(w+1)) (e w^2 / (16 n e^(2/w)))^n (1 + sum c_k(w)/n^k)."""
    flags = _check(n, order)
    ctx = _context(n, ctx)
    mp = ctx.mp
    w = lambert_w(2 * mp.mpf(n) / mp.pi, ctx)
    base = mp.e * w * w / (16 * n * mp.exp(2 / w))
    main = 4 * mp.pi**2 * mp.exp(7 * w / 4) * mp.sqrt(w / (w + 1)) * base**n
    return _result("gamma", n, order, main, _corrections(cf.c_coeff, w, n, order, ctx), w, flags)


def expand_xi_deriv(n: int, order: int, ctx: EvalContext | None = None) -> ExpansionResult:
    """xi^(2n)(1/2) ~ 4 pi^2 e^(7w/4) sqrt(2w/(w+1)) (w/(2 e^(1/w)))^(2n) (1 + sum mu_k(w)/n^k)."""
    flags = _check(n, order)
    ctx = _context(n, ctx)
    mp = ctx.mp
    w = lambert_w(2 * mp.mpf(n) / mp.pi, ctx)
    main = 4 * mp.pi**2 * mp.exp(7 * w / 4) * mp.sqrt(2 * w / (w + 1)) * (w / (2 * mp.exp(1 / w))) ** (2 * n)
    return _result("xi", n, order, main, _corrections(cf.mu_coeff, w, n, order, ctx), w, flags)


def expand_b2n(n: int, order: int, ctx: EvalContext | None = None) -> ExpansionResult:
    """b_2n ~ 4 pi^2 e^(7w/4 - w^2/16)/(2n)! sqrt(2w/(w+1)) (w/(4 e^(1/w)))^(2n) (1 + sum tau_k(w)/n^k).

    The factor 1/(2n)! is taken exactly.
    """
    flags = _check(n, order)
    ctx = _context(n, ctx)
    mp = ctx.mp
    w = lambert_w(2 * mp.mpf(n) / mp.pi, ctx)
    fact = mp.mpf(math.factorial(2 * n))
    main = (
        4 * mp.pi**2 * mp.exp(7 * w / 4 - w * w / 16) / fact
        * mp.sqrt(2 * w / (w + 1))
        * (w / (4 * mp.exp(1 / w))) ** (2 * n)
    )
    return _result("b2n", n, order, main, _corrections(cf.tau_coeff, w, n, order, ctx), w, flags)


def expand_I_alpha_f(n: int, alpha, f: SuitableFn | None, order: int, ctx: EvalContext | None = None) -> ExpansionResult:
    """I_alpha(f; n) ~ sqrt(2 pi) u^(n+1) f(e^u) e^(u - n/u) / sqrt((1+u) n) (1 + sum a_r(f; u)/n^r), u = W(n/alpha)."""
    flags = _check(n, order)
    ctx = _context(n, ctx)
    mp = ctx.mp
    alpha = ctx.convert(alpha)
    if alpha <= 0:
        raise InputError("alpha must be positive")
    f = f or UNIT
    u = lambert_w(mp.mpf(n) / alpha, ctx)
    main = mp.sqrt(2 * mp.pi) * u ** (n + 1) * mp.exp(u - n / u + f.log_at(u, mp)) / mp.sqrt((1 + u) * n)
    if f.is_unit():
        family = cf.a_coeff
        target = "I-alpha"
    else:
        def family(r):
            return cf.a_coeff_f(r, f)
        target = "I-alpha-f"
    return _result(target, n, order, main, _corrections(family, u, n, order, ctx), u, flags)


def expand_I_alpha(n: int, alpha, order: int, ctx: EvalContext | None = None) -> ExpansionResult:
    """I_alpha(n), the f = 1 case."""
    return expand_I_alpha_f(n, alpha, None, order, ctx)


TARGETS = {
    "gamma": expand_gamma,
    "xi": expand_xi_deriv,
    "b2n": expand_b2n,
}


def factorial_ratio(n: int, ctx: EvalContext):
    """n!/(2n)! exactly rounded into the context."""
    from fractions import Fraction

    return ctx.convert(Fraction(math.factorial(n), math.factorial(2 * n)))
