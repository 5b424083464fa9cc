"""Grid scans over (d, n, alpha): hyperbolicity verdicts and Turan sums.

Oracle values are the expensive part, so they are computed once per
(n, digits) by :class:`GammaProvider`, optionally in a worker pool, and
shared by every grid point that needs them.  Results are sorted before they
are returned, so the output does not depend on scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import jensen
from .cache import OracleCache
from .errors import InputError
from .oracle import OracleResult, gamma_coeff
from .realeval import EvalContext, to_sci


def _gamma_worker(args):
    n, digits, cache_dir = args
    ctx = EvalContext.for_index(n, digits)
    cache = OracleCache(cache_dir) if cache_dir is not None else None
    res = gamma_coeff(n, ctx, cache)
    return n, to_sci(res.value, ctx.dps), to_sci(res.error, 6)


class GammaProvider:
    """gamma(n) oracle values keyed by (n, digits), held as decimal strings."""

    def __init__(self, cache: OracleCache | None = None, threads: int = 1):
        self.cache = cache
        self.threads = max(1, threads)
        self._store: dict[tuple[int, int], tuple[str, str]] = {}

    def ensure(self, ns, digits: int) -> None:
        todo = sorted({n for n in ns if (n, digits) not in self._store})
        if not todo:
            return
        cache_dir = str(self.cache.directory) if self.cache is not None else None
        jobs = [(n, digits, cache_dir) for n in todo]
        if self.threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=min(self.threads, len(jobs))) as pool:
                results = list(pool.map(_gamma_worker, jobs))
        else:
            results = [_gamma_worker(j) for j in jobs]
        for n, value, error in results:
            self._store[(n, digits)] = (value, error)

    def get(self, n: int, digits: int) -> OracleResult:
        self.ensure([n], digits)
        value, error = self._store[(n, digits)]
        ctx = EvalContext.for_index(n, digits)
        return OracleResult(ctx.mp.mpf(value), ctx.mp.mpf(error), n, "gamma", digits)

    def table(self, ns, digits: int) -> dict[int, OracleResult]:
        ns = list(ns)
        self.ensure(ns, digits)
        return {n: self.get(n, digits) for n in ns}


FAMILY_BUILDERS = {"J", "P", "Q"}


def build_family(family: str, d: int, n: int, gammas, alpha=None) -> jensen.RealPoly:
    if family == "J":
        return jensen.jensen_J(d, n, gammas)
    if family == "P":
        return jensen.jensen_P(d, n, gammas)
    if family == "Q":
        return jensen.jensen_Q(d, n, Fraction(0) if alpha is None else alpha, gammas)
    raise InputError(f"unknown family {family!r}; choose J, P or Q")


@dataclass(frozen=True)
class ScanRow:
    d: int
    n: int
    alpha: str
    status: str
    root_count: int | None
    precision_used: int  # bits
    digits_used: int


def certify_point(family: str, d: int, n: int, provider: GammaProvider, digits: int, max_digits: int, alpha=None) -> ScanRow:
    """Certify one grid point, doubling the oracle digits while undecided."""
    cur = digits
    while True:
        gammas = provider.table(range(n, n + d + 1), cur)
        poly = build_family(family, d, n, gammas, alpha)
        verdict = jensen.certify_hyperbolic(poly, max_precision=4 * poly.bits)
        if verdict.certified or 2 * cur > max_digits:
            return ScanRow(d, n, _alpha_text(family, alpha), verdict.status, verdict.real_root_count, verdict.precision_used, cur)
        cur *= 2


def _alpha_text(family: str, alpha) -> str:
    return str(Fraction(alpha if alpha is not None else 0)) if family == "Q" else ""


def hyper_scan(family: str, d_max: int, n_max: int, provider: GammaProvider, digits: int, max_digits: int | None = None, alpha=None, d_min: int = 1, n_min: int = 0) -> list[ScanRow]:
    max_digits = max_digits or 8 * digits
    provider.ensure(range(n_min, n_max + d_max + 1), digits)
    rows = [
        certify_point(family, d, n, provider, digits, max_digits, alpha)
        for d in range(d_min, d_max + 1)
        for n in range(n_min, n_max + 1)
    ]
    return sorted(rows, key=lambda r: (r.d, r.n))


@dataclass(frozen=True)
class TuranRow:
    d: int
    n: int
    s: str  # decimal scientific string
    flag: bool
    p_status: str | None  # cross-check of flagged points


def turan_scan(d: int, n_lo: int, n_hi: int, provider: GammaProvider, digits: int, cross_check: bool = True) -> list[TuranRow]:
    provider.ensure(range(n_lo, n_hi + d + 1), digits)
    rows = []
    for n in range(n_lo, n_hi + 1):
        gammas = provider.table(range(n, n + d + 1), digits)
        ts = jensen.turan_sufficient(d, n, gammas)
        status = None
        if cross_check and ts.flag:
            status = jensen.certify_hyperbolic(jensen.jensen_P(d, n, gammas)).status
        rows.append(TuranRow(d, n, to_sci(ts.value, 6), ts.flag, status))
    return rows


def first_flagged(rows: list[TuranRow]) -> int | None:
    """Smallest n from which every later row of the scan is flagged."""
    start = None
    for r in rows:
        if r.flag and start is None:
            start = r.n
        elif not r.flag:
            start = None
    return start


def digits_for_bits(bits: int) -> int:
    return math.ceil(bits / math.log2(10))
