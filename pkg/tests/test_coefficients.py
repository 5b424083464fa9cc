import random
import threading
from fractions import Fraction as F
from math import factorial

import mpmath
import pytest
import sympy

from xijensen import coefficients as cf
from xijensen.coefficients import UNIT, SuitableFn
from xijensen.errors import InputError
from xijensen.polynomial import Poly, RationalFunction

P54 = SuitableFn(F(5, 4))
P14 = SuitableFn(F(1, 4))
G54 = SuitableFn(F(5, 4), True)
G14 = SuitableFn(F(1, 4), True)


def rf(text):
    return RationalFunction.parse(text)


def by_formula(var, num, den):
    return RationalFunction(Poly(num), Poly(den), var)


def sym_to_rf(expr, var):
    s = sympy.Symbol(var)
    num, den = sympy.fraction(sympy.together(expr))
    to_poly = lambda e: Poly([F(int(c.p), int(c.q)) for c in reversed(sympy.Poly(e, s).all_coeffs())])
    return RationalFunction(to_poly(num), to_poly(den), var)


W = sympy.Symbol("w")
U = sympy.Symbol("u")
V = sympy.Symbol("v")

PRINTED = {
    "c1": -(W**4 + 58 * W**3 + 29 * W**2 - 24 * W - 16) / (192 * (W + 1) ** 3),
    "c2": -(1295 * W**8 + 7804 * W**7 + 21682 * W**6 + 40124 * W**5 + 29911 * W**4 + 13712 * W**3 + 2080 * W**2 - 768 * W - 256)
    / (73728 * (W + 1) ** 6),
    "mu1": -(W**4 + 66 * W**3 + 53 * W**2 - 8) / (192 * (W + 1) ** 3),
    "tau1": -(-3 * W**6 + 78 * W**5 + 217 * W**4 + 468 * W**3 + 284 * W**2 - 32) / (768 * (W + 1) ** 3),
    "a1": (2 * V**4 + 9 * V**3 + 16 * V**2 + 6 * V + 2) / (24 * (V + 1) ** 3),
    "l1": 1 / U,
    "l2": -1 / (2 * U) - 1 / (2 * U**2),
    "l3": 1 / (3 * U) + 1 / (2 * U**2) + 1 / (3 * U**3),
}


def printed(name):
    var = {"c": "w", "m": "w", "t": "w", "a": "v", "l": "u"}[name[0]]
    return sym_to_rf(PRINTED[name], var)


@pytest.mark.parametrize(
    "name, make",
    [
        ("c1", lambda: cf.c_coeff(1)),
        ("c2", lambda: cf.c_coeff(2)),
        ("mu1", lambda: cf.mu_coeff(1)),
        ("tau1", lambda: cf.tau_coeff(1)),
        ("a1", lambda: cf.a_coeff(1)),
        ("l1", lambda: cf.ell_coeff(1)),
        ("l2", lambda: cf.ell_coeff(2)),
        ("l3", lambda: cf.ell_coeff(3)),
    ],
)
def test_printed_coefficients_exact(name, make):
    assert make() == printed(name)


def test_zeroth_members_are_one():
    assert cf.a_coeff(0) == RationalFunction.constant(1, "v")
    assert cf.mu_coeff(0) == 1 and cf.tau_coeff(0) == 1 and cf.c_coeff(0) == 1
    assert cf.stirling_kappa(0) == 1 and cf.kappa_star(0) == 1
    for f in (P54, G14):
        assert cf.a_coeff_f(0, f) == 1


def test_canonical_text_round_trip():
    for r in (cf.c_coeff(2), cf.tau_coeff(2), cf.a_coeff_f(2, G54)):
        assert RationalFunction.parse(r.canonical()) == r


def test_pretty_form_of_c1():
    assert cf.c_coeff(1).pretty() == "-(w^4 + 58*w^3 + 29*w^2 - 24*w - 16)/(192*(w+1)^3)"


def test_pq_coeffs_against_sympy_series():
    x, v = sympy.symbols("x v")
    p_series = sympy.series(sympy.exp(-(v / 8) * sympy.log(1 + x)), x, 0, 7).removeO()
    q_series = sympy.series(sympy.exp(-sympy.log(1 + x) ** 2 / 16), x, 0, 7).removeO()
    for i in range(7):
        p, q = cf.pq_coeffs(i)
        expect_p = sympy.expand(p_series.coeff(x, i))
        got_p = sum(sympy.Rational(c.numerator, c.denominator) * v**k for k, c in enumerate(p.coeffs))
        assert sympy.expand(got_p - expect_p) == 0
        assert sympy.Rational(q.numerator, q.denominator) == q_series.coeff(x, i)
    assert cf.pq_coeffs(0) == (Poly.constant(1), 1)
    assert cf.pq_coeffs(1) == (Poly([0, F(-1, 8)]), 0)
    assert cf.pq_coeffs(2) == (Poly([0, F(1, 16), F(1, 128)]), F(-1, 16))


def test_suitable_coefficients_against_sympy():
    x, v = sympy.symbols("x v")
    beta = sympy.Rational(5, 4)
    # f(t(1+x))/f(t) at t = e^v for f = t^beta e^{-(log t)^2/16}
    ratio = (1 + x) ** beta * sympy.exp(-(2 * v * sympy.log(1 + x) + sympy.log(1 + x) ** 2) / 16)
    ser = sympy.series(ratio, x, 0, 6).removeO()
    for m in range(6):
        got = G54.coeff(m)
        got_s = sum(sympy.Rational(c.numerator, c.denominator) * v**k for k, c in enumerate(got.coeffs))
        assert sympy.expand(got_s - ser.coeff(x, m)) == 0
        assert got.degree <= m  # lambda = 1
        assert P54.coeff(m).degree <= 0


@pytest.mark.parametrize("r", range(5))
def test_unit_weight_reduces_to_plain_family(r):
    assert cf.a_coeff_f(r, SuitableFn(F(0))) == cf.a_coeff(r)


@pytest.mark.parametrize("r", range(4))
@pytest.mark.parametrize("f", [UNIT, P54, G14])
def test_two_assembly_paths_agree(r, f):
    assert cf.a_coeff_via_e(r, f) == cf.a_coeff_f(r, f)


def _series_exp(a, order):
    """exp of a power series with a[0] = 0, truncated."""
    e = [F(0)] * (order + 1)
    e[0] = F(1)
    for k in range(1, order + 1):
        e[k] = sum(j * a[j] * e[k - j] for j in range(1, k + 1)) / k
    return e


def test_e_coefficients_against_series_exponential():
    rng = random.Random(3)
    for _ in range(4):
        n = F(rng.randint(1, 40), rng.randint(1, 5))
        u = F(rng.randint(1, 30), rng.randint(1, 7))
        order = 8
        a = [F(0)] * (order + 1)
        for i in range(3, order + 1):
            a[i] = n * cf.ell_coeff(i)(u)
        e = _series_exp(a, order)
        for r in range(order + 1):
            got = sum(c(u) * n**k for k, c in enumerate(cf.e_coeff(r)))
            assert got == e[r]


def test_ell_coefficients_are_log_expansion():
    x, u = sympy.symbols("x u")
    ser = sympy.series(sympy.log(1 + sympy.log(1 + x) / u), x, 0, 7).removeO()
    for i in range(1, 7):
        assert cf.ell_coeff(i) == sym_to_rf(sympy.simplify(ser.coeff(x, i)), "u")


@pytest.mark.parametrize("r", range(1, 4))
def test_a_denominators_are_powers_of_v_plus_one(r):
    den = cf.a_coeff(r).den
    k = den.degree
    assert den == Poly.linear_power(1, k)


def test_degree_bounds():
    for r in range(1, 6):
        assert cf.a_coeff(r).degree() <= r
        assert cf.a_coeff_f(r, P54).degree() <= r
        assert cf.a_coeff_f(r, G54).degree() <= 3 * r
    for k in range(1, 7):
        assert cf.mu_coeff(k).degree() <= k
        assert cf.c_coeff(k).degree() <= k
        assert cf.tau_coeff(k).degree() <= 3 * k


def test_size_shape_on_grid():
    """u^(-r) |a_r(u)| stays bounded along u = 1, 2, 4, ..., 64."""
    for r in range(1, 5):
        ratios = [abs(cf.a_coeff(r)(F(2**k))) / F(2**k) ** r for k in range(7)]
        assert ratios[-1] <= 2 * max(ratios[:-1]) + 1
        g = [abs(cf.a_coeff_f(r, G54)(F(2**k))) / F(2**k) ** (3 * r) for k in range(7)]
        assert g[-1] <= 2 * max(g[:-1]) + 1


def test_tau1_leading_term():
    t = cf.tau_coeff(1)
    assert t.degree() == 3
    assert t.num.lead / t.den.lead == F(1, 256)


def test_a1_gauss_forced_by_tau1():
    w = RationalFunction.variable("w")
    forced = (4 * cf.tau_coeff(1) + 3 * w) / 2
    assert cf.a_coeff_f(1, G54).with_var("w") == forced


def test_kappa_values_and_stirling_series():
    assert [cf.stirling_kappa(m) for m in range(5)] == [1, F(1, 12), F(1, 288), F(-139, 51840), F(-571, 2488320)]
    mp = mpmath.mp.clone() if hasattr(mpmath.mp, "clone") else mpmath.MPContext()
    mp.dps = 60
    for n in (1000, 10**5):
        ratio = mp.gamma(n + 1) / (mp.sqrt(2 * mp.pi * n) * (n / mp.e) ** n)
        partial = sum(mp.mpf(cf.stirling_kappa(m).numerator) / cf.stirling_kappa(m).denominator / mp.mpf(n) ** m for m in range(8))
        assert abs(ratio - partial) < mp.mpf(n) ** -7.5


def test_kappa_star_is_factorial_ratio_series():
    # n!/(2n)! * sqrt(2) (4n/e)^n  ->  sum kappa*_k / n^k
    mp = mpmath.MPContext()
    mp.dps = 60
    n = 10**4
    exact = mp.factorial(n) / mp.factorial(2 * n) * mp.sqrt(2) * (4 * n / mp.e) ** n
    series = sum(mp.mpf(cf.kappa_star(k).numerator) / cf.kappa_star(k).denominator / mp.mpf(n) ** k for k in range(7))
    assert abs(exact - series) < mp.mpf(n) ** -6.5


def test_memo_is_thread_safe():
    results = []

    def work():
        results.append(cf.tau_coeff(4).canonical())

    threads = [threading.Thread(target=work) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(results)) == 1


def test_dispatch_and_errors():
    assert cf.coefficient("ell", 1) == cf.ell_coeff(1)
    assert cf.coefficient("af", 1, G54) == cf.a_coeff_f(1, G54)
    with pytest.raises(InputError):
        cf.coefficient("nope", 1)
    with pytest.raises(InputError):
        SuitableFn.parse("cosine:1")
    assert SuitableFn.parse("gauss:5/4") == G54
