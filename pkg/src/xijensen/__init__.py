"""Exact coefficients, certified oracles and large-n expansions for the Taylor
coefficients of the Riemann xi function at 1/2, plus Jensen-polynomial tools."""

from .asymptotics import ExpansionResult, expand_b2n, expand_gamma, expand_I_alpha, expand_I_alpha_f, expand_xi_deriv
from .bell import bell_partial_ordinary
from .coefficients import (
    UNIT,
    SuitableFn,
    a_coeff,
    a_coeff_f,
    c_coeff,
    ell_coeff,
    kappa_star,
    mu_coeff,
    stirling_kappa,
    tau_coeff,
)
from .errors import DomainError, InputError, PrecisionExhausted
from .jensen import (
    HyperbolicityVerdict,
    RealPoly,
    certify_hyperbolic,
    gamma_ratio_bound_check,
    hermite,
    jensen_J,
    jensen_of_product,
    jensen_P,
    jensen_Q,
    laguerre,
    turan_sufficient,
)
from .oracle import OracleResult, b2n, gamma_coeff, laplace_integral, xi_deriv
from .polynomial import Poly, RationalFunction
from .realeval import EvalContext, lambert_w

__version__ = "0.1.0"
