"""Genus-three hyperelliptic sigma function for y^2 = f(x), deg f = 7, f monic,
with numerical checks of its determinant identities."""

from .abel_jacobi import (JacobianPoint, abel_jacobi, jacobi_inversion,
                          random_curve_point, x_of_u, y_of_u)
from .config import DEFAULT_CONFIG, Config
from .curve import (Curve, CurveFunction, CurvePoint, Monomial, derive_along_curve,
                    eval_curve_function, load_curve, make_curve, monomial_basis,
                    point_near_infinity, pole_order)
from .errors import *  # noqa: F401,F403
from .identities import (fs_determinant, fs_sigma_side, fs_sign, kiepert_determinant,
                         psi_numeric, psi_symbolic, verify_all,
                         verify_frobenius_stickelberger, verify_curve_limits)
from .periods import PeriodData, compute_periods, lattice_reduce
from .theta_sigma import (MultiIndex, SigmaContext, ThetaCharacteristics, build_context,
                          quasi_period_factor, sigma, sigma_normalize, theta_char,
                          truncation_radius, wp)

__version__ = "0.1.0"
