"""Heat kernels, resolvent kernels and decay rates for symmetric pure-jump Levy operators."""

from .errors import (BracketError, CutoffError, DomainError, InsufficientDataError,
                     LevyDecayError, NonIntegrableSymbolError, QuadratureError,
                     UnsupportedProfileError)
from .models import (LevyModel, ProfileSpec, PsiEvaluation, comparability_estimate,
                     estimate_lower_scaling, heat_scale_constant, levy_tail_mass, nu_density,
                     psi, psi_closed_form, psi_fast, psi_quadrature, psi_star, psi_star_inv)
from .moments import (DecayRateCurve, OmegaEvaluation, decay_rate_curve, exp_moment,
                      gamma_alpha, omega, omega_prime, omega_restricted, omega_star)
from .kernels import (JumpDecomposition, KernelGrid, convolution_power_ratio,
                      exp_upper_bound_check, heat_kernel, heat_kernel_zero, jump_decomposition,
                      kernel_mass, l1_certificate, resolvent_freq, resolvent_time,
                      semigroup_defect)
from .profiles import (ProfileClassification, classify_profile, comparability_constant, kf,
                       subexp_bound_certificate)
from .decay import (ComparabilityReport, DecayFit, TransitionCurve, fit_exponential_rate,
                    fit_powerlaw, ratio_report, transition_sweep)
from .schrodinger import (BirmanSchwingerCurve, BoundStateResult, NoBoundState, PotentialSpec,
                          bs_eigenvalue, dense_mu, find_bound_state, ground_state_profile_report,
                          uniform_grid)

__version__ = "0.1.0"
