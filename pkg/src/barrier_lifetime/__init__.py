"""Tunnelling lifetimes behind an l=1 centrifugal barrier from single wavenumber quadratures."""

__version__ = "0.1.0"

from .errors import (
    DerivativeUnstable,
    LifetimeError,
    NonContracting,
    NonConvergence,
    PeakUnresolved,
    TailDominated,
)
from .moments import (
    MomentResult,
    completeness,
    completeness_deficit,
    denominator,
    energy_sum_rule,
    lifetime,
    mean_energy,
    numerator,
    time_moments,
)
from .quadcore import FDConfig, QuadratureConfig, integrate_adaptive, integrate_semi_infinite, mixed_partial
from .regularized import AlphaSchedule, alpha_path, extrapolate_alpha, regularized_denominator, regularized_numerator
from .spectral import PotentialSpec, SpectralKernel
from .timedomain import TimeGrid, moments_time_domain
