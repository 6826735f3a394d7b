"""Convergence-factor route to the lifetime moments.

Damping the time integrals by ``exp(-alpha t)`` makes them elementary:

    int_0^inf dP e^{-alpha t} dt     = int dk int dk' Phi alpha / (alpha^2 + f^2)
    int_0^inf t^2 dP e^{-alpha t} dt = int dk int dk' Phi 2 (alpha^3 - 3 alpha f^2) / (alpha^2 + f^2)^3

with ``f = (k'^2 - k^2)/2``.  Both double integrals are evaluated numerically
with inner panels graded geometrically around the diagonal ``f = 0`` (the
nascent-delta peak has width ``alpha``) and the damping is then removed by
polynomial extrapolation in ``alpha``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import NonContracting, NonConvergence, PeakUnresolved
from .quadcore import QuadratureConfig, QuadResult, integrate_adaptive, integrate_semi_infinite
from .spectral import PotentialSpec, big_phi, phi

log = logging.getLogger(__name__)

__all__ = [
    "AlphaSchedule",
    "regularized_denominator",
    "regularized_numerator",
    "regularized_imaginary",
    "extrapolate_alpha",
    "AlphaLimit",
    "AlphaPath",
    "alpha_path",
    "alpha_limit",
]


@dataclass(frozen=True)
class AlphaSchedule:
    """Damping rates in units of ``1/t0``, strictly decreasing.

    ``order`` is the number of smallest rates the extrapolation uses (default:
    all of the listed ones).  With ``extend`` set, :func:`alpha_path` keeps
    halving the smallest rate, down to ``min_alpha``, until the extrapolation
    error falls below ``rel_target``; this is what long-lived states need,
    since the expansion in ``alpha`` only converges for ``alpha`` below the
    slowest decay rate.
    """

    alphas: tuple[float, ...] = (0.2, 0.1, 0.05, 0.025)
    order: int | None = None
    extend: bool = True
    rel_target: float = 1e-4
    min_alpha: float = 1e-5

    def __post_init__(self):
        al = tuple(float(x) for x in self.alphas)
        object.__setattr__(self, "alphas", al)
        if len(al) < 3:
            raise ValueError("an alpha schedule needs at least 3 rates")
        if any(x <= 0 for x in al):
            raise ValueError("alpha rates must be positive")
        if any(b >= a for a, b in zip(al, al[1:])):
            raise ValueError("alpha rates must be strictly decreasing")
        if self.order is not None and not 3 <= self.order <= len(al):
            raise ValueError("order must lie between 3 and the number of rates")
        if not (self.rel_target > 0 and self.min_alpha > 0):
            raise ValueError("rel_target and min_alpha must be positive")

    @property
    def window(self) -> int:
        return self.order or len(self.alphas)

    def halved(self) -> "AlphaSchedule":
        """The same schedule with one more rate, half the current smallest."""
        return replace(self, alphas=self.alphas + (0.5 * self.alphas[-1],), order=self.window)


def _lorentz(f, alpha):
    return alpha / (alpha * alpha + f * f)


def _cubic(f, alpha):
    a2f2 = alpha * alpha + f * f
    return 2.0 * alpha * (alpha * alpha - 3.0 * f * f) / a2f2**3


_KERNELS = {"den": (_lorentz, 1), "num": (_cubic, 3)}

# the outer integrand carries the inner quadrature noise, so its tolerance is looser
INNER_REL_TOL = 1e-11
OUTER_REL_TOL = 1e-8

# geometric grading of the inner panels: f = +-alpha * 2**j
_GRADE = 2.0 ** np.arange(-4, 60)


def _inner_breakpoints(k, alpha, cut, a):
    f = alpha * _GRADE
    f = f[f < 0.5 * cut * cut]
    up = np.sqrt(k * k + 2.0 * f)
    down = np.sqrt(k * k - 2.0 * f[f < 0.5 * k * k])
    uniform = np.arange(0.5 * math.pi / a, cut, 0.5 * math.pi / a)
    return np.concatenate([[k], up, down, uniform])


def _inner(k, spec, alpha, which, cut, cfg, scale):
    kernel, power = _KERNELS[which]
    # the peak integrates to O(scale / alpha^(power-1)) and largely cancels for the cubic kernel
    abs_tol = max(1e-12 * scale / alpha ** (power - 1), 1e-300)
    inner_cfg = replace(cfg, rel_tol=INNER_REL_TOL, abs_tol=abs_tol, max_panels=min(cfg.max_panels, 4000))

    def integrand(kp):
        return big_phi(k, kp, spec) * kernel(0.5 * (kp * kp - k * k), alpha)

    try:
        res = integrate_adaptive(integrand, 0.0, cut, inner_cfg, _inner_breakpoints(k, alpha, cut, spec.a))
    except NonConvergence as exc:
        raise PeakUnresolved(f"inner k' integral at k={k:.6g}, alpha={alpha:.3g}: {exc}") from exc
    return res.value


def _noise_scale(spec, cut):
    """Per-k magnitude of the inner integrand, ``max(|Phi(k,k)|, |phi(k)| max|phi| a/2)``."""
    grid = np.linspace(0.0, cut, 40001)
    phi_max = float(np.max(np.abs(phi(grid, spec))))

    def scale(k):
        return np.maximum(np.abs(big_phi(k, k, spec)), 0.5 * spec.a * phi_max * np.abs(phi(k, spec)))

    return scale


def _regularized(spec, alpha, cfg, which):
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    alpha_nat = alpha / spec.t0
    cut = cfg.k_max / spec.a
    power = _KERNELS[which][1]
    scale = _noise_scale(spec, cut)

    def outer(k):
        return np.array([_inner(float(x), spec, alpha_nat, which, cut, cfg, float(scale(x))) for x in k])

    loose = QuadratureConfig(rel_tol=1e-6, abs_tol=1e-300)
    total = integrate_adaptive(scale, 0.0, cut, loose, np.arange(math.pi / spec.a, cut, math.pi / spec.a)).value
    outer_cfg = replace(
        cfg,
        rel_tol=max(cfg.rel_tol, OUTER_REL_TOL),
        abs_tol=max(cfg.abs_tol, 1e-11 * total / alpha_nat ** (power - 1)),
        max_panels=min(cfg.max_panels, 2000),
    )
    return integrate_semi_infinite(outer, outer_cfg, scale=spec.a)


def regularized_denominator(
    spec: PotentialSpec, alpha: float, cfg: QuadratureConfig = QuadratureConfig()
) -> QuadResult:
    """``int_0^inf dP(t) exp(-alpha t) dt`` with ``alpha`` in units of ``1/t0``."""
    return _regularized(spec, alpha, cfg, "den")


def regularized_numerator(
    spec: PotentialSpec, alpha: float, cfg: QuadratureConfig = QuadratureConfig()
) -> QuadResult:
    """``int_0^inf t^2 dP(t) exp(-alpha t) dt`` (natural time units, ``alpha`` in ``1/t0``)."""
    return _regularized(spec, alpha, cfg, "num")


def regularized_imaginary(
    spec: PotentialSpec, alpha: float, cfg: QuadratureConfig = QuadratureConfig()
) -> float:
    """Imaginary part of the damped zeroth moment, ``int int Phi f / (alpha^2 + f^2)``.

    Vanishes because ``Phi`` is symmetric and ``f`` antisymmetric under
    ``k <-> k'``; evaluated on the square ``[0, k_max/a]^2``.
    """
    alpha_nat = alpha / spec.t0
    cut = cfg.k_max / spec.a
    inner_cfg = replace(cfg, rel_tol=1e-11, abs_tol=1e-15)

    def outer(k):
        out = []
        for x in k:
            def integrand(kp, x=x):
                f = 0.5 * (kp * kp - x * x)
                return big_phi(x, kp, spec) * f / (alpha_nat**2 + f * f)
            bp = _inner_breakpoints(float(x), alpha_nat, cut, spec.a)
            out.append(integrate_adaptive(integrand, 0.0, cut, inner_cfg, bp).value)
        return np.array(out)

    width = math.pi / spec.a
    bp = np.concatenate([width * 2.0 ** -np.arange(1, 11), np.arange(width, cut, width)])
    return integrate_adaptive(outer, 0.0, cut, replace(cfg, abs_tol=1e-12), bp).value


def extrapolate_alpha(values: Sequence[float], schedule: AlphaSchedule) -> tuple[float, float]:
    """Neville extrapolation to ``alpha = 0`` of values tabulated on the schedule.

    The interpolant is a polynomial in ``alpha`` through the ``window``
    smallest rates.  Returns ``(limit, error)`` where the error is the size of
    the last correction.

    Raises:
        NonContracting: if the last correction is larger than the one before.
    """
    if len(values) != len(schedule.alphas):
        raise ValueError("values do not match the schedule")
    n = schedule.window
    x = np.asarray(schedule.alphas[-n:], dtype=float)
    y = np.asarray(values[-n:], dtype=float)
    # estimates[m-1]: extrapolation through the m smallest rates
    estimates = [_neville_at_zero(x[-m:], y[-m:]) for m in range(1, n + 1)]
    corr = np.abs(np.diff(estimates))
    limit = estimates[-1]
    err = float(corr[-1])
    scale = max(abs(limit), np.finfo(float).tiny)
    if corr.size >= 2 and corr[-1] > corr[-2] and corr[-1] > 1e-13 * scale:
        raise NonContracting(f"alpha extrapolation corrections grew: {corr}")
    return float(limit), err


def _neville_at_zero(x, y):
    p = np.array(y, dtype=float)
    n = len(x)
    for lvl in range(1, n):
        p = (x[lvl:] * p[:-1] - x[:-lvl] * p[1:]) / (x[lvl:] - x[:-lvl])
    return float(p[0])


@dataclass
class AlphaLimit:
    alphas: tuple[float, ...]
    values: list[float]
    limit: float
    error: float


@dataclass
class AlphaPath:
    den: AlphaLimit
    num: AlphaLimit | None

    @property
    def den_limit(self) -> float:
        return self.den.limit

    @property
    def num_limit(self) -> float:
        return self.num.limit if self.num else math.nan


def alpha_limit(
    fn: Callable[[PotentialSpec, float, QuadratureConfig], QuadResult],
    spec: PotentialSpec,
    schedule: AlphaSchedule = AlphaSchedule(),
    cfg: QuadratureConfig = QuadratureConfig(),
) -> AlphaLimit:
    """Tabulate ``fn`` on the schedule and extrapolate to ``alpha = 0``.

    With ``schedule.extend`` the smallest rate is halved until the error
    estimate meets ``rel_target`` or ``min_alpha`` is reached.
    """
    values = [fn(spec, al, cfg).value for al in schedule.alphas]
    while True:
        try:
            limit, err = extrapolate_alpha(values, schedule)
            failure = None
        except NonContracting as exc:
            limit, err, failure = math.nan, math.inf, exc
        done = err <= schedule.rel_target * abs(limit)
        if done or not schedule.extend or 0.5 * schedule.alphas[-1] < schedule.min_alpha:
            if failure is not None:
                raise failure
            return AlphaLimit(schedule.alphas, values, limit, err)
        log.debug("%s v0a2=%g: limit %.10g +- %.3g after alpha=%g", fn.__name__, spec.v0a2, limit, err, schedule.alphas[-1])
        schedule = schedule.halved()
        values.append(fn(spec, schedule.alphas[-1], cfg).value)


def alpha_path(
    spec: PotentialSpec,
    schedule: AlphaSchedule = AlphaSchedule(),
    cfg: QuadratureConfig = QuadratureConfig(),
    numerator: bool = True,
) -> AlphaPath:
    """Damped moments on the schedule and their ``alpha -> 0`` limits."""
    den = alpha_limit(regularized_denominator, spec, schedule, cfg)
    num = alpha_limit(regularized_numerator, spec, schedule, cfg) if numerator else None
    return AlphaPath(den, num)
