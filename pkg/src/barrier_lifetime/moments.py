"""Time moments of the in-well probability excess as single wavenumber integrals.

With ``dP(t) = int dk int dk' Phi(k,k') exp(i (k'^2-k^2) t / 2)`` the time
integrals collapse onto the diagonal ``k' = k``:

    int_0^inf dP dt       = pi int_0^inf dk/k  Phi(k, k)
    int_0^inf t^2 dP dt   = pi int_0^inf dk/k  d^2 Psi / dk dk' |_(k'=k)

with ``Psi = Phi / (k k')``.  Times are in natural units (hbar = m = 1);
``tau_bar`` is reported in units of ``t0 = 2 a^2``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import LifetimeError
from .quadcore import FDConfig, QuadratureConfig, QuadResult, integrate_semi_infinite, mixed_partial
from .spectral import PotentialSpec, big_phi, psi_kernel, spectral_weight

__all__ = [
    "MomentResult",
    "BOUND_STATE_THRESHOLD",
    "denominator",
    "numerator",
    "lifetime",
    "mean_energy",
    "completeness",
    "completeness_deficit",
    "energy_sum_rule",
    "time_moments",
    "derived_times",
]

BOUND_STATE_THRESHOLD = 1e-2


@dataclass
class MomentResult:
    numerator: float
    denominator: float
    t2_mean: float
    t_bar: float
    tau_bar: float
    e_mean: float
    deficit: float
    deficit_raw: float
    bound_state: bool
    num_error: float = 0.0
    den_error: float = 0.0
    num_tail: float = 0.0
    den_tail: float = 0.0
    tail_flag: bool = False
    fd_error: float = 0.0
    spec: PotentialSpec = field(default_factory=PotentialSpec)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["spec"] = asdict(self.spec)
        return d


def derived_times(num: float, den: float, t0: float) -> tuple[float, float, float]:
    """``(<t^2>, t_bar, tau_bar)`` from the two moments; ``t_bar = sqrt(<t^2>/2)``."""
    t2 = num / den
    t_bar = math.sqrt(t2 / 2.0)
    return t2, t_bar, t_bar / t0


def denominator(spec: PotentialSpec, cfg: QuadratureConfig = QuadratureConfig()) -> QuadResult:
    """``int_0^inf dP_in(t) dt`` via the diagonal of the kernel."""

    def integrand(k):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = big_phi(k, k, spec) / k
        return np.where(k == 0.0, 0.0, out)

    res = integrate_semi_infinite(integrand, cfg, scale=spec.a)
    return res._replace(value=math.pi * res.value, error=math.pi * res.error, tail=math.pi * res.tail)


def _numerator_integrand(spec: PotentialSpec, fd: FDConfig, fd_errors: list | None = None):
    def g(k, kp):
        return psi_kernel(k, kp, spec)

    def integrand(k):
        out = np.zeros_like(k)
        pos = k > 0
        if np.any(pos):
            res = mixed_partial(g, k[pos], fd, scale=spec.a)
            out[pos] = res.value / k[pos]
            if fd_errors is not None:
                fd_errors.append(float(np.max(res.error / k[pos])))
        return out

    return integrand


def numerator(
    spec: PotentialSpec,
    cfg: QuadratureConfig = QuadratureConfig(),
    fd: FDConfig = FDConfig(),
) -> QuadResult:
    """``int_0^inf t^2 dP_in(t) dt`` from the diagonal mixed partial of ``Psi``."""
    res = integrate_semi_infinite(_numerator_integrand(spec, fd), cfg, scale=spec.a)
    return res._replace(value=math.pi * res.value, error=math.pi * res.error, tail=math.pi * res.tail)


def mean_energy(spec: PotentialSpec) -> tuple[float, float]:
    """``(<E>, <E>/V_b)`` of the initial box mode: ``pi^2/(2a^2) + v0``."""
    e = math.pi**2 / (2.0 * spec.a**2) + spec.v0
    return e, e / spec.barrier_height


def completeness(spec: PotentialSpec, cfg: QuadratureConfig = QuadratureConfig()) -> QuadResult:
    """Total continuum occupation ``int_0^inf |C_k|^2 dk``."""
    return integrate_semi_infinite(lambda k: spectral_weight(k, spec), cfg, scale=spec.a)


def completeness_deficit(spec: PotentialSpec, cfg: QuadratureConfig = QuadratureConfig()) -> tuple[float, float]:
    """Bound-state occupation inferred from completeness, ``(clamped, raw)``.

    ``raw = 1 - int |C_k|^2 dk``; the first value is clamped to ``[0, 1]``.
    """
    raw = 1.0 - completeness(spec, cfg).value
    return min(max(raw, 0.0), 1.0), raw


def energy_sum_rule(spec: PotentialSpec, cfg: QuadratureConfig = QuadratureConfig()) -> QuadResult:
    """Continuum part of ``<H>``: ``int_0^inf |C_k|^2 k^2/2 dk``."""
    return integrate_semi_infinite(lambda k: spectral_weight(k, spec) * 0.5 * k * k, cfg, scale=spec.a)


def lifetime(
    spec: PotentialSpec,
    cfg: QuadratureConfig = QuadratureConfig(),
    fd: FDConfig = FDConfig(),
) -> MomentResult:
    """Assemble moments, lifetimes, mean energy and the bound-state diagnostic."""
    try:
        den = denominator(spec, cfg)
        fd_errors: list[float] = []
        num = integrate_semi_infinite(_numerator_integrand(spec, fd, fd_errors), cfg, scale=spec.a)
        num = num._replace(value=math.pi * num.value, error=math.pi * num.error, tail=math.pi * num.tail)
        deficit, raw = completeness_deficit(spec, cfg)
    except LifetimeError as exc:
        raise type(exc)(f"v0a2={spec.v0a2:g}: {exc}") from exc
    if not (num.value > 0 and den.value > 0):
        raise LifetimeError(f"v0a2={spec.v0a2:g}: non-positive moments num={num.value} den={den.value}")
    t2, t_bar, tau_bar = derived_times(num.value, den.value, spec.t0)
    return MomentResult(
        numerator=num.value,
        denominator=den.value,
        t2_mean=t2,
        t_bar=t_bar,
        tau_bar=tau_bar,
        e_mean=mean_energy(spec)[1],
        deficit=deficit,
        deficit_raw=raw,
        bound_state=deficit > BOUND_STATE_THRESHOLD,
        num_error=num.error,
        den_error=den.error,
        num_tail=num.tail,
        den_tail=den.tail,
        tail_flag=num.tail_flag or den.tail_flag,
        fd_error=max(fd_errors, default=0.0),
        spec=spec,
    )


def time_moments(delta_p: Callable[[float], float], t_max: float = math.inf) -> tuple[float, float, float, float]:
    """Moments of a caller-supplied ``dP(t)`` by direct time quadrature.

    Returns ``(int t^2 dP, int dP, <t^2>, t_bar)`` with ``t_bar = sqrt(<t^2>/2)``,
    which equals the mean lifetime ``1/Gamma`` for ``dP = exp(-Gamma t)``.
    """
    opts = dict(epsabs=0.0, epsrel=1e-12, limit=500)
    den = integrate.quad(delta_p, 0.0, t_max, **opts)[0]
    num = integrate.quad(lambda t: t * t * delta_p(t), 0.0, t_max, **opts)[0]
    t2 = num / den
    return num, den, t2, math.sqrt(t2 / 2.0)
