"""Brute-force time-domain oracle for the lifetime moments.

The unbound wavepacket is summed directly on a fixed wavenumber grid, its
in-well norm ``dP(t)`` is sampled on a uniform time grid up to an explicit
cutoff, and the time moments are integrated with Simpson's rule.  Nothing
here uses the diagonal reduction in :mod:`barrier_lifetime.moments`.

The wavenumber grid is a midpoint rule in energy with spacing
``2 pi / (recurrence * t_max)``.  A discrete sum of modes is periodic in time
with that period, so the grid reproduces the continuum wavepacket on
``[0, t_max]`` up to the (decayed) amplitude at ``recurrence * t_max - t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import TailDominated
from .spectral import PotentialSpec, chi, phi, q_of_k

__all__ = ["TimeGrid", "TimeMoments", "psi_u", "delta_p_in", "delta_p_double_sum", "sample_delta_p", "moments_time_domain"]


@dataclass(frozen=True)
class TimeGrid:
    """Fixed grids for the oracle.

    ``t_max`` is in units of ``t0``; ``n_t`` is the number of time steps on
    ``[0, t_max]``.  ``k_nodes``/``k_weights`` discretise ``int dk`` and
    ``x_nodes``/``x_weights`` discretise ``int_0^a dx``.  ``recurrence`` is the
    integer ratio between the grid's recurrence time and ``t_max`` (0 when the
    k grid is not an energy-uniform mesh).
    """

    t_max: float
    n_t: int
    k_nodes: np.ndarray
    k_weights: np.ndarray
    x_nodes: np.ndarray
    x_weights: np.ndarray
    recurrence: int = 0
    energy_step: float = 0.0

    def __post_init__(self):
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.n_t < 2 or self.n_t % 2:
            raise ValueError("n_t must be an even integer >= 2")
        if len(self.k_nodes) == 0 or len(self.x_nodes) == 0:
            raise ValueError("grids must be non-empty")
        if len(self.k_nodes) != len(self.k_weights) or len(self.x_nodes) != len(self.x_weights):
            raise ValueError("nodes and weights differ in length")

    @classmethod
    def build(
        cls,
        spec: PotentialSpec,
        t_max: float = 50.0,
        n_t: int = 4096,
        kappa_max: float = 30.0,
        recurrence: int = 3,
        n_x: int = 128,
    ) -> "TimeGrid":
        """Energy-uniform k grid up to ``ka = kappa_max`` and Gauss-Legendre x grid."""
        if recurrence < 1:
            raise ValueError("recurrence must be a positive integer")
        if not (t_max > 0 and kappa_max > 0):
            raise ValueError("t_max and kappa_max must be positive")
        t_nat = t_max * spec.t0
        de = 2.0 * math.pi / (recurrence * t_nat)
        e_max = 0.5 * (kappa_max / spec.a) ** 2
        n_k = int(math.ceil(e_max / de))
        energies = (np.arange(n_k) + 0.5) * de
        k = np.sqrt(2.0 * energies)
        xg, wg = np.polynomial.legendre.leggauss(n_x)
        x = 0.5 * spec.a * (xg + 1.0)
        return cls(t_max, n_t, k, de / k, x, 0.5 * spec.a * wg, recurrence, de)

    def times(self, spec: PotentialSpec) -> np.ndarray:
        """Uniform sample times in natural units."""
        return np.linspace(0.0, self.t_max * spec.t0, self.n_t + 1)

    def refined(self, spec: PotentialSpec, factor: int = 2) -> "TimeGrid":
        """Same cutoffs with the energy spacing divided by ``factor``."""
        kappa_max = float(self.k_nodes[-1] * spec.a) if self.recurrence else None
        if kappa_max is None:
            raise ValueError("refinement needs an energy-uniform grid")
        return TimeGrid.build(spec, self.t_max, self.n_t, kappa_max, self.recurrence * factor, len(self.x_nodes))


@dataclass
class TimeMoments:
    num: float
    den: float
    num_tail: float
    den_tail: float
    tail_bound: float
    decay_rate: float
    t: np.ndarray
    delta_p: np.ndarray

    @property
    def t2_mean(self) -> float:
        return self.num / self.den


def _amplitudes(spec, grid):
    return grid.k_weights * phi(grid.k_nodes, spec)


def psi_u(x, t, spec: PotentialSpec, grid: TimeGrid) -> np.ndarray:
    """Unbound wavepacket on the grid; result has shape ``x.shape + t.shape``."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    c = _amplitudes(spec, grid)
    q = q_of_k(grid.k_nodes, spec)
    e = 0.5 * grid.k_nodes**2
    modes = np.sin(np.multiply.outer(x.ravel(), q)) * c
    out = modes @ np.exp(-1j * np.multiply.outer(e, t.ravel()))
    return out.reshape(x.shape + t.shape)


def delta_p_in(t, spec: PotentialSpec, grid: TimeGrid, chunk: int = 64) -> np.ndarray:
    """``int_0^a |Psi_u(x,t)|^2 dx`` by x-quadrature, for arbitrary times."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(t.shape)
    for s in range(0, len(t), chunk):
        psi = psi_u(grid.x_nodes, t[s:s + chunk], spec, grid)
        out[s:s + chunk] = grid.x_weights @ (psi.real**2 + psi.imag**2)
    return out


def delta_p_double_sum(t, spec: PotentialSpec, grid: TimeGrid) -> np.ndarray:
    """Same quantity from the kernel sum ``sum c_j c_l chi_jl exp(i(E_l-E_j)t)``.

    Quadratic in the number of k nodes; meant for small grids.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    c = _amplitudes(spec, grid)
    q = q_of_k(grid.k_nodes, spec)
    overlap = chi(q[:, None], q[None, :], spec.a) * np.outer(c, c)
    ph = np.exp(-0.5j * np.multiply.outer(t, grid.k_nodes**2))
    return np.einsum("tj,jl,tl->t", ph.conj(), overlap, ph).real


def sample_delta_p(spec: PotentialSpec, grid: TimeGrid) -> tuple[np.ndarray, np.ndarray]:
    """``dP`` on the uniform time grid, via FFT when the grid allows it."""
    t = grid.times(spec)
    if not grid.recurrence:
        return t, delta_p_in(t, spec, grid)
    m = grid.recurrence * grid.n_t
    c = _amplitudes(spec, grid)
    q = q_of_k(grid.k_nodes, spec)
    # exp(-i E_j t_n) = exp(-i pi n / m) exp(-2 pi i j n / m) for E_j = (j + 1/2) dE
    idx = np.arange(len(c)) % m
    dp = np.zeros(grid.n_t + 1)
    shift = np.exp(-1j * math.pi * np.arange(grid.n_t + 1) / m)
    for xi, wi in zip(grid.x_nodes, grid.x_weights):
        coeff = np.bincount(idx, weights=c * np.sin(q * xi), minlength=m)
        psi = np.fft.fft(coeff)[: grid.n_t + 1] * shift
        dp += wi * (psi.real**2 + psi.imag**2)
    return t, dp


def moments_time_domain(spec: PotentialSpec, grid: TimeGrid, tail_limit: float = 0.05) -> TimeMoments:
    """Simpson moments of ``dP`` on ``[0, t_max]`` plus an exponential tail bound.

    The tail is the analytic integral of ``A exp(-gamma (t - T))`` fitted to
    the last tenth of the samples.  ``tail_bound`` is the larger relative tail
    of the two moments.

    Raises:
        TailDominated: if ``tail_bound > tail_limit`` or the fitted envelope
            does not decay.
    """
    t, dp = sample_delta_p(spec, grid)
    if np.any(dp < 0):
        raise AssertionError("negative in-well probability excess")
    num = integrate.simpson(t * t * dp, x=t)
    den = integrate.simpson(dp, x=t)
    n_fit = max(len(t) // 10, 3)
    tt, yy = t[-n_fit:], dp[-n_fit:]
    slope, icept = np.polyfit(tt, np.log(np.maximum(yy, np.finfo(float).tiny)), 1)
    gamma = -slope
    T = t[-1]
    if gamma <= 0:
        raise TailDominated(f"dP(t) does not decay near t_max={grid.t_max} t0 (fitted rate {gamma:.3g})")
    amp = math.exp(icept + slope * T)
    den_tail = amp / gamma
    num_tail = amp * (T * T / gamma + 2 * T / gamma**2 + 2 / gamma**3)
    bound = max(num_tail / num, den_tail / den)
    if bound > tail_limit:
        raise TailDominated(
            f"time cutoff t_max={grid.t_max} t0 leaves a relative tail of {bound:.3g} (> {tail_limit})"
        )
    return TimeMoments(float(num), float(den), num_tail, den_tail, bound, gamma, t, dp)
