"""Closed-form continuum physics of a square well behind an l=1 centrifugal barrier.

Units are hbar = m = 1, so a continuum state of wavenumber ``k`` has energy
``k**2 / 2`` and in-well wavenumber ``q = sqrt(k**2 - 2*v0)``; the natural
time unit is ``t0 = 2 a**2`` and the barrier height at ``x = a`` is
``1 / a**2``.

The initial state is the lowest box mode ``sqrt(2/a) sin(pi x / a)`` on
``[0, a]``.  Inside the well the unbound part of the wavefunction is

    Psi_u(x, t) = int_0^inf dk phi(k) sin(q x) exp(-i k^2 t / 2)

where ``phi`` multiplies the *unnormalised* ``sin(q x)``: it is the overlap
with the energy-normalised continuum state times that state's in-well
amplitude, i.e. it carries the normalisation ``(2/pi) k^2 / f^2(k)`` once
more than the expansion coefficient.  The occupation density of the
continuum is therefore :func:`spectral_weight`, not ``phi**2``.

All functions broadcast over numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PotentialSpec",
    "SpectralKernel",
    "q_of_k",
    "f_squared",
    "phi",
    "chi",
    "big_phi",
    "psi_kernel",
    "phase_f",
    "spectral_weight",
]

PI = math.pi


@dataclass(frozen=True)
class PotentialSpec:
    """Well of width ``a`` and depth ``v0 <= 0`` with an ``ell = 1`` barrier outside."""

    a: float = 1.0
    v0: float = 0.0
    ell: int = 1

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"well width must be positive, got a={self.a}")
        if not self.v0 <= 0:
            raise ValueError(f"well depth must satisfy v0 <= 0, got v0={self.v0}")
        if self.ell != 1:
            raise ValueError(f"only ell=1 is supported, got ell={self.ell}")

    @property
    def t0(self) -> float:
        return 2.0 * self.a**2

    @property
    def barrier_height(self) -> float:
        return self.ell * (self.ell + 1) / (2.0 * self.a**2)

    @property
    def v0a2(self) -> float:
        """Dimensionless depth; all lifetimes in units of ``t0`` depend only on this."""
        return self.v0 * self.a**2

    @classmethod
    def from_v0a2(cls, v0a2: float, a: float = 1.0) -> "PotentialSpec":
        return cls(a=a, v0=v0a2 / a**2)


def q_of_k(k, spec: PotentialSpec):
    """In-well wavenumber ``sqrt(k^2 - 2 v0)``."""
    k = np.asarray(k, dtype=float)
    return np.sqrt(k * k - 2.0 * spec.v0)


def _bracket(kappa, alpha):
    """Square bracket of the l=1 normalisation function; equals (ka)^2 a^2 f^2."""
    s, c = np.sin(alpha), np.cos(alpha)
    k2 = kappa * kappa
    return (1.0 + k2) * alpha**2 * c**2 + (1.0 - k2 + k2 * k2) * s**2 + alpha * np.sin(2.0 * alpha)


def f_squared(k, spec: PotentialSpec):
    """Continuum normalisation function ``f^2(k)`` for l=1 (diverges as k -> 0)."""
    k = np.asarray(k, dtype=float)
    kappa = k * spec.a
    alpha = q_of_k(k, spec) * spec.a
    with np.errstate(divide="ignore"):
        return _bracket(kappa, alpha) / (kappa * kappa * spec.a**2)


def _box_ratio(alpha):
    """``sin(alpha) / (pi^2 - alpha^2)`` written without the 0/0 at alpha = pi."""
    d = alpha - PI
    return np.sinc(d / PI) / (2.0 * PI + d)


def phi(k, spec: PotentialSpec):
    """Spectral amplitude multiplying ``sin(q x)`` in the unbound wavepacket.

    Uses ``k^2 / f^2 = (ka)^4 / bracket`` so the small-k limit is regular;
    ``phi(0) = 0``.
    """
    k = np.asarray(k, dtype=float)
    kappa = k * spec.a
    alpha = q_of_k(k, spec) * spec.a
    br = _bracket(kappa, alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 2.0 * np.sqrt(2.0 * spec.a) * _box_ratio(alpha) * (kappa * kappa) ** 2 / br
    return np.where(kappa == 0.0, 0.0, out)


def spectral_weight(k, spec: PotentialSpec):
    """Occupation density |C_k|^2 of the continuum: ``(pi/2) f^2/k^2 phi^2``.

    Integrates to ``1 - |C_b|^2`` over ``k > 0``.
    """
    k = np.asarray(k, dtype=float)
    kappa = k * spec.a
    alpha = q_of_k(k, spec) * spec.a
    br = _bracket(kappa, alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 4.0 * PI * spec.a * _box_ratio(alpha) ** 2 * (kappa * kappa) ** 2 / br
    return np.where(kappa == 0.0, 0.0, out)


def chi(q, q_prime, a: float):
    """In-well overlap ``int_0^a sin(q x) sin(q' x) dx``.

    Evaluated as ``(sin((q-q')a)/(q-q') - sin((q+q')a)/(q+q')) / 2``, which
    equals ``[q' cos(q'a) sin(qa) - q cos(qa) sin(q'a)] / (q^2 - q'^2)`` but has
    no cancellation near the diagonal; on it the value is
    ``a/2 - sin(2qa)/(4q)``.
    """
    q = np.asarray(q, dtype=float)
    q_prime = np.asarray(q_prime, dtype=float)
    d = q - q_prime
    s = q + q_prime
    near = a * np.sinc(d * a / PI)
    with np.errstate(divide="ignore", invalid="ignore"):
        far = np.where(s == 0.0, a, np.sin(s * a) / np.where(s == 0.0, 1.0, s))
    return 0.5 * (near - far)


def big_phi(k, k_prime, spec: PotentialSpec):
    """Kernel ``phi(k) phi(k') chi(q, q')`` of the double-integral form of dP_in(t)."""
    return phi(k, spec) * phi(k_prime, spec) * chi(q_of_k(k, spec), q_of_k(k_prime, spec), spec.a)


def psi_kernel(k, k_prime, spec: PotentialSpec):
    """``big_phi(k, k') / (k k')``, continued by 0 where either argument is 0."""
    k = np.asarray(k, dtype=float)
    k_prime = np.asarray(k_prime, dtype=float)
    den = k * k_prime
    with np.errstate(divide="ignore", invalid="ignore"):
        out = big_phi(k, k_prime, spec) / den
    return np.where(den == 0.0, 0.0, out)


def phase_f(k, k_prime, spec: PotentialSpec):
    """Frequency ``((k'a)^2 - (ka)^2) / t0``, i.e. ``(k'^2 - k^2)/2``."""
    k = np.asarray(k, dtype=float)
    k_prime = np.asarray(k_prime, dtype=float)
    return ((k_prime * spec.a) ** 2 - (k * spec.a) ** 2) / spec.t0


class SpectralKernel:
    """The closed forms above bound to one :class:`PotentialSpec`."""

    def __init__(self, spec: PotentialSpec):
        self.spec = spec

    def q(self, k):
        return q_of_k(k, self.spec)

    def f_squared(self, k):
        return f_squared(k, self.spec)

    def phi(self, k):
        return phi(k, self.spec)

    def weight(self, k):
        return spectral_weight(k, self.spec)

    def chi(self, q, q_prime):
        return chi(q, q_prime, self.spec.a)

    def big_phi(self, k, k_prime):
        return big_phi(k, k_prime, self.spec)

    def psi(self, k, k_prime):
        return psi_kernel(k, k_prime, self.spec)

    def phase(self, k, k_prime):
        return phase_f(k, k_prime, self.spec)

    def __repr__(self):
        return f"SpectralKernel({self.spec!r})"
