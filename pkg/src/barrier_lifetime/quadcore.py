"""Vectorised adaptive quadrature, tail estimation and mixed partial derivatives.

Integrands are called with 1-D numpy arrays of abscissae and must return an
array of the same shape; every panel of a refinement sweep is evaluated in a
single call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DerivativeUnstable, NonConvergence, TailDominated

__all__ = [
    "QuadratureConfig",
    "FDConfig",
    "QuadResult",
    "FDResult",
    "integrate_adaptive",
    "integrate_semi_infinite",
    "tail_estimate",
    "mixed_partial",
    "richardson",
]

# 21-point Kronrod rule with its embedded 10-point Gauss rule (QUADPACK qk21).
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208977449264,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _WG
GAUSS_WEIGHTS[11:20:2] = _WG[::-1]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    """Controls every integral over wavenumber.

    ``k_max`` is the dimensionless truncation of ``ka``; the physical cut is
    ``k_max / a``.  ``panel_seed`` is the initial panel width in units of the
    half-period ``pi / a`` of the in-well oscillation.  When ``strict_tail`` is
    set a tail estimate above ``rel_tol * |I|`` raises :class:`TailDominated`
    instead of only setting the flag.
    """

    k_max: float = 40.0 * math.pi
    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    max_panels: int = 2**16
    panel_seed: float = 1.0
    strict_tail: bool = False

    def __post_init__(self):
        if not self.k_max > 0:
            raise ValueError("k_max must be positive")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_panels < 1:
            raise ValueError("max_panels must be at least 1")
        if not self.panel_seed > 0:
            raise ValueError("panel_seed must be positive")


@dataclass(frozen=True)
class FDConfig:
    """Central-difference step and Richardson depth for :func:`mixed_partial`.

    The actual step at wavenumber ``k`` is ``h0 * max(k a, 1) / a``.
    """

    h0: float = 1e-3
    richardson_levels: int = 3

    def __post_init__(self):
        if not self.h0 > 0:
            raise ValueError("h0 must be positive")
        if self.richardson_levels < 2:
            raise ValueError("richardson_levels must be at least 2")


class QuadResult(NamedTuple):
    value: float
    error: float
    tail: float = 0.0
    tail_flag: bool = False
    n_panels: int = 0


class FDResult(NamedTuple):
    value: np.ndarray | float
    error: np.ndarray | float
    order: np.ndarray | float


def _gk21(f, a, b):
    """Kronrod value, error estimate and round-off flag on each panel [a_i, b_i]."""
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = centre[:, None] + half[:, None] * KRONROD_NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise ValueError("integrand returned non-finite values")
    kron = half * (fx @ KRONROD_WEIGHTS)
    gauss = half * (fx @ GAUSS_WEIGHTS)
    resabs = np.abs(half) * (np.abs(fx) @ KRONROD_WEIGHTS)
    mean = kron / (2.0 * half)
    resasc = np.abs(half) * (np.abs(fx - mean[:, None]) @ KRONROD_WEIGHTS)
    err = np.abs(kron - gauss)
    # QUADPACK error scaling and round-off floor
    scaled = np.where(resasc > 0, resasc * np.minimum(1.0, (200.0 * err / np.where(resasc > 0, resasc, 1.0)) ** 1.5), err)
    floor = 50.0 * _EPS * resabs
    return kron, np.maximum(scaled, floor), scaled <= floor


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    cfg: QuadratureConfig = QuadratureConfig(),
    breakpoints: Sequence[float] | np.ndarray | None = None,
) -> QuadResult:
    """Globally adaptive Gauss-Kronrod (G10/K21) quadrature on ``[lo, hi]``.

    Panels whose error exceeds their share of the tolerance are bisected,
    all at once, until ``sum(err) <= max(rel_tol*|I|, abs_tol)``.

    Raises:
        NonConvergence: if ``cfg.max_panels`` is reached above tolerance.
    """
    if not hi > lo:
        raise ValueError("need lo < hi")
    edges = [lo, hi]
    if breakpoints is not None:
        inner = np.asarray(breakpoints, dtype=float)
        inner = inner[(inner > lo) & (inner < hi)]
        edges = np.unique(np.concatenate([[lo, hi], inner]))
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1], edges[1:]
    vals, errs, flat = _gk21(f, a, b)
    while True:
        total = vals.sum()
        err = errs.sum()
        tol = max(cfg.rel_tol * abs(total), cfg.abs_tol)
        if err <= tol:
            return QuadResult(float(total), float(err), n_panels=len(a))
        # panels already at the round-off floor gain nothing from bisection
        splittable = ((b - a) > 1e-13 * max(abs(lo), abs(hi), 1.0)) & ~flat
        pick = splittable & (errs > tol / len(errs))
        if not pick.any():
            pick = splittable & (errs == errs[splittable].max()) if splittable.any() else pick
        room = cfg.max_panels - len(a)
        if room <= 0 or not pick.any():
            raise NonConvergence(
                f"adaptive quadrature on [{lo:g}, {hi:g}] stopped at {len(a)} panels "
                f"with error {err:.3g} > tolerance {tol:.3g}"
                + ("" if pick.any() or room <= 0 else " (round-off limited)")
            )
        idx = np.flatnonzero(pick)
        if len(idx) > room:
            idx = idx[np.argsort(errs[idx])[::-1][:room]]
            pick = np.zeros_like(pick)
            pick[idx] = True
        mid = 0.5 * (a[pick] + b[pick])
        na = np.concatenate([a[pick], mid])
        nb = np.concatenate([mid, b[pick]])
        nv, ne, nf = _gk21(f, na, nb)
        keep = ~pick
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])
        flat = np.concatenate([flat[keep], nf])
        order = np.argsort(a, kind="stable")
        a, b, vals, errs, flat = a[order], b[order], vals[order], errs[order], flat[order]


def tail_estimate(f, cut: float, period: float) -> tuple[float, float]:
    """Estimate ``int_cut^inf f`` from an envelope fitted over ``[cut/10, cut]``.

    The fit uses averages of ``f`` over windows of one ``period`` so that
    oscillating integrands are represented by their mean envelope.  The model
    is ``A k^-p exp(d / k^2 + e / k^4)``, a power law with its first two
    corrections (the spectral envelopes depend on ``k^2 + const``).  Cutting an oscillation
    mid-period leaves a boundary term the envelope cannot see, so the
    estimate is averaged over cut points spanning the last period.

    Returns ``(correction, exponent)``; the correction is ``inf`` when the
    fitted decay is not integrable and ``0`` when the window averages change
    sign.
    """
    start = cut / 10.0
    n = max(int(np.floor((cut - start) / period)), 4)
    edges = np.linspace(start, cut, n + 1)
    a, b = edges[:-1], edges[1:]
    vals = _gk21(f, a, b)[0]
    avg = vals / (b - a)
    if np.all(avg == 0.0):
        return 0.0, math.inf
    sign = np.sign(avg)
    if not (np.all(sign > 0) or np.all(sign < 0)):
        return 0.0, math.nan
    mid = 0.5 * (a + b)
    design = np.column_stack([np.ones_like(mid), -np.log(mid), mid**-2.0, mid**-4.0])
    (icept, p, d, e), *_ = np.linalg.lstsq(design, np.log(np.abs(avg)), rcond=None)
    if p <= 1.0:
        return math.inf, float(p)
    amp = sign[0] * math.exp(icept)

    def envelope_tail(c):
        # exp(d/k^2 + e/k^4) expanded to second order, integrated term by term
        c2 = 0.5 * d * d + e
        return amp * (c ** (1.0 - p) / (p - 1.0) + d * c ** (-1.0 - p) / (p + 1.0) + c2 * c ** (-3.0 - p) / (p + 3.0))

    # mean over c in [cut - P, cut] of  envelope_tail(c) - int_c^cut f
    lo = np.array([cut - period])
    hi = np.array([cut])
    smoothed = _gk21(envelope_tail, lo, hi)[0][0] / period
    weighted = _gk21(lambda k: f(k) * (k - lo[0]), lo, hi)[0][0] / period
    return float(smoothed - weighted), float(p)


def integrate_semi_infinite(
    f: Callable[[np.ndarray], np.ndarray],
    cfg: QuadratureConfig = QuadratureConfig(),
    scale: float = 1.0,
) -> QuadResult:
    """Integrate ``f`` over ``[0, inf)`` in wavenumber.

    The body ``[0, k_max/scale]`` is integrated adaptively from panels of
    width ``panel_seed * pi / scale`` (geometrically refined towards 0), and
    a power-law tail fitted on the last decade is added.  ``tail`` reports
    that correction; ``tail_flag`` is set when ``|tail| > rel_tol * |I|``.
    """
    cut = cfg.k_max / scale
    width = cfg.panel_seed * math.pi / scale
    uniform = np.arange(width, cut, width)
    near_zero = width * 2.0 ** -np.arange(1, 11)
    body = integrate_adaptive(f, 0.0, cut, cfg, breakpoints=np.concatenate([near_zero, uniform]))
    tail, _ = tail_estimate(f, cut, math.pi / scale)
    value = body.value + (tail if math.isfinite(tail) else 0.0)
    flag = not math.isfinite(tail) or abs(tail) > cfg.rel_tol * abs(value)
    if flag and (cfg.strict_tail or not math.isfinite(tail)):
        raise TailDominated(f"tail estimate {tail:.3g} beyond k={cut:g} vs integral {value:.3g}")
    return QuadResult(value, body.error, float(tail), flag, body.n_panels)


def richardson(seq: np.ndarray, orders: Sequence[int], ratio: float = 2.0) -> np.ndarray:
    """Richardson table for a sequence at steps h, h/ratio, ... .

    ``orders[j]`` is the power of ``h`` eliminated at column ``j+1``.  The
    first axis of ``seq`` indexes the level; returns the full lower-triangular
    table with shape ``(L, L) + seq.shape[1:]`` (unused entries are nan).
    """
    seq = np.asarray(seq, dtype=float)
    L = seq.shape[0]
    table = np.full((L, L) + seq.shape[1:], np.nan)
    table[:, 0] = seq
    for j in range(1, L):
        fac = ratio ** orders[j - 1] - 1.0
        table[j:, j] = table[j:, j - 1] + (table[j:, j - 1] - table[j - 1:-1, j - 1]) / fac
    return table


def mixed_partial(
    g: Callable[[np.ndarray, np.ndarray], np.ndarray],
    k,
    fd: FDConfig = FDConfig(),
    scale: float = 1.0,
) -> FDResult:
    """Richardson-extrapolated cross-stencil estimate of d^2 g / dk dk' at (k, k).

    ``g`` must accept two broadcastable arrays.  ``k`` may be a scalar or an
    array; points with ``k < h`` use ``h = k/2`` so that no stencil point is
    negative, and ``k == 0`` uses the forward stencil centred at ``(h, h)``.

    Raises:
        DerivativeUnstable: if the step-halving differences grow above the
            round-off floor.
    """
    kk = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(kk < 0):
        raise ValueError("mixed_partial needs k >= 0")
    h = fd.h0 * np.maximum(kk * scale, 1.0) / scale
    h = np.where(kk < 1.5 * h, 0.5 * kk, h)
    zero = kk == 0.0
    h = np.where(zero, fd.h0 / scale, h)
    centre = np.where(zero, 0.0, kk)
    L = fd.richardson_levels
    steps = h[None, :] * 0.5 ** np.arange(L)[:, None]
    c = centre[None, :] + np.where(zero, steps, 0.0)
    p, m = c + steps, c - steps
    gpp, gpm, gmp, gmm = g(p, p), g(p, m), g(m, p), g(m, m)
    seq = (gpp - gpm - gmp + gmm) / (4.0 * steps**2)
    scale_g = np.max(np.abs(np.stack([gpp, gpm, gmp, gmm])), axis=(0, 1))
    central = richardson(seq, [2 * j for j in range(1, L)])
    forward = richardson(seq, list(range(1, L)))
    value = np.where(zero, forward[L - 1, L - 1], central[L - 1, L - 1])
    prev = np.where(zero, forward[L - 2, L - 2], central[L - 2, L - 2])
    err = np.abs(value - prev)
    d1 = np.abs(seq[1] - seq[0])
    floor = 1e3 * _EPS * scale_g / steps[-1] ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        order = np.log2(d1 / np.abs(seq[-1] - seq[-2])) if L >= 3 else np.full_like(d1, np.nan)
    if L >= 3:
        d2 = np.abs(seq[-1] - seq[-2])
        bad = (d2 > d1) & (d2 > floor)
        if np.any(bad):
            i = int(np.flatnonzero(bad)[0])
            raise DerivativeUnstable(
                f"non-contracting Richardson sequence at k={kk[i]:.6g}: {seq[:, i]}"
            )
    if np.ndim(k) == 0:
        return FDResult(float(value[0]), float(err[0]), float(order[0]))
    return FDResult(value, err, order)
