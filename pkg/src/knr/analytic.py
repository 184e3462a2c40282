"""Closed-form steady state of the driven Kerr resonator at zero temperature.

With ``x = |epsilon|^2`` and ``F(a) = 0F2(; a, a*; 2x)`` the exact steady
state gives

    P_n   = x^n / n! * Gamma(l)Gamma(l*) / (Gamma(n+l)Gamma(n+l*))
            * 0F2(; n+l, n+l*; x) / F(l)
    <n>   = x / |l|^2 * F(l+1) / F(l)
    g2(0) = x^2 / (|l|^2 |l+1|^2) * F(l+2) / F(l) / <n>^2

and the Wigner function

    W(alpha) = (2/pi) exp(-2|alpha|^2) |0F1(; l; -2 alpha* epsilon)|^2 / F(l)

where ``l`` is the pole parameter from :func:`knr.model.derive`. Every Gamma
ratio above reduces to a rising factorial, so no Gamma function is evaluated
in the hot path and all sums have positive terms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .errors import DegenerateWindow, VacuumState
from .model import (
    CALIBRATED_CONVENTION,
    CALIBRATED_DAMPING_SCALE,
    KnrParams,
    LambdaConvention,
    derive,
)
from .specfun import DEFAULT_SERIES, SeriesConfig, hyp0f1, hyp0f2

__all__ = [
    "PhotonDistribution",
    "ObservableSet",
    "WignerGrid",
    "DEFAULT_WINDOW",
    "DEFAULT_RESOLUTION",
    "photon_distribution",
    "mean_photon_number",
    "g2_zero_delay",
    "observables",
    "wigner",
    "phase_space_axes",
]

# P_n below this for three consecutive n ends the distribution
_PN_CUTOFF = 1e-12
_VACUUM_MEAN = 1e-14

DEFAULT_WINDOW = (-4.0, 4.0, -4.0, 4.0)
DEFAULT_RESOLUTION = (201, 201)


@dataclass(frozen=True)
class PhotonDistribution:
    """Fock-state populations ``probs[n]`` for ``n = 0 .. n_max``.

    ``tail_mass`` bounds the population above ``n_max``; ``probs`` is scaled
    so that ``probs.sum() + tail_mass == 1``. ``raw_norm`` is the unscaled
    sum plus tail, a check on the series (it should be 1 to ~1e-13).
    """

    probs: np.ndarray
    n_max: int
    tail_mass: float
    raw_norm: float = 1.0

    def p(self, n: int) -> float:
        """Population of ``|n>`` (zero beyond the truncation)."""
        if n < 0:
            raise IndexError(n)
        return float(self.probs[n]) if n < len(self.probs) else 0.0

    def padded(self, size: int) -> np.ndarray:
        out = np.zeros(max(size, len(self.probs)))
        out[: len(self.probs)] = np.clip(self.probs, 0.0, None)
        return out[:size]

    def moments(self) -> tuple[float, float]:
        """``(sum n P_n, sum n(n-1) P_n)``."""
        n = np.arange(len(self.probs), dtype=float)
        p = np.clip(self.probs, 0.0, None)
        return float(np.dot(n, p)), float(np.dot(n * (n - 1), p))


@dataclass(frozen=True)
class ObservableSet:
    mean_n: float
    g2: float
    variance_n: float

    @classmethod
    def from_moments(cls, mean_n: float, g2: float) -> "ObservableSet":
        return cls(mean_n=mean_n, g2=g2, variance_n=mean_n + mean_n ** 2 * (g2 - 1.0))


@dataclass(frozen=True)
class WignerGrid:
    """Wigner function sampled on a rectangle, ``values[i, j] = W(x[i] + i y[j])``.

    ``norm_estimate`` is the trapezoidal integral of the absolutely
    normalized function over the window, before any rescaling; values below
    one indicate the window clips part of the state.
    """

    x_axis: np.ndarray
    y_axis: np.ndarray
    values: np.ndarray
    norm_estimate: float

    def integrate(self, weight=None) -> float:
        """Trapezoidal integral of ``W * weight(alpha)`` over the window."""
        f = self.values
        if weight is not None:
            f = f * weight(self.alpha())
        return float(trapezoid(trapezoid(f, self.y_axis, axis=1), self.x_axis))

    def alpha(self) -> np.ndarray:
        return self.x_axis[:, None] + 1j * self.y_axis[None, :]


def phase_space_axes(window=DEFAULT_WINDOW, resolution=DEFAULT_RESOLUTION):
    """Validated sample axes for a ``(xmin, xmax, ymin, ymax)`` window."""
    xmin, xmax, ymin, ymax = (float(v) for v in window)
    nx, ny = (int(v) for v in resolution)
    if not (xmin < xmax and ymin < ymax):
        raise DegenerateWindow(f"empty phase-space window {window!r}")
    if nx < 2 or ny < 2:
        raise DegenerateWindow(f"resolution must be at least 2x2, got {resolution!r}")
    return np.linspace(xmin, xmax, nx), np.linspace(ymin, ymax, ny)


def _pole_parameter(params, conv, damping_scale):
    params.require_analytic()
    d = derive(params, conv, damping_scale)
    return d.lam, d.eps2, d


def _real(value: complex, what: str) -> float:
    if abs(value.imag) > 1e-10 * max(abs(value.real), 1e-300):
        raise ArithmeticError(f"{what} has an imaginary residue {value.imag:.3g}")
    return value.real


def _norm(lam, x, cfg):
    # 0F2(; l, l*; 2x): real and >= 1 for conjugate parameters
    return _real(hyp0f2(lam, lam.conjugate(), 2.0 * x, cfg), "0F2 normalization")


def photon_distribution(params: KnrParams, cfg: SeriesConfig = DEFAULT_SERIES, *,
                        conv: LambdaConvention = CALIBRATED_CONVENTION,
                        damping_scale: float = CALIBRATED_DAMPING_SCALE) -> PhotonDistribution:
    """Steady-state photon-number distribution.

    The distribution runs up to the first ``n`` where three consecutive
    populations are below 1e-12 and the populations are provably decreasing
    (past the near-pole region ``n < -Re(lambda)``). The tail beyond is
    bounded with a geometric estimate from the last two populations.
    """
    lam, x, _ = _pole_parameter(params, conv, damping_scale)
    if x == 0.0:
        return PhotonDistribution(probs=np.array([1.0, 0.0, 0.0, 0.0]), n_max=3, tail_mass=0.0)
    log_norm = math.log(_norm(lam, x, cfg))
    log_x = math.log(x)
    n_guard = max(0, math.ceil(-lam.real)) + 1

    probs = []
    log_w = 0.0  # log of x^n / n! / prod_{j<n} |lam + j|^2
    run = 0
    n = 0
    while True:
        a = lam + n
        f_n = _real(hyp0f2(a, a.conjugate(), x, cfg), f"0F2 for P_{n}")
        p_n = math.exp(log_w + math.log(f_n) - log_norm)
        probs.append(p_n)
        run = run + 1 if p_n < _PN_CUTOFF else 0
        if run >= 3 and n >= n_guard and x / ((n + 1) * abs(a) ** 2) < 1.0:
            break
        log_w += log_x - math.log(n + 1) - 2.0 * math.log(abs(a))
        n += 1

    probs = np.array(probs)
    last, prev = probs[-1], probs[-2]
    ratio = last / prev if prev > 0 else 0.0
    tail = last * ratio / (1.0 - ratio) if 0.0 < ratio < 1.0 else 0.0
    raw = float(probs.sum())
    probs *= (1.0 - tail) / raw
    return PhotonDistribution(probs=probs, n_max=len(probs) - 1, tail_mass=tail,
                              raw_norm=raw + tail)


def mean_photon_number(params: KnrParams, cfg: SeriesConfig = DEFAULT_SERIES, *,
                       conv: LambdaConvention = CALIBRATED_CONVENTION,
                       damping_scale: float = CALIBRATED_DAMPING_SCALE) -> float:
    """Mean intracavity photon number ``<a^+ a>``."""
    lam, x, _ = _pole_parameter(params, conv, damping_scale)
    if x == 0.0:
        return 0.0
    lam1 = lam + 1
    ratio = _real(hyp0f2(lam1, lam1.conjugate(), 2.0 * x, cfg), "0F2") / _norm(lam, x, cfg)
    return x / abs(lam) ** 2 * ratio


def g2_zero_delay(params: KnrParams, cfg: SeriesConfig = DEFAULT_SERIES, *,
                  conv: LambdaConvention = CALIBRATED_CONVENTION,
                  damping_scale: float = CALIBRATED_DAMPING_SCALE) -> float:
    """Zero-delay second-order correlation ``<a^+2 a^2> / <a^+ a>^2``.

    Raises:
        VacuumState: if the mean photon number is below 1e-14.
    """
    kw = dict(conv=conv, damping_scale=damping_scale)
    mean = mean_photon_number(params, cfg, **kw)
    if mean < _VACUUM_MEAN:
        raise VacuumState(f"g2 is undefined for <n> = {mean:.3g}")
    lam, x, _ = _pole_parameter(params, conv, damping_scale)
    lam2 = lam + 2
    ratio = _real(hyp0f2(lam2, lam2.conjugate(), 2.0 * x, cfg), "0F2") / _norm(lam, x, cfg)
    second = x * x / (abs(lam) ** 2 * abs(lam + 1) ** 2) * ratio
    return second / mean ** 2


def observables(params: KnrParams, cfg: SeriesConfig = DEFAULT_SERIES, **kw) -> ObservableSet:
    """Mean, g2(0) and photon-number variance from the closed forms."""
    return ObservableSet.from_moments(mean_photon_number(params, cfg, **kw),
                                      g2_zero_delay(params, cfg, **kw))


def wigner(params: KnrParams, window=DEFAULT_WINDOW, resolution=DEFAULT_RESOLUTION,
           cfg: SeriesConfig = DEFAULT_SERIES, *, normalize: bool = True,
           conv: LambdaConvention = CALIBRATED_CONVENTION,
           damping_scale: float = CALIBRATED_DAMPING_SCALE) -> WignerGrid:
    """Steady-state Wigner function on a rectangular grid.

    Each grid point is independent; the series is summed for the whole grid
    at once, so the result does not depend on evaluation order. With
    ``normalize=True`` the values are rescaled so the trapezoidal integral
    over the window is exactly one.
    """
    xs, ys = phase_space_axes(window, resolution)
    lam, x, d = _pole_parameter(params, conv, damping_scale)
    alpha = xs[:, None] + 1j * ys[None, :]
    series = hyp0f1(lam, -2.0 * alpha.conj() * d.epsilon, cfg)
    values = (2.0 / math.pi) * np.exp(-2.0 * np.abs(alpha) ** 2) * np.abs(series) ** 2
    values /= _norm(lam, x, cfg)
    norm = float(trapezoid(trapezoid(values, ys, axis=1), xs))
    if normalize:
        values = values / norm
    return WignerGrid(x_axis=xs, y_axis=ys, values=values, norm_estimate=norm)
