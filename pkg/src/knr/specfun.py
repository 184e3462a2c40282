"""Complex Gamma, log-Gamma and the 0F1 / 0F2 hypergeometric series.

All functions take plain Python numbers (``complex`` or anything convertible
to it); :func:`hyp0f1` also accepts a numpy array for its argument ``z`` so a
whole phase-space grid can be evaluated in one call.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, PoleError

__all__ = [
    "SeriesConfig",
    "complex_gamma",
    "complex_log_gamma",
    "hyp0f1",
    "hyp0f2",
]

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_{2k} / (2k (2k - 1)) for the Stirling series, k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
# Re(z) threshold above which the Stirling series is used directly
_STIRLING_SHIFT = 12.0

# |z| beyond which exp(log Gamma) is more accurate than the Lanczos sum
_LANCZOS_RADIUS = 5.0

_POLE_TOL = 4.0 * np.finfo(float).eps


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation controls shared by the hypergeometric series.

    The stop rule fires once two consecutive terms are below
    ``max(rel_tol * |partial sum|, abs_tol)`` and the term ratio has
    dropped below one half for good, so the neglected tail is bounded by
    the last term.
    """

    rel_tol: float = 1e-14
    abs_tol: float = 1e-300
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.abs_tol < 0:
            raise ValueError("abs_tol must be non-negative")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")


DEFAULT_SERIES = SeriesConfig()


def _check_pole(z: complex, what: str = "z") -> None:
    n = round(z.real)
    if n <= 0 and abs(z.imag) <= _POLE_TOL * max(1.0, abs(z)) \
            and abs(z.real - n) <= _POLE_TOL * max(1.0, abs(z)):
        raise PoleError(f"{what}={z!r} is a pole of the Gamma function")


def _sin_pi(z: complex) -> complex:
    # sin(pi z) with the integer part removed exactly first; keeps relative
    # accuracy next to the zeros.
    n = round(z.real)
    s = cmath.sin(math.pi * (z - n))
    return -s if n % 2 else s


def _lanczos(z: complex) -> complex:
    # valid for Re(z) >= 0.5
    z = z - 1.0
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return cmath.exp(_HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t) * x


def _gamma_right(z: complex) -> complex:
    if abs(z) <= _LANCZOS_RADIUS:
        return _lanczos(z)
    # shift to the Stirling region, keeping log Gamma in two pieces so the
    # exponential of a large phase is not rounded twice
    shift = 0
    if z.real < _STIRLING_SHIFT:
        shift = int(math.ceil(_STIRLING_SHIFT - z.real))
    hi, lo = _stirling_dd(z + shift)
    value = cmath.exp(hi) * (1.0 + lo)
    if shift:
        prod = 1 + 0j
        for k in range(shift):
            prod *= z + k
        value /= prod
    return value


def complex_gamma(z: complex) -> complex:
    """Gamma function of a complex argument.

    Right half-plane: Lanczos sum for ``|z| <= 5`` and the exponential of
    :func:`complex_log_gamma` beyond that (the fixed-g Lanczos sum loses a
    digit at large ``|z|``). Reflection ``Gamma(z) Gamma(1 - z) = pi / sin(pi z)``
    for ``Re(z) < 0.5``.

    Raises:
        PoleError: if ``z`` is a non-positive integer.
        OverflowError: if the result is not representable as a double.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite argument {z!r}")
    _check_pole(z)
    try:
        if z.real < 0.5:
            value = math.pi / (_sin_pi(z) * _gamma_right(1.0 - z))
        else:
            value = _gamma_right(z)
    except (OverflowError, ZeroDivisionError) as exc:
        raise OverflowError(f"Gamma({z!r}) overflows") from exc
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowError(f"Gamma({z!r}) overflows")
    return value


_SPLITTER = 134217729.0  # 2**27 + 1


def _two_prod(a: float, b: float) -> tuple[float, float]:
    # Dekker's error-free product: a * b == p + e exactly
    p = a * b
    c = _SPLITTER * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLITTER * b
    bh = c - (c - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _dd_sum(parts) -> tuple[float, float]:
    hi = math.fsum(parts)
    lo = math.fsum(list(parts) + [-hi])
    return hi, lo


def _stirling_dd(z: complex) -> tuple[complex, complex]:
    """Stirling series for log Gamma(z) as an unevaluated sum hi + lo.

    The leading term (z - 1/2) log z - z is assembled from error-free
    products so the only rounding left is that of log|z| and arg z.
    """
    x, y = z.real, z.imag
    log_r = math.log(abs(z))
    theta = math.atan2(y, x)
    xm = x - 0.5
    inv = 1.0 / z
    inv2 = inv * inv
    corr = 0j
    p = inv
    for c in _STIRLING:
        corr += c * p
        p *= inv2
    re_parts = [*_two_prod(xm, log_r), *_two_prod(-y, theta), -x, _HALF_LOG_2PI, corr.real]
    im_parts = [*_two_prod(xm, theta), *_two_prod(y, log_r), -y, corr.imag]
    re_hi, re_lo = _dd_sum(re_parts)
    im_hi, im_lo = _dd_sum(im_parts)
    return complex(re_hi, im_hi), complex(re_lo, im_lo)


def _stirling(z: complex) -> complex:
    hi, lo = _stirling_dd(z)
    return hi + lo


def complex_log_gamma(z: complex) -> complex:
    """Logarithm of the Gamma function.

    The branch is the analytic continuation of the real ``log Gamma`` from
    the positive real axis (continuous everywhere off the non-positive real
    axis), obtained by shifting ``z`` upward with the recurrence and summing
    principal logarithms before applying the Stirling series.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite argument {z!r}")
    _check_pole(z)
    shift = 0
    if z.real < _STIRLING_SHIFT:
        shift = int(math.ceil(_STIRLING_SHIFT - z.real))
    acc = 0j
    for k in range(shift):
        acc += cmath.log(z + k)
    return _stirling(z + shift) - acc


def _terms_ok(cfg: SeriesConfig, term_abs, sum_abs):
    return term_abs <= np.maximum(cfg.rel_tol * sum_abs, cfg.abs_tol)


def hyp0f1(b: complex, z, cfg: SeriesConfig | None = None, *, full_output: bool = False):
    """Confluent hypergeometric limit function 0F1(; b; z).

    ``z`` may be a scalar or an array; the series is summed elementwise with
    the running-term recurrence ``t_{k+1} = t_k z / ((k + 1)(k + b))``.

    Returns:
        The sum (complex scalar or complex array). With ``full_output=True``
        a ``(value, n_terms)`` tuple, where ``n_terms`` is the number of
        terms summed (the maximum over the array for array input).

    Raises:
        PoleError: if ``b`` is a non-positive integer.
        NonConvergence: if ``cfg.max_terms`` is reached first.
    """
    cfg = cfg or DEFAULT_SERIES
    b = complex(b)
    _check_pole(b, "b")
    scalar = np.ndim(z) == 0
    zarr = np.atleast_1d(np.asarray(z, dtype=complex))
    zabs = np.abs(zarr)

    total = np.ones_like(zarr)
    term = np.ones_like(zarr)
    small = np.zeros(zarr.shape, dtype=np.int8)
    done = np.zeros(zarr.shape, dtype=bool)
    # |k + b| is increasing in k past -Re(b); only then can the ratio test hold
    k_guard = max(0, math.ceil(-b.real))
    k = 0
    n_terms = 1
    while not done.all():
        if k + 1 >= cfg.max_terms:
            raise NonConvergence(f"0F1(;{b};z) did not converge in {cfg.max_terms} terms")
        term = term * zarr / ((k + 1) * (k + b))
        total = total + np.where(done, 0, term)
        k += 1
        n_terms = k + 1
        ok = _terms_ok(cfg, np.abs(term), np.abs(total))
        small = np.where(ok, small + 1, 0).astype(np.int8)
        ratio = zabs / ((k + 1) * abs(k + b))
        done |= (small >= 2) & (k >= k_guard) & (ratio < 0.5)
    value = total[0] if scalar else total.reshape(np.shape(z))
    if scalar:
        value = complex(value)
    return (value, n_terms) if full_output else value


def hyp0f2(a: complex, b: complex, z: complex, cfg: SeriesConfig | None = None, *,
           full_output: bool = False):
    """Generalized hypergeometric series 0F2(; a, b; z).

    Summed with ``t_{k+1} = t_k z / ((k + 1)(k + a)(k + b))``; symmetric in
    ``a`` and ``b`` by construction.

    Raises:
        PoleError: if ``a`` or ``b`` is a non-positive integer.
        NonConvergence: if ``cfg.max_terms`` is reached first.
    """
    cfg = cfg or DEFAULT_SERIES
    a, b, z = complex(a), complex(b), complex(z)
    _check_pole(a, "a")
    _check_pole(b, "b")
    zabs = abs(z)
    k_guard = max(0, math.ceil(-a.real), math.ceil(-b.real))
    total = 1 + 0j
    term = 1 + 0j
    small = 0
    k = 0
    while True:
        if k + 1 >= cfg.max_terms:
            raise NonConvergence(f"0F2(;{a},{b};{z}) did not converge in {cfg.max_terms} terms")
        term *= z / ((k + 1) * ((k + a) * (k + b)))  # grouped so a <-> b is exact
        total += term
        k += 1
        small = small + 1 if _terms_ok(cfg, abs(term), abs(total)) else 0
        if small >= 2 and k >= k_guard and zabs / ((k + 1) * abs(k + a) * abs(k + b)) < 0.5:
            break
    if not (math.isfinite(total.real) and math.isfinite(total.imag)):
        raise OverflowError(f"0F2(;{a},{b};{z}) overflows")
    return (total, k + 1) if full_output else total
