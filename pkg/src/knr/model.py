"""Physical parameters of the driven Kerr resonator and its anharmonic ladder.

The Hamiltonian in the frame rotating at the drive frequency is

    H = delta a^+ a + chi a^+2 a^2 + omega (a^+ + a)

with Lindblad damping operator sqrt(gamma) a (energy decay rate gamma,
field decay rate gamma / 2). All rates are in the same units; observables
only depend on the ratios chi/gamma, delta/gamma and omega/gamma.

A complex drive amplitude only rotates phase space, so the drive is taken
real. A negative value is the same as a rotation by pi.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidParams, SingularDenominator

__all__ = [
    "KnrParams",
    "LambdaConvention",
    "DerivedParams",
    "CALIBRATED_CONVENTION",
    "CALIBRATED_DAMPING_SCALE",
    "derive",
    "ladder_energy",
    "resonance_detuning",
    "stark_shift",
]


class LambdaConvention(enum.Enum):
    """How the pole parameter lambda is formed from gamma, delta and chi.

    ``I_CONVENTION``: ``lambda = (s*gamma + i*delta) / (i*chi)``;
    ``PLAIN_CONVENTION``: ``lambda = (s*gamma + i*delta) / chi``,
    with ``s`` the damping scale (1 or 1/2).
    """

    I_CONVENTION = "i"
    PLAIN_CONVENTION = "plain"


# Fixed by comparison with the master-equation steady state (tests/test_calibration.py):
# lambda = (gamma/2 + i delta) / (i chi) is the only candidate that reproduces it.
CALIBRATED_CONVENTION = LambdaConvention.I_CONVENTION
CALIBRATED_DAMPING_SCALE = 0.5


@dataclass(frozen=True)
class KnrParams:
    """Parameter set of a driven dissipative Kerr resonator.

    Attributes:
        chi: Kerr nonlinearity (>= 0; the closed-form path needs > 0).
        delta: detuning omega_0 - omega of the resonator from the drive.
        omega_drive: drive amplitude (real).
        gamma: energy decay rate (> 0).
        n_bath: thermal occupation of the bath (>= 0).
    """

    chi: float
    delta: float = 0.0
    omega_drive: float = 0.0
    gamma: float = 1.0
    n_bath: float = 0.0

    def __post_init__(self):
        for name in ("chi", "delta", "omega_drive", "gamma", "n_bath"):
            value = getattr(self, name)
            if isinstance(value, complex) or not math.isfinite(float(value)):
                raise InvalidParams(f"{name} must be a finite real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.chi < 0:
            raise InvalidParams(f"chi must be non-negative, got {self.chi}")
        if self.gamma <= 0:
            raise InvalidParams(f"gamma must be positive, got {self.gamma}")
        if self.n_bath < 0:
            raise InvalidParams(f"n_bath must be non-negative, got {self.n_bath}")

    def replace(self, **changes) -> "KnrParams":
        fields = dict(chi=self.chi, delta=self.delta, omega_drive=self.omega_drive,
                      gamma=self.gamma, n_bath=self.n_bath)
        fields.update(changes)
        return KnrParams(**fields)

    def require_analytic(self) -> None:
        """Raise InvalidParams unless the closed-form solution applies."""
        if self.chi <= 0:
            raise InvalidParams("closed-form observables need chi > 0; use the oracle for chi = 0")
        if self.n_bath != 0:
            raise InvalidParams("closed-form observables assume a zero-temperature bath (n_bath = 0)")


@dataclass(frozen=True)
class DerivedParams:
    epsilon: complex
    lam: complex
    lambda_conv: LambdaConvention
    damping_scale: float

    @property
    def eps2(self) -> float:
        """|epsilon|^2."""
        return abs(self.epsilon) ** 2


def derive(params: KnrParams,
           conv: LambdaConvention = CALIBRATED_CONVENTION,
           damping_scale: float = CALIBRATED_DAMPING_SCALE) -> DerivedParams:
    """Dimensionless drive ``epsilon = omega/chi`` and pole parameter ``lambda``.

    >>> derive(KnrParams(chi=20.0, delta=-20.0), damping_scale=1.0).lam
    (-1-0.05j)
    """
    if params.chi <= 0:
        raise InvalidParams(f"chi must be positive to form lambda, got {params.chi}")
    num = complex(damping_scale * params.gamma, params.delta)
    if conv is LambdaConvention.I_CONVENTION:
        lam = num / complex(0.0, params.chi)
    else:
        lam = num / params.chi
    return DerivedParams(
        epsilon=complex(params.omega_drive / params.chi),
        lam=lam,
        lambda_conv=conv,
        damping_scale=damping_scale,
    )


def ladder_energy(n: int, params: KnrParams, omega0: float) -> float:
    """Energy of Fock state ``n`` above the ground state, ``omega0 n + chi n (n-1)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return omega0 * n + params.chi * n * (n - 1)


def resonance_detuning(n: int, params: KnrParams) -> float:
    """Detuning at which the drive is n-photon resonant with ``|0> -> |n>``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return params.chi * (1 - n)


def stark_shift(n: int, params: KnrParams, omega: float, tol: float = 1e-12) -> float:
    """Second-order drive-induced shift of level ``n`` via ``|n-1>`` and ``|n+1>``.

    ``omega**2 * (n / (w + chi (2n-1)) - (n+1) / (w + chi (2n+1)))`` with
    ``w`` the drive frequency and ``omega`` the drive amplitude taken from
    ``params.omega_drive``.

    Raises:
        SingularDenominator: if either denominator vanishes.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    lower = omega + params.chi * (2 * n - 1)
    upper = omega + params.chi * (2 * n + 1)
    scale = tol * max(1.0, abs(omega), params.chi)
    if abs(upper) <= scale or (n > 0 and abs(lower) <= scale):
        raise SingularDenominator(f"stark shift of level {n} is resonant at omega={omega}")
    down = n / lower if n > 0 else 0.0
    return params.omega_drive ** 2 * (down - (n + 1) / upper)
