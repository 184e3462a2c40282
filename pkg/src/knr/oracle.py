"""Brute-force steady state of the Lindblad master equation in a truncated Fock basis.

Independent of the closed forms in :mod:`knr.analytic`; used to validate
them and to cover what they cannot (chi = 0, thermal bath).

Density matrices are vectorized row-major, ``vec(rho)[m * dim + n] = rho[m, n]``,
so ``vec(A rho B) = kron(A, B.T) vec(rho)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import trapezoid

from .analytic import DEFAULT_RESOLUTION, DEFAULT_WINDOW, WignerGrid, phase_space_axes
from .errors import InvalidParams, SingularSystem, TruncationNotConverged, VacuumState
from .model import KnrParams

__all__ = [
    "OracleConfig",
    "SteadyStateDensityMatrix",
    "OracleObservables",
    "annihilation",
    "build_hamiltonian",
    "build_liouvillian",
    "steady_state",
    "oracle_observables",
    "oracle_wigner",
]

_NEG_EIG_TOL = 1e-10


@dataclass(frozen=True)
class OracleConfig:
    n_trunc_init: int = 20
    n_trunc_max: int = 160
    edge_tol: float = 1e-10
    growth_factor: float = 1.5

    def __post_init__(self):
        if self.n_trunc_init < 4:
            raise ValueError("n_trunc_init must be at least 4")
        if self.growth_factor <= 1:
            raise ValueError("growth_factor must exceed 1")
        if self.n_trunc_max < self.n_trunc_init:
            raise ValueError("n_trunc_max must be >= n_trunc_init")


@dataclass(frozen=True)
class SteadyStateDensityMatrix:
    dim: int
    elements: np.ndarray
    residual: float
    edge_occupancy: float

    @property
    def probs(self) -> np.ndarray:
        return np.clip(self.elements.diagonal().real, 0.0, None)

    @classmethod
    def from_matrix(cls, rho) -> "SteadyStateDensityMatrix":
        """Wrap an explicit density matrix (test fixtures, external states)."""
        rho = np.asarray(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError("density matrix must be square")
        return cls(dim=rho.shape[0], elements=rho, residual=0.0,
                   edge_occupancy=float(rho[-1, -1].real))


@dataclass(frozen=True)
class OracleObservables:
    probs: np.ndarray
    mean_n: float
    second_moment: float  # <a^+2 a^2>

    @property
    def g2(self) -> float:
        if self.mean_n < 1e-14:
            raise VacuumState(f"g2 is undefined for <n> = {self.mean_n:.3g}")
        return self.second_moment / self.mean_n ** 2


def annihilation(dim: int) -> sp.csr_matrix:
    """Truncated annihilation operator, ``a|n> = sqrt(n)|n-1>``."""
    return sp.diags(np.sqrt(np.arange(1, dim, dtype=float)), 1, shape=(dim, dim), format="csr")


def build_hamiltonian(params: KnrParams, dim: int) -> sp.csr_matrix:
    n = np.arange(dim, dtype=float)
    diag = params.delta * n + params.chi * n * (n - 1)
    a = annihilation(dim)
    return (sp.diags(diag, 0, format="csr")
            + params.omega_drive * (a + a.T)).tocsr()


def build_liouvillian(params: KnrParams, dim: int) -> sp.csr_matrix:
    """Superoperator of ``d rho/dt`` acting on the row-major vectorized rho.

    Lindblad operators ``sqrt((N+1) gamma) a`` and ``sqrt(N gamma) a^+`` with
    ``N = params.n_bath``.
    """
    if dim < 2:
        raise ValueError("dim must be at least 2")
    eye = sp.identity(dim, format="csr")
    a = annihilation(dim)
    ad = a.T.tocsr()
    h = build_hamiltonian(params, dim)
    liou = -1j * (sp.kron(h, eye) - sp.kron(eye, h.T))
    rates = [((params.n_bath + 1.0) * params.gamma, a)]
    if params.n_bath > 0:
        rates.append((params.n_bath * params.gamma, ad))
    for rate, op in rates:
        op_dag = op.T.conj().tocsr()
        ldl = (op_dag @ op).tocsr()
        liou = liou + rate * (sp.kron(op, op.conj())
                              - 0.5 * sp.kron(ldl, eye)
                              - 0.5 * sp.kron(eye, ldl.T))
    return liou.tocsr()


def _solve(params: KnrParams, dim: int) -> tuple[np.ndarray, float]:
    liou = build_liouvillian(params, dim)
    # replace the equation for d rho_00/dt with the trace condition
    trace_row = np.zeros(dim * dim)
    trace_row[:: dim + 1] = 1.0
    system = sp.vstack([sp.csr_matrix(trace_row), liou[1:]]).tocsc()
    rhs = np.zeros(dim * dim, dtype=complex)
    rhs[0] = 1.0
    try:
        vec = spla.spsolve(system, rhs)
    except RuntimeError as exc:  # SuperLU: "Factor is exactly singular"
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(vec)):
        raise SingularSystem(f"steady-state solve failed at dim={dim}")
    residual = float(np.abs(liou @ vec).max())
    return vec.reshape(dim, dim), residual


def steady_state(params: KnrParams, cfg: OracleConfig = OracleConfig()) -> SteadyStateDensityMatrix:
    """Steady state of the master equation with automatic truncation growth.

    The Fock cutoff starts at ``cfg.n_trunc_init`` and grows by
    ``cfg.growth_factor`` until the top state carries less than
    ``cfg.edge_tol`` population.

    Raises:
        TruncationNotConverged: if ``cfg.n_trunc_max`` is not enough.
        SingularSystem: if the linear solve fails.
        InvalidParams: if the solution has eigenvalues below -1e-10.
    """
    dim = cfg.n_trunc_init
    while True:
        rho, residual = _solve(params, dim)
        rho = 0.5 * (rho + rho.conj().T)
        rho /= rho.trace().real
        edge = float(rho[-1, -1].real)
        if abs(edge) < cfg.edge_tol:
            break
        if dim >= cfg.n_trunc_max:
            raise TruncationNotConverged(
                f"edge occupancy {edge:.3g} >= {cfg.edge_tol:g} at n_trunc_max={cfg.n_trunc_max}")
        dim = min(cfg.n_trunc_max, max(dim + 1, int(math.ceil(dim * cfg.growth_factor))))
    lowest = float(np.linalg.eigvalsh(rho)[0])
    if lowest < -_NEG_EIG_TOL:
        raise InvalidParams(f"steady state has a negative eigenvalue {lowest:.3g}")
    return SteadyStateDensityMatrix(dim=dim, elements=rho, residual=residual,
                                    edge_occupancy=edge)


def oracle_observables(rho: SteadyStateDensityMatrix) -> OracleObservables:
    """Populations, mean photon number and ``<a^+2 a^2>`` of a density matrix.

    ``g2`` is available as a property and raises :class:`VacuumState` for
    an (effectively) empty cavity.
    """
    p = rho.probs
    n = np.arange(rho.dim, dtype=float)
    return OracleObservables(probs=p, mean_n=float(np.dot(n, p)),
                             second_moment=float(np.dot(n * (n - 1), p)))


def _leakage(vecs: np.ndarray, phases: np.ndarray, beta_max: float, dim: int, big: int) -> float:
    # weight that D(beta_max) pushes from the occupied block into the top
    # tenth of the enlarged basis
    disp = (vecs * np.exp(1j * beta_max * phases)) @ vecs.conj().T
    top = max(1, big // 10)
    return float((np.abs(disp[big - top:, :dim]) ** 2).sum(axis=0).max())


def oracle_wigner(rho: SteadyStateDensityMatrix, window=DEFAULT_WINDOW,
                  resolution=DEFAULT_RESOLUTION, *, normalize: bool = True,
                  leak_tol: float = 1e-12) -> WignerGrid:
    """Wigner function from the displaced-parity formula.

    ``W(alpha) = (2/pi) Tr[rho D(alpha) P D(alpha)^+] = (2/pi) Tr[rho D(2 alpha) P]``
    with ``P`` the photon-number parity. ``rho`` is embedded in a basis
    enlarged by ``6 sqrt(<n>+1) + 4 max|alpha|^2`` states (grown further if
    needed) so the truncated displacement is exact on its support.

    Raises:
        TruncationNotConverged: if the displaced state still leaks into the
            top of the enlarged basis.
    """
    xs, ys = phase_space_axes(window, resolution)
    alpha = xs[:, None] + 1j * ys[None, :]
    beta = 2.0 * alpha.ravel()
    rmax = float(np.abs(beta).max())
    mean_n = oracle_observables(rho).mean_n
    big = rho.dim + int(math.ceil(6.0 * math.sqrt(mean_n + 1.0) + rmax ** 2)) + 8

    for _ in range(4):
        # a^+ - a = i H with H Hermitian; D(r e^{it}) = U_t exp(r (a^+ - a)) U_t^+
        a = annihilation(big).toarray()
        gen = -1j * (a.T - a)
        h_eig, vecs = np.linalg.eigh(gen)
        leak = _leakage(vecs, h_eig, rmax, rho.dim, big)
        if leak < leak_tol:
            break
        big = int(big * 1.5)
    else:
        raise TruncationNotConverged(f"displacement leaks {leak:.3g} past the enlarged basis")

    # Tr[rho D(beta) P] = sum_k e^{i r h_k} sum_d e^{i t d} C[k, d], where
    # C[k, d] = sum_{m - n = d} conj(V[n, k]) (-1)^n rho[n, m] V[m, k]
    dim = rho.dim
    v = vecs[:dim, :]
    parity = (-1.0) ** np.arange(dim)
    offsets = np.arange(-(dim - 1), dim)
    coeff = np.zeros((big, offsets.size), dtype=complex)
    weighted = (parity[:, None] * rho.elements)
    for n in range(dim):
        # row n contributes to offsets d = m - n for m = 0..dim-1
        block = v[n, :].conj()[:, None] * (weighted[n, :][None, :] * v.T)
        coeff[:, dim - 1 - n: 2 * dim - 1 - n] += block

    r = np.abs(beta)
    t = np.angle(beta)
    values = np.empty(beta.size)
    chunk = 2048
    for start in range(0, beta.size, chunk):
        sl = slice(start, start + chunk)
        radial = np.exp(1j * np.outer(r[sl], h_eig)) @ coeff
        angular = np.exp(1j * np.outer(t[sl], offsets))
        values[sl] = (2.0 / math.pi) * (radial * angular).sum(axis=1).real
    values = values.reshape(alpha.shape)
    norm = float(trapezoid(trapezoid(values, ys, axis=1), xs))
    if normalize:
        values = values / norm
    return WignerGrid(x_axis=xs, y_axis=ys, values=values, norm_estimate=norm)
