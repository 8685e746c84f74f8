"""Entanglement and discord of two-qubit states.

Entropies are in bits with ``0 log 0 = 0``.  Discord is taken with the
projective measurement on qubit A.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import closedform
from .qmatrix import (SX, SY, SZ, DensityMatrix, as_matrix, eigvalsh, hermitian_eig, kron,
                      partial_trace_A, partial_trace_B, partial_transpose_B,
                      singular_values)
from .xymodel import ModelParams, thermal_state

ZERO_TOL = 1e-12
_SYSY = as_matrix(kron(SY, SY))
_PAULI = np.array([SX, SY, SZ])


@dataclass(frozen=True)
class CorrelationReport:
    negativity: float
    concurrence: float
    discord: float
    critical_temperature: float
    x_params: tuple          # (a, d, w, z)
    entropies: tuple         # (S_rho, S_rho_A, S1, S2)
    gamma: float
    pt_eigenvalues: tuple


def _state(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def xlog2x(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out


def entropy_bits(probs) -> float:
    """Shannon entropy of a probability vector (tiny negative noise ignored)."""
    return float(-np.sum(xlog2x(probs)))


def von_neumann(rho) -> float:
    return entropy_bits(eigvalsh(rho))


def negativity(rho) -> tuple[float, np.ndarray]:
    """Sum of |negative eigenvalues| of the B-partial transpose, and those eigenvalues.

    Eigenvalues within ``1e-12`` of zero count as zero.
    """
    lam = eigvalsh(partial_transpose_B(_state(rho)))
    neg = lam[lam < -ZERO_TOL]
    return float(-neg.sum()) + 0.0, lam  # no signed zero


def concurrence(rho) -> float:
    """Wootters concurrence, conjugating in the computational basis.

    The ``lambda_i`` (square roots of the eigenvalues of ``rho rho~``) are
    taken as the singular values of ``sqrt(rho) sqrt(rho~)``, which avoids
    square roots of noisy tiny eigenvalues for nearly pure states.
    """
    r = _state(rho).data
    w, v = hermitian_eig(r)
    if w[0] < -ZERO_TOL:
        raise ArithmeticError(f"state has eigenvalue {w[0]:.3e}")
    sqrt_r = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    sqrt_flipped = _SYSY @ sqrt_r.conj() @ _SYSY
    lam = singular_values(sqrt_r @ sqrt_flipped)
    return max(0.0, float(lam[0] - lam[1:].sum()))


def critical_temperature(alpha: float) -> float:
    """Entanglement threshold ``2 alpha / arccosh 3``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return 2 * alpha / math.acosh(3)


def post_measurement_state(rho) -> DensityMatrix:
    """State after a non-selective ``sigma_x`` measurement of qubit A."""
    r = _state(rho).data
    out = np.zeros((4, 4), dtype=complex)
    for k in (1, -1):
        ket = np.array([1, k]) / math.sqrt(2)
        proj = np.kron(np.outer(ket, ket), np.eye(2))
        out += proj @ r @ proj
    # A projective channel of a valid state; only symmetrise.
    return DensityMatrix((out + out.conj().T) / 2, validate=False)


def xstate_discord(params: ModelParams) -> tuple[float, tuple, float]:
    """Closed-form discord of the Gibbs state: ``(D, (S_rho, S_rho_A, S1, S2), Gamma)``."""
    a, d, w, z = closedform.x_state_entries(params)
    s_rho = entropy_bits([a, d, w + z, w - z])
    s_a = entropy_bits([a + w, w + d])
    s1 = (entropy_bits([a, w]) + xlog2x(a + w).item()
          + entropy_bits([d, w]) + xlog2x(d + w).item())
    gamma = math.sqrt((a - d) ** 2 + 4 * z * z)
    s2 = entropy_bits([(1 + gamma) / 2, (1 - gamma) / 2])
    return max(0.0, s_a - s_rho + min(s1, s2)), (s_rho, s_a, s1, s2), gamma


def discord_xstate(params: ModelParams) -> CorrelationReport:
    """Discord of the Gibbs state from its X-state entries, plus N and C of the simulated state."""
    disc, entropies, gamma = xstate_discord(params)
    rho = thermal_state(params)
    n, pt = negativity(rho)
    return CorrelationReport(
        negativity=n,
        concurrence=concurrence(rho),
        discord=disc,
        critical_temperature=critical_temperature(params.alpha),
        x_params=closedform.x_state_entries(params),
        entropies=entropies,
        gamma=gamma,
        pt_eigenvalues=tuple(float(x) for x in pt),
    )


def _conditional_entropy(r4: np.ndarray, polar, azimuth) -> np.ndarray:
    """``sum_k p_k S(rho_B|k)`` for measurements of A along Bloch angles (vectorised).

    The unnormalised conditional state is ``(T0 + k n.T)/2`` with
    ``T0 = tr_A rho`` and ``T_a = tr_A[(sigma_a x I) rho]``.
    """
    polar, azimuth = np.broadcast_arrays(np.asarray(polar, float), np.asarray(azimuth, float))
    n = (np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth), np.cos(polar))
    t0 = np.einsum("ibic->bc", r4)
    ts = [np.einsum("ji,ibjc->bc", s, r4) for s in _PAULI]
    lin = {key: sum(n[a] * ts[a][idx] for a in range(3)) for key, idx in
           (("00", (0, 0)), ("11", (1, 1)), ("01", (0, 1)))}
    total = np.zeros(polar.shape)
    for k in (1, -1):
        s00 = np.real(t0[0, 0] + k * lin["00"]) / 2
        s11 = np.real(t0[1, 1] + k * lin["11"]) / 2
        s01 = (t0[0, 1] + k * lin["01"]) / 2
        p = s00 + s11
        rad = np.sqrt((s00 - s11) ** 2 + 4 * np.abs(s01) ** 2)
        total += -xlog2x((p - rad) / 2) - xlog2x((p + rad) / 2) + xlog2x(p)
    return total


def discord_numeric(rho, grid: tuple[int, int] = (180, 360), tol: float = 1e-10) -> float:
    """Discord by direct minimisation over projective measurements on A.

    The Bloch sphere is scanned on a polar x azimuth grid, then the best
    point is refined with Nelder-Mead.
    """
    rho = _state(rho)
    r4 = rho.data.reshape(2, 2, 2, 2)
    n_pol, n_az = grid
    pol = np.arange(n_pol) * math.pi / n_pol
    az = np.arange(n_az) * 2 * math.pi / n_az
    vals = _conditional_entropy(r4, pol[:, None], az[None, :])
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    res = minimize(lambda x: float(_conditional_entropy(r4, x[0], x[1])), [pol[i], az[j]],
                   method="Nelder-Mead",
                   options={"xatol": 1e-9, "fatol": tol, "initial_simplex":
                            [[pol[i], az[j]], [pol[i] + 0.02, az[j]], [pol[i], az[j] + 0.02]]})
    cond = min(float(res.fun), float(vals[i, j]))
    s_a = von_neumann(partial_trace_B(rho))
    return max(0.0, s_a - von_neumann(rho) + cond)


def mutual_information(rho) -> float:
    rho = _state(rho)
    return (von_neumann(partial_trace_B(rho)) + von_neumann(partial_trace_A(rho))
            - von_neumann(rho))
