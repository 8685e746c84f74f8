"""Two-qubit XY model in a longitudinal field and its Gibbs state."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qmatrix import (I2, I4, SM, SP, SZ, DensityMatrix, as_matrix, hermitian_eig,
                      kron, ket, projector)

# Eigenbasis of H: level label -> ket in the computational basis.  Labels
# count spin-down as 0, so the level "00" (energy -B) is the computational
# |11> (sigma_z = -1 on both qubits) and "11" (energy +B) is |00>.
BASIS_KETS = {
    "00": ket(0, 0, 0, 1),
    "11": ket(1, 0, 0, 0),
    "+": ket(0, 1, 1, 0),
    "-": ket(0, 1, -1, 0),
}


@dataclass(frozen=True)
class ModelParams:
    """Field ``B``, coupling ``alpha``, energy offset ``epsilon`` and temperature.

    ``temperature`` may be ``None`` for the pure-state entry points; the
    Gibbs constructors require it to be positive.
    """
    B: float
    alpha: float
    temperature: float | None = None
    epsilon: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.B) or self.B < 0:
            raise ValueError(f"B must be a finite non-negative number, got {self.B}")
        if not math.isfinite(self.alpha) or self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not math.isfinite(self.epsilon):
            raise ValueError("epsilon must be finite")
        if self.temperature is not None:
            if not (self.temperature > 0) or not math.isfinite(1.0 / self.temperature):
                raise ValueError(f"temperature must be positive with finite 1/T, "
                                 f"got {self.temperature}")

    @property
    def beta(self) -> float:
        if self.temperature is None:
            raise ValueError("no temperature set; this is a pure-state parameter set")
        return 1.0 / self.temperature

    def with_(self, **changes) -> "ModelParams":
        d = dict(B=self.B, alpha=self.alpha, temperature=self.temperature,
                 epsilon=self.epsilon)
        d.update(changes)
        return ModelParams(**d)

    @property
    def regime(self) -> str:
        """``"entangled"`` (B < alpha), ``"product"`` (B > alpha) or ``"critical"``."""
        if self.B < self.alpha:
            return "entangled"
        if self.B > self.alpha:
            return "product"
        return "critical"


@dataclass(frozen=True)
class Level:
    label: str
    energy: float
    degeneracy: int
    state: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class SpectralData:
    levels: tuple[Level, ...]
    partition_function: float
    thermal_weights: dict[str, float]
    ground_labels: tuple[str, ...]

    @property
    def degenerate_ground(self) -> bool:
        return len(self.ground_labels) > 1

    def level(self, label: str) -> Level:
        return next(lv for lv in self.levels if lv.label == label)


_ZEEMAN = as_matrix(kron(SZ, I2)) + as_matrix(kron(I2, SZ))
_HOP = as_matrix(kron(SP, SM)) + as_matrix(kron(SM, SP))


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    """``H = (B/2)(sz x I + I x sz) + alpha (s+ x s- + s- x s+) + epsilon I``."""
    return as_matrix((params.B / 2) * _ZEEMAN + params.alpha * _HOP + params.epsilon * I4)


def _boltzmann(energies: dict[str, float], beta: float) -> tuple[dict[str, float], float]:
    # Shift by the lowest energy so that beta*E never overflows.
    e0 = min(energies.values())
    raw = {k: math.exp(-beta * (e - e0)) for k, e in energies.items()}
    total = sum(raw.values())
    # log Z = -beta*e0 + log(total); may overflow as a float for huge beta.
    try:
        z = math.exp(-beta * e0) * total
    except OverflowError:
        z = math.inf
    return {k: r / total for k, r in raw.items()}, z


def spectral_data(params: ModelParams) -> SpectralData:
    """Level table, partition function and thermal weights of ``H`` with epsilon = 0.

    Energies are read off the numerically diagonalised Hamiltonian by
    projecting each level's eigenstate, so the table is checked against the
    matrix rather than typed in.
    """
    h = build_hamiltonian(params.with_(epsilon=0.0))
    levels = []
    for label, v in BASIS_KETS.items():
        e = float(np.real(v.conj() @ h @ v))
        resid = np.abs(h @ v - e * v).max()
        if resid > 1e-12 * max(1.0, params.B, params.alpha):
            raise AssertionError(f"level {label} is not an eigenstate (residual {resid:.3e})")
        levels.append(Level(label, e, 1, v))
    energies = {lv.label: lv.energy for lv in levels}
    e_min = min(energies.values())
    tol = 1e-12 * max(1.0, params.B, params.alpha)
    ground = tuple(k for k in ("-", "00") if energies[k] - e_min <= tol)
    if params.temperature is None:
        weights, z = {k: float(k in ground) / len(ground) for k in energies}, math.nan
    else:
        weights, z = _boltzmann(energies, params.beta)
    return SpectralData(tuple(levels), z, weights, ground)


def thermal_state(params: ModelParams) -> DensityMatrix:
    """Gibbs state ``exp(-beta H) / Z`` built from the numerical spectrum of ``H``.

    The offset ``epsilon`` is kept inside ``H``; it drops out of the
    normalised state.
    """
    beta = params.beta
    eig = hermitian_eig(build_hamiltonian(params))
    w = np.exp(-beta * (eig.eigenvalues - eig.eigenvalues[0]))
    w /= w.sum()
    v = eig.eigenvectors
    rho = (v * w) @ v.conj().T
    # Positive by construction (non-negative weights on an orthonormal basis).
    return DensityMatrix((rho + rho.conj().T) / 2, validate=False)


def eigenstate(label: str) -> DensityMatrix:
    """Pure state ``|e_n><e_n|`` for ``label`` in ``{"00", "11", "+", "-"}``."""
    return DensityMatrix(projector(BASIS_KETS[label]))


def ground_state(params: ModelParams) -> DensityMatrix:
    sd = spectral_data(params.with_(temperature=None))
    if sd.degenerate_ground:
        raise ValueError("ground state is degenerate at B = alpha")
    return eigenstate(sd.ground_labels[0])
