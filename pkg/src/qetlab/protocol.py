"""Measurement, classical communication and conditional rotation on the XY model.

Alice measures ``sigma_x`` on qubit A with projectors ``M(k) = (I + k sx)/2``;
Bob applies ``U(theta, k) = cos(theta) I + i k sin(theta) (n . sigma)`` on
qubit B depending on her outcome ``k``.  All energies are direct traces
``tr(H rho)`` of the evolved density matrices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import closedform
from .qmatrix import (I2, SX, SY, SZ, DensityMatrix, as_matrix, comm, expval, is_hermitian,
                      kron, max_abs)
from .xymodel import ModelParams, build_hamiltonian, eigenstate, thermal_state

Y_AXIS = (0.0, 1.0, 0.0)
_PAULI = np.array([SX, SY, SZ])


@dataclass(frozen=True)
class MeasurementSet:
    """Two-outcome projective measurement on qubit A, keyed by outcome ``k = +1, -1``."""
    operators: dict

    def __post_init__(self):
        total = sum(m.conj().T @ m for m in self.operators.values())
        if max_abs(total - np.eye(4)) > 1e-12:
            raise ValueError("measurement operators are not complete")
        for k, m in self.operators.items():
            if not is_hermitian(m) or max_abs(m @ m - m) > 1e-12:
                raise ValueError(f"operator for outcome {k} is not a projector")

    def __iter__(self):
        return iter(self.operators.items())

    @classmethod
    def sigma_x(cls) -> "MeasurementSet":
        return _SIGMA_X_SET


_SIGMA_X_SET = MeasurementSet({k: as_matrix(kron((I2 + k * SX) / 2, I2)) for k in (1, -1)})


@dataclass(frozen=True)
class LoccUnitary:
    """Bob's outcome-conditioned rotation by ``theta`` about ``axis``."""
    theta: float
    axis: tuple = Y_AXIS

    def __post_init__(self):
        n = np.asarray(self.axis, dtype=float)
        if n.shape != (3,) or abs(n @ n - 1) > 1e-12:
            raise ValueError(f"rotation axis must be a unit 3-vector, got {self.axis}")

    def local(self, k: int) -> np.ndarray:
        return _rotation(self.theta, np.asarray(self.axis, dtype=float), k)

    def operator(self, k: int) -> np.ndarray:
        return as_matrix(kron(I2, self.local(k)))


def _rotation(theta, n, k) -> np.ndarray:
    ns = np.tensordot(n, _PAULI, axes=1)
    return math.cos(theta) * np.eye(2) + 1j * k * math.sin(theta) * ns


@dataclass(frozen=True)
class AxisOptimizationRecord:
    """Coefficients of the general-axis objective and its stationarity residuals."""
    A: float        # sinh(beta B)/Z
    K: float        # sinh(beta alpha)/Z
    c: float        # 1 - cos t
    s: float        # sin t
    l_prime: float
    m_prime: float
    lagrange_multiplier: float
    residuals: tuple


@dataclass(frozen=True)
class ProtocolTrace:
    """Energy ledger of one protocol run.

    ``p`` and ``q`` are the coefficients of ``E_B - E_A = p(1 - cos t) - q sin t``
    measured from the pipeline; for thermal states they equal the analytic
    ``p`` and ``q``.
    """
    kind: str
    e_initial: float
    e_after_measurement: float
    e_after_locc: float
    delta_inf: float
    delta_tel: float
    delta_extract: float
    theta_opt: float
    t0: float
    p: float
    q: float
    rho_after_measurement: DensityMatrix = field(repr=False)
    rho_final: DensityMatrix = field(repr=False)
    axis: tuple = Y_AXIS
    epsilon: float = 0.0

    @property
    def alice_stage(self) -> float:
        return self.e_after_measurement - self.e_initial

    def as_dict(self) -> dict:
        return {
            "kind": self.kind, "epsilon": self.epsilon,
            "e_initial": self.e_initial, "e_after_measurement": self.e_after_measurement,
            "e_after_locc": self.e_after_locc, "alice_stage": self.alice_stage,
            "delta_inf": self.delta_inf, "delta_tel": self.delta_tel,
            "extract": self.delta_extract, "theta_opt": self.theta_opt, "t0": self.t0,
            "p": self.p, "q": self.q,
        }


@dataclass(frozen=True)
class QeeBreakdown:
    e_site_A: float
    e_site_B: float
    e_interaction: float
    h_split: tuple = field(repr=False)


# -- pipeline stages -----------------------------------------------------------

def _channel_output(out: np.ndarray) -> DensityMatrix:
    # Trace-preserving maps of a validated state stay valid; skip the eigen check.
    out = (out + out.conj().T) / 2
    if abs(np.trace(out) - 1) > 1e-12:
        raise ArithmeticError(f"channel output has trace {np.trace(out).real:.15g}")
    return DensityMatrix(out, validate=False)


def measure(rho, hamiltonian, mset: MeasurementSet | None = None):
    """Non-selective measurement; returns ``(rho_A, tr(H rho_A))``."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    mset = mset or MeasurementSet.sigma_x()
    r = rho.data
    rho_a = _channel_output(sum(m @ r @ m.conj().T for _, m in mset))
    return rho_a, expval(hamiltonian, rho_a)


def _locc_raw(r: np.ndarray, mset: MeasurementSet, theta: float, n) -> np.ndarray:
    # No unitarity check: also used with non-unit n to read off the quadratic form.
    n = np.asarray(n, dtype=float)
    out = np.zeros((4, 4), dtype=complex)
    for k, m in mset:
        u = np.zeros((4, 4), dtype=complex)
        u[:2, :2] = u[2:, 2:] = _rotation(theta, n, k)
        out += u @ m @ r @ m.conj().T @ u.conj().T
    return out


def apply_locc(rho, unitary: LoccUnitary, mset: MeasurementSet | None = None) -> DensityMatrix:
    """Bob's conditional rotation applied to each of Alice's outcome branches of ``rho``.

    ``rho`` is the state before Alice's measurement; the branches
    ``M(k) rho M(k)`` are formed here.
    """
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    mset = mset or MeasurementSet.sigma_x()
    return _channel_output(_locc_raw(rho.data, mset, unitary.theta, unitary.axis))


def delta_tel(rho, hamiltonian, theta: float, axis=Y_AXIS) -> float:
    """``E_B - E_A`` for rotation angle ``theta`` about ``axis``."""
    rho_a, e_a = measure(rho, hamiltonian)
    rho_b = apply_locc(rho, LoccUnitary(theta, tuple(axis)))
    return expval(hamiltonian, rho_b) - e_a


def fit_pq(rho, hamiltonian, axis=Y_AXIS) -> tuple[float, float]:
    """Coefficients of ``E_B - E_A = p(1 - cos t) - q sin t`` along a fixed axis.

    The conjugation by ``U`` makes the energy a degree-one trigonometric
    polynomial in ``t = 2 theta``; it is fixed by three samples.
    """
    f_half = delta_tel(rho, hamiltonian, math.pi / 4, axis)   # t = pi/2: p - q
    f_pi = delta_tel(rho, hamiltonian, math.pi / 2, axis)     # t = pi:   2p
    p = f_pi / 2
    return p, p - f_half


def delta_inf(params: ModelParams) -> float:
    """Energy injected by Alice's measurement on the Gibbs state, by direct trace."""
    h = build_hamiltonian(params.with_(epsilon=0.0))
    rho = thermal_state(params)
    _, e_a = measure(rho, h)
    return e_a - expval(h, rho)


def optimal_angle(params: ModelParams) -> tuple[float, float]:
    """``(t0, theta0)`` minimising the thermal energy change; ``t0 = atan2(q, p)``."""
    p, q = closedform.pq(params)
    if p == 0 and q == 0:
        raise ValueError("p = q = 0: the optimal angle is undefined")
    t0 = math.atan2(q, p)
    return t0, t0 / 2


def F(t: float, params: ModelParams, rho=None) -> float:
    """Simulated ``E_B - E_A`` of the thermal protocol at ``t = 2 theta``."""
    h = build_hamiltonian(params.with_(epsilon=0.0))
    rho = thermal_state(params) if rho is None else rho
    return delta_tel(rho, h, t / 2)


def verify_minimum(params: ModelParams, t0: float, step: float = 1e-4) -> float:
    """Central finite-difference ``F''(t0)`` from the simulated pipeline."""
    rho = thermal_state(params)
    f = [F(t0 + d, params, rho) for d in (-step, 0.0, step)]
    return (f[0] - 2 * f[1] + f[2]) / step ** 2


# -- general-axis optimisation -----------------------------------------------

@dataclass(frozen=True)
class AxisResult:
    axis: tuple
    theta: float
    delta_tel: float
    tie: bool
    record: AxisOptimizationRecord | None = None


def fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    r = np.sqrt(1 - z * z)
    phi = math.pi * (3 - math.sqrt(5)) * i
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _batch_delta(r, h, mset, thetas, axes):
    """``E_B - E_A`` for many ``(theta, axis)`` pairs at once."""
    e_a = expval(h, sum(m @ r @ m.conj().T for _, m in mset))
    ns = np.einsum("na,aij->nij", axes, _PAULI)
    cos_t = np.cos(thetas)[:, None, None]
    sin_t = np.sin(thetas)[:, None, None]
    e_b = np.zeros(len(axes))
    for k, m in mset:
        u = cos_t * np.eye(2) + 1j * k * sin_t * ns                    # (N, 2, 2)
        uu = np.einsum("ab,nij->naibj", np.eye(2), u).reshape(-1, 4, 4)
        branch = m @ r @ m.conj().T
        e_b += np.real(np.einsum("nij,jk,nlk,li->n", uu, branch, uu.conj(), h))
    return e_b - e_a


def _harmonic_min(f0, f1, f2):
    """Minimum over theta of ``c0 + c1 cos 2theta + c2 sin 2theta`` given samples at 0, pi/4, pi/2."""
    c0, c1 = (f0 + f2) / 2, (f0 - f2) / 2
    c2 = f1 - c0
    return np.arctan2(-c2, -c1) / 2, c0 - np.hypot(c1, c2)


def _quadratic_form(r, h, mset, theta):
    """``Q, b, c`` with ``E_B - E_A = n.Qn + b.n + c`` for a rotation ``theta``."""
    e_a = expval(h, sum(m @ r @ m.conj().T for _, m in mset))

    def f(n):
        return expval(h, _locc_raw(r, mset, theta, n)) - e_a

    eye = np.eye(3)
    c = f(np.zeros(3))
    plus = [f(eye[i]) for i in range(3)]
    minus = [f(-eye[i]) for i in range(3)]
    b = np.array([(plus[i] - minus[i]) / 2 for i in range(3)])
    diag = [(plus[i] + minus[i]) / 2 - c for i in range(3)]
    q = np.diag(diag)
    for i in range(3):
        for j in range(i + 1, 3):
            q[i, j] = q[j, i] = (f(eye[i] + eye[j]) - diag[i] - diag[j] - b[i] - b[j] - c) / 2
    return q, b, c


def _sphere_quadratic_min(q, b):
    """Exact minimiser of ``n.Qn + b.n`` on the unit sphere (trust-region subproblem)."""
    mu, v = np.linalg.eigh(q)
    beta = v.T @ b
    scale = max(1.0, float(np.max(np.abs(q))), float(np.max(np.abs(b))))

    def y(lam):
        den = 2 * (mu + lam)
        return np.divide(-beta, den, out=np.zeros(3), where=beta != 0)

    lo = -mu[0]
    if abs(beta[0]) <= 1e-14 * scale:
        # Hard case: the lowest direction decouples from b.
        rest = np.zeros(3)
        gap = mu[1:] - mu[0]
        mask = gap > 1e-14 * scale
        rest[1:][mask] = -beta[1:][mask] / (2 * gap[mask])
        norm2 = float(rest @ rest)
        if norm2 <= 1.0:
            rest[0] = math.sqrt(1.0 - norm2)
            return v @ rest
    hi = lo + float(np.linalg.norm(b)) / 2 + 1.0
    step = 1e-15 * scale
    while np.linalg.norm(y(lo + step)) < 1:
        step *= 10
        if step > 1:
            break
    lam = brentq(lambda x: np.linalg.norm(y(x)) - 1, lo + step, hi, xtol=1e-16, rtol=1e-15)
    n = v @ y(lam)
    return n / np.linalg.norm(n)


def _canonical(theta, n):
    # (theta, n) and (-theta, -n) give the same unitary; report theta >= 0.
    if theta < 0:
        return -theta, -n
    return theta, n


def optimize_axis(params: ModelParams, grid_points: int = 2000, rho=None) -> AxisResult:
    """Minimise ``E_B - E_A`` jointly over Bob's angle and rotation axis.

    A Fibonacci grid of axes, each with its exact best angle, seeds the
    search.  Refinement then minimises over ``theta`` the exact sphere
    minimum of the energy, which is a quadratic form in the axis at fixed
    ``theta``.  Angles are reported in ``[0, pi/2]``.
    """
    h = build_hamiltonian(params.with_(epsilon=0.0))
    rho = thermal_state(params) if rho is None else rho
    r = rho.data if isinstance(rho, DensityMatrix) else np.asarray(rho)
    mset = MeasurementSet.sigma_x()

    axes = fibonacci_sphere(grid_points)
    samples = [_batch_delta(r, h, mset, np.full(len(axes), th), axes)
               for th in (0.0, math.pi / 4, math.pi / 2)]
    thetas, values = _harmonic_min(*samples)
    best = int(np.argmin(values))
    theta0, _ = _canonical(float(thetas[best]), axes[best])

    def inner(theta):
        qf, b, c = _quadratic_form(r, h, mset, theta)
        n = _sphere_quadratic_min(qf, b)
        return float(n @ qf @ n + b @ n + c), n

    width = 0.1
    lo, hi = max(-width, theta0 - width), min(math.pi / 2 + width, theta0 + width)
    res = minimize_scalar(lambda th: inner(th)[0], bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    _, n = inner(res.x)
    # Polish: exact angle for this axis, then exact axis for that angle.
    for _ in range(3):
        f = _batch_delta(r, h, mset, np.array([0.0, math.pi / 4, math.pi / 2]), np.tile(n, (3, 1)))
        theta, _ = _harmonic_min(f[0], f[1], f[2])
        theta, n = _canonical(float(theta), n)
        value, n = inner(theta)
        theta, n = _canonical(theta, n)

    tie = False
    if grid_points:
        ys = np.array([Y_AXIS, (0.0, -1.0, 0.0)])
        f = [_batch_delta(r, h, mset, np.full(2, th), ys) for th in (0.0, math.pi / 4, math.pi / 2)]
        ths, vals = _harmonic_min(*f)
        # Each y-axis candidate restricted to theta >= 0.
        vals = [vals[i] if ths[i] >= 0 else 0.0 for i in range(2)]
        tie = abs(vals[0] - vals[1]) < 1e-14
    n = np.where(np.abs(n) < 1e-15, 0.0, n)
    record = axis_record(params, theta, n)
    return AxisResult(tuple(float(x) for x in n), float(theta), float(value), tie, record)


def axis_record(params: ModelParams, theta: float, axis) -> AxisOptimizationRecord:
    """Lagrange-multiplier stationarity of the general-axis objective at ``(theta, axis)``.

    Residuals are those of the gradient conditions in ``n1, n2, n3`` and
    the unit-norm constraint, with the multiplier fitted by least squares.
    """
    B, a = params.B, params.alpha
    hy = closedform.hyperbolics(B, a, params.beta)
    A, K = hy.sinh_B, hy.sinh_a
    t = 2 * theta
    c, s = 1 - math.cos(t), math.sin(t)
    n1, n2, n3 = (float(x) for x in axis)
    grad = np.array([
        B * A * c * n1 - a * K * c * n1,
        B * A * c * n2 + a * K * c * n2 + a * A * s - B * K * s,
        -B * A * c * n3 + a * K * c * n3,
    ])
    n = np.array([n1, n2, n3])
    lam = -float(n @ grad) / (2 * float(n @ n))
    res = tuple(float(x) for x in grad + 2 * lam * n) + (float(n @ n - 1),)
    st2, s2t = math.sin(theta) ** 2, math.sin(2 * theta)
    l_prime = -B / 4 * ((n1 ** 2 + n2 ** 2 - n3 ** 2) * st2 - math.cos(theta) ** 2) - a * n2 / 4 * s2t
    m_prime = a / 4 * ((n1 ** 2 - n2 ** 2 - n3 ** 2) * st2 + math.cos(theta) ** 2) + B * n2 / 4 * s2t
    return AxisOptimizationRecord(A, K, c, s, l_prime, m_prime, lam, res)


def general_axis_objective(params: ModelParams, theta: float, axis) -> float:
    """Closed-form ``E_B - E_A`` for an arbitrary axis, from ``l'`` and ``m'``."""
    rec = axis_record(params, theta, axis)
    return (-4 * rec.l_prime + params.B) * rec.A + (-4 * rec.m_prime + params.alpha) * rec.K


# -- protocol runs -------------------------------------------------------------

def _run(kind, rho, h, theta, axis=Y_AXIS, epsilon=0.0) -> ProtocolTrace:
    rho_a, e_a = measure(rho, h)
    e0 = expval(h, rho)
    p, q = fit_pq(rho, h, axis)
    t0 = math.atan2(q, p) if theta is None else 2 * theta
    theta = t0 / 2
    rho_b = apply_locc(rho, LoccUnitary(theta, tuple(axis)))
    e_b = expval(h, rho_b)
    d_tel = e_b - e_a
    return ProtocolTrace(kind, e0, e_a, e_b, e_a - e0, d_tel, max(0.0, -d_tel), theta, t0,
                         p, q, rho_a, rho_b, tuple(axis), epsilon)


def run_thermal_qet(params: ModelParams) -> ProtocolTrace:
    """Full protocol on the Gibbs state at Bob's optimal angle."""
    h = build_hamiltonian(params.with_(epsilon=0.0))
    rho = thermal_state(params)
    try:
        _, theta0 = optimal_angle(params)
    except ValueError:
        theta0 = 0.0
    return _run("thermal", rho, h, theta0)


def run_excited_qet(params: ModelParams) -> ProtocolTrace:
    """Protocol started from the excited eigenstate ``(|01> + |10>)/sqrt 2``."""
    h = build_hamiltonian(params.with_(epsilon=0.0, temperature=None))
    return _run("excited", eigenstate("+"), h, None)


def run_ground_qet(params: ModelParams) -> ProtocolTrace:
    """Protocol started from the entangled ground state (requires ``B < alpha``)."""
    if not params.B < params.alpha:
        raise ValueError("the entangled ground state requires B < alpha")
    h = build_hamiltonian(params.with_(epsilon=0.0, temperature=None))
    return _run("ground", eigenstate("-"), h, None)


def qee_split(params: ModelParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``H_A, H_B, V`` with the offset ``epsilon = B`` shared between the sites."""
    B, a = params.B, params.alpha
    h_a = as_matrix(kron((B / 2) * (I2 + SZ), I2))
    h_b = as_matrix(kron(I2, (B / 2) * (SZ + I2)))
    v = build_hamiltonian(ModelParams(0.0, a))
    return h_a, h_b, v


def _qee_setup(params):
    if not params.B > params.alpha:
        raise ValueError(f"product-state extraction assumes B > alpha "
                         f"(got B={params.B}, alpha={params.alpha})")
    h = build_hamiltonian(params.with_(epsilon=params.B, temperature=None))
    return h, eigenstate("00")


def qee_delta_tel(params: ModelParams, theta: float) -> float:
    h, rho = _qee_setup(params)
    return delta_tel(rho, h, theta)


def run_product_qee(params: ModelParams) -> tuple[ProtocolTrace, QeeBreakdown]:
    """Protocol on the product ground state ``B > alpha``, energies with ``epsilon = B``."""
    h, rho = _qee_setup(params)
    trace = _run("qee", rho, h, None, epsilon=params.B)
    h_a, h_b, v = qee_split(params)
    rho_a = trace.rho_after_measurement
    breakdown = QeeBreakdown(expval(h_a, rho_a), expval(h_b, rho_a), expval(v, rho_a),
                             (h_a, h_b, v))
    return trace, breakdown


def qee_commutator(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """``[H, sigma_y^B]`` computed numerically, and the expected ``-iB sx^B + i alpha sx^A sz^B``."""
    h = build_hamiltonian(params.with_(epsilon=params.B, temperature=None))
    numeric = comm(h, kron(I2, SY))
    expected = -1j * params.B * as_matrix(kron(I2, SX)) + 1j * params.alpha * as_matrix(kron(SX, SZ))
    return numeric, expected
