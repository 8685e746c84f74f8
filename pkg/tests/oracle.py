"""Independent reference implementations used to freeze expected values.

Deliberately shares no code with ``qetlab``: matrices are written out
literally, the Gibbs state comes from ``scipy.linalg.expm``, spectra from
LAPACK, and optima from multi-start ``scipy.optimize``.
"""
import itertools
import math

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize, minimize_scalar

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def hamiltonian(B, alpha, eps=0.0):
    return np.array([[B, 0, 0, 0],
                     [0, 0, alpha, 0],
                     [0, alpha, 0, 0],
                     [0, 0, 0, -B]], dtype=complex) + eps * np.eye(4)


def gibbs(B, alpha, T):
    h = hamiltonian(B, alpha)
    shift = np.linalg.eigvalsh(h)[0]
    g = expm(-(h - shift * np.eye(4)) / T)
    return g / np.trace(g).real


def bob_unitary(theta, n, k):
    ns = sum(c * PAULI[a] for c, a in zip(n, "xyz"))
    u = math.cos(theta) * np.eye(2) + 1j * k * math.sin(theta) * ns
    return np.kron(np.eye(2), u)


def kraus_a(k):
    plus = np.array([1, k]) / math.sqrt(2)
    return np.kron(np.outer(plus, plus), np.eye(2))


def energies(rho, h, theta, n=(0, 1, 0)):
    """(E_initial, E after measurement, E after Bob's rotation)."""
    after_m = sum(kraus_a(k) @ rho @ kraus_a(k) for k in (1, -1))
    after_u = sum(bob_unitary(theta, n, k) @ kraus_a(k) @ rho @ kraus_a(k)
                  @ bob_unitary(theta, n, k).conj().T for k in (1, -1))
    return tuple(float(np.trace(h @ r).real) for r in (rho, after_m, after_u))


def best_theta(rho, h, n=(0, 1, 0)):
    """Brute-force minimum of E_B - E_A over theta."""
    f = lambda th: energies(rho, h, th, n)[2] - energies(rho, h, th, n)[1]
    grid = np.linspace(-math.pi / 2, math.pi / 2, 721)
    th0 = grid[int(np.argmin([f(t) for t in grid]))]
    res = minimize_scalar(f, bounds=(th0 - 0.01, th0 + 0.01), method="bounded",
                          options={"xatol": 1e-13})
    return float(res.x), float(res.fun)


def best_axis(rho, h, starts=40, seed=0):
    """Multi-start joint minimum over theta and the axis angles."""
    rng = np.random.default_rng(seed)

    def f(x):
        th, pol, az = x
        n = (math.sin(pol) * math.cos(az), math.sin(pol) * math.sin(az), math.cos(pol))
        e0, ea, eb = energies(rho, h, th, n)
        return eb - ea

    best = None
    for _ in range(starts):
        x0 = rng.uniform([0, 0, 0], [math.pi / 2, math.pi, 2 * math.pi])
        r = minimize(f, x0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15,
                                                             "maxiter": 20000})
        if best is None or r.fun < best.fun:
            best = r
    th, pol, az = best.x
    n = np.array([math.sin(pol) * math.cos(az), math.sin(pol) * math.sin(az), math.cos(pol)])
    if th < 0:
        th, n = -th, -n
    th = th % math.pi
    if th > math.pi / 2:
        th, n = math.pi - th, -n
    return float(th), n, float(best.fun)


def partial_transpose(rho):
    out = np.zeros_like(rho)
    for a, b, c, d in itertools.product(range(2), repeat=4):
        out[2 * a + b, 2 * c + d] = rho[2 * a + d, 2 * c + b]
    return out


def negativity(rho):
    lam = np.linalg.eigvalsh(partial_transpose(rho))
    return float(-lam[lam < 0].sum())


def concurrence(rho):
    yy = np.kron(PAULI["y"], PAULI["y"])
    r = rho @ yy @ rho.conj() @ yy
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(r).real)[::-1], 0, None))
    return float(max(0.0, lam[0] - lam[1:].sum()))


def entropy(rho):
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-300]
    return float(-(w * np.log2(w)).sum())


def discord(rho, starts=30, seed=0):
    """Measurement on A; multi-start over the Bloch sphere."""
    rho_a = np.einsum("ibjb->ij", rho.reshape(2, 2, 2, 2))

    def cond(x):
        pol, az = x
        v = np.array([math.cos(pol / 2), math.sin(pol / 2) * np.exp(1j * az)])
        total = 0.0
        for basis in (v, np.array([-np.conj(v[1]), np.conj(v[0])])):
            proj = np.kron(np.outer(basis, basis.conj()), np.eye(2))
            sigma = np.einsum("aiaj->ij", (proj @ rho @ proj).reshape(2, 2, 2, 2))
            p = np.trace(sigma).real
            if p > 1e-300:
                total += p * entropy(sigma / p)
        return total

    rng = np.random.default_rng(seed)
    best = min((minimize(cond, rng.uniform([0, 0], [math.pi, 2 * math.pi]), method="Nelder-Mead",
                         options={"xatol": 1e-10, "fatol": 1e-14}).fun for _ in range(starts)))
    return entropy(rho_a) - entropy(rho) + best
