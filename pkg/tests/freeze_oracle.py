"""Regenerate ``oracle_values.json`` from ``oracle.py``.

Run from the repository root: ``python3 tests/freeze_oracle.py``.
"""
import json
import math
from pathlib import Path

import numpy as np

import oracle

THERMAL_POINTS = [(0.5, 1.0, 0.5), (2.0, 0.6, 1.3), (0.3, 0.8, 0.2), (1.2, 1.2, 0.7),
                  (0.0, 0.9, 0.4), (1.5, 0.4, 3.0)]
AXIS_POINTS = [(0.5, 1.0, 0.5), (2.0, 0.6, 1.3), (0.3, 0.8, 0.7)]
PURE_POINTS = [(0.5, 1.0), (1.0, 0.6), (2.0, 0.3)]


def thermal_record(B, a, T):
    rho = oracle.gibbs(B, a, T)
    h = oracle.hamiltonian(B, a)
    theta, dmin = oracle.best_theta(rho, h)
    e0, ea, _ = oracle.energies(rho, h, 0.0)
    return {
        "B": B, "alpha": a, "T": T,
        "Z": float(2 * (math.cosh(a / T) + math.cosh(B / T))),
        "rho_real": np.real(rho).tolist(),
        "delta_inf": ea - e0,
        "delta_tel_min": dmin,
        "theta_opt": theta,
        "negativity": oracle.negativity(rho),
        "concurrence": oracle.concurrence(rho),
        "pt_eigenvalues": np.linalg.eigvalsh(oracle.partial_transpose(rho)).tolist(),
        "discord": oracle.discord(rho),
        "F_samples": [[t, oracle.energies(rho, h, t / 2)[2] - ea] for t in (-2.0, 0.3, 1.1, 2.9)],
    }


def axis_record(B, a, T):
    rho = oracle.gibbs(B, a, T)
    th, n, val = oracle.best_axis(rho, oracle.hamiltonian(B, a))
    return {"B": B, "alpha": a, "T": T, "theta": th, "axis": n.tolist(), "delta_tel": val}


def pure_record(B, a):
    h = oracle.hamiltonian(B, a)
    plus = np.array([0, 1, 1, 0]) / math.sqrt(2)
    rho = np.outer(plus, plus).astype(complex)
    e0, ea, _ = oracle.energies(rho, h, 0.0)
    _, dmin = oracle.best_theta(rho, h)
    out = {"B": B, "alpha": a, "excited_alice_stage": ea - e0, "excited_delta_tel": dmin}
    if B > a:
        hq = oracle.hamiltonian(B, a, eps=B)
        ground = np.zeros((4, 4), dtype=complex)
        ground[3, 3] = 1
        _, ea_q, _ = oracle.energies(ground, hq, 0.0)
        th, dq = oracle.best_theta(ground, hq)
        out.update(qee_e_after_measurement=ea_q, qee_delta_tel=dq, qee_theta=th,
                   qee_curve=[[t, oracle.energies(ground, hq, t)[2] - ea_q]
                              for t in (-1.0, 0.2, 0.9)])
    return out


def main():
    bell = np.array([0, 1, -1, 0]) / math.sqrt(2)
    bell_rho = np.outer(bell, bell).astype(complex)
    data = {
        "thermal": [thermal_record(*p) for p in THERMAL_POINTS],
        "axis": [axis_record(*p) for p in AXIS_POINTS],
        "pure": [pure_record(*p) for p in PURE_POINTS],
        "bell": {"negativity": oracle.negativity(bell_rho),
                 "concurrence": oracle.concurrence(bell_rho),
                 "discord": oracle.discord(bell_rho)},
    }
    path = Path(__file__).with_name("oracle_values.json")
    path.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
