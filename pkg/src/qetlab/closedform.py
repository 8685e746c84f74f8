"""Analytic expressions for the thermal, excited-state and product-state protocols.

Nothing in this module touches a matrix: every quantity is computed from
``B``, ``alpha`` and ``beta`` alone, so it can serve as an oracle for the
density-matrix pipeline.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .xymodel import ModelParams

OVERFLOW_GUARD = 350.0


@dataclass(frozen=True)
class Hyperbolics:
    """``sinh``/``cosh``/``exp`` factors already divided by the partition function."""
    sinh_B: float    # sinh(beta B) / Z
    sinh_a: float    # sinh(beta alpha) / Z
    cosh_B: float
    cosh_a: float
    exp_mB: float    # exp(-beta B) / Z
    exp_pB: float    # exp(+beta B) / Z
    inv_Z: float     # 1 / Z


def hyperbolics(B: float, alpha: float, beta: float) -> Hyperbolics:
    bB, ba = beta * B, beta * alpha
    if max(bB, ba) <= OVERFLOW_GUARD:
        z = 2.0 * (math.cosh(ba) + math.cosh(bB))
        return Hyperbolics(math.sinh(bB) / z, math.sinh(ba) / z,
                           math.cosh(bB) / z, math.cosh(ba) / z,
                           math.exp(-bB) / z, math.exp(bB) / z, 1.0 / z)
    # Everything scaled by exp(-m); the factor cancels in each ratio.
    m = max(bB, ba)

    def e(x):
        return math.exp(x - m)

    zs = e(ba) + e(-ba) + e(bB) + e(-bB)
    return Hyperbolics((e(bB) - e(-bB)) / (2 * zs), (e(ba) - e(-ba)) / (2 * zs),
                       (e(bB) + e(-bB)) / (2 * zs), (e(ba) + e(-ba)) / (2 * zs),
                       e(-bB) / zs, e(bB) / zs, math.exp(-m) / zs)


def pq(params: ModelParams) -> tuple[float, float]:
    """Coefficients ``p`` (injected energy) and ``q`` with ``tan t0 = q/p``."""
    h = hyperbolics(params.B, params.alpha, params.beta)
    B, a = params.B, params.alpha
    return B * h.sinh_B + a * h.sinh_a, B * h.sinh_a - a * h.sinh_B


def delta_tel_min(p: float, q: float) -> float:
    """``p - sqrt(p^2 + q^2)`` written without cancellation."""
    r = math.hypot(p, q)
    return -q * q / (p + r) if p + r > 0 else 0.0


def F(t: float, params: ModelParams) -> float:
    """Energy change ``E_B - E_A`` of the thermal protocol at rotation ``t = 2 theta``."""
    h = hyperbolics(params.B, params.alpha, params.beta)
    B, a = params.B, params.alpha
    return ((B * (1 - math.cos(t)) + a * math.sin(t)) * h.sinh_B
            + (a * (1 - math.cos(t)) - B * math.sin(t)) * h.sinh_a)


def F_second_derivative(t: float, params: ModelParams) -> float:
    h = hyperbolics(params.B, params.alpha, params.beta)
    B, a = params.B, params.alpha
    return ((B * math.cos(t) - a * math.sin(t)) * h.sinh_B
            + (a * math.cos(t) + B * math.sin(t)) * h.sinh_a)


def critical_temperature(alpha: float) -> float:
    return alpha / math.log(1 + math.sqrt(2))


def concurrence(params: ModelParams) -> float:
    h = hyperbolics(params.B, params.alpha, params.beta)
    return max(0.0, 2 * (h.sinh_a - h.inv_Z))


def pt_eigenvalues(params: ModelParams) -> tuple[float, float, float, float]:
    """Eigenvalues ``(lambda_1, lambda_2, lambda_+, lambda_-)`` of the partially transposed state.

    The expression in ``exp(2 beta B)`` is used while it is representable;
    past the overflow guard the algebraically equal form
    ``(a + d)/2 +- sqrt(((a - d)/2)^2 + z^2)`` is used instead.
    """
    B, a, beta = params.B, params.alpha, params.beta
    h = hyperbolics(B, a, beta)
    lam12 = h.cosh_a
    if max(beta * B, beta * a) <= OVERFLOW_GUARD / 2:
        e2 = math.exp(2 * beta * B)
        z = 2.0 * (math.cosh(beta * a) + math.cosh(beta * B))
        root = math.sqrt(1 - 4 * e2 + e2 * e2 + 2 * e2 * math.cosh(2 * beta * a))
        den = 2 * z * math.exp(beta * B)
        lp, lm = (1 + e2 + root) / den, (1 + e2 - root) / den
    else:
        mid = (h.exp_mB + h.exp_pB) / 2
        rad = math.hypot((h.exp_mB - h.exp_pB) / 2, h.sinh_a)
        lp, lm = mid + rad, mid - rad
    return lam12, lam12, lp, lm


def x_state_entries(params: ModelParams) -> tuple[float, float, float, float]:
    """Thermal-state entries ``(a, d, w, z)``."""
    h = hyperbolics(params.B, params.alpha, params.beta)
    return h.exp_mB, h.exp_pB, h.cosh_a, -h.sinh_a


def excited_extraction(B: float, alpha: float) -> float:
    return (alpha + math.hypot(alpha, B)) / 2


def ground_extraction(B: float, alpha: float) -> float:
    """Ground-state extraction for ``B < alpha`` (entangled ground state)."""
    return (math.hypot(alpha, B) - alpha) / 2


def qee_curve(theta: float, B: float, alpha: float) -> float:
    """Energy change of the product-state protocol at Bob's angle ``theta``."""
    return (B / 2) * (1 - math.cos(2 * theta)) + (alpha / 2) * math.sin(2 * theta)


def qee_min(B: float, alpha: float) -> float:
    return (B - math.hypot(B, alpha)) / 2


def qee_optimal_angle(B: float, alpha: float) -> float:
    """``theta`` with ``sin 2theta = -alpha/r`` and ``cos 2theta = B/r``."""
    return math.atan2(-alpha, B) / 2


@dataclass(frozen=True)
class ClosedFormBundle:
    delta_inf: float
    p: float
    q: float
    t0: float
    delta_tel_min: float
    F_second_deriv: float
    Tc: float
    concurrence: float
    pt_eigs: tuple[float, float, float, float]
    e_plus_extract: float
    e_ground_extract: float
    qee_min: float

    def qee_curve(self, theta: float, B: float, alpha: float) -> float:
        return qee_curve(theta, B, alpha)


def evaluate(params: ModelParams) -> ClosedFormBundle:
    p, q = pq(params)
    r = math.hypot(p, q)
    return ClosedFormBundle(
        delta_inf=p,
        p=p,
        q=q,
        t0=math.atan2(q, p),
        delta_tel_min=delta_tel_min(p, q),
        F_second_deriv=r,
        Tc=critical_temperature(params.alpha),
        concurrence=concurrence(params),
        pt_eigs=pt_eigenvalues(params),
        e_plus_extract=excited_extraction(params.B, params.alpha),
        e_ground_extract=ground_extraction(params.B, params.alpha),
        qee_min=qee_min(params.B, params.alpha),
    )
