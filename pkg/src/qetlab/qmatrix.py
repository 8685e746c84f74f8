"""Dense complex linear algebra for one- and two-qubit operators.

Matrices are plain ``numpy`` arrays of ``complex128``.  Two-qubit operators
use the ordering ``|00>, |01>, |10>, |11>`` with subsystem A as the left
factor.  Every function returns a fresh read-only array and never mutates
its inputs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "I2", "I4", "SX", "SY", "SZ", "SP", "SM",
    "HermitianSpectrum", "DensityMatrix", "NotHermitianError", "InvalidStateError",
    "as_matrix", "kron", "dag", "comm", "expval", "is_hermitian",
    "partial_transpose_B", "partial_trace_B", "partial_trace_A",
    "hermitian_eig", "eigvalsh", "singular_values", "ket", "projector", "max_abs",
]

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
CLUSTER_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=np.complex128)
    out.setflags(write=False)
    return out


I2 = _frozen(np.eye(2))
I4 = _frozen(np.eye(4))
SX = _frozen([[0, 1], [1, 0]])
SY = _frozen([[0, -1j], [1j, 0]])
SZ = _frozen([[1, 0], [0, -1]])
# sigma_+ = (sx + i sy)/2 raises |1> to |0> in the sigma_z eigenbasis (|0> = spin up)
SP = _frozen((SX + 1j * SY) / 2)
SM = _frozen((SX - 1j * SY) / 2)


class NotHermitianError(ValueError):
    pass


class InvalidStateError(ValueError):
    pass


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a read-only square complex matrix of dimension 2 or 4."""
    if isinstance(m, DensityMatrix):
        return m.data
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] not in (2, 4):
        raise ValueError(f"dimension must be 2 or 4, got {a.shape[0]}")
    if a.flags.writeable:
        a = a.copy()
        a.setflags(write=False)
    return a


def kron(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[0] * b.shape[0] > 4:
        raise ValueError(
            f"kron of {a.shape[0]}x{a.shape[0]} and {b.shape[0]}x{b.shape[0]} "
            "exceeds the two-qubit dimension 4")
    return _frozen(np.kron(a, b))


def dag(a) -> np.ndarray:
    return _frozen(as_matrix(a).conj().T)


def comm(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    return _frozen(a @ b - b @ a)


def expval(op, rho) -> float:
    """Real part of ``tr(op rho)``."""
    return float(np.real(np.trace(as_matrix(op) @ as_matrix(rho))))


def max_abs(a) -> float:
    return float(np.max(np.abs(np.asarray(a))))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    return max_abs(a - a.conj().T) <= tol


def _require4(rho) -> np.ndarray:
    r = as_matrix(rho)
    if r.shape != (4, 4):
        raise ValueError(f"two-qubit (4x4) operator required, got {r.shape}")
    return r


def partial_transpose_B(rho) -> np.ndarray:
    r = _require4(rho).reshape(2, 2, 2, 2)  # a, b, a', b'
    return _frozen(r.transpose(0, 3, 2, 1).reshape(4, 4))


def partial_trace_B(rho) -> np.ndarray:
    r = _require4(rho).reshape(2, 2, 2, 2)
    return _frozen(np.einsum("ibjb->ij", r))


def partial_trace_A(rho) -> np.ndarray:
    r = _require4(rho).reshape(2, 2, 2, 2)
    return _frozen(np.einsum("aiaj->ij", r))


def ket(*amplitudes) -> np.ndarray:
    v = np.array(amplitudes, dtype=np.complex128)
    return _frozen(v / np.linalg.norm(v))


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    return _frozen(np.outer(v, v.conj()))


# -- eigensolver -------------------------------------------------------------

@dataclass(frozen=True)
class HermitianSpectrum:
    """Ascending eigenvalues with the matching orthonormal eigenvectors.

    ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def __iter__(self):
        return iter((self.eigenvalues, self.eigenvectors))


def _jacobi_symmetric(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalisation of a real symmetric matrix.

    Returns unsorted eigenvalues and the column eigenvector matrix.  Works on
    Python lists: at n <= 8 this is several times faster than numpy slicing.
    """
    n = a.shape[0]
    m = [[float(x) for x in row] for row in a]
    v = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    # Relative threshold: tiny matrices (e.g. nearly pure states' products) still
    # get diagonalised to full relative precision.
    eps = JACOBI_TOL * sum(x * x for row in m for x in row) ** 0.5
    polish = False
    for _ in range(JACOBI_MAX_SWEEPS):
        off2 = 2.0 * sum(m[p][q] ** 2 for p in range(n - 1) for q in range(p + 1, n))
        if off2 <= eps * eps:
            # One more sweep after the threshold: convergence is quadratic, so
            # this costs little and sharpens eigenvectors of close eigenvalues.
            if polish or off2 == 0.0:
                return np.array([m[i][i] for i in range(n)]), np.array(v)
            polish = True
        for p in range(n - 1):
            mp = m[p]
            for q in range(p + 1, n):
                apq = mp[q]
                if apq == 0.0:
                    continue
                mq = m[q]
                theta = (mq[q] - mp[p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + (theta * theta + 1.0) ** 0.5)
                c = 1.0 / (t * t + 1.0) ** 0.5
                s = t * c
                for k in range(n):
                    mk = m[k]
                    akp, akq = mk[p], mk[q]
                    mk[p] = c * akp - s * akq
                    mk[q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = mp[k], mq[k]
                    mp[k] = c * apk - s * aqk
                    mq[k] = s * apk + c * aqk
                mp[q] = mq[p] = 0.0
                for row in v:
                    vp, vq = row[p], row[q]
                    row[p] = c * vp - s * vq
                    row[q] = s * vp + c * vq
    raise RuntimeError(f"Jacobi failed to converge in {JACOBI_MAX_SWEEPS} sweeps")


def _lowdin(v: np.ndarray) -> np.ndarray:
    """Symmetric orthonormalisation ``V (V^H V)^(-1/2)``.

    Candidates for different eigenvalues are orthogonal only to about
    ``eps |A| / gap`` because the real embedding mixes nearby eigenspaces;
    this is the smallest correction that restores exact orthonormality.
    """
    e = v.conj().T @ v - np.eye(v.shape[1])
    if float(np.max(np.abs(e))) > 1e-4:
        q, r = np.linalg.qr(v)
        return q * (np.diag(r) / np.abs(np.diag(r)))
    # series for (I + E)^(-1/2); the next term is O(E^4)
    e2 = e @ e
    return v @ (np.eye(v.shape[1]) - e / 2 + 3 * e2 / 8 - 5 * (e2 @ e) / 16)


def _fix_phase(v: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    idx = int(np.argmax(np.abs(v) > tol * np.max(np.abs(v))))
    return v * (abs(v[idx]) / v[idx])


def _first_nonzero(v: np.ndarray, tol: float = 1e-10) -> int:
    return int(np.argmax(np.abs(v) > tol))


def hermitian_eig(m) -> HermitianSpectrum:
    """Eigen-decomposition of a Hermitian matrix by Jacobi rotations.

    The complex ``n x n`` matrix ``X + iY`` is embedded in the real symmetric
    ``2n x 2n`` matrix ``[[X, -Y], [Y, X]]``; every eigenvalue then appears
    twice and each real eigenvector ``[x; y]`` gives a complex candidate
    ``x + iy``.  Degenerate eigenspaces are given a canonical basis by
    Gram-Schmidt on the columns of their projector, so the output does not
    depend on rotation order.  Each eigenvector has its first nonzero
    component real and positive.
    """
    a = as_matrix(m)
    asym = max_abs(a - a.conj().T)
    if asym > HERMITIAN_TOL:
        raise NotHermitianError(f"matrix is not Hermitian: max |A - A^H| = {asym:.3e}")
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    x, y = a.real, a.imag
    emb = np.block([[x, -y], [y, x]])
    w, u = _jacobi_symmetric(emb)
    order = np.argsort(w, kind="stable")
    w, u = w[order], u[:, order]
    cand = u[:n, :] + 1j * u[n:, :]

    # Each eigenvalue appears twice in the embedding; the copies agree to about
    # JACOBI_TOL * |A|, so clusters are split only on larger gaps and never
    # between the two copies (odd-sized clusters are merged forward).
    tol = CLUSTER_TOL * float(np.max(np.abs(w)))
    clusters, start = [], 0
    for i in range(1, 2 * n + 1):
        if i == 2 * n or (w[i] - w[i - 1] > tol and (i - start) % 2 == 0):
            clusters.append((start, i))
            start = i

    vectors = []
    for lo, hi in clusters:
        mult = max(1, round((hi - lo) / 2))
        basis = _orthonormal_span(cand[:, lo:hi], mult)
        if mult > 1:
            proj = basis @ basis.conj().T
            basis = _orthonormal_span(proj, mult)
        cols = [_fix_phase(basis[:, j]) for j in range(mult)]
        cols.sort(key=_first_nonzero)
        vectors.extend(cols)
    vecs = _lowdin(np.array(vectors).T)
    vecs = np.array([_fix_phase(vecs[:, j]) for j in range(n)]).T
    values = [float(np.real(vecs[:, j].conj() @ a @ vecs[:, j])) for j in range(n)]
    vals = np.array(values)
    order = np.argsort(vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return HermitianSpectrum(vals, vecs)


def _orthonormal_span(cols: np.ndarray, rank: int) -> np.ndarray:
    """Pick ``rank`` orthonormal vectors from ``cols`` by Gram-Schmidt.

    Columns are taken in index order, skipping any whose residual is small
    relative to the largest remaining one.
    """
    res = [cols[:, j].astype(np.complex128) for j in range(cols.shape[1])]
    out = []
    for _ in range(rank):
        norms = [np.linalg.norm(r) for r in res]
        big = max(norms)
        j = next(i for i, nr in enumerate(norms) if nr > 0.5 * big)
        e = res[j] / norms[j]
        out.append(e)
        res = [r - e * (e.conj() @ r) for r in res]
    return np.array(out).T


def eigvalsh(m) -> np.ndarray:
    return hermitian_eig(m).eigenvalues


def singular_values(m) -> np.ndarray:
    """Descending singular values by one-sided (Hestenes) Jacobi rotations.

    Columns are orthogonalised pairwise; the singular values are the final
    column norms.  Unlike square roots of ``A^H A`` eigenvalues, small
    singular values keep their relative accuracy.
    """
    a = as_matrix(m)
    n = a.shape[0]
    cols = [[complex(a[i, j]) for i in range(n)] for j in range(n)]
    for _ in range(JACOBI_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                cp, cq = cols[p], cols[q]
                alpha = sum(abs(x) ** 2 for x in cp)
                beta = sum(abs(x) ** 2 for x in cq)
                gamma = sum(x.conjugate() * y for x, y in zip(cp, cq))
                g = abs(gamma)
                if g == 0.0 or g <= JACOBI_TOL * (alpha * beta) ** 0.5:
                    continue
                rotated = True
                phase = gamma / g
                zeta = (beta - alpha) / (2.0 * g)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + (1.0 + zeta * zeta) ** 0.5)
                c = 1.0 / (1.0 + t * t) ** 0.5
                s = c * t
                qh = [y / phase for y in cq]
                cols[p] = [c * x - s * y for x, y in zip(cp, qh)]
                cols[q] = [s * x + c * y for x, y in zip(cp, qh)]
        if not rotated:
            sv = sorted((sum(abs(x) ** 2 for x in col) ** 0.5 for col in cols), reverse=True)
            return np.array(sv)
    raise RuntimeError(f"one-sided Jacobi failed to converge in {JACOBI_MAX_SWEEPS} sweeps")


# -- states ------------------------------------------------------------------

class DensityMatrix:
    """Validated quantum state: Hermitian, positive semidefinite, unit trace.

    Validation runs once at construction.  ``data`` is read-only.
    """

    __slots__ = ("data",)

    TOL = 1e-12

    def __init__(self, m, *, validate: bool = True):
        data = as_matrix(m)
        if validate:
            asym = max_abs(data - data.conj().T)
            if asym > self.TOL:
                raise InvalidStateError(f"state is not Hermitian (max asymmetry {asym:.3e})")
            tr = np.trace(data)
            if abs(tr - 1) > self.TOL:
                raise InvalidStateError(f"state trace is {tr.real:.15g}, not 1")
            lo = float(eigvalsh(data)[0])
            if lo < -self.TOL:
                raise InvalidStateError(f"state has negative eigenvalue {lo:.3e}")
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @classmethod
    def from_ket(cls, v) -> "DensityMatrix":
        return cls(projector(ket(*np.asarray(v))))

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)

    def __repr__(self):
        return f"DensityMatrix({np.array2string(self.data, precision=6)})"
