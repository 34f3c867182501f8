"""Dense Hermitian matrices, spectral decompositions, and positivity checks.

Everything here is immutable and side-effect free, so values can be shared
freely across threads. Matrices are small and dense (dimension up to a few
dozen); no sparse or iterative machinery is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, JacobiConvergenceError

HERMITICITY_TOL = 1e-12
CONTAINMENT_TOL = 1e-10
ZERO_THRESHOLD_FACTOR = 1e-12
ADMISSIBILITY_TOL = 1e-10
DEFAULT_ADMISSIBILITY_PROBES = tuple(10.0 ** -k for k in range(1, 9))

_JACOBI_TOL_FACTOR = 1e-13
_JACOBI_SWEEP_CAP = 100


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """A square complex matrix symmetrized to (M + M*)/2 at construction.

    Construction rejects inputs whose max-magnitude deviation from Hermitian
    symmetry exceeds HERMITICITY_TOL; below that, the deviation is treated as
    rounding noise and removed exactly.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] < 1:
            raise DomainError("matrix dimension must be at least 1")
        deviation = float(np.max(np.abs(m - m.conj().T)))
        if deviation > HERMITICITY_TOL:
            raise DomainError(
                f"matrix is not Hermitian: max deviation {deviation:.3e} "
                f"exceeds {HERMITICITY_TOL:.0e}"
            )
        object.__setattr__(self, "mat", _freeze((m + m.conj().T) / 2.0))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def identity(cls, n: int) -> "HermitianMatrix":
        return cls(np.eye(n))

    @classmethod
    def diagonal(cls, values) -> "HermitianMatrix":
        return cls(np.diag(np.asarray(values, dtype=np.complex128)))

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix(self.mat + other.mat)

    def __sub__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix(self.mat - other.mat)

    def __mul__(self, scalar: float) -> "HermitianMatrix":
        return HermitianMatrix(self.mat * float(scalar))

    __rmul__ = __mul__

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.mat))

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (descending) with orthonormal eigenvector columns.

    rank counts eigenvalues strictly above zero_threshold; for PSD inputs the
    remaining ones are zero up to the threshold and their eigenvectors span
    the kernel.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rank: int
    zero_threshold: float

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _freeze(np.asarray(self.eigenvalues, dtype=float)))
        object.__setattr__(
            self, "eigenvectors", _freeze(np.asarray(self.eigenvectors, dtype=np.complex128))
        )

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def image_vectors(self) -> np.ndarray:
        return self.eigenvectors[:, : self.rank]

    @property
    def kernel_vectors(self) -> np.ndarray:
        return self.eigenvectors[:, self.rank :]

    @property
    def spectral_norm(self) -> float:
        return float(np.max(np.abs(self.eigenvalues))) if self.dim else 0.0

    def reconstruct(self) -> HermitianMatrix:
        v = self.eigenvectors
        return HermitianMatrix((v * self.eigenvalues) @ v.conj().T)


@dataclass(frozen=True)
class PsdCheckResult:
    is_psd: bool
    min_eigenvalue: float
    threshold_used: float


@dataclass(frozen=True, eq=False)
class AdmissibilityReport:
    """Probe-based check that A + tB stays PSD for small t > 0.

    admissible requires every probe's min eigenvalue to clear
    -ADMISSIBILITY_TOL * (1 + |A| + t|B|). The compression of B to the kernel
    of A being PSD is a necessary condition reported separately.
    """

    admissible: bool
    probes: tuple
    min_eigenvalues: tuple
    kernel_compression_psd: bool
    kernel_min_eigenvalue: float


def default_zero_threshold(eigenvalues: np.ndarray) -> float:
    """n * max|eigenvalue| * 1e-12; the scale below which eigenvalues count as zero."""
    n = len(eigenvalues)
    if n == 0:
        return 0.0
    return n * float(np.max(np.abs(eigenvalues))) * ZERO_THRESHOLD_FACTOR


def _jacobi_eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Sweeps the strict upper triangle in fixed row-major order with complex
    Givens rotations until the off-diagonal Frobenius norm drops below
    1e-13 * |A|_F, so results are deterministic for identical input bytes.
    """
    a = np.array(matrix, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([a[0, 0].real]), v

    norm_f = float(np.linalg.norm(a))
    target = _JACOBI_TOL_FACTOR * norm_f
    off = _offdiag_norm(a)
    for _ in range(_JACOBI_SWEEP_CAP):
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                # A <- U* A U with U the identity outside the (p, q) plane and
                # U[[p,q],[p,q]] = [[c, s], [-s*conj(phase), c*conj(phase)]].
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * np.conj(phase) * cq
                a[:, q] = s * cp + c * np.conj(phase) * cq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * phase * rq
                a[q, :] = s * rp + c * phase * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(phase) * vq
                v[:, q] = s * vp + c * np.conj(phase) * vq
        off = _offdiag_norm(a)
    else:
        raise JacobiConvergenceError(
            f"Jacobi eigensolver stalled: off-diagonal norm {off:.3e} "
            f"above target {target:.3e} after {_JACOBI_SWEEP_CAP} sweeps",
            offdiag_norm=off,
        )
    return np.diag(a).real.copy(), v


def _offdiag_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def eig(a: HermitianMatrix, zero_threshold: float | None = None) -> SpectralDecomposition:
    """Full spectral decomposition with eigenvalues sorted descending.

    Args:
        a: the matrix to decompose.
        zero_threshold: overrides the default policy
            n * max|eigenvalue| * 1e-12 for deciding the numerical rank.

    Ties in the descending sort keep the Jacobi output order (stable sort).
    """
    vals, vecs = _jacobi_eigh(a.mat)
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    threshold = default_zero_threshold(vals) if zero_threshold is None else float(zero_threshold)
    if threshold < 0.0:
        raise DomainError(f"zero threshold must be nonnegative, got {threshold}")
    rank = int(np.sum(vals > threshold))
    return SpectralDecomposition(vals, vecs, rank, threshold)


def image_contained(
    p: HermitianMatrix, a: SpectralDecomposition, ctol: float = CONTAINMENT_TOL
) -> bool:
    """Whether im(P) lies inside im(A), judged from the kernel compression of P.

    With K the kernel eigenvectors of A this tests
    |K* P K|_F <= ctol * (1 + |P|_F), which equals the Frobenius norm of the
    kernel-projected P since K has orthonormal columns.
    """
    kernel = a.kernel_vectors
    if kernel.shape[1] == 0:
        return True
    compressed = kernel.conj().T @ p.mat @ kernel
    return float(np.linalg.norm(compressed)) <= ctol * (1.0 + float(np.linalg.norm(p.mat)))


def psd_check(a: HermitianMatrix, threshold: float | None = None) -> PsdCheckResult:
    """PSD test: min eigenvalue >= -threshold (default threshold per eig policy)."""
    dec = eig(a, zero_threshold=threshold)
    min_eig = float(dec.eigenvalues[-1])
    return PsdCheckResult(min_eig >= -dec.zero_threshold, min_eig, dec.zero_threshold)


def direction_admissible(
    a: SpectralDecomposition,
    b: HermitianMatrix,
    t_probe: tuple | None = None,
) -> AdmissibilityReport:
    """Probe whether A + tB remains PSD for small t > 0.

    A genuine one-sided admissibility interval cannot be decided from finitely
    many probes; this samples t on a geometric grid (default 1e-1 ... 1e-8)
    and is honest about being a heuristic. |A| is the spectral norm taken from
    the decomposition, |B| the Frobenius norm (a cheap upper bound).
    """
    if b.dim != a.dim:
        raise DomainError(f"dimension mismatch: A is {a.dim}, B is {b.dim}")
    probes = DEFAULT_ADMISSIBILITY_PROBES if t_probe is None else tuple(float(t) for t in t_probe)
    if any(t <= 0 for t in probes):
        raise DomainError("admissibility probes must be positive")
    a_mat = a.reconstruct().mat
    norm_a = a.spectral_norm
    norm_b = b.frobenius_norm()
    min_eigs = []
    ok = True
    for t in probes:
        vals, _ = _jacobi_eigh(a_mat + t * b.mat)
        m = float(np.min(vals))
        min_eigs.append(m)
        if m < -ADMISSIBILITY_TOL * (1.0 + norm_a + t * norm_b):
            ok = False

    kernel = a.kernel_vectors
    if kernel.shape[1] == 0:
        kernel_psd = True
        kernel_min = 0.0
    else:
        compressed = kernel.conj().T @ b.mat @ kernel
        kvals, _ = _jacobi_eigh(compressed)
        kernel_min = float(np.min(kvals))
        kernel_psd = kernel_min >= -ADMISSIBILITY_TOL * (1.0 + norm_b)

    return AdmissibilityReport(ok, probes, tuple(min_eigs), kernel_psd, kernel_min)
