"""Seeded random test instances: PSD matrices, image-compatible states, directions.

All constructions run off a SplitMix64 stream, so a single integer seed pins
every matrix in a verification run regardless of platform.
"""

from __future__ import annotations

import numpy as np

from .hermitian_core import HermitianMatrix, SpectralDecomposition, eig
from .rng import SplitMix64


def random_hermitian(rng: SplitMix64, n: int, scale: float = 1.0) -> HermitianMatrix:
    m = np.array([[rng.complex_normal() for _ in range(n)] for _ in range(n)])
    return HermitianMatrix(scale * (m + m.conj().T) / 2.0)


def random_unitary(rng: SplitMix64, n: int) -> np.ndarray:
    """Eigenvector matrix of a random Hermitian draw (Haar-like, deterministic)."""
    return eig(random_hermitian(rng, n)).eigenvectors


def psd_from_spectrum(rng: SplitMix64, eigenvalues) -> HermitianMatrix:
    """PSD matrix with the given eigenvalues in a random eigenbasis."""
    vals = np.asarray(eigenvalues, dtype=float)
    if np.any(vals < 0):
        raise ValueError("spectrum must be nonnegative")
    u = random_unitary(rng, len(vals))
    return HermitianMatrix((u * vals) @ u.conj().T)


def separated_spectrum(
    rng: SplitMix64, count: int, *, low: float = 0.5, gap: float = 0.35, jitter: float = 0.25
) -> list[float]:
    """Positive values with pairwise gaps of at least `gap` (descending)."""
    vals = []
    x = low + jitter * rng.uniform()
    for _ in range(count):
        vals.append(x)
        x += gap + jitter * rng.uniform()
    return vals[::-1]


def random_psd(
    rng: SplitMix64, n: int, rank: int | None = None, *, min_gap: float = 0.0
) -> HermitianMatrix:
    """Random PSD matrix; rank defaults to full, eigenvalues kept O(1)."""
    r = n if rank is None else rank
    if not 0 <= r <= n:
        raise ValueError(f"rank {r} out of range for dimension {n}")
    if min_gap > 0.0:
        positive = separated_spectrum(rng, r, gap=min_gap)
    else:
        positive = sorted((0.5 + 2.0 * rng.uniform() for _ in range(r)), reverse=True)
    return psd_from_spectrum(rng, list(positive) + [0.0] * (n - r))


def random_image_state(
    rng: SplitMix64, dec: SpectralDecomposition, *, trace_one: bool = False
) -> HermitianMatrix:
    """Random PSD P with im(P) inside im(A), built as (Pi C C* Pi)."""
    r = dec.rank
    v = dec.image_vectors
    g = np.array([[rng.complex_normal() for _ in range(r)] for _ in range(r)]) / np.sqrt(2.0 * r)
    c = g @ g.conj().T
    p = v @ c @ v.conj().T
    p = (p + p.conj().T) / 2.0
    if trace_one:
        p = p / float(np.trace(p).real)
    return HermitianMatrix(p)


def random_density(rng: SplitMix64, n: int, rank: int | None = None) -> HermitianMatrix:
    """Trace-one PSD matrix (a state), optionally rank deficient."""
    a = random_psd(rng, n, rank)
    return HermitianMatrix(a.mat / a.trace())


def random_admissible_direction(
    rng: SplitMix64,
    dec: SpectralDecomposition,
    *,
    image_only: bool = False,
) -> HermitianMatrix:
    """Hermitian B with A + tB PSD for small t > 0.

    In the eigenbasis of A the direction is [[X, Y], [Y*, Z]] with Z strictly
    positive definite on the kernel, which keeps every probe of the default
    admissibility grid inside the PSD cone for the O(1)-scaled spectra used
    here. With image_only=True the kernel blocks vanish entirely
    (B = Pi C Pi), the case where the derivative formula is exact even for
    f = inverse.
    """
    n = dec.dim
    r = dec.rank
    corank = n - r
    x = 0.3 * np.array([[rng.complex_normal() for _ in range(r)] for _ in range(r)])
    x = (x + x.conj().T) / 2.0
    if image_only or corank == 0:
        b = dec.image_vectors @ x @ dec.image_vectors.conj().T
        return HermitianMatrix((b + b.conj().T) / 2.0)
    y = 0.3 * np.array([[rng.complex_normal() for _ in range(corank)] for _ in range(r)])
    w = np.array([[rng.complex_normal() for _ in range(corank)] for _ in range(corank)])
    z = 0.3 * (w @ w.conj().T) / corank + 0.7 * np.eye(corank)
    block = np.block([[x, y], [y.conj().T, z]])
    v = dec.eigenvectors
    b = v @ block @ v.conj().T
    return HermitianMatrix((b + b.conj().T) / 2.0)
