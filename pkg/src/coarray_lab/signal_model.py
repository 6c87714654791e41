"""Narrowband source scenes and circularly symmetric snapshot generation.

Source directions are normalized torus frequencies in [0, 1): a physical
direction ``theta`` in degrees maps to ``sin(radians(theta)) / 2 mod 1`` under
half-wavelength spacing. Sources are zero-mean circular complex Gaussians
with diagonal power matrix; noise is white circular Gaussian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import as_frequency_array, check_real
from .estimation import CoarrayCovariance
from .geometry import coarray_structure

__all__ = [
    "SourceScene",
    "SnapshotMatrix",
    "omega_from_degrees",
    "noise_power_for_snr_db",
    "steering_matrix",
    "true_covariance",
    "true_coarray_covariance",
    "sample_snapshots",
    "sample_coarray_covariance",
]


def omega_from_degrees(theta_deg):
    """Map broadside angle(s) in degrees to torus frequencies in [0, 1)."""
    return np.mod(np.sin(np.radians(theta_deg)) / 2.0, 1.0)


def noise_power_for_snr_db(p_min, snr_db):
    """Noise power giving the requested SNR, defined as p_min over noise."""
    p = check_real(p_min, "p_min", minimum=0.0, strict=True)
    return p * 10.0 ** (-float(snr_db) / 10.0)


@dataclass(frozen=True)
class SourceScene:
    """A set of uncorrelated narrowband sources plus white noise.

    Attributes
    ----------
    omegas : tuple of float
        Pairwise distinct torus frequencies in [0, 1).
    powers : tuple of float
        Positive source powers, same length as ``omegas``.
    noise_power : float
        Non-negative white noise power.
    """

    omegas: tuple
    powers: tuple
    noise_power: float

    def __post_init__(self):
        om = as_frequency_array(self.omegas, "omegas")
        pw = np.atleast_1d(np.asarray(self.powers, dtype=float))
        if pw.shape != om.shape:
            raise ValueError(
                f"powers shape {pw.shape} does not match omegas shape {om.shape}"
            )
        if not np.all(np.isfinite(pw)) or np.any(pw <= 0):
            raise ValueError("powers must be positive and finite")
        noise = check_real(self.noise_power, "noise_power", minimum=0.0)
        object.__setattr__(self, "omegas", tuple(float(v) for v in om))
        object.__setattr__(self, "powers", tuple(float(v) for v in pw))
        object.__setattr__(self, "noise_power", noise)

    @property
    def n_sources(self):
        return len(self.omegas)

    @property
    def p_min(self):
        return min(self.powers)

    @property
    def p_max(self):
        return max(self.powers)

    @classmethod
    def equispaced(cls, start, separation, n_sources, p_min=1.0,
                   dynamic_range=1.0, snr_db=None, noise_power=None):
        """Scene with sources at ``start + k*separation`` for ``k < n_sources``.

        The first source carries ``p_min * dynamic_range``, the rest carry
        ``p_min``. Exactly one of ``snr_db`` and ``noise_power`` must be given.
        """
        if (snr_db is None) == (noise_power is None):
            raise ValueError("give exactly one of snr_db and noise_power")
        sep = check_real(separation, "separation", minimum=0.0, strict=True)
        base = check_real(p_min, "p_min", minimum=0.0, strict=True)
        dr = check_real(dynamic_range, "dynamic_range", minimum=1.0)
        omegas = np.mod(float(start) + sep * np.arange(int(n_sources)), 1.0)
        powers = np.full(int(n_sources), base)
        powers[0] = base * dr
        noise = (noise_power_for_snr_db(base, snr_db)
                 if noise_power is None else noise_power)
        return cls(tuple(omegas), tuple(powers), float(noise))


@dataclass(frozen=True)
class SnapshotMatrix:
    """A block of array snapshots together with the seed that produced it.

    Attributes
    ----------
    data : ndarray
        Complex matrix of shape (n_sensors, n_snapshots).
    seed : int
        Seed of the generator draw.
    """

    data: np.ndarray
    seed: int

    @property
    def n_sensors(self):
        return self.data.shape[0]

    @property
    def n_snapshots(self):
        return self.data.shape[1]

    @property
    def samples(self):
        """Snapshot-major view of shape (n_snapshots, n_sensors)."""
        return self.data.T


def steering_matrix(positions, omegas):
    """Array manifold with entries ``exp(2j*pi*d_p*omega_i)``.

    Parameters
    ----------
    positions : sequence of int or SensorArray
        Sensor positions on the integer grid.
    omegas : sequence of float
        Torus frequencies.

    Returns
    -------
    ndarray of shape (len(positions), len(omegas))
    """
    pos = np.asarray(getattr(positions, "positions", positions), dtype=float)
    om = np.atleast_1d(np.asarray(omegas, dtype=float))
    return np.exp(2j * np.pi * np.outer(pos, om))


def true_covariance(array, scene):
    """Exact sensor covariance ``A diag(p) A^H + noise * I``."""
    a = steering_matrix(array, scene.omegas)
    r = (a * np.asarray(scene.powers)) @ a.conj().T
    r = 0.5 * (r + r.conj().T)
    r[np.diag_indices_from(r)] += scene.noise_power
    return r


def true_coarray_covariance(structure, scene):
    """Exact averaged covariance on the contiguous coarray segment.

    Equals the covariance a virtual unit-spaced array on ``0..m_ca`` would
    see: Toeplitz with lag ``i`` equal to ``sum_s p_s exp(2j*pi*i*omega_s)``
    plus the noise power on the zero lag.
    """
    if not structure.hole_free:
        raise ValueError("the coarray covariance needs a hole-free coarray")
    m = structure.m_ca
    a = steering_matrix(np.arange(m + 1), scene.omegas)
    pos = a @ np.asarray(scene.powers, dtype=complex)
    pos[0] = pos[0].real + scene.noise_power
    lags = np.concatenate([np.conj(pos[:0:-1]), pos])
    return CoarrayCovariance(lags=lags, provenance="exact")


def _coloring_factor(r):
    try:
        return np.linalg.cholesky(r)
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(r)
        vals = np.clip(vals, 0.0, None)
        return vecs * np.sqrt(vals)


def sample_snapshots(array, scene, n_snapshots, seed):
    """Draw i.i.d. circularly symmetric Gaussian snapshots.

    White complex Gaussians (independent real and imaginary parts of variance
    one half) are colored by a square root of the exact covariance, using its
    Cholesky factor when positive definite and an eigenvalue square root
    otherwise (e.g. zero noise power).

    Parameters
    ----------
    array : SensorArray
    scene : SourceScene
    n_snapshots : int
    seed : int
        Seeds a fresh PCG64 generator, so equal seeds give equal draws.

    Returns
    -------
    SnapshotMatrix
    """
    if int(n_snapshots) < 1:
        raise ValueError("n_snapshots must be positive")
    length = int(n_snapshots)
    rng = np.random.default_rng(int(seed))
    shape = (array.size, length)
    white = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    white *= math.sqrt(0.5)
    factor = _coloring_factor(true_covariance(array, scene))
    return SnapshotMatrix(data=factor @ white, seed=int(seed))


def sample_coarray_covariance(array, scene, n_snapshots, seed, structure=None):
    """Convenience chain: snapshots, sample covariance, redundancy average."""
    from .estimation import redundancy_average, sample_covariance

    if structure is None:
        structure = coarray_structure(array)
    snap = sample_snapshots(array, scene, n_snapshots, seed)
    r_hat = sample_covariance(snap)
    return redundancy_average(r_hat, structure, array,
                              n_snapshots=snap.n_snapshots, seed=snap.seed)
