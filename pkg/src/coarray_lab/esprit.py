"""Rotational-invariance DOA estimation on exact or estimated covariances.

Two variants share one core: ``direct_esprit`` eigendecomposes the sensor
covariance of a unit-spaced array, while ``coarray_esprit`` first maps a
sparse array's covariance onto the contiguous virtual coarray via redundancy
averaging and runs the same subspace rotation there, trading snapshots for
aperture. Both are wrapped as scikit-learn style estimators so they compose
with the wider ecosystem tooling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from sklearn.base import BaseEstimator

from ._validation import check_hermitian, check_positive_int, check_snapshots
from .errors import RankDeficiencyError
from .estimation import redundancy_average, sample_covariance
from .geometry import coarray_structure, parse_array_spec, ula
from .signal_model import SnapshotMatrix

__all__ = [
    "SignalSubspace",
    "DoaEstimate",
    "signal_subspace",
    "esprit_rotation",
    "coarray_esprit",
    "direct_esprit",
    "CoarrayEsprit",
    "DirectEsprit",
]

# Relative eigenvalue gap below which the subspace is flagged as degenerate.
_GAP_RTOL = 1e-9
# Relative singular value cutoff for the pseudo-inverse in the rotation solve.
_RANK_RTOL = 1e-10


@dataclass(frozen=True)
class SignalSubspace:
    """Dominant eigenspace of a Hermitian covariance.

    Attributes
    ----------
    basis : ndarray
        Orthonormal columns spanning the top eigenspace, one per source,
        each phase normalized so its first significant entry is real
        positive.
    eigenvalues : ndarray
        The leading eigenvalues in descending order.
    eigen_gap : float
        Gap between the smallest kept and largest discarded eigenvalue;
        infinity when nothing is discarded.
    degenerate : bool
        True when the gap is negligible relative to the largest eigenvalue,
        in which case the estimate is still produced but unreliable.
    """

    basis: np.ndarray
    eigenvalues: np.ndarray
    eigen_gap: float
    degenerate: bool


@dataclass(frozen=True)
class DoaEstimate:
    """Result of an ESPRIT run.

    ``omegas_hat`` are torus frequencies in [0, 1), sorted ascending, with
    ``psi_eigenvalues`` reordered in tandem. The eigenvalue moduli indicate
    estimate quality: they approach one as the covariance error vanishes.
    """

    omegas_hat: tuple
    psi_eigenvalues: tuple
    subspace_eigenvalues: tuple = ()
    eigen_gap: float = float("inf")
    degenerate: bool = False
    method: str = "coarray"

    @property
    def moduli(self):
        return tuple(abs(v) for v in self.psi_eigenvalues)

    def to_json_dict(self):
        return {
            "omegas_hat": [float(v) for v in self.omegas_hat],
            "psi_eigenvalues": [[float(v.real), float(v.imag)]
                                for v in self.psi_eigenvalues],
            "diagnostics": {
                "method": self.method,
                "moduli": [float(v) for v in self.moduli],
                "subspace_eigenvalues": [float(v) for v in self.subspace_eigenvalues],
                "eigen_gap": (None if np.isinf(self.eigen_gap)
                              else float(self.eigen_gap)),
                "degenerate": bool(self.degenerate),
            },
        }


def _normalize_phases(basis):
    out = basis.copy()
    for col in range(out.shape[1]):
        u = out[:, col]
        mags = np.abs(u)
        idx = int(np.argmax(mags > 1e-12 * mags.max()))
        out[:, col] = u * (np.conj(u[idx]) / mags[idx])
    return out


def signal_subspace(covariance, n_sources):
    """Top eigenpairs of a Hermitian covariance.

    Parameters
    ----------
    covariance : ndarray
        Hermitian matrix.
    n_sources : int
        Number of eigenpairs to keep; must be less than the dimension so a
        noise eigenvalue remains to measure the gap against.

    Returns
    -------
    SignalSubspace
    """
    h = check_hermitian(covariance, "covariance")
    s = check_positive_int(n_sources, "n_sources")
    dim = h.shape[0]
    if s >= dim:
        raise ValueError(f"n_sources must be < dimension {dim}, got {s}")
    vals, vecs = scipy.linalg.eigh(h, subset_by_index=[dim - s - 1, dim - 1])
    vals = vals[::-1]
    vecs = vecs[:, ::-1]
    gap = float(vals[s - 1] - vals[s])
    scale = max(abs(float(vals[0])), np.finfo(float).tiny)
    return SignalSubspace(
        basis=_normalize_phases(vecs[:, :s]),
        eigenvalues=vals[:s].copy(),
        eigen_gap=gap,
        degenerate=gap <= _GAP_RTOL * scale,
    )


def esprit_rotation(subspace, method="coarray"):
    """Solve the shift-invariance relation and read off the frequencies.

    With ``U0`` and ``U1`` the first and last ``rows - 1`` rows of the
    subspace basis, the rotation ``psi = pinv(U0) @ U1`` has eigenvalues
    whose phases are ``2*pi*omega``; phases are mapped to [0, 1) and sorted.

    Raises
    ------
    RankDeficiencyError
        When ``U0`` is numerically rank deficient (stage ``"rotation"``).
    """
    basis = subspace.basis
    rows, s = basis.shape
    if rows - 1 < s:
        raise RankDeficiencyError(
            f"need at least {s + 1} coarray rows to rotate a {s}-source "
            f"subspace, got {rows}",
        )
    u0 = basis[:-1, :]
    u1 = basis[1:, :]
    left, sv, right_h = np.linalg.svd(u0, full_matrices=False)
    if sv[0] == 0.0 or sv[-1] <= _RANK_RTOL * sv[0]:
        raise RankDeficiencyError(
            f"rotation solve is rank deficient: singular values {sv}",
        )
    psi = (right_h.conj().T * (1.0 / sv)) @ (left.conj().T @ u1)
    eigvals = np.linalg.eigvals(psi)
    omegas = np.angle(eigvals) / (2.0 * np.pi)
    omegas = np.where(omegas < 0.0, omegas + 1.0, omegas)
    order = np.argsort(omegas)
    return DoaEstimate(
        omegas_hat=tuple(float(v) for v in omegas[order]),
        psi_eigenvalues=tuple(complex(v) for v in eigvals[order]),
        subspace_eigenvalues=tuple(float(v) for v in subspace.eigenvalues),
        eigen_gap=subspace.eigen_gap,
        degenerate=subspace.degenerate,
        method=method,
    )


def coarray_esprit(snapshots, array, n_sources, structure=None):
    """Estimate source frequencies from sparse-array snapshots.

    Runs the full chain: sample covariance, redundancy averaging onto the
    contiguous coarray, dominant subspace, rotation. ``snapshots`` may also
    be a :class:`CoarrayCovariance` to skip the averaging (useful with exact
    covariances).

    Parameters
    ----------
    snapshots : SnapshotMatrix, ndarray or CoarrayCovariance
        Snapshot block of shape (n_sensors, n_snapshots), or an averaged
        covariance.
    array : SensorArray
    n_sources : int
        Must not exceed the coarray half-width.
    structure : CoarrayStructure, optional
        Precomputed coarray of ``array``.

    Returns
    -------
    DoaEstimate
    """
    if structure is None:
        structure = coarray_structure(array)
    if not structure.hole_free:
        raise ValueError("coarray ESPRIT requires a hole-free coarray")
    s = check_positive_int(n_sources, "n_sources")
    if s > structure.m_ca:
        raise ValueError(
            f"n_sources {s} exceeds the coarray half-width {structure.m_ca}"
        )
    if hasattr(snapshots, "lags"):
        cov = snapshots
        if cov.m_ca != structure.m_ca:
            raise ValueError(
                f"covariance half-width {cov.m_ca} does not match the "
                f"array's coarray half-width {structure.m_ca}"
            )
    else:
        data = check_snapshots(getattr(snapshots, "data", snapshots))
        if data.shape[0] != array.size:
            raise ValueError(
                f"snapshot rows {data.shape[0]} do not match array size {array.size}"
            )
        r_hat = sample_covariance(data)
        cov = redundancy_average(r_hat, structure, array)
    subspace = signal_subspace(cov.matrix, s)
    return esprit_rotation(subspace, method="coarray")


def direct_esprit(snapshots, array, n_sources):
    """Estimate source frequencies by ESPRIT on the raw sensor covariance.

    Only valid for unit-spaced (contiguous) arrays, whose physical geometry
    already carries the shift invariance.
    """
    if not array.is_unit_spaced():
        raise ValueError("direct ESPRIT requires a unit-spaced array")
    s = check_positive_int(n_sources, "n_sources")
    if s >= array.size:
        raise ValueError(
            f"n_sources {s} must be below the sensor count {array.size}"
        )
    data = check_snapshots(getattr(snapshots, "data", snapshots))
    if data.shape[0] != array.size:
        raise ValueError(
            f"snapshot rows {data.shape[0]} do not match array size {array.size}"
        )
    subspace = signal_subspace(sample_covariance(data), s)
    return esprit_rotation(subspace, method="direct")


def _snapshot_block(x):
    """Snapshot-major input (n_snapshots, n_sensors) to sensor-major block."""
    if isinstance(x, SnapshotMatrix):
        return x.data
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D snapshot matrix, got shape {arr.shape}")
    return arr.T


class CoarrayEsprit(BaseEstimator):
    """Scikit-learn style wrapper around :func:`coarray_esprit`.

    Parameters
    ----------
    n_sources : int
        Number of sources to estimate.
    array : SensorArray or str
        Sparse array geometry, either an instance or a spec string such as
        ``"nested:5,5"``. Its coarray must be hole free.

    Attributes
    ----------
    omegas_ : ndarray
        Estimated torus frequencies, ascending.
    psi_eigenvalues_ : ndarray
        Rotation eigenvalues matching ``omegas_``.
    estimate_ : DoaEstimate
        Full result object with diagnostics.
    """

    def __init__(self, n_sources=1, array=None):
        self.n_sources = n_sources
        self.array = array

    def _resolved_array(self):
        if self.array is None:
            raise ValueError("array must be set before fitting")
        return parse_array_spec(self.array)

    def fit(self, X, y=None):
        """Fit from snapshots of shape (n_snapshots, n_sensors).

        Returns self, per the scikit-learn contract.
        """
        data = check_snapshots(_snapshot_block(X), "X")
        arr = self._resolved_array()
        est = coarray_esprit(data, arr, self.n_sources)
        self.n_features_in_ = data.shape[0]
        self.estimate_ = est
        self.omegas_ = np.asarray(est.omegas_hat)
        self.psi_eigenvalues_ = np.asarray(est.psi_eigenvalues)
        return self

    def fit_predict(self, X, y=None):
        """Fit and return the estimated frequencies."""
        return self.fit(X).omegas_


class DirectEsprit(BaseEstimator):
    """Scikit-learn style wrapper around :func:`direct_esprit`.

    ``array`` defaults to a unit-spaced array matching the width of the data
    passed to :meth:`fit`.
    """

    def __init__(self, n_sources=1, array=None):
        self.n_sources = n_sources
        self.array = array

    def fit(self, X, y=None):
        data = check_snapshots(_snapshot_block(X), "X")
        arr = (ula(data.shape[0]) if self.array is None
               else parse_array_spec(self.array))
        est = direct_esprit(data, arr, self.n_sources)
        self.n_features_in_ = data.shape[0]
        self.estimate_ = est
        self.omegas_ = np.asarray(est.omegas_hat)
        self.psi_eigenvalues_ = np.asarray(est.psi_eigenvalues)
        return self

    def fit_predict(self, X, y=None):
        """Fit and return the estimated frequencies."""
        return self.fit(X).omegas_
