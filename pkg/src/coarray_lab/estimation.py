"""Coarray covariance estimation via redundancy averaging.

The estimation chain is: sample covariance of the snapshots, average the
entries sharing each coarray difference (weighting each lag by its pair
count), then rebuild a Hermitian Toeplitz matrix on the contiguous coarray
segment. Spectral diagnostics for the estimation error matrix live here too:
the trigonometric spectral function of a Toeplitz error, its trace-form dual,
and a grid-based upper bound on the spectral norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._validation import check_hermitian, check_snapshots
from .geometry import averaging_groups

__all__ = [
    "CoarrayCovariance",
    "toeplitz_from_lags",
    "sample_covariance",
    "redundancy_average",
    "hermitian_spectral_norm",
    "covariance_error",
    "lambda_matrix",
    "spectral_function_error",
    "grid_sup_bound",
]


def toeplitz_from_lags(lags):
    """Hermitian Toeplitz matrix from a conjugate-symmetric lag vector.

    ``lags`` holds the values for differences ``-m..m`` in order, so the
    result has shape ``(m+1, m+1)`` with entry ``(r, c) = lags[m + r - c]``.
    """
    t = np.asarray(lags, dtype=complex)
    if t.ndim != 1 or t.size % 2 == 0:
        raise ValueError(f"lag vector must be 1-D with odd length, got shape {t.shape}")
    m = (t.size - 1) // 2
    idx = np.arange(m + 1)
    return t[m + idx[:, None] - idx[None, :]]


@dataclass(frozen=True)
class CoarrayCovariance:
    """Averaged covariance on the contiguous coarray segment.

    Attributes
    ----------
    lags : ndarray
        Conjugate-symmetric vector of length ``2*m_ca + 1`` holding the
        averaged covariance lag for each difference ``-m_ca..m_ca``.
    provenance : str
        ``"exact"`` for model-derived covariances, ``"estimated"`` for
        sample-based ones.
    n_snapshots : int or None
        Snapshot count behind an estimated covariance.
    seed : int or None
        Seed of the snapshot draw behind an estimated covariance.
    """

    lags: np.ndarray
    provenance: str = "exact"
    n_snapshots: int | None = None
    seed: int | None = None

    def __post_init__(self):
        t = np.asarray(self.lags, dtype=complex)
        if t.ndim != 1 or t.size % 2 == 0:
            raise ValueError("lags must be a 1-D vector of odd length")
        m = (t.size - 1) // 2
        if abs(t[m].imag) > 1e-9 * max(1.0, abs(t[m])):
            raise ValueError("zero lag must be real")
        if self.provenance not in ("exact", "estimated"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "lags", t)

    @property
    def m_ca(self):
        """Contiguous coarray half-width."""
        return (self.lags.size - 1) // 2

    @cached_property
    def matrix(self):
        """The ``(m_ca+1) x (m_ca+1)`` Hermitian Toeplitz covariance."""
        return toeplitz_from_lags(self.lags)

    def to_json_dict(self):
        """JSON-ready dict with the lag vector as [re, im] pairs."""
        return {
            "m_ca": self.m_ca,
            "provenance": self.provenance,
            "n_snapshots": self.n_snapshots,
            "seed": self.seed,
            "lags": [[float(v.real), float(v.imag)] for v in self.lags],
        }

    @classmethod
    def from_json_dict(cls, data):
        lags = np.asarray([complex(re, im) for re, im in data["lags"]])
        return cls(
            lags=lags,
            provenance=data.get("provenance", "exact"),
            n_snapshots=data.get("n_snapshots"),
            seed=data.get("seed"),
        )


def sample_covariance(snapshots):
    """Sample covariance ``Y Y^H / L`` of a snapshot block.

    Parameters
    ----------
    snapshots : ndarray or SnapshotMatrix
        Complex block of shape (n_sensors, n_snapshots).

    Returns
    -------
    ndarray
        Hermitian (symmetrized) matrix of shape (n_sensors, n_sensors).
    """
    data = check_snapshots(getattr(snapshots, "data", snapshots))
    r = data @ data.conj().T / data.shape[1]
    return 0.5 * (r + r.conj().T)


def redundancy_average(r_hat, structure, array, provenance="estimated",
                       n_snapshots=None, seed=None):
    """Average covariance entries over equal coarray differences.

    Each lag ``i`` in ``0..m_ca`` is the mean of the entries ``r_hat[m, n]``
    with ``d_m - d_n = i``; negative lags are filled by conjugate symmetry, so
    the result is conjugate symmetric by construction and the zero lag is
    forced real.

    Parameters
    ----------
    r_hat : ndarray
        Hermitian covariance of shape (P, P) in sensor order.
    structure : CoarrayStructure
        Hole-free difference coarray of ``array``.
    array : SensorArray

    Returns
    -------
    CoarrayCovariance
    """
    if not structure.hole_free:
        raise ValueError("redundancy averaging requires a hole-free coarray")
    r = check_hermitian(r_hat, "r_hat")
    p = array.size
    if r.shape != (p, p):
        raise ValueError(f"r_hat shape {r.shape} does not match array size {p}")
    flat = r.ravel(order="F")
    groups = averaging_groups(structure, array)
    m = structure.m_ca
    pos = np.empty(m + 1, dtype=complex)
    for i in range(m + 1):
        pos[i] = flat[groups[i]].mean()
    pos[0] = pos[0].real
    lags = np.concatenate([np.conj(pos[:0:-1]), pos])
    return CoarrayCovariance(lags=lags, provenance=provenance,
                             n_snapshots=n_snapshots, seed=seed)


def hermitian_spectral_norm(mat):
    """Spectral norm of a Hermitian matrix via its eigenvalues."""
    h = check_hermitian(mat, "matrix")
    return float(np.max(np.abs(np.linalg.eigvalsh(h))))


def covariance_error(exact, estimated):
    """Spectral norm of the coarray covariance estimation error.

    Parameters
    ----------
    exact, estimated : CoarrayCovariance
        Must share the same coarray half-width.

    Returns
    -------
    float
    """
    if exact.m_ca != estimated.m_ca:
        raise ValueError(
            f"coarray sizes differ: {exact.m_ca} vs {estimated.m_ca}"
        )
    return hermitian_spectral_norm(exact.matrix - estimated.matrix)


def lambda_matrix(theta, structure, array):
    """Weighted steering outer-product kernel at angle ``theta``.

    Entry ``(m, n)`` equals ``exp(1j*(d_m - d_n)*theta) / weight(d_m - d_n)``.
    Tracing the product of this kernel against a sensor-domain error matrix
    reproduces the coarray spectral function, which is what makes the grid
    bound on the averaged error computable from sensor-domain quantities.
    """
    if not structure.hole_free:
        raise ValueError("lambda_matrix requires a hole-free coarray")
    pos = array.as_array()
    diffs = pos[:, None] - pos[None, :]
    weights = structure.weight_table[np.abs(diffs)].astype(float)
    return np.exp(1j * diffs * float(theta)) / weights


def _error_lags(exact, estimated):
    if exact.m_ca != estimated.m_ca:
        raise ValueError(
            f"coarray sizes differ: {exact.m_ca} vs {estimated.m_ca}"
        )
    return exact.lags - estimated.lags


def spectral_function_error(exact, estimated, theta, structure=None, array=None,
                            method="poly"):
    """Spectral function of the estimation error at angle(s) ``theta``.

    With ``method="poly"`` evaluates the trigonometric polynomial
    ``sum_k e_k exp(-1j*k*theta)`` over the error lags ``e_k``. With
    ``method="trace"`` evaluates the equivalent trace form
    ``tr(E_y @ lambda_matrix(theta))`` where ``E_y`` places the error lag of
    each sensor-pair difference at that pair; ``structure`` and ``array`` are
    required for this path.

    Returns
    -------
    complex or ndarray
        Value(s) of the spectral function; real up to rounding since the lag
        vector is conjugate symmetric.
    """
    e = _error_lags(exact, estimated)
    m = exact.m_ca
    if method == "poly":
        theta_arr = np.asarray(theta, dtype=float)
        ks = np.arange(-m, m + 1)
        vals = np.exp(-1j * np.multiply.outer(theta_arr, ks)) @ e
        return vals if theta_arr.ndim else complex(vals)
    if method == "trace":
        if structure is None or array is None:
            raise ValueError("trace method requires structure and array")
        pos = array.as_array()
        diffs = pos[:, None] - pos[None, :]
        e_y = e[m + diffs]
        lam = lambda_matrix(theta, structure, array)
        return complex(np.trace(e_y @ lam))
    raise ValueError(f"unknown method {method!r}")


def grid_sup_bound(exact, estimated, grid_mult=1):
    """Upper bound on the spectral norm of the coarray estimation error.

    The spectral norm of a Hermitian Toeplitz error is at most the sup of the
    absolute spectral function, and for a trigonometric polynomial of order
    ``m_ca`` that sup is at most twice the maximum over ``4*m_ca`` equispaced
    points covering the full period. ``grid_mult`` refines the grid by an
    integer factor; each coarse grid is a subset of the refined ones, so the
    refined maximum (and hence the bound) can only grow, staying valid while
    approaching twice the true sup.

    Returns
    -------
    float
    """
    if not isinstance(grid_mult, (int, np.integer)) or grid_mult < 1:
        raise ValueError("grid_mult must be a positive integer")
    m = exact.m_ca
    n = m * int(grid_mult)
    ks = np.arange(1, 4 * n + 1)
    thetas = (ks - 2 * n) * np.pi / (2 * n)
    vals = spectral_function_error(exact, estimated, thetas, method="poly")
    return 2.0 * float(np.max(np.abs(vals)))
