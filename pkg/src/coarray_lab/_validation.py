"""Input validation helpers used by the public API."""

from __future__ import annotations

import numpy as np


def check_square_matrix(mat, name="matrix"):
    """Coerce to a 2-D square complex ndarray, raising ValueError otherwise."""
    arr = np.asarray(mat, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_hermitian(mat, name="matrix", tol=1e-8):
    """Validate approximate Hermitian symmetry and return the symmetrized matrix.

    The returned matrix is exactly Hermitian: the input is averaged with its
    conjugate transpose so downstream eigensolvers see a symmetric operator.
    """
    arr = check_square_matrix(mat, name)
    scale = max(float(np.max(np.abs(arr))), 1.0)
    asym = float(np.max(np.abs(arr - arr.conj().T)))
    if asym > tol * scale:
        raise ValueError(
            f"{name} is not Hermitian: max asymmetry {asym:.3e} exceeds "
            f"tolerance {tol * scale:.3e}"
        )
    return 0.5 * (arr + arr.conj().T)


def check_snapshots(x, name="snapshots"):
    """Validate a complex snapshot block of shape (n_sensors, n_snapshots)."""
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 2 or arr.shape[1] < 1:
        raise ValueError(f"{name} needs at least 2 sensors and 1 snapshot, got {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_positive_int(value, name, minimum=1):
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_real(value, name, minimum=None, strict=False):
    num = float(value)
    if not np.isfinite(num):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if minimum is not None:
        if strict and num <= minimum:
            raise ValueError(f"{name} must be > {minimum}, got {num}")
        if not strict and num < minimum:
            raise ValueError(f"{name} must be >= {minimum}, got {num}")
    return num


def as_frequency_array(values, name="omegas"):
    """Canonicalize torus frequencies to [0, 1) and require pairwise distinctness."""
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    canon = np.mod(arr, 1.0)
    canon[canon == 1.0] = 0.0
    if len(np.unique(canon)) != len(canon):
        raise ValueError(f"{name} must be pairwise distinct modulo 1")
    return canon
