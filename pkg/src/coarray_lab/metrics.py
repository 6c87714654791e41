"""Accuracy metrics on the frequency torus.

All distances wrap around the unit circle: two frequencies are close when
their values differ by nearly an integer, so every pairwise distance lies in
[0, 1/2].
"""

from __future__ import annotations

import itertools

import numpy as np

from ._validation import as_frequency_array

__all__ = [
    "torus_distance",
    "min_separation",
    "matching_distance",
    "resolution_success",
]

# Brute-force assignment over permutations; fine for subspace methods where
# the source count stays single digit.
_MAX_SOURCES = 10


def torus_distance(a, b):
    """Wrap-around distance between frequencies, elementwise."""
    frac = np.mod(np.asarray(a, dtype=float) - np.asarray(b, dtype=float), 1.0)
    return np.minimum(frac, 1.0 - frac)


def min_separation(omegas):
    """Smallest pairwise torus distance of a frequency set.

    Requires at least two frequencies; the result lies in (0, 1/2].
    """
    om = as_frequency_array(omegas)
    if om.size < 2:
        raise ValueError("min_separation needs at least two frequencies")
    best = 0.5
    for i in range(om.size - 1):
        best = min(best, float(np.min(torus_distance(om[i], om[i + 1:]))))
    return best


def _frequency_multiset(values, name):
    """Canonicalize to [0, 1) without requiring distinctness.

    Estimates may legitimately contain coincident frequencies (degenerate
    rotations), and the matching metric stays well defined for them.
    """
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return np.mod(arr, 1.0)


def _paired_errors(truth, estimate):
    t = _frequency_multiset(truth, "truth")
    e = _frequency_multiset(estimate, "estimate")
    if t.shape != e.shape:
        raise ValueError(f"cardinality mismatch: {t.size} truths vs {e.size} estimates")
    if t.size > _MAX_SOURCES:
        raise ValueError(f"matching supports at most {_MAX_SOURCES} sources")
    return t, e


def matching_distance(truth, estimate, return_permutation=False):
    """Permutation-optimal worst-case torus error between frequency sets.

    Minimizes, over all pairings of estimates to truths, the largest
    per-source torus distance. With ``return_permutation=True`` also returns
    the optimal assignment as a tuple ``perm`` such that ``estimate[perm[j]]``
    is matched to ``truth[j]``.

    Parameters
    ----------
    truth, estimate : sequence of float
        Equal-cardinality frequency sets.

    Returns
    -------
    float, or (float, tuple)
    """
    t, e = _paired_errors(truth, estimate)
    dist = torus_distance(t[:, None], e[None, :])
    best = None
    best_perm = None
    for perm in itertools.permutations(range(t.size)):
        worst = float(np.max(dist[np.arange(t.size), perm]))
        if best is None or worst < best:
            best = worst
            best_perm = perm
    if return_permutation:
        return best, best_perm
    return best


def resolution_success(truth, estimate, separation):
    """Whether every source is located to within a tenth of the separation.

    Uses the matching-distance optimal pairing, so the criterion is
    equivalent to ``matching_distance(truth, estimate) <= separation / 10``.
    """
    sep = float(separation)
    if not np.isfinite(sep) or sep <= 0:
        raise ValueError(f"separation must be positive, got {separation!r}")
    md, perm = matching_distance(truth, estimate, return_permutation=True)
    t, e = _paired_errors(truth, estimate)
    errors = torus_distance(t, e[list(perm)])
    return bool(np.all(errors <= sep / 10.0))
