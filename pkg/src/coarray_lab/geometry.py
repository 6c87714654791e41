"""Sparse linear array geometry and difference-coarray combinatorics.

Sensor positions live on the integer grid with half-wavelength unit spacing.
The central objects are :class:`SensorArray` (a strictly increasing tuple of
non-negative integer positions) and :class:`CoarrayStructure` (its difference
coarray: the multiset of pairwise position differences, the weight of each
difference, the largest contiguous segment, and the hole-free flag).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._validation import check_positive_int

__all__ = [
    "SensorArray",
    "CoarrayStructure",
    "ula",
    "nested",
    "split_nested",
    "parse_array_spec",
    "coarray_structure",
    "redundancy_coefficient",
    "averaging_matrix",
    "averaging_groups",
]


@dataclass(frozen=True)
class SensorArray:
    """A sparse linear array on the half-wavelength integer grid.

    Parameters
    ----------
    positions : tuple of int
        Strictly increasing non-negative sensor positions. At least two
        sensors are required.
    """

    positions: tuple

    def __post_init__(self):
        pos = tuple(int(p) for p in self.positions)
        if len(pos) < 2:
            raise ValueError("an array needs at least 2 sensors")
        if any(p < 0 for p in pos):
            raise ValueError("sensor positions must be non-negative integers")
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError("sensor positions must be strictly increasing")
        object.__setattr__(self, "positions", pos)

    @property
    def size(self):
        """Number of sensors."""
        return len(self.positions)

    @property
    def aperture(self):
        """Largest pairwise position difference."""
        return self.positions[-1] - self.positions[0]

    def as_array(self):
        """Positions as an int64 ndarray."""
        return np.asarray(self.positions, dtype=np.int64)

    def is_unit_spaced(self):
        """True when the sensors form a contiguous run of integers."""
        return self.aperture == self.size - 1

    def to_json(self):
        """Serialize the geometry as a JSON list of integer positions."""
        return json.dumps(list(self.positions))

    @classmethod
    def from_json(cls, text):
        """Inverse of :meth:`to_json`."""
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("array JSON must be a list of integers")
        return cls(tuple(data))


def ula(n_sensors, start=0):
    """Uniform linear array ``{start, start+1, ..., start+n_sensors-1}``."""
    n = check_positive_int(n_sensors, "n_sensors", minimum=2)
    s = check_positive_int(start, "start", minimum=0)
    return SensorArray(tuple(range(s, s + n)))


def nested(n_inner, n_outer):
    """Two-level nested array ``{1..n_inner} U {m*(n_inner+1) : m=1..n_outer}``.

    Requires ``n_inner >= n_outer >= 1``. The resulting difference coarray is
    hole free and its contiguous half-width is ``n_outer*(n_inner+1) - 1``,
    which grows quadratically in the sensor count.

    Parameters
    ----------
    n_inner : int
        Size of the dense unit-spaced segment.
    n_outer : int
        Size of the sparse segment with spacing ``n_inner + 1``.

    Returns
    -------
    SensorArray
    """
    n1 = check_positive_int(n_inner, "n_inner")
    n2 = check_positive_int(n_outer, "n_outer")
    if n1 < n2:
        raise ValueError(f"nested arrays require n_inner >= n_outer, got ({n1}, {n2})")
    inner = tuple(range(1, n1 + 1))
    outer = tuple(m * (n1 + 1) for m in range(1, n2 + 1))
    return SensorArray(inner + outer)


def split_nested(n_sensors):
    """Nested array with ``ceil(P/2)`` inner and ``floor(P/2)`` outer sensors."""
    p = check_positive_int(n_sensors, "n_sensors", minimum=2)
    return nested(math.ceil(p / 2), p // 2)


_ARRAY_SPEC_RE = re.compile(
    r"^(?:(ula):(\d+)|(nested):(\d+),(\d+)|(custom):\[([^\]]*)\])$"
)


def parse_array_spec(spec):
    """Parse an array spec string into a :class:`SensorArray`.

    Accepted forms: ``ula:P``, ``nested:N1,N2`` and ``custom:[d1,d2,...]``.
    """
    if isinstance(spec, SensorArray):
        return spec
    match = _ARRAY_SPEC_RE.match(str(spec).strip())
    if match is None:
        raise ValueError(
            f"invalid array spec {spec!r}; expected 'ula:P', 'nested:N1,N2' "
            "or 'custom:[d1,d2,...]'"
        )
    if match.group(1):
        return ula(int(match.group(2)))
    if match.group(3):
        return nested(int(match.group(4)), int(match.group(5)))
    body = match.group(7).strip()
    if not body:
        raise ValueError("custom array spec needs at least two positions")
    return SensorArray(tuple(int(tok) for tok in body.split(",")))


@dataclass(frozen=True)
class CoarrayStructure:
    """Difference coarray of a sensor array.

    Attributes
    ----------
    difference_set : tuple of int
        Sorted distinct pairwise differences; symmetric about zero.
    weights : dict
        Maps each difference ``i`` to the number of sensor pairs ``(m, n)``
        with ``d_m - d_n = i``.
    m_ca : int
        Largest ``M`` such that ``{0, 1, ..., M}`` is contained in the
        difference set (the contiguous half-width).
    hole_free : bool
        True when the difference set equals ``{-m_ca, ..., m_ca}``.
    """

    difference_set: tuple
    weights: dict = field(compare=False)
    m_ca: int
    hole_free: bool

    def weight(self, difference):
        """Number of sensor pairs exhibiting ``difference``; 0 if absent."""
        return self.weights.get(int(difference), 0)

    @cached_property
    def weight_table(self):
        """Weights of the contiguous differences ``0..m_ca`` as an ndarray."""
        return np.asarray([self.weights[i] for i in range(self.m_ca + 1)], dtype=np.int64)


def coarray_structure(array):
    """Compute the difference coarray of ``array``.

    Parameters
    ----------
    array : SensorArray

    Returns
    -------
    CoarrayStructure
    """
    pos = array.as_array()
    diffs = (pos[:, None] - pos[None, :]).ravel()
    values, counts = np.unique(diffs, return_counts=True)
    weights = {int(v): int(c) for v, c in zip(values, counts)}
    present = set(weights)
    m_ca = 0
    while m_ca + 1 in present:
        m_ca += 1
    hole_free = int(values[-1]) == m_ca
    return CoarrayStructure(
        difference_set=tuple(int(v) for v in values),
        weights=weights,
        m_ca=m_ca,
        hole_free=hole_free,
    )


def _require_hole_free(structure):
    if not structure.hole_free:
        raise ValueError("operation requires a hole-free difference coarray")


def redundancy_coefficient(structure):
    """Sum of reciprocal weights over the contiguous differences ``0..m_ca``.

    This coefficient controls the variance of redundancy averaging: smaller
    values mean more sensor pairs contribute to each averaged lag.

    Parameters
    ----------
    structure : CoarrayStructure
        Must be hole free.

    Returns
    -------
    float
    """
    _require_hole_free(structure)
    return float(np.sum(1.0 / structure.weight_table))


def averaging_groups(structure, array):
    """Flat column-major indices of the sensor pairs for each difference.

    Returns a dict mapping every difference ``i`` in the coarray to the flat
    indices ``m + P*n`` (column-major vectorization of a P-by-P matrix) of the
    entries ``(m, n)`` with ``d_m - d_n = i``.
    """
    pos = array.as_array()
    p = len(pos)
    diffs = pos[:, None] - pos[None, :]
    groups = {}
    for i in structure.difference_set:
        rows, cols = np.nonzero(diffs == i)
        groups[int(i)] = rows + p * cols
    return groups


def averaging_matrix(structure, array):
    """Dense redundancy-averaging operator.

    Maps the column-major vectorization of a P-by-P covariance onto the
    ``2*m_ca + 1`` averaged lags. Row ``i + m_ca`` holds ``1/weight(i)`` at the
    flat index of every sensor pair with difference ``i``, so each row sums
    to one.

    Parameters
    ----------
    structure : CoarrayStructure
        Must be hole free.
    array : SensorArray
        The array that produced ``structure``.

    Returns
    -------
    ndarray of shape (2*m_ca + 1, P*P)
    """
    _require_hole_free(structure)
    p = array.size
    m = structure.m_ca
    mat = np.zeros((2 * m + 1, p * p), dtype=float)
    for i, idx in averaging_groups(structure, array).items():
        mat[i + m, idx] = 1.0 / len(idx)
    return mat
