"""Closed-form performance bounds for coarray ESPRIT.

Everything here evaluates formulas; nothing simulates. The chain of results:
a Bernstein-type tail bound on the spectral norm of the averaged covariance
error, a perturbation bound translating that error into matching distance
through the signal/noise eigenvalue gap, a four-term sample-complexity bound,
and array-specific specializations (unit-spaced and nested) obtained through
Vandermonde singular-value floors.

The tail bound carries one unfixed universal constant ``c`` inherited from
the underlying quadratic-form concentration inequality; it is exposed as a
knob (default 1.0) so calibration against simulation is possible without
touching the formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_positive_int, check_real
from .errors import EigenGapError
from .geometry import redundancy_coefficient
from .metrics import min_separation
from .signal_model import steering_matrix, true_covariance

__all__ = [
    "DEFAULT_C2",
    "BoundConstants",
    "subspace_constants",
    "coarray_sigma_s",
    "eigen_gap",
    "QFactors",
    "q_factor",
    "tail_bound",
    "SnapshotRequirement",
    "snapshot_requirement",
    "SpecializedBound",
    "specialized_bound",
    "vandermonde_floor",
    "BoundReport",
    "build_bound_report",
]

# Sub-Gaussian norm of a standard complex Gaussian quadratic form component.
K_SUBGAUSSIAN = 2.0 / math.sqrt(3.0)
# 1/(4*sqrt(2)*K^2) with K as above.
DEFAULT_C2 = 3.0 / (16.0 * math.sqrt(2.0))


@dataclass(frozen=True)
class BoundConstants:
    """Tunable constants entering the tail and sample-complexity bounds.

    Parameters
    ----------
    c : float
        Universal constant of the quadratic-form concentration inequality.
        Unknown in closed form; 1.0 by default.
    c2 : float
        Variance-regime coefficient, ``1/(4*sqrt(2)*K**2)`` by default.
    gamma : float
        Separation slack (> 1) used by the Vandermonde floors and the
        specialized bounds.
    """

    c: float = 1.0
    c2: float = DEFAULT_C2
    gamma: float = 2.0

    def __post_init__(self):
        check_real(self.c, "c", minimum=0.0, strict=True)
        check_real(self.c2, "c2", minimum=0.0, strict=True)
        check_real(self.gamma, "gamma", minimum=1.0, strict=True)

    @property
    def k_subgaussian(self):
        return K_SUBGAUSSIAN

    @property
    def c1(self):
        """Exponent coefficient ``c / (2*sqrt(2)*K**2)``."""
        return self.c / (2.0 * math.sqrt(2.0) * K_SUBGAUSSIAN**2)

    @property
    def c3(self):
        """Sample-complexity coefficient, the reciprocal of ``c1``."""
        return 1.0 / self.c1

    @property
    def separation_factor(self):
        """``gamma / (gamma - 1)``, the unit-spaced conditioning factor."""
        return self.gamma / (self.gamma - 1.0)

    @property
    def nested_separation_factor(self):
        """``5*gamma / (gamma - 1)``, the nested conditioning factor."""
        return 5.0 * self.gamma / (self.gamma - 1.0)


def subspace_constants(n_sources):
    """Perturbation constants ``(C_S, C_S')`` for an S-source subspace.

    ``C_S = 2**(-S) / (4*sqrt(2))`` caps the tolerable covariance error
    relative to the eigen gap; ``C_S' = 14*pi*sqrt(2) * S**1.5 * 4**S``
    amplifies the error into a matching-distance bound. Both degrade
    exponentially with the source count.
    """
    s = check_positive_int(n_sources, "n_sources")
    c_s = 2.0 ** (-s) / (4.0 * math.sqrt(2.0))
    c_s_prime = 14.0 * math.pi * math.sqrt(2.0) * s**1.5 * 4.0**s
    return c_s, c_s_prime


def _coarray_steering(scene, structure):
    return steering_matrix(np.arange(structure.m_ca + 1), scene.omegas)


def coarray_sigma_s(scene, structure):
    """Smallest singular value of the coarray steering matrix."""
    a = _coarray_steering(scene, structure)
    if scene.n_sources > a.shape[0]:
        raise ValueError(
            f"{scene.n_sources} sources exceed the coarray dimension {a.shape[0]}"
        )
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def eigen_gap(scene, structure):
    """Signal/noise eigenvalue gap ``p_min * sigma_S(A)**2 - noise_power``.

    Positive gaps certify that the top eigenspace of the exact coarray
    covariance is the signal subspace; the value may be negative, in which
    case the downstream bounds are undefined.
    """
    return scene.p_min * coarray_sigma_s(scene, structure) ** 2 - scene.noise_power


@dataclass(frozen=True)
class QFactors:
    """Error-amplification factors of the perturbation bound."""

    q: float
    q1: float
    l0: float


def q_factor(scene, array, structure, constants=None):
    """Matching-distance amplification factor and derived quantities.

    ``q = C_S' * sqrt(m_ca + 1) / (beta * sigma_S)`` converts covariance
    error into matching distance; ``q1 = q * norm(R_y)`` and
    ``l0 = norm(R_y) * sqrt(redundancy) / (C_S * beta)`` feed the
    sample-complexity bound.

    Raises
    ------
    EigenGapError
        If the eigen gap is not positive.
    """
    del constants  # reserved for symmetry with the other bound evaluators
    beta = eigen_gap(scene, structure)
    if beta <= 0:
        raise EigenGapError(
            f"eigen gap must be positive, got {beta:.6g}; the perturbation "
            "bound is undefined"
        )
    sigma_s = coarray_sigma_s(scene, structure)
    c_s, c_s_prime = subspace_constants(scene.n_sources)
    r_norm = float(np.max(np.abs(np.linalg.eigvalsh(true_covariance(array, scene)))))
    delta_s = redundancy_coefficient(structure)
    q = c_s_prime * math.sqrt(structure.m_ca + 1) / (beta * sigma_s)
    q1 = q * r_norm
    l0 = r_norm * math.sqrt(delta_s) / (c_s * beta)
    return QFactors(q=q, q1=q1, l0=l0)


def tail_bound(epsilon, n_snapshots, scene, array, structure, constants=None):
    """Probability bound on the averaged covariance error exceeding ``epsilon``.

    Evaluates ``8 * m_ca * exp(-c1 * L * min(c2*eps**2 / (r**2 * D),
    eps / (r * sqrt(D))))`` where ``r`` is the spectral norm of the exact
    sensor covariance and ``D`` the redundancy coefficient, clipped to 1.
    """
    cst = constants or BoundConstants()
    eps = check_real(epsilon, "epsilon", minimum=0.0)
    length = check_positive_int(n_snapshots, "n_snapshots")
    r_norm = float(np.max(np.abs(np.linalg.eigvalsh(true_covariance(array, scene)))))
    delta_s = redundancy_coefficient(structure)
    variance_arg = cst.c2 * eps**2 / (r_norm**2 * delta_s)
    tail_arg = eps / (r_norm * math.sqrt(delta_s))
    exponent = cst.c1 * length * min(variance_arg, tail_arg)
    return min(1.0, 8.0 * structure.m_ca * math.exp(-exponent))


@dataclass(frozen=True)
class SnapshotRequirement:
    """Sample-complexity bound with its constituent terms.

    ``value`` is ``c3 * ln(8*m_ca / delta) * max(terms)``; ``active_term``
    names which of the four terms attains the max; ``cor1_regime`` reports
    whether ``epsilon`` is small enough for the variance term to provably
    dominate (in which case the bound collapses to its first term).
    """

    value: float
    active_term: str
    terms: dict = field(compare=False)
    cor1_regime: bool
    cor1_epsilon_cap: float


def snapshot_requirement(epsilon, delta, scene, array, structure, constants=None):
    """Snapshots sufficient for matching distance ``<= epsilon`` w.p. ``1 - delta``.

    Parameters
    ----------
    epsilon : float
        Target matching distance, > 0.
    delta : float
        Failure probability in (0, 1).

    Returns
    -------
    SnapshotRequirement
    """
    cst = constants or BoundConstants()
    eps = check_real(epsilon, "epsilon", minimum=0.0, strict=True)
    dlt = check_real(delta, "delta", minimum=0.0, strict=True)
    if dlt >= 1.0:
        raise ValueError(f"delta must be in (0, 1), got {dlt}")
    factors = q_factor(scene, array, structure, cst)
    delta_s = redundancy_coefficient(structure)
    terms = {
        "variance": factors.q1**2 * delta_s / (cst.c2 * eps**2),
        "tail": factors.q1 * math.sqrt(delta_s) / eps,
        "gap_squared": factors.l0**2 / cst.c2,
        "gap": factors.l0,
    }
    active = max(terms, key=terms.get)
    log_term = math.log(8.0 * structure.m_ca / dlt)
    beta = eigen_gap(scene, structure)
    c_s, _ = subspace_constants(scene.n_sources)
    cap = factors.q * min(
        c_s * beta,
        scene.p_min * array.size * math.sqrt(delta_s) / cst.c2,
    )
    return SnapshotRequirement(
        value=cst.c3 * log_term * terms[active],
        active_term=active,
        terms=terms,
        cor1_regime=eps <= cap,
        cor1_epsilon_cap=cap,
    )


@dataclass(frozen=True)
class SpecializedBound:
    """Array-family sample-complexity bound with precondition flags."""

    regime: str
    value: float
    constant: float
    epsilon_cap: float
    preconditions: dict = field(compare=False)

    @property
    def preconditions_met(self):
        return all(self.preconditions.values())


def specialized_bound(regime, scene, n_sensors, epsilon, delta, constants=None):
    """Closed-form snapshot requirement for a named array family.

    For ``regime="ula"`` (unit-spaced, P sensors) the bound is
    ``(C_u / eps**2) * (p_max/p_min)**2 * ln(8*P/delta)**2`` with
    ``C_u = 8 * C_S'**2 * C'**3 * (c3/c2) * (S + noise/p_max)**2`` and
    ``C' = gamma/(gamma-1)``. For ``regime="nested"`` (half/half split) it is
    ``(C_n / eps**2) * (p_max/p_min)**2 * ln(8*P**2/delta)`` with
    ``C_n = 4 * C_S'**2 * C_n'**3 * (c3/c2) * (S + noise/p_max)**2`` and
    ``C_n' = 5*gamma/(gamma-1)``.

    The returned flags report whether the scene satisfies the regime's
    separation, SNR and epsilon-range preconditions; the value is computed
    either way since the formula is defined for any inputs.
    """
    cst = constants or BoundConstants()
    eps = check_real(epsilon, "epsilon", minimum=0.0, strict=True)
    dlt = check_real(delta, "delta", minimum=0.0, strict=True)
    if dlt >= 1.0:
        raise ValueError(f"delta must be in (0, 1), got {dlt}")
    p = check_positive_int(n_sensors, "n_sensors", minimum=2)
    s = scene.n_sources
    c_s, c_s_prime = subspace_constants(s)
    sep = min_separation(scene.omegas) if s >= 2 else None
    power_term = (s + scene.noise_power / scene.p_max) ** 2
    snr = math.inf if scene.noise_power == 0 else scene.p_min / scene.noise_power
    if regime == "ula":
        factor = cst.separation_factor
        constant = 8.0 * c_s_prime**2 * factor**3 * (cst.c3 / cst.c2) * power_term
        value = (constant / eps**2) * (scene.p_max / scene.p_min) ** 2 \
            * math.log(8.0 * p / dlt) ** 2
        eps_cap = c_s * c_s_prime
        preconditions = {
            "separation": sep is None or sep >= cst.gamma / p,
            "snr": snr > 2.0 * factor / p,
            "epsilon": 0.0 < eps <= eps_cap,
            "sensor_count": p >= 3,
        }
    elif regime == "nested":
        factor = cst.nested_separation_factor
        constant = 4.0 * c_s_prime**2 * factor**3 * (cst.c3 / cst.c2) * power_term
        value = (constant / eps**2) * (scene.p_max / scene.p_min) ** 2 \
            * math.log(8.0 * p**2 / dlt)
        eps_cap = math.sqrt(0.2) * c_s * c_s_prime
        preconditions = {
            "separation": sep is None or sep >= 5.0 * cst.gamma / p**2,
            "snr": snr > 2.0 * factor / p**2,
            "epsilon": 0.0 < eps <= eps_cap,
            "sensor_count": p >= 3,
        }
    else:
        raise ValueError(f"unknown regime {regime!r}; expected 'ula' or 'nested'")
    return SpecializedBound(
        regime=regime,
        value=value,
        constant=constant,
        epsilon_cap=eps_cap,
        preconditions=preconditions,
    )


def vandermonde_floor(n_rows, omegas, gamma):
    """Lower bound on the squared smallest singular value of a Vandermonde block.

    For ``n_rows`` consecutive integer powers of nodes ``exp(2j*pi*omega)``
    whose pairwise torus separation is at least ``gamma / n_rows`` with
    ``gamma > 1``, the squared smallest singular value is at least
    ``n_rows * (gamma - 1) / gamma``. Orthogonal (uniformly spread) nodes
    achieve ``n_rows`` exactly, which the bound approaches as ``gamma`` grows.
    """
    k = check_positive_int(n_rows, "n_rows")
    g = check_real(gamma, "gamma", minimum=1.0, strict=True)
    om = np.atleast_1d(np.asarray(omegas, dtype=float))
    if om.size > k:
        raise ValueError(f"{om.size} nodes exceed the row count {k}")
    if om.size >= 2 and min_separation(om) < g / k:
        raise ValueError(
            f"minimum separation {min_separation(om):.6g} is below gamma/n_rows "
            f"= {g / k:.6g}"
        )
    return k * (g - 1.0) / g


@dataclass(frozen=True)
class BoundReport:
    """All bound quantities for one scene/array pair, JSON-serializable."""

    beta: float
    sigma_s_coarray: float
    delta_s: float
    m_ca: int
    c_s: float
    c_s_prime: float
    epsilon: float
    delta_prob: float
    eigen_gap_ok: bool
    q: float | None = None
    q1: float | None = None
    l0: float | None = None
    l_required: float | None = None
    active_term: str | None = None
    cor1_regime: bool | None = None

    def to_json_dict(self):
        return {
            "beta": self.beta,
            "sigma_s_coarray": self.sigma_s_coarray,
            "delta_s": self.delta_s,
            "m_ca": self.m_ca,
            "c_s": self.c_s,
            "c_s_prime": self.c_s_prime,
            "epsilon": self.epsilon,
            "delta_prob": self.delta_prob,
            "eigen_gap_ok": self.eigen_gap_ok,
            "q": self.q,
            "q1": self.q1,
            "l0": self.l0,
            "l_required": self.l_required,
            "active_term": self.active_term,
            "cor1_regime": self.cor1_regime,
        }


def build_bound_report(scene, array, structure, epsilon=0.05, delta=0.05,
                       constants=None):
    """Evaluate every bound quantity for a scene on an array.

    A non-positive eigen gap yields a diagnostic report (``eigen_gap_ok``
    false, amplification fields absent) rather than an exception, so callers
    can always render something.
    """
    cst = constants or BoundConstants()
    beta = eigen_gap(scene, structure)
    sigma_s = coarray_sigma_s(scene, structure)
    c_s, c_s_prime = subspace_constants(scene.n_sources)
    base = {
        "beta": beta,
        "sigma_s_coarray": sigma_s,
        "delta_s": redundancy_coefficient(structure),
        "m_ca": structure.m_ca,
        "c_s": c_s,
        "c_s_prime": c_s_prime,
        "epsilon": float(epsilon),
        "delta_prob": float(delta),
    }
    if beta <= 0:
        return BoundReport(eigen_gap_ok=False, **base)
    factors = q_factor(scene, array, structure, cst)
    req = snapshot_requirement(epsilon, delta, scene, array, structure, cst)
    return BoundReport(
        eigen_gap_ok=True,
        q=factors.q,
        q1=factors.q1,
        l0=factors.l0,
        l_required=req.value,
        active_term=req.active_term,
        cor1_regime=req.cor1_regime,
        **base,
    )
