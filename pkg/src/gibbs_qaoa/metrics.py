"""Sampling-quality metrics over measurement distributions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ising import GroundSet


def ground_state_probability(dist: np.ndarray, gs: GroundSet) -> float:
    """Total probability mass on the degenerate minima."""
    dist = np.asarray(dist)
    return float(sum(dist[s] for s in gs.states))


def orbit_probabilities(dist: np.ndarray, gs: GroundSet) -> tuple[float, ...]:
    """Per-orbit sums, in the ground set's orbit order.

    Requires flip orbits, i.e. an instance with no longitudinal fields.
    """
    if gs.orbits is None:
        raise ValueError("orbits are undefined for instances with longitudinal fields")
    dist = np.asarray(dist)
    return tuple(float(dist[a] + dist[b]) for (a, b) in gs.orbits)


def fairness_gap(orbit_probs) -> float:
    """Spread of the orbit probabilities: max - min."""
    return float(max(orbit_probs) - min(orbit_probs))


def total_variation_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the l1 distance between two distributions."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"distribution shapes differ: {a.shape} vs {b.shape}")
    return float(0.5 * np.abs(a - b).sum())


@dataclass(frozen=True)
class FairnessReport:
    """Ground-manifold summary of one measurement distribution."""

    p_gs: float
    orbit_probs: tuple[float, ...]
    fairness_gap: float
    tvd: float | None  # to a reference distribution, when one was given

    @property
    def max_orbit_deviation(self) -> float:
        """Largest |P_i - P_GS / m| over the m orbits."""
        m = len(self.orbit_probs)
        share = self.p_gs / m
        return max(abs(p - share) for p in self.orbit_probs)


def fairness_report(
    dist: np.ndarray, gs: GroundSet, reference: np.ndarray | None = None
) -> FairnessReport:
    orbit_probs = orbit_probabilities(dist, gs)
    return FairnessReport(
        p_gs=ground_state_probability(dist, gs),
        orbit_probs=orbit_probs,
        fairness_gap=fairness_gap(orbit_probs),
        tvd=None if reference is None else total_variation_distance(dist, reference),
    )
