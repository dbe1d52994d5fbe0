"""Edge localization of open-chain eigenstates (non-Hermitian skin effect)."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams
from .spectral import Spectrum, obc_spectrum

EDGE_FRACTION = 0.1
STATE_THRESHOLD = 0.6
POPULATION_THRESHOLD = 0.8


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    NONE = "none"


@dataclass(frozen=True)
class LocalizationProfile:
    site_density: np.ndarray
    left_weight: np.ndarray
    right_weight: np.ndarray
    edge_sites: int

    @property
    def per_state_edge_weight(self) -> list[tuple[float, float]]:
        return list(zip(self.left_weight.tolist(), self.right_weight.tolist()))

    @property
    def edge_weight(self) -> np.ndarray:
        """Larger of the two edge weights, per state."""
        return np.maximum(self.left_weight, self.right_weight)


def localization_profile(spectrum: Spectrum, n_sites: int | None = None,
                         edge_fraction: float = EDGE_FRACTION) -> LocalizationProfile:
    """Summed site density and per-state edge weights from right eigenvectors.

    The edge region is the first/last ``ceil(edge_fraction * n_sites)`` sites.
    """
    vectors = getattr(spectrum, "right_vectors", None)
    if vectors is None or np.size(vectors) == 0:
        raise ValueError("spectrum carries no eigenvectors")
    vectors = np.asarray(vectors)
    if n_sites is None:
        n_sites = vectors.shape[0]
    if vectors.shape[0] != n_sites:
        raise ValueError(f"eigenvectors have {vectors.shape[0]} sites, expected {n_sites}")
    density = np.abs(vectors) ** 2
    density = density / density.sum(axis=0)
    edge = math.ceil(edge_fraction * n_sites)
    return LocalizationProfile(
        site_density=density.sum(axis=1),
        left_weight=density[:edge].sum(axis=0),
        right_weight=density[-edge:].sum(axis=0),
        edge_sites=edge,
    )


@dataclass(frozen=True)
class NhseVerdict:
    present: bool
    side: Side
    localized_fraction: float
    n_left: int
    n_right: int


def verdict_from_profile(profile: LocalizationProfile,
                         state_threshold: float = STATE_THRESHOLD,
                         population_threshold: float = POPULATION_THRESHOLD) -> NhseVerdict:
    left = profile.left_weight > state_threshold
    right = profile.right_weight > state_threshold
    localized = left | right
    fraction = float(localized.mean())
    n_left, n_right = int(left.sum()), int(right.sum())
    present = fraction >= population_threshold
    if not present:
        side = Side.NONE
    else:
        side = Side.RIGHT if n_right >= n_left else Side.LEFT
    return NhseVerdict(present, side, fraction, n_left, n_right)


def nhse_verdict(params: ModelParams, n_cells: int = 50,
                 edge_fraction: float = EDGE_FRACTION,
                 state_threshold: float = STATE_THRESHOLD,
                 population_threshold: float = POPULATION_THRESHOLD) -> NhseVerdict:
    """Is a macroscopic share of open-chain eigenstates stuck to one edge?

    A state counts as localized when more than ``state_threshold`` of its
    weight sits in one edge region; the effect is present when at least
    ``population_threshold`` of all states are localized.  ``side`` is the
    edge holding most localized states.
    """
    spectrum = obc_spectrum(params, n_cells)
    profile = localization_profile(spectrum, 2 * n_cells, edge_fraction)
    return verdict_from_profile(profile, state_threshold, population_threshold)
