"""Block entropy from the eigenvalues of the reduced correlation matrix."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.linalg
from scipy.special import entr

from .correlations import (CorrelatorSequence, build_correlation_matrix,
                           correlator_sequence)
from .errors import SpectrumOutOfRange
from .spectrum import ModelParams, fermi_seas

log = logging.getLogger(__name__)

CLAMP_TOL = 1e-10
FAIL_TOL = 1e-8


@dataclass(frozen=True)
class OccupationSpectrum:
    """Eigenvalues of G_L (ascending, clamped to [0, 1]).

    ``clamp_report`` is the largest excursion outside [0, 1] seen before
    clamping.
    """

    values: np.ndarray
    clamp_report: float = 0.0

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class EntropyValue:
    S: float
    L: int
    params: ModelParams | None = None


def mode_occupations(G: np.ndarray) -> OccupationSpectrum:
    """Diagonalize the Hermitian correlation matrix.

    Eigenvalues up to ``CLAMP_TOL`` outside [0, 1] are clamped; anything past
    ``FAIL_TOL`` raises SpectrumOutOfRange.
    """
    G = np.asarray(G)
    if G.shape == (0, 0):
        return OccupationSpectrum(np.zeros(0))
    w = scipy.linalg.eigvalsh(G, check_finite=False)
    excursion = float(max(0.0, -w[0], w[-1] - 1.0))
    if excursion > FAIL_TOL:
        raise SpectrumOutOfRange(
            f"eigenvalue {w[0] if -w[0] > w[-1] - 1 else w[-1]:.3e} outside [0, 1]")
    if excursion > CLAMP_TOL:
        log.warning("correlation eigenvalue %.3e outside [0, 1], clamped", excursion)
    return OccupationSpectrum(np.clip(w, 0.0, 1.0), excursion)


def binary_entropy(x) -> np.ndarray:
    """-x ln x - (1-x) ln(1-x) elementwise, with 0 ln 0 = 0."""
    x = np.asarray(x, dtype=float)
    return entr(x) + entr(1.0 - x)


def block_entropy(occ: OccupationSpectrum | Iterable[float], L: int | None = None,
                  params: ModelParams | None = None) -> EntropyValue:
    """Sum of single-mode entropies of the occupation spectrum, in nats."""
    values = occ.values if isinstance(occ, OccupationSpectrum) else np.asarray(list(occ), dtype=float)
    terms = np.sort(binary_entropy(values))
    return EntropyValue(math.fsum(terms), len(values) if L is None else L, params)


def entropy_from_sequence(seq: CorrelatorSequence, L: int,
                          params: ModelParams | None = None) -> EntropyValue:
    G = build_correlation_matrix(L, seq)
    return block_entropy(mode_occupations(G), L, params)


def entropy_pipeline(p: ModelParams, L: int) -> EntropyValue:
    """Entropy of L contiguous sites in the infinite-chain ground state."""
    seq = correlator_sequence(fermi_seas(p), L)
    return entropy_from_sequence(seq, L, p)


def entropy_series(p: ModelParams, Ls: Iterable[int]) -> list[EntropyValue]:
    """Entropies for several block sizes, sharing one correlator sequence."""
    Ls = [int(L) for L in Ls]
    if not Ls:
        return []
    seq = correlator_sequence(fermi_seas(p), max(Ls))
    return [entropy_from_sequence(seq, L, p) for L in Ls]
