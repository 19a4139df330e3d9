"""Two-point correlators g_l and the reduced correlation matrix G_L.

Convention: g_l is the Fourier coefficient of the indicator of the
*unoccupied* modes,

    g_l = (1/2pi) \\int_{Lambda_k > 0} e^{-ilk} dk,

and G_L[m, n] = g_{n-m}.  Integrating over the seas instead maps every
eigenvalue x -> 1 - x and leaves the entropy unchanged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ZeroMode
from .spectrum import FermiSeaDecomposition, ModelParams, dispersion

ZERO_MODE_TOL = 1e-12


@dataclass(frozen=True)
class CorrelatorSequence:
    """g_l for l = 0 .. len-1; negative lags follow from g_{-l} = conj(g_l)."""

    coefficients: np.ndarray
    source: str = "infinite"

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, l: int) -> complex:
        if l < 0:
            return complex(np.conj(self.coefficients[-l]))
        return complex(self.coefficients[l])

    def lags(self, lmin: int, lmax: int) -> np.ndarray:
        """Coefficients for lmin..lmax inclusive."""
        return np.array([self[l] for l in range(lmin, lmax + 1)])


def correlator_infinite(l, seas: FermiSeaDecomposition):
    """Closed-form g_l of the infinite chain; ``l`` may be an integer array."""
    l_arr = np.asarray(l)
    scalar = l_arr.ndim == 0
    l_arr = np.atleast_1d(l_arr).astype(float)
    out = np.zeros(l_arr.shape, dtype=complex)
    zero = l_arr == 0
    nz = ~zero
    lnz = l_arr[nz]
    for a, b in seas.unoccupied():
        out[zero] += b - a
        out[nz] += 1j * (np.exp(-1j * lnz * b) - np.exp(-1j * lnz * a)) / lnz
    out /= 2 * math.pi
    return complex(out[0]) if scalar else out


def correlator_sequence(seas: FermiSeaDecomposition, L: int) -> CorrelatorSequence:
    """g_0 .. g_{L-1} for the infinite chain."""
    return CorrelatorSequence(correlator_infinite(np.arange(L), seas), "infinite")


def momentum_grid(N: int, offset: float) -> np.ndarray:
    """k_n = 2pi(n + offset)/N folded into (-pi, pi]."""
    if N < 2:
        raise ValueError("N must be >= 2")
    if offset not in (0, 0.5):
        raise ValueError("offset must be 0 or 1/2")
    k = 2 * math.pi * (np.arange(N) + offset) / N
    return np.where(k > math.pi, k - 2 * math.pi, k)


def grid_occupations(N: int, p: ModelParams, offset: float) -> np.ndarray:
    """Ground-state filling (Lambda_k < 0) on the finite grid.

    Raises ZeroMode when a grid momentum has |Lambda_k| < ZERO_MODE_TOL.
    """
    k = momentum_grid(N, offset)
    e = dispersion(k, p)
    bad = np.abs(e) < ZERO_MODE_TOL
    if bad.any():
        raise ZeroMode(k[bad])
    return e < 0


def _finite_coefficients(l, N, offset, occupied):
    k = momentum_grid(N, offset)[~occupied]
    l_arr = np.atleast_1d(np.asarray(l))
    return np.exp(-1j * np.outer(l_arr, k)).sum(axis=1) / N


def correlator_finite(l, N: int, p: ModelParams, offset: float = 0.5):
    """g_l on a periodic chain of N sites: (1/N) sum over unoccupied grid modes."""
    occ = grid_occupations(N, p, offset)
    out = _finite_coefficients(l, N, offset, occ)
    return complex(out[0]) if np.ndim(l) == 0 else out


def finite_sequence(N: int, p: ModelParams, offset: float, L: int,
                    occupied: np.ndarray | None = None) -> CorrelatorSequence:
    """g_0 .. g_{L-1} on the finite grid.

    ``occupied`` overrides the plain filling of negative modes, e.g. for the
    parity-constrained ground state selected by the oracle.
    """
    if occupied is None:
        occupied = grid_occupations(N, p, offset)
    coeffs = _finite_coefficients(np.arange(L), N, offset, np.asarray(occupied, dtype=bool))
    return CorrelatorSequence(coeffs, f"finite(N={N}, offset={offset})")


def build_correlation_matrix(L: int, seq: CorrelatorSequence) -> np.ndarray:
    """Hermitian Toeplitz G_L with entry (m, n) = g_{n-m}."""
    if L < 1:
        raise ValueError("L must be >= 1")
    if len(seq) < L:
        raise ValueError(f"sequence has {len(seq)} lags, need {L}")
    row = np.asarray(seq.coefficients[:L], dtype=complex)
    col = row.conj()
    col[0] = row[0].real
    return scipy.linalg.toeplitz(col, row)


def shift_wavenumbers(seq: CorrelatorSequence, phi: float) -> CorrelatorSequence:
    """Translate every mode by ``phi``: g_l -> e^{-il phi} g_l.

    G_L transforms by conjugation with diag(1, e^{i phi}, e^{2i phi}, ...),
    so its eigenvalues are unchanged.
    """
    l = np.arange(len(seq))
    return CorrelatorSequence(np.exp(-1j * l * phi) * seq.coefficients,
                              f"{seq.source}, shifted by {phi:.12g}")
