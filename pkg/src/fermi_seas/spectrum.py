"""Single-particle dispersion of the current-carrying XX chain and its Fermi seas.

After the Jordan-Wigner transformation the chain with energy-current constraint
becomes a gas of free fermions with dispersion

    Lambda_k = (-cos k - h) (1 - lam sin k),

and the ground state fills every mode with Lambda_k < 0.  The occupied set is
a union of at most two arcs of the Brillouin zone.  Its endpoints are the
analytic zeros of the two factors, so no root finding or sampling is needed.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidParameters

SEA_TOL = 1e-10
PHASE_TOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Transverse field ``h`` and current driving field ``lam`` (both >= 0)."""

    h: float
    lam: float

    def __post_init__(self):
        for name in ("h", "lam"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise InvalidParameters(f"{name} must be finite and >= 0, got {v!r}")
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "lam", float(self.lam))


def dispersion(k, p: ModelParams):
    """Fermion energy ``(-cos k - h)(1 - lam sin k)``; ``k`` may be an array."""
    return (-np.cos(k) - p.h) * (1.0 - p.lam * np.sin(k))


def mode_current(k, p: ModelParams):
    """Energy-current eigenvalue of mode ``k``, ``(-cos k - h) sin k``."""
    return (-np.cos(k) - p.h) * np.sin(k)


@dataclass(frozen=True)
class CharacteristicWavenumbers:
    k_h: Optional[float]
    k_lambda: Optional[float]


def characteristic_wavenumbers(p: ModelParams) -> CharacteristicWavenumbers:
    """``k_h = arcsin h`` (h <= 1) and ``k_lambda = arccos(1/lam)`` (lam >= 1)."""
    k_h = math.asin(p.h) if p.h <= 1.0 else None
    k_lam = math.acos(1.0 / p.lam) if p.lam >= 1.0 else None
    return CharacteristicWavenumbers(k_h, k_lam)


@dataclass(frozen=True)
class FermiSeaDecomposition:
    """Occupied arcs of the Brillouin zone.

    ``seas`` holds disjoint intervals inside [-pi, pi] sorted by left
    endpoint.  An arc crossing the zone boundary is stored as two pieces,
    ``(a, pi)`` and ``(-pi, b)``, but counts once in ``R``.  ``degenerate``
    is set when coincident zeros produced a sub-interval shorter than
    ``SEA_TOL`` that was dropped.
    """

    seas: tuple
    R: int
    degenerate: bool = False

    @property
    def occupied_measure(self) -> float:
        return sum(b - a for a, b in self.seas)

    @property
    def is_empty(self) -> bool:
        return not self.seas

    @property
    def is_full(self) -> bool:
        return len(self.seas) == 1 and self.seas[0] == (-math.pi, math.pi)

    @property
    def fermi_points(self) -> int:
        """Number of sea edges, i.e. 2R except for the empty or full zone."""
        return 0 if self.is_empty or self.is_full else 2 * self.R

    def unoccupied(self) -> tuple:
        """Complement of the seas in [-pi, pi]."""
        out = []
        left = -math.pi
        for a, b in self.seas:
            if a > left:
                out.append((left, a))
            left = b
        if left < math.pi:
            out.append((left, math.pi))
        return tuple(out)

    def contains(self, k) -> np.ndarray:
        """Membership of wavenumbers (folded into (-pi, pi]) in an open sea."""
        k = np.asarray(k, dtype=float)
        k = np.where(k > math.pi, k - 2 * math.pi, k)
        mask = np.zeros(k.shape, dtype=bool)
        for a, b in self.seas:
            mask |= (k > a) & (k < b)
        if self.is_full:
            mask[:] = True
        return mask


def _zeros(p: ModelParams) -> list:
    z = []
    if p.h <= 1.0:
        a = math.acos(-p.h)
        z += [-a, a]
    if p.lam > 1.0:
        b = math.asin(1.0 / p.lam)
        z += [b, math.pi - b]
    elif p.lam == 1.0:
        z += [math.pi / 2, math.pi / 2]
    return z


def fermi_seas(p: ModelParams) -> FermiSeaDecomposition:
    """Occupied intervals of the ground state from the analytic zeros of Lambda_k.

    The zone is cut at the zeros ``cos k = -h`` and ``sin k = 1/lam``; each
    piece has a definite sign, read off at its midpoint.  Pieces shorter than
    ``SEA_TOL`` (tangencies, coincident zeros) are dropped and flagged.
    """
    cuts = sorted([-math.pi, math.pi] + [z for z in _zeros(p) if -math.pi <= z <= math.pi])
    degenerate = False
    pieces = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a < SEA_TOL:
            degenerate = True
            continue
        pieces.append((a, b, float(dispersion(0.5 * (a + b), p)) < 0.0))

    seas = []
    for a, b, occ in pieces:
        if not occ:
            continue
        if seas and a - seas[-1][1] < SEA_TOL:
            seas[-1] = (seas[-1][0], b)
        else:
            seas.append((a, b))

    R = len(seas)
    if R > 1 and seas[0][0] == -math.pi and seas[-1][1] == math.pi:
        R -= 1
    return FermiSeaDecomposition(tuple(seas), R, degenerate)


def current_density(p: ModelParams, seas: FermiSeaDecomposition | None = None) -> float:
    """Ground-state energy-current density, integrated in closed form over the seas."""
    seas = fermi_seas(p) if seas is None else seas

    def prim(k):
        return 0.5 * math.cos(k) ** 2 + p.h * math.cos(k)

    return sum(prim(b) - prim(a) for a, b in seas.seas) / (2 * math.pi)


def magnetization(p: ModelParams, seas: FermiSeaDecomposition | None = None) -> float:
    """Transverse magnetization per site <s^z> = filling - 1/2."""
    seas = fermi_seas(p) if seas is None else seas
    return seas.occupied_measure / (2 * math.pi) - 0.5


class Phase(enum.Enum):
    NO_CURRENT_CRITICAL = "no-current-critical"
    NO_CURRENT_POLARIZED = "no-current-polarized"
    PHASE1 = "phase1"
    PHASE2 = "phase2"
    PHASE3 = "phase3"
    BOUNDARY_HIGH_SYMMETRY = "boundary-high-symmetry"
    BOUNDARY_OTHER = "boundary-other"


@dataclass(frozen=True)
class PhaseLabel:
    phase: Phase
    current: float
    magnetization: float

    @property
    def name(self) -> str:
        return self.phase.value


def classify_phase(p: ModelParams) -> PhaseLabel:
    """Locate ``p`` in the (h, j^E) phase diagram.

    Phase 1 and 2 are the two current-carrying phases at h < 1, separated by
    the high-symmetry line k_h = k_lambda (Phase 1 has k_lambda < k_h).
    Phase 3 is the current-carrying phase at h >= 1.  The h = 0 edge of the
    current-carrying region is reported as ``BOUNDARY_OTHER``.
    """
    seas = fermi_seas(p)
    jE = current_density(p, seas)
    mz = magnetization(p, seas)
    if p.lam <= 1.0:
        phase = Phase.NO_CURRENT_CRITICAL if p.h < 1.0 else Phase.NO_CURRENT_POLARIZED
    elif p.h >= 1.0:
        phase = Phase.PHASE3
    else:
        kw = characteristic_wavenumbers(p)
        if abs(kw.k_h - kw.k_lambda) <= PHASE_TOL:
            phase = Phase.BOUNDARY_HIGH_SYMMETRY
        elif kw.k_h <= PHASE_TOL:
            phase = Phase.BOUNDARY_OTHER
        elif kw.k_lambda < kw.k_h:
            phase = Phase.PHASE1
        else:
            phase = Phase.PHASE2
    return PhaseLabel(phase, jE, mz)
