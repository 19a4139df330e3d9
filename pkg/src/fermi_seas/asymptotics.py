"""Large-L behaviour of the block entropy.

* ``fit_log_growth`` fits S_L = a ln L + b; the prefactor is expected to be
  R/3 with R the number of Fermi seas.
* On the line h*lam = 1 the two vacant intervals have equal length and the
  constant term has a closed form (``analytic_S0``), equivalently
  S_L = (2/3)(ln(L * scaling_length) + C).
* Near a transition line, S_L - S_L^c depends on L and the distance to the
  line only through x = L * |delta k| (``scaling_collapse``).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .entropy import entropy_series
from .errors import DomainError, InsufficientPoints
from .spectrum import ModelParams, characteristic_wavenumbers


@dataclass(frozen=True)
class KeatingConstants:
    I: float = 0.0221603
    gamma_E: float = float(np.euler_gamma)

    @property
    def C(self) -> float:
        return 1.0 + self.gamma_E - 6.0 * self.I * math.log(2.0)


KEATING = KeatingConstants()


@dataclass(frozen=True)
class EntropySeries:
    """Tabulated (L, S_L) at fixed parameters, L strictly increasing."""

    Ls: np.ndarray
    S: np.ndarray
    params: ModelParams | None = None

    def __post_init__(self):
        Ls = np.asarray(self.Ls, dtype=int)
        S = np.asarray(self.S, dtype=float)
        if Ls.shape != S.shape or Ls.ndim != 1:
            raise ValueError("Ls and S must be 1-d arrays of equal length")
        if np.any(np.diff(Ls) <= 0) or (Ls.size and Ls[0] < 1):
            raise ValueError("L values must be positive and strictly increasing")
        if np.any(S < 0):
            raise ValueError("entropies must be non-negative")
        object.__setattr__(self, "Ls", Ls)
        object.__setattr__(self, "S", S)

    def __len__(self):
        return len(self.Ls)

    @classmethod
    def compute(cls, p: ModelParams, Ls, with_neighbours: bool = True) -> "EntropySeries":
        """Evaluate the entropy at every L (and L+1, for parity damping)."""
        Ls = set(int(L) for L in Ls)
        if with_neighbours:
            Ls |= {L + 1 for L in Ls}
        Ls = sorted(Ls)
        values = entropy_series(p, Ls)
        return cls(np.array(Ls), np.array([v.S for v in values]), p)


def geometric_grid(L_min: int, L_max: int, n: int = 24) -> np.ndarray:
    """Up to ``n`` distinct integers spaced geometrically from L_min to L_max."""
    if not 1 <= L_min <= L_max:
        raise ValueError("need 1 <= L_min <= L_max")
    return np.unique(np.rint(np.geomspace(L_min, L_max, n)).astype(int))


@dataclass(frozen=True)
class LogFit:
    a: float
    b: float
    window: tuple
    residual: float
    residual_raw: float
    n_points: int


def _pair_average(Ls, S):
    """Average consecutive (L, L+1) entries; returns mean ln L and mean S."""
    present = {int(L): s for L, s in zip(Ls, S)}
    xs, ys = [], []
    used = set()
    for L in sorted(present):
        if L in used or L + 1 not in present:
            continue
        used |= {L, L + 1}
        xs.append(0.5 * (math.log(L) + math.log(L + 1)))
        ys.append(0.5 * (present[L] + present[L + 1]))
    return np.array(xs), np.array(ys)


def _lstsq_line(x, y):
    A = np.column_stack([x, np.ones_like(x)])
    (a, b), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (a * x + b)
    return float(a), float(b), float(np.sqrt(np.mean(resid ** 2)))


def fit_log_growth(series: EntropySeries, window: tuple | None = None,
                   min_points: int = 8) -> LogFit:
    """Least-squares fit of S = a ln L + b inside ``window`` = (L_min, L_max).

    Free-fermion entropies oscillate with the parity of L.  When the series
    contains neighbouring pairs (L, L+1), each pair is averaged before the
    fit and ``residual`` is the RMS of the averaged fit.  ``residual_raw``
    always refers to a fit of the raw points.  The default window is
    [L_max/10, L_max].
    """
    if window is None:
        hi = int(series.Ls[-1])
        window = (max(1, hi // 10), hi)
    lo, hi = window
    inside = (series.Ls >= lo) & (series.Ls <= hi)
    Ls, S = series.Ls[inside], series.S[inside]
    # pairs are anchored on their lower member, so allow L_max + 1 as partner
    partner = series.Ls == hi + 1
    x, y = _pair_average(np.concatenate([Ls, series.Ls[partner]]),
                         np.concatenate([S, series.S[partner]]))
    if len(x) < min_points:
        x, y = np.log(Ls.astype(float)), S
    if len(x) < min_points:
        raise InsufficientPoints(f"{len(x)} points in window {window}, need {min_points}")
    a, b, res = _lstsq_line(x, y)
    if len(Ls) >= 2:
        _, _, res_raw = _lstsq_line(np.log(Ls.astype(float)), S)
    else:
        res_raw = res
    return LogFit(a, b, (int(lo), int(hi)), res, res_raw, len(x))


class Branch(enum.Enum):
    """Side of the h*lam = 1 line relative to lam^{-1} = 1/sqrt(2)."""

    KLAMBDA_BELOW_KH = "klambda<kh"   # lam^{-1} in (1/sqrt 2, 1)
    KLAMBDA_ABOVE_KH = "klambda>kh"   # lam^{-1} in (0, 1/sqrt 2)


def symmetric_branch(lam: float) -> Branch:
    """Branch of ``lam`` on the h*lam = 1 line."""
    return Branch.KLAMBDA_BELOW_KH if 1.0 / lam > math.sqrt(0.5) else Branch.KLAMBDA_ABOVE_KH


def scaling_length(lam: float, branch: Branch | str | None = None) -> float:
    """Factor f with script-L = f * L on the h*lam = 1 line."""
    branch = symmetric_branch(lam) if branch is None else Branch(branch)
    if lam <= 0:
        raise DomainError("lam must be positive")
    u = lam ** -2
    if u >= 1.0:
        # includes the onset lam = 1 itself, where neither branch applies
        raise DomainError(f"lam = {lam} not in the current-carrying region")
    if branch is Branch.KLAMBDA_BELOW_KH:
        rad = 4.0 * (1.0 - u) * (2.0 * u - 1.0)
    else:
        rad = (1.0 - 2.0 * u) / (1.0 - u)
    if -1e-12 < rad < 0:
        rad = 0.0
    if rad < 0:
        raise DomainError(f"lam = {lam} lies outside branch {branch.value}")
    return math.sqrt(rad)


def analytic_S0(lam: float, branch: Branch | str | None = None,
                constants: KeatingConstants = KEATING) -> float:
    """Closed-form L-independent entropy term on the h*lam = 1 line.

    S0 = (2/3)(ln f + C) with f = ``scaling_length(lam, branch)``.  Diverges
    to -inf at lam^{-1} = 1/sqrt(2).
    """
    f = scaling_length(lam, branch)
    if f == 0.0:
        return -math.inf
    return (2.0 / 3.0) * (math.log(f) + constants.C)


class Transition(enum.Enum):
    KH_KLAMBDA = "kh-klambda"
    KH_ZERO = "kh-0"
    KLAMBDA_ZERO = "klambda-0"


def _validate_anchor(transition: Transition, anchor: float):
    if transition is Transition.KH_ZERO and anchor <= 1.0:
        raise DomainError("k_h = 0 transition is anchored at lam > 1")
    if transition is Transition.KH_KLAMBDA and not 0.0 < anchor < 1.0:
        raise DomainError("k_h = k_lambda transition is anchored at 0 < h < 1")
    if transition is Transition.KLAMBDA_ZERO and anchor <= 0.0:
        raise DomainError("k_lambda = 0 transition is anchored at h > 0")


def phase_limit(transition: Transition | str, anchor: float, side: int = 1) -> float:
    """Largest wavenumber distance from the line that stays in the adjacent phase.

    ``anchor`` is h for the k_h = k_lambda and k_lambda = 0 lines, lam for
    the k_h = 0 line.  ``side`` = +1 approaches k_h = k_lambda from
    Phase 1 (k_lambda < k_h), -1 from Phase 2.
    """
    transition = Transition(transition)
    _validate_anchor(transition, anchor)
    if transition is Transition.KH_KLAMBDA:
        k_h = math.asin(anchor)
        return k_h if side > 0 else math.pi / 2 - k_h
    if transition is Transition.KLAMBDA_ZERO:
        return math.asin(anchor) if anchor < 1.0 else math.pi / 2
    return math.acos(1.0 / anchor)


def transition_path(transition: Transition | str, anchor: float, delta: float,
                    side: int = 1) -> ModelParams:
    """Parameters at wavenumber distance ``delta`` >= 0 from a transition line."""
    transition = Transition(transition)
    if transition is Transition.KH_KLAMBDA:
        k_lam = math.asin(anchor) - side * delta
        return ModelParams(anchor, 1.0 / math.cos(k_lam))
    if transition is Transition.KLAMBDA_ZERO:
        return ModelParams(anchor, 1.0 / math.cos(delta))
    return ModelParams(math.sin(delta), anchor)


@dataclass(frozen=True)
class ScalingCurve:
    """Delta S = S_L - S_L^c sampled against x = L |delta k|."""

    transition: Transition
    anchor: float
    L: int
    x: np.ndarray
    dS: np.ndarray
    S_c: float
    params: tuple = field(default=(), repr=False)


def default_x_max(transition, anchors, Ls, side: int = 1, fraction: float = 0.1) -> float:
    """Common x range: ``fraction`` of the way to the nearest adjacent phase boundary.

    The collapse only holds while delta k is small compared with the other
    wavenumber scales, so the default stays well inside the adjacent phase.
    """
    return fraction * min(L * phase_limit(transition, a, side) for a in anchors for L in Ls)


def scaling_collapse(anchors, Ls, transition: Transition | str = Transition.KH_KLAMBDA,
                     x_max: float | None = None, n_points: int = 64,
                     side: int = 1) -> list[ScalingCurve]:
    """Entropy differences near a transition line on a shared x grid.

    One curve per (anchor, L), ordered anchor-major.  S_L^c is evaluated
    exactly on the line (lam = 1/cos k_h for the k_h = k_lambda line).
    """
    transition = Transition(transition)
    anchors = [float(a) for a in anchors]
    Ls = [int(L) for L in Ls]
    for a in anchors:
        _validate_anchor(transition, a)
    if x_max is None:
        x_max = default_x_max(transition, anchors, Ls, side)
    for a in anchors:
        for L in Ls:
            if x_max / L >= phase_limit(transition, a, side):
                raise DomainError(f"x_max = {x_max} leaves the adjacent phase at anchor {a}, L = {L}")
    xs = np.linspace(0.0, x_max, n_points)
    curves = []
    for a in anchors:
        for L in Ls:
            crit = transition_path(transition, a, 0.0, side)
            S_c = entropy_series(crit, [L])[0].S
            params = tuple(transition_path(transition, a, x / L, side) for x in xs)
            S = np.array([S_c] + [entropy_series(p, [L])[0].S for p in params[1:]])
            curves.append(ScalingCurve(transition, a, L, xs.copy(), S - S_c, S_c, params))
    return curves


def collapse_spread(curves: list[ScalingCurve]) -> float:
    """Sup over the shared x grid of the spread (max - min) across curves."""
    if len(curves) < 2:
        return 0.0
    x0 = curves[0].x
    for c in curves[1:]:
        if c.x.shape != x0.shape or not np.allclose(c.x, x0):
            raise ValueError("curves are not on a common x grid")
    dS = np.vstack([c.dS for c in curves])
    return float(np.max(dS.max(axis=0) - dS.min(axis=0)))
