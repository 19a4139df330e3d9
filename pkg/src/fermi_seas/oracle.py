"""Exact-diagonalization cross-check on small periodic chains.

The spin Hamiltonian H^E = H^XX - lam J^E is built term by term in the full
2^N basis, its ground state is found by dense diagonalization, and the
entropy of a block is read off the reduced density matrix.  Nothing here uses
the free-fermion solution except ``compare_methods``, which sets the two
routes side by side.

H^E conserves the total s^z, so each magnetization sector is diagonalized
separately (still densely).  Operators are stored as sparse matrices; at
N = 14 a dense complex 2^N x 2^N array would need 4 GB.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg
import scipy.sparse as sparse
from scipy.special import entr

from .correlations import finite_sequence, momentum_grid
from .entropy import entropy_from_sequence
from .errors import DegenerateGroundState, FermiSeasError
from .spectrum import ModelParams, dispersion

N_MAX = 14
DEGENERACY_TOL = 1e-10
COMMUTATOR_TOL = 1e-10
ENERGY_MATCH_TOL = 1e-9
PERTURBATION = 1e-6

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class Normalization(enum.Enum):
    PAULI = "pauli"
    SPIN_HALF = "spin-half"

    @property
    def factor(self) -> float:
        return 1.0 if self is Normalization.PAULI else 0.5


@dataclass(frozen=True)
class DenseOperator:
    """Operator on the 2^N spin basis (site 1 is the most significant qubit).

    The matrix is held in CSR form; ``toarray`` gives the dense 2^N x 2^N
    matrix.
    """

    matrix: sparse.csr_matrix
    N: int
    hermitian: bool = True

    @property
    def dim(self) -> int:
        return 2 ** self.N

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def __mul__(self, c: float) -> "DenseOperator":
        return DenseOperator((c * self.matrix).tocsr(), self.N, self.hermitian)

    __rmul__ = __mul__


def site_operator(N: int, factors) -> sparse.csr_matrix:
    """Product of single-site matrices; ``factors`` is a list of (site, matrix).

    Sites are 0-based and taken modulo N.  Factors that land on the same site
    (only possible for N = 2, where sites l-1 and l+1 coincide) are combined
    with the symmetrized product (AB + BA)/2 so that Hermitian sums of terms
    stay Hermitian.
    """
    local = {}
    for site, m in factors:
        site %= N
        local[site] = 0.5 * (local[site] @ m + m @ local[site]) if site in local else m
    mats = [sparse.csr_matrix(local.get(i, np.eye(2, dtype=complex))) for i in range(N)]
    return reduce(lambda a, b: sparse.kron(a, b, format="csr"), mats)


def _norm(m) -> float:
    return float(abs(m).max()) if m.nnz else 0.0


def build_hamiltonians(N: int, p: ModelParams,
                       normalization: Normalization | str = Normalization.SPIN_HALF):
    """H^XX, J^E and H^E = H^XX - lam J^E on a periodic chain of N sites.

    With spin-half normalization (s = sigma/2) the single-particle spectrum is
    exactly (-cos k - h)(1 - lam sin k).  With Pauli matrices the chain at
    (h, lam) equals 4x the spin-half chain at (h/2, 2 lam); see
    ``fermion_params``.
    """
    if not 2 <= N <= N_MAX:
        raise ValueError(f"N must be in [2, {N_MAX}]")
    f = Normalization(normalization).factor
    sx, sy, sz = (f * _PAULI[a] for a in "xyz")
    h = p.h

    hxx = sparse.csr_matrix((2 ** N, 2 ** N), dtype=complex)
    je = sparse.csr_matrix((2 ** N, 2 ** N), dtype=complex)
    for l in range(N):
        hxx = hxx - site_operator(N, [(l, sx), (l + 1, sx)]) \
                  - site_operator(N, [(l, sy), (l + 1, sy)]) \
                  - h * site_operator(N, [(l, sz)])
        je = je + site_operator(N, [(l, sz), (l - 1, sy), (l + 1, sx)]) \
                - site_operator(N, [(l, sz), (l - 1, sx), (l + 1, sy)]) \
                + h * (site_operator(N, [(l, sx), (l + 1, sy)])
                       - site_operator(N, [(l, sy), (l + 1, sx)]))
    he = hxx - p.lam * je

    comm = _norm(hxx @ je - je @ hxx)
    if comm > COMMUTATOR_TOL:
        raise FermiSeasError(f"[H^XX, J^E] = {comm:.3e} != 0; operator construction is wrong")
    return (DenseOperator(hxx.tocsr(), N), DenseOperator(je.tocsr(), N),
            DenseOperator(he.tocsr(), N))


def fermion_params(p: ModelParams, normalization: Normalization | str):
    """Free-fermion parameters and energy scale equivalent to the spin chain."""
    if Normalization(normalization) is Normalization.PAULI:
        return ModelParams(p.h / 2, 2 * p.lam), 4.0
    return p, 1.0


def _up_counts(N: int) -> np.ndarray:
    # basis index bit = 0 means spin up (s^z = +1/2)
    idx = np.arange(2 ** N)
    ones = np.zeros(2 ** N, dtype=int)
    for b in range(N):
        ones += (idx >> b) & 1
    return N - ones


@dataclass(frozen=True)
class GroundState:
    vector: np.ndarray
    energy: float
    gap: float
    n_up: int
    N: int

    @property
    def degenerate(self) -> bool:
        return self.gap < DEGENERACY_TOL

    @property
    def parity(self) -> int:
        """Fermion-number parity (-1)^(number of up spins)."""
        return -1 if self.n_up % 2 else 1


def ground_state(H: DenseOperator, strict: bool = True) -> GroundState:
    """Lowest eigenvector of H with the gap to the next level.

    Raises DegenerateGroundState when the gap is below ``DEGENERACY_TOL``
    unless ``strict`` is False, in which case the flag is only reported.
    """
    N = H.N
    counts = _up_counts(N)
    m = H.matrix.tocoo()
    if np.any(counts[m.row] != counts[m.col]):
        raise FermiSeasError("operator does not conserve total s^z")
    csr = H.matrix.tocsr()
    lows = []   # (energy, n_up, vector-in-sector, indices)
    for n_up in range(N + 1):
        idx = np.flatnonzero(counts == n_up)
        block = csr[idx][:, idx].toarray()
        w, v = scipy.linalg.eigh(block)
        for j in range(min(2, len(w))):
            lows.append((w[j], n_up, v[:, j], idx))
    lows.sort(key=lambda t: t[0])
    e0, n_up, vec, idx = lows[0]
    gap = lows[1][0] - e0 if len(lows) > 1 else math.inf
    psi = np.zeros(2 ** N, dtype=complex)
    psi[idx] = vec
    gs = GroundState(psi, float(e0), float(gap), int(n_up), N)
    if strict and gs.degenerate:
        raise DegenerateGroundState(gs.gap)
    return gs


def expectation(op: DenseOperator, state: np.ndarray) -> float:
    return float(np.real(np.vdot(state, op.matrix @ state)))


def reduced_density_matrix(state: np.ndarray, N: int, L: int, start: int = 0) -> np.ndarray:
    """rho of sites start .. start+L-1 (0-based, periodic) after tracing out the rest."""
    if not 1 <= L < N:
        raise ValueError("need 1 <= L < N")
    block = [(start + j) % N for j in range(L)]
    rest = [s for s in range(N) if s not in block]
    psi = np.transpose(state.reshape((2,) * N), block + rest).reshape(2 ** L, -1)
    return psi @ psi.conj().T


def reduce_and_entropy(state: np.ndarray, N: int, L: int, start: int = 0) -> float:
    """Von Neumann entropy -tr(rho ln rho) of an L-site block."""
    rho = reduced_density_matrix(state, N, L, start)
    w = np.clip(scipy.linalg.eigvalsh(rho), 0.0, 1.0)
    return float(math.fsum(np.sort(entr(w))))


@dataclass(frozen=True)
class SectorMatch:
    """Free-fermion filling reproducing the ED ground state."""

    offset: float
    occupied: np.ndarray
    energy: float
    parity: int
    constrained: bool


def sector_filling(N: int, p: ModelParams, offset: float):
    """Lowest filling on the grid consistent with its boundary condition.

    The periodic grid (offset 0) carries an odd number of fermions, the
    antiperiodic one (offset 1/2) an even number.  If filling all negative
    modes gives the wrong parity, the mode closest to zero energy is flipped.
    Returns (occupied mask, energy, constrained flag); energies include the
    constant h N / 2 of the spin Hamiltonian.
    """
    e = dispersion(momentum_grid(N, offset), p)
    occ = e < 0
    want_odd = offset == 0
    constrained = bool(occ.sum() % 2) != want_odd
    if constrained:
        j = int(np.argmin(np.abs(e)))
        occ = occ.copy()
        occ[j] = not occ[j]
    return occ, float(e[occ].sum() + p.h * N / 2), constrained


def match_sector(gs: GroundState, p: ModelParams,
                 normalization: Normalization | str = Normalization.SPIN_HALF) -> SectorMatch:
    """Pick the momentum grid whose filling has the ED parity and energy."""
    fp, scale = fermion_params(p, normalization)
    candidates = []
    for offset in (0.0, 0.5):
        occ, energy, constrained = sector_filling(gs.N, fp, offset)
        parity = -1 if occ.sum() % 2 else 1
        candidates.append((offset, energy, parity))
        if parity == gs.parity and abs(scale * energy - gs.energy) <= ENERGY_MATCH_TOL * max(1.0, abs(gs.energy)):
            return SectorMatch(offset, occ, scale * energy, parity, constrained)
    raise FermiSeasError(
        f"no momentum grid reproduces ED energy {gs.energy:.12g} "
        f"(parity {gs.parity}); candidates {candidates}")


@dataclass(frozen=True)
class OracleRow:
    N: int
    h: float
    lam: float
    L: int
    S_ed: float
    S_corr: float
    offset: float

    @property
    def diff(self) -> float:
        return abs(self.S_ed - self.S_corr)


def compare_methods(N: int, p: ModelParams, Ls=None,
                    normalization: Normalization | str = Normalization.SPIN_HALF,
                    perturb: bool = True) -> list[OracleRow]:
    """ED entropy versus the correlation-matrix entropy on the matched grid.

    A degenerate ED ground state is retried once with h increased by
    ``PERTURBATION`` when ``perturb`` is set; otherwise it raises.
    """
    Ls = list(range(1, N // 2 + 1)) if Ls is None else [int(L) for L in Ls]
    try:
        gs = ground_state(build_hamiltonians(N, p, normalization)[2])
    except DegenerateGroundState:
        if not perturb:
            raise
        p = ModelParams(p.h + PERTURBATION, p.lam)
        gs = ground_state(build_hamiltonians(N, p, normalization)[2])
    match = match_sector(gs, p, normalization)
    fp, _ = fermion_params(p, normalization)
    seq = finite_sequence(N, fp, match.offset, max(Ls), occupied=match.occupied)
    return [OracleRow(N, p.h, p.lam, L, reduce_and_entropy(gs.vector, N, L),
                      entropy_from_sequence(seq, L).S, match.offset) for L in Ls]
