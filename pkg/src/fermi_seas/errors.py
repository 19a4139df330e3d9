"""Exception types raised across the package."""


class FermiSeasError(Exception):
    """Base class for all package errors."""


class InvalidParameters(FermiSeasError, ValueError):
    """Model parameters outside the supported domain (negative h or lambda)."""


class ZeroMode(FermiSeasError):
    """A finite-chain momentum sits on a Fermi point (|Lambda_k| below tolerance)."""

    def __init__(self, momenta):
        self.momenta = tuple(momenta)
        super().__init__(f"zero-energy modes at k = {', '.join(f'{k:.12g}' for k in self.momenta)}")


class SpectrumOutOfRange(FermiSeasError):
    """Correlation-matrix eigenvalue outside [0, 1] beyond roundoff."""


class DomainError(FermiSeasError, ValueError):
    """Closed-form expression evaluated outside its branch."""


class InsufficientPoints(FermiSeasError):
    """Too few points in the fit window."""


class DegenerateGroundState(FermiSeasError):
    """Exact diagonalization found a (near-)degenerate ground level."""

    def __init__(self, gap):
        self.gap = gap
        super().__init__(f"ground state degenerate: gap = {gap:.3e}")
