"""Exception types shared across the library."""


class FlatQedError(Exception):
    """Base class for all library-specific errors."""


class ConfigError(FlatQedError):
    """Invalid user-supplied configuration (CLI or JSON specs)."""


class UnsupportedLattice(FlatQedError):
    """Operation not defined for the given lattice model."""


class PoleProximity(FlatQedError):
    """Resolvent evaluated within the guard band of a bath eigenvalue."""


class NoFlatBand(FlatQedError):
    """No eigenvalues found inside the requested flat-band energy window."""


class NoRootInGap(FlatQedError):
    """Pole equation has no sign change inside the spectral gap."""


class InsufficientData(FlatQedError):
    """Too few usable points for a least-squares localization fit."""


class SingularF(FlatQedError):
    """f(k) vanishes on the integration grid (band-touching overlap)."""
