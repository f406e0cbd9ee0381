"""Exception types raised by the package.

Everything derives from ChshError so callers can catch the whole family at
once; the CLI maps ConfigError to exit code 2 and I/O problems to 3.
"""


class ChshError(Exception):
    """Base class for all package-specific errors."""


class NotHermitian(ChshError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class NotSymmetric(ChshError):
    """A real matrix required to be symmetric is not, beyond tolerance."""


class BadWeights(ChshError):
    """Mixture weights are empty, negative, or do not sum to one."""


class BadRank(ChshError):
    """Requested mixture rank is outside 1..4."""


class DegenerateBob(ChshError):
    """Bob's directions are parallel or antiparallel, so the midframe
    decomposition has an undefined axis."""


class NoBranch(ChshError):
    """No rotation-angle branch reproduces the measured cosine within
    tolerance."""


class BadIndex(ChshError):
    """A CHSH form index (or vertex index) is outside its valid range."""


class NonRealCorrelation(ChshError):
    """A correlation-tensor entry came out with a non-negligible imaginary
    part, which cannot happen for a valid density matrix."""


class SameIndex(ChshError):
    """A pair statistic was requested for mu == nu."""


class BadInterval(ChshError):
    """A rotation angle lies outside its admissible interval, or the derived
    cosine falls outside the spherical-triangle box (an unphysical tuple)."""


class DegenerateEllipse(ChshError):
    """A principal semi-axis underflowed while the radius term stayed finite,
    so the bounding ellipse is unusable."""


class SingularSystem(ChshError):
    """The linear system recovering the image magnitudes from a measured
    pair of expectation values is ill-conditioned."""


class ConfigError(ChshError):
    """Command-line / config-file input is missing, unknown, or
    contradictory."""
