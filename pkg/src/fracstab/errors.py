"""Exception taxonomy shared across the library.

Every failure a caller is expected to handle programmatically gets its own
class; all derive from :class:`FracstabError` so blanket handling stays easy.
"""


class FracstabError(Exception):
    """Base class for all library-specific failures."""


class NonConvergence(FracstabError):
    """A truncated expansion did not reach the requested tolerance."""


class OutsideSector(FracstabError):
    """Argument lies outside |arg z| > alpha*pi/2, where the algebraic
    decay expansion is invalid."""


class IllConditioned(FracstabError):
    """No similarity transform below the condition-number cap exists."""


class SectorViolation(FracstabError):
    """An eigenvalue fails the stability sector test where membership is
    a precondition (kernel integrals may diverge)."""


class HypothesisFailed(FracstabError):
    """The spectrum is not inside the stability sector, so the contraction
    construction does not apply."""


class ContractionFailed(FracstabError):
    """No ball radius achieves a contraction factor below one."""


class DivergedIterate(FracstabError):
    """A fixed-point iterate escaped the contraction ball."""


class Blowup(FracstabError):
    """Trajectory norm exceeded the divergence threshold.

    Attributes
    ----------
    escape_time : float
        First grid time at which the threshold was crossed.
    """

    def __init__(self, message, escape_time):
        super().__init__(message)
        self.escape_time = float(escape_time)


class StepTooLarge(FracstabError):
    """Corrector residual exceeded its sanity bound; reduce the step."""


class Unstabilized(FracstabError):
    """An audited quantity did not settle on the sampled grid; enlarge
    the grid or tighten the evaluation tolerance."""
