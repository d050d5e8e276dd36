"""Exception hierarchy for series algebra, graph expansion and root descent."""


class SpectralError(Exception):
    """Base class for every error raised by this package."""


class NonpositiveLeadingAction(SpectralError):
    """The leading action of a series must be strictly positive."""


class TermActionExceedsLeading(SpectralError):
    """A term action must stay strictly below the leading action."""


class DegreeMismatch(SpectralError):
    """Vertex degree handed to a scattering-matrix builder is invalid."""


class ValidationError(SpectralError):
    """One or more structural invariants are violated.

    ``violations`` lists every violated invariant, one message per entry,
    each anchored to the document path of the offending field.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class SizeCapExceeded(ValidationError):
    """Graph exceeds the directed-bond cap of the determinant expansion."""


class RealificationFailure(SpectralError):
    """Determinant coefficients do not pair into a real cosine sum."""


class DegenerateLeadingTerm(SpectralError):
    """The extreme-action coefficient cancelled below tolerance."""


class NotRegular(SpectralError):
    """Separator grid requested for a series whose term sum is not below 1."""


class DegenerateEndpoint(SpectralError):
    """Series value at a cell endpoint is consistent with a double root."""


class DegenerateSpectrum(SpectralError):
    """Descent hit a (near-)tangential root; the spectrum is not simple."""


class EmptyWindow(SpectralError):
    """Wavenumber window contains no interval."""


class ParseError(SpectralError):
    """Configuration text is not well-formed JSON."""
