"""Exception taxonomy shared across the package.

Numeric-domain failures (bad inputs, guarded evaluation regions) derive from
ValueError; search/optimization failures derive from RuntimeError so callers
can split the two families cleanly.
"""


class DomainError(ValueError):
    """Input lies outside the mathematical domain of the requested quantity."""


class LightLineProximity(DomainError):
    """A retained diffraction order is too close to its light line |alpha_n| = beta.

    The spectral sums divide by chi_n = sqrt(beta^2 - alpha_n^2); within the
    configured tolerance of a zero the evaluation is unreliable and is refused.
    """


class NonFiniteValue(DomainError):
    """A spectral sum overflowed or produced a non-finite value."""


class DegenerateFormula(DomainError):
    """A closed-form expression divides by an entry that is numerically zero."""


class SingularSystem(DomainError):
    """The pin interaction matrix is numerically singular (condition > 1e14)."""


class SearchError(RuntimeError):
    """Base class for failed numerical searches."""


class NoUnityReflectance(SearchError):
    """No beta with single-grating reflectance 1 found inside the bracket."""


class NoUnityTransmittance(SearchError):
    """Pair transmittance does not reach 1 inside the separation bracket."""


class ModesDidNotMerge(SearchError):
    """Even and odd resonance branches never coincide over the shift bracket."""


class Unresolved(SearchError):
    """A spectral feature is not resolved finely enough to measure."""
