"""Exception hierarchy shared by every module.

Three families matter to callers (the CLI maps them to exit codes):
input/schema problems, blown computation caps, and violated mathematical
preconditions.
"""


class SymfanoError(Exception):
    pass


class InputError(SymfanoError):
    """Malformed input: bad schema, bad matrix shape, non-unimodular generator."""


class ComputationCapError(SymfanoError):
    """A configurable resource cap was exceeded."""


class NotFiniteWithinCap(ComputationCapError):
    """Group closure did not terminate within the element cap."""


class CapExceeded(ComputationCapError):
    """Sign-pattern enumeration would exceed the refinement cap."""


class TooManyCoordinates(ComputationCapError):
    """Support enumeration over 2^n subsets refused for large n."""


class MixedExtension(SymfanoError):
    """Two distinct quadratic extensions met in one computation."""


class PreconditionError(SymfanoError):
    """A documented mathematical precondition does not hold for the input."""


class NotSymmetric(PreconditionError):
    pass


class NotFano(PreconditionError):
    pass


class NotLogTerminal(PreconditionError):
    pass


class MorphismHypothesisViolated(PreconditionError):
    """The boundary carries a -infinity coefficient (an empty fiber record)."""


class NotInvariant(PreconditionError):
    """A divisor or boundary is not invariant under the acting group."""


class CoefficientOutOfRange(PreconditionError):
    pass


class DegreeError(PreconditionError):
    pass


class NotSurjective(PreconditionError):
    """The lattice projection is not onto the target lattice."""


class IdentityElement(PreconditionError):
    """Fixed points of the projective identity are undefined."""


class NoRoot(PreconditionError):
    """Constant nonzero polynomial has no root."""
