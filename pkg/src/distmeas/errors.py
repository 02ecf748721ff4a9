"""Exception hierarchy. Every domain failure is an Error subclass so the CLI
can map them to exit code 1, keeping exit code 2 for I/O and parse problems."""


class Error(Exception):
    """Base class for all domain errors raised by this package."""


class NonStochastic(Error):
    """A matrix column is negative or does not sum to exactly 1."""


class SpaceMismatch(Error):
    """Two operands disagree on their labeled product space."""


class FactorCollision(Error):
    """A tensor product would duplicate a factor id."""


class NotSurjective(Error):
    """A stochastic map has an all-zero row, so its dual is undefined."""


class UnknownSymbol(Error):
    """A symbol is not part of the relevant alphabet."""


class UnknownFactor(Error):
    """A factor id is not part of the relevant product space."""


class UnknownOccasion(Error):
    """An occasion id is not part of the host system."""


class EmptyWindow(Error):
    """An automaton time window contains no time points."""


class NonpositiveTemperature(Error):
    """Hopfield temperature must be > 0."""


class LengthMismatch(Error):
    """Sequences that must align (patterns, weights) have different lengths."""


class InvalidAutomaton(Error):
    """An automaton description violates its structural invariants."""


class BudgetExceeded(Error):
    """An exponential enumeration was asked to exceed its configured budget."""


class NotATarget(Error):
    """The named occasion is not a target of the subsystem."""


class EmptySubsystem(Error):
    """The operation needs a subsystem with at least one effective pair."""


class NotASubsystem(Error):
    """Restriction target is not contained in the section's subsystem."""


class Incompatible(Error):
    """Two sections disagree on their shared coordinates."""


class NotStochastic(Error):
    """A glued section has a column that does not sum to 1."""


class ContextNotContained(Error):
    """Effective information context must be contained in the subsystem."""


class UnsupportedOutput(Error):
    """The output distribution puts weight on an all-zero mechanism row."""


class NotAPartition(Error):
    """Blocks fail to partition the subsystem's source occasions."""


class NotInImage(Error):
    """The requested output symbol is never produced by the function."""


class DocumentError(Error):
    """A JSON document does not match the expected schema."""
