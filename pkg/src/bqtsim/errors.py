"""Exception types shared across the simulator."""


class BqtError(Exception):
    """Base class for all simulator errors."""


class DuplicateLabel(BqtError):
    """Two registers being combined share a qubit label."""


class UnknownLabel(BqtError):
    """A referenced qubit label is not present in the register."""


class SameQubit(BqtError):
    """A two-qubit operation was given the same qubit twice."""


class LabelMismatch(BqtError):
    """Two states that must cover the same qubits do not."""


class BadSubset(BqtError):
    """A requested qubit subset is empty, not a subset, or not proper."""


class NotNormalized(BqtError):
    """Amplitudes do not form a unit-norm state within tolerance."""


class ImpossibleOutcome(BqtError):
    """Collapse requested onto an outcome of (numerically) zero probability."""


class NotGHZForm(BqtError):
    """State is not of the form c0|00...0> + c1|11...1> within tolerance."""
