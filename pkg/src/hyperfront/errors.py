"""Exception hierarchy shared by all hyperfront modules."""


class HyperfrontError(Exception):
    """Base class for every error raised by the package."""


class DomainError(HyperfrontError, ValueError):
    """A state or strength falls outside the admissible region."""


class ConvergenceError(HyperfrontError, RuntimeError):
    """An iterative solver failed to reach its tolerance."""


class UnsupportedRegimeError(HyperfrontError, NotImplementedError):
    """The requested quantity is only defined for the other regime."""


class InvalidBoundaryError(HyperfrontError, ValueError):
    """A wall description violates the admissibility hypotheses."""


class InvalidDataError(HyperfrontError, ValueError):
    """Initial data violates the admissibility hypotheses."""


class BudgetExceededError(HyperfrontError, RuntimeError):
    """The Glimm total or the front count exceeded its budget."""


class EventWindowError(HyperfrontError, ValueError):
    """A local-step window contains an interaction or wall event."""


class DegenerateInputError(HyperfrontError, ValueError):
    """Too few or ill-posed samples for a rate fit."""


class ProfileMismatchError(HyperfrontError, ValueError):
    """Two profiles disagree on their far-field background."""


class ConfigError(HyperfrontError, ValueError):
    """A configuration file is malformed or inconsistent."""


class GenericityError(HyperfrontError, RuntimeError):
    """Two events fell on the same x coordinate."""
