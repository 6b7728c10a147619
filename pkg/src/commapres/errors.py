"""Exception hierarchy for the kernel."""


class KernelError(Exception):
    """Base class for every error raised by commapres."""


class CompositionError(KernelError, ValueError):
    """Maps whose domain and codomain do not line up."""


class ShapeError(KernelError, ValueError):
    """Malformed input: non-parallel maps, bad tables, non-directed shapes."""


class UniversalPropertyError(KernelError):
    """A cocone does not commute, so no mediating map exists."""


class StabilizationError(KernelError):
    """A chain's declared bound is not actually a stabilization point."""


class PreconditionError(KernelError, ValueError):
    pass


class MembershipError(KernelError, KeyError):
    pass


class EnumerationBudgetError(KernelError):
    """An enumeration would visit more candidates than the configured budget."""

    def __init__(self, needed, budget):
        super().__init__(f"enumeration needs {needed} candidates, budget is {budget}")
        self.needed = needed
        self.budget = budget


class InvariantError(KernelError):
    """An internal invariant failed. This signals a bug, not bad input."""
