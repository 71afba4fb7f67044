"""Exception types shared across the engine."""


class MalformedTable(Exception):
    """A table references an unknown id, or a required entry is missing."""


class NotASemilattice(Exception):
    pass


class NotAQuantale(Exception):
    pass


class NotATopology(Exception):
    pass


class NotAMonoid(Exception):
    pass


class SearchBudgetExceeded(Exception):
    """A brute-force search space exceeded its configured bound."""

    def __init__(self, bound, size):
        super().__init__(f"search space of size {size} exceeds budget {bound}")
        self.bound = bound
        self.size = size


class CoverNotTotal(Exception):
    pass


class NotCartesian(Exception):
    pass


class CoherenceNotInvertible(Exception):
    """A coherence morphism required to be invertible is not."""

    def __init__(self, component):
        super().__init__(f"coherence morphism at {component!r} is not invertible")
        self.component = component


class NotDistributive(Exception):
    pass


class NotAFrame(Exception):
    pass


class NotAFilter(Exception):
    pass


class NotComparable(Exception):
    pass


class NotSymmetric(Exception):
    pass


class HypothesisNotMet(Exception):
    pass


class NotStiff(Exception):
    pass


class BudgetExceeded(Exception):
    pass


class ParseError(Exception):
    pass


class SchemaError(Exception):
    pass
