"""Exception types shared across the toolkit."""


class TreemsoError(Exception):
    """Base class for all toolkit errors."""


# --- manifold layer ---------------------------------------------------------

class ClosureViolation(TreemsoError):
    """A node set is not hereditarily prefix closed.

    Carries the first missing address (in canonical order of discovery) and
    the dimension whose closure rule it violates.
    """

    def __init__(self, missing, dimension_at_fault):
        self.missing = missing
        self.dimension_at_fault = dimension_at_fault
        super().__init__(
            f"missing {missing} required by closure at dimension {dimension_at_fault}"
        )


class NodeAbsent(TreemsoError):
    pass


class BadAddress(TreemsoError):
    pass


# --- automata layer ---------------------------------------------------------

class AlphabetMismatch(TreemsoError):
    pass


class BranchingExceeded(TreemsoError):
    pass


class DimensionMismatch(TreemsoError):
    pass


class BranchingMismatch(TreemsoError):
    pass


class NotSurjective(TreemsoError):
    pass


class PartialMap(TreemsoError):
    pass


class ExplosionGuard(TreemsoError):
    """Raised when a construction would exceed configured size limits.

    `estimate` is the size that tripped the guard; `context` names the
    construction (and, for formula compilation, the offending subformula).
    """

    def __init__(self, estimate, limit, context=""):
        self.estimate = estimate
        self.limit = limit
        self.context = context
        super().__init__(f"size estimate {estimate} exceeds limit {limit}: {context}")


# --- logic layer -------------------------------------------------------------

class FormulaSyntaxError(TreemsoError):
    def __init__(self, message, position=None):
        self.position = position
        where = f" at {position[0]}:{position[1]}" if position else ""
        super().__init__(message + where)


class SortError(TreemsoError):
    def __init__(self, variable, message=""):
        self.variable = variable
        super().__init__(message or f"variable {variable!r} used at the wrong sort")


class UnsupportedDimension(TreemsoError):
    pass


class UnguardedQuantifier(TreemsoError):
    def __init__(self, variable):
        self.variable = variable
        super().__init__(f"quantifier over {variable!r} is not domain-guarded")


class DecodeError(TreemsoError):
    pass


# --- relations / yields -------------------------------------------------------

class HeadCountViolation(TreemsoError):
    def __init__(self, sibling_set, count):
        self.sibling_set = sibling_set
        self.count = count
        super().__init__(f"sibling set {sorted(map(str, sibling_set))} has {count} heads, expected 1")


class NoHeadPath(TreemsoError):
    pass


class NotTreeOrder(TreemsoError):
    def __init__(self, pair, message=""):
        self.pair = pair
        super().__init__(message or f"inherited relations fail tree axioms at {pair}")


# --- grammar layer ------------------------------------------------------------

class GrammarError(TreemsoError):
    pass


class FootNotOnHeadPath(GrammarError):
    pass


class UnknownAuxiliaryInSA(GrammarError):
    pass


class NoInitialTree(GrammarError):
    pass


class InvalidDerivation(GrammarError):
    pass
