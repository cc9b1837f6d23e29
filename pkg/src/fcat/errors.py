"""Exception types shared across the package."""


class FcatError(Exception):
    """Base class for every error raised by fcat."""


class ParseError(FcatError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class FcatSyntaxError(ParseError):
    pass


class DuplicateName(ParseError):
    pass


class UnknownName(ParseError):
    pass


class MissingCompositeError(ParseError):
    pass


class CategoryError(FcatError):
    """A raw description violates the category laws.

    ``violations`` holds every violation found, not just the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        head = "; ".join(str(v) for v in self.violations[:5])
        more = len(self.violations) - 5
        if more > 0:
            head += f"; ... {more} more"
        super().__init__(head)


class NotACone(FcatError):
    pass


class InvariantBreach(FcatError):
    """An internal invariant failed; signals a bug or corrupted input."""


class NoMediator(InvariantBreach):
    pass


class CapExceeded(FcatError):
    pass


class NoInitial(FcatError):
    pass


class NoTerminal(FcatError):
    pass


class NoFactorization(FcatError):
    pass


class NoCoproduct(FcatError):
    pass


class NoProduct(FcatError):
    pass


class NotFibrant(FcatError):
    pass


class NotCofibrant(FcatError):
    pass


class LiftNotFound(InvariantBreach):
    pass


class CoincidenceFailure(FcatError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"left and right homotopy disagree on {pair}")


class NotACongruence(FcatError):
    pass


class InvalidStructure(FcatError):
    """A model structure fails the closed-model axioms."""


class BoundTooLargeForBudget(FcatError):
    pass
