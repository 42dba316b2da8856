class IDLogicError(Exception):
    """Base class for all errors raised by the package."""


class SyntaxModelError(IDLogicError):
    """An AST violates a structural invariant (bad arity, undeclared symbol, ...)."""


class ParseError(IDLogicError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)


class ArityError(ParseError):
    pass


class UndeclaredSymbolError(ParseError):
    pass


class EvaluationError(IDLogicError):
    """Free variable or unground term where a closed one is required."""


class StructureError(IDLogicError):
    """A structure does not interpret the symbols an operation needs."""


class LimitExceeded(IDLogicError):
    """A configurable resource cap (ground rules, search nodes, assignments) was hit."""


class NotTotalError(IDLogicError):
    pass


class GateError(IDLogicError):
    """A substitution was refused because the two formulas are not 3-valued equivalent."""


class EmbeddingError(IDLogicError):
    pass
