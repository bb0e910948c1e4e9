"""Exception hierarchy shared by every engine module."""


class SpecforgeError(Exception):
    """Base class for all engine errors."""


class ParseError(SpecforgeError):
    def __init__(self, message, line, col):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


class TranslateError(SpecforgeError):
    pass


class AdmissionError(SpecforgeError):
    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class CopyFunError(SpecforgeError):
    pass


class SubstitutionError(SpecforgeError):
    pass


class ObligationError(SpecforgeError):
    def __init__(self, message, obligation=None, counterexample=None):
        super().__init__(message)
        self.obligation = obligation
        self.counterexample = counterexample


class EvalError(SpecforgeError):
    """Evaluation failure; ``reason`` is a short machine-readable tag."""

    def __init__(self, message, reason="error"):
        super().__init__(message)
        self.reason = reason
