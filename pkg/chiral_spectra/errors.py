class GraphFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class AssumptionError(ValueError):
    def __init__(self, assumption: str, message: str | None = None):
        self.assumption = assumption
        super().__init__(message or f"Assumption '{assumption}' does not hold")


class SizeCapError(ValueError):
    pass


class ClusteringAmbiguityError(ArithmeticError):
    pass


class EigensolverError(ArithmeticError):
    pass


class VerificationError(AssertionError):
    pass
