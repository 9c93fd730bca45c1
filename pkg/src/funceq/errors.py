"""Exception hierarchy. Every error carries the name of the module that raised it."""


class FuncEqError(Exception):
    module = "funceq"
    code = "error"

    def qualified(self):
        return f"{self.module}/{self.code}"


class TowerError(FuncEqError):
    module = "field-tower"


class FieldDivisionError(TowerError, ZeroDivisionError):
    code = "division-by-zero"


class MixedTowerError(TowerError):
    code = "mixed-towers"


class InseparableExtensionError(TowerError):
    code = "inseparable-extension"


class SingularSubstitutionError(TowerError):
    code = "singular-substitution"


class ReducibleMinpolyError(TowerError):
    code = "reducible-minpoly"


class ExprError(FuncEqError):
    module = "expr-io"


class ExprSyntaxError(ExprError):
    code = "syntax"

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnknownSymbolError(ExprError):
    code = "unknown-symbol"


class ZeroDenominatorError(ExprError):
    code = "zero-denominator"


class ProblemFileError(ExprError):
    code = "schema"

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class SolverError(FuncEqError):
    module = "solver"
    code = "failed"


class OracleMismatch(SolverError):
    module = "oracle"
    code = "mismatch"


class AutomorphismError(FuncEqError):
    module = "automorphism"
    code = "unsupported"
