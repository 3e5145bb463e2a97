"""Error hierarchy shared by the library and the CLI.

Every error carries a stable ``code`` and a JSON-serialisable ``details``
dict so json-mode reports can emit machine-readable error objects.
``InputError`` subclasses map to exit status 2, ``CapError`` ones to 3.
"""

from typing import Any, Dict, Optional


class SheafworkError(Exception):
    """Base class for all sheafwork errors."""

    code = "error"
    exit_code = 2

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}


class InputError(SheafworkError):
    """Malformed or inconsistent input data."""

    code = "input_error"
    exit_code = 2


class CapError(SheafworkError):
    """A configured size cap was exceeded."""

    code = "cap_exceeded"
    exit_code = 3


# exact algebra


class IllFormedGroup(InputError):
    code = "ill_formed_group"


class IllFormedHom(InputError):
    code = "ill_formed_hom"


class AmbientMismatch(InputError):
    code = "ambient_mismatch"


class NotAComplex(InputError):
    code = "not_a_complex"


class ChainMismatch(InputError):
    code = "chain_mismatch"


class NotSolvable(InputError):
    """An element could not be lifted along a map where a lift was required."""

    code = "not_solvable"


# spaces


class NotAntisymmetric(InputError):
    code = "not_antisymmetric"


class UnknownPoint(InputError):
    code = "unknown_point"

    def __init__(self, point: str, space: Optional[str] = None):
        where = f" in space '{space}'" if space else ""
        super().__init__(f"Unknown point '{point}'{where}", point=point)


class NotOpen(InputError):
    code = "not_open"


class NotACover(InputError):
    code = "not_a_cover"


# sheaves


class FunctorialityViolation(InputError):
    code = "functoriality_violation"


class MissingRestriction(InputError):
    code = "missing_restriction"


class NaturalityViolation(InputError):
    code = "naturality_violation"


class NotExactInput(InputError):
    code = "not_exact_input"


class NotAResolution(InputError):
    code = "not_a_resolution"


# spectral sequences


class SignViolation(InputError):
    code = "sign_violation"


class NotStabilized(InputError):
    code = "not_stabilized"


# files


class ParseError(InputError):
    code = "parse_error"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})", line=line, column=column)


class SchemaError(InputError):
    code = "schema_error"

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{message} at {path}", path=path)


class UnknownName(InputError):
    code = "unknown_name"


# caps


class TooManyOpens(CapError):
    code = "too_many_opens"

    def __init__(self, count: int, cap: int, exact: bool = True):
        amount = str(count) if exact else f"at least {count}"
        super().__init__(
            f"Space has {amount} open sets, more than the cap of {cap}",
            count=count,
            cap=cap,
            at_least=not exact,
        )


class CapExceeded(CapError):
    code = "cap_exceeded"
