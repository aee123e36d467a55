"""
Error hierarchy for expdiff.

Every failure raised by the package derives from :class:`ExpDiffError` and
carries a machine-readable ``code`` that the CLI copies into its JSON output.
"""

from __future__ import annotations

from typing import Optional

__all__ = [
    "ExpDiffError",
    "UnsupportedRootOfUnity",
    "NotInvertible",
    "NotAPerfectSquare",
    "UnsupportedExponent",
    "InvalidShift",
    "DomainMismatch",
    "ZeroFunction",
    "InvalidEquation",
    "OutOfTheoremScope",
    "InvalidInstance",
    "DegenerateL",
    "UnboundParameter",
    "ContourTooCloseToZero",
    "NonIntegerWinding",
    "TooFewZeros",
    "ExpressionSyntaxError",
    "UndeclaredParameter",
    "NonIntegerExponent",
    "NonlinearTerm",
    "EquationFileError",
    "SoundnessViolation",
    "InvalidArgument",
]


class ExpDiffError(Exception):
    """Base class for all expdiff failures."""

    code: str = "Error"


# ── Algebra ───────────────────────────────────────────────────────────────────

class UnsupportedRootOfUnity(ExpDiffError):
    """
    Raised when exponentials whose arguments differ by i·pi·s, with s rational
    but not a half-integer, would have to be merged or compared.

    Attributes:
        argument: printed exponent that could not be reduced.
    """

    code = "UnsupportedRootOfUnity"

    def __init__(self, argument: str) -> None:
        self.argument = argument
        super().__init__(f"exp({argument}) is a root of unity outside {{±1, ±i}}")


class NotInvertible(ExpDiffError):
    code = "NotInvertible"

    def __init__(self, value: str, reason: str = "") -> None:
        self.value = value
        suffix = f": {reason}" if reason else ""
        super().__init__(f"{value} is not invertible{suffix}")


class NotAPerfectSquare(ExpDiffError):
    code = "NotAPerfectSquare"

    def __init__(self, value: str) -> None:
        self.value = value
        super().__init__(f"{value} has no square root in the constant field")


class UnsupportedExponent(ExpDiffError):
    """Exponent with exponential constants in it (a tower), or non-polynomial."""

    code = "UnsupportedExponent"

    def __init__(self, exponent: str) -> None:
        self.exponent = exponent
        super().__init__(f"unsupported exponent: {exponent}")


class InvalidShift(ExpDiffError):
    code = "InvalidShift"

    def __init__(self, shift: str, reason: str = "shift must be an exp-free constant") -> None:
        self.shift = shift
        super().__init__(f"invalid shift {shift}: {reason}")


class DomainMismatch(ExpDiffError):
    code = "DomainMismatch"

    def __init__(self) -> None:
        super().__init__("operands belong to different parameter sessions")


class ZeroFunction(ExpDiffError):
    code = "ZeroFunction"

    def __init__(self, operation: str) -> None:
        super().__init__(f"{operation} is undefined for the zero function")


# ── Equations and solver ──────────────────────────────────────────────────────

class InvalidEquation(ExpDiffError):
    code = "InvalidEquation"


class OutOfTheoremScope(ExpDiffError):
    code = "OutOfTheoremScope"


class InvalidInstance(ExpDiffError):
    code = "InvalidInstance"


class DegenerateL(ExpDiffError):
    """f0 vanishes identically, so the synthesized operator would vanish on f."""

    code = "DegenerateL"


class SoundnessViolation(ExpDiffError):
    code = "SoundnessViolation"


# ── Numerics ──────────────────────────────────────────────────────────────────

class UnboundParameter(ExpDiffError):
    code = "UnboundParameter"

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"parameter '{name}' has no numeric binding")


class ContourTooCloseToZero(ExpDiffError):
    """
    Attributes:
        radius:   last radius tried.
        distance: estimated distance from the contour to the nearest zero.
    """

    code = "ContourTooCloseToZero"

    def __init__(self, radius: float, distance: float, retries: int) -> None:
        self.radius = radius
        self.distance = distance
        super().__init__(
            f"zero within {distance:.3e} of |z| = {radius:g} after {retries} retries"
        )


class NonIntegerWinding(ExpDiffError):
    code = "NonIntegerWinding"

    def __init__(self, radius: float, value: complex, samples: int) -> None:
        self.radius = radius
        self.value = value
        self.samples = samples
        super().__init__(
            f"winding value {value} at |z| = {radius:g} did not settle on an integer "
            f"with {samples} samples"
        )


class TooFewZeros(ExpDiffError):
    code = "TooFewZeros"

    def __init__(self, count: int, radius: float) -> None:
        self.count = count
        self.radius = radius
        super().__init__(f"only {count} zero(s) in |z| <= {radius:g}; no slope to fit")


# ── Front end ─────────────────────────────────────────────────────────────────

class ExpressionSyntaxError(ExpDiffError):
    """
    Attributes:
        line:   1-based line of the offending token.
        column: 1-based column of the offending token.
    """

    code = "SyntaxError"

    def __init__(self, reason: str, line: int = 1, column: int = 1) -> None:
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {reason}")


class UndeclaredParameter(ExpDiffError):
    code = "UndeclaredParameter"

    def __init__(self, name: str, line: Optional[int] = None, column: Optional[int] = None) -> None:
        self.name = name
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}'{name}' is not declared (add it to 'params = ...')")


class NonIntegerExponent(ExpDiffError):
    code = "NonIntegerExponent"

    def __init__(self, line: int = 1, column: int = 1) -> None:
        super().__init__(f"{line}:{column}: '^' needs an integer literal exponent")


class NonlinearTerm(ExpDiffError):
    code = "NonlinearTerm"


class EquationFileError(ExpDiffError):
    code = "EquationFileError"


class InvalidArgument(ExpDiffError):
    """Malformed command-line usage."""

    code = "InvalidArgument"
