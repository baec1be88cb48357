"""
Exception hierarchy for the kernel.

Every error raised by parsing, typechecking, the substitution engine,
the classical oracle or the generator derives from ``KernelError`` so the
CLI can map the whole family to exit code 1 with a single ``except``.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-002)

TODO:
- None
"""

from __future__ import annotations

from typing import Any

# A path into a term or substitution, outermost step first.
Path = tuple[str, ...]


def format_path(path: Path) -> str:
    """Render a path as ``body/fun/arg`` (``<root>`` when empty)."""
    return "/".join(path) if path else "<root>"


class KernelError(ValueError):
    """Base class for all domain errors raised by the kernel."""


class TermSyntaxError(KernelError):
    """Concrete syntax could not be parsed.

    Attributes:
        line: 1-based line of the offending token.
        column: 1-based column of the offending token.
        expected: Literal tokens the parser would have accepted.
    """

    def __init__(
        self,
        message: str,
        *,
        line: int,
        column: int,
        expected: frozenset[str] = frozenset(),
    ) -> None:
        self.line = line
        self.column = column
        self.expected = expected
        detail = f"{message} at line {line}, column {column}"
        if expected:
            detail += f"; expected one of: {', '.join(sorted(expected))}"
        super().__init__(detail)


class TypeMismatch(KernelError):
    """A term was found at a different type than the one required."""

    def __init__(self, expected: Any, found: Any, path: Path = ()) -> None:
        self.expected = expected
        self.found = found
        self.path = path
        super().__init__(
            f"type mismatch at {format_path(path)}: "
            f"expected {expected}, found {found}"
        )


class EmptyContext(KernelError):
    """A variable or weakening was used in the empty context."""

    def __init__(self, what: str, path: Path = ()) -> None:
        self.what = what
        self.path = path
        super().__init__(f"{what} in the empty context at {format_path(path)}")


class NotAFunction(KernelError):
    """The head of an application synthesised a non-arrow type."""

    def __init__(self, found: Any, path: Path = ()) -> None:
        self.found = found
        self.path = path
        super().__init__(
            f"application head at {format_path(path)} has type {found}, "
            "which is not a function type"
        )


class CannotInfer(KernelError):
    """Type synthesis was requested for an unannotated lambda."""

    def __init__(self, path: Path = ()) -> None:
        self.path = path
        super().__init__(
            f"cannot infer the type of an unannotated lambda at {format_path(path)}; "
            "add an annotation (M : T) or supply the expected type"
        )


class ContextMismatch(KernelError):
    """Two contexts that must coincide differ."""

    def __init__(self, expected: Any, found: Any, path: Path = ()) -> None:
        self.expected = expected
        self.found = found
        self.path = path
        super().__init__(
            f"context mismatch at {format_path(path)}: "
            f"expected {expected}, found {found}"
        )


class ScopeError(KernelError):
    """A classical de Bruijn index points outside its context."""

    def __init__(self, index: int, length: int) -> None:
        self.index = index
        self.length = length
        super().__init__(
            f"de Bruijn index {index} is out of scope in a context of length {length}"
        )


class StepLimit(KernelError):
    """Normalisation did not reach a normal form within the step budget."""

    def __init__(self, limit: int) -> None:
        self.limit = limit
        super().__init__(f"no normal form within {limit} reduction steps")


class Unsatisfiable(KernelError):
    """The generator could not build a value within its size bound."""

    def __init__(self, ctx: Any, ty: Any, size: int) -> None:
        self.ctx = ctx
        self.ty = ty
        self.size = size
        super().__init__(
            f"no term of type {ty} in context {ctx} fits within size {size}"
        )
