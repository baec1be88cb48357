"""
Canonical annotations on lambda application heads.

Lambdas carry no domain type, so a term whose application head is a
lambda (``(\\ N) M``, possibly under ``^``) cannot be checked again by
the bidirectional rules once its annotations are gone. Sealing therefore
rebuilds every such head as ``(\\ N : T)``, with ``T`` found by
first-order unification over ``N`` and ``->``. Type variables that no
constraint fixes default to ``N``.

The result depends only on the annotation-free term and the judgement it
is sealed at: any annotations already present are dropped and
recomputed. Two sealed payloads are therefore structurally equal exactly
when their annotation-free terms are.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-014)

TODO:
- None
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

from kernel.src.errors import EmptyContext, Path, TypeMismatch
from kernel.src.syntax import (
    NAT,
    Ann,
    App,
    Arrow,
    Ctx,
    Id,
    Lam,
    Nat,
    SCons,
    Subst,
    Suc,
    SWeaken,
    Term,
    Ty,
    VarZ,
    Weaken,
    Zero,
)

# ---------------------------------------------------------------------------
# Unification
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class _Meta:
    index: int


@dataclass(frozen=True, slots=True)
class _Fun:
    domain: _Shape
    codomain: _Shape


_Shape = Nat | _Fun | _Meta


def _lift(ty: Ty) -> _Shape:
    match ty:
        case Arrow(domain, codomain):
            return _Fun(_lift(domain), _lift(codomain))
    return NAT


class _Solver:
    """Most general unifier, built incrementally; bindings never change."""

    def __init__(self) -> None:
        self._bindings: dict[int, _Shape] = {}
        self._count = 0

    def fresh(self) -> _Meta:
        self._count += 1
        return _Meta(self._count)

    def resolve(self, shape: _Shape) -> _Shape:
        while isinstance(shape, _Meta) and shape.index in self._bindings:
            shape = self._bindings[shape.index]
        return shape

    def lower(self, shape: _Shape) -> Ty:
        """Read back a solved shape; unconstrained variables become ``N``."""
        match self.resolve(shape):
            case _Fun(domain, codomain):
                return Arrow(self.lower(domain), self.lower(codomain))
        return NAT

    def show(self, shape: _Shape) -> str:
        match self.resolve(shape):
            case _Meta(index):
                return f"?{index}"
            case _Fun(domain, codomain):
                dom = self.show(domain)
                if isinstance(self.resolve(domain), _Fun):
                    dom = f"({dom})"
                return f"{dom} -> {self.show(codomain)}"
        return "N"

    def _occurs(self, meta: _Meta, shape: _Shape) -> bool:
        match self.resolve(shape):
            case _Meta() as other:
                return other == meta
            case _Fun(domain, codomain):
                return self._occurs(meta, domain) or self._occurs(meta, codomain)
        return False

    def _bind(self, meta: _Meta, shape: _Shape, path: Path) -> None:
        if self._occurs(meta, shape):
            raise TypeMismatch(self.show(meta), self.show(shape), path)
        self._bindings[meta.index] = shape

    def unify(self, expected: _Shape, found: _Shape, path: Path) -> None:
        expected, found = self.resolve(expected), self.resolve(found)
        if expected == found:
            return
        match expected, found:
            case _Meta(), _:
                self._bind(expected, found, path)
            case _, _Meta():
                self._bind(found, expected, path)
            case _Fun(), _Fun():
                self.unify(expected.domain, found.domain, path)
                self.unify(expected.codomain, found.codomain, path)
            case _:
                raise TypeMismatch(self.show(expected), self.show(found), path)


# ---------------------------------------------------------------------------
# Constraint collection and rebuilding
# ---------------------------------------------------------------------------


class _Annotator:
    """Collects constraints; records head lambdas in pre-order."""

    def __init__(self) -> None:
        self.solver = _Solver()
        self._heads: list[_Shape] = []

    def heads(self) -> Iterator[Ty]:
        return iter([self.solver.lower(shape) for shape in self._heads])

    def constrain(
        self,
        env: tuple[_Shape, ...],
        term: Term,
        expected: _Shape,
        head: bool,
        path: Path,
    ) -> None:
        solver = self.solver
        match term:
            case VarZ():
                if not env:
                    raise EmptyContext("variable #", path)
                solver.unify(expected, env[-1], path)
            case Weaken(body):
                if not env:
                    raise EmptyContext("weakening", path)
                self.constrain(env[:-1], body, expected, head, (*path, "weaken"))
            case Lam(body):
                domain, codomain = solver.fresh(), solver.fresh()
                solver.unify(expected, _Fun(domain, codomain), path)
                if head:
                    self._heads.append(expected)
                self.constrain((*env, domain), body, codomain, False, (*path, "body"))
            case App(fun, arg):
                domain = solver.fresh()
                self.constrain(env, fun, _Fun(domain, expected), True, (*path, "fun"))
                self.constrain(env, arg, domain, False, (*path, "arg"))
            case Zero():
                solver.unify(expected, NAT, path)
            case Suc(body):
                solver.unify(expected, NAT, path)
                self.constrain(env, body, NAT, False, (*path, "suc"))
            case Ann(inner, ty):
                annotated = _lift(ty)
                solver.unify(expected, annotated, path)
                self.constrain(env, inner, annotated, head, (*path, "ann"))
            case _:
                raise TypeError(f"not a term: {term!r}")


def _rebuild(term: Term, head: bool, heads: Iterator[Ty]) -> Term:
    match term:
        case Weaken(body):
            return Weaken(_rebuild(body, head, heads))
        case Lam(body):
            ty = next(heads) if head else None
            lam = Lam(_rebuild(body, False, heads))
            return lam if ty is None else Ann(lam, ty)
        case App(fun, arg):
            return App(_rebuild(fun, True, heads), _rebuild(arg, False, heads))
        case Suc(body):
            return Suc(_rebuild(body, False, heads))
        case Ann(inner, _):
            return _rebuild(inner, head, heads)
    return term


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def annotate_term(ctx: Ctx, ty: Ty, term: Term) -> Term:
    """Annotate exactly the lambdas in application-head position.

    Args:
        ctx: Context the term lives in.
        ty: Type the term must have.
        term: Term, with or without annotations.

    Returns:
        The canonical annotated form of ``term``.

    Raises:
        TypeMismatch: No choice of lambda domains gives ``term`` type ``ty``.
        EmptyContext: ``#`` or ``^`` used in the empty context.
    """
    annotator = _Annotator()
    env = tuple(_lift(entry) for entry in ctx.entries)
    annotator.constrain(env, term, _lift(ty), False, ())
    return _rebuild(term, False, annotator.heads())


def annotate_subst(src: Ctx, dst: Ctx, subst: Subst) -> Subst:
    """Annotate every cons head of a substitution typed ``src ⊨ dst``."""
    match subst:
        case Id():
            return subst
        case SWeaken(body):
            return SWeaken(annotate_subst(src.pop(), dst, body))
        case SCons(tail, head):
            return SCons(
                annotate_subst(src, dst.pop(), tail),
                annotate_term(src, dst.last, head),
            )
    raise TypeError(f"not a substitution: {subst!r}")


def strip_term(term: Term) -> Term:
    """Remove every annotation node."""
    match term:
        case Weaken(body):
            return Weaken(strip_term(body))
        case Lam(body):
            return Lam(strip_term(body))
        case App(fun, arg):
            return App(strip_term(fun), strip_term(arg))
        case Suc(body):
            return Suc(strip_term(body))
        case Ann(inner, _):
            return strip_term(inner)
    return term


def strip_subst(subst: Subst) -> Subst:
    """Remove every annotation node from the cons heads."""
    match subst:
        case SWeaken(body):
            return SWeaken(strip_subst(body))
        case SCons(tail, head):
            return SCons(strip_subst(tail), strip_term(head))
    return subst
