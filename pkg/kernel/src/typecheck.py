"""
Bidirectional typechecker for raw terms and substitutions.

Realises the intrinsic typing rules of the explicit-weakening calculus as
a runtime check. Checking mode is primary; synthesis covers variables,
weakenings, applications, numerals and annotated terms, but never a bare
lambda (lambdas carry no domain type).

A successful check *seals* the value: ``TypedTerm`` / ``TypedSubst``
record the context(s) and type it was checked at. Their payload is in
canonical annotated form (see ``annotate.py``): user annotations are
elaborated away and every lambda in application-head position carries
its type, so a sealed payload always checks again. Engine operations
accept only sealed values.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-004)
- 2026-10-19: Add infer_subst for CLI context defaults (STORY-009)
- 2026-10-19: Seal payloads in canonical annotated form (STORY-014)

TODO:
- None
"""

from __future__ import annotations

from dataclasses import dataclass

from kernel.src.annotate import annotate_subst, annotate_term
from kernel.src.errors import (
    CannotInfer,
    ContextMismatch,
    EmptyContext,
    NotAFunction,
    Path,
    TypeMismatch,
)
from kernel.src.printer import print_ctx, print_ty
from kernel.src.syntax import (
    NAT,
    VARZ,
    ZERO,
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


@dataclass(frozen=True, slots=True)
class TypedTerm:
    """A term together with the judgement ``ctx ⊢ term : ty`` it satisfies.

    Only produced by :func:`check_term` or by type-preserving engine
    operations.
    """

    term: Term
    ctx: Ctx
    ty: Ty


@dataclass(frozen=True, slots=True)
class TypedSubst:
    """A substitution together with ``subst : src ⊨ dst``.

    Terms over ``src`` replace the variables of ``dst`` (instantiation is
    contravariant).
    """

    subst: Subst
    src: Ctx
    dst: Ctx


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


def _mismatch(expected: Ty, found: Ty | str, path: Path) -> TypeMismatch:
    shown = found if isinstance(found, str) else print_ty(found)
    return TypeMismatch(print_ty(expected), shown, path)


def _check(ctx: Ctx, ty: Ty, raw: Term, path: Path) -> Term:
    """Check ``raw`` against ``ty``; return it with annotations removed."""
    match raw:
        case Lam(body):
            if not isinstance(ty, Arrow):
                raise _mismatch(ty, "a lambda abstraction", path)
            inner = ctx.extend(ty.domain)
            return Lam(_check(inner, ty.codomain, body, (*path, "body")))
        case Weaken(body):
            if not ctx:
                raise EmptyContext("weakening", path)
            return Weaken(_check(ctx.pop(), ty, body, (*path, "weaken")))
        case Suc(body):
            if not isinstance(ty, Nat):
                raise _mismatch(ty, NAT, path)
            return Suc(_check(ctx, NAT, body, (*path, "suc")))
        case Ann(inner, annotated):
            if annotated != ty:
                raise _mismatch(ty, annotated, path)
            return _check(ctx, annotated, inner, (*path, "ann"))
    found, elaborated = _infer(ctx, raw, path)
    if found != ty:
        raise _mismatch(ty, found, path)
    return elaborated


def _infer(ctx: Ctx, raw: Term, path: Path) -> tuple[Ty, Term]:
    """Synthesise a type for ``raw``; return it with the elaborated term."""
    match raw:
        case VarZ():
            if not ctx:
                raise EmptyContext("variable #", path)
            return ctx.last, VARZ
        case Weaken(body):
            if not ctx:
                raise EmptyContext("weakening", path)
            ty, inner = _infer(ctx.pop(), body, (*path, "weaken"))
            return ty, Weaken(inner)
        case App(fun, arg):
            fun_ty, fun_term = _infer(ctx, fun, (*path, "fun"))
            if not isinstance(fun_ty, Arrow):
                raise NotAFunction(print_ty(fun_ty), path)
            arg_term = _check(ctx, fun_ty.domain, arg, (*path, "arg"))
            return fun_ty.codomain, App(fun_term, arg_term)
        case Zero():
            return NAT, ZERO
        case Suc(body):
            return NAT, Suc(_check(ctx, NAT, body, (*path, "suc")))
        case Ann(inner, annotated):
            return annotated, _check(ctx, annotated, inner, (*path, "ann"))
        case Lam():
            raise CannotInfer(path)
    raise TypeError(f"not a term: {raw!r}")


def check_term(ctx: Ctx, ty: Ty, raw: Term) -> TypedTerm:
    """Check that ``raw`` has type ``ty`` in ``ctx``.

    Args:
        ctx: Context; its rightmost entry is de Bruijn index zero.
        ty: Expected type.
        raw: Raw term, possibly containing annotations.

    Returns:
        The sealed term in canonical annotated form.

    Raises:
        TypeMismatch: A subterm has the wrong type.
        EmptyContext: ``#`` or ``^`` used in the empty context.
        NotAFunction: An application head synthesised a non-arrow type.
        CannotInfer: An application head is a bare lambda.
    """
    term = _check(ctx, ty, raw, ())
    return TypedTerm(annotate_term(ctx, ty, term), ctx, ty)


def infer_term(ctx: Ctx, raw: Term) -> Ty:
    """Synthesise the type of ``raw`` in ``ctx``.

    Raises:
        CannotInfer: ``raw`` is (or its head is) an unannotated lambda.
    """
    ty, _ = _infer(ctx, raw, ())
    return ty


def infer_and_check(ctx: Ctx, raw: Term) -> TypedTerm:
    """Synthesise a type for ``raw`` and seal it at that type."""
    ty, term = _infer(ctx, raw, ())
    return TypedTerm(annotate_term(ctx, ty, term), ctx, ty)


# ---------------------------------------------------------------------------
# Substitutions
# ---------------------------------------------------------------------------


def _check_subst(src: Ctx, dst: Ctx, raw: Subst, path: Path) -> Subst:
    match raw:
        case Id():
            if src != dst:
                raise ContextMismatch(print_ctx(dst), print_ctx(src), path)
            return raw
        case SWeaken(body):
            if not src:
                raise EmptyContext("substitution weakening", path)
            return SWeaken(_check_subst(src.pop(), dst, body, (*path, "weaken")))
        case SCons(tail, head):
            if not dst:
                raise EmptyContext("substitution cons target", path)
            return SCons(
                _check_subst(src, dst.pop(), tail, (*path, "tail")),
                _check(src, dst.last, head, (*path, "head")),
            )
    raise TypeError(f"not a substitution: {raw!r}")


def check_subst(src: Ctx, dst: Ctx, raw: Subst) -> TypedSubst:
    """Check ``raw : src ⊨ dst``.

    Raises:
        ContextMismatch: ``id`` used between different contexts.
        EmptyContext: ``σ^`` with empty source or a cons with empty target.
        TypeMismatch: A cons head has the wrong type.
    """
    subst = _check_subst(src, dst, raw, ())
    return TypedSubst(annotate_subst(src, dst, subst), src, dst)


def infer_subst(src: Ctx, raw: Subst) -> Ctx:
    """Synthesise the target context of ``raw`` given its source.

    Succeeds whenever every cons head is synthesisable.
    """

    def go(src: Ctx, raw: Subst, path: Path) -> Ctx:
        match raw:
            case Id():
                return src
            case SWeaken(body):
                if not src:
                    raise EmptyContext("substitution weakening", path)
                return go(src.pop(), body, (*path, "weaken"))
            case SCons(tail, head):
                dst = go(src, tail, (*path, "tail"))
                ty, _ = _infer(src, head, (*path, "head"))
                return dst.extend(ty)
        raise TypeError(f"not a substitution: {raw!r}")

    return go(src, raw, ())


# ---------------------------------------------------------------------------
# Resealing
# ---------------------------------------------------------------------------


def reconstruct_term(ctx: Ctx, ty: Ty, raw: Term) -> TypedTerm:
    """Seal ``raw`` by solving for the domains of its head lambdas.

    Used for values whose typing is already known to hold (engine results)
    or that come from unannotated syntax (classical embedding). Unlike
    :func:`check_term`, no annotation is needed on a lambda redex head.

    Raises:
        TypeMismatch: ``raw`` has no type ``ty`` in ``ctx``.
        EmptyContext: ``#`` or ``^`` used in the empty context.
    """
    return TypedTerm(annotate_term(ctx, ty, raw), ctx, ty)


def reconstruct_subst(src: Ctx, dst: Ctx, raw: Subst) -> TypedSubst:
    """Seal a substitution already known to satisfy ``raw : src ⊨ dst``."""
    return TypedSubst(annotate_subst(src, dst, raw), src, dst)
