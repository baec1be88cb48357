"""
Canonical printer for types, contexts, terms and substitutions.

Output uses the fewest parentheses the grammar in ``parser.py`` needs,
except that a lambda body which is itself a lambda or an application is
always parenthesised (``\\ (\\ (#^ (#^ #)))``) and a lambda used as a
substitution head is parenthesised (``id , (\\ suc #)``). Everything
printed here parses back to the same AST.

Two styles are available: ``ascii`` (``#``, ``^``, ``\\``, ``,``) and
``unicode`` (``●``, ``↑``, ``ƛ``, ``·``, ``▷``, ``∅``, ``ℕ``, ``⇒``).

CHANGELOG:
- 2026-10-19: Initial creation (STORY-003)

TODO:
- None
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from kernel.src.syntax import (
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

Style = Literal["ascii", "unicode"]


@dataclass(frozen=True, slots=True)
class _Tokens:
    var: str
    weaken: str
    lam: str
    app: str
    cons: str
    nat: str
    arrow: str
    empty: str
    entails: str
    turnstile: str


_STYLES: dict[str, _Tokens] = {
    "ascii": _Tokens(
        var="#",
        weaken="^",
        lam="\\ ",
        app=" ",
        cons=" , ",
        nat="N",
        arrow=" -> ",
        empty="[]",
        entails=" |= ",
        turnstile=" |- ",
    ),
    "unicode": _Tokens(
        var="●",
        weaken=" ↑",
        lam="ƛ ",
        app=" · ",
        cons=" ▷ ",
        nat="ℕ",
        arrow=" ⇒ ",
        empty="∅",
        entails=" ⊨ ",
        turnstile=" ⊢ ",
    ),
}


def _tokens(style: Style) -> _Tokens:
    try:
        return _STYLES[style]
    except KeyError:
        raise ValueError(f"unknown print style {style!r}") from None


# ---------------------------------------------------------------------------
# Types and contexts
# ---------------------------------------------------------------------------


def print_ty(ty: Ty, style: Style = "ascii") -> str:
    """Print a type; arrows associate to the right."""
    tok = _tokens(style)
    match ty:
        case Arrow(domain, codomain):
            dom = print_ty(domain, style)
            if isinstance(domain, Arrow):
                dom = f"({dom})"
            return f"{dom}{tok.arrow}{print_ty(codomain, style)}"
        case Nat():
            return tok.nat
    raise TypeError(f"not a type: {ty!r}")


def print_ctx(ctx: Ctx, style: Style = "ascii") -> str:
    """Print a context, outermost entry first.

    ASCII form is ``[A, B]``; the Unicode form is
    ``∅ ▷ A ▷ B``.
    """
    tok = _tokens(style)
    if style == "unicode":
        return tok.empty + "".join(f" ▷ {print_ty(t, style)}" for t in ctx.entries)
    if not ctx:
        return tok.empty
    return "[" + ", ".join(print_ty(t, style) for t in ctx.entries) + "]"


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


def _atom(term: Term, tok: _Tokens, style: Style) -> str:
    match term:
        case VarZ():
            return tok.var
        case Zero():
            return "zero"
        case Weaken(body):
            return _atom(body, tok, style) + tok.weaken
        case Ann(inner, ty):
            return f"({_full(inner, tok, style)} : {print_ty(ty, style)})"
    return f"({_full(term, tok, style)})"


def _app(term: Term, tok: _Tokens, style: Style) -> str:
    match term:
        case App(fun, arg):
            return _app(fun, tok, style) + tok.app + _atom(arg, tok, style)
        case Suc(body):
            return "suc " + _atom(body, tok, style)
    return _atom(term, tok, style)


def _full(term: Term, tok: _Tokens, style: Style) -> str:
    if isinstance(term, Lam):
        body = term.body
        if isinstance(body, Lam | App):
            return f"{tok.lam}({_full(body, tok, style)})"
        return tok.lam + _app(body, tok, style)
    return _app(term, tok, style)


def print_term(term: Term, style: Style = "ascii") -> str:
    """Print a term in canonical concrete syntax."""
    return _full(term, _tokens(style), style)


# ---------------------------------------------------------------------------
# Substitutions
# ---------------------------------------------------------------------------


def _satom(subst: Subst, tok: _Tokens, style: Style) -> str:
    match subst:
        case Id():
            return "id"
        case SWeaken(body):
            return _satom(body, tok, style) + tok.weaken
    return f"({_sfull(subst, tok, style)})"


def _sfull(subst: Subst, tok: _Tokens, style: Style) -> str:
    if isinstance(subst, SCons):
        return _sfull(subst.tail, tok, style) + tok.cons + _app(subst.head, tok, style)
    return _satom(subst, tok, style)


def print_subst(subst: Subst, style: Style = "ascii") -> str:
    """Print a substitution; cons associates to the left."""
    return _sfull(subst, _tokens(style), style)


def print_chain(chain: list[Subst], style: Style = "ascii") -> str:
    """Print a ``;``-separated chain of substitutions."""
    sep = " ⨾ " if style == "unicode" else " ; "
    return sep.join(print_subst(s, style) for s in chain)


# ---------------------------------------------------------------------------
# Judgements
# ---------------------------------------------------------------------------


def print_term_judgement(term: Term, ctx: Ctx, ty: Ty, style: Style = "ascii") -> str:
    """Print ``ctx |- term : ty``."""
    tok = _tokens(style)
    return (
        f"{print_ctx(ctx, style)}{tok.turnstile}"
        f"{print_term(term, style)} : {print_ty(ty, style)}"
    )


def print_subst_judgement(
    subst: Subst, src: Ctx, dst: Ctx, style: Style = "ascii"
) -> str:
    """Print ``subst : src |= dst``."""
    tok = _tokens(style)
    return (
        f"{print_subst(subst, style)} : "
        f"{print_ctx(src, style)}{tok.entails}{print_ctx(dst, style)}"
    )
