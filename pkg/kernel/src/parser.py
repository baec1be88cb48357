"""
Concrete-syntax parser for types, contexts, terms and substitutions.

Built on a single LALR ``lark`` grammar with one start symbol per
category. ASCII tokens are primary; the Unicode notation is
accepted as aliases everywhere (``●`` ``↑`` ``ƛ`` ``·`` ``▷`` ``∅``
``ℕ`` ``⇒`` ``⨾``).

Precedence, tightest first: postfix ``^``; application and ``suc``;
lambda body (extends as far right as possible); ``,`` cons.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-003)

TODO:
- None
"""

from __future__ import annotations

from functools import lru_cache

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput

from kernel.src.errors import TermSyntaxError
from kernel.src.syntax import (
    ID,
    NAT,
    VARZ,
    ZERO,
    Ann,
    App,
    Arrow,
    Ctx,
    Lam,
    SCons,
    Subst,
    Suc,
    SWeaken,
    Term,
    Ty,
    Weaken,
)

GRAMMAR = r"""
    start_ty: ty
    start_ctx: ctx
    start_term: term
    start_subst: subst
    start_chain: subst (_SEMI subst)*

    // types
    ?ty: tatom _ARROW ty    -> arrow
       | tatom
    ?tatom: _NAT            -> nat
          | "(" ty ")"

    // contexts: [A, B] or ∅ ▷ A ▷ B
    ctx: "[" "]"
       | "[" ty (_CONS ty)* "]"
       | _EMPTY (_CONS ty)*

    // terms
    ?term: _LAMBDA term     -> lam
         | app
    ?app: app _APPLY? atom  -> application
        | "suc" atom        -> suc
        | atom
    ?atom: _VAR             -> varz
         | "zero"           -> zero
         | atom _WEAKEN     -> weaken
         | "(" term ":" ty ")" -> ann
         | "(" term ")"

    // substitutions
    ?subst: subst _CONS term -> scons
          | satom
    ?satom: "id"            -> sid
          | satom _WEAKEN   -> sweaken
          | "(" subst ")"

    _NAT: "N" | "ℕ" | "`ℕ"
    _ARROW: "->" | "⇒" | "→"
    _EMPTY: "∅"
    _CONS: "," | "▷"
    _SEMI: ";" | "⨾" | "⨟"
    _LAMBDA: "\\" | "ƛ"
    _APPLY: "·"
    _VAR: "#" | "●"
    _WEAKEN: "^" | "↑"

    %import common.WS
    %ignore WS
"""

_STARTS = ("start_ty", "start_ctx", "start_term", "start_subst", "start_chain")


@v_args(inline=True)
class _ToAst(Transformer):
    """Turn the lark parse tree into kernel dataclasses."""

    def start_ty(self, ty: Ty) -> Ty:
        return ty

    def start_ctx(self, ctx: Ctx) -> Ctx:
        return ctx

    def start_term(self, term: Term) -> Term:
        return term

    def start_subst(self, subst: Subst) -> Subst:
        return subst

    def start_chain(self, *substs: Subst) -> list[Subst]:
        return list(substs)

    def nat(self) -> Ty:
        return NAT

    def arrow(self, domain: Ty, codomain: Ty) -> Ty:
        return Arrow(domain, codomain)

    def ctx(self, *tys: Ty) -> Ctx:
        return Ctx(tuple(tys))

    def lam(self, body: Term) -> Term:
        return Lam(body)

    def application(self, fun: Term, arg: Term) -> Term:
        return App(fun, arg)

    def suc(self, body: Term) -> Term:
        return Suc(body)

    def varz(self) -> Term:
        return VARZ

    def zero(self) -> Term:
        return ZERO

    def weaken(self, body: Term) -> Term:
        return Weaken(body)

    def ann(self, term: Term, ty: Ty) -> Term:
        return Ann(term, ty)

    def scons(self, tail: Subst, head: Term) -> Subst:
        return SCons(tail, head)

    def sid(self) -> Subst:
        return ID

    def sweaken(self, body: Subst) -> Subst:
        return SWeaken(body)


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(GRAMMAR, parser="lalr", start=list(_STARTS), transformer=_ToAst())


def _literal(name: str) -> str:
    """Human-readable form of a terminal name reported by lark."""
    if name == "$END":
        return "end of input"
    try:
        terminal = _parser().get_terminal(name)
    except KeyError:
        return name
    pattern = terminal.pattern
    if pattern.type == "str":
        return repr(pattern.value)
    return name.lstrip("_").lower()


def _parse(text: str, start: str) -> object:
    try:
        return _parser().parse(text, start=start)
    except UnexpectedEOF as exc:
        lines = text.splitlines() or [""]
        raise TermSyntaxError(
            "unexpected end of input",
            line=len(lines),
            column=len(lines[-1]) + 1,
            expected=frozenset(_literal(n) for n in exc.expected),
        ) from None
    except UnexpectedCharacters as exc:
        raise TermSyntaxError(
            f"unexpected character {text[exc.pos_in_stream]!r}",
            line=exc.line,
            column=exc.column,
            expected=frozenset(_literal(n) for n in exc.allowed or ()),
        ) from None
    except UnexpectedInput as exc:
        token = getattr(exc, "token", None)
        found = "end of input" if token is None or token.type == "$END" else repr(
            str(token)
        )
        expected = getattr(exc, "expected", None) or getattr(exc, "accepts", None) or ()
        line = exc.line if exc.line and exc.line > 0 else 1
        column = exc.column if exc.column and exc.column > 0 else len(text) + 1
        raise TermSyntaxError(
            f"unexpected {found}",
            line=line,
            column=column,
            expected=frozenset(_literal(n) for n in expected),
        ) from None


def parse_type(text: str) -> Ty:
    """Parse a type such as ``(N -> N) -> N -> N``."""
    return _parse(text, "start_ty")  # type: ignore[return-value]


def parse_ctx(text: str) -> Ctx:
    """Parse a context such as ``[N -> N, N]`` (rightmost is index zero)."""
    return _parse(text, "start_ctx")  # type: ignore[return-value]


def parse_term(text: str) -> Term:
    """Parse a term such as ``\\ (\\ (#^ (#^ #)))``."""
    return _parse(text, "start_term")  # type: ignore[return-value]


def parse_subst(text: str) -> Subst:
    """Parse a substitution such as ``id , (\\ suc #) , zero``."""
    return _parse(text, "start_subst")  # type: ignore[return-value]


def parse_chain(text: str) -> list[Subst]:
    """Parse a ``;``-separated chain ``σ ; τ`` (applied left to right)."""
    return _parse(text, "start_chain")  # type: ignore[return-value]
