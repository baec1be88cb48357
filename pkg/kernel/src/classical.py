"""
Classical de Bruijn oracle.

An independent rendition of the simply-typed lambda calculus with
numbered variables, index shifting and simultaneous substitution. It
shares no code paths with the explicit-weakening engine apart from the
syntax of types and contexts, so agreement between the two is evidence
rather than tautology.

Also provides the translations between the two worlds:

- ``erase_term``: every ``M ↑`` becomes a shift of the erased ``M``.
- ``erase_subst``: a substitution ``Γ ⊨ Δ`` becomes a vector of ``|Δ|``
  classical images over ``Γ`` (position i is index i).
- ``embed``: ``CVar n`` becomes ``●`` under n weakenings, giving the
  weakening-canonical form.

Classical terms print as ``λ. body`` with bare integer indices.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-008)
- 2026-10-19: embed accepts beta-redexes (STORY-014)

TODO:
- None
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput

from kernel.src.errors import ScopeError, StepLimit, TermSyntaxError
from kernel.src.syntax import (
    ZERO,
    Ann,
    App,
    Ctx,
    Id,
    Lam,
    SCons,
    Subst,
    Suc,
    SWeaken,
    Term,
    Ty,
    VarZ,
    Weaken,
    Zero,
    var,
)
from kernel.src.typecheck import TypedSubst, TypedTerm, reconstruct_term

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Syntax
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CVar:
    """Numbered variable; 0 is the innermost binder."""

    index: int

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"de Bruijn indices are non-negative (got {self.index})")


@dataclass(frozen=True, slots=True)
class CLam:
    body: ClassicalTerm


@dataclass(frozen=True, slots=True)
class CApp:
    fun: ClassicalTerm
    arg: ClassicalTerm


@dataclass(frozen=True, slots=True)
class CZero:
    pass


@dataclass(frozen=True, slots=True)
class CSuc:
    body: ClassicalTerm


ClassicalTerm = CVar | CLam | CApp | CZero | CSuc

CZERO = CZero()


@dataclass(frozen=True, slots=True)
class ParallelSubst:
    """Materialised simultaneous substitution.

    Attributes:
        images: ``images[i]`` replaces index i of the replaced context.
    """

    images: tuple[ClassicalTerm, ...]

    def __len__(self) -> int:
        return len(self.images)


def identity_env(length: int) -> ParallelSubst:
    """The identity substitution on a context of ``length`` entries."""
    return ParallelSubst(tuple(CVar(i) for i in range(length)))


# ---------------------------------------------------------------------------
# Shifting and substitution
# ---------------------------------------------------------------------------


def shift(t: ClassicalTerm, amount: int, cutoff: int = 0) -> ClassicalTerm:
    """Add ``amount`` to every index ``>= cutoff`` (free at this level)."""
    match t:
        case CVar(index):
            return CVar(index + amount) if index >= cutoff else t
        case CLam(body):
            return CLam(shift(body, amount, cutoff + 1))
        case CApp(fun, arg):
            return CApp(shift(fun, amount, cutoff), shift(arg, amount, cutoff))
        case CSuc(body):
            return CSuc(shift(body, amount, cutoff))
    return t


def psubst(t: ClassicalTerm, env: ParallelSubst) -> ClassicalTerm:
    """Simultaneously replace index i by ``env.images[i]``.

    Raises:
        ScopeError: ``t`` mentions an index beyond ``len(env)``.
    """
    match t:
        case CVar(index):
            if index >= len(env.images):
                raise ScopeError(index, len(env.images))
            return env.images[index]
        case CLam(body):
            lifted = (CVar(0), *(shift(img, 1) for img in env.images))
            return CLam(psubst(body, ParallelSubst(lifted)))
        case CApp(fun, arg):
            return CApp(psubst(fun, env), psubst(arg, env))
        case CSuc(body):
            return CSuc(psubst(body, env))
    return t


def compose_parallel(first: ParallelSubst, then: ParallelSubst) -> ParallelSubst:
    """Denotation of composition: apply ``first``, then ``then``."""
    return ParallelSubst(tuple(psubst(img, then) for img in first.images))


def is_well_scoped(t: ClassicalTerm, length: int) -> bool:
    """Whether every free index of ``t`` is below ``length``."""
    match t:
        case CVar(index):
            return index < length
        case CLam(body):
            return is_well_scoped(body, length + 1)
        case CApp(fun, arg):
            return is_well_scoped(fun, length) and is_well_scoped(arg, length)
        case CSuc(body):
            return is_well_scoped(body, length)
    return True


# ---------------------------------------------------------------------------
# Erasure and embedding
# ---------------------------------------------------------------------------


def erase_raw(term: Term) -> ClassicalTerm:
    """Erase a raw term without consulting types.

    Annotations are dropped; scope is not checked.
    """
    match term:
        case VarZ():
            return CVar(0)
        case Weaken(body):
            return shift(erase_raw(body), 1)
        case Lam(body):
            return CLam(erase_raw(body))
        case App(fun, arg):
            return CApp(erase_raw(fun), erase_raw(arg))
        case Zero():
            return CZERO
        case Suc(body):
            return CSuc(erase_raw(body))
        case Ann(inner, _):
            return erase_raw(inner)
    raise TypeError(f"not a term: {term!r}")


def erase_term(m: TypedTerm) -> ClassicalTerm:
    """Erase a sealed term; the result is well scoped in ``m.ctx``."""
    return erase_raw(m.term)


def _erase_subst(subst: Subst, dst_len: int) -> tuple[ClassicalTerm, ...]:
    match subst:
        case Id():
            return tuple(CVar(i) for i in range(dst_len))
        case SWeaken(body):
            return tuple(shift(img, 1) for img in _erase_subst(body, dst_len))
        case SCons(tail, head):
            return (erase_raw(head), *_erase_subst(tail, dst_len - 1))
    raise TypeError(f"not a substitution: {subst!r}")


def erase_subst(s: TypedSubst) -> ParallelSubst:
    """Denotation of ``s : Γ ⊨ Δ`` as ``|Δ|`` classical images over ``Γ``."""
    return ParallelSubst(_erase_subst(s.subst, len(s.dst)))


def _embed(t: ClassicalTerm, depth: int) -> Term:
    match t:
        case CVar(index):
            if index >= depth:
                raise ScopeError(index, depth)
            return var(index)
        case CLam(body):
            return Lam(_embed(body, depth + 1))
        case CApp(fun, arg):
            return App(_embed(fun, depth), _embed(arg, depth))
        case CZero():
            return ZERO
        case CSuc(body):
            return Suc(_embed(body, depth))
    raise TypeError(f"not a classical term: {t!r}")


def embed(t: ClassicalTerm, ctx: Ctx, ty: Ty) -> TypedTerm:
    """Translate a classical term into weakening-canonical form and seal it.

    Beta-redexes are allowed: the domain of each lambda in head position is
    solved for and recorded as an annotation.

    Raises:
        ScopeError: an index points outside ``ctx``.
        TypeMismatch: the translated term does not have type ``ty``.
    """
    return reconstruct_term(ctx, ty, _embed(t, len(ctx)))


# ---------------------------------------------------------------------------
# Normalisation
# ---------------------------------------------------------------------------


def _subst_top(body: ClassicalTerm, arg: ClassicalTerm) -> ClassicalTerm:
    """Beta contraction: ``body[0 := arg]`` then unshift."""

    def go(t: ClassicalTerm, j: int, s: ClassicalTerm) -> ClassicalTerm:
        match t:
            case CVar(index):
                return s if index == j else t
            case CLam(inner):
                return CLam(go(inner, j + 1, shift(s, 1)))
            case CApp(fun, a):
                return CApp(go(fun, j, s), go(a, j, s))
            case CSuc(inner):
                return CSuc(go(inner, j, s))
        return t

    return shift(go(body, 0, shift(arg, 1)), -1)


def _classical_step(t: ClassicalTerm) -> ClassicalTerm | None:
    match t:
        case CApp(CLam(body), arg):
            return _subst_top(body, arg)
        case CApp(fun, arg):
            reduced = _classical_step(fun)
            if reduced is not None:
                return CApp(reduced, arg)
            reduced = _classical_step(arg)
            return None if reduced is None else CApp(fun, reduced)
        case CLam(body):
            reduced = _classical_step(body)
            return None if reduced is None else CLam(reduced)
        case CSuc(body):
            reduced = _classical_step(body)
            return None if reduced is None else CSuc(reduced)
    return None


def classical_normalize(t: ClassicalTerm, step_limit: int = 1_000_000) -> ClassicalTerm:
    """Normal-order (leftmost-outermost) reduction to beta-normal form.

    Raises:
        StepLimit: more than ``step_limit`` contractions were needed.
    """
    steps = 0
    while (reduced := _classical_step(t)) is not None:
        steps += 1
        if steps > step_limit:
            raise StepLimit(step_limit)
        t = reduced
    logger.debug("Classical normal form in %d steps", steps, extra={"steps": steps})
    return t


# ---------------------------------------------------------------------------
# Concrete syntax
# ---------------------------------------------------------------------------

CLASSICAL_GRAMMAR = r"""
    ?start: cterm
    ?cterm: _LAMBDA "." cterm   -> clam
          | capp
    ?capp: capp catom           -> capply
         | "suc" catom          -> csuc
         | catom
    ?catom: INT                 -> cvar
          | _ZERO               -> czero
          | "(" cterm ")"

    _LAMBDA: "λ" | "\\"
    _ZERO: "zero" | "z"

    %import common.INT
    %import common.WS
    %ignore WS
"""


@v_args(inline=True)
class _ToClassical(Transformer):
    def clam(self, body: ClassicalTerm) -> ClassicalTerm:
        return CLam(body)

    def capply(self, fun: ClassicalTerm, arg: ClassicalTerm) -> ClassicalTerm:
        return CApp(fun, arg)

    def csuc(self, body: ClassicalTerm) -> ClassicalTerm:
        return CSuc(body)

    def cvar(self, token: object) -> ClassicalTerm:
        return CVar(int(str(token)))

    def czero(self) -> ClassicalTerm:
        return CZERO


@lru_cache(maxsize=1)
def _classical_parser() -> Lark:
    return Lark(CLASSICAL_GRAMMAR, parser="lalr", transformer=_ToClassical())


def parse_classical(text: str) -> ClassicalTerm:
    """Parse ``λ. λ. 1 (1 0)`` style input.

    Raises:
        TermSyntaxError: on malformed input.
    """
    try:
        return _classical_parser().parse(text)  # type: ignore[return-value]
    except UnexpectedInput as exc:
        expected = getattr(exc, "expected", None) or getattr(exc, "allowed", None) or ()
        raise TermSyntaxError(
            "malformed classical term",
            line=max(exc.line, 1),
            column=max(exc.column, 1),
            expected=frozenset(str(name) for name in expected),
        ) from None


def _catom(t: ClassicalTerm) -> str:
    match t:
        case CVar(index):
            return str(index)
        case CZero():
            return "zero"
    return f"({print_classical(t)})"


def _capp(t: ClassicalTerm) -> str:
    match t:
        case CApp(fun, arg):
            return f"{_capp(fun)} {_catom(arg)}"
        case CSuc(body):
            return f"suc {_catom(body)}"
    return _catom(t)


def print_classical(t: ClassicalTerm) -> str:
    """Print a classical term, e.g. ``λ. λ. 1 (1 0)``."""
    if isinstance(t, CLam):
        return f"λ. {print_classical(t.body)}"
    return _capp(t)
