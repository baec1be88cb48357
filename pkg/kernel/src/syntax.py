"""
Abstract syntax of the explicit-weakening calculus.

Types, contexts, terms and substitutions as immutable dataclasses.
Equality is structural (dataclass ``__eq__``), which is exactly the
notion of equality the law suites check.

Contexts grow to the right: the rightmost entry is de Bruijn index zero,
so ``Ctx((A, B))`` is the context written ``∅ ▷ A ▷ B`` where ``B`` is
the innermost variable.

Raw terms may additionally carry ``Ann`` nodes (the concrete ``(M : T)``
form). The typechecker strips them, so sealed values never contain one.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-001)

TODO:
- None
"""

from __future__ import annotations

from dataclasses import dataclass

# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Nat:
    """The natural-number base type."""


@dataclass(frozen=True, slots=True)
class Arrow:
    """Function type ``domain -> codomain``."""

    domain: Ty
    codomain: Ty


Ty = Nat | Arrow

NAT = Nat()


def arrow(*tys: Ty) -> Ty:
    """Build a right-nested arrow: ``arrow(A, B, C)`` is ``A -> B -> C``."""
    if not tys:
        raise ValueError("arrow() needs at least one type")
    result = tys[-1]
    for ty in reversed(tys[:-1]):
        result = Arrow(ty, result)
    return result


def type_depth(ty: Ty) -> int:
    """Nesting depth of arrows (``N`` has depth 0)."""
    match ty:
        case Arrow(domain, codomain):
            return 1 + max(type_depth(domain), type_depth(codomain))
        case _:
            return 0


# ---------------------------------------------------------------------------
# Contexts
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Ctx:
    """A context: a finite sequence of types, rightmost is index zero.

    Attributes:
        entries: The types, outermost first.
    """

    entries: tuple[Ty, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def extend(self, ty: Ty) -> Ctx:
        """Return ``self ▷ ty``."""
        return Ctx((*self.entries, ty))

    def pop(self) -> Ctx:
        """Return the context without its rightmost entry."""
        if not self.entries:
            raise IndexError("pop from the empty context")
        return Ctx(self.entries[:-1])

    @property
    def last(self) -> Ty:
        """The type of de Bruijn index zero."""
        if not self.entries:
            raise IndexError("the empty context has no index zero")
        return self.entries[-1]

    def lookup(self, index: int) -> Ty:
        """The type of de Bruijn index ``index`` (0 is rightmost)."""
        if index < 0 or index >= len(self.entries):
            raise IndexError(f"index {index} outside a context of length {len(self)}")
        return self.entries[-1 - index]


EMPTY = Ctx()


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class VarZ:
    """De Bruijn variable zero (``●``)."""


@dataclass(frozen=True, slots=True)
class Weaken:
    """Explicit weakening ``M ↑``; applies to any term, not just variables."""

    body: Term


@dataclass(frozen=True, slots=True)
class Lam:
    """Lambda abstraction ``ƛ N``; the domain type is not recorded."""

    body: Term


@dataclass(frozen=True, slots=True)
class App:
    """Application ``L · M``."""

    fun: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Zero:
    """The numeral ``zero``."""


@dataclass(frozen=True, slots=True)
class Suc:
    """Successor ``suc M``."""

    body: Term


@dataclass(frozen=True, slots=True)
class Ann:
    """Source annotation ``(M : T)``; only ever present in raw input."""

    term: Term
    ty: Ty


Term = VarZ | Weaken | Lam | App | Zero | Suc | Ann

VARZ = VarZ()
ZERO = Zero()


def var(index: int) -> Term:
    """De Bruijn index ``index`` as ``●`` under ``index`` weakenings."""
    if index < 0:
        raise ValueError("de Bruijn indices are non-negative")
    term: Term = VARZ
    for _ in range(index):
        term = Weaken(term)
    return term


def spine_index(term: Term) -> int | None:
    """Index of a variable spine (``●`` under k weakenings), else ``None``."""
    depth = 0
    while isinstance(term, Weaken):
        depth += 1
        term = term.body
    return depth if isinstance(term, VarZ) else None


def term_size(term: Term) -> int:
    """Number of AST nodes in ``term``."""
    match term:
        case Weaken(body) | Lam(body) | Suc(body):
            return 1 + term_size(body)
        case App(fun, arg):
            return 1 + term_size(fun) + term_size(arg)
        case Ann(inner, _):
            return 1 + term_size(inner)
        case _:
            return 1


# ---------------------------------------------------------------------------
# Substitutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Id:
    """The identity substitution ``id : Δ ⊨ Δ``."""


@dataclass(frozen=True, slots=True)
class SWeaken:
    """Weakening of a substitution ``σ ↑ : Γ ▷ A ⊨ Δ``."""

    body: Subst


@dataclass(frozen=True, slots=True)
class SCons:
    """Cons ``σ ▷ P``: index zero goes to ``head``, index n+1 to σ's image of n."""

    tail: Subst
    head: Term


Subst = Id | SWeaken | SCons

ID = Id()
