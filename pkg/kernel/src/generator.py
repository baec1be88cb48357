"""
Seeded, type-directed generation of well-typed terms and substitutions.

The random source is SplitMix64, so a given ``GenConfig`` yields the same
values on every platform and every run. Term generation is driven by the
expected type and context; every constructor of the calculus can appear,
including weakening wrapped around lambdas and applications.

Sizes are node budgets. When the requested budget is smaller than the
smallest inhabitant of the requested type, the budget is raised to that
minimum; only when the minimum exceeds ``max_term_size`` does generation
give up with ``Unsatisfiable``.

An application whose head is a lambda (possibly under weakenings) gets an
annotation on the head so that it stays synthesisable; annotations are
elaborated away by the checker and do not count against the budget.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-010)

TODO:
- None
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from functools import lru_cache
from typing import Literal, TypeVar

from pydantic import BaseModel, ConfigDict, field_validator

from kernel.src.errors import Unsatisfiable
from kernel.src.printer import print_ctx, print_ty
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
    Nat,
    SCons,
    Subst,
    Suc,
    SWeaken,
    Term,
    Ty,
    Weaken,
    var,
)

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1
_T = TypeVar("_T")


class SplitMix64:
    """SplitMix64 pseudo-random generator (Steele, Lea and Flood mixing)."""

    GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + self.GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform-ish integer in ``[0, bound)``."""
        if bound < 1:
            raise ValueError(f"bound must be >= 1 (got {bound})")
        return self.next_u64() % bound

    def chance(self, probability: float) -> bool:
        """True with the given probability (53-bit resolution)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53)) < probability

    def choice(self, options: Sequence[_T]) -> _T:
        return options[self.below(len(options))]


class GenConfig(BaseModel):
    """Generator parameters.

    Attributes:
        seed: 64-bit seed for SplitMix64.
        max_term_size: Hard upper bound on node count of a generated term.
        max_ctx_len: Longest context produced by ``gen_ctx``.
        max_ty_depth: Arrow nesting bound for ``gen_type``.
        weaken_bias: Probability of wrapping a subterm in ``↑`` whenever
            the context is nonempty.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = 0
    max_term_size: int = 40
    max_ctx_len: int = 5
    max_ty_depth: int = 3
    weaken_bias: float = 0.3

    @field_validator("seed")
    @classmethod
    def seed_must_fit_64_bits(cls, v: int) -> int:
        """Validate the seed fits the SplitMix64 state."""
        if not 0 <= v <= _MASK64:
            raise ValueError("seed must be in [0, 2**64)")
        return v

    @field_validator("max_term_size")
    @classmethod
    def size_must_be_positive(cls, v: int) -> int:
        """Validate the term size bound is at least 1."""
        if v < 1:
            raise ValueError("max_term_size must be >= 1")
        return v

    @field_validator("max_ctx_len", "max_ty_depth")
    @classmethod
    def bound_must_be_non_negative(cls, v: int) -> int:
        """Validate context length and type depth bounds are not negative."""
        if v < 0:
            raise ValueError("bounds must be >= 0")
        return v

    @field_validator("weaken_bias")
    @classmethod
    def bias_must_be_probability(cls, v: float) -> float:
        """Validate weaken_bias is in [0, 1]."""
        if not 0.0 <= v <= 1.0:
            raise ValueError("weaken_bias must be in [0, 1]")
        return v


# ---------------------------------------------------------------------------
# Smallest inhabitants
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _min_size(ctx: Ctx, ty: Ty) -> int:
    """Node count of the smallest term of ``ty`` over ``ctx``.

    Every type is inhabited: ``ℕ`` by ``zero`` and an arrow by a lambda.
    """
    sizes = []
    if ty in ctx.entries:
        sizes.append(ctx.entries[::-1].index(ty) + 1)
    match ty:
        case Nat():
            sizes.append(1)
        case Arrow(domain, codomain):
            sizes.append(1 + _min_size(ctx.extend(domain), codomain))
    return min(sizes)


def _minimal(ctx: Ctx, ty: Ty) -> Term:
    target = _min_size(ctx, ty)
    if ty in ctx.entries and ctx.entries[::-1].index(ty) + 1 == target:
        return var(target - 1)
    match ty:
        case Nat():
            return ZERO
        case Arrow(domain, codomain):
            return Lam(_minimal(ctx.extend(domain), codomain))
    raise TypeError(f"not a type: {ty!r}")


# ---------------------------------------------------------------------------
# Generator
# ---------------------------------------------------------------------------

def _synthesisable(term: Term) -> bool:
    while isinstance(term, Weaken):
        term = term.body
    return not isinstance(term, Lam)


_TermShape = Literal["var", "zero", "suc", "lam", "app"]


class TermGenerator:
    """Stateful generator; successive calls draw from one random stream."""

    def __init__(self, cfg: GenConfig) -> None:
        self.cfg = cfg
        self.rng = SplitMix64(cfg.seed)

    # -- types and contexts -------------------------------------------------

    def gen_type(self, depth: int = 0) -> Ty:
        """``ℕ`` at the depth limit, otherwise ``ℕ`` or an arrow by coin flip."""
        if depth >= self.cfg.max_ty_depth or self.rng.chance(0.5):
            return NAT
        return Arrow(self.gen_type(depth + 1), self.gen_type(depth + 1))

    def gen_ctx(self) -> Ctx:
        length = self.rng.below(self.cfg.max_ctx_len + 1)
        return Ctx(tuple(self.gen_type(1) for _ in range(length)))

    # -- terms --------------------------------------------------------------

    def gen_term(self, ctx: Ctx, ty: Ty, size: int | None = None) -> Term:
        """Generate a term of ``ty`` over ``ctx`` within ``size`` nodes.

        Raises:
            Unsatisfiable: the smallest inhabitant exceeds ``max_term_size``.
        """
        budget = self.cfg.max_term_size if size is None else size
        if budget < 1:
            raise ValueError(f"size must be >= 1 (got {budget})")
        floor = _min_size(ctx, ty)
        if floor > self.cfg.max_term_size:
            raise Unsatisfiable(print_ctx(ctx), print_ty(ty), self.cfg.max_term_size)
        if budget < floor:
            logger.debug(
                "Raised term budget to the smallest inhabitant",
                extra={"requested": budget, "size": floor},
            )
        return self._term(ctx, ty, max(budget, floor))

    def _term(self, ctx: Ctx, ty: Ty, size: int) -> Term:
        if size <= _min_size(ctx, ty):
            return _minimal(ctx, ty)
        if ctx and self.rng.chance(self.cfg.weaken_bias):
            inner = ctx.pop()
            if _min_size(inner, ty) <= size - 1:
                return Weaken(self._term(inner, ty, size - 1))
        shapes: list[_TermShape] = []
        if ctx and ctx.last == ty:
            shapes.append("var")
        match ty:
            case Nat():
                shapes.extend(("zero", "suc"))
            case Arrow(domain, codomain):
                if _min_size(ctx.extend(domain), codomain) <= size - 1:
                    shapes.append("lam")
        if size >= 3:
            shapes.append("app")
        while shapes:
            shape = self.rng.choice(shapes)
            term = self._shape(shape, ctx, ty, size)
            if term is not None:
                return term
            shapes.remove(shape)
        return _minimal(ctx, ty)

    def _shape(self, shape: _TermShape, ctx: Ctx, ty: Ty, size: int) -> Term | None:
        match shape:
            case "var":
                return VARZ
            case "zero":
                return ZERO
            case "suc":
                return Suc(self._term(ctx, NAT, size - 1))
            case "lam":
                assert isinstance(ty, Arrow)
                return Lam(self._term(ctx.extend(ty.domain), ty.codomain, size - 1))
        arg_ty = self.gen_type(max(self.cfg.max_ty_depth - 1, 0))
        fun_ty = Arrow(arg_ty, ty)
        fun_floor = _min_size(ctx, fun_ty)
        arg_floor = _min_size(ctx, arg_ty)
        spare = size - 1 - fun_floor - arg_floor
        if spare < 0:
            return None
        fun_size = fun_floor + self.rng.below(spare + 1)
        arg_size = size - 1 - fun_size
        fun = self._term(ctx, fun_ty, fun_size)
        if not _synthesisable(fun):
            fun = Ann(fun, fun_ty)
        return App(fun, self._term(ctx, arg_ty, arg_size))

    # -- substitutions ------------------------------------------------------

    def gen_subst(self, src: Ctx, dst: Ctx, size: int | None = None) -> Subst:
        """Generate ``σ : src ⊨ dst``; each cons head gets at most ``size`` nodes."""
        budget = self.cfg.max_term_size if size is None else size
        if budget < 1:
            raise ValueError(f"size must be >= 1 (got {budget})")
        return self._subst(src, dst, budget)

    def _subst(self, src: Ctx, dst: Ctx, size: int) -> Subst:
        shapes: list[Literal["id", "weaken", "cons"]] = []
        if src == dst:
            shapes.append("id")
        if src:
            shapes.append("weaken")
        if dst:
            shapes.append("cons")
        match self.rng.choice(shapes):
            case "id":
                return ID
            case "weaken":
                return SWeaken(self._subst(src.pop(), dst, size))
        head_size = 1 + self.rng.below(size)
        head = self.gen_term(src, dst.last, head_size)
        return SCons(self._subst(src, dst.pop(), size), head)


# ---------------------------------------------------------------------------
# One-shot helpers
# ---------------------------------------------------------------------------


def gen_type(cfg: GenConfig, depth: int = 0) -> Ty:
    """Generate one type from a fresh stream seeded by ``cfg.seed``."""
    return TermGenerator(cfg).gen_type(depth)


def gen_term(cfg: GenConfig, ctx: Ctx, ty: Ty, size: int | None = None) -> Term:
    """Generate one term from a fresh stream seeded by ``cfg.seed``."""
    return TermGenerator(cfg).gen_term(ctx, ty, size)


def gen_subst(cfg: GenConfig, src: Ctx, dst: Ctx, size: int | None = None) -> Subst:
    """Generate one substitution from a fresh stream seeded by ``cfg.seed``."""
    return TermGenerator(cfg).gen_subst(src, dst, size)
