"""
Substitution engine: instantiation, composition, beta reduction.

Instantiation ``M [ σ ]`` and composition ``σ ⨾ τ`` are computed
eagerly at the meta level. Both analyse their right argument first: the
substitution for instantiation (clauses 1-2 never look at the term) and
``τ`` for composition. Only a cons triggers analysis of the other side.
The clause numbering below is the one used in trace labels.

Instantiation::

    (1)  M [ id ]               = M
    (2)  M [ σ ↑ ]              = (M [ σ ]) ↑
    (3)  ● [ σ ▷ P ]            = P
    (4)  (M ↑) [ σ ▷ P ]        = M [ σ ]
    (5)  (ƛ N) [ σ @ △ ]        = ƛ (N [ σ ↑ ▷ ● ])
    (6)  (L · M) [ σ @ △ ]      = L [ σ ] · M [ σ ]
    (7)  zero [ σ @ △ ]         = zero
    (8)  (suc M) [ σ @ △ ]      = suc (M [ σ ])

Composition::

    (1)  σ ⨾ id                 = σ
    (2)  σ ⨾ (τ ↑)              = (σ ⨾ τ) ↑
    (3)  id ⨾ (τ @ △)           = τ
    (4)  (σ ↑) ⨾ (τ ▷ Q)        = σ ⨾ τ
    (5)  (σ ▷ P) ⨾ (τ @ △)      = (σ ⨾ τ) ▷ (P [ τ ])

Beta reduction contracts ``(ƛ N) · M`` to ``N [ id ▷ M ]`` on the
*forced* view of a term, where a top-level weakening is pushed one level
inwards to expose the head constructor.

The clauses operate on annotation-free terms. Typed operations strip the
annotations of their inputs first and reseal their results in canonical
annotated form, so traces show the bare clause steps.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-005)
- 2026-10-19: Composition tracing and fused instantiation chains (STORY-006)
- 2026-10-19: force / beta_step / normalize (STORY-007)
- 2026-10-19: Clauses run on annotation-free payloads; results are resealed (STORY-014)

TODO:
- None
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from typing import Literal

from pydantic import BaseModel, ConfigDict

from kernel.src.annotate import strip_subst, strip_term
from kernel.src.classical import embed, erase_raw
from kernel.src.errors import ContextMismatch, StepLimit
from kernel.src.printer import print_ctx, print_subst, print_term
from kernel.src.syntax import (
    ID,
    VARZ,
    ZERO,
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
)
from kernel.src.typecheck import (
    TypedSubst,
    TypedTerm,
    reconstruct_subst,
    reconstruct_term,
)

logger = logging.getLogger(__name__)

DEFAULT_STEP_LIMIT = 1_000_000

TraceRule = Literal[
    "inst-1",
    "inst-2",
    "inst-3",
    "inst-4",
    "inst-5",
    "inst-6",
    "inst-7",
    "inst-8",
    "comp-1",
    "comp-2",
    "comp-3",
    "comp-4",
    "comp-5",
    "beta",
    "force-lam",
    "force-app",
    "force-suc",
    "force-zero",
]


class TraceStep(BaseModel):
    """One clause application, serialised as a JSON line.

    Attributes:
        rule: Clause label, e.g. ``inst-5`` or ``comp-3``.
        before: The redex in printer syntax (``M [ σ ]``, ``σ ; τ``, ...).
        after: The clause's right-hand side; pending instantiations are
            shown in ``[ ]`` brackets.
    """

    model_config = ConfigDict(frozen=True)

    rule: TraceRule
    before: str
    after: str


TraceSink = Callable[[TraceStep], None]


# ---------------------------------------------------------------------------
# Trace rendering
# ---------------------------------------------------------------------------


def _term_text(term: Term) -> str:
    text = print_term(term)
    return f"({text})" if isinstance(term, Lam | App | Suc) else text


def _subst_text(subst: Subst) -> str:
    text = print_subst(subst)
    return f"({text})" if isinstance(subst, SCons) else text


def _inst_text(term: Term, subst: Subst) -> str:
    return f"{_term_text(term)} [ {print_subst(subst)} ]"


def _comp_text(left: Subst, right: Subst) -> str:
    return f"{_subst_text(left)} ; {_subst_text(right)}"


def _emit(sink: TraceSink, rule: TraceRule, before: str, after: str) -> None:
    sink(TraceStep(rule=rule, before=before, after=after))


# ---------------------------------------------------------------------------
# Raw instantiation and composition
# ---------------------------------------------------------------------------


def _inst(term: Term, subst: Subst, sink: TraceSink | None) -> Term:
    """``term [ subst ]``, substitution analysed first."""
    match subst:
        case Id():
            if sink is not None:
                _emit(sink, "inst-1", _inst_text(term, subst), print_term(term))
            return term
        case SWeaken(inner):
            if sink is not None:
                after = f"({_inst_text(term, inner)})^"
                _emit(sink, "inst-2", _inst_text(term, subst), after)
            return Weaken(_inst(term, inner, sink))
        case SCons(tail, head):
            return _inst_cons(term, subst, tail, head, sink)
    raise TypeError(f"not a substitution: {subst!r}")


def _inst_cons(
    term: Term, subst: SCons, tail: Subst, head: Term, sink: TraceSink | None
) -> Term:
    match term:
        case VarZ():
            if sink is not None:
                _emit(sink, "inst-3", _inst_text(term, subst), print_term(head))
            return head
        case Weaken(inner):
            if sink is not None:
                _emit(sink, "inst-4", _inst_text(term, subst), _inst_text(inner, tail))
            return _inst(inner, tail, sink)
        case Lam(body):
            lifted = SCons(SWeaken(subst), VARZ)
            if sink is not None:
                after = f"\\ ({_inst_text(body, lifted)})"
                _emit(sink, "inst-5", _inst_text(term, subst), after)
            return Lam(_inst(body, lifted, sink))
        case App(fun, arg):
            if sink is not None:
                _emit(
                    sink,
                    "inst-6",
                    _inst_text(term, subst),
                    f"({_inst_text(fun, subst)}) ({_inst_text(arg, subst)})",
                )
            return App(_inst(fun, subst, sink), _inst(arg, subst, sink))
        case Zero():
            if sink is not None:
                _emit(sink, "inst-7", _inst_text(term, subst), "zero")
            return ZERO
        case Suc(body):
            if sink is not None:
                after = f"suc ({_inst_text(body, subst)})"
                _emit(sink, "inst-8", _inst_text(term, subst), after)
            return Suc(_inst(body, subst, sink))
    raise TypeError(f"cannot instantiate {term!r}; elaborate annotations first")


def _comp(left: Subst, right: Subst, sink: TraceSink | None) -> Subst:
    """``left ⨾ right``, right argument analysed first."""
    match right:
        case Id():
            if sink is not None:
                _emit(sink, "comp-1", _comp_text(left, right), print_subst(left))
            return left
        case SWeaken(inner):
            if sink is not None:
                after = f"({_comp_text(left, inner)})^"
                _emit(sink, "comp-2", _comp_text(left, right), after)
            return SWeaken(_comp(left, inner, sink))
        case SCons(right_tail, _):
            match left:
                case Id():
                    if sink is not None:
                        before = _comp_text(left, right)
                        _emit(sink, "comp-3", before, print_subst(right))
                    return right
                case SWeaken(inner):
                    if sink is not None:
                        _emit(
                            sink,
                            "comp-4",
                            _comp_text(left, right),
                            _comp_text(inner, right_tail),
                        )
                    return _comp(inner, right_tail, sink)
                case SCons(left_tail, head):
                    if sink is not None:
                        _emit(
                            sink,
                            "comp-5",
                            _comp_text(left, right),
                            f"({_comp_text(left_tail, right)}) , "
                            f"{_inst_text(head, right)}",
                        )
                    tail = _comp(left_tail, right, sink)
                    return SCons(tail, _inst(head, right, sink))
    raise TypeError(f"cannot compose {left!r} with {right!r}")


# ---------------------------------------------------------------------------
# Typed operations
# ---------------------------------------------------------------------------


def instantiate(
    m: TypedTerm, s: TypedSubst, trace: TraceSink | None = None
) -> TypedTerm:
    """Instantiate ``m : Δ ⊢ A`` with ``s : Γ ⊨ Δ``, giving ``Γ ⊢ A``.

    Args:
        m: Sealed term over ``s.dst``.
        s: Sealed substitution.
        trace: Optional sink receiving one ``TraceStep`` per clause, in
            application order.

    Raises:
        ContextMismatch: ``m.ctx`` differs from ``s.dst``.
    """
    if m.ctx != s.dst:
        raise ContextMismatch(print_ctx(s.dst), print_ctx(m.ctx))
    term = _inst(strip_term(m.term), strip_subst(s.subst), trace)
    return reconstruct_term(s.src, m.ty, term)


def compose(
    s: TypedSubst, t: TypedSubst, trace: TraceSink | None = None
) -> TypedSubst:
    """Compose ``s : Θ ⊨ Δ`` with ``t : Γ ⊨ Θ``, giving ``Γ ⊨ Δ``.

    ``M [ s ⨾ t ]`` equals ``M [ s ] [ t ]`` structurally.

    Raises:
        ContextMismatch: ``s.src`` differs from ``t.dst``.
    """
    if s.src != t.dst:
        raise ContextMismatch(print_ctx(s.src), print_ctx(t.dst))
    subst = _comp(strip_subst(s.subst), strip_subst(t.subst), trace)
    return reconstruct_subst(t.src, s.dst, subst)


def instantiate_chain(
    m: TypedTerm,
    chain: Sequence[TypedSubst],
    *,
    fuse: bool = False,
    trace: TraceSink | None = None,
) -> TypedTerm:
    """Evaluate ``m [ σ1 ] [ σ2 ] … [ σn ]``.

    With ``fuse`` the chain is first folded into ``σ1 ⨾ σ2 ⨾ … ⨾ σn`` and
    a single instantiation is performed.
    """
    if not chain:
        return m
    if not fuse:
        for s in chain:
            m = instantiate(m, s, trace)
        return m
    fused = chain[0]
    for s in chain[1:]:
        fused = compose(fused, s, trace)
    return instantiate(m, fused, trace)


def instantiate_raw(
    term: Term,
    chain: Sequence[Subst],
    *,
    fuse: bool = False,
    trace: TraceSink | None = None,
) -> Term:
    """Run the instantiation clauses on unchecked syntax.

    No clause consults a type, so this is defined for every term and chain.
    Annotations are dropped first; the result is not sealed.
    """
    term = strip_term(term)
    substs = [strip_subst(s) for s in chain]
    if fuse and substs:
        fused = substs[0]
        for s in substs[1:]:
            fused = _comp(fused, s, trace)
        substs = [fused]
    for s in substs:
        term = _inst(term, s, trace)
    return term


def identity(ctx: Ctx) -> TypedSubst:
    """``id : ctx ⊨ ctx``."""
    return TypedSubst(ID, ctx, ctx)


def weaken(m: TypedTerm, ty: Ty) -> TypedTerm:
    """``m ↑`` over ``m.ctx ▷ ty``."""
    return TypedTerm(Weaken(m.term), m.ctx.extend(ty), m.ty)


def weaken_subst(s: TypedSubst, ty: Ty) -> TypedSubst:
    """``s ↑ : s.src ▷ ty ⊨ s.dst``."""
    return TypedSubst(SWeaken(s.subst), s.src.extend(ty), s.dst)


def cons(s: TypedSubst, m: TypedTerm) -> TypedSubst:
    """``s ▷ m : s.src ⊨ s.dst ▷ m.ty``.

    Raises:
        ContextMismatch: ``m`` does not live over ``s.src``.
    """
    if m.ctx != s.src:
        raise ContextMismatch(print_ctx(s.src), print_ctx(m.ctx))
    return TypedSubst(SCons(s.subst, m.term), s.src, s.dst.extend(m.ty))


def subst0(n: TypedTerm, m: TypedTerm) -> TypedTerm:
    """``n [ m ]₀ = n [ id ▷ m ]``: substitute for de Bruijn index zero.

    Raises:
        ContextMismatch: ``n.ctx`` is not ``m.ctx ▷ m.ty``.
    """
    expected = m.ctx.extend(m.ty)
    if n.ctx != expected:
        raise ContextMismatch(print_ctx(expected), print_ctx(n.ctx))
    term = _inst(strip_term(n.term), SCons(ID, strip_term(m.term)), None)
    return reconstruct_term(m.ctx, n.ty, term)


def subst1(n: TypedTerm, m: TypedTerm) -> TypedTerm:
    """``n [ m ]₁ = n [ (id ▷ m) ↑ ▷ ● ]``: substitute for index one.

    ``n`` lives over ``Γ ▷ A ▷ B`` and ``m`` over ``Γ`` at ``A``; the
    result lives over ``Γ ▷ B``.

    Raises:
        ContextMismatch: the contexts do not line up as described.
    """
    if len(n.ctx) < 2 or n.ctx.pop() != m.ctx.extend(m.ty):
        raise ContextMismatch(
            f"{print_ctx(m.ctx.extend(m.ty))} extended by one entry",
            print_ctx(n.ctx),
        )
    lifted = SCons(SWeaken(SCons(ID, strip_term(m.term))), VARZ)
    term = _inst(strip_term(n.term), lifted, None)
    return reconstruct_term(m.ctx.extend(n.ctx.last), n.ty, term)


# ---------------------------------------------------------------------------
# Forcing and beta reduction
# ---------------------------------------------------------------------------

# id ↑ ↑ ▷ ● : Γ ▷ C ▷ A ⊨ Γ ▷ A, pushes a weakening under one binder.
_UNDER_BINDER = SCons(SWeaken(SWeaken(ID)), VARZ)


def _force(term: Term, sink: TraceSink | None) -> Term:
    """Distribute a top-level weakening one level inwards.

    Variable spines are returned unchanged; any other result has a
    non-weakening head constructor.
    """
    if not isinstance(term, Weaken):
        return term
    inner = _force(term.body, sink)
    rule: TraceRule
    match inner:
        case VarZ() | Weaken():
            return Weaken(inner)
        case Lam(body):
            rule, result = "force-lam", Lam(_inst(body, _UNDER_BINDER, None))
        case App(fun, arg):
            rule, result = "force-app", App(Weaken(fun), Weaken(arg))
        case Zero():
            rule, result = "force-zero", ZERO
        case Suc(body):
            rule, result = "force-suc", Suc(Weaken(body))
        case _:
            raise TypeError(f"cannot force {inner!r}")
    if sink is not None:
        _emit(sink, rule, print_term(Weaken(inner)), print_term(result))
    return result


def force(m: TypedTerm, trace: TraceSink | None = None) -> TypedTerm:
    """Expose the head constructor of ``m`` by pushing ``↑`` one level in.

    The classical erasure of the result equals that of ``m``.
    """
    return reconstruct_term(m.ctx, m.ty, _force(strip_term(m.term), trace))


def _step(term: Term, sink: TraceSink | None) -> Term | None:
    """Contract the leftmost-outermost redex of the forced view."""
    term = _force(term, sink)
    match term:
        case App(fun, arg):
            head = _force(fun, sink)
            if isinstance(head, Lam):
                return _inst(head.body, SCons(ID, arg), None)
            reduced = _step(head, sink)
            if reduced is not None:
                return App(reduced, arg)
            reduced = _step(arg, sink)
            if reduced is not None:
                return App(head, reduced)
            return None
        case Lam(body):
            reduced = _step(body, sink)
            return None if reduced is None else Lam(reduced)
        case Suc(body):
            reduced = _step(body, sink)
            return None if reduced is None else Suc(reduced)
    return None


def _beta(term: Term, sink: TraceSink | None) -> tuple[Term, TraceStep] | None:
    reduced = _step(term, sink)
    if reduced is None:
        return None
    step = TraceStep(rule="beta", before=print_term(term), after=print_term(reduced))
    if sink is not None:
        sink(step)
    return reduced, step


def beta_step(
    m: TypedTerm, trace: TraceSink | None = None
) -> tuple[TypedTerm, TraceStep] | None:
    """Perform one leftmost-outermost beta step.

    Returns:
        The reduct with its ``beta`` trace step, or ``None`` when ``m`` is
        beta-normal.
    """
    result = _beta(strip_term(m.term), trace)
    if result is None:
        return None
    reduced, step = result
    return reconstruct_term(m.ctx, m.ty, reduced), step


def normalize(
    m: TypedTerm,
    step_limit: int = DEFAULT_STEP_LIMIT,
    trace: TraceSink | None = None,
) -> TypedTerm:
    """Reduce ``m`` to beta-normal form and canonicalise its weakenings.

    The result is ``embed(erase(nf))``, so semantically equal normal forms
    are structurally equal.

    Raises:
        ValueError: ``step_limit`` is not positive.
        StepLimit: more than ``step_limit`` contractions were needed.
    """
    if step_limit < 1:
        raise ValueError("step_limit must be >= 1")
    current = strip_term(m.term)
    steps = 0
    while (result := _beta(current, trace)) is not None:
        steps += 1
        if steps > step_limit:
            raise StepLimit(step_limit)
        current = result[0]
    logger.debug("Normalised in %d beta steps", steps, extra={"steps": steps})
    return embed(erase_raw(current), m.ctx, m.ty)
