"""
Property suites for the substitution engine and the classical oracle.

Each law draws generated, well-typed values from its own SplitMix64
stream, checks one equation structurally, and records the first failing
instance in concrete syntax. Fusion, left identity and associativity
also report which top-level proof case each instance exercised, so the
report shows whether the generator reaches every case of those proofs.

Reports contain no timestamps: two runs with the same settings produce
byte-identical output.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-012)

TODO:
- None
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass

from pydantic import BaseModel

from kernel.src.classical import (
    classical_normalize,
    compose_parallel,
    embed,
    erase_subst,
    erase_term,
    is_well_scoped,
    psubst,
)
from kernel.src.config import KernelSettings
from kernel.src.engine import (
    beta_step,
    compose,
    force,
    identity,
    instantiate,
    normalize,
    subst0,
    subst1,
    weaken,
)
from kernel.src.errors import KernelError
from kernel.src.generator import SplitMix64, TermGenerator
from kernel.src.parser import parse_subst, parse_term
from kernel.src.printer import (
    print_ctx,
    print_subst,
    print_subst_judgement,
    print_term,
    print_term_judgement,
    print_ty,
)
from kernel.src.syntax import (
    App,
    Ctx,
    Id,
    Lam,
    Subst,
    Suc,
    SWeaken,
    Term,
    Ty,
    VarZ,
    Weaken,
    Zero,
)
from kernel.src.typecheck import TypedSubst, TypedTerm, check_subst, check_term

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Proof-case classifiers
# ---------------------------------------------------------------------------


def fusion_case(term: Term, left: Subst, right: Subst) -> int:
    """Top-level case (1-10) of ``M [ σ ] [ τ ] ≡ M [ σ ⨾ τ ]``.

    Arguments are analysed right to left: ``τ`` first, then ``σ``, and the
    term only when both substitutions are conses.
    """
    match right:
        case Id():
            return 1
        case SWeaken():
            return 2
    match left:
        case Id():
            return 3
        case SWeaken():
            return 4
    match term:
        case VarZ():
            return 5
        case Weaken():
            return 6
        case Lam():
            return 7
        case App():
            return 8
        case Zero():
            return 9
        case Suc():
            return 10
    raise TypeError(f"not an elaborated term: {term!r}")


def left_id_case(subst: Subst) -> int:
    """Top-level case (1-3) of ``id ⨾ τ ≡ τ``."""
    match subst:
        case Id():
            return 1
        case SWeaken():
            return 2
    return 3


def assoc_case(first: Subst, second: Subst, third: Subst) -> int:
    """Top-level case (1-7) of ``(σ ⨾ τ) ⨾ υ ≡ σ ⨾ (τ ⨾ υ)``."""
    match third:
        case Id():
            return 1
        case SWeaken():
            return 2
    match second:
        case Id():
            return 3
        case SWeaken():
            return 4
    match first:
        case Id():
            return 5
        case SWeaken():
            return 6
    return 7


# ---------------------------------------------------------------------------
# Report models
# ---------------------------------------------------------------------------


class LawResult(BaseModel):
    """Outcome of one law suite.

    Attributes:
        name: Law name, e.g. ``fusion``.
        cases: Instances checked.
        failures: Instances that did not hold.
        counterexample: First failing instance in concrete syntax.
        coverage: Proof case number (as a string) to hit count; empty for
            laws without a case split.
    """

    name: str
    cases: int
    failures: int
    counterexample: str | None = None
    coverage: dict[str, int] = {}


class PropsReport(BaseModel):
    """All law suites of one ``props`` run."""

    seed: int
    cases: int
    size: int
    laws: list[LawResult]

    @property
    def ok(self) -> bool:
        return all(law.failures == 0 for law in self.laws)

    def render_text(self) -> str:
        """Plain-text report, one line per law."""
        lines = [f"seed={self.seed} cases={self.cases} size={self.size}"]
        for law in self.laws:
            line = f"{law.name}: {law.cases} cases, {law.failures} failures"
            if law.coverage:
                hits = " ".join(f"{case}:{n}" for case, n in law.coverage.items())
                line += f" [coverage {hits}]"
            lines.append(line)
            if law.counterexample is not None:
                lines.append(f"  counterexample: {law.counterexample}")
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Sampling helpers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class _Outcome:
    holds: bool
    witness: str
    case: int | None = None


def _show(m: TypedTerm) -> str:
    return print_term_judgement(m.term, m.ctx, m.ty)


def _show_subst(s: TypedSubst) -> str:
    return print_subst_judgement(s.subst, s.src, s.dst)


def _term(
    gen: TermGenerator, ctx: Ctx | None = None, ty: Ty | None = None
) -> TypedTerm:
    ctx = gen.gen_ctx() if ctx is None else ctx
    ty = gen.gen_type() if ty is None else ty
    return check_term(ctx, ty, gen.gen_term(ctx, ty))


def _subst(gen: TermGenerator, src: Ctx, dst: Ctx) -> TypedSubst:
    # per-head budget
    size = max(1, gen.cfg.max_term_size // 4)
    return check_subst(src, dst, gen.gen_subst(src, dst, size))


def _recheck_term(m: TypedTerm) -> bool:
    return check_term(m.ctx, m.ty, m.term) == m


def _recheck_subst(s: TypedSubst) -> bool:
    return check_subst(s.src, s.dst, s.subst) == s


# ---------------------------------------------------------------------------
# Laws
# ---------------------------------------------------------------------------

Law = Callable[[TermGenerator, KernelSettings], _Outcome]

# name -> (check, runs at half the case count); insertion order is report order
_REGISTRY: dict[str, tuple[Law, bool]] = {}


def _law(name: str, *, half: bool = False) -> Callable[[Law], Law]:
    def register(fn: Law) -> Law:
        _REGISTRY[name] = (fn, half)
        return fn

    return register


@_law("round-trip")
def _round_trip(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    m = _term(gen)
    s = _subst(gen, gen.gen_ctx(), m.ctx)
    holds = all(
        parse_term(print_term(m.term, style)) == m.term
        and parse_subst(print_subst(s.subst, style)) == s.subst
        for style in ("ascii", "unicode")
    )
    return _Outcome(holds, f"{_show(m)} with {_show_subst(s)}")


@_law("generator-well-typed")
def _generator_well_typed(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    ctx, ty = gen.gen_ctx(), gen.gen_type()
    raw = gen.gen_term(ctx, ty)
    src, dst = gen.gen_ctx(), gen.gen_ctx()
    raw_subst = gen.gen_subst(src, dst)
    witness = (
        f"{print_ctx(ctx)} |- {print_term(raw)} : {print_ty(ty)}; "
        f"{print_subst(raw_subst)} : {print_ctx(src)} |= {print_ctx(dst)}"
    )
    try:
        check_term(ctx, ty, raw)
        check_subst(src, dst, raw_subst)
    except KernelError as exc:
        return _Outcome(False, f"{witness} ({exc})")
    return _Outcome(True, witness)


@_law("weakening-typing")
def _weakening_typing(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    m = _term(gen)
    extra = gen.gen_type(1)
    holds = check_term(m.ctx.extend(extra), m.ty, Weaken(m.term)) == weaken(m, extra)
    return _Outcome(holds, f"{_show(m)} weakened by {print_ty(extra)}")


@_law("fusion")
def _fusion(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    m = _term(gen)
    mid, src = gen.gen_ctx(), gen.gen_ctx()
    s = _subst(gen, mid, m.ctx)
    t = _subst(gen, src, mid)
    lhs = instantiate(instantiate(m, s), t)
    rhs = instantiate(m, compose(s, t))
    witness = f"{_show(m)} ; {_show_subst(s)} ; {_show_subst(t)}"
    return _Outcome(lhs == rhs, witness, fusion_case(m.term, s.subst, t.subst))


@_law("left-id")
def _left_id(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    t = _subst(gen, gen.gen_ctx(), gen.gen_ctx())
    holds = compose(identity(t.dst), t) == t
    return _Outcome(holds, _show_subst(t), left_id_case(t.subst))


@_law("right-id")
def _right_id(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    s = _subst(gen, gen.gen_ctx(), gen.gen_ctx())
    return _Outcome(compose(s, identity(s.src)) == s, _show_subst(s))


@_law("assoc")
def _assoc(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    c0, c1, c2, c3 = (gen.gen_ctx() for _ in range(4))
    s, t, u = _subst(gen, c1, c0), _subst(gen, c2, c1), _subst(gen, c3, c2)
    holds = compose(compose(s, t), u) == compose(s, compose(t, u))
    witness = f"{_show_subst(s)} ; {_show_subst(t)} ; {_show_subst(u)}"
    return _Outcome(holds, witness, assoc_case(s.subst, t.subst, u.subst))


@_law("introduction")
def _introduction(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    n = _term(gen)
    m = _term(gen, n.ctx)
    holds = subst0(weaken(n, m.ty), m) == n
    return _Outcome(holds, f"N = {_show(n)}; M = {_show(m)}")


@_law("double-subst")
def _double_subst(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    gamma = gen.gen_ctx()
    a, b = gen.gen_type(1), gen.gen_type(1)
    n = _term(gen, gamma.extend(a).extend(b))
    m = _term(gen, gamma, a)
    lv = _term(gen, gamma, b)
    lhs = subst0(subst1(n, m), lv)
    rhs = subst0(subst0(n, weaken(lv, a)), m)
    witness = f"N = {_show(n)}; M = {_show(m)}; L = {_show(lv)}"
    return _Outcome(lhs == rhs, witness)


@_law("commute-subst")
def _commute_subst(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    gamma = gen.gen_ctx()
    a, b = gen.gen_type(1), gen.gen_type(1)
    n = _term(gen, gamma.extend(a).extend(b))
    m = _term(gen, gamma.extend(a), b)
    lv = _term(gen, gamma, a)
    lhs = subst0(subst0(n, m), lv)
    rhs = subst0(subst1(n, lv), subst0(m, lv))
    witness = f"N = {_show(n)}; M = {_show(m)}; L = {_show(lv)}"
    return _Outcome(lhs == rhs, witness)


@_law("erasure-homomorphism")
def _erasure_homomorphism(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    m = _term(gen)
    s = _subst(gen, gen.gen_ctx(), m.ctx)
    lhs = erase_term(instantiate(m, s))
    rhs = psubst(erase_term(m), erase_subst(s))
    return _Outcome(lhs == rhs, f"{_show(m)} with {_show_subst(s)}")


@_law("composition-denotation")
def _composition_denotation(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    c0, c1, c2 = (gen.gen_ctx() for _ in range(3))
    s, t = _subst(gen, c1, c0), _subst(gen, c2, c1)
    lhs = erase_subst(compose(s, t))
    rhs = compose_parallel(erase_subst(s), erase_subst(t))
    return _Outcome(lhs == rhs, f"{_show_subst(s)} ; {_show_subst(t)}")


@_law("embed-section")
def _embed_section(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    m = _term(gen)
    erased = erase_term(m)
    holds = erase_term(embed(erased, m.ctx, m.ty)) == erased
    return _Outcome(holds, _show(m))


@_law("canonical-idempotence")
def _canonical_idempotence(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    m = _term(gen)
    canonical = embed(erase_term(m), m.ctx, m.ty)
    holds = embed(erase_term(canonical), m.ctx, m.ty) == canonical
    return _Outcome(holds, _show(m))


@_law("force-semantics")
def _force_semantics(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    m = _term(gen)
    return _Outcome(erase_term(force(m)) == erase_term(m), _show(m))


@_law("scope-preservation")
def _scope_preservation(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    m = _term(gen)
    return _Outcome(is_well_scoped(erase_term(m), len(m.ctx)), _show(m))


@_law("type-preservation")
def _type_preservation(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    m = _term(gen)
    mid, src = gen.gen_ctx(), gen.gen_ctx()
    s = _subst(gen, mid, m.ctx)
    t = _subst(gen, src, mid)
    results = [instantiate(m, s), force(m), normalize(m, settings.step_limit)]
    stepped = beta_step(m)
    if stepped is not None:
        results.append(stepped[0])
    arg = _term(gen, m.ctx, gen.gen_type(1))
    results.append(subst0(weaken(m, arg.ty), arg))
    if len(m.ctx) >= 2:
        under = m.ctx.pop()
        results.append(subst1(m, _term(gen, under.pop(), under.last)))
    holds = all(_recheck_term(r) for r in results) and _recheck_subst(compose(s, t))
    return _Outcome(holds, f"{_show(m)} with {_show_subst(s)} ; {_show_subst(t)}")


@_law("evaluation-agreement", half=True)
def _evaluation_agreement(gen: TermGenerator, settings: KernelSettings) -> _Outcome:
    m = _term(gen)
    lhs = erase_term(normalize(m, settings.step_limit))
    rhs = classical_normalize(erase_term(m), settings.step_limit)
    return _Outcome(lhs == rhs, _show(m))


LAW_NAMES = tuple(_REGISTRY)


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


def run_law(name: str, settings: KernelSettings) -> LawResult:
    """Run one law on its own seeded stream.

    Each law's stream is derived from ``settings.seed`` and the law's
    position, so adding cases to one law never shifts another. Domain
    errors raised while checking an instance count as failures.

    Raises:
        KeyError: ``name`` is not a known law.
    """
    law, half = _REGISTRY[name]
    cases = max(1, settings.cases // 2) if half else settings.cases
    index = LAW_NAMES.index(name)
    seed = (settings.seed + index * SplitMix64.GAMMA) % 2**64
    gen = TermGenerator(settings.gen_config(seed))
    failures = 0
    counterexample: str | None = None
    coverage: Counter[int] = Counter()
    for _ in range(cases):
        try:
            outcome = law(gen, settings)
        except KernelError as exc:
            outcome = _Outcome(False, f"{type(exc).__name__}: {exc}")
        if outcome.case is not None:
            coverage[outcome.case] += 1
        if not outcome.holds:
            failures += 1
            if counterexample is None:
                counterexample = outcome.witness
    logger.info(
        "Law %s: %d cases, %d failures",
        name,
        cases,
        failures,
        extra={"law": name, "cases": cases, "failures": failures, "seed": seed},
    )
    return LawResult(
        name=name,
        cases=cases,
        failures=failures,
        counterexample=counterexample,
        coverage={str(case): coverage[case] for case in sorted(coverage)},
    )


def run_props(settings: KernelSettings, only: list[str] | None = None) -> PropsReport:
    """Run every law suite (or the named subset) and collect a report.

    Raises:
        ValueError: ``only`` names an unknown law.
    """
    if only:
        unknown = sorted(set(only) - set(LAW_NAMES))
        if unknown:
            raise ValueError(f"unknown laws: {', '.join(unknown)}")
    selected = [name for name in LAW_NAMES if not only or name in only]
    results = [run_law(name, settings) for name in selected]
    return PropsReport(
        seed=settings.seed, cases=settings.cases, size=settings.size, laws=results
    )
