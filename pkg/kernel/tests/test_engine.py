"""
Unit tests for the substitution engine (STORY-005, STORY-006, STORY-007).

Tests verify:
- Instantiation follows the eight clauses, substitution first.
- Composition follows the five clauses, right argument first.
- The worked instantiation of ``two``'s body reproduces its clause labels.
- subst0 / subst1 and the smart constructors keep contexts aligned.
- force / beta_step / normalize reach canonical normal forms.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-005)
- 2026-10-19: Composition tracing and fused chains (STORY-006)
- 2026-10-19: Forcing and normalisation (STORY-007)

TODO:
- None
"""

import json
from collections.abc import Callable
from typing import Any

import pytest
from kernel.src.annotate import strip_term
from kernel.src.engine import (
    TraceStep,
    beta_step,
    compose,
    cons,
    force,
    identity,
    instantiate,
    instantiate_chain,
    normalize,
    subst0,
    subst1,
    weaken,
    weaken_subst,
)
from kernel.src.errors import ContextMismatch, StepLimit
from kernel.src.parser import parse_ctx, parse_term
from kernel.src.printer import print_subst, print_term
from kernel.src.syntax import NAT, Ctx, arrow
from kernel.src.typecheck import TypedSubst, TypedTerm

SealTerm = Callable[..., TypedTerm]
SealSubst = Callable[..., TypedSubst]

TWO_INC = "(\\ (\\ (#^ (#^ #))) : (N -> N) -> N -> N) (\\ suc #)"
ANNOTATED_RESULT = "\\ ((\\ suc # : N -> N)^ ((\\ suc # : N -> N)^ #))"


def _recorder() -> tuple[list[TraceStep], Callable[[TraceStep], None]]:
    steps: list[TraceStep] = []
    return steps, steps.append


class TestWorkedExample:
    """The body of two instantiated with id , inc."""

    def test_result(
        self, golden: dict[str, Any], seal_term: SealTerm, seal_subst: SealSubst
    ) -> None:
        case = golden["worked_example"]
        m = seal_term(case["term"], case["ctx"], case["ty"])
        s = seal_subst(case["subst"], case["src"], case["ctx"])
        result = instantiate(m, s)
        assert print_term(strip_term(result.term)) == case["result"]
        assert print_term(result.term) == ANNOTATED_RESULT
        assert result.ctx == parse_ctx(case["src"])
        assert result.ty == m.ty

    def test_trace_labels(
        self, golden: dict[str, Any], seal_term: SealTerm, seal_subst: SealSubst
    ) -> None:
        """Clause labels start (5), (6), (4), (2), (3)."""
        case = golden["worked_example"]
        m = seal_term(case["term"], case["ctx"], case["ty"])
        s = seal_subst(case["subst"], case["src"], case["ctx"])
        steps, sink = _recorder()
        instantiate(m, s, trace=sink)
        assert [step.rule for step in steps] == case["rules"]

    def test_first_steps_text(
        self, golden: dict[str, Any], seal_term: SealTerm, seal_subst: SealSubst
    ) -> None:
        """The first step pushes the substitution under the binder."""
        case = golden["worked_example"]
        m = seal_term(case["term"], case["ctx"], case["ty"])
        s = seal_subst(case["subst"], case["src"], case["ctx"])
        steps, sink = _recorder()
        instantiate(m, s, trace=sink)
        assert steps[0].before == "(\\ (#^ (#^ #))) [ id , (\\ suc #) ]"
        assert steps[0].after == "\\ ((#^ (#^ #)) [ (id , (\\ suc #))^ , # ])"
        assert steps[4].after == "\\ suc #"

    def test_trace_step_serialises(self) -> None:
        step = TraceStep(rule="inst-3", before="# [ id , zero ]", after="zero")
        assert json.loads(step.model_dump_json()) == {
            "rule": "inst-3",
            "before": "# [ id , zero ]",
            "after": "zero",
        }


class TestInstantiate:
    """Individual clauses."""

    def test_identity(self, seal_term: SealTerm) -> None:
        m = seal_term("#^ #", "[N -> N, N]", "N")
        steps, sink = _recorder()
        assert instantiate(m, identity(m.ctx), trace=sink) == m
        assert [step.rule for step in steps] == ["inst-1"]

    def test_variable_under_cons(
        self, seal_term: SealTerm, seal_subst: SealSubst
    ) -> None:
        m = seal_term("#", "[N]")
        s = seal_subst("id , zero", "[]", "[N]")
        assert print_term(instantiate(m, s).term) == "zero"

    def test_weakened_variable_under_cons(
        self, seal_term: SealTerm, seal_subst: SealSubst
    ) -> None:
        """(#^)[id , zero] steps by (4) then (1)."""
        m = seal_term("#^", "[N, N]")
        s = seal_subst("id , zero", "[N]", "[N, N]")
        steps, sink = _recorder()
        result = instantiate(m, s, trace=sink)
        assert print_term(result.term) == "#"
        assert [step.rule for step in steps] == ["inst-4", "inst-1"]

    def test_weakened_substitution(self, seal_term: SealTerm) -> None:
        m = seal_term("zero")
        result = instantiate(m, weaken_subst(identity(m.ctx), NAT))
        assert print_term(result.term) == "zero^"
        assert result.ctx == Ctx((NAT,))

    def test_successor_and_zero(
        self, seal_term: SealTerm, seal_subst: SealSubst
    ) -> None:
        m = seal_term("suc zero", "[N, N]")
        s = seal_subst("id , #", "[N]", "[N, N]")
        steps, sink = _recorder()
        assert print_term(instantiate(m, s, trace=sink).term) == "suc zero"
        assert [step.rule for step in steps] == ["inst-8", "inst-7"]

    def test_context_mismatch(self, seal_term: SealTerm, seal_subst: SealSubst) -> None:
        m = seal_term("#", "[N]")
        s = seal_subst("id", "[]", "[]")
        with pytest.raises(ContextMismatch):
            instantiate(m, s)


class TestCompose:
    """Composition clauses."""

    def test_right_identity(self, seal_subst: SealSubst) -> None:
        s = seal_subst("id^ , #", "[N]", "[N]")
        assert compose(s, identity(s.src)) == s

    def test_left_identity_on_cons(self, seal_subst: SealSubst) -> None:
        t = seal_subst("id , zero", "[]", "[N]")
        steps, sink = _recorder()
        assert compose(identity(t.dst), t, trace=sink) == t
        assert [step.rule for step in steps] == ["comp-3"]

    def test_lifted_cons_against_cons(self, seal_subst: SealSubst) -> None:
        """((id , M)^ , #) ⨾ (id , L) = (id , M) , L by (5), (4), (1), (3)."""
        s = seal_subst("(id , zero)^ , #", "[N -> N]", "[N, N -> N]")
        t = seal_subst("id , (\\ suc #)", "[]", "[N -> N]")
        steps, sink = _recorder()
        result = compose(s, t, trace=sink)
        assert print_subst(result.subst) == "id , zero , (\\ suc #)"
        assert (result.src, result.dst) == (t.src, s.dst)
        assert [step.rule for step in steps] == ["comp-5", "comp-4", "comp-1", "inst-3"]

    def test_weakened_right_argument(self, seal_subst: SealSubst) -> None:
        s = seal_subst("id , zero", "[]", "[N]")
        t = seal_subst("id^", "[N]", "[]")
        assert print_subst(compose(s, t).subst) == "(id , zero)^"

    def test_context_mismatch(self, seal_subst: SealSubst) -> None:
        s = seal_subst("id", "[N]", "[N]")
        t = seal_subst("id", "[]", "[]")
        with pytest.raises(ContextMismatch):
            compose(s, t)


class TestInstantiateChain:
    """Nested instantiation and its fused form."""

    def test_fused_equals_nested(
        self, seal_term: SealTerm, seal_subst: SealSubst
    ) -> None:
        m = seal_term("#^ #", "[N -> N, N]", "N")
        chain = [
            seal_subst("id , (\\ suc #) , zero", "[]", "[N -> N, N]"),
            seal_subst("id^", "[N]", "[]"),
        ]
        nested = instantiate_chain(m, chain)
        fused = instantiate_chain(m, chain, fuse=True)
        assert nested == fused
        assert print_term(fused.term) == "((\\ suc # : N -> N) zero)^"

    def test_fused_trace_composes_first(
        self, seal_term: SealTerm, seal_subst: SealSubst
    ) -> None:
        m = seal_term("#^ #", "[N -> N, N]", "N")
        chain = [
            seal_subst("id , (\\ suc #) , zero", "[]", "[N -> N, N]"),
            seal_subst("id^", "[N]", "[]"),
        ]
        steps, sink = _recorder()
        instantiate_chain(m, chain, fuse=True, trace=sink)
        assert [step.rule for step in steps] == [
            "comp-2",
            "comp-1",
            "inst-2",
            "inst-6",
            "inst-4",
            "inst-3",
            "inst-3",
        ]

    def test_empty_chain(self, seal_term: SealTerm) -> None:
        m = seal_term("zero")
        assert instantiate_chain(m, []) == m


class TestSpecialSubstitutions:
    """subst0, subst1 and the smart constructors."""

    def test_introduction(self, seal_term: SealTerm) -> None:
        """(N^)[M]0 = N."""
        n = seal_term("# zero", "[N -> N]", "N")
        m = seal_term("zero", "[N -> N]", "N")
        assert subst0(weaken(n, NAT), m) == n

    def test_subst0_of_successor(self, seal_term: SealTerm) -> None:
        n = seal_term("suc #", "[N]")
        assert print_term(subst0(n, seal_term("zero")).term) == "suc zero"

    def test_subst0_context_mismatch(self, seal_term: SealTerm) -> None:
        with pytest.raises(ContextMismatch):
            subst0(seal_term("zero"), seal_term("zero"))

    def test_subst1_weakens_the_image(self, seal_term: SealTerm) -> None:
        """(#^)[zero]1 = zero^ over [N]."""
        n = seal_term("#^", "[N, N]")
        result = subst1(n, seal_term("zero"))
        assert print_term(result.term) == "zero^"
        assert result.ctx == Ctx((NAT,))

    def test_subst1_keeps_index_zero(self, seal_term: SealTerm) -> None:
        n = seal_term("#", "[N, N -> N]", "N -> N")
        result = subst1(n, seal_term("zero"))
        assert print_term(result.term) == "#"
        assert result.ctx == parse_ctx("[N -> N]")

    def test_subst1_context_mismatch(self, seal_term: SealTerm) -> None:
        with pytest.raises(ContextMismatch):
            subst1(seal_term("#", "[N]"), seal_term("zero"))

    def test_cons_extends_target(self, seal_term: SealTerm) -> None:
        s = cons(identity(Ctx()), seal_term("zero"))
        assert print_subst(s.subst) == "id , zero"
        assert s.dst == Ctx((NAT,))

    def test_cons_rejects_foreign_head(self, seal_term: SealTerm) -> None:
        with pytest.raises(ContextMismatch):
            cons(identity(Ctx()), seal_term("#", "[N]"))


class TestReduction:
    """force, beta_step and normalize."""

    def test_force_weakened_lambda(self, seal_term: SealTerm) -> None:
        m = weaken(seal_term("\\ suc #", "[]", "N -> N"), NAT)
        steps, sink = _recorder()
        forced = force(m, trace=sink)
        assert print_term(forced.term) == "\\ suc #"
        assert [step.rule for step in steps] == ["force-lam"]
        assert steps[0].before == "(\\ suc #)^"

    def test_force_weakened_application(self, seal_term: SealTerm) -> None:
        m = seal_term("(#^ #)^ #", "[N -> N -> N, N, N]")
        inner = force(seal_term("(#^ #)^", "[N -> N -> N, N, N]", "N -> N"))
        assert print_term(inner.term) == "#^^ #^"
        assert force(m) == m

    def test_force_zero_and_spine(self, seal_term: SealTerm) -> None:
        assert print_term(force(seal_term("zero^", "[N]")).term) == "zero"
        assert print_term(force(seal_term("#^", "[N, N]")).term) == "#^"

    def test_force_successor(self, seal_term: SealTerm) -> None:
        forced = force(seal_term("(suc #)^", "[N, N]"))
        assert print_term(forced.term) == "suc #^"

    def test_beta_step_on_two_inc(self, seal_term: SealTerm) -> None:
        m = seal_term(TWO_INC, "[]", "N -> N")
        result = beta_step(m)
        assert result is not None
        reduct, step = result
        assert print_term(reduct.term) == ANNOTATED_RESULT
        assert step.rule == "beta"
        assert step.after == print_term(strip_term(reduct.term))

    def test_beta_step_on_normal_form(self, seal_term: SealTerm) -> None:
        assert beta_step(seal_term("zero")) is None

    def test_identity_redex(self, seal_term: SealTerm) -> None:
        m = seal_term("(\\ # : N -> N) zero")
        assert print_term(normalize(m).term) == "zero"

    def test_normalize_two_inc(
        self, golden: dict[str, Any], seal_term: SealTerm
    ) -> None:
        case = golden["normalize"]["two_inc"]
        m = seal_term(case["term"], case["ctx"], case["ty"])
        result = normalize(m)
        assert print_term(result.term) == case["normal_form"]
        assert result.ty == arrow(NAT, NAT)

    def test_normalize_trace(self, seal_term: SealTerm) -> None:
        steps, sink = _recorder()
        normalize(seal_term(TWO_INC, "[]", "N -> N"), trace=sink)
        assert [step.rule for step in steps] == [
            "beta",
            "force-lam",
            "beta",
            "force-lam",
            "beta",
        ]

    def test_normalize_canonicalises_weakenings(self, seal_term: SealTerm) -> None:
        """M1 is already normal; its canonical form is M0."""
        m1 = seal_term("(#^ #)^ #", "[N -> N -> N, N, N]")
        assert normalize(m1).term == parse_term("#^^ #^ #")

    def test_step_limit(self, seal_term: SealTerm) -> None:
        with pytest.raises(StepLimit):
            normalize(seal_term(TWO_INC, "[]", "N -> N"), step_limit=2)

    def test_step_limit_must_be_positive(self, seal_term: SealTerm) -> None:
        with pytest.raises(ValueError):
            normalize(seal_term("zero"), step_limit=0)
