"""
Unit tests for the concrete-syntax parser (STORY-003).

Tests verify:
- ASCII and Unicode spellings parse to the same AST.
- Application is left-associative; weakening is postfix and binds tightest.
- Errors carry line, column and the expected token set.
- print/parse round-trips on generated terms and substitutions.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-003)

TODO:
- None
"""

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from kernel.src.errors import TermSyntaxError
from kernel.src.generator import GenConfig, TermGenerator
from kernel.src.parser import (
    parse_chain,
    parse_ctx,
    parse_subst,
    parse_term,
    parse_type,
)
from kernel.src.printer import print_subst, print_term
from kernel.src.syntax import (
    EMPTY,
    ID,
    NAT,
    VARZ,
    ZERO,
    Ann,
    App,
    Ctx,
    Lam,
    SCons,
    Suc,
    SWeaken,
    Weaken,
    arrow,
    var,
)

INC = Lam(Suc(VARZ))


class TestParseTypesAndContexts:
    """Types associate to the right; contexts have three spellings."""

    def test_arrow_is_right_associative(self) -> None:
        assert parse_type("N -> N -> N") == arrow(NAT, NAT, NAT)

    def test_parenthesised_domain(self) -> None:
        assert parse_type("(N -> N) -> N") == arrow(arrow(NAT, NAT), NAT)

    @pytest.mark.parametrize("text", ["ℕ ⇒ ℕ", "`ℕ ⇒ `ℕ", "N → N"])
    def test_unicode_arrows(self, text: str) -> None:
        assert parse_type(text) == arrow(NAT, NAT)

    @pytest.mark.parametrize(
        "text", ["[N -> N, N]", "∅ ▷ ℕ ⇒ ℕ ▷ ℕ", "[N -> N ▷ N]"]
    )
    def test_context_spellings(self, text: str) -> None:
        assert parse_ctx(text) == Ctx((arrow(NAT, NAT), NAT))

    def test_empty_context(self) -> None:
        assert parse_ctx("[]") == EMPTY
        assert parse_ctx("∅") == EMPTY


class TestParseTerms:
    """Term grammar."""

    def test_two(self) -> None:
        expected = Lam(Lam(App(Weaken(VARZ), App(Weaken(VARZ), VARZ))))
        assert parse_term("\\ (\\ (#^ (#^ #)))") == expected
        assert parse_term("ƛ (ƛ (● ↑ · (● ↑ · ●)))") == expected

    def test_application_is_left_associative(self) -> None:
        """M0 applies index 2 to index 1, then to index 0."""
        expected = App(App(var(2), var(1)), VARZ)
        assert parse_term("#^^ #^ #") == expected
        assert parse_term("#^^ (#^) #") == expected

    def test_weakening_applies_to_compound_terms(self) -> None:
        assert parse_term("(#^ #)^ #") == App(Weaken(App(var(1), VARZ)), VARZ)

    def test_lambda_extends_right(self) -> None:
        assert parse_term("\\ # zero") == Lam(App(VARZ, ZERO))

    def test_suc_takes_an_atom(self) -> None:
        assert parse_term("suc (suc zero)") == Suc(Suc(ZERO))
        with pytest.raises(TermSyntaxError):
            parse_term("suc suc zero")

    def test_annotation(self) -> None:
        assert parse_term("(\\ suc # : N -> N)") == Ann(INC, arrow(NAT, NAT))

    def test_whitespace_is_insignificant(self) -> None:
        assert parse_term("  \\suc   #\n") == INC


class TestParseSubstitutions:
    """Substitutions and chains."""

    def test_cons_is_left_associative(self) -> None:
        assert parse_subst("id , (\\ suc #) , zero") == SCons(SCons(ID, INC), ZERO)

    def test_weakened_cons(self) -> None:
        expected = SCons(SWeaken(SCons(ID, INC)), VARZ)
        assert parse_subst("(id , (\\ suc #))^ , #") == expected
        assert parse_subst("(id ▷ ƛ suc ●) ↑ ▷ ●") == expected

    def test_flip(self) -> None:
        expected = SCons(SCons(SWeaken(SWeaken(ID)), VARZ), var(1))
        assert parse_subst("id^^ , # , #^") == expected

    def test_chain(self) -> None:
        assert parse_chain("id , zero ; id^") == [SCons(ID, ZERO), SWeaken(ID)]
        assert parse_chain("id ⨾ id") == [ID, ID]

    def test_single_stage_chain(self) -> None:
        assert parse_chain("id") == [ID]


class TestSyntaxErrors:
    """Malformed input raises TermSyntaxError with a location."""

    def test_unexpected_character(self) -> None:
        with pytest.raises(TermSyntaxError) as exc_info:
            parse_term("# $")
        assert exc_info.value.line == 1
        assert exc_info.value.column == 3

    def test_unexpected_end(self) -> None:
        with pytest.raises(TermSyntaxError) as exc_info:
            parse_term("\\")
        assert exc_info.value.line == 1
        assert exc_info.value.expected

    def test_unbalanced_parenthesis(self) -> None:
        with pytest.raises(TermSyntaxError):
            parse_term("(# #")

    def test_term_is_not_a_substitution(self) -> None:
        with pytest.raises(TermSyntaxError):
            parse_subst("#")

    def test_is_a_value_error(self) -> None:
        with pytest.raises(ValueError):
            parse_type("N ->")


class TestRoundTrip:
    """Printing then parsing returns the original tree."""

    @given(seed=st.integers(min_value=0, max_value=2**64 - 1))
    @settings(
        max_examples=50,
        deadline=None,
        suppress_health_check=[HealthCheck.function_scoped_fixture],
    )
    def test_generated_terms(self, seed: int) -> None:
        gen = TermGenerator(GenConfig(seed=seed, max_term_size=20))
        ctx, ty = gen.gen_ctx(), gen.gen_type()
        term = gen.gen_term(ctx, ty)
        for style in ("ascii", "unicode"):
            assert parse_term(print_term(term, style)) == term

    @given(seed=st.integers(min_value=0, max_value=2**64 - 1))
    @settings(
        max_examples=50,
        deadline=None,
        suppress_health_check=[HealthCheck.function_scoped_fixture],
    )
    def test_generated_substitutions(self, seed: int) -> None:
        gen = TermGenerator(GenConfig(seed=seed, max_term_size=10))
        subst = gen.gen_subst(gen.gen_ctx(), gen.gen_ctx())
        for style in ("ascii", "unicode"):
            assert parse_subst(print_subst(subst, style)) == subst
