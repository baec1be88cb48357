"""
Unit tests for the canonical printer (STORY-003).

CHANGELOG:
- 2026-10-19: Initial creation (STORY-003)

TODO:
- None
"""

from typing import Any

from kernel.src.parser import parse_subst, parse_term
from kernel.src.printer import (
    print_chain,
    print_ctx,
    print_subst,
    print_subst_judgement,
    print_term,
    print_term_judgement,
    print_ty,
)
from kernel.src.syntax import (
    EMPTY,
    ID,
    NAT,
    VARZ,
    ZERO,
    App,
    Arrow,
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
TWO = Lam(Lam(App(Weaken(VARZ), App(Weaken(VARZ), VARZ))))


class TestPrintTypes:
    """Types and contexts."""

    def test_arrow_parenthesises_domain_only(self) -> None:
        assert print_ty(Arrow(arrow(NAT, NAT), arrow(NAT, NAT))) == "(N -> N) -> N -> N"

    def test_unicode_type(self) -> None:
        assert print_ty(arrow(NAT, NAT), "unicode") == "ℕ ⇒ ℕ"

    def test_ascii_context(self) -> None:
        assert print_ctx(EMPTY) == "[]"
        assert print_ctx(Ctx((arrow(NAT, NAT), NAT))) == "[N -> N, N]"

    def test_unicode_context(self) -> None:
        """The Unicode form starts at ∅ and extends with ▷."""
        assert print_ctx(EMPTY, "unicode") == "∅"
        assert print_ctx(Ctx((NAT, NAT)), "unicode") == "∅ ▷ ℕ ▷ ℕ"


class TestPrintTerms:
    """Terms print with the fewest parentheses that still re-parse."""

    def test_two(self, golden: dict[str, Any]) -> None:
        assert print_term(TWO) == golden["terms"]["two"]["term"]

    def test_variable_spine(self) -> None:
        assert print_term(var(2)) == "#^^"

    def test_weakened_application(self, golden: dict[str, Any]) -> None:
        """M1 keeps its compound weakening."""
        m1 = App(Weaken(App(Weaken(VARZ), VARZ)), VARZ)
        assert print_term(m1) == golden["terms"]["m1"]["term"]

    def test_successor_argument_is_parenthesised(self) -> None:
        assert print_term(App(VARZ, Suc(ZERO))) == "# (suc zero)"

    def test_weakened_lambda(self) -> None:
        assert print_term(Weaken(INC)) == "(\\ suc #)^"

    def test_unicode_term(self) -> None:
        assert print_term(TWO, "unicode") == "ƛ (ƛ (● ↑ · (● ↑ · ●)))"

    def test_printed_terms_reparse(self, golden: dict[str, Any]) -> None:
        """Every golden term is a fixed point of parse then print."""
        for entry in golden["terms"].values():
            assert print_term(parse_term(entry["term"])) == entry["term"]


class TestPrintSubstitutions:
    """Substitutions, chains and judgements."""

    def test_cons_of_zero(self) -> None:
        assert print_subst(SCons(ID, ZERO)) == "id , zero"

    def test_lambda_head_is_parenthesised(self, golden: dict[str, Any]) -> None:
        subst = SCons(SCons(ID, INC), ZERO)
        assert print_subst(subst) == golden["substitutions"]["inc_zero"]["subst"]

    def test_weakened_cons(self, golden: dict[str, Any]) -> None:
        subst = SCons(SWeaken(SCons(ID, INC)), VARZ)
        assert print_subst(subst) == golden["substitutions"]["lifted_inc"]["subst"]

    def test_unicode_substitution(self) -> None:
        subst = SCons(SCons(SWeaken(SWeaken(ID)), VARZ), Weaken(VARZ))
        assert print_subst(subst, "unicode") == "id ↑ ↑ ▷ ● ▷ ● ↑"

    def test_golden_substitutions_reparse(self, golden: dict[str, Any]) -> None:
        for entry in golden["substitutions"].values():
            assert print_subst(parse_subst(entry["subst"])) == entry["subst"]

    def test_chain(self) -> None:
        chain = [SCons(ID, ZERO), SWeaken(ID)]
        assert print_chain(chain) == "id , zero ; id^"
        assert print_chain(chain, "unicode") == "id ▷ zero ⨾ id ↑"

    def test_term_judgement(self) -> None:
        text = print_term_judgement(INC, EMPTY, arrow(NAT, NAT))
        assert text == "[] |- \\ suc # : N -> N"

    def test_subst_judgement(self) -> None:
        text = print_subst_judgement(SWeaken(ID), Ctx((NAT,)), EMPTY, "unicode")
        assert text == "id ↑ : ∅ ▷ ℕ ⊨ ∅"
