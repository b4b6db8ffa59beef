import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from concept_stlc.evaluator import (
    Converged,
    OutOfFuel,
    Stuck,
    evaluate,
    is_value,
    model_ref,
    step,
    substitute,
    trace,
)
from concept_stlc.ident_maps import Ident
from concept_stlc.syntax import (
    TmAbs,
    TmApp,
    TmCAbs,
    TmCInvk,
    TmFalse,
    TmIf,
    TmIsZero,
    TmLet,
    TmNat,
    TmPlus,
    TmPred,
    TmSucc,
    TmTrue,
    TmVar,
    TNat,
    parse,
)
from concept_stlc.typecheck import ModelTable, check_program

from tests.strategies import well_typed_programs
from tests.test_typecheck import MONOID_MAIN, MONOID_SOURCE

x, c, f, g, M = (Ident(t) for t in ("x", "c", "f", "g", "M"))
MAdd, op, neutral = Ident("MAdd"), Ident("op"), Ident("neutral")
EMPTY = ModelTable()


@pytest.fixture
def monoid_mt():
    return check_program(parse(MONOID_SOURCE)).mt


class TestSubstitute:
    def test_variable(self):
        assert substitute(x, TmNat(0), TmVar(x)) == TmNat(0)

    def test_shadowing_binder(self):
        term = TmAbs(x, TNat(), TmVar(x))
        assert substitute(x, TmNat(0), term) == term

    def test_let_binds_only_in_body(self):
        term = TmLet(x, TmVar(x), TmVar(x))
        assert substitute(x, TmNat(1), term) == TmLet(x, TmNat(1), TmVar(x))

    def test_model_reference_rewrites_invocations(self):
        term = TmApp(TmCInvk(c, f), TmCInvk(c, g))
        assert substitute(c, model_ref(M), term) == TmApp(TmCInvk(M, f), TmCInvk(M, g))

    def test_concept_binder_stops_model_substitution(self):
        term = TmCAbs(c, Ident("C"), TmCInvk(c, f))
        assert substitute(c, model_ref(M), term) == term

    def test_concept_binder_named_like_the_model_is_renamed(self):
        term = TmCAbs(M, Ident("D"), TmApp(TmCInvk(c, f), TmCInvk(M, g)))
        renamed = Ident("M'")
        expected = TmCAbs(renamed, Ident("D"), TmApp(TmCInvk(M, f), TmCInvk(renamed, g)))
        assert substitute(c, model_ref(M), term) == expected

    def test_term_binder_named_like_the_model_is_renamed(self):
        term = TmAbs(M, TNat(), TmPlus(TmVar(M), TmCInvk(c, f)))
        renamed = Ident("M'")
        assert substitute(c, model_ref(M), term) == TmAbs(renamed, TNat(), TmPlus(TmVar(renamed), TmCInvk(M, f)))

    def test_let_binder_named_like_the_model_is_renamed(self):
        term = TmLet(M, TmCInvk(c, g), TmPlus(TmVar(M), TmCInvk(c, f)))
        renamed = Ident("M'")
        expected = TmLet(renamed, TmCInvk(M, g), TmPlus(TmVar(renamed), TmCInvk(M, f)))
        assert substitute(c, model_ref(M), term) == expected

    def test_fresh_name_avoids_names_already_in_the_body(self):
        taken = Ident("M'")
        term = TmAbs(M, TNat(), TmPlus(TmVar(taken), TmCInvk(c, f)))
        result = substitute(c, model_ref(M), term)
        assert result.x == Ident("M''")
        assert result.body == TmPlus(TmVar(taken), TmCInvk(M, f))

    def test_closed_value_mentioning_a_model_is_not_captured(self):
        value = TmAbs(x, TNat(), TmCInvk(M, f))
        term = TmAbs(M, TNat(), TmApp(TmVar(f), TmVar(M)))
        renamed = Ident("M'")
        assert substitute(f, value, term) == TmAbs(renamed, TNat(), TmApp(value, TmVar(renamed)))


class TestStep:
    def test_values_do_not_step(self):
        for value in (TmTrue(), TmFalse(), TmNat(3), TmAbs(x, TNat(), TmVar(x)), TmCAbs(c, Ident("C"), TmNat(1))):
            assert is_value(value)
            assert step(EMPTY, value) is None

    def test_model_beta(self, monoid_mt):
        expected = TmApp(TmApp(TmCInvk(MAdd, op), TmCInvk(MAdd, neutral)), TmNat(3))
        assert step(monoid_mt, MONOID_MAIN) == expected

    def test_invoke(self, monoid_mt):
        assert step(monoid_mt, TmCInvk(MAdd, neutral)) == TmNat(0)

    def test_truncated_predecessor(self):
        assert step(EMPTY, TmPred(TmNat(0))) == TmNat(0)
        assert step(EMPTY, TmPred(TmNat(5))) == TmNat(4)

    def test_arithmetic_and_conditionals(self):
        assert step(EMPTY, TmSucc(TmNat(1))) == TmNat(2)
        assert step(EMPTY, TmIsZero(TmNat(0))) == TmTrue()
        assert step(EMPTY, TmPlus(TmNat(2), TmNat(3))) == TmNat(5)
        assert step(EMPTY, TmIf(TmFalse(), TmNat(1), TmNat(2))) == TmNat(2)

    def test_left_operand_reduces_first(self):
        term = TmPlus(TmSucc(TmNat(0)), TmSucc(TmNat(1)))
        assert step(EMPTY, term) == TmPlus(TmNat(1), TmSucc(TmNat(1)))

    def test_argument_reduces_after_function_is_a_value(self):
        fn = TmAbs(x, TNat(), TmVar(x))
        assert step(EMPTY, TmApp(fn, TmSucc(TmNat(0)))) == TmApp(fn, TmNat(1))
        assert step(EMPTY, TmApp(fn, TmNat(1))) == TmNat(1)

    def test_stuck_terms(self):
        assert step(EMPTY, TmApp(TmTrue(), TmTrue())) is None
        assert step(EMPTY, TmCInvk(M, f)) is None


class TestEvaluate:
    def test_value_with_zero_fuel(self):
        assert evaluate(EMPTY, TmTrue(), 0) == Converged(TmTrue(), 0)

    def test_monoid_program(self, monoid_mt):
        result = evaluate(monoid_mt, MONOID_MAIN, 100)
        assert isinstance(result, Converged)
        assert result.value == TmNat(3)

    def test_stuck(self):
        result = evaluate(EMPTY, TmApp(TmTrue(), TmTrue()), 10)
        assert isinstance(result, Stuck)
        assert result.steps == 0

    def test_out_of_fuel(self, monoid_mt):
        result = evaluate(monoid_mt, MONOID_MAIN, 2)
        assert isinstance(result, OutOfFuel)
        assert result.steps == 2

    def test_negative_fuel(self):
        with pytest.raises(ValueError):
            evaluate(EMPTY, TmTrue(), -1)

    def test_trace_matches_evaluate(self, monoid_mt):
        terms = trace(monoid_mt, MONOID_MAIN, 100)
        result = evaluate(monoid_mt, MONOID_MAIN, 100)
        assert terms[0] == MONOID_MAIN
        assert terms[-1] == result.value
        assert len(terms) - 1 == result.steps


@settings(max_examples=300, deadline=None, suppress_health_check=list(HealthCheck))
@given(well_typed_programs(), st.integers(0, 50))
def test_fuel_monotonicity(p, extra):
    mt = check_program(p).mt
    first = evaluate(mt, p.main, 1000)
    if isinstance(first, Converged):
        again = evaluate(mt, p.main, first.steps + extra)
        assert again == first
