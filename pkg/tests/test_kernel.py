import pytest

from diagnostics import CheckError, DiagnosticCode
from kernel import Environment, TypeChecker, check, check_declaration, check_module, infer, is_crisp, promote
from parser import parse_term, resolve_term
from syntax import App, Const, Lam, Pi, Postulate, Polarity, Telescope, Unit, Universe, Var


# ============================================================================
# Accepted judgments
# ============================================================================

def test_polymorphic_identity(accepts):
    env = accepts("def id : (A : Type 0) -> A -> A := fun A x. x")
    assert "id" in env


def test_flat_counit_and_eta(accepts):
    accepts(
        "postulate A : Type 0\n"
        "def counit : Flat A -> A := fun x. letflat u := x in u\n"
        "def roundtrip : Flat A -> Flat A := fun x. letflat u := x in u ^flat\n"
    )


def test_closed_term_is_crisp(accepts):
    accepts("postulate A : Type 0\npostulate a : A\ndef fa : Flat A := a ^flat")


def test_sharp_unit_and_join(accepts):
    accepts(
        "def unit : (A : Type 0) -> A -> Sharp A := fun A x. x ^sharp\n"
        "def join : (A : Type 0) -> Sharp (Sharp A) -> Sharp A := fun A w. (w _sharp _sharp) ^sharp\n"
    )


def test_sharp_intro_promotes_cohesive_variables(accepts):
    # u is cohesive outside ^sharp but may be unwrapped inside it
    accepts("def m : (A B : Type 0) -> (A -> B) -> Sharp A -> Sharp B := fun A B f u. (f (u _sharp)) ^sharp")


def test_letflat_with_motive_is_inferred(accepts):
    accepts(
        "postulate A : Type 0\n"
        "def r : (x : Flat A) -> Id (Flat A) x x :=\n"
        "  fun x. letflat u := x motive z. Id (Flat A) z z in refl (u ^flat)\n"
    )


def test_path_induction_computes_on_refl(accepts):
    accepts(
        "def sym : (A : Type 0) -> (a b : A) -> Id A a b -> Id A b a :=\n"
        "  fun A a b p. J (x.y.q. Id A y x) (x. refl x) a b p\n"
        "def sym_refl : (A : Type 0) -> (a : A) -> Id (Id A a a) (sym A a a (refl a)) (refl a) :=\n"
        "  fun A a. refl (refl a)\n"
    )


def test_universe_levels(accepts, rejects):
    accepts("def U : Type 1 := Type 0\ndef P : Type 1 := (A : Type 0) -> A")
    rejects("def P : Type 0 := (A : Type 0) -> A", "UniverseError")


def test_eta_laws(accepts):
    accepts(
        "def unit_eta : (u : Unit) -> Id Unit u star := fun u. refl u\n"
        "def pair_eta : (A B : Type 0) -> (p : A * B) -> Id (A * B) p (p.1, p.2) := fun A B p. refl p\n"
        "def fun_eta : (A B : Type 0) -> (f : A -> B) -> Id (A -> B) f (fun x. f x) := fun A B f. refl f\n"
        "def sharp_ext : (A : Type 0) -> (u : Sharp A) -> Id (Sharp A) u ((u _sharp) ^sharp) := fun A u. refl u\n"
    )


# ============================================================================
# Rejected judgments
# ============================================================================

def test_sharp_elim_on_cohesive_variable(rejects):
    outcome = rejects("def bad : (A : Type 0) -> Sharp A -> A := fun A x. x _sharp", "SharpElimCohesive")
    assert "cohesive variable x" in outcome.message


def test_sharp_elim_needs_sharp_type(rejects):
    rejects("postulate A : Type 0\npostulate a : A\ndef bad : A := a _sharp", "TypeMismatch")


def test_flat_on_cohesive_type(rejects):
    rejects("def bad : Type 0 -> Type 0 := fun A. Flat A", "FlatOnCohesiveType")


def test_flat_intro_rejects_mixed_crispness(rejects):
    outcome = rejects(
        "postulate A : Type 0\n"
        "def bad : Flat A -> A -> Flat (A * A) := fun x y. letflat u := x in (u, y) ^flat\n",
        "CrispnessViolation",
    )
    assert "y" in outcome.message


def test_diagnostic_carries_context_with_polarities(rejects):
    outcome = rejects(
        "postulate A : Type 0\ndef bad : Flat A -> A -> Flat A := fun x y. letflat u := x in y ^flat",
        "CrispnessViolation",
    )
    diagnostic = outcome.diagnostic_dict()
    polarities = {entry["name"]: entry["polarity"] for entry in diagnostic["context"]}
    assert polarities == {"x": "cohesive", "y": "cohesive", "u": "crisp"}
    assert diagnostic["line"] == 2
    assert "u :: A" in outcome.error.diagnostic.render()


def test_not_a_function_and_not_a_pair(rejects):
    rejects("def bad : (A : Type 0) -> A -> A := fun A x. x x", "NotAFunction")
    rejects("def bad : (A : Type 0) -> A -> A := fun A x. x.2", "NotAPair")


def test_refl_between_distinct_points(rejects):
    rejects("def bad : (A : Type 0) -> (x y : A) -> Id A x y := fun A x y. refl x", "TypeMismatch")


def test_letflat_without_motive_in_inferred_position(rejects):
    rejects(
        "postulate A : Type 0\n"
        "def bad : Flat A -> A := fun x. (letflat u := x in (u, u)).1\n",
        "MotiveMismatch",
    )


def test_fuel_exhaustion(check_text):
    source = (
        "postulate A : Type 0\n"
        "def dup : (A -> A) -> A -> A := fun f x. f (f x)\n"
        "def big : (A -> A) -> A -> A := fun f. dup (dup (dup (dup (dup (dup f)))))\n"
        "def same : (f : A -> A) -> (x : A) -> Id A (big f x) (big f x) := fun f x. refl (big f x)\n"
    )
    outcome = check_text(source, fuel=50)
    assert outcome.code == "FuelExhausted"


def test_each_conversion_query_gets_a_full_budget():
    tc = TypeChecker(Environment(), fuel=10)
    ctx = tc.context(Telescope())
    ident = tc.ev.eval((), Lam(Var(0)))
    arrow = tc.ev.eval((), Pi(Unit(), Unit()))
    # comparing functions applies both sides, which costs reduction steps
    tc.ev.remaining = 0
    with pytest.raises(CheckError) as err:
        tc.ev.conv(0, (), arrow, ident, ident)
    assert err.value.code is DiagnosticCode.FUEL_EXHAUSTED
    tc.ev.remaining = 0
    assert tc.conv(ctx, arrow, ident, ident)


# ============================================================================
# Public operations
# ============================================================================

def test_infer_returns_normal_form():
    term = resolve_term(parse_term("(fun x. x) star"))
    assert infer(Environment(), Telescope(), term) == Unit()


def test_check_against_explicit_type():
    ctx = Telescope().extend("A", Universe(0))
    check(Environment(), ctx, resolve_term(parse_term("fun x. x"), scope=["A"]),
          resolve_term(parse_term("A -> A"), scope=["A"]))


def test_is_crisp_reports_first_cohesive_variable():
    ctx = Telescope().extend("A", Universe(0), Polarity.CRISP).extend("x", Var(0)).extend("y", Var(1))
    decision = is_crisp(ctx, App(Var(0), Var(1)))
    assert not decision.crisp
    assert decision.offender == "x"
    assert is_crisp(promote(ctx), App(Var(0), Var(1))).crisp


def test_redeclaration_is_rejected():
    env = check_declaration(Environment(), Postulate("A", Universe(0)))
    with pytest.raises(CheckError) as err:
        check_declaration(env, Postulate("A", Universe(0)))
    assert err.value.code is DiagnosticCode.DUPLICATE_NAME


def test_check_module_stops_at_first_failure():
    decls = [Postulate("A", Universe(0)), Postulate("B", Const("Missing")), Postulate("C", Universe(0))]
    env, results = check_module(Environment(), decls)
    assert [r.ok for r in results] == [True, False]
    assert "A" in env and "C" not in env
