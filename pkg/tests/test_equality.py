import pytest

from diagnostics import CheckError, DiagnosticCode
from equality import (
    EApp, HConst, RewriteRule, VNeutral, VStar, convertible, match_rewrite, normalize,
)
from kernel import Environment, promote
from parser import parse_term, resolve_term
from syntax import Const, Pattern, PatternCon, PatternVar, Star, Telescope, Var


def telescope(*entries, env=None):
    """Build a telescope from (name, type source) pairs."""
    ctx = Telescope()
    for name, source in entries:
        ctx = ctx.extend(name, resolve_term(parse_term(source), env, ctx.names()))
    return ctx


def term(source, ctx, env=None):
    return resolve_term(parse_term(source), env, ctx.names())


def test_beta_reduction():
    assert normalize(Environment(), Telescope(), term("(fun x. x) star", Telescope())) == Star()


def test_sharp_intro_of_elim_contracts():
    ctx = telescope(("A", "Type 0"), ("u", "Sharp A"))
    assert normalize(Environment(), ctx, term("(u _sharp) ^sharp", ctx)) == Var(0)


def test_sharp_contraction_keeps_a_cohesive_subject_wrapped():
    # w _sharp on its own would not type, since w is cohesive
    ctx = telescope(("A", "Type 0"), ("w", "Sharp (Sharp A)"))
    t = term("(w _sharp _sharp) ^sharp", ctx)
    assert normalize(Environment(), ctx, t) == t
    assert normalize(Environment(), ctx, normalize(Environment(), ctx, t)) == t


def test_sharp_contraction_applies_to_a_crisp_subject():
    ctx = promote(telescope(("A", "Type 0"), ("w", "Sharp (Sharp A)")))
    assert normalize(Environment(), ctx, term("(w _sharp _sharp) ^sharp", ctx)) == term("w _sharp", ctx)


def test_flat_has_no_judgmental_eta():
    ctx = telescope(("A", "Type 0"), ("x", "Flat A"))
    rebuilt = term("letflat u := x motive _. Flat A in u ^flat", ctx)
    assert not convertible(Environment(), ctx, term("x", ctx), rebuilt, term("Flat A", ctx))
    assert convertible(Environment(), ctx, rebuilt, rebuilt, term("Flat A", ctx))


def test_function_eta():
    ctx = telescope(("A", "Type 0"), ("B", "Type 0"), ("f", "A -> B"))
    assert convertible(Environment(), ctx, term("f", ctx), term("fun x. f x", ctx), term("A -> B", ctx))


def test_unit_eta_identifies_all_points():
    ctx = telescope(("u", "Unit"), ("v", "Unit"))
    assert convertible(Environment(), ctx, term("u", ctx), term("v", ctx), term("Unit", ctx))


def test_distinct_variables_are_not_convertible():
    ctx = telescope(("A", "Type 0"), ("x", "A"), ("y", "A"))
    assert not convertible(Environment(), ctx, term("x", ctx), term("y", ctx), term("A", ctx))


def test_sharp_extensionality_with_pair_eta():
    ctx = telescope(("A", "Type 0"), ("B", "Type 0"), ("s", "Sharp (A * B)"))
    rebuilt = term("((s _sharp).1, (s _sharp).2) ^sharp", ctx)
    assert convertible(Environment(), ctx, rebuilt, term("s", ctx), term("Sharp (A * B)", ctx))


def test_cohesive_sharp_points_stay_apart():
    ctx = telescope(("A", "Type 0"), ("u", "Sharp A"), ("v", "Sharp A"))
    assert not convertible(Environment(), ctx, term("u", ctx), term("v", ctx), term("Sharp A", ctx))


def test_letflat_and_path_induction_compute(accepts):
    env = accepts("postulate A : Type 0\npostulate a : A")
    ctx = Telescope()
    assert normalize(env, ctx, term("letflat u := a ^flat in u", ctx, env)) == Const("a")
    path_ind = term("J (x.y.p. A) (x. x) a a (refl a)", ctx, env)
    assert normalize(env, ctx, path_ind) == Const("a")


def test_stuck_letflat_is_kept():
    ctx = telescope(("A", "Type 0"), ("x", "Flat A"))
    t = term("letflat u := x motive _. A in u", ctx)
    assert normalize(Environment(), ctx, t) == t


def test_fuel_runs_out():
    t = term("(fun x. x) ((fun x. x) ((fun x. x) ((fun x. x) star)))", Telescope())
    with pytest.raises(CheckError) as err:
        normalize(Environment(), Telescope(), t, fuel=3)
    assert err.value.code is DiagnosticCode.FUEL_EXHAUSTED


def test_match_rewrite_first_rule_wins():
    first = RewriteRule("r1", Pattern("f", (PatternVar("x"),)), Var(0))
    second = RewriteRule("r2", Pattern("f", (PatternVar("y"),)), Star())
    found = match_rewrite({"f": (first, second)}, "f", (EApp(VStar()),))
    assert found.rule is first
    assert found.consumed == 1


def test_match_rewrite_constructor_atoms():
    rule = RewriteRule("r", Pattern("f", (PatternCon("c", ("a",)),)), Var(0))
    arg = VNeutral(HConst("c"), (EApp(VStar()),))
    found = match_rewrite({"f": (rule,)}, "f", (EApp(arg),))
    assert found is not None and len(found.assignment) == 1
    other = VNeutral(HConst("d"), (EApp(VStar()),))
    assert match_rewrite({"f": (rule,)}, "f", (EApp(other),)) is None


def test_match_rewrite_needs_enough_arguments():
    rule = RewriteRule("r", Pattern("f", (PatternVar("x"), PatternVar("y"))), Var(0))
    assert match_rewrite({"f": (rule,)}, "f", (EApp(VStar()),)) is None


# ============================================================================
# Judgmental equalities of the modal fragment
# ============================================================================

MODAL_POSTULATES = """
postulate A : Type 0
postulate B : Type 0
postulate C : Type 0
postulate c : A
postulate c2 : A
postulate f : A -> B
postulate h : A -> B
postulate g : B -> C
postulate m : Sharp A
postulate m2 : Sharp A
postulate z : Sharp (Sharp A)
postulate z2 : Sharp (Sharp A)
postulate F : Flat A -> B
"""

JUDGMENTAL = [
    # sharp computation and uniqueness
    ("(c ^sharp) _sharp", "c", "c2", "A"),
    ("(m _sharp) ^sharp", "m", "m2", "Sharp A"),
    ("((z _sharp) _sharp) ^sharp ^sharp", "z", "z2", "Sharp (Sharp A)"),
    # functoriality and naturality of the sharp action on maps
    ("(fun t. (g (t _sharp)) ^sharp) ((fun s. (f (s _sharp)) ^sharp) m)",
     "(g (f (m _sharp))) ^sharp", "(g (h (m _sharp))) ^sharp", "Sharp C"),
    ("(fun s. (f (s _sharp)) ^sharp) (c ^sharp)", "(f c) ^sharp", "(h c) ^sharp", "Sharp B"),
    # flat computation, alone and under a postcomposition
    ("letflat u := c ^flat motive _. A in u", "c", "c2", "A"),
    ("(fun x. letflat u := x motive _. B in F (u ^flat)) (c ^flat)", "F (c ^flat)", "F (c2 ^flat)", "B"),
]


@pytest.mark.parametrize("lhs, rhs, perturbed, ty", JUDGMENTAL)
def test_judgmental_equalities(accepts, lhs, rhs, perturbed, ty):
    env = accepts(MODAL_POSTULATES)
    ctx = Telescope()
    at = term(ty, ctx, env)
    assert convertible(env, ctx, term(lhs, ctx, env), term(rhs, ctx, env), at)
    assert not convertible(env, ctx, term(lhs, ctx, env), term(perturbed, ctx, env), at)
