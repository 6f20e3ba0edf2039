import pytest

from diagnostics import CheckError, DiagnosticCode, ParseError
from kernel import Environment, GlobalEntry
from parser import (
    SApp, SFst, SPi, SSharpElim, SSharpIntro, SSigma, SSnd, SVar,
    parse_module, parse_term, pretty, resolve, resolve_term, tokenize,
)
from syntax import (
    App, Const, FlatLet, Lam, PatternCon, PatternVar, Pi, SharpElim, Sigma, Universe, Var,
)


def test_tokenize_drops_comments_and_recognizes_modal_operators():
    kinds = [t.type for t in tokenize("x ^sharp _sharp ^flat -- a comment\n.1")]
    assert kinds == ["NAME", "SHARP_INTRO", "SHARP_ELIM", "FLAT_INTRO", "PROJ1"]


def test_keywords_are_not_names():
    kinds = [t.type for t in tokenize("fun funny _sharp _sharpen Type")]
    assert kinds == ["_FUN", "NAME", "SHARP_ELIM", "NAME", "_TYPE"]


def test_unicode_spellings():
    kinds = [t.type for t in tokenize("λ x . ♯ ♭ → ×")]
    assert kinds == ["_LAMBDA", "NAME", "_DOT", "_SHARP_SYM", "_FLAT_SYM", "_ARROW", "_TIMES"]


def test_unicode_and_ascii_parse_alike():
    assert resolve_term(parse_term("λ f. ♯ (f → f × f)")) == resolve_term(parse_term("fun f. Sharp (f -> f * f)"))


def test_illegal_character_reports_position():
    with pytest.raises(ParseError) as err:
        tokenize("def x : Type 0 := $", "bad.coh")
    assert err.value.span.file == "bad.coh"
    assert err.value.span.start_col == 19


def test_binder_group_folds_into_nested_pi():
    t = parse_term("(x y : A) -> B")
    assert isinstance(t, SPi) and t.name == "x"
    assert isinstance(t.codomain, SPi) and t.codomain.name == "y"


def test_dependent_pair_type():
    t = parse_term("(x : A) * B x")
    assert isinstance(t, SSigma)
    assert isinstance(t.second, SApp)


def test_postfix_applies_to_whole_application():
    t = parse_term("f x _sharp")
    assert isinstance(t, SSharpElim)
    assert isinstance(t.inner, SApp)


def test_postfix_chain():
    t = parse_term("c.1.2")
    assert isinstance(t, SSnd)
    assert isinstance(t.pair, SFst)
    assert isinstance(t.pair.pair, SVar)


def test_sharp_intro_of_projection():
    t = parse_term("(s _sharp).1 ^sharp")
    assert isinstance(t, SSharpIntro)
    assert isinstance(t.inner, SFst)


def test_missing_assign_is_a_parse_error():
    with pytest.raises(ParseError) as err:
        parse_module("def f : Type 0 Type 0")
    assert "':='" in str(err.value)


def test_unknown_declaration_keyword():
    with pytest.raises(ParseError):
        parse_module("lemma f : Type 0 := Unit")


def test_resolve_produces_de_bruijn_terms():
    (d,) = resolve(parse_module("def id : (A : Type 0) -> A -> A := fun A x. x"))
    assert d.type == Pi(Universe(0), Pi(Var(0), Var(1)))
    assert d.body == Lam(Lam(Var(0)))


def test_letflat_binds_crisp_variable_in_body_and_motive():
    t = resolve_term(parse_term("letflat u := z motive w. A in u"), scope=["A", "z"])
    assert isinstance(t, FlatLet)
    assert t.scrutinee == Var(0)
    assert t.motive == Var(2)
    assert t.body == Var(0)


def test_underscore_never_resolves():
    with pytest.raises(CheckError) as err:
        resolve_term(parse_term("fun _. _"))
    assert err.value.code is DiagnosticCode.SCOPE_ERROR


def test_unbound_name_suggests_close_match():
    env = Environment().define(GlobalEntry("transport", Universe(0)))
    with pytest.raises(CheckError) as err:
        resolve_term(parse_term("transprot"), env)
    assert err.value.code is DiagnosticCode.SCOPE_ERROR
    assert "did you mean transport?" in err.value.diagnostic.message


def test_duplicate_declaration_in_one_file():
    with pytest.raises(CheckError) as err:
        resolve(parse_module("postulate A : Type 0\npostulate A : Type 0"))
    assert err.value.code is DiagnosticCode.DUPLICATE_NAME


def test_rewrite_atoms_classified_against_known_constants():
    decls = resolve(parse_module(
        "postulate N : Type 0\n"
        "postulate z : N\n"
        "postulate s : N -> N\n"
        "postulate rec : N -> N -> N\n"
        "rewrite rec_z : rec a z => a\n"
        "rewrite rec_s : rec a (s n) => rec a n\n"
    ))
    rec_z, rec_s = decls[-2], decls[-1]
    assert rec_z.lhs.args == (PatternVar("a"), PatternCon("z", ()))
    assert rec_s.lhs.args == (PatternVar("a"), PatternCon("s", ("n",)))
    assert rec_s.rhs == App(App(Const("rec"), Var(1)), Var(0))


def test_forced_constructor_arguments():
    decls = resolve(parse_module(
        "postulate T : Type 0 -> Type 0\n"
        "postulate mk : (A : Type 0) -> A -> T A\n"
        "postulate get : (A : Type 0) -> T A -> A\n"
        "rewrite get_mk : get A (mk .A a) => a\n"
    ))
    rule = decls[-1]
    assert rule.lhs.args[1] == PatternCon("mk", ("A", "a"), frozenset({0}))
    assert rule.lhs.variables() == ["A", "a"]
    assert rule.rhs == Var(0)


def test_rewrite_with_unknown_head():
    with pytest.raises(CheckError) as err:
        resolve(parse_module("rewrite r : nothing x => x"))
    assert err.value.code is DiagnosticCode.SCOPE_ERROR


def test_pretty_output_parses_back_to_same_term():
    source = "(A : Type 0) -> (B : A -> Type 0) -> Sharp ((x : A) * B x) -> Flat (Sharp A)"
    t = resolve_term(parse_term(source))
    assert resolve_term(parse_term(pretty(t))) == t


def test_pretty_renames_shadowing_binders():
    t = Lam(Lam(App(Var(1), Var(0)), name="x"), name="x")
    assert pretty(t) == "fun x x1. x x1"


def test_pretty_sharp_elim_of_application():
    t = Lam(SharpElim(App(Var(0), Var(0))), name="f")
    assert pretty(t) == "fun f. f f _sharp"


def test_pretty_non_dependent_sigma():
    t = Sigma(Universe(0), Universe(0))
    assert pretty(t) == "Type 0 * Type 0"


def test_binder_group_needs_plain_names():
    with pytest.raises(ParseError) as err:
        parse_term("(f (g x) : A) -> B")
    assert "binder names" in str(err.value)


def test_end_of_file_error_points_past_last_token():
    with pytest.raises(ParseError) as err:
        parse_module("postulate A :", "cut.coh")
    assert "end of file" in str(err.value)
    assert err.value.span.file == "cut.coh"
    assert err.value.span.start_line == 1


def test_letflat_motive_is_optional():
    t = parse_term("letflat u := x in u ^flat")
    assert t.motive is None and t.motive_name is None


def test_declaration_spans_cover_their_lines():
    first, second = parse_module("postulate A : Type 0\ndef a : A -> A :=\n  fun x. x\n", "two.coh")
    assert (first.span.start_line, first.span.end_line) == (1, 1)
    assert (second.span.start_line, second.span.end_line) == (2, 3)
