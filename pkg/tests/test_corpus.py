import json
import threading

import pytest

from corpus import ManifestError, check_file, check_source, list_targets, load_manifest, run_corpus


def write_manifest(tmp_path, lines, files):
    for name, source in files.items():
        path = tmp_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(source, encoding="utf-8")
    manifest = tmp_path / "manifest.txt"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest


# ============================================================================
# Manifest
# ============================================================================

def test_manifest_lists_prelude_first(manifest):
    tiers = list(manifest.tiers)
    assert tiers[0] == "prelude"
    assert {"tier1", "tier2", "negative"} <= set(tiers)


def test_every_negative_file_names_a_code(manifest):
    for entry in manifest.in_tier("negative"):
        assert entry.expectation.code is not None, entry.path


def test_manifest_rejects_missing_file(tmp_path):
    path = write_manifest(tmp_path, ["tier1 a.coh check a"], {})
    with pytest.raises(ManifestError, match="does not exist"):
        load_manifest(path)


def test_manifest_rejects_unknown_expectation(tmp_path):
    path = write_manifest(tmp_path, ["tier1 a.coh maybe a"], {"a.coh": ""})
    with pytest.raises(ManifestError, match="Unknown expectation"):
        load_manifest(path)


def test_manifest_rejects_prelude_after_other_tiers(tmp_path):
    path = write_manifest(
        tmp_path,
        ["tier1 a.coh check a", "prelude p.coh check p"],
        {"a.coh": "", "p.coh": ""},
    )
    with pytest.raises(ManifestError, match="prelude"):
        load_manifest(path)


def test_manifest_statement_and_comments(tmp_path):
    path = write_manifest(
        tmp_path,
        ["# comment", "", "tier1 a.coh fail:ScopeError scope check : unbound names are errors"],
        {"a.coh": ""},
    )
    (entry,) = load_manifest(path).entries
    assert entry.label == "scope check"
    assert entry.statement == "unbound names are errors"
    assert str(entry.expectation) == "fail:ScopeError"


def test_list_targets(manifest):
    targets = list_targets(manifest)
    assert len(targets) == len(manifest.entries)
    first = targets[0]
    assert first.file == "prelude/core.coh"
    assert first.status == "check"


# ============================================================================
# Running
# ============================================================================

def test_check_source_keeps_declarations_before_failure(prelude_env):
    outcome = check_source(prelude_env, "def one : Type 1 := Type 0\ndef two : Type 0 := Type 0\n", "<t>")
    assert [d.name for d in outcome.declarations] == ["one", "two"]
    assert "one" in outcome.env and "two" not in outcome.env
    assert outcome.code == "UniverseError"


def test_parse_error_outcome(prelude_env):
    outcome = check_source(prelude_env, "def x : := star", "<t>")
    assert outcome.code == "ParseError"
    assert outcome.diagnostic_dict()["line"] == 1


@pytest.mark.parametrize("tier", ["prelude", "tier1", "tier2", "negative"])
def test_corpus_tier_meets_expectations(manifest, tier):
    report = run_corpus(manifest, tier)
    failures = [f"{r.file}: {r.outcome} {r.code} {r.message}" for r in report.failures]
    assert not failures, "\n".join(failures)
    assert {r.tier for r in report.records} <= {tier, "prelude"}


def test_tiers_do_not_see_each_other(tmp_path):
    path = write_manifest(
        tmp_path,
        [
            "prelude p.coh check p",
            "first a.coh check a",
            "second b.coh fail:ScopeError b",
        ],
        {
            "p.coh": "postulate A : Type 0\n",
            "a.coh": "postulate a : A\n",
            "b.coh": "postulate b : Id A a a\n",
        },
    )
    report = run_corpus(load_manifest(path))
    assert report.ok


def test_unexpected_success_is_reported(tmp_path):
    path = write_manifest(
        tmp_path,
        ["neg ok.coh fail:CrispnessViolation ok"],
        {"ok.coh": "postulate A : Type 0\n"},
    )
    report = run_corpus(load_manifest(path))
    assert not report.ok
    (record,) = report.failures
    assert record.outcome == "checked"
    assert "<-- unexpected" in report.render_table()


def test_failed_files_are_not_visible_to_later_files(tmp_path):
    path = write_manifest(
        tmp_path,
        ["t a.coh fail:UniverseError a", "t b.coh fail:ScopeError b"],
        {
            "a.coh": "postulate A : Type 0\ndef bad : Type 0 := Type 0\n",
            "b.coh": "postulate c : A\n",
        },
    )
    assert run_corpus(load_manifest(path)).ok


def test_unknown_tier(manifest):
    with pytest.raises(ManifestError, match="Unknown tier"):
        run_corpus(manifest, "tier9")


def test_parallel_run_matches_sequential(tmp_path):
    files = {f"t{i}.coh": f"postulate A{i} : Type 0\n" for i in range(4)}
    lines = [f"tier{i} t{i}.coh check t{i}" for i in range(4)]
    manifest = load_manifest(write_manifest(tmp_path, lines, files))
    sequential = run_corpus(manifest, jobs=1).to_json()
    parallel = run_corpus(manifest, jobs=3).to_json()
    assert sequential == parallel
    assert [r["file"] for r in json.loads(parallel)] == [f"t{i}.coh" for i in range(4)]


def test_parallel_run_restores_the_thread_stack_size(tmp_path):
    files = {f"t{i}.coh": f"postulate A{i} : Type 0\n" for i in range(3)}
    lines = [f"tier{i} t{i}.coh check t{i}" for i in range(3)]
    manifest = load_manifest(write_manifest(tmp_path, lines, files))
    before = threading.stack_size()
    assert run_corpus(manifest, jobs=2).ok
    assert threading.stack_size() == before


# ============================================================================
# Negative files fail in the body, not in the statement
# ============================================================================

@pytest.mark.parametrize("path, code, line", [
    ("negative/flat_of_cohesive_term.coh", "CrispnessViolation", 7),
    ("negative/motive_mismatch.coh", "MotiveMismatch", 5),
    ("negative/subst_cohesive.coh", "CrispnessViolation", 11),
    ("negative/letflat_subst_cohesive.coh", "CrispnessViolation", 7),
])
def test_negative_file_is_rejected_at_its_body(manifest, prelude_env, path, code, line):
    outcome = check_file(prelude_env, manifest.root / path, display=path)
    assert outcome.code == code, outcome.message
    assert outcome.diagnostic_dict()["line"] == line
    *accepted, rejected = outcome.declarations
    assert all(d.ok for d in accepted) and len(accepted) >= 1
    assert not rejected.ok
