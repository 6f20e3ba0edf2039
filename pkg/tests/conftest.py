"""
Shared fixtures: checking snippets against an empty environment or the prelude.
"""
from pathlib import Path
from typing import Optional

import pytest

from corpus import PRELUDE_TIER, FileOutcome, check_file, check_source, load_manifest
from kernel import Environment

ROOT = Path(__file__).resolve().parent.parent
MANIFEST = ROOT / "corpus" / "manifest.txt"


@pytest.fixture(scope="session")
def manifest():
    return load_manifest(MANIFEST)


@pytest.fixture(scope="session")
def prelude_env(manifest) -> Environment:
    """The environment every non-prelude tier starts from."""
    env = Environment()
    for entry in manifest.in_tier(PRELUDE_TIER):
        outcome = check_file(env, manifest.root / entry.path, display=entry.path)
        assert outcome.ok, f"{entry.path}: {outcome.message}"
        env = outcome.env
    return env


@pytest.fixture
def check_text():
    """Check a snippet; returns the FileOutcome."""
    def run(source: str, env: Optional[Environment] = None, fuel: int = 100_000) -> FileOutcome:
        return check_source(env or Environment(), source, "<test>", fuel)
    return run


@pytest.fixture
def accepts(check_text):
    def run(source: str, env: Optional[Environment] = None) -> Environment:
        outcome = check_text(source, env)
        assert outcome.ok, f"{outcome.code}: {outcome.message}"
        return outcome.env
    return run


@pytest.fixture
def rejects(check_text):
    def run(source: str, code: str, env: Optional[Environment] = None) -> FileOutcome:
        outcome = check_text(source, env)
        assert not outcome.ok, "expected the snippet to be rejected"
        assert outcome.code == code, f"got {outcome.code}: {outcome.message}"
        return outcome
    return run
