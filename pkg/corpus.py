"""
Corpus runner: the manifest, per-file checking and the tiered acceptance run.

The manifest lists every ``.coh`` file with its tier and expectation. The
prelude tier is checked first into a frozen environment; every other tier
starts from that environment and accumulates the files that check.
"""
import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from diagnostics import CheckError, CohesiveKernelError, DiagnosticCode, ParseError
from equality import DEFAULT_FUEL
from kernel import DeclarationResult, Environment, check_module
from logger import log_corpus_file, log_error, logger
from parser import Resolver, parse_module

PRELUDE_TIER = "prelude"
WORKER_STACK_SIZE = 256 * 1024 * 1024


class ManifestError(CohesiveKernelError):
    """Raised when the manifest is unreadable, malformed or names a missing file"""
    pass


# ============================================================================
# Manifest
# ============================================================================

@dataclass(frozen=True)
class Expectation:
    """``check`` (must check) or ``fail:<Code>`` (must be rejected with that code)"""
    code: Optional[DiagnosticCode] = None

    @property
    def must_check(self) -> bool:
        return self.code is None

    @classmethod
    def parse(cls, text: str) -> "Expectation":
        if text == "check":
            return cls()
        if text.startswith("fail:"):
            try:
                return cls(DiagnosticCode.parse(text[len("fail:"):]))
            except ValueError as e:
                raise ManifestError(str(e))
        raise ManifestError(f"Unknown expectation {text!r}; use 'check' or 'fail:<Code>'")

    def __str__(self) -> str:
        return "check" if self.code is None else f"fail:{self.code.value}"


@dataclass(frozen=True)
class ManifestEntry:
    tier: str
    path: str
    expectation: Expectation
    label: str
    statement: str = ""


@dataclass(frozen=True)
class TargetRecord:
    """A corpus target with what it establishes, for listing"""
    file: str
    label: str
    anchor: str
    status: str


@dataclass
class CorpusManifest:
    root: Path
    entries: List[ManifestEntry] = field(default_factory=list)

    @property
    def tiers(self) -> Dict[str, List[str]]:
        """Tier name to ordered file list, tiers in order of first appearance."""
        tiers: Dict[str, List[str]] = {}
        for entry in self.entries:
            tiers.setdefault(entry.tier, []).append(entry.path)
        return tiers

    @property
    def expectations(self) -> Dict[str, Expectation]:
        return {entry.path: entry.expectation for entry in self.entries}

    def in_tier(self, tier: str) -> List[ManifestEntry]:
        return [entry for entry in self.entries if entry.tier == tier]


def load_manifest(path: Path) -> CorpusManifest:
    """
    Read a manifest file.

    Each non-blank line not starting with ``#`` reads
    ``<tier> <path> <expectation> <label> [: <statement>]``; paths are relative
    to the manifest's directory.

    Raises:
        ManifestError: on an unreadable manifest, a malformed line or a listed file that does not exist
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ManifestError(f"Cannot read manifest {path}: {e}")

    manifest = CorpusManifest(root=path.parent)
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, statement = line.partition(" : ")
        fields = head.split()
        if len(fields) < 4:
            raise ManifestError(f"{path}:{lineno}: expected '<tier> <path> <expectation> <label>'")
        tier, file, expectation, label = fields[0], fields[1], fields[2], " ".join(fields[3:])
        if file in seen:
            raise ManifestError(f"{path}:{lineno}: {file} is listed twice")
        if not (manifest.root / file).is_file():
            raise ManifestError(f"{path}:{lineno}: listed file {file} does not exist")
        seen.add(file)
        manifest.entries.append(ManifestEntry(tier, file, Expectation.parse(expectation), label, statement.strip()))

    if any(e.tier == PRELUDE_TIER for e in manifest.entries):
        first_other = next((i for i, e in enumerate(manifest.entries) if e.tier != PRELUDE_TIER), None)
        last_prelude = max(i for i, e in enumerate(manifest.entries) if e.tier == PRELUDE_TIER)
        if first_other is not None and first_other < last_prelude:
            raise ManifestError(f"{path}: prelude files must be listed before all other tiers")
    logger.debug("Manifest loaded", extra={"manifest": str(path), "files": len(manifest.entries)})
    return manifest


def list_targets(manifest: CorpusManifest) -> List[TargetRecord]:
    """Project the manifest onto target records, in manifest order."""
    return [
        TargetRecord(f"{e.tier}/{Path(e.path).name}", e.label, e.statement, str(e.expectation))
        for e in manifest.entries
    ]


# ============================================================================
# Checking one file
# ============================================================================

@dataclass
class FileOutcome:
    """Result of checking one source file against an environment"""
    file: str
    env: Environment
    declarations: List[DeclarationResult] = field(default_factory=list)
    error: Optional[CohesiveKernelError] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def code(self) -> Optional[str]:
        if isinstance(self.error, CheckError):
            return self.error.code.value
        if isinstance(self.error, ParseError):
            return "ParseError"
        return None

    @property
    def message(self) -> Optional[str]:
        if isinstance(self.error, CheckError):
            return self.error.diagnostic.message
        if isinstance(self.error, ParseError):
            return self.error.to_dict()["message"]
        return None

    def diagnostic_dict(self) -> Optional[dict]:
        if isinstance(self.error, CheckError):
            return self.error.diagnostic.to_dict()
        if isinstance(self.error, ParseError):
            return self.error.to_dict()
        return None


def check_source(env: Environment, source: str, file: str, fuel: int = DEFAULT_FUEL) -> FileOutcome:
    """
    Parse, resolve and check a file declaration by declaration.

    Each declaration is resolved against everything checked before it, so the
    first failure (parse, scope or typing) ends the file.

    Returns:
        The outcome, whose environment holds every declaration that checked
    """
    outcome = FileOutcome(file, env)
    try:
        surface = parse_module(source, file)
    except ParseError as e:
        outcome.error = e
        return outcome

    resolver = Resolver.for_env(env)
    for sd in surface:
        try:
            decl = resolver.declaration(sd)
        except CheckError as e:
            outcome.error = e
            return outcome
        outcome.env, results = check_module(outcome.env, [decl], fuel)
        outcome.declarations.extend(results)
        if not results[-1].ok:
            outcome.error = results[-1].error
            return outcome
    return outcome


def check_file(env: Environment, path: Path, fuel: int = DEFAULT_FUEL, display: Optional[str] = None) -> FileOutcome:
    """Read and check one file; I/O failures propagate as OSError."""
    source = Path(path).read_text(encoding="utf-8")
    return check_source(env, source, display or str(path), fuel)


# ============================================================================
# Corpus run
# ============================================================================

@dataclass
class FileRecord:
    """One row of the corpus report"""
    tier: str
    file: str
    expectation: str
    outcome: str
    code: Optional[str]
    message: Optional[str]
    ok: bool
    ms: float = 0.0

    def to_dict(self) -> Dict[str, object]:
        """Report object without timings, so JSON runs are byte-identical."""
        return {
            "tier": self.tier,
            "file": self.file,
            "expectation": self.expectation,
            "outcome": self.outcome,
            "code": self.code,
            "message": self.message,
            "ok": self.ok,
        }


@dataclass
class CorpusReport:
    records: List[FileRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    @property
    def failures(self) -> List[FileRecord]:
        return [r for r in self.records if not r.ok]

    def to_json(self) -> str:
        return json.dumps([r.to_dict() for r in self.records], ensure_ascii=False) + "\n"

    def render_table(self) -> str:
        rows = [("FILE", "EXPECTATION", "OUTCOME", "MS")]
        for r in self.records:
            outcome = r.outcome if r.code is None else f"{r.outcome} ({r.code})"
            mark = "" if r.ok else "  <-- unexpected"
            rows.append((f"{r.tier}/{Path(r.file).name}", r.expectation, outcome + mark, f"{r.ms:.0f}"))
        widths = [max(len(row[i]) for row in rows) for i in range(3)]
        lines = [
            f"{row[0]:<{widths[0]}}  {row[1]:<{widths[1]}}  {row[2]:<{widths[2]}}  {row[3]:>6}"
            for row in rows
        ]
        passed = sum(1 for r in self.records if r.ok)
        lines.append(f"{passed}/{len(self.records)} expectations met")
        return "\n".join(lines) + "\n"


def _judge(entry: ManifestEntry, outcome: FileOutcome, ms: float) -> FileRecord:
    expectation = entry.expectation
    if outcome.ok:
        ok = expectation.must_check
    else:
        ok = expectation.code is not None and outcome.code == expectation.code.value
    return FileRecord(
        tier=entry.tier,
        file=entry.path,
        expectation=str(expectation),
        outcome="checked" if outcome.ok else "rejected",
        code=outcome.code,
        message=outcome.message,
        ok=ok,
        ms=ms,
    )


def _run_tier(manifest: CorpusManifest, entries: Sequence[ManifestEntry], env: Environment,
              fuel: int) -> Tuple[Environment, List[FileRecord]]:
    records: List[FileRecord] = []
    for entry in entries:
        started = time.perf_counter()
        try:
            outcome = check_file(env, manifest.root / entry.path, fuel, display=entry.path)
        except OSError as e:
            log_error("Cannot read corpus file", e, file=entry.path)
            outcome = FileOutcome(entry.path, env, error=ManifestError(str(e)))
        record = _judge(entry, outcome, (time.perf_counter() - started) * 1000.0)
        log_corpus_file(entry.path, entry.tier, record.ok, outcome=record.outcome, code=record.code)
        records.append(record)
        # later files see only what passed
        if outcome.ok and entry.expectation.must_check:
            env = outcome.env
    return env, records


def run_corpus(manifest: CorpusManifest, tier_filter: Optional[str] = None, fuel: int = DEFAULT_FUEL,
               jobs: int = 1) -> CorpusReport:
    """
    Check corpus files against their expectations.

    Args:
        manifest: the loaded manifest
        tier_filter: run only this tier (the prelude is always loaded); None runs everything
        fuel: reduction budget per declaration
        jobs: worker threads; tiers other than the prelude run independently

    Returns:
        Report in manifest order regardless of scheduling
    """
    tiers = manifest.tiers
    if tier_filter is not None and tier_filter not in tiers:
        raise ManifestError(f"Unknown tier {tier_filter!r}; known tiers: {', '.join(tiers)}")

    prelude_env, prelude_records = _run_tier(manifest, manifest.in_tier(PRELUDE_TIER), Environment(), fuel)
    selected = [t for t in tiers if t != PRELUDE_TIER and tier_filter in (None, t)]

    results: Dict[str, List[FileRecord]] = {}
    if jobs > 1 and len(selected) > 1:
        # the checker recurses on term depth; the larger stack is scoped to these workers
        previous = threading.stack_size(WORKER_STACK_SIZE)
        try:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                futures = {t: pool.submit(_run_tier, manifest, manifest.in_tier(t), prelude_env, fuel)
                           for t in selected}
                for tier, future in futures.items():
                    results[tier] = future.result()[1]
        finally:
            threading.stack_size(previous)
    else:
        for tier in selected:
            results[tier] = _run_tier(manifest, manifest.in_tier(tier), prelude_env, fuel)[1]

    report = CorpusReport()
    if tier_filter in (None, PRELUDE_TIER):
        report.records.extend(prelude_records)
    else:
        # a broken prelude invalidates every other tier
        report.records.extend(r for r in prelude_records if not r.ok)
    for tier in selected:
        report.records.extend(results[tier])

    logger.info("Corpus run finished", extra={
        "tier": tier_filter or "all",
        "files": len(report.records),
        "failures": len(report.failures),
    })
    return report
