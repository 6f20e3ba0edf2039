"""
Typing judgments of spatial type theory.

Bidirectional checking over polarity-flagged telescopes. Sharp formation and
introduction work under a promoted telescope (every entry crisp). Flat
formation and introduction, and sharp elimination, first check that their
subject only mentions crisp variables and then type it in the telescope with
the cohesive entries removed. The flat eliminator is the only rule that binds
a crisp variable.
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

from diagnostics import CheckError, ContextEntry, DiagnosticCode, InternalError, SourceSpan
from equality import (
    DEFAULT_FUEL, Closure, Evaluator, RewriteRule, VFlatIntro, VFlatTy, VIdType, VPi,
    VRefl, VSharpTy, VSigma, VUniverse, VUnit, Value, fresh,
)
from logger import log_declaration, logger
from parser import pretty
from syntax import (
    App, Const, Declaration, Def, Entry, FlatIntro, FlatLet, FlatTy, Fst, IdType, J, Lam, Pair,
    PatternVar, Pi, Polarity, Refl, Rewrite, SharpElim, SharpIntro, SharpTy, Sigma, Snd,
    Star, Telescope, Term, Unit, Universe, Var, free_vars, rename, shift,
)


# ============================================================================
# Environment
# ============================================================================

@dataclass(frozen=True)
class GlobalEntry:
    """A checked definition (body present) or postulate (body absent)"""
    name: str
    type: Term
    body: Optional[Term] = None
    span: Optional[SourceSpan] = None

    @property
    def is_postulate(self) -> bool:
        return self.body is None


class Environment:
    """
    Global table of checked declarations and admitted rewrite rules.

    Environments are never mutated once built: ``define`` and ``add_rewrite``
    return a new environment. All entries are closed, so every constant is
    crisp.
    """

    def __init__(self, entries: Optional[Dict[str, GlobalEntry]] = None,
                 rewrites: Optional[Dict[str, Tuple[RewriteRule, ...]]] = None,
                 rule_names: Optional[frozenset] = None,
                 value_cache: Optional[dict] = None,
                 type_cache: Optional[dict] = None):
        self._entries: Dict[str, GlobalEntry] = dict(entries or {})
        self._rewrites: Dict[str, Tuple[RewriteRule, ...]] = dict(rewrites or {})
        self._rule_names = frozenset(rule_names or ())
        # evaluation caches; valid for every extension of this environment
        self.value_cache: dict = dict(value_cache or {})
        self.type_cache: dict = dict(type_cache or {})

    def lookup(self, name: str) -> Optional[GlobalEntry]:
        return self._entries.get(name)

    def __contains__(self, name: object) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> List[str]:
        """Constant names in declaration order."""
        return list(self._entries)

    @property
    def rewrites(self) -> Dict[str, Tuple[RewriteRule, ...]]:
        return self._rewrites

    def has_rule(self, name: str) -> bool:
        return name in self._rule_names

    def rule_names(self) -> List[str]:
        return sorted(self._rule_names)

    def define(self, entry: GlobalEntry) -> "Environment":
        entries = dict(self._entries)
        entries[entry.name] = entry
        return Environment(entries, self._rewrites, self._rule_names, self.value_cache, self.type_cache)

    def add_rewrite(self, rule: RewriteRule) -> "Environment":
        rewrites = dict(self._rewrites)
        rewrites[rule.lhs.head] = rewrites.get(rule.lhs.head, ()) + (rule,)
        # cached values of defined constants may now reduce further
        return Environment(self._entries, rewrites, self._rule_names | {rule.name})


# ============================================================================
# Telescope operations
# ============================================================================

class CrispDecision(NamedTuple):
    """Outcome of a crispness query; ``offender`` is the first cohesive variable found."""
    crisp: bool
    offender: Optional[str] = None
    index: Optional[int] = None


def promote(ctx: Telescope) -> Telescope:
    """Turn every entry crisp."""
    return Telescope(tuple(Entry(e.name, e.type, Polarity.CRISP) for e in ctx.entries))


def is_crisp(ctx: Telescope, t: Term) -> CrispDecision:
    """
    Decide whether every free variable of t is crisp in ctx.

    Variables are inspected in telescope order, so the reported offender is
    the earliest cohesive entry t mentions.
    """
    for index in sorted(free_vars(t), reverse=True):
        entry = ctx.entry(index)
        if not entry.is_crisp:
            return CrispDecision(False, entry.name, index)
    return CrispDecision(True)


@dataclass(frozen=True)
class Context:
    """A telescope together with its semantic valuation (one fresh variable per entry)."""
    telescope: Telescope
    env: Tuple[Value, ...]
    types: Tuple[Value, ...]

    def __len__(self) -> int:
        return len(self.env)

    def var(self, index: int) -> Value:
        return self.env[len(self.env) - 1 - index]

    def names(self) -> List[str]:
        return self.telescope.names()

    def promoted(self) -> "Context":
        return Context(promote(self.telescope), self.env, self.types)


# ============================================================================
# Type checker
# ============================================================================

class TypeChecker:
    """Bidirectional checker bound to one environment."""

    def __init__(self, env: Environment, fuel: int = DEFAULT_FUEL):
        self.env = env
        self.ev = Evaluator(env, fuel)

    # ------------------------------------------------------------- contexts

    def context(self, telescope: Telescope) -> Context:
        rho, types = self.ev.context_values(telescope)
        return Context(telescope, rho, types)

    def bind(self, ctx: Context, name: str, ty: Value, polarity: Polarity = Polarity.COHESIVE) -> Context:
        depth = len(ctx)
        ty_term = self.ev.quote(depth, ty)
        return Context(
            ctx.telescope.extend(name, ty_term, polarity),
            ctx.env + (fresh(depth, name),),
            ctx.types + (ty,),
        )

    def _restrict(self, ctx: Context) -> Tuple[Context, Callable[[Term], Term], Callable[[Term], Term]]:
        """
        Remove the cohesive entries of ctx.

        Returns:
            The restricted context, a renaming of terms from ctx into it, and
            the renaming back
        """
        entries = ctx.telescope.entries
        new_level: Dict[int, int] = {}
        old_level: List[int] = []
        kept: List[Entry] = []
        for level, entry in enumerate(entries):
            if not entry.is_crisp:
                continue
            prefix_len = len(old_level)

            def local(i: int, level=level, prefix_len=prefix_len) -> int:
                target = level - 1 - i
                if target not in new_level:
                    raise InternalError(f"Crisp entry {entries[level].name} depends on cohesive {entries[target].name}")
                return prefix_len - 1 - new_level[target]

            kept.append(Entry(entry.name, rename(entry.type, local), Polarity.CRISP))
            new_level[level] = prefix_len
            old_level.append(level)

        n, m = len(entries), len(old_level)

        def to_new(i: int) -> int:
            level = n - 1 - i
            if level not in new_level:
                raise InternalError(f"Variable {entries[level].name} is not crisp")
            return m - 1 - new_level[level]

        def to_old(j: int) -> int:
            return n - 1 - old_level[m - 1 - j]

        restricted = self.context(Telescope(tuple(kept)))
        return restricted, (lambda t: rename(t, to_new)), (lambda t: rename(t, to_old))

    def conv(self, ctx: Context, ty: Optional[Value], a: Value, b: Value) -> bool:
        """One top-level conversion query. Each query starts with a full budget."""
        self.ev.refuel()
        return self.ev.conv(len(ctx), ctx.types, ty, a, b)

    def _restricted_infer(self, ctx: Context, t: Term) -> Value:
        rctx, to_new, to_old = self._restrict(ctx)
        ty = self.infer(rctx, to_new(t))
        return self.ev.eval(ctx.env, to_old(self.ev.quote(len(rctx), ty)))

    def _restricted_check(self, ctx: Context, t: Term, expected: Value) -> bool:
        """Check t against expected in the restricted context; False if expected cannot be moved there."""
        rctx, to_new, _ = self._restrict(ctx)
        expected_term = self.ev.quote(len(ctx), expected)
        if not is_crisp(ctx.telescope, expected_term).crisp:
            return False
        self.check(rctx, to_new(t), self.ev.eval(rctx.env, to_new(expected_term)))
        return True

    # ---------------------------------------------------------- diagnostics

    def show(self, ctx: Context, v: Value) -> str:
        return pretty(self.ev.quote(len(ctx), v), ctx.names(), reserved=self.env.names())

    def dump(self, ctx: Context) -> List[ContextEntry]:
        out: List[ContextEntry] = []
        names: List[str] = []
        for entry in ctx.telescope.entries:
            out.append(ContextEntry(entry.name, pretty(entry.type, names, reserved=self.env.names()),
                                    entry.polarity.value))
            names.append(entry.name)
        return out

    def fail(self, ctx: Context, code: DiagnosticCode, message: str) -> CheckError:
        return CheckError(code, message, context=self.dump(ctx))

    def _require_crisp(self, ctx: Context, t: Term, code: DiagnosticCode, what: str) -> None:
        decision = is_crisp(ctx.telescope, t)
        if not decision.crisp:
            raise self.fail(ctx, code, f"{what} must be crisp, but it uses the cohesive variable {decision.offender}")

    # ---------------------------------------------------------------- rules

    def infer(self, ctx: Context, t: Term) -> Value:
        try:
            return self._infer(ctx, t)
        except CheckError as err:
            raise err.locate(t.span)

    def check(self, ctx: Context, t: Term, expected: Value) -> None:
        try:
            self._check(ctx, t, expected)
        except CheckError as err:
            raise err.locate(t.span)

    def check_type(self, ctx: Context, t: Term, code: DiagnosticCode = DiagnosticCode.UNIVERSE_ERROR) -> int:
        """Check that t is a type and return its universe level."""
        ty = self.infer(ctx, t)
        if not isinstance(ty, VUniverse):
            raise self.fail(ctx, code, f"Expected a type, but this term has type {self.show(ctx, ty)}").locate(t.span)
        return ty.level

    def _infer(self, ctx: Context, t: Term) -> Value:
        match t:
            case Var(index):
                if not 0 <= index < len(ctx):
                    raise InternalError(f"Variable #{index} out of scope")
                return ctx.types[len(ctx) - 1 - index]

            case Const(name):
                if name not in self.env:
                    raise self.fail(ctx, DiagnosticCode.SCOPE_ERROR, f"Unknown constant {name}")
                return self.ev.constant_type(name)

            case Universe(level):
                return VUniverse(level + 1)

            case Pi(domain, codomain) | Sigma(domain, codomain):
                l1 = self.check_type(ctx, domain)
                l2 = self.check_type(self.bind(ctx, t.name, self.ev.eval(ctx.env, domain)), codomain)
                return VUniverse(max(l1, l2))

            case Lam():
                raise self.fail(ctx, DiagnosticCode.TYPE_MISMATCH,
                                "Cannot infer the type of a function; use it where its type is known")

            case App(Lam() as fn, arg):
                arg_ty = self.infer(ctx, arg)
                body_ty = self.infer(self.bind(ctx, fn.name, arg_ty), fn.body)
                body_term = self.ev.quote(len(ctx) + 1, body_ty)
                return self.ev.eval(ctx.env + (self.ev.eval(ctx.env, arg),), body_term)

            case App(fn, arg):
                fn_ty = self.infer(ctx, fn)
                if not isinstance(fn_ty, VPi):
                    raise self.fail(ctx, DiagnosticCode.NOT_A_FUNCTION,
                                    f"Applying a term of non-function type {self.show(ctx, fn_ty)}")
                self.check(ctx, arg, fn_ty.domain)
                return self.ev.instantiate(fn_ty.codomain, self.ev.eval(ctx.env, arg))

            case Pair(a, b):
                a_ty = self.infer(ctx, a)
                b_ty = self.infer(ctx, b)
                second = shift(self.ev.quote(len(ctx), b_ty), 0, 1)
                return VSigma(a_ty, Closure(ctx.env, second, ("_",)))

            case Fst(p):
                p_ty = self.infer(ctx, p)
                if not isinstance(p_ty, VSigma):
                    raise self.fail(ctx, DiagnosticCode.NOT_A_PAIR,
                                    f"Projecting from a term of non-pair type {self.show(ctx, p_ty)}")
                return p_ty.first

            case Snd(p):
                p_ty = self.infer(ctx, p)
                if not isinstance(p_ty, VSigma):
                    raise self.fail(ctx, DiagnosticCode.NOT_A_PAIR,
                                    f"Projecting from a term of non-pair type {self.show(ctx, p_ty)}")
                return self.ev.instantiate(p_ty.second, self.ev.fst(self.ev.eval(ctx.env, p)))

            case IdType(ty, lhs, rhs):
                level = self.check_type(ctx, ty)
                carrier = self.ev.eval(ctx.env, ty)
                self.check(ctx, lhs, carrier)
                self.check(ctx, rhs, carrier)
                return VUniverse(level)

            case Refl(point):
                carrier = self.infer(ctx, point)
                v = self.ev.eval(ctx.env, point)
                return VIdType(carrier, v, v)

            case J():
                return self._infer_path_ind(ctx, t)

            case Unit():
                return VUniverse(0)

            case Star():
                return VUnit()

            case SharpTy(inner):
                return VUniverse(self.check_type(ctx.promoted(), inner))

            case SharpIntro(inner):
                return VSharpTy(self.infer(ctx.promoted(), inner))

            case SharpElim(inner):
                code = DiagnosticCode.SHARP_ELIM_COHESIVE if isinstance(inner, Var) \
                    else DiagnosticCode.CRISPNESS_VIOLATION
                self._require_crisp(ctx, inner, code, "The subject of _sharp")
                inner_ty = self._restricted_infer(ctx, inner)
                if not isinstance(inner_ty, VSharpTy):
                    raise self.fail(ctx, DiagnosticCode.TYPE_MISMATCH,
                                    f"_sharp expects a term of a Sharp type, got {self.show(ctx, inner_ty)}")
                return inner_ty.inner

            case FlatTy(inner):
                self._require_crisp(ctx, inner, DiagnosticCode.FLAT_ON_COHESIVE_TYPE, "The type under Flat")
                rctx, to_new, _ = self._restrict(ctx)
                return VUniverse(self.check_type(rctx, to_new(inner)))

            case FlatIntro(inner):
                self._require_crisp(ctx, inner, DiagnosticCode.CRISPNESS_VIOLATION, "The subject of ^flat")
                return VFlatTy(self._restricted_infer(ctx, inner))

            case FlatLet(motive, scrutinee, body):
                if motive is None:
                    raise self.fail(ctx, DiagnosticCode.MOTIVE_MISMATCH,
                                    "letflat without a motive can only be checked against a known type")
                carrier = self._flat_carrier(ctx, scrutinee)
                scrutinee_ty = VFlatTy(carrier)
                self.check_type(self.bind(ctx, t.motive_name, scrutinee_ty), motive, DiagnosticCode.MOTIVE_MISMATCH)
                motive_closure = Closure(ctx.env, motive, (t.motive_name,))
                body_ctx = self.bind(ctx, t.name, carrier, Polarity.CRISP)
                self.check(body_ctx, body, self.ev.instantiate(motive_closure, VFlatIntro(body_ctx.var(0))))
                return self.ev.instantiate(motive_closure, self.ev.eval(ctx.env, scrutinee))

        raise InternalError(f"Cannot infer {type(t).__name__}")

    def _flat_carrier(self, ctx: Context, scrutinee: Term) -> Value:
        ty = self.infer(ctx, scrutinee)
        if not isinstance(ty, VFlatTy):
            raise self.fail(ctx, DiagnosticCode.TYPE_MISMATCH,
                            f"letflat expects a term of a Flat type, got {self.show(ctx, ty)}").locate(scrutinee.span)
        return ty.inner

    def _infer_path_ind(self, ctx: Context, t: J) -> Value:
        proof_ty = self.infer(ctx, t.proof)
        if not isinstance(proof_ty, VIdType):
            raise self.fail(ctx, DiagnosticCode.TYPE_MISMATCH,
                            f"J expects an identification, got {self.show(ctx, proof_ty)}").locate(t.proof.span)
        carrier = proof_ty.ty
        for end, expected in ((t.lhs, proof_ty.lhs), (t.rhs, proof_ty.rhs)):
            self.check(ctx, end, carrier)
            given = self.ev.eval(ctx.env, end)
            if not self.conv(ctx, carrier, given, expected):
                raise self.fail(ctx, DiagnosticCode.TYPE_MISMATCH,
                                f"J endpoint {self.show(ctx, given)} does not match the identification's "
                                f"endpoint {self.show(ctx, expected)}").locate(end.span)
        x_name, y_name, p_name = t.motive_names
        mctx = self.bind(ctx, x_name, carrier)
        mctx = self.bind(mctx, y_name, carrier)
        mctx = self.bind(mctx, p_name, VIdType(carrier, mctx.var(1), mctx.var(0)))
        self.check_type(mctx, t.motive, DiagnosticCode.MOTIVE_MISMATCH)
        motive = Closure(ctx.env, t.motive, t.motive_names)
        bctx = self.bind(ctx, t.base_name, carrier)
        z = bctx.var(0)
        self.check(bctx, t.base, self.ev.instantiate(motive, z, z, VRefl(z)))
        return self.ev.instantiate(
            motive,
            self.ev.eval(ctx.env, t.lhs),
            self.ev.eval(ctx.env, t.rhs),
            self.ev.eval(ctx.env, t.proof),
        )

    def _check(self, ctx: Context, t: Term, expected: Value) -> None:
        match t:
            case Lam(body):
                if not isinstance(expected, VPi):
                    raise self.fail(ctx, DiagnosticCode.TYPE_MISMATCH,
                                    f"A function was given where {self.show(ctx, expected)} was expected")
                inner = self.bind(ctx, t.name, expected.domain)
                self.check(inner, body, self.ev.instantiate(expected.codomain, inner.var(0)))
                return

            case Pair(a, b):
                if not isinstance(expected, VSigma):
                    raise self.fail(ctx, DiagnosticCode.TYPE_MISMATCH,
                                    f"A pair was given where {self.show(ctx, expected)} was expected")
                self.check(ctx, a, expected.first)
                self.check(ctx, b, self.ev.instantiate(expected.second, self.ev.eval(ctx.env, a)))
                return

            case Refl(point) if isinstance(expected, VIdType):
                self.check(ctx, point, expected.ty)
                v = self.ev.eval(ctx.env, point)
                for end in (expected.lhs, expected.rhs):
                    if not self.conv(ctx, expected.ty, v, end):
                        raise self.fail(ctx, DiagnosticCode.TYPE_MISMATCH,
                                        f"refl {self.show(ctx, v)} cannot prove {self.show(ctx, expected)}: "
                                        f"{self.show(ctx, v)} and {self.show(ctx, end)} are not convertible")
                return

            case SharpIntro(inner) if isinstance(expected, VSharpTy):
                self.check(ctx.promoted(), inner, expected.inner)
                return

            case FlatIntro(inner) if isinstance(expected, VFlatTy):
                self._require_crisp(ctx, inner, DiagnosticCode.CRISPNESS_VIOLATION, "The subject of ^flat")
                if self._restricted_check(ctx, inner, expected.inner):
                    return

            case FlatLet(None, scrutinee, body):
                carrier = self._flat_carrier(ctx, scrutinee)
                self.check(self.bind(ctx, t.name, carrier, Polarity.CRISP), body, expected)
                return

        inferred = self.infer(ctx, t)
        if not self.conv(ctx, None, inferred, expected):
            if isinstance(inferred, VUniverse) and isinstance(expected, VUniverse):
                raise self.fail(ctx, DiagnosticCode.UNIVERSE_ERROR,
                                f"Universe levels differ: Type {inferred.level} is not Type {expected.level}")
            raise self.fail(ctx, DiagnosticCode.TYPE_MISMATCH,
                            f"Expected {self.show(ctx, expected)}, but the term has type {self.show(ctx, inferred)}")


# ============================================================================
# Public operations
# ============================================================================

def infer(env: Environment, ctx: Telescope, t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """
    Infer the type of t.

    Returns:
        The inferred type, in normal form

    Raises:
        CheckError: with one of the stable diagnostic codes
    """
    tc = TypeChecker(env, fuel)
    c = tc.context(ctx)
    return tc.ev.quote(len(ctx), tc.infer(c, t))


def check(env: Environment, ctx: Telescope, t: Term, expected: Term, fuel: int = DEFAULT_FUEL) -> None:
    """Check t against expected (itself a type in ctx)."""
    tc = TypeChecker(env, fuel)
    c = tc.context(ctx)
    tc.check(c, t, tc.ev.eval(c.env, expected))


def check_declaration(env: Environment, d: Declaration, fuel: int = DEFAULT_FUEL) -> Environment:
    """
    Check one declaration in the empty telescope and extend the environment.

    Raises:
        CheckError: DuplicateName, RewriteIllFormed or any typing diagnostic
    """
    if isinstance(d, Rewrite):
        return check_rewrite(env, d, fuel)
    if d.name in env:
        raise CheckError(DiagnosticCode.DUPLICATE_NAME, f"{d.name} is already declared", d.span)
    tc = TypeChecker(env, fuel)
    empty = tc.context(Telescope())
    try:
        tc.check_type(empty, d.type)
        if isinstance(d, Def):
            tc.check(empty, d.body, tc.ev.eval((), d.type))
    except CheckError as err:
        raise err.locate(d.span)
    body = d.body if isinstance(d, Def) else None
    return env.define(GlobalEntry(d.name, d.type, body, d.span))


def check_rewrite(env: Environment, r: Rewrite, fuel: int = DEFAULT_FUEL) -> Environment:
    """
    Admit a rewrite rule after typing both sides.

    The pattern variables form a cohesive telescope: a variable in argument
    position takes the head's domain type, a variable under a constructor
    takes the constructor's domain type.
    """
    def ill_formed(message: str) -> CheckError:
        return CheckError(DiagnosticCode.REWRITE_ILL_FORMED, f"Rewrite {r.name}: {message}", r.span)

    if env.has_rule(r.name) or r.name in env:
        raise CheckError(DiagnosticCode.DUPLICATE_NAME, f"{r.name} is already declared", r.span)
    head = env.lookup(r.lhs.head)
    if head is None:
        raise CheckError(DiagnosticCode.SCOPE_ERROR, f"Unknown rewrite head {r.lhs.head}", r.span)
    if not head.is_postulate:
        raise ill_formed(f"the head {head.name} is a definition, not a postulate")
    if not r.lhs.is_linear():
        raise ill_formed("pattern variables must be pairwise distinct")

    tc = TypeChecker(env, fuel)
    ev = tc.ev
    ctx = tc.context(Telescope())
    bound: Dict[str, int] = {}
    ty = ev.constant_type(head.name)
    for atom in r.lhs.args:
        if not isinstance(ty, VPi):
            raise ill_formed(f"{head.name} is applied to too many arguments")
        if isinstance(atom, PatternVar):
            ctx = tc.bind(ctx, atom.name, ty.domain)
            bound[atom.name] = len(ctx) - 1
            arg = ctx.var(0)
        else:
            con = env.lookup(atom.constructor)
            if con is None or not con.is_postulate:
                raise ill_formed(f"constructor {atom.constructor} must be a postulate")
            con_ty = ev.constant_type(con.name)
            arg = ev.constant(con.name)
            for position, name in enumerate(atom.args):
                if not isinstance(con_ty, VPi):
                    raise ill_formed(f"{con.name} is applied to too many arguments")
                if position in atom.forced:
                    if name not in bound:
                        raise ill_formed(f".{name} does not repeat an earlier pattern variable")
                    value = ctx.var(len(ctx) - 1 - bound[name])
                    if not tc.conv(ctx, None, ctx.types[bound[name]], con_ty.domain):
                        raise ill_formed(f".{name} has type {tc.show(ctx, ctx.types[bound[name]])} where "
                                         f"{con.name} expects {tc.show(ctx, con_ty.domain)}")
                else:
                    ctx = tc.bind(ctx, name, con_ty.domain)
                    bound[name] = len(ctx) - 1
                    value = ctx.var(0)
                arg = ev.apply(arg, value)
                con_ty = ev.instantiate(con_ty.codomain, value)
            if not tc.conv(ctx, None, con_ty, ty.domain):
                raise ill_formed(f"{con.name} builds {tc.show(ctx, con_ty)} where "
                                 f"{tc.show(ctx, ty.domain)} is expected")
        ty = ev.instantiate(ty.codomain, arg)

    try:
        tc.check(ctx, r.rhs, ty)
    except CheckError as err:
        raise ill_formed(f"the right-hand side does not have the left-hand side's type "
                         f"{tc.show(ctx, ty)} ({err.diagnostic.message})")
    return env.add_rewrite(RewriteRule(r.name, r.lhs, r.rhs))


@dataclass
class DeclarationResult:
    name: str
    kind: str
    ok: bool
    error: Optional[CheckError] = None


def check_module(env: Environment, decls: Sequence[Declaration],
                 fuel: int = DEFAULT_FUEL) -> Tuple[Environment, List[DeclarationResult]]:
    """
    Check declarations in order, stopping at the first failure.

    Returns:
        The environment extended with every declaration that checked, and one
        result per declaration attempted
    """
    results: List[DeclarationResult] = []
    for d in decls:
        kind = type(d).__name__.lower()
        try:
            env = check_declaration(env, d, fuel)
        except CheckError as err:
            log_declaration(d.name, kind, False, code=err.code.value)
            results.append(DeclarationResult(d.name, kind, False, err))
            break
        log_declaration(d.name, kind, True)
        results.append(DeclarationResult(d.name, kind, True))
    logger.debug("Module checked", extra={"declarations": len(results), "constants": len(env)})
    return env, results
