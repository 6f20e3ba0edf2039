"""
Definitional equality by normalization by evaluation.

Terms are evaluated into a semantic domain of closures and neutrals (de Bruijn
levels), read back into beta-normal, sharp-contracted terms, and compared in a
type-directed way. Postulated heads compute through user rewrite rules.
"""
import sys
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Protocol, Sequence, Tuple

from diagnostics import CheckError, DiagnosticCode, InternalError
from logger import logger
from syntax import (
    App, Const, FlatIntro, FlatLet, FlatTy, Fst, IdType, J, Lam, Pair, Pattern, PatternCon,
    PatternVar, Pi, Polarity, Refl, SharpElim, SharpIntro, SharpTy, Sigma, Snd, Star, Telescope, Term,
    Unit, Universe, Var, free_vars,
)

DEFAULT_FUEL = 1_000_000

# Evaluation and read-back recurse along term structure.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


# ============================================================================
# Semantic domain
# ============================================================================

class Value:
    """Base class of semantic values"""
    __slots__ = ()


@dataclass(frozen=True, eq=False)
class Closure:
    """A term body waiting for its bound variables; env[-1] is index 0."""
    env: Tuple[Value, ...]
    body: Term
    names: Tuple[str, ...] = ("x",)


@dataclass(frozen=True, eq=False)
class VUniverse(Value):
    level: int


@dataclass(frozen=True, eq=False)
class VPi(Value):
    domain: Value
    codomain: Closure


@dataclass(frozen=True, eq=False)
class VLam(Value):
    body: Closure


@dataclass(frozen=True, eq=False)
class VSigma(Value):
    first: Value
    second: Closure


@dataclass(frozen=True, eq=False)
class VPair(Value):
    fst: Value
    snd: Value


@dataclass(frozen=True, eq=False)
class VUnit(Value):
    pass


@dataclass(frozen=True, eq=False)
class VStar(Value):
    pass


@dataclass(frozen=True, eq=False)
class VIdType(Value):
    ty: Value
    lhs: Value
    rhs: Value


@dataclass(frozen=True, eq=False)
class VRefl(Value):
    point: Value


@dataclass(frozen=True, eq=False)
class VSharpTy(Value):
    inner: Value


@dataclass(frozen=True, eq=False)
class VSharpIntro(Value):
    inner: Value


@dataclass(frozen=True, eq=False)
class VFlatTy(Value):
    inner: Value


@dataclass(frozen=True, eq=False)
class VFlatIntro(Value):
    inner: Value


@dataclass(frozen=True)
class HVar:
    level: int
    name: str = "x"


@dataclass(frozen=True)
class HConst:
    name: str


@dataclass(frozen=True, eq=False)
class EApp:
    arg: Value


@dataclass(frozen=True, eq=False)
class EFst:
    pass


@dataclass(frozen=True, eq=False)
class ESnd:
    pass


@dataclass(frozen=True, eq=False)
class EJ:
    motive: Closure
    base: Closure
    lhs: Value
    rhs: Value


@dataclass(frozen=True, eq=False)
class ESharpElim:
    pass


@dataclass(frozen=True, eq=False)
class EFlatLet:
    motive: Optional[Closure]
    body: Closure


@dataclass(frozen=True, eq=False)
class VNeutral(Value):
    """A head stuck under a spine of eliminations."""
    head: object  # HVar | HConst
    spine: Tuple[object, ...] = ()
    # set on the result of the (n _sharp) ^sharp contraction
    contracted: bool = False


def fresh(level: int, name: str = "x") -> VNeutral:
    return VNeutral(HVar(level, name))


# ============================================================================
# Rewrite rules
# ============================================================================

@dataclass(frozen=True)
class RewriteRule:
    """An admitted rule; ``rhs`` is scoped over the pattern variables in order."""
    name: str
    lhs: Pattern
    rhs: Term


@dataclass(frozen=True)
class RewriteMatch:
    rule: RewriteRule
    assignment: Tuple[Value, ...]
    consumed: int


RewriteIndex = Mapping[str, Sequence[RewriteRule]]


def _match_atoms(atoms, spine) -> Optional[List[Value]]:
    assignment: List[Value] = []
    for atom, elim in zip(atoms, spine):
        if not isinstance(elim, EApp):
            return None
        if isinstance(atom, PatternVar):
            assignment.append(elim.arg)
            continue
        arg = elim.arg
        if not (isinstance(arg, VNeutral) and isinstance(arg.head, HConst) and arg.head.name == atom.constructor):
            return None
        if len(arg.spine) != len(atom.args) or not all(isinstance(e, EApp) for e in arg.spine):
            return None
        assignment.extend(e.arg for i, e in enumerate(arg.spine) if i not in atom.forced)
    return assignment


def match_rewrite(index: RewriteIndex, head: str, spine: Sequence[object]) -> Optional[RewriteMatch]:
    """
    First-order matching of the rules for ``head`` against a prefix of ``spine``.

    Rules are tried in declaration order and the first match wins. A
    constructor atom only matches a neutral headed by that constructor and
    applied to exactly its pattern variables.

    Returns:
        The matching rule with the values assigned to its pattern variables, or None
    """
    for rule in index.get(head, ()):
        arity = len(rule.lhs.args)
        if arity > len(spine):
            continue
        assignment = _match_atoms(rule.lhs.args, spine[:arity])
        if assignment is not None:
            return RewriteMatch(rule, tuple(assignment), arity)
    return None


class Globals(Protocol):
    """What evaluation needs from the global environment."""

    def lookup(self, name: str): ...

    @property
    def rewrites(self) -> RewriteIndex: ...


# ============================================================================
# Evaluation
# ============================================================================

class Evaluator:
    """
    Evaluates, reads back and compares terms against one frozen environment.

    Every reduction step costs one unit of fuel; running dry raises a
    FuelExhausted diagnostic.
    """

    def __init__(self, env: Globals, fuel: int = DEFAULT_FUEL):
        self.env = env
        self.fuel = fuel
        self.remaining = fuel
        self._sharp_offences = 0
        # environments may carry caches shared by every evaluator built on them
        self._values: Dict[str, Value] = getattr(env, "value_cache", None)
        if self._values is None:
            self._values = {}
        self._types: Dict[str, Value] = getattr(env, "type_cache", None)
        if self._types is None:
            self._types = {}

    def refuel(self) -> None:
        self.remaining = self.fuel

    def _tick(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise CheckError(
                DiagnosticCode.FUEL_EXHAUSTED,
                f"Reduction budget of {self.fuel} steps exhausted",
            )

    # ------------------------------------------------------------------ eval

    def eval(self, rho: Tuple[Value, ...], t: Term) -> Value:
        match t:
            case Var(index):
                return rho[len(rho) - 1 - index]
            case Const(name):
                return self.constant(name)
            case Universe(level):
                return VUniverse(level)
            case Pi(domain, codomain):
                return VPi(self.eval(rho, domain), Closure(rho, codomain, (t.name,)))
            case Lam(body):
                return VLam(Closure(rho, body, (t.name,)))
            case App(fn, arg):
                return self.apply(self.eval(rho, fn), self.eval(rho, arg))
            case Sigma(first, second):
                return VSigma(self.eval(rho, first), Closure(rho, second, (t.name,)))
            case Pair(a, b):
                return VPair(self.eval(rho, a), self.eval(rho, b))
            case Fst(p):
                return self.fst(self.eval(rho, p))
            case Snd(p):
                return self.snd(self.eval(rho, p))
            case IdType(ty, lhs, rhs):
                return VIdType(self.eval(rho, ty), self.eval(rho, lhs), self.eval(rho, rhs))
            case Refl(point):
                return VRefl(self.eval(rho, point))
            case J(motive, base, lhs, rhs, proof):
                return self.path_ind(
                    Closure(rho, motive, t.motive_names),
                    Closure(rho, base, (t.base_name,)),
                    self.eval(rho, lhs),
                    self.eval(rho, rhs),
                    self.eval(rho, proof),
                )
            case Unit():
                return VUnit()
            case Star():
                return VStar()
            case SharpTy(inner):
                return VSharpTy(self.eval(rho, inner))
            case SharpIntro(inner):
                return self.sharp_intro(self.eval(rho, inner))
            case SharpElim(inner):
                return self.sharp_elim(self.eval(rho, inner))
            case FlatTy(inner):
                return VFlatTy(self.eval(rho, inner))
            case FlatIntro(inner):
                return VFlatIntro(self.eval(rho, inner))
            case FlatLet(motive, scrutinee, body):
                return self.flat_let(
                    self.eval(rho, scrutinee),
                    None if motive is None else Closure(rho, motive, (t.motive_name,)),
                    Closure(rho, body, (t.name,)),
                )
        raise InternalError(f"Cannot evaluate {type(t).__name__}")

    def constant(self, name: str) -> Value:
        cached = self._values.get(name)
        if cached is not None:
            return cached
        entry = self.env.lookup(name)
        if entry is None:
            raise InternalError(f"Unknown constant {name}")
        if entry.body is not None:
            self._tick()
            value = self.eval((), entry.body)
        else:
            value = self._extend(VNeutral(HConst(name)), None)
        self._values[name] = value
        return value

    def constant_type(self, name: str) -> Value:
        cached = self._types.get(name)
        if cached is None:
            cached = self.eval((), self.env.lookup(name).type)
            self._types[name] = cached
        return cached

    def instantiate(self, closure: Closure, *args: Value) -> Value:
        return self.eval(closure.env + tuple(args), closure.body)

    def _extend(self, neutral: VNeutral, elim: Optional[object]) -> Value:
        spine = neutral.spine if elim is None else neutral.spine + (elim,)
        result = VNeutral(neutral.head, spine)
        if isinstance(neutral.head, HConst) and (elim is None or isinstance(elim, EApp)):
            found = match_rewrite(self.env.rewrites, neutral.head.name, spine)
            if found is not None:
                self._tick()
                logger.debug("Rewrite fired", extra={"rule": found.rule.name, "head": neutral.head.name})
                value = self.eval(found.assignment, found.rule.rhs)
                for rest in spine[found.consumed:]:
                    value = self.elim(value, rest)
                return value
        return result

    def elim(self, v: Value, e: object) -> Value:
        """Apply one spine elimination to a value."""
        match e:
            case EApp(arg):
                return self.apply(v, arg)
            case EFst():
                return self.fst(v)
            case ESnd():
                return self.snd(v)
            case EJ(motive, base, lhs, rhs):
                return self.path_ind(motive, base, lhs, rhs, v)
            case ESharpElim():
                return self.sharp_elim(v)
            case EFlatLet(motive, body):
                return self.flat_let(v, motive, body)
        raise InternalError(f"Unknown elimination {type(e).__name__}")

    def apply(self, f: Value, a: Value) -> Value:
        if isinstance(f, VLam):
            self._tick()
            return self.instantiate(f.body, a)
        if isinstance(f, VNeutral):
            return self._extend(f, EApp(a))
        raise InternalError(f"Applying a non-function value {type(f).__name__}")

    def fst(self, p: Value) -> Value:
        if isinstance(p, VPair):
            self._tick()
            return p.fst
        if isinstance(p, VNeutral):
            return self._extend(p, EFst())
        raise InternalError(f"Projecting from a non-pair value {type(p).__name__}")

    def snd(self, p: Value) -> Value:
        if isinstance(p, VPair):
            self._tick()
            return p.snd
        if isinstance(p, VNeutral):
            return self._extend(p, ESnd())
        raise InternalError(f"Projecting from a non-pair value {type(p).__name__}")

    def path_ind(self, motive: Closure, base: Closure, lhs: Value, rhs: Value, proof: Value) -> Value:
        if isinstance(proof, VRefl):
            self._tick()
            return self.instantiate(base, lhs)
        if isinstance(proof, VNeutral):
            return self._extend(proof, EJ(motive, base, lhs, rhs))
        raise InternalError(f"Path induction on {type(proof).__name__}")

    def sharp_intro(self, v: Value) -> Value:
        # (m _sharp) ^sharp contracts to m
        if isinstance(v, VNeutral) and v.spine and isinstance(v.spine[-1], ESharpElim):
            self._tick()
            return VNeutral(v.head, v.spine[:-1], contracted=True)
        return VSharpIntro(v)

    def sharp_elim(self, v: Value) -> Value:
        if isinstance(v, VSharpIntro):
            self._tick()
            return v.inner
        if isinstance(v, VNeutral):
            return self._extend(v, ESharpElim())
        raise InternalError(f"Sharp elimination on {type(v).__name__}")

    def flat_let(self, scrutinee: Value, motive: Optional[Closure], body: Closure) -> Value:
        if isinstance(scrutinee, VFlatIntro):
            self._tick()
            return self.instantiate(body, scrutinee.inner)
        if isinstance(scrutinee, VNeutral):
            return self._extend(scrutinee, EFlatLet(motive, body))
        raise InternalError(f"Flat elimination on {type(scrutinee).__name__}")

    # ------------------------------------------------------------- read-back

    def quote(self, depth: int, v: Value, crisp: Optional[FrozenSet[int]] = None) -> Term:
        """
        Read a value back into a normal-form term valid under ``depth`` variables.

        Args:
            depth: number of variables in scope
            v: the value
            crisp: levels of the crisp variables in scope, or None to read back
                without regard to polarity. When given, a sharp contraction
                that would leave ``_sharp`` on a cohesive subject is read back
                in its expanded form ``(n _sharp) ^sharp``.
        """
        promoted = None if crisp is None else frozenset(range(depth))
        match v:
            case VUniverse(level):
                return Universe(level)
            case VPi(domain, codomain):
                return Pi(self.quote(depth, domain, crisp), self._quote_closure(depth, codomain, crisp),
                          name=codomain.names[0])
            case VLam(body):
                return Lam(self._quote_closure(depth, body, crisp), name=body.names[0])
            case VSigma(first, second):
                return Sigma(self.quote(depth, first, crisp), self._quote_closure(depth, second, crisp),
                             name=second.names[0])
            case VPair(a, b):
                return Pair(self.quote(depth, a, crisp), self.quote(depth, b, crisp))
            case VUnit():
                return Unit()
            case VStar():
                return Star()
            case VIdType(ty, lhs, rhs):
                return IdType(self.quote(depth, ty, crisp), self.quote(depth, lhs, crisp),
                              self.quote(depth, rhs, crisp))
            case VRefl(point):
                return Refl(self.quote(depth, point, crisp))
            case VSharpTy(inner):
                return SharpTy(self.quote(depth, inner, promoted))
            case VSharpIntro(inner):
                return SharpIntro(self.quote(depth, inner, promoted))
            case VFlatTy(inner):
                return FlatTy(self.quote(depth, inner, crisp))
            case VFlatIntro(inner):
                return FlatIntro(self.quote(depth, inner, crisp))
            case VNeutral(head, spine):
                if not v.contracted or crisp is None or crisp == promoted:
                    return self._quote_neutral(depth, head, spine, crisp)
                before = self._sharp_offences
                t = self._quote_neutral(depth, head, spine, crisp)
                if self._sharp_offences == before:
                    return t
                self._sharp_offences = before
                return SharpIntro(SharpElim(self._quote_neutral(depth, head, spine, promoted)))
        raise InternalError(f"Cannot quote {type(v).__name__}")

    def _quote_closure(self, depth: int, closure: Closure, crisp: Optional[FrozenSet[int]] = None,
                       polarity: Polarity = Polarity.COHESIVE) -> Term:
        args = [fresh(depth + i, name) for i, name in enumerate(closure.names)]
        if crisp is not None and polarity is Polarity.CRISP:
            crisp = crisp | frozenset(range(depth, depth + len(args)))
        return self.quote(depth + len(args), self.instantiate(closure, *args), crisp)

    def _quote_neutral(self, depth: int, head: object, spine: Sequence[object],
                       crisp: Optional[FrozenSet[int]] = None) -> Term:
        if isinstance(head, HVar):
            if head.level >= depth:
                raise InternalError(f"Variable level {head.level} escapes depth {depth}")
            t: Term = Var(depth - head.level - 1, name=head.name)
        else:
            t = Const(head.name)
        for e in spine:
            match e:
                case EApp(arg):
                    t = App(t, self.quote(depth, arg, crisp))
                case EFst():
                    t = Fst(t)
                case ESnd():
                    t = Snd(t)
                case EJ(motive, base, lhs, rhs):
                    t = J(
                        self._quote_closure(depth, motive, crisp),
                        self._quote_closure(depth, base, crisp),
                        self.quote(depth, lhs, crisp),
                        self.quote(depth, rhs, crisp),
                        t,
                        motive_names=motive.names,
                        base_name=base.names[0],
                    )
                case ESharpElim():
                    if crisp is not None and any(depth - 1 - i not in crisp for i in free_vars(t)):
                        self._sharp_offences += 1
                    t = SharpElim(t)
                case EFlatLet(motive, body):
                    t = FlatLet(
                        None if motive is None else self._quote_closure(depth, motive, crisp),
                        t,
                        self._quote_closure(depth, body, crisp, Polarity.CRISP),
                        name=body.names[0],
                        motive_name="x" if motive is None else motive.names[0],
                    )
        return t

    # ------------------------------------------------------------ conversion

    def conv(self, depth: int, types: Tuple[Optional[Value], ...], ty: Optional[Value], a: Value, b: Value) -> bool:
        """
        Decide a == b at type ``ty`` (None when the type is not known).

        Args:
            depth: number of variables in scope
            types: type of each variable, by level (None if unknown)
            ty: the type both values inhabit
            a: left value
            b: right value

        Returns:
            True if the values are definitionally equal
        """
        match ty:
            case VPi(domain, codomain):
                x = fresh(depth, codomain.names[0])
                return self.conv(
                    depth + 1, types + (domain,), self.instantiate(codomain, x),
                    self.apply(a, x), self.apply(b, x),
                )
            case VSigma(first, second):
                a1, b1 = self.fst(a), self.fst(b)
                return (
                    self.conv(depth, types, first, a1, b1)
                    and self.conv(depth, types, self.instantiate(second, a1), self.snd(a), self.snd(b))
                )
            case VUnit():
                return True
            case VSharpTy(inner):
                if isinstance(a, VSharpIntro) or isinstance(b, VSharpIntro):
                    return self.conv(depth, types, inner, self.sharp_elim(a), self.sharp_elim(b))
            case VFlatTy(inner):
                if isinstance(a, VFlatIntro) and isinstance(b, VFlatIntro):
                    return self.conv(depth, types, inner, a.inner, b.inner)
            case VIdType(carrier, _, _):
                if isinstance(a, VRefl) and isinstance(b, VRefl):
                    return self.conv(depth, types, carrier, a.point, b.point)
        return self._conv_untyped(depth, types, a, b)

    def _conv_untyped(self, depth: int, types: Tuple[Optional[Value], ...], a: Value, b: Value) -> bool:
        if isinstance(a, VLam) or isinstance(b, VLam):
            if not isinstance(a, (VLam, VNeutral)) or not isinstance(b, (VLam, VNeutral)):
                return False
            name = a.body.names[0] if isinstance(a, VLam) else b.body.names[0]
            x = fresh(depth, name)
            return self.conv(depth + 1, types + (None,), None, self.apply(a, x), self.apply(b, x))
        if isinstance(a, VPair) or isinstance(b, VPair):
            if not isinstance(a, (VPair, VNeutral)) or not isinstance(b, (VPair, VNeutral)):
                return False
            return (
                self.conv(depth, types, None, self.fst(a), self.fst(b))
                and self.conv(depth, types, None, self.snd(a), self.snd(b))
            )
        if isinstance(a, VSharpIntro) or isinstance(b, VSharpIntro):
            if not isinstance(a, (VSharpIntro, VNeutral)) or not isinstance(b, (VSharpIntro, VNeutral)):
                return False
            return self.conv(depth, types, None, self.sharp_elim(a), self.sharp_elim(b))
        match (a, b):
            case (VUniverse(l1), VUniverse(l2)):
                return l1 == l2
            case (VPi(d1, c1), VPi(d2, c2)):
                x = fresh(depth, c1.names[0])
                return (
                    self.conv(depth, types, None, d1, d2)
                    and self.conv(depth + 1, types + (d1,), None, self.instantiate(c1, x), self.instantiate(c2, x))
                )
            case (VSigma(f1, s1), VSigma(f2, s2)):
                x = fresh(depth, s1.names[0])
                return (
                    self.conv(depth, types, None, f1, f2)
                    and self.conv(depth + 1, types + (f1,), None, self.instantiate(s1, x), self.instantiate(s2, x))
                )
            case (VUnit(), VUnit()) | (VStar(), VStar()):
                return True
            case (VIdType(t1, l1, r1), VIdType(t2, l2, r2)):
                return (
                    self.conv(depth, types, None, t1, t2)
                    and self.conv(depth, types, t1, l1, l2)
                    and self.conv(depth, types, t1, r1, r2)
                )
            case (VRefl(p1), VRefl(p2)):
                return self.conv(depth, types, None, p1, p2)
            case (VSharpTy(i1), VSharpTy(i2)) | (VFlatTy(i1), VFlatTy(i2)) | (VFlatIntro(i1), VFlatIntro(i2)):
                return self.conv(depth, types, None, i1, i2)
            case (VNeutral(), VNeutral()):
                return self._conv_neutral(depth, types, a, b)
        return False

    def _head_type(self, types: Tuple[Optional[Value], ...], head: object) -> Optional[Value]:
        if isinstance(head, HVar):
            return types[head.level] if head.level < len(types) else None
        return self.constant_type(head.name)

    def _conv_neutral(self, depth: int, types: Tuple[Optional[Value], ...], a: VNeutral, b: VNeutral) -> bool:
        if a.head != b.head or len(a.spine) != len(b.spine):
            return False
        ty = self._head_type(types, a.head)
        prefix = VNeutral(a.head)
        for e1, e2 in zip(a.spine, b.spine):
            match (e1, e2):
                case (EApp(x1), EApp(x2)):
                    domain = ty.domain if isinstance(ty, VPi) else None
                    if not self.conv(depth, types, domain, x1, x2):
                        return False
                    ty = self.instantiate(ty.codomain, x1) if isinstance(ty, VPi) else None
                case (EFst(), EFst()):
                    ty = ty.first if isinstance(ty, VSigma) else None
                case (ESnd(), ESnd()):
                    ty = self.instantiate(ty.second, VNeutral(prefix.head, prefix.spine + (EFst(),))) \
                        if isinstance(ty, VSigma) else None
                case (ESharpElim(), ESharpElim()):
                    ty = ty.inner if isinstance(ty, VSharpTy) else None
                case (EJ(), EJ()):
                    if not self._conv_path_ind(depth, types, ty, e1, e2):
                        return False
                    ty = self.instantiate(e1.motive, e1.lhs, e1.rhs, prefix)
                case (EFlatLet(), EFlatLet()):
                    if not self._conv_flat_let(depth, types, ty, e1, e2):
                        return False
                    ty = None if e1.motive is None else self.instantiate(e1.motive, prefix)
                case _:
                    return False
            prefix = VNeutral(prefix.head, prefix.spine + (e1,))
        return True

    def _conv_path_ind(self, depth, types, ty: Optional[Value], e1: EJ, e2: EJ) -> bool:
        carrier = ty.ty if isinstance(ty, VIdType) else None
        x, y = fresh(depth, e1.motive.names[0]), fresh(depth + 1, e1.motive.names[1])
        p = fresh(depth + 2, e1.motive.names[2])
        path_ty = VIdType(carrier, x, y) if carrier is not None else None
        motive_types = types + (carrier, carrier, path_ty)
        if not self.conv(depth + 3, motive_types, None,
                         self.instantiate(e1.motive, x, y, p), self.instantiate(e2.motive, x, y, p)):
            return False
        z = fresh(depth, e1.base.names[0])
        base_ty = self.instantiate(e1.motive, z, z, VRefl(z))
        if not self.conv(depth + 1, types + (carrier,), base_ty,
                         self.instantiate(e1.base, z), self.instantiate(e2.base, z)):
            return False
        return self.conv(depth, types, carrier, e1.lhs, e2.lhs) and self.conv(depth, types, carrier, e1.rhs, e2.rhs)

    def _conv_flat_let(self, depth, types, ty: Optional[Value], e1: EFlatLet, e2: EFlatLet) -> bool:
        carrier = ty.inner if isinstance(ty, VFlatTy) else None
        if e1.motive is not None and e2.motive is not None:
            x = fresh(depth, e1.motive.names[0])
            if not self.conv(depth + 1, types + (ty,), None,
                             self.instantiate(e1.motive, x), self.instantiate(e2.motive, x)):
                return False
        u = fresh(depth, e1.body.names[0])
        body_ty = None if e1.motive is None else self.instantiate(e1.motive, VFlatIntro(u))
        return self.conv(depth + 1, types + (carrier,), body_ty,
                         self.instantiate(e1.body, u), self.instantiate(e2.body, u))

    # --------------------------------------------------------------- helpers

    def context_values(self, ctx: Telescope) -> Tuple[Tuple[Value, ...], Tuple[Value, ...]]:
        """Fresh variables for a telescope together with their evaluated types."""
        rho: Tuple[Value, ...] = ()
        types: Tuple[Value, ...] = ()
        for level, entry in enumerate(ctx.entries):
            types = types + (self.eval(rho, entry.type),)
            rho = rho + (fresh(level, entry.name),)
        return rho, types


def normalize(env: Globals, ctx: Telescope, t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """Evaluate t under ctx and read it back, respecting the polarity of ctx."""
    ev = Evaluator(env, fuel)
    rho, _ = ev.context_values(ctx)
    crisp = frozenset(level for level, entry in enumerate(ctx.entries) if entry.is_crisp)
    return ev.quote(len(ctx), ev.eval(rho, t), crisp)


def convertible(env: Globals, ctx: Telescope, t1: Term, t2: Term, at_type: Optional[Term],
                fuel: int = DEFAULT_FUEL) -> bool:
    """
    Decide whether two terms are definitionally equal at a type.

    Args:
        env: global environment
        ctx: telescope both terms live in
        t1: left term
        t2: right term
        at_type: their common type, or None for an untyped comparison

    Returns:
        True if t1 and t2 are convertible

    Raises:
        CheckError: FuelExhausted when evaluation runs out of budget
    """
    ev = Evaluator(env, fuel)
    rho, types = ev.context_values(ctx)
    ty = None if at_type is None else ev.eval(rho, at_type)
    return ev.conv(len(ctx), types, ty, ev.eval(rho, t1), ev.eval(rho, t2))
