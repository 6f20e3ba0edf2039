"""
Core-language syntax for spatial type theory.

Terms are nameless (de Bruijn indices); binder names are kept for display only
and never take part in equality. A telescope is a single ordered list of
entries, each flagged crisp or cohesive.
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, FrozenSet, List, Optional, Set, Tuple, Union

from diagnostics import InternalError, SourceSpan


class Polarity(str, Enum):
    """Whether a hypothesis is crisp (x :: A) or cohesive (x : A)"""
    CRISP = "crisp"
    COHESIVE = "cohesive"


# ============================================================================
# Terms
# ============================================================================

@dataclass(frozen=True)
class Term:
    """Base class of core terms"""
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Var(Term):
    index: int
    name: str = field(default="x", compare=False, kw_only=True)


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class Universe(Term):
    level: int


@dataclass(frozen=True)
class Pi(Term):
    domain: Term
    codomain: Term  # binds 1 cohesive variable
    name: str = field(default="_", compare=False, kw_only=True)


@dataclass(frozen=True)
class Lam(Term):
    body: Term  # binds 1 cohesive variable
    name: str = field(default="x", compare=False, kw_only=True)


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Sigma(Term):
    first: Term
    second: Term  # binds 1 cohesive variable
    name: str = field(default="_", compare=False, kw_only=True)


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term


@dataclass(frozen=True)
class Fst(Term):
    pair: Term


@dataclass(frozen=True)
class Snd(Term):
    pair: Term


@dataclass(frozen=True)
class IdType(Term):
    ty: Term
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Refl(Term):
    point: Term


@dataclass(frozen=True)
class J(Term):
    """Path induction; the motive binds x, y, p and the base binds x."""
    motive: Term
    base: Term
    lhs: Term
    rhs: Term
    proof: Term
    motive_names: Tuple[str, str, str] = field(default=("x", "y", "p"), compare=False, kw_only=True)
    base_name: str = field(default="x", compare=False, kw_only=True)


@dataclass(frozen=True)
class Unit(Term):
    pass


@dataclass(frozen=True)
class Star(Term):
    pass


@dataclass(frozen=True)
class SharpTy(Term):
    inner: Term


@dataclass(frozen=True)
class SharpIntro(Term):
    inner: Term


@dataclass(frozen=True)
class SharpElim(Term):
    inner: Term


@dataclass(frozen=True)
class FlatTy(Term):
    inner: Term


@dataclass(frozen=True)
class FlatIntro(Term):
    inner: Term


@dataclass(frozen=True)
class FlatLet(Term):
    """
    ``letflat u := scrutinee motive x. motive in body``.

    The motive binds one cohesive variable of flat type and may be absent
    (then the term is only accepted in checking position). The body binds one
    CRISP variable, the only crisp binder of the language.
    """
    motive: Optional[Term]
    scrutinee: Term
    body: Term
    name: str = field(default="u", compare=False, kw_only=True)
    motive_name: str = field(default="x", compare=False, kw_only=True)


# ============================================================================
# Structural operations
# ============================================================================

def _map_vars(t: Term, on_var: Callable[[Var, int], Term], depth: int = 0) -> Term:
    """Rebuild t, replacing every variable occurrence by on_var(var, binders_above)."""
    def go(s: Term, extra: int = 0) -> Term:
        return _map_vars(s, on_var, depth + extra)

    match t:
        case Var():
            return on_var(t, depth)
        case Const() | Universe() | Unit() | Star():
            return t
        case Pi(domain, codomain):
            return replace(t, domain=go(domain), codomain=go(codomain, 1))
        case Lam(body):
            return replace(t, body=go(body, 1))
        case App(fn, arg):
            return replace(t, fn=go(fn), arg=go(arg))
        case Sigma(first, second):
            return replace(t, first=go(first), second=go(second, 1))
        case Pair(a, b):
            return replace(t, fst=go(a), snd=go(b))
        case Fst(p):
            return replace(t, pair=go(p))
        case Snd(p):
            return replace(t, pair=go(p))
        case IdType(ty, lhs, rhs):
            return replace(t, ty=go(ty), lhs=go(lhs), rhs=go(rhs))
        case Refl(point):
            return replace(t, point=go(point))
        case J(motive, base, lhs, rhs, proof):
            return replace(t, motive=go(motive, 3), base=go(base, 1), lhs=go(lhs), rhs=go(rhs), proof=go(proof))
        case SharpTy(inner):
            return replace(t, inner=go(inner))
        case SharpIntro(inner):
            return replace(t, inner=go(inner))
        case SharpElim(inner):
            return replace(t, inner=go(inner))
        case FlatTy(inner):
            return replace(t, inner=go(inner))
        case FlatIntro(inner):
            return replace(t, inner=go(inner))
        case FlatLet(motive, scrutinee, body):
            return replace(
                t,
                motive=None if motive is None else go(motive, 1),
                scrutinee=go(scrutinee),
                body=go(body, 1),
            )
    raise InternalError(f"Unknown term node: {type(t).__name__}")


def shift(t: Term, cutoff: int, amount: int) -> Term:
    """
    Displace free variables with index >= cutoff by amount.

    Raises:
        InternalError: if an index would become negative
    """
    def on_var(v: Var, depth: int) -> Term:
        if v.index < cutoff + depth:
            return v
        moved = v.index + amount
        if moved < cutoff + depth:
            raise InternalError(f"Index underflow shifting variable {v.name} (#{v.index}) by {amount}")
        return replace(v, index=moved)

    if amount == 0:
        return t
    return _map_vars(t, on_var)


def subst(t: Term, target: int, replacement: Term) -> Term:
    """Replace free occurrences of ``target`` by ``replacement``; other indices are left alone."""
    def on_var(v: Var, depth: int) -> Term:
        if v.index == target + depth:
            return shift(replacement, 0, depth)
        return v

    return _map_vars(t, on_var)


def instantiate(t: Term, replacement: Term) -> Term:
    """Substitute for index 0 and lower the remaining free indices (beta-reduction)."""
    return shift(subst(t, 0, shift(replacement, 0, 1)), 0, -1)


def rename(t: Term, mapping: Callable[[int], int]) -> Term:
    """Apply a renaming to the free indices of t."""
    def on_var(v: Var, depth: int) -> Term:
        if v.index < depth:
            return v
        return replace(v, index=mapping(v.index - depth) + depth)

    return _map_vars(t, on_var)


def free_vars(t: Term) -> FrozenSet[int]:
    """Indices of the free variable occurrences of t."""
    found: Set[int] = set()

    def on_var(v: Var, depth: int) -> Term:
        if v.index >= depth:
            found.add(v.index - depth)
        return v

    _map_vars(t, on_var)
    return frozenset(found)


# ============================================================================
# Telescopes
# ============================================================================

@dataclass(frozen=True)
class Entry:
    """A hypothesis; ``type`` is scoped over the entries before it."""
    name: str
    type: Term
    polarity: Polarity = Polarity.COHESIVE

    @property
    def is_crisp(self) -> bool:
        return self.polarity is Polarity.CRISP


@dataclass(frozen=True)
class Telescope:
    """Ordered context; index 0 is the last entry."""
    entries: Tuple[Entry, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def extend(self, name: str, type: Term, polarity: Polarity = Polarity.COHESIVE) -> "Telescope":
        return Telescope(self.entries + (Entry(name, type, polarity),))

    def entry(self, index: int) -> Entry:
        if not 0 <= index < len(self.entries):
            raise InternalError(f"Variable #{index} is out of scope in a telescope of length {len(self.entries)}")
        return self.entries[len(self.entries) - 1 - index]

    def lookup(self, index: int) -> Term:
        """Type of variable ``index``, shifted to be valid in the whole telescope."""
        return shift(self.entry(index).type, 0, index + 1)

    def names(self) -> List[str]:
        return [e.name for e in self.entries]


# ============================================================================
# Rewrite patterns and declarations
# ============================================================================

@dataclass(frozen=True)
class PatternVar:
    name: str


@dataclass(frozen=True)
class PatternCon:
    """
    A constructor postulate applied to pattern variables.

    Positions in ``forced`` (written ``.x``) repeat a variable bound earlier in
    the pattern. They are determined by typing, bind nothing and are never
    inspected by matching.
    """
    constructor: str
    args: Tuple[str, ...] = ()
    forced: FrozenSet[int] = frozenset()

    def binders(self) -> List[str]:
        return [name for i, name in enumerate(self.args) if i not in self.forced]


PatternAtom = Union[PatternVar, PatternCon]


@dataclass(frozen=True)
class Pattern:
    head: str
    args: Tuple[PatternAtom, ...]

    def variables(self) -> List[str]:
        """Pattern variables in order of occurrence; the rhs binds them in this order."""
        names: List[str] = []
        for atom in self.args:
            if isinstance(atom, PatternVar):
                names.append(atom.name)
            else:
                names.extend(atom.binders())
        return names

    def is_linear(self) -> bool:
        named = [n for n in self.variables() if n != "_"]
        return len(named) == len(set(named))


@dataclass(frozen=True)
class Def:
    name: str
    type: Term
    body: Term
    span: Optional[SourceSpan] = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Postulate:
    name: str
    type: Term
    span: Optional[SourceSpan] = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Rewrite:
    name: str
    lhs: Pattern
    rhs: Term
    span: Optional[SourceSpan] = field(default=None, compare=False, kw_only=True)


Declaration = Union[Def, Postulate, Rewrite]
