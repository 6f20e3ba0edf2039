"""
Surface language for ``.coh`` proof files.

A lark grammar parses source text into named surface trees, which are then
resolved to de Bruijn indices and constants. Core terms pretty-print back
into parseable surface text.
"""
from dataclasses import dataclass, field
from typing import Any, Collection, Iterable, List, Optional, Sequence, Set, Tuple, Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, UnexpectedToken, VisitError
from rapidfuzz import fuzz, process

from diagnostics import CheckError, DiagnosticCode, ParseError, SourceSpan
from syntax import (
    App, Const, Declaration, Def, FlatIntro, FlatLet, FlatTy, Fst, IdType, J, Lam, Pair, Pattern,
    PatternCon, PatternVar, Pi, Postulate, Refl, Rewrite, SharpElim, SharpIntro, SharpTy, Sigma,
    Snd, Star, Term, Unit, Universe, Var, free_vars,
)


# ============================================================================
# Grammar
# ============================================================================

# `*` binds tighter than `->` and both associate to the right. Postfix
# operators apply to a whole application. A binder group is parsed as
# `( term : term )` and its names are checked when the tree is built.
GRAMMAR = r"""
    start: _decl*

    _decl: def_decl | postulate_decl | rewrite_decl
    def_decl: _DEF NAME _COLON term _ASSIGN term
    postulate_decl: _POSTULATE NAME _COLON term
    rewrite_decl: _REWRITE NAME _COLON NAME pattern* _DARROW term

    pattern: NAME                             -> pattern_var
           | _LPAR NAME pattern_arg* _RPAR     -> pattern_con
    pattern_arg: NAME                         -> plain_arg
               | _DOT NAME                    -> forced_arg

    ?term: lam | letflat | arrow
    lam: (_FUN | _LAMBDA) NAME+ _DOT term
    letflat: _LETFLAT NAME _ASSIGN term [_MOTIVE NAME _DOT term] _IN term

    ?arrow: prod
          | prod _ARROW term                  -> pi_anon
          | telescope _ARROW term             -> pi_group
    ?prod: app
         | app _TIMES prod                    -> sigma_anon
         | telescope _TIMES prod              -> sigma_group
    telescope: group+
    group: _LPAR term _COLON term _RPAR

    ?app: spine
        | app (SHARP_INTRO | SHARP_ELIM | FLAT_INTRO | PROJ1 | PROJ2) -> postfix
    ?spine: atom
          | spine atom                        -> apply
    ?atom: NAME                               -> var
         | _TYPE NAT                          -> universe
         | _UNIT                              -> unit
         | _STAR                              -> star
         | (_SHARP | _SHARP_SYM) atom         -> sharp_ty
         | (_FLAT | _FLAT_SYM) atom           -> flat_ty
         | _ID atom atom atom                 -> id_ty
         | _REFL atom                         -> refl
         | _J _LPAR NAME _DOT NAME _DOT NAME _DOT term _RPAR _LPAR NAME _DOT term _RPAR atom atom atom -> j
         | _LPAR term _COMMA term _RPAR       -> pair
         | _LPAR term _RPAR

    _DEF: "def"
    _POSTULATE: "postulate"
    _REWRITE: "rewrite"
    _FUN: "fun"
    _LAMBDA: "λ"
    _LETFLAT: "letflat"
    _MOTIVE: "motive"
    _IN: "in"
    _TYPE: "Type"
    _UNIT: "Unit"
    _STAR: "star"
    _SHARP: "Sharp"
    _SHARP_SYM: "♯"
    _FLAT: "Flat"
    _FLAT_SYM: "♭"
    _ID: "Id"
    _REFL: "refl"
    _J: "J"

    SHARP_INTRO: "^sharp"
    SHARP_ELIM: "_sharp"
    FLAT_INTRO: "^flat"
    PROJ1: ".1"
    PROJ2: ".2"

    _ARROW: "->" | "→"
    _DARROW: "=>" | "⇒"
    _TIMES: "*" | "×"
    _ASSIGN: ":="
    _COLON: ":"
    _COMMA: ","
    _DOT: "."
    _LPAR: "("
    _RPAR: ")"

    NAME: /[A-Za-z_][A-Za-z0-9_']*/
    NAT: /[0-9]+/
    COMMENT: /--[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

# Keyword literals of GRAMMAR that would otherwise lex as a NAME.
KEYWORDS = frozenset({
    "def", "postulate", "rewrite", "fun", "letflat", "motive", "in",
    "Type", "Unit", "star", "Sharp", "Flat", "Id", "refl", "J", "_sharp",
})

_LARK = Lark(GRAMMAR, parser="lalr", lexer="basic", start=["start", "term"],
             propagate_positions=True, maybe_placeholders=True)

# How a terminal reads in "expected ..." hints
_TERMINAL_TEXT = {
    "NAME": "a name", "NAT": "a universe level", "$END": "end of input",
    "_ARROW": "'->'", "_DARROW": "'=>'", "_TIMES": "'*'", "_LAMBDA": "'fun'", "_FUN": "'fun'",
    "_SHARP_SYM": "'Sharp'", "_FLAT_SYM": "'Flat'",
}


def _terminal_text(name: str) -> str:
    if name in _TERMINAL_TEXT:
        return _TERMINAL_TEXT[name]
    try:
        return repr(_LARK.get_terminal(name).pattern.value)
    except KeyError:
        return name


def _to_parse_error(err: UnexpectedInput, file: str) -> ParseError:
    if isinstance(err, UnexpectedCharacters):
        span = SourceSpan(file, err.line, err.column, err.line, err.column)
        return ParseError(f"Illegal character {err.char!r}", span)
    if isinstance(err, UnexpectedToken):
        tok = err.token
        expected = ", ".join(sorted({_terminal_text(name) for name in err.expected}))
        if tok.type == "$END":
            line = tok.end_line or tok.line or 1
            col = tok.end_column or tok.column or 1
            return ParseError("Unexpected end of file", SourceSpan(file, line, col, line, col),
                              expected=expected or None)
        return ParseError(f"Unexpected {tok.value!r}", _token_span(tok, file), expected=expected or None)
    line, col = getattr(err, "line", 1) or 1, getattr(err, "column", 1) or 1
    return ParseError(str(err), SourceSpan(file, line, col, line, col))


def _token_span(tok: Token, file: str) -> SourceSpan:
    end_line = tok.end_line or tok.line
    end_col = max((tok.end_column or tok.column) - 1, 1)
    return SourceSpan(file, tok.line, tok.column, end_line, end_col)


def tokenize(source: str, file: str = "<input>") -> List[Token]:
    """
    Split source text into lark tokens (comments and whitespace dropped).

    Raises:
        ParseError: on a character that starts no token
    """
    try:
        return list(_LARK.lex(source))
    except UnexpectedInput as err:
        raise _to_parse_error(err, file) from None


# ============================================================================
# Surface trees
# ============================================================================

@dataclass
class STerm:
    """Named surface term; every node records its source span."""
    span: Optional[SourceSpan] = field(default=None, kw_only=True)


@dataclass
class SVar(STerm):
    name: str


@dataclass
class SType(STerm):
    level: int


@dataclass
class SUnit(STerm):
    pass


@dataclass
class SStar(STerm):
    pass


@dataclass
class SPi(STerm):
    name: str
    domain: STerm
    codomain: STerm


@dataclass
class SLam(STerm):
    name: str
    body: STerm


@dataclass
class SApp(STerm):
    fn: STerm
    arg: STerm


@dataclass
class SSigma(STerm):
    name: str
    first: STerm
    second: STerm


@dataclass
class SPair(STerm):
    fst: STerm
    snd: STerm


@dataclass
class SFst(STerm):
    pair: STerm


@dataclass
class SSnd(STerm):
    pair: STerm


@dataclass
class SId(STerm):
    ty: STerm
    lhs: STerm
    rhs: STerm


@dataclass
class SRefl(STerm):
    point: STerm


@dataclass
class SJ(STerm):
    motive_names: Tuple[str, str, str]
    motive: STerm
    base_name: str
    base: STerm
    lhs: STerm
    rhs: STerm
    proof: STerm


@dataclass
class SSharp(STerm):
    inner: STerm


@dataclass
class SSharpIntro(STerm):
    inner: STerm


@dataclass
class SSharpElim(STerm):
    inner: STerm


@dataclass
class SFlat(STerm):
    inner: STerm


@dataclass
class SFlatIntro(STerm):
    inner: STerm


@dataclass
class SLetFlat(STerm):
    name: str
    scrutinee: STerm
    motive_name: Optional[str]
    motive: Optional[STerm]
    body: STerm


@dataclass
class SPatternAtom:
    """A pattern variable (args is None) or a parenthesized constructor application."""
    name: str
    args: Optional[List[str]]
    span: SourceSpan
    forced: List[int] = field(default_factory=list)


@dataclass
class SDef:
    name: str
    type: STerm
    body: STerm
    span: SourceSpan


@dataclass
class SPostulate:
    name: str
    type: STerm
    span: SourceSpan


@dataclass
class SRewrite:
    name: str
    head: str
    atoms: List[SPatternAtom]
    rhs: STerm
    span: SourceSpan


SDeclaration = Union[SDef, SPostulate, SRewrite]


# ============================================================================
# Parser
# ============================================================================

_POSTFIX = {
    "SHARP_INTRO": SSharpIntro,
    "SHARP_ELIM": SSharpElim,
    "FLAT_INTRO": SFlatIntro,
    "PROJ1": SFst,
    "PROJ2": SSnd,
}

Binder = Tuple[str, STerm, Optional[SourceSpan]]


def _binder_names(s: STerm) -> List[str]:
    """The names of a binder group, which parse as an application of variables."""
    match s:
        case SVar(name):
            return [name]
        case SApp(fn, SVar(name)):
            return _binder_names(fn) + [name]
    raise ParseError("Malformed binder group", s.span, expected="binder names before ':'")


def _fold(binders: Sequence[Binder], body: STerm, node, span: Optional[SourceSpan]) -> STerm:
    for name, ty, _ in reversed(binders):
        body = node(name, ty, body, span=span)
    return body


@v_args(meta=True)
class SurfaceBuilder(Transformer):
    """Builds surface trees with source spans from a lark parse tree."""

    def __init__(self, file: str):
        super().__init__()
        self.file = file

    def _span(self, meta) -> Optional[SourceSpan]:
        if getattr(meta, "empty", True):
            return None
        return SourceSpan(self.file, meta.line, meta.column, meta.end_line, max(meta.end_column - 1, 1))

    # ---------------------------------------------------------- declarations

    def start(self, meta, children) -> List[SDeclaration]:
        return list(children)

    def def_decl(self, meta, children) -> SDef:
        name, ty, body = children
        return SDef(str(name), ty, body, self._span(meta))

    def postulate_decl(self, meta, children) -> SPostulate:
        name, ty = children
        return SPostulate(str(name), ty, self._span(meta))

    def rewrite_decl(self, meta, children) -> SRewrite:
        name, head, *atoms, rhs = children
        return SRewrite(str(name), str(head), atoms, rhs, self._span(meta))

    def pattern_var(self, meta, children) -> SPatternAtom:
        return SPatternAtom(str(children[0]), None, self._span(meta))

    def pattern_con(self, meta, children) -> SPatternAtom:
        con, *args = children
        forced = [i for i, (is_forced, _) in enumerate(args) if is_forced]
        return SPatternAtom(str(con), [name for _, name in args], self._span(meta), forced)

    def plain_arg(self, meta, children) -> Tuple[bool, str]:
        return False, str(children[0])

    def forced_arg(self, meta, children) -> Tuple[bool, str]:
        return True, str(children[0])

    # ----------------------------------------------------------------- terms

    def lam(self, meta, children) -> STerm:
        *names, body = children
        span = self._span(meta)
        for name in reversed(names):
            body = SLam(str(name), body, span=span)
        return body

    def letflat(self, meta, children) -> SLetFlat:
        name, scrutinee, motive_name, motive, body = children
        return SLetFlat(str(name), scrutinee, str(motive_name) if motive_name is not None else None,
                        motive, body, span=self._span(meta))

    def pi_anon(self, meta, children) -> SPi:
        domain, codomain = children
        return SPi("_", domain, codomain, span=self._span(meta))

    def pi_group(self, meta, children) -> STerm:
        binders, body = children
        return _fold(binders, body, SPi, self._span(meta))

    def sigma_anon(self, meta, children) -> SSigma:
        first, second = children
        return SSigma("_", first, second, span=self._span(meta))

    def sigma_group(self, meta, children) -> STerm:
        binders, body = children
        return _fold(binders, body, SSigma, self._span(meta))

    def telescope(self, meta, children) -> List[Binder]:
        return [binder for group in children for binder in group]

    def group(self, meta, children) -> List[Binder]:
        names, ty = children
        span = self._span(meta)
        return [(name, ty, span) for name in _binder_names(names)]

    def postfix(self, meta, children) -> STerm:
        inner, op = children
        return _POSTFIX[op.type](inner, span=self._span(meta))

    def apply(self, meta, children) -> SApp:
        fn, arg = children
        return SApp(fn, arg, span=self._span(meta))

    def var(self, meta, children) -> SVar:
        return SVar(str(children[0]), span=self._span(meta))

    def universe(self, meta, children) -> SType:
        return SType(int(children[0]), span=self._span(meta))

    def unit(self, meta, children) -> SUnit:
        return SUnit(span=self._span(meta))

    def star(self, meta, children) -> SStar:
        return SStar(span=self._span(meta))

    def sharp_ty(self, meta, children) -> SSharp:
        return SSharp(children[0], span=self._span(meta))

    def flat_ty(self, meta, children) -> SFlat:
        return SFlat(children[0], span=self._span(meta))

    def id_ty(self, meta, children) -> SId:
        ty, lhs, rhs = children
        return SId(ty, lhs, rhs, span=self._span(meta))

    def refl(self, meta, children) -> SRefl:
        return SRefl(children[0], span=self._span(meta))

    def j(self, meta, children) -> SJ:
        x, y, p, motive, z, base, lhs, rhs, proof = children
        return SJ((str(x), str(y), str(p)), motive, str(z), base, lhs, rhs, proof, span=self._span(meta))

    def pair(self, meta, children) -> SPair:
        fst, snd = children
        return SPair(fst, snd, span=self._span(meta))


def _parse(source: str, file: str, start: str) -> Any:
    try:
        tree = _LARK.parse(source, start=start)
    except UnexpectedInput as err:
        raise _to_parse_error(err, file) from None
    try:
        return SurfaceBuilder(file).transform(tree)
    except VisitError as err:
        raise err.orig_exc from None


def parse_module(source: str, file: str = "<input>") -> List[SDeclaration]:
    """
    Parse a whole ``.coh`` file.

    Returns:
        Surface declarations in file order

    Raises:
        ParseError: at the first failure, with the offending span
    """
    return _parse(source, file, "start")


def parse_term(source: str, file: str = "<expr>") -> STerm:
    """Parse a single term, requiring the whole input to be consumed."""
    return _parse(source, file, "term")


# ============================================================================
# Name resolution
# ============================================================================

def _suggest(name: str, candidates: Iterable[str]) -> str:
    choices = [c for c in set(candidates) if c != "_"]
    if not choices:
        return ""
    best = process.extractOne(name, choices, scorer=fuzz.WRatio)
    if best is None or best[1] < 80:
        return ""
    return f" (did you mean {best[0]}?)"


class Resolver:
    """Turns surface trees into core terms against a set of known constants."""

    def __init__(self, known: Iterable[str] = (), rules: Iterable[str] = ()):
        self.known: Set[str] = set(known)
        self.rules: Set[str] = set(rules)

    @classmethod
    def for_env(cls, env=None) -> "Resolver":
        """A resolver that knows the constants and rule names of env (None for empty)."""
        if env is None:
            return cls()
        return cls(env.names(), env.rule_names())

    def term(self, s: STerm, scope: List[str]) -> Term:
        span = s.span
        match s:
            case SVar(name):
                if name != "_":
                    for depth, bound in enumerate(reversed(scope)):
                        if bound == name:
                            return Var(depth, name=name, span=span)
                    if name in self.known:
                        return Const(name, span=span)
                raise CheckError(DiagnosticCode.SCOPE_ERROR,
                                 f"Unbound name {name}{_suggest(name, list(scope) + list(self.known))}", span)
            case SType(level):
                return Universe(level, span=span)
            case SUnit():
                return Unit(span=span)
            case SStar():
                return Star(span=span)
            case SPi(name, domain, codomain):
                return Pi(self.term(domain, scope), self.term(codomain, scope + [name]), name=name, span=span)
            case SLam(name, body):
                return Lam(self.term(body, scope + [name]), name=name, span=span)
            case SApp(fn, arg):
                return App(self.term(fn, scope), self.term(arg, scope), span=span)
            case SSigma(name, first, second):
                return Sigma(self.term(first, scope), self.term(second, scope + [name]), name=name, span=span)
            case SPair(a, b):
                return Pair(self.term(a, scope), self.term(b, scope), span=span)
            case SFst(p):
                return Fst(self.term(p, scope), span=span)
            case SSnd(p):
                return Snd(self.term(p, scope), span=span)
            case SId(ty, lhs, rhs):
                return IdType(self.term(ty, scope), self.term(lhs, scope), self.term(rhs, scope), span=span)
            case SRefl(point):
                return Refl(self.term(point, scope), span=span)
            case SJ(names, motive, base_name, base, lhs, rhs, proof):
                return J(
                    self.term(motive, scope + list(names)),
                    self.term(base, scope + [base_name]),
                    self.term(lhs, scope),
                    self.term(rhs, scope),
                    self.term(proof, scope),
                    motive_names=tuple(names),
                    base_name=base_name,
                    span=span,
                )
            case SSharp(inner):
                return SharpTy(self.term(inner, scope), span=span)
            case SSharpIntro(inner):
                return SharpIntro(self.term(inner, scope), span=span)
            case SSharpElim(inner):
                return SharpElim(self.term(inner, scope), span=span)
            case SFlat(inner):
                return FlatTy(self.term(inner, scope), span=span)
            case SFlatIntro(inner):
                return FlatIntro(self.term(inner, scope), span=span)
            case SLetFlat(name, scrutinee, motive_name, motive, body):
                return FlatLet(
                    None if motive is None else self.term(motive, scope + [motive_name]),
                    self.term(scrutinee, scope),
                    self.term(body, scope + [name]),
                    name=name,
                    motive_name=motive_name or "x",
                    span=span,
                )
        raise TypeError(f"Unknown surface node {type(s).__name__}")

    def declaration(self, d: SDeclaration) -> Declaration:
        """Resolve one declaration and record its name as known."""
        if isinstance(d, SRewrite):
            return self._rewrite(d)
        if d.name in self.known:
            raise CheckError(DiagnosticCode.DUPLICATE_NAME, f"{d.name} is already declared", d.span)
        ty = self.term(d.type, [])
        if isinstance(d, SDef):
            resolved: Declaration = Def(d.name, ty, self.term(d.body, []), span=d.span)
        else:
            resolved = Postulate(d.name, ty, span=d.span)
        self.known.add(d.name)
        return resolved

    def _rewrite(self, d: SRewrite) -> Rewrite:
        if d.name in self.rules or d.name in self.known:
            raise CheckError(DiagnosticCode.DUPLICATE_NAME, f"{d.name} is already declared", d.span)
        if d.head not in self.known:
            raise CheckError(DiagnosticCode.SCOPE_ERROR,
                             f"Unbound rewrite head {d.head}{_suggest(d.head, self.known)}", d.span)
        atoms = []
        for atom in d.atoms:
            if atom.args is None:
                if atom.name in self.known:
                    atoms.append(PatternCon(atom.name, ()))
                else:
                    atoms.append(PatternVar(atom.name))
            elif atom.name not in self.known:
                raise CheckError(DiagnosticCode.SCOPE_ERROR,
                                 f"Unbound constructor {atom.name}{_suggest(atom.name, self.known)}", atom.span)
            else:
                atoms.append(PatternCon(atom.name, tuple(atom.args), frozenset(atom.forced)))
        pattern = Pattern(d.head, tuple(atoms))
        rhs = self.term(d.rhs, pattern.variables())
        self.rules.add(d.name)
        return Rewrite(d.name, pattern, rhs, span=d.span)


def resolve(decls: Sequence[SDeclaration], env=None) -> List[Declaration]:
    """
    Resolve surface declarations against the constants of ``env``.

    Raises:
        CheckError: ScopeError on an unbound identifier, DuplicateName on redeclaration
    """
    resolver = Resolver.for_env(env)
    return [resolver.declaration(d) for d in decls]


def resolve_term(term: STerm, env=None, scope: Sequence[str] = ()) -> Term:
    """Resolve a single surface term under the given local names."""
    return Resolver.for_env(env).term(term, list(scope))


# ============================================================================
# Pretty printing
# ============================================================================

_TERM, _PROD, _APP, _ATOM = range(4)


def _constants(t: Term) -> Set[str]:
    found: Set[str] = set()

    def walk(s: object) -> None:
        if isinstance(s, Const):
            found.add(s.name)
        elif isinstance(s, Term):
            for value in vars(s).values():
                if isinstance(value, Term):
                    walk(value)

    walk(t)
    return found


class _Printer:
    def __init__(self, reserved: Set[str]):
        self.reserved = reserved

    def fresh(self, name: str, scope: List[str], body: Optional[Term] = None, bound: int = 0) -> str:
        """Pick a display name; ``_`` survives only when the variable is unused."""
        if name == "_" and body is not None and bound not in free_vars(body):
            return "_"
        base = "x" if name in ("_", "") else name
        candidate, n = base, 0
        taken = set(scope) | self.reserved | set(KEYWORDS)
        while candidate in taken:
            n += 1
            candidate = f"{base}{n}"
        return candidate

    def show(self, t: Term, scope: List[str], level: int) -> str:
        own, text = self._render(t, scope)
        return f"({text})" if own < level else text

    def _render(self, t: Term, scope: List[str]) -> Tuple[int, str]:
        match t:
            case Var(index):
                if 0 <= index < len(scope):
                    return _ATOM, scope[len(scope) - 1 - index]
                return _ATOM, f"#{index}"
            case Const(name):
                return _ATOM, name
            case Universe(level):
                return _APP, f"Type {level}"
            case Unit():
                return _ATOM, "Unit"
            case Star():
                return _ATOM, "star"
            case Pi(domain, codomain):
                if 0 not in free_vars(codomain):
                    inner = scope + ["_"]
                    return _TERM, f"{self.show(domain, scope, _PROD)} -> {self.show(codomain, inner, _TERM)}"
                name = self.fresh(t.name, scope)
                return _TERM, f"({name} : {self.show(domain, scope, _TERM)}) -> " \
                              f"{self.show(codomain, scope + [name], _TERM)}"
            case Sigma(first, second):
                if 0 not in free_vars(second):
                    inner = scope + ["_"]
                    return _PROD, f"{self.show(first, scope, _APP)} * {self.show(second, inner, _PROD)}"
                name = self.fresh(t.name, scope)
                return _PROD, f"({name} : {self.show(first, scope, _TERM)}) * " \
                              f"{self.show(second, scope + [name], _PROD)}"
            case Lam():
                names: List[str] = []
                inner_scope = list(scope)
                body: Term = t
                while isinstance(body, Lam):
                    name = self.fresh(body.name, inner_scope, body.body, 0)
                    names.append(name)
                    inner_scope.append(name)
                    body = body.body
                return _TERM, f"fun {' '.join(names)}. {self.show(body, inner_scope, _TERM)}"
            case App():
                args: List[Term] = []
                head: Term = t
                while isinstance(head, App):
                    args.append(head.arg)
                    head = head.fn
                parts = [self.show(head, scope, _ATOM)] + [self.show(a, scope, _ATOM) for a in reversed(args)]
                return _APP, " ".join(parts)
            case Pair(a, b):
                return _ATOM, f"({self.show(a, scope, _TERM)}, {self.show(b, scope, _TERM)})"
            case Fst(p):
                return _APP, f"{self.show(p, scope, _APP)}.1"
            case Snd(p):
                return _APP, f"{self.show(p, scope, _APP)}.2"
            case IdType(ty, lhs, rhs):
                return _APP, f"Id {self.show(ty, scope, _ATOM)} {self.show(lhs, scope, _ATOM)} " \
                             f"{self.show(rhs, scope, _ATOM)}"
            case Refl(point):
                return _APP, f"refl {self.show(point, scope, _ATOM)}"
            case J(motive, base, lhs, rhs, proof):
                x = self.fresh(t.motive_names[0], scope)
                y = self.fresh(t.motive_names[1], scope + [x])
                p = self.fresh(t.motive_names[2], scope + [x, y])
                z = self.fresh(t.base_name, scope)
                return _APP, (
                    f"J ({x}.{y}.{p}. {self.show(motive, scope + [x, y, p], _TERM)}) "
                    f"({z}. {self.show(base, scope + [z], _TERM)}) "
                    f"{self.show(lhs, scope, _ATOM)} {self.show(rhs, scope, _ATOM)} {self.show(proof, scope, _ATOM)}"
                )
            case SharpTy(inner):
                return _APP, f"Sharp {self.show(inner, scope, _ATOM)}"
            case FlatTy(inner):
                return _APP, f"Flat {self.show(inner, scope, _ATOM)}"
            case SharpIntro(inner):
                return _APP, f"{self.show(inner, scope, _APP)} ^sharp"
            case SharpElim(inner):
                return _APP, f"{self.show(inner, scope, _APP)} _sharp"
            case FlatIntro(inner):
                return _APP, f"{self.show(inner, scope, _APP)} ^flat"
            case FlatLet(motive, scrutinee, body):
                u = self.fresh(t.name, scope, body, 0)
                text = f"letflat {u} := {self.show(scrutinee, scope, _TERM)}"
                if motive is not None:
                    x = self.fresh(t.motive_name, scope, motive, 0)
                    text += f" motive {x}. {self.show(motive, scope + [x], _TERM)}"
                return _TERM, f"{text} in {self.show(body, scope + [u], _TERM)}"
        return _ATOM, f"<{type(t).__name__}>"


def pretty(t: Term, names: Optional[Sequence[str]] = None, reserved: Collection[str] = ()) -> str:
    """
    Print a core term as surface text.

    Args:
        t: the term
        names: display names of the enclosing telescope, outermost first
        reserved: global names binders must not shadow

    Returns:
        Text that parses and resolves back to t
    """
    taken = set(reserved) | _constants(t)
    return _Printer(taken).show(t, list(names or []), _TERM)
