"""First-order formulas over automatic structures, compiled to automata.

Grammar (s-expressions)::

    formula := (in TERM ... NAME) | (eq TERM TERM) | true | false
             | (and F ...) | (or F ...) | (not F) | (imp F F)
             | (exists VAR F) | (forall VAR F)
    term    := SYMBOL | (add TERM SYMBOL)

A symbol names a constant when the structure defines it and a variable
otherwise.  Every term denotes a point of Z[1/b]^d; a predicate of arity
``k`` is an automaton over ``k * d`` tracks (argument-major order).

Compilation follows the usual closure argument: atoms become automata over
the tracks of their variables, conjunction is a natural join, disjunction
a union after padding both sides to the same variables, negation a
complement inside the valid encodings, and quantifiers project.  Formulas
are first put in negation normal form, so complements are only taken of
atoms.  Each free variable ``v`` owns tracks ``v.0 .. v.{d-1}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .automata import (SyncAutomaton, complement, equate_tracks, is_empty, join,
                       minimize, project, rename, reorder, shortest_word, union)
from .numeration import as_fraction, check_base, decode, in_ring, RepresentationError
from .relations import equality_automaton, point_automaton, shift_point_automaton, valid_encoding_automaton


class FormulaError(ValueError):
    """Malformed formula or a reference to an unbound name."""


# --------------------------------------------------------------------------
# syntax

@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Add:
    term: object
    const: str


@dataclass(frozen=True)
class In:
    terms: tuple
    pred: str


@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class Bool:
    value: bool


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class Imp:
    left: object
    right: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


def _tokens(text: str):
    out = []
    for raw in text.replace("(", " ( ").replace(")", " ) ").split():
        out.append(raw)
    return out


def parse(text: str):
    """Parse the s-expression syntax into a formula tree."""
    tokens = _tokens(text)
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(tokens):
            raise FormulaError("unexpected end of formula")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise FormulaError("unexpected ')'")
        if tok != "(":
            return tok
        items = []
        while True:
            if pos >= len(tokens):
                raise FormulaError("missing ')'")
            if tokens[pos] == ")":
                pos += 1
                return items
            items.append(read())

    tree = read()
    if pos != len(tokens):
        raise FormulaError(f"trailing tokens after formula: {tokens[pos:]}")
    return _formula(tree)


def _term(x):
    if isinstance(x, str):
        return Sym(x)
    if len(x) == 3 and x[0] == "add" and isinstance(x[2], str):
        return Add(_term(x[1]), x[2])
    raise FormulaError(f"bad term {x!r}; terms are symbols or (add TERM CONST)")


def _formula(x):
    if isinstance(x, str):
        if x == "true":
            return Bool(True)
        if x == "false":
            return Bool(False)
        raise FormulaError(f"bare symbol {x!r} is not a formula")
    if not x:
        raise FormulaError("empty list")
    head, rest = x[0], x[1:]
    if head == "in":
        if len(rest) < 2 or not isinstance(rest[-1], str):
            raise FormulaError("(in TERM ... PRED) needs terms and a predicate name")
        return In(tuple(_term(t) for t in rest[:-1]), rest[-1])
    if head == "eq" and len(rest) == 2:
        return Eq(_term(rest[0]), _term(rest[1]))
    if head in ("and", "or"):
        args = tuple(_formula(a) for a in rest)
        return And(args) if head == "and" else Or(args)
    if head == "not" and len(rest) == 1:
        return Not(_formula(rest[0]))
    if head == "imp" and len(rest) == 2:
        return Imp(_formula(rest[0]), _formula(rest[1]))
    if head in ("exists", "forall") and len(rest) == 2 and isinstance(rest[0], str):
        body = _formula(rest[1])
        return Exists(rest[0], body) if head == "exists" else Forall(rest[0], body)
    raise FormulaError(f"cannot parse {x!r}")


def unparse(f) -> str:
    if isinstance(f, Sym):
        return f.name
    if isinstance(f, Add):
        return f"(add {unparse(f.term)} {f.const})"
    if isinstance(f, In):
        return "(in " + " ".join(unparse(t) for t in f.terms) + f" {f.pred})"
    if isinstance(f, Eq):
        return f"(eq {unparse(f.left)} {unparse(f.right)})"
    if isinstance(f, Bool):
        return "true" if f.value else "false"
    if isinstance(f, (And, Or)):
        head = "and" if isinstance(f, And) else "or"
        return f"({head} " + " ".join(unparse(a) for a in f.args) + ")" if f.args else f"({head})"
    if isinstance(f, Not):
        return f"(not {unparse(f.arg)})"
    if isinstance(f, Imp):
        return f"(imp {unparse(f.left)} {unparse(f.right)})"
    if isinstance(f, (Exists, Forall)):
        head = "exists" if isinstance(f, Exists) else "forall"
        return f"({head} {f.var} {unparse(f.body)})"
    raise TypeError(f)


# --------------------------------------------------------------------------
# structures

@dataclass
class Structure:
    """Domain (the valid encodings of Z[1/b]^d), predicates and constants."""

    base: int
    dimension: int
    predicates: dict[str, SyncAutomaton] = field(default_factory=dict)
    constants: dict[str, tuple[Fraction, ...]] = field(default_factory=dict)

    def __post_init__(self):
        check_base(self.base)
        for name, A in self.predicates.items():
            self._check_predicate(name, A)
        self.constants = {k: self._check_constant(k, v) for k, v in self.constants.items()}

    def _check_predicate(self, name, A):
        if A.base != self.base:
            raise FormulaError(f"predicate {name} has base {A.base}, structure {self.base}")
        if A.k % self.dimension:
            raise FormulaError(f"predicate {name} has {A.k} tracks, not a multiple of d")

    def _check_constant(self, name, point):
        if not isinstance(point, (tuple, list)):
            point = (point,)
        point = tuple(as_fraction(z) for z in point)
        if len(point) != self.dimension:
            raise FormulaError(f"constant {name} has dimension {len(point)}")
        for z in point:
            if not in_ring(z, self.base):
                raise RepresentationError(f"constant {name}: {z} is not in Z[1/{self.base}]")
        return point

    def add_predicate(self, name: str, A: SyncAutomaton) -> None:
        self._check_predicate(name, A)
        self.predicates[name] = A

    def add_constant(self, name: str, point) -> None:
        self.constants[name] = self._check_constant(name, point)


# --------------------------------------------------------------------------
# analysis

def free_variables(f, structure: Structure) -> list[str]:
    """Free variables in order of first occurrence."""
    out: list[str] = []

    def term(t, bound):
        if isinstance(t, Sym):
            if t.name not in structure.constants and t.name not in bound and t.name not in out:
                out.append(t.name)
        else:
            term(t.term, bound)

    def walk(g, bound):
        if isinstance(g, In):
            for t in g.terms:
                term(t, bound)
        elif isinstance(g, Eq):
            term(g.left, bound)
            term(g.right, bound)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                walk(a, bound)
        elif isinstance(g, Not):
            walk(g.arg, bound)
        elif isinstance(g, Imp):
            walk(g.left, bound)
            walk(g.right, bound)
        elif isinstance(g, (Exists, Forall)):
            walk(g.body, bound | {g.var})

    walk(f, frozenset())
    return out


def nnf(f, negate: bool = False):
    """Negation normal form; implications are expanded."""
    if isinstance(f, (In, Eq)):
        return Not(f) if negate else f
    if isinstance(f, Bool):
        return Bool(f.value != negate)
    if isinstance(f, Not):
        return nnf(f.arg, not negate)
    if isinstance(f, Imp):
        return nnf(Or((Not(f.left), f.right)), negate)
    if isinstance(f, And):
        args = tuple(nnf(a, negate) for a in f.args)
        return Or(args) if negate else And(args)
    if isinstance(f, Or):
        args = tuple(nnf(a, negate) for a in f.args)
        return And(args) if negate else Or(args)
    if isinstance(f, Exists):
        body = nnf(f.body, negate)
        return Forall(f.var, body) if negate else Exists(f.var, body)
    if isinstance(f, Forall):
        body = nnf(f.body, negate)
        return Exists(f.var, body) if negate else Forall(f.var, body)
    raise TypeError(f)


# --------------------------------------------------------------------------
# compilation

@dataclass
class _Rel:
    """An automaton over the tracks of ``vars`` (in that order)."""

    A: SyncAutomaton
    vars: tuple[str, ...]


def tracks_of(var: str, d: int) -> tuple[str, ...]:
    return tuple(f"{var}.{i}" for i in range(d))


class Compiler:
    def __init__(self, structure: Structure):
        self.S = structure
        self.d = structure.dimension
        self.b = structure.base
        self._fresh = 0

    def fresh(self) -> str:
        self._fresh += 1
        return f"__t{self._fresh}"

    def universe(self, vars_: Sequence[str]) -> SyncAutomaton:
        if not vars_:
            return SyncAutomaton(self.b, (), [{}], [0], [0])
        tracks = [t for v in vars_ for t in tracks_of(v, self.d)]
        return valid_encoding_automaton(self.b, len(tracks), tracks)

    def align(self, r: _Rel, vars_: Sequence[str]) -> SyncAutomaton:
        """Cylindrify ``r`` to ``vars_`` and order its tracks accordingly."""
        missing = [v for v in vars_ if v not in r.vars]
        A = r.A
        if missing:
            A = join(A, self.universe(missing))
        tracks = [t for v in vars_ for t in tracks_of(v, self.d)]
        return reorder(A, tracks)

    def _normal_term(self, t):
        """``(variable or None, constant offset)``."""
        if isinstance(t, Sym):
            if t.name in self.S.constants:
                return None, self.S.constants[t.name]
            return t.name, (Fraction(0),) * self.d
        var, off = self._normal_term(t.term)
        if t.const not in self.S.constants:
            raise FormulaError(f"(add ...) needs a constant second argument, got {t.const!r}")
        c = self.S.constants[t.const]
        return var, tuple(a + b for a, b in zip(off, c))

    def atom(self, terms, pred: SyncAutomaton | None) -> _Rel:
        d = self.d
        arg_tracks = []
        for k in range(len(terms)):
            arg_tracks.append(tuple(f"__a{k}.{i}" for i in range(d)))
        if pred is None:
            pred = equality_automaton(self.b, ("__e0", "__e1"))
            if d > 1:
                parts = [equality_automaton(self.b, (f"__a0.{i}", f"__a1.{i}")) for i in range(d)]
                pred = parts[0]
                for p in parts[1:]:
                    pred = join(pred, p)
                pred = reorder(pred, arg_tracks[0] + arg_tracks[1])
            else:
                pred = rename(pred, {"__e0": "__a0.0", "__e1": "__a1.0"})
        else:
            if pred.k != d * len(terms):
                raise FormulaError(f"predicate arity mismatch: {pred.k} tracks for {len(terms)} terms")
            pred = rename(pred, dict(zip(pred.tracks, [t for ts in arg_tracks for t in ts])))
        A = pred
        vars_: list[str] = []
        equalities = []
        for k, t in enumerate(terms):
            var, off = self._normal_term(t)
            if var is None:
                A = join(point_automaton(self.b, arg_tracks[k], off), A)
                continue
            vt = tracks_of(var, d)
            if all(c == 0 for c in off):
                if var in vars_:
                    equalities.append((vt, arg_tracks[k]))
                else:
                    A = rename(A, dict(zip(arg_tracks[k], vt)))
                    vars_.append(var)
                continue
            src = vt if var not in vars_ else tuple(f"__s{k}.{i}" for i in range(d))
            A = join(shift_point_automaton(self.b, off, src, arg_tracks[k]), A)
            if var in vars_:
                equalities.append((vt, src))
            else:
                vars_.append(var)
        for keep, drop in equalities:
            for a, c in zip(keep, drop):
                A = equate_tracks(A, a, c)
        keep_tracks = [t for v in vars_ for t in tracks_of(v, d)]
        A = minimize(project(A, keep_tracks))
        return _Rel(A, tuple(vars_))

    def compile(self, f) -> _Rel:
        d = self.d
        if isinstance(f, Bool):
            return _Rel(SyncAutomaton(self.b, (), [{}], [0], [0] if f.value else []), ())
        if isinstance(f, In):
            if f.pred not in self.S.predicates:
                raise FormulaError(f"unbound predicate {f.pred!r}")
            return self.atom(f.terms, self.S.predicates[f.pred])
        if isinstance(f, Eq):
            return self.atom((f.left, f.right), None)
        if isinstance(f, Not):
            r = self.compile(f.arg)
            return _Rel(minimize(complement(r.A, self.universe(r.vars))), r.vars)
        if isinstance(f, And):
            if not f.args:
                return self.compile(Bool(True))
            rels = [self.compile(a) for a in f.args]
            rels.sort(key=lambda r: len(r.vars))
            acc = rels[0]
            for r in rels[1:]:
                vars_ = acc.vars + tuple(v for v in r.vars if v not in acc.vars)
                A = minimize(join(acc.A, r.A))
                acc = _Rel(reorder(A, [t for v in vars_ for t in tracks_of(v, d)]), vars_)
                if is_empty(acc.A):
                    break
            return acc
        if isinstance(f, Or):
            if not f.args:
                return self.compile(Bool(False))
            rels = [self.compile(a) for a in f.args]
            vars_: tuple[str, ...] = ()
            for r in rels:
                vars_ += tuple(v for v in r.vars if v not in vars_)
            A = self.align(rels[0], vars_)
            for r in rels[1:]:
                A = union(A, self.align(r, vars_))
            return _Rel(minimize(A), vars_)
        if isinstance(f, Exists):
            r = self.compile(f.body)
            if f.var not in r.vars:
                return r
            vars_ = tuple(v for v in r.vars if v != f.var)
            keep = [t for v in vars_ for t in tracks_of(v, d)]
            return _Rel(minimize(project(r.A, keep)), vars_)
        if isinstance(f, Forall):
            r = self.compile(f.body)
            if f.var not in r.vars:
                return r
            vars_ = tuple(v for v in r.vars if v != f.var)
            keep = [t for v in vars_ for t in tracks_of(v, d)]
            neg = complement(r.A, self.universe(r.vars))
            ex = minimize(project(neg, keep))
            return _Rel(minimize(complement(ex, self.universe(vars_))), vars_)
        if isinstance(f, Imp):
            return self.compile(nnf(f))
        raise TypeError(f)


def compile_formula(f, structure: Structure) -> tuple[SyncAutomaton, list[str]]:
    """Automaton of satisfying assignments and its free variables.

    The automaton has tracks ``v.0 .. v.{d-1}`` for each free variable ``v``
    in order of first occurrence; a sentence compiles to a 0-track automaton
    that accepts the empty word iff the sentence is true.
    """
    if isinstance(f, str):
        f = parse(f)
    free = free_variables(f, structure)
    c = Compiler(structure)
    r = c.compile(nnf(f))
    return c.align(r, free), free


def evaluate_sentence(f, structure: Structure) -> bool:
    A, free = compile_formula(f, structure)
    if free:
        raise FormulaError(f"not a sentence; free variables {free}")
    return not is_empty(A)


def witness(A: SyncAutomaton, free: Sequence[str], d: int) -> dict[str, tuple[Fraction, ...]] | None:
    """Decode the shortest accepted word as an assignment of points."""
    w = shortest_word(A)
    if w is None:
        return None
    out = {}
    for i, v in enumerate(free):
        out[v] = tuple(decode(w.tracks[i * d + j], A.base) for j in range(d))
    return out
