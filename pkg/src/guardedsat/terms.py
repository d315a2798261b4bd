"""First-order terms, literals, clauses and the operations the engine needs.

Terms are immutable trees built from :class:`Var`, :class:`Const` and
:class:`App`.  A :class:`Literal` is a signed atom; equality literals are
tagged so the resolution engine can refuse them.  A :class:`Clause` is a
multiset of literals stored in a deterministic order.

Substitutions are plain ``dict[str, Term]`` mapping variable names to terms.
``mgu`` keeps them idempotent, so applying a substitution once is enough.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class App:
    fn: str
    args: tuple["Term", ...]

    def __str__(self) -> str:
        return f"{self.fn}({','.join(map(str, self.args))})"


Term = Var | Const | App
Subst = dict[str, Term]


class SymbolKind(Enum):
    VARIABLE = "variable"
    CONSTANT = "constant"
    FUNCTION = "function"
    PREDICATE = "predicate"
    PROPOSITIONAL = "propositional"


class SymbolOrigin(Enum):
    INPUT = "input"
    SKOLEM = "skolem"
    DEFINER = "definer"


@dataclass(frozen=True, slots=True)
class Symbol:
    name: str
    kind: SymbolKind
    arity: int
    origin: SymbolOrigin = SymbolOrigin.INPUT


class SymbolTable:
    """Registry of the non-variable symbols appearing in a problem.

    Tracks arity (checked on re-declaration) and origin, which the term
    ordering uses to place fresh Skolem and definer symbols below the input
    symbols of the same kind.
    """

    def __init__(self) -> None:
        self._symbols: dict[str, Symbol] = {}
        self._fresh_counters: dict[str, int] = {}

    def declare(self, name: str, kind: SymbolKind, arity: int,
                origin: SymbolOrigin = SymbolOrigin.INPUT) -> Symbol:
        prev = self._symbols.get(name)
        if prev is not None:
            if prev.kind is not kind or prev.arity != arity:
                raise ValueError(
                    f"symbol {name!r} redeclared as {kind.value}/{arity}, "
                    f"was {prev.kind.value}/{prev.arity}")
            return prev
        sym = Symbol(name, kind, arity, origin)
        self._symbols[name] = sym
        return sym

    def get(self, name: str) -> Optional[Symbol]:
        return self._symbols.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._symbols

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._symbols.values())

    def fresh(self, prefix: str, kind: SymbolKind, arity: int,
              origin: SymbolOrigin) -> Symbol:
        """Declare a new symbol ``<prefix><n>`` not colliding with anything."""
        n = self._fresh_counters.get(prefix, 0)
        while f"{prefix}{n}" in self._symbols:
            n += 1
        self._fresh_counters[prefix] = n + 1
        return self.declare(f"{prefix}{n}", kind, arity, origin)

    def copy(self) -> "SymbolTable":
        dup = SymbolTable()
        dup._symbols = dict(self._symbols)
        dup._fresh_counters = dict(self._fresh_counters)
        return dup


# ---------------------------------------------------------------------------
# literals and clauses

EQ = "="


@dataclass(frozen=True, slots=True)
class Literal:
    """A signed atom.  ``pos`` is the polarity; ``pred`` the predicate name.

    Equality literals use the reserved predicate ``=`` with exactly two
    arguments; they appear only in the rewriting pipeline, never in the
    resolution engine.
    """

    pos: bool
    pred: str
    args: tuple[Term, ...] = ()

    @property
    def is_eq(self) -> bool:
        return self.pred == EQ

    def negate(self) -> "Literal":
        return Literal(not self.pos, self.pred, self.args)

    def __str__(self) -> str:
        if self.is_eq:
            op = "=" if self.pos else "!="
            return f"{self.args[0]} {op} {self.args[1]}"
        body = self.pred if not self.args else \
            f"{self.pred}({','.join(map(str, self.args))})"
        return body if self.pos else "~" + body


def _term_key(t: Term) -> tuple:
    if isinstance(t, Var):
        # all variables compare equal structurally; names break ties last
        return (0, "", ())
    if isinstance(t, Const):
        return (1, t.name, ())
    return (2, t.fn, tuple(_term_key(a) for a in t.args))


def literal_key(lit: Literal) -> tuple:
    """Structural total order on literals (variable names ignored)."""
    return (lit.pred, len(lit.args), not lit.pos,
            tuple(_term_key(a) for a in lit.args),
            tuple(str(a) for a in lit.args))


class Clause:
    """A multiset of literals kept in sorted order.

    ``label`` and ``parents`` are bookkeeping for traces and play no role in
    equality: two clauses are equal when their sorted literal tuples are.
    """

    __slots__ = ("literals", "label", "parents", "_hash")

    def __init__(self, literals: Iterable[Literal], label: str = "",
                 parents: tuple[int, ...] = ()) -> None:
        self.literals: tuple[Literal, ...] = tuple(
            sorted(literals, key=literal_key))
        self.label = label
        self.parents = parents
        self._hash = hash(self.literals)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Clause) and self.literals == other.literals

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __str__(self) -> str:
        if not self.literals:
            return "[]"
        return " | ".join(map(str, self.literals))

    def is_empty(self) -> bool:
        return not self.literals


EMPTY_CLAUSE = Clause(())


# ---------------------------------------------------------------------------
# basic measures


def term_vars(t: Term, acc: Optional[set[str]] = None) -> set[str]:
    if acc is None:
        acc = set()
    if isinstance(t, Var):
        acc.add(t.name)
    elif isinstance(t, App):
        for a in t.args:
            term_vars(a, acc)
    return acc


def lit_vars(lit: Literal) -> set[str]:
    acc: set[str] = set()
    for a in lit.args:
        term_vars(a, acc)
    return acc


def clause_vars(c: Clause) -> set[str]:
    acc: set[str] = set()
    for lit in c:
        for a in lit.args:
            term_vars(a, acc)
    return acc


def term_depth(t: Term) -> int:
    if isinstance(t, App):
        return 1 + max((term_depth(a) for a in t.args), default=0)
    return 0


def lit_depth(lit: Literal) -> int:
    return max((term_depth(a) for a in lit.args), default=0)


def depth(c: Clause | Literal | Term) -> int:
    """Depth of the deepest term in an expression."""
    if isinstance(c, (Var, Const, App)):
        return term_depth(c)
    if isinstance(c, Literal):
        return lit_depth(c)
    return max((lit_depth(lit) for lit in c), default=0)


def width(c: Clause | Literal) -> int:
    """Number of distinct variables."""
    if isinstance(c, Literal):
        return len(lit_vars(c))
    return len(clause_vars(c))


def is_ground_term(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    if isinstance(t, App):
        return all(is_ground_term(a) for a in t.args)
    return True


def is_ground_lit(lit: Literal) -> bool:
    return all(is_ground_term(a) for a in lit.args)


def is_ground(c: Clause) -> bool:
    return all(is_ground_lit(lit) for lit in c)


def term_funcs(t: Term, acc: Optional[set[str]] = None) -> set[str]:
    if acc is None:
        acc = set()
    if isinstance(t, App):
        acc.add(t.fn)
        for a in t.args:
            term_funcs(a, acc)
    return acc


def clause_funcs(c: Clause) -> set[str]:
    acc: set[str] = set()
    for lit in c:
        for a in lit.args:
            term_funcs(a, acc)
    return acc


def compound_terms(c: Clause) -> list[App]:
    out: list[App] = []

    def walk(t: Term) -> None:
        if isinstance(t, App):
            out.append(t)
            for a in t.args:
                walk(a)

    for lit in c:
        for a in lit.args:
            walk(a)
    return out


# ---------------------------------------------------------------------------
# substitutions


def apply_term(t: Term, sub: Subst) -> Term:
    if isinstance(t, Var):
        return sub.get(t.name, t)
    if isinstance(t, App):
        return App(t.fn, tuple(apply_term(a, sub) for a in t.args))
    return t


def apply_lit(lit: Literal, sub: Subst) -> Literal:
    if not lit.args:
        return lit
    return Literal(lit.pos, lit.pred, tuple(apply_term(a, sub) for a in lit.args))


def apply_clause(c: Clause, sub: Subst) -> Clause:
    return Clause((apply_lit(lit, sub) for lit in c),
                  label=c.label, parents=c.parents)


def compose(sigma: Subst, theta: Subst) -> Subst:
    """``x (compose(sigma, theta)) == (x sigma) theta``."""
    out: Subst = {}
    for x, t in sigma.items():
        s = apply_term(t, theta)
        if not (isinstance(s, Var) and s.name == x):
            out[x] = s
    for x, t in theta.items():
        if x not in sigma:
            out[x] = t
    return out


class UnifyFail(Enum):
    CLASH = "clash"
    OCCURS = "occurs"


def _walk(t: Term, sub: Subst) -> Term:
    while isinstance(t, Var) and t.name in sub:
        t = sub[t.name]
    return t


def _occurs(name: str, t: Term, sub: Subst) -> bool:
    t = _walk(t, sub)
    if isinstance(t, Var):
        return t.name == name
    if isinstance(t, App):
        return any(_occurs(name, a, sub) for a in t.args)
    return False


def mgu_ex(pairs: Sequence[tuple[Term, Term]]
           ) -> tuple[Optional[Subst], Optional[UnifyFail]]:
    """Simultaneous mgu of term pairs, or a failure reason.

    When a variable meets a variable, the left one is bound; callers that
    care about binding orientation (the top-variable machinery does) should
    put the side-premise term on the left.
    """
    sub: Subst = {}
    stack = list(pairs)
    while stack:
        s, t = stack.pop()
        s, t = _walk(s, sub), _walk(t, sub)
        if s == t:
            continue
        if isinstance(s, Var):
            if _occurs(s.name, t, sub):
                return None, UnifyFail.OCCURS
            sub[s.name] = t
        elif isinstance(t, Var):
            if _occurs(t.name, s, sub):
                return None, UnifyFail.OCCURS
            sub[t.name] = s
        elif isinstance(s, Const) or isinstance(t, Const):
            return None, UnifyFail.CLASH
        else:
            if s.fn != t.fn or len(s.args) != len(t.args):
                return None, UnifyFail.CLASH
            stack.extend(zip(s.args, t.args))
    return normalize(sub), None


def mgu(pairs: Sequence[tuple[Term, Term]]) -> Optional[Subst]:
    sub, _ = mgu_ex(pairs)
    return sub


def mgu_lits(pairs: Sequence[tuple[Literal, Literal]]) -> Optional[Subst]:
    """Simultaneous mgu of atom pairs (polarity is the caller's business)."""
    term_pairs: list[tuple[Term, Term]] = []
    for a, b in pairs:
        if a.pred != b.pred or len(a.args) != len(b.args):
            return None
        term_pairs.extend(zip(a.args, b.args))
    return mgu(term_pairs)


def normalize(sub: Subst) -> Subst:
    """Resolve the triangular form into an idempotent substitution."""
    out: Subst = {}
    for x in sub:
        t = apply_term(Var(x), sub)
        while True:
            t2 = apply_term(t, sub)
            if t2 == t:
                break
            t = t2
        if not (isinstance(t, Var) and t.name == x):
            out[x] = t
    return out


def match_term(pat: Term, t: Term, sub: Subst) -> Optional[Subst]:
    """One-way matching: extend ``sub`` so that ``pat sub == t``."""
    if isinstance(pat, Var):
        bound = sub.get(pat.name)
        if bound is None:
            sub = dict(sub)
            sub[pat.name] = t
            return sub
        return sub if bound == t else None
    if isinstance(pat, Const):
        return sub if pat == t else None
    if isinstance(t, App) and pat.fn == t.fn and len(pat.args) == len(t.args):
        for pa, ta in zip(pat.args, t.args):
            nxt = match_term(pa, ta, sub)
            if nxt is None:
                return None
            sub = nxt
        return sub
    return None


def match_lit(pat: Literal, lit: Literal, sub: Subst) -> Optional[Subst]:
    if pat.pos != lit.pos or pat.pred != lit.pred or len(pat.args) != len(lit.args):
        return None
    for pa, ta in zip(pat.args, lit.args):
        nxt = match_term(pa, ta, sub)
        if nxt is None:
            return None
        sub = nxt
    return sub


_rename_counter = itertools.count()


def reset_rename_counter() -> None:
    """Restart the fresh-variable counter (for reproducible traces)."""
    global _rename_counter
    _rename_counter = itertools.count()


def rename_apart(c: Clause, avoid: set[str] | None = None) -> Clause:
    """Rename the variables of ``c`` to globally fresh ones."""
    vs = sorted(clause_vars(c))
    if not vs:
        return c
    avoid = avoid or set()
    sub: Subst = {}
    for v in vs:
        while True:
            fresh = f"_v{next(_rename_counter)}"
            if fresh not in avoid:
                break
        sub[v] = Var(fresh)
    return apply_clause(c, sub)


# ---------------------------------------------------------------------------
# variants, subsumption, condensation


def _subsume_search(pat: Sequence[Literal], target: Sequence[Literal],
                    sub: Subst, i: int, bijective: bool) -> Optional[Subst]:
    if i == len(pat):
        return sub
    for lit in target:
        nxt = match_lit(pat[i], lit, sub)
        if nxt is None:
            continue
        if bijective:
            imgs = [t for t in nxt.values()]
            if any(not isinstance(t, Var) for t in imgs):
                continue
            if len({t.name for t in imgs}) != len(imgs):  # type: ignore[union-attr]
                continue
        res = _subsume_search(pat, target, nxt, i + 1, bijective)
        if res is not None:
            return res
    return None


def subsumes(c: Clause, d: Clause) -> bool:
    """Classic theta-subsumption: some ``c sigma`` is a subset of ``d``."""
    # cheap filter: every predicate/polarity of c appears in d
    sig_d = {(l.pred, l.pos) for l in d}
    if any((l.pred, l.pos) not in sig_d for l in c):
        return False
    # variables of c must be treated as pattern variables disjoint from d's
    c = rename_apart(c, clause_vars(d))
    return _subsume_search(c.literals, d.literals, {}, 0, False) is not None


def is_variant(c: Clause, d: Clause) -> bool:
    """True if ``c`` and ``d`` differ only by a bijective variable renaming."""
    if len(c) != len(d) or width(c) != width(d):
        return False
    d2 = rename_apart(d, clause_vars(c))
    fwd = _subsume_search(c.literals, d2.literals, {}, 0, True)
    if fwd is None:
        return False
    bwd = _subsume_search(d2.literals, c.literals, {}, 0, True)
    return bwd is not None


def condense(c: Clause) -> Clause:
    """Smallest factor of ``c`` that subsumes ``c`` (unique up to renaming)."""
    lits = list(dict.fromkeys(c.literals))  # drop exact duplicates
    changed = True
    while changed:
        changed = False
        for i, li in enumerate(lits):
            for j, lj in enumerate(lits):
                if i == j:
                    continue
                sub = match_lit(li, lj, {})
                if sub is None:
                    continue
                cand = list(dict.fromkeys(apply_lit(l, sub) for l in lits))
                if len(cand) < len(lits) and \
                        subsumes(Clause(cand), Clause(lits)):
                    lits = cand
                    changed = True
                    break
            if changed:
                break
    return Clause(lits, label=c.label, parents=c.parents)


def canonical(c: Clause) -> Clause:
    """Condensed clause with variables renumbered by first occurrence.

    Used as the identity of a clause: two clauses get the same canonical
    form iff they are variants modulo condensation (for the clause shapes
    the pipeline produces, first-occurrence numbering after literal sorting
    is stable enough; ``is_variant`` remains the ground truth in tests).
    """
    c = condense(c)
    order: dict[str, int] = {}

    def number(t: Term) -> None:
        if isinstance(t, Var):
            if t.name not in order:
                order[t.name] = len(order)
        elif isinstance(t, App):
            for a in t.args:
                number(a)

    for lit in c:
        for a in lit.args:
            number(a)
    sub = {v: Var(f"X{i}") for v, i in order.items()}
    return apply_clause(c, sub)


# ---------------------------------------------------------------------------
# clause classification


@dataclass(frozen=True, slots=True)
class ClauseFlags:
    flat: bool
    simple: bool
    covering: bool
    compatible: bool
    strongly_compatible: bool
    ground: bool
    decomposable: bool


def _is_flat_term(t: Term) -> bool:
    return isinstance(t, (Var, Const))


def _is_simple_arg(t: Term) -> bool:
    if _is_flat_term(t):
        return True
    return all(_is_flat_term(a) for a in t.args)


def classify(c: Clause) -> ClauseFlags:
    comps = compound_terms(c)
    cvars = clause_vars(c)
    flat = not comps
    simple = all(_is_simple_arg(a) for lit in c for a in lit.args)
    covering = all(term_vars(t) == cvars for t in comps)
    by_fn: dict[str, set[tuple[Term, ...]]] = {}
    for t in comps:
        by_fn.setdefault(t.fn, set()).add(t.args)
    compatible = all(len(argsets) == 1 for argsets in by_fn.values())
    strongly_compatible = len({t.args for t in comps}) <= 1
    return ClauseFlags(
        flat=flat,
        simple=simple,
        covering=covering,
        compatible=compatible,
        strongly_compatible=strongly_compatible,
        ground=is_ground(c),
        decomposable=is_decomposable(c),
    )


def is_decomposable(c: Clause) -> bool:
    """True if the clause splits into two variable-disjoint subclauses."""
    if len(c) < 2:
        return False
    lits = list(c)
    # union-find over literal indices connected by shared variables; ground
    # literals are isolated nodes, so any clause containing one (plus
    # anything else) is decomposable.
    parent = list(range(len(lits)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    var_home: dict[str, int] = {}
    for i, lit in enumerate(lits):
        for v in lit_vars(lit):
            if v in var_home:
                parent[find(i)] = find(var_home[v])
            else:
                var_home[v] = i
    return len({find(i) for i in range(len(lits))}) > 1


def variable_components(c: Clause) -> list[list[Literal]]:
    """Partition literals into maximal variable-connected components."""
    lits = list(c)
    parent = list(range(len(lits)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    var_home: dict[str, int] = {}
    for i, lit in enumerate(lits):
        for v in lit_vars(lit):
            if v in var_home:
                parent[find(i)] = find(var_home[v])
            else:
                var_home[v] = i
    groups: dict[int, list[Literal]] = {}
    for i, lit in enumerate(lits):
        groups.setdefault(find(i), []).append(lit)
    return list(groups.values())


GROUND_GUARD = ()


def loose_guards(c: Clause) -> list[tuple[Literal, ...]]:
    """All minimal loose guards of a clause.

    A loose guard is a set of negative flat literals in which every variable
    of the clause occurs and every pair of distinct variables co-occurs in
    one literal.  A ground clause needs no guard: the distinguished witness
    ``()`` is returned.  Clauses with no guard yield the empty list.
    """
    if is_ground(c):
        return [GROUND_GUARD]
    cvars = sorted(clause_vars(c))
    need_pairs = {frozenset(p) for p in itertools.combinations(cvars, 2)}
    candidates = [lit for lit in c
                  if not lit.pos and not lit.is_eq
                  and all(_is_flat_term(a) for a in lit.args)]
    # BFS over subsets by size so only minimal guards are reported
    found: list[tuple[Literal, ...]] = []
    for size in range(1, len(candidates) + 1):
        for combo in itertools.combinations(candidates, size):
            if any(set(g) < set(combo) for g in found):
                continue
            covered_vars: set[str] = set()
            covered_pairs: set[frozenset[str]] = set()
            for lit in combo:
                vs = lit_vars(lit)
                covered_vars |= vs
                covered_pairs |= {frozenset(p)
                                  for p in itertools.combinations(sorted(vs), 2)}
            if covered_vars >= set(cvars) and covered_pairs >= need_pairs:
                found.append(combo)
    return found


def membership(c: Clause) -> set[str]:
    """Which clausal classes the clause belongs to.

    Returns a subset of ``{"query", "LG", "guarded", "horn_guarded"}``;
    the empty set means neither.
    """
    out: set[str] = set()
    flags = classify(c)
    if flags.flat and all(not lit.pos and not lit.is_eq for lit in c):
        out.add("query")
    if any(lit.is_eq for lit in c):
        return out
    guards = loose_guards(c)
    if flags.simple and flags.covering and flags.strongly_compatible and guards:
        out.add("LG")
        if any(len(g) <= 1 for g in guards):
            out.add("guarded")
            if sum(1 for lit in c if lit.pos) <= 1:
                out.add("horn_guarded")
    return out
