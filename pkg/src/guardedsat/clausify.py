"""Clausification of guarded formulas into the loosely guarded clausal class.

The pipeline per rule: existentially close free variables, expand ``<=>``,
negation normal form, miniscoping (which splits clique guards into per-atom
universal blocks), definitional renaming of every universally quantified
subformula, then per-conjunct prenexing, inner Skolemisation and CNF.

Renaming a universal subformula ``! [Xs] : H`` over free variables ``Ys``
replaces it by a fresh definer atom ``P(Ys)`` and adds the definition
``! [Ys] : (~P(Ys) | ! [Xs] : H)``.  When ``H`` is a single negated atom
(the shape clique guards take after miniscoping) the renaming is negative:
the occurrence becomes ``~P(Ys)`` and the definition ``! [Ys] : (P(Ys) |
! [Xs] : H)``, which keeps the produced clauses Horn-friendly and guarded.

The output clauses are simple, covering and strongly compatible by
construction, which is what the resolution engine's a-priori literal
selection relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import (
    And, AtomF, Bottom, Exists, Forall, Formula, Iff, Implies, Not, Or,
    Problem, Top, check_fragment, expand_iff, free_vars, negate_query,
    print_formula,
)
from .terms import (
    App, Clause, Const, Literal, SymbolKind, SymbolOrigin, SymbolTable,
    Term, Var,
)

MAX_DIRECT_CNF = 64


@dataclass
class TransOutput:
    lg_clauses: list[Clause]
    query_clauses: list[Clause]
    definitions: dict[str, Formula] = field(default_factory=dict)
    skolem_map: dict[str, str] = field(default_factory=dict)


class ClausifyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# negation normal form


def to_nnf(f: Formula) -> Formula:
    """NNF with ``<=>``/``=>`` expanded and negation pushed onto atoms."""
    return _nnf(expand_iff(f), positive=True)


def _nnf(f: Formula, positive: bool) -> Formula:
    if isinstance(f, Top):
        return Top() if positive else Bottom()
    if isinstance(f, Bottom):
        return Bottom() if positive else Top()
    if isinstance(f, AtomF):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return _nnf(f.body, not positive)
    if isinstance(f, And):
        items = tuple(_nnf(g, positive) for g in f.items)
        return _flatten(And(items)) if positive else _flatten(Or(items))
    if isinstance(f, Or):
        items = tuple(_nnf(g, positive) for g in f.items)
        return _flatten(Or(items)) if positive else _flatten(And(items))
    if isinstance(f, Implies):
        l = _nnf(f.left, not positive)
        r = _nnf(f.right, positive)
        return _flatten(Or((l, r))) if positive else _flatten(And((l, r)))
    if isinstance(f, Forall):
        body = _nnf(f.body, positive)
        return Forall(f.vars, body) if positive else Exists(f.vars, body)
    if isinstance(f, Exists):
        body = _nnf(f.body, positive)
        return Exists(f.vars, body) if positive else Forall(f.vars, body)
    raise TypeError(f"not a formula: {f!r}")


def _flatten(f: Formula) -> Formula:
    """Flatten nested conjunctions/disjunctions and simplify units."""
    if isinstance(f, And):
        items: list[Formula] = []
        for g in f.items:
            if isinstance(g, And):
                items.extend(g.items)
            elif isinstance(g, Top):
                continue
            elif isinstance(g, Bottom):
                return Bottom()
            else:
                items.append(g)
        if not items:
            return Top()
        return items[0] if len(items) == 1 else And(tuple(items))
    if isinstance(f, Or):
        items = []
        for g in f.items:
            if isinstance(g, Or):
                items.extend(g.items)
            elif isinstance(g, Bottom):
                continue
            elif isinstance(g, Top):
                return Top()
            else:
                items.append(g)
        if not items:
            return Bottom()
        return items[0] if len(items) == 1 else Or(tuple(items))
    return f


# ---------------------------------------------------------------------------
# miniscoping


def miniscope(f: Formula) -> Formula:
    """Narrow the scope of clique-guard quantifier blocks.

    In NNF a negated clique guard ``~? [Xs] : (A1 & ... & An)`` is a
    universal block over a disjunction of negated atoms.  Each quantified
    variable is pushed into the disjuncts it occurs in, splitting the block
    into per-atom universals, which is the shape the renaming step expects.
    Other quantifiers are left alone (vacuous ones are dropped) so Skolem
    functions keep their full universal prefix.
    """
    if isinstance(f, And):
        return _flatten(And(tuple(miniscope(g) for g in f.items)))
    if isinstance(f, Or):
        return _flatten(Or(tuple(miniscope(g) for g in f.items)))
    if isinstance(f, Not):
        return Not(miniscope(f.body))
    if isinstance(f, (Forall, Exists)):
        body = miniscope(f.body)
        quant = type(f)
        guard_block = isinstance(f, Forall) and isinstance(body, Or) and \
            all(isinstance(g, Not) and isinstance(g.body, AtomF)
                for g in body.items)
        for v in f.vars:
            if v not in free_vars(body):
                continue
            if guard_block and isinstance(body, Or):
                inside = [g for g in body.items if v in free_vars(g)]
                outside = [g for g in body.items if v not in free_vars(g)]
                if outside:
                    pushed = inside[0] if len(inside) == 1 \
                        else Or(tuple(inside))
                    body = _flatten(Or(
                        (miniscope(Forall((v,), pushed)), *outside)))
                    continue
            body = quant((v,), body)
        return body
    return f


# ---------------------------------------------------------------------------
# renaming of universal subformulas


class _Renamer:
    def __init__(self, symbols: SymbolTable) -> None:
        self.symbols = symbols
        self.definitions: dict[str, Formula] = {}
        self.conjuncts: list[Formula] = []

    def run(self, f: Formula) -> list[Formula]:
        """Split ``f`` into definitional conjuncts, each with at most one
        universal quantifier block (at guard level)."""
        top = self._replace(f)
        self.conjuncts.insert(0, top)
        out = [g for g in self.conjuncts if not isinstance(g, Top)]
        return out

    def _replace(self, f: Formula) -> Formula:
        if isinstance(f, And):
            return _flatten(And(tuple(self._replace(g) for g in f.items)))
        if isinstance(f, Or):
            return _flatten(Or(tuple(self._replace(g) for g in f.items)))
        if isinstance(f, Exists):
            return Exists(f.vars, self._replace(f.body))
        if isinstance(f, Forall):
            return self._rename_universal(f)
        return f

    def _rename_universal(self, f: Forall) -> Formula:
        while isinstance(f.body, Forall):
            f = Forall(f.vars + f.body.vars, f.body.body)
        fv = _ordered_free_vars(f)
        negative = isinstance(f.body, Not) and isinstance(f.body.body, AtomF)
        sym = self.symbols.fresh(
            "p", SymbolKind.PREDICATE if fv else SymbolKind.PROPOSITIONAL,
            len(fv), SymbolOrigin.DEFINER)
        head = AtomF(sym.name, tuple(Var(v) for v in fv))
        inner = Forall(f.vars, self._replace(f.body))
        if negative:
            definition: Formula = Or((head, inner))
        else:
            definition = Or((Not(head), inner))
        if fv:
            definition = Forall(tuple(fv), definition)
        self.definitions[sym.name] = definition
        self.conjuncts.append(definition)
        return Not(head) if negative else head


def _ordered_free_vars(f: Formula) -> list[str]:
    """Free variables in first-occurrence order."""
    fv = free_vars(f)
    order: list[str] = []

    def walk(g: Formula, bound: frozenset[str]) -> None:
        if isinstance(g, AtomF):
            for t in g.args:
                _walk_term(t, bound)
        elif isinstance(g, Not):
            walk(g.body, bound)
        elif isinstance(g, (And, Or)):
            for h in g.items:
                walk(h, bound)
        elif isinstance(g, (Implies, Iff)):
            walk(g.left, bound)
            walk(g.right, bound)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body, bound | frozenset(g.vars))

    def _walk_term(t: Term, bound: frozenset[str]) -> None:
        if isinstance(t, Var):
            if t.name in fv and t.name not in bound and t.name not in order:
                order.append(t.name)
        elif isinstance(t, App):
            for a in t.args:
                _walk_term(a, bound)

    walk(f, frozenset())
    return order


# ---------------------------------------------------------------------------
# prenexing and Skolemisation


def skolemize(f: Formula, symbols: SymbolTable,
              skolem_map: dict[str, str]) -> Formula:
    """Prenex one conjunct and replace existentials by Skolem terms.

    Each Skolem symbol takes the full universal prefix declared before it,
    in declaration order.  Returns the quantifier-free matrix.
    """
    prefix, matrix = _prenex(f, set(), {})
    sub: dict[str, Term] = {}
    universals: list[str] = []
    for kind, v in prefix:
        if kind == "forall":
            universals.append(v)
        else:
            if universals:
                sym = symbols.fresh("sk", SymbolKind.FUNCTION,
                                    len(universals), SymbolOrigin.SKOLEM)
                sub[v] = App(sym.name, tuple(Var(u) for u in universals))
            else:
                sym = symbols.fresh("skc", SymbolKind.CONSTANT, 0,
                                    SymbolOrigin.SKOLEM)
                sub[v] = Const(sym.name)
            skolem_map[sym.name] = v
    return _subst_formula(matrix, sub)


def _prenex(f: Formula, used: set[str],
            ren: dict[str, str]) -> tuple[list[tuple[str, str]], Formula]:
    if isinstance(f, (Forall, Exists)):
        kind = "forall" if isinstance(f, Forall) else "exists"
        prefix: list[tuple[str, str]] = []
        local = dict(ren)
        for v in f.vars:
            name = v
            n = 0
            while name in used:
                n += 1
                name = f"{v}_{n}"
            used.add(name)
            local[v] = name
            prefix.append((kind, name))
        sub_prefix, matrix = _prenex(f.body, used, local)
        return prefix + sub_prefix, matrix
    if isinstance(f, (And, Or)):
        prefix = []
        mats: list[Formula] = []
        for g in f.items:
            p, m = _prenex(g, used, ren)
            prefix.extend(p)
            mats.append(m)
        cls = And if isinstance(f, And) else Or
        return prefix, _flatten(cls(tuple(mats)))
    if isinstance(f, Not):
        p, m = _prenex(f.body, used, ren)
        return p, Not(m)
    if isinstance(f, AtomF):
        return [], _subst_formula(f, {v: Var(n) for v, n in ren.items()})
    return [], f


def _subst_formula(f: Formula, sub: dict[str, Term]) -> Formula:
    if not sub:
        return f
    if isinstance(f, AtomF):
        return AtomF(f.pred, tuple(_subst_term(t, sub) for t in f.args))
    if isinstance(f, Not):
        return Not(_subst_formula(f.body, sub))
    if isinstance(f, (And, Or)):
        cls = And if isinstance(f, And) else Or
        return cls(tuple(_subst_formula(g, sub) for g in f.items))
    if isinstance(f, (Forall, Exists)):
        inner = {v: t for v, t in sub.items() if v not in f.vars}
        cls = Forall if isinstance(f, Forall) else Exists
        return cls(f.vars, _subst_formula(f.body, inner))
    return f


def _subst_term(t: Term, sub: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return sub.get(t.name, t)
    if isinstance(t, App):
        return App(t.fn, tuple(_subst_term(a, sub) for a in t.args))
    return t


# ---------------------------------------------------------------------------
# CNF


def to_clauses(matrix: Formula, symbols: SymbolTable) -> list[Clause]:
    """CNF of a quantifier-free NNF matrix.

    Distribution is direct unless it would overshoot ``MAX_DIRECT_CNF``
    clauses, in which case offending conjunctions under a disjunction are
    renamed with fresh definer atoms first.
    """
    matrix = _bounded_rename(matrix, symbols)
    cnf = _distribute(matrix)
    out: list[Clause] = []
    for disj in cnf:
        lits = []
        taut = False
        for g in disj:
            lit = _to_literal(g)
            if lit.negate() in lits:
                taut = True
                break
            if lit not in lits:
                lits.append(lit)
        if not taut:
            out.append(Clause(lits))
    return out


def _cnf_size(f: Formula) -> int:
    if isinstance(f, And):
        return sum(_cnf_size(g) for g in f.items)
    if isinstance(f, Or):
        n = 1
        for g in f.items:
            n *= _cnf_size(g)
        return n
    return 1


def _bounded_rename(f: Formula, symbols: SymbolTable) -> Formula:
    if _cnf_size(f) <= MAX_DIRECT_CNF:
        return f
    if isinstance(f, And):
        return _flatten(And(tuple(_bounded_rename(g, symbols)
                                  for g in f.items)))
    if isinstance(f, Or):
        items = list(f.items)
        # rename the biggest conjunctive disjunct and retry
        idx = max(range(len(items)), key=lambda i: _cnf_size(items[i]))
        g = items[idx]
        if not isinstance(g, And):
            return f
        fv = _ordered_free_vars(g)
        sym = symbols.fresh(
            "p", SymbolKind.PREDICATE if fv else SymbolKind.PROPOSITIONAL,
            len(fv), SymbolOrigin.DEFINER)
        head = AtomF(sym.name, tuple(Var(v) for v in fv))
        items[idx] = head
        definition = _flatten(And(tuple(
            _flatten(Or((Not(head), h))) for h in g.items)))
        return _flatten(And((
            _bounded_rename(_flatten(Or(tuple(items))), symbols),
            _bounded_rename(definition, symbols))))
    return f


def _distribute(f: Formula) -> list[list[Formula]]:
    if isinstance(f, And):
        out: list[list[Formula]] = []
        for g in f.items:
            out.extend(_distribute(g))
        return out
    if isinstance(f, Or):
        parts = [_distribute(g) for g in f.items]
        combos: list[list[Formula]] = [[]]
        for p in parts:
            combos = [c + d for c in combos for d in p]
        return combos
    if isinstance(f, Bottom):
        return [[]]
    if isinstance(f, Top):
        return []
    return [[f]]


def _to_literal(f: Formula) -> Literal:
    if isinstance(f, AtomF):
        return Literal(True, f.pred, f.args)
    if isinstance(f, Not) and isinstance(f.body, AtomF):
        return Literal(False, f.body.pred, f.body.args)
    raise ClausifyError(f"not a literal: {print_formula(f)}")


# ---------------------------------------------------------------------------
# the full transformation


def clausify_formula(f: Formula, symbols: SymbolTable,
                     definitions: dict[str, Formula],
                     skolem_map: dict[str, str]) -> list[Clause]:
    fv = sorted(free_vars(f))
    if fv:
        f = Exists(tuple(fv), f)
    f = miniscope(to_nnf(f))
    renamer = _Renamer(symbols)
    renamer.definitions = definitions
    out: list[Clause] = []
    for conjunct in renamer.run(f):
        matrix = skolemize(conjunct, symbols, skolem_map)
        out.extend(to_clauses(matrix, symbols))
    return out


def trans(problem: Problem, check: bool = True) -> TransOutput:
    """Clausify a problem: rules and facts into LG clauses, negated query
    disjuncts into query clauses."""
    symbols = problem.symbols
    out = TransOutput([], [])
    for rule in problem.rules:
        if check:
            res = check_fragment(rule)
            if res.fragment == "none":
                wit = print_formula(res.witness) if res.witness else "?"
                raise ClausifyError(
                    f"rule outside the supported fragments: "
                    f"{print_formula(rule)} (offending part: {wit})")
        out.lg_clauses.extend(
            clausify_formula(rule, symbols, out.definitions, out.skolem_map))
    for fact in problem.facts:
        out.lg_clauses.append(Clause([Literal(True, fact.pred, fact.args)]))
    for q in problem.queries:
        out.query_clauses.append(negate_query(q))
    return out
