"""Shared random generators for the property suites.

The generators build clauses in the loosely guarded class by
construction: a guard literal covers every variable pair, compound terms
contain the full variable sequence (covering + strong compatibility).
"""

from __future__ import annotations

import random

from guardedsat.syntax import (
    And, AtomF, Exists, Forall, Implies, Or, Problem,
)
from guardedsat.terms import (
    App, Clause, Const, Literal, SymbolKind, SymbolOrigin, SymbolTable,
    Var, membership,
)

CONSTS = ("c1", "c2", "c3")


def make_symbols(n_preds: int = 6, max_arity: int = 3,
                 n_funcs: int = 0, rng: random.Random | None = None
                 ) -> SymbolTable:
    rng = rng or random.Random(0)
    s = SymbolTable()
    for c in CONSTS:
        s.declare(c, SymbolKind.CONSTANT, 0, SymbolOrigin.INPUT)
    for i in range(n_preds):
        s.declare(f"p{i + 1}", SymbolKind.PREDICATE,
                  rng.randint(1, max_arity), SymbolOrigin.INPUT)
    for i in range(n_funcs):
        s.declare(f"f{i + 1}", SymbolKind.FUNCTION,
                  rng.randint(1, 2), SymbolOrigin.SKOLEM)
    return s


def preds(symbols: SymbolTable) -> list[tuple[str, int]]:
    return [(sym.name, sym.arity) for sym in symbols
            if sym.kind is SymbolKind.PREDICATE]


def funcs(symbols: SymbolTable) -> list[tuple[str, int]]:
    return [(sym.name, sym.arity) for sym in symbols
            if sym.kind is SymbolKind.FUNCTION]


def random_lg_clause(symbols: SymbolTable, rng: random.Random,
                     allow_compound: bool = True) -> Clause:
    """A random clause in the loosely guarded class."""
    ps = preds(symbols)
    k = rng.randint(1, 3)
    vs = tuple(Var(f"x{i + 1}") for i in range(k))
    lits: list[Literal] = []
    # guard: one negative literal per variable pair (or one covering all)
    wide = [(p, a) for p, a in ps if a >= k]
    if wide and rng.random() < 0.7:
        p, a = rng.choice(wide)
        args = list(vs) + [rng.choice(vs) for _ in range(a - k)]
        rng.shuffle(args)
        # make sure every variable still occurs
        for i, v in enumerate(vs):
            if v not in args:
                args[i] = v
        lits.append(Literal(False, p, tuple(args)))
    else:
        pairs = [(vs[i], vs[j]) for i in range(k) for j in range(i + 1, k)]
        if not pairs:
            pairs = [(vs[0], vs[0])]
        binary = [(p, a) for p, a in ps if a >= 2] or ps
        for v1, v2 in pairs:
            p, a = rng.choice(binary)
            args = [v1, v2] + [rng.choice(vs) for _ in range(a - 2)]
            lits.append(Literal(False, p, tuple(args[:a])
                                if a >= 2 else (v1,)))
    # positive literals, possibly with one shared compound term
    fns = funcs(symbols)
    fn_term = None
    if allow_compound and fns and rng.random() < 0.5:
        name = rng.choice([f for f, a in fns])
        fn_term = App(name, vs)  # arity adjusted below
        sym = symbols.get(name)
        if sym.arity != k:
            fn_term = None
    for _ in range(rng.randint(1, 2)):
        p, a = rng.choice(ps)
        args = []
        for _ in range(a):
            r = rng.random()
            if fn_term is not None and r < 0.4:
                args.append(fn_term)
            elif r < 0.8:
                args.append(rng.choice(vs))
            else:
                args.append(Const(rng.choice(CONSTS)))
        lits.append(Literal(True, p, tuple(args)))
    return Clause(lits)


def random_lg_set(symbols: SymbolTable, rng: random.Random, n: int,
                  allow_compound: bool = True) -> list[Clause]:
    out = []
    guard = 0
    while len(out) < n and guard < 50 * n:
        guard += 1
        c = random_lg_clause(symbols, rng, allow_compound)
        if "LG" in membership(c):
            out.append(c)
    return out


def random_ground_atom(symbols: SymbolTable, rng: random.Random) -> Literal:
    p, a = rng.choice(preds(symbols))
    return Literal(True, p,
                   tuple(Const(rng.choice(CONSTS)) for _ in range(a)))


def random_problem(rng: random.Random, n_preds: int = 6,
                   max_arity: int = 3) -> Problem:
    """A random function-free problem: ground facts, guarded rules with
    flat heads, one conjunctive query."""
    prob = Problem()
    s = prob.symbols
    for c in CONSTS:
        s.declare(c, SymbolKind.CONSTANT, 0, SymbolOrigin.INPUT)
    sig = []
    for i in range(rng.randint(2, n_preds)):
        a = rng.randint(1, max_arity)
        s.declare(f"p{i + 1}", SymbolKind.PREDICATE, a, SymbolOrigin.INPUT)
        sig.append((f"p{i + 1}", a))
    for _ in range(rng.randint(0, 4)):
        p, a = rng.choice(sig)
        prob.facts.append(AtomF(p, tuple(
            Const(rng.choice(CONSTS)) for _ in range(a))))
    for _ in range(rng.randint(1, 4)):
        gp, ga = rng.choice(sig)
        vs = tuple(Var(f"X{i + 1}") for i in range(ga))
        guard = AtomF(gp, vs)
        heads = []
        for _ in range(rng.randint(1, 2)):
            hp, ha = rng.choice(sig)
            heads.append(AtomF(hp, tuple(
                rng.choice(vs) for _ in range(ha))))
        head = heads[0] if len(heads) == 1 else Or(tuple(heads))
        prob.rules.append(Forall(tuple(v.name for v in vs),
                                 Implies(guard, head)))
    # conjunctive query over 2-3 atoms with shared variables
    qvars = tuple(f"Y{i + 1}" for i in range(rng.randint(1, 3)))
    atoms = []
    for _ in range(rng.randint(1, 3)):
        p, a = rng.choice(sig)
        atoms.append(AtomF(p, tuple(
            Var(rng.choice(qvars)) for _ in range(a))))
    body = atoms[0] if len(atoms) == 1 else And(tuple(atoms))
    prob.queries.append(Exists(qvars, body))
    return prob
