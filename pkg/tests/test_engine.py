"""Inference engine: dispatch, side premises, top-variable resolution.

Includes the two large randomized property suites:
* closure — random loosely guarded sets stay in the class under
  top-variable resolution and factoring, with bounded depth and width;
* redundancy — on ground premises the partial resolvent makes the main
  premise redundant (smaller in the clause order, and together with the
  side premises it entails the full resolvent).
"""

from __future__ import annotations

import random
import time

import pytest

from guardedsat.engine import (
    ClauseIndex, com_t, dispatch, eligible, factor, p_res, s_res,
    side_literals, t_res,
)
from guardedsat.oracle import ground_entails
from guardedsat.orders import LPO, Precedence, clause_gt
from guardedsat.terms import (
    App, Clause, Const, Literal, SymbolKind, SymbolOrigin, SymbolTable,
    Var, depth, membership, width,
)

from util import CONSTS, make_symbols, preds, random_lg_set

x, y, z = Var("x"), Var("y"), Var("z")
a, b = Const("a"), Const("b")


def _lit(pos, p, *args):
    return Literal(pos, p, tuple(args))


def _symbols():
    s = SymbolTable()
    for n in ("a", "b"):
        s.declare(n, SymbolKind.CONSTANT, 0, SymbolOrigin.INPUT)
    s.declare("f", SymbolKind.FUNCTION, 1, SymbolOrigin.SKOLEM)
    for n, ar in (("A", 1), ("B", 2), ("G", 2), ("D", 1)):
        s.declare(n, SymbolKind.PREDICATE, ar, SymbolOrigin.INPUT)
    return s


def _lpo():
    return LPO(Precedence(_symbols()))


# ---------------------------------------------------------------------------
# dispatch / eligibility


def test_dispatch_ground():
    c = Clause([_lit(True, "A", a), _lit(False, "B", a, b)])
    assert dispatch(c) == "max"


def test_dispatch_negative_compound():
    c = Clause([_lit(False, "A", App("f", (x,))), _lit(True, "A", x)])
    assert dispatch(c) == "select"


def test_dispatch_positive_compound():
    c = Clause([_lit(True, "A", App("f", (x,))), _lit(False, "A", x)])
    assert dispatch(c) == "max"


def test_dispatch_flat_nonground():
    c = Clause([_lit(False, "B", x, y), _lit(True, "A", x)])
    assert dispatch(c) == "topvar"


def test_eligible_selected_is_single_negative_compound():
    c = Clause([_lit(False, "A", App("f", (x,))), _lit(True, "B", x, y)])
    el = eligible(c, _lpo())
    assert el.kind == "selected"
    assert len(el.literals) == 1 and not el.literals[0].pos


def test_eligible_all_negative_without_sides():
    c = Clause([_lit(False, "B", x, y), _lit(True, "A", x)])
    el = eligible(c, _lpo())
    assert el.kind == "all_negative"
    assert el.literals == (_lit(False, "B", x, y),)


def test_side_literals_only_strictly_maximal_positive():
    lpo = _lpo()
    c = Clause([_lit(True, "B", App("f", (x,)), x), _lit(True, "A", x)])
    sides = side_literals(c, lpo)
    assert sides == (_lit(True, "B", App("f", (x,)), x),)


def test_side_literals_none_for_selected_or_flat_nonground():
    lpo = _lpo()
    sel = Clause([_lit(False, "A", App("f", (x,))), _lit(True, "A", x)])
    assert side_literals(sel, lpo) == ()
    flat = Clause([_lit(True, "B", x, y)])
    assert side_literals(flat, lpo) == ()


def test_com_t_simultaneous_unifier_and_top_variables():
    lpo = _lpo()
    n = ClauseIndex(lpo)
    n.add(1, Clause([_lit(True, "A", App("f", (z,))),
                     _lit(False, "G", z, z)]))
    n.add(2, Clause([_lit(True, "B", App("f", (z,)), z),
                     _lit(False, "G", z, z)]))
    main = Clause([_lit(False, "A", x), _lit(False, "B", x, y),
                   _lit(True, "D", y)])
    tv = com_t(main, lpo, n)
    assert tv is not None
    # x is unified with the compound term f(z); it dominates y
    assert tv.top_vars == frozenset({"x"})
    assert all(l.pred == "A" or "x" in {v.name for v in l.args
                                        if isinstance(v, Var)}
               for l in tv.top_literals)


def test_t_res_derives_empty_clause_from_units():
    lpo = _lpo()
    n = ClauseIndex(lpo)
    n.add(1, Clause([_lit(True, "A", a)]))
    main = Clause([_lit(False, "A", a)])
    n.add(2, main)
    infs = t_res(2, n)
    assert any(len(i.conclusion) == 0 for i in infs)


def test_factor_positive_literals():
    lpo = _lpo()
    c = Clause([_lit(True, "B", App("f", (x,)), x),
                _lit(True, "B", App("f", (x,)), y),
                _lit(False, "G", x, y)])
    infs = factor(1, c, lpo)
    assert infs
    for inf in infs:
        assert len(inf.conclusion) < len(c)


# ---------------------------------------------------------------------------
# closure property: random loosely guarded sets


def _closure_steps(seed: int, symbols, allow_compound=True):
    rng = random.Random(seed)
    clauses = random_lg_set(symbols, rng, 8, allow_compound=allow_compound)
    lpo = LPO(Precedence(symbols))
    n = ClauseIndex(lpo)
    for i, c in enumerate(clauses):
        n.add(i, c)
    steps = []
    for cid, c in n.clauses():
        for inf in t_res(cid, n) + factor(cid, c, lpo):
            premises = [n.by_id[inf.main]] + [n.by_id[s] for s in inf.sides]
            steps.append((premises, inf.conclusion))
    return steps


def test_closure_500_random_lg_inferences():
    symbols = make_symbols(n_preds=5, max_arity=3, n_funcs=2,
                           rng=random.Random(7))
    t0 = time.monotonic()
    total = 0
    seed = 0
    while total < 500:
        seed += 1
        for premises, concl in _closure_steps(seed, symbols):
            total += 1
            if len(concl) == 0:
                continue
            assert "LG" in membership(concl), \
                f"conclusion left the class: {concl}"
            dmax = max(depth(p) for p in premises)
            assert depth(concl) <= dmax, (premises, concl)
            assert width(concl) <= max(width(p) for p in premises), \
                (premises, concl)
        assert seed < 400, "generator failed to produce inferences"
    assert time.monotonic() - t0 < 30.0
    assert total >= 500


# ---------------------------------------------------------------------------
# redundancy property: ground partial resolvents


def _random_ground_sres(rng: random.Random, symbols):
    """Build a ground main premise with n negative literals and n side
    premises whose strictly maximal positive literals match them."""
    lpo = LPO(Precedence(symbols))
    ps = preds(symbols)
    n_sel = rng.randint(2, 3)
    atoms = []
    while len(atoms) < n_sel:
        p, ar = rng.choice(ps)
        atom = Literal(True, p, tuple(Const(rng.choice(CONSTS))
                                      for _ in range(ar)))
        if atom not in atoms:
            atoms.append(atom)
    idx = ClauseIndex(lpo)
    sides = []
    for i, atom in enumerate(atoms):
        rest = []
        if rng.random() < 0.6:
            p, ar = rng.choice(ps)
            cand = Literal(False, p, tuple(Const(rng.choice(CONSTS))
                                           for _ in range(ar)))
            if lpo.compare_lits(atom, cand) is not None and \
                    cand.pred != atom.pred:
                rest = [cand]
        side = Clause([atom] + rest)
        if side_literals(side, lpo) != (atom,):
            side = Clause([atom])
        idx.add(i, side)
        sides.append(side)
    extra_pos = []
    main = Clause([l.negate() for l in atoms] + extra_pos)
    if main is None or len(main) != n_sel:
        return None
    return lpo, idx, main, sides, atoms


def test_redundancy_200_random_ground_partial_resolvents():
    symbols = make_symbols(n_preds=6, max_arity=2, n_funcs=0,
                           rng=random.Random(11))
    rng = random.Random(2024)
    done = 0
    guard = 0
    while done < 200 and guard < 4000:
        guard += 1
        built = _random_ground_sres(rng, symbols)
        if built is None:
            continue
        lpo, idx, main, sides, atoms = built
        main_id = 99
        full = s_res(main_id, main, idx)
        if not full:
            continue
        (r_full,) = full
        negs = [l for l in main if not l.pos]
        subset = rng.sample(negs, rng.randint(1, len(negs) - 1))
        partial = p_res(main_id, main, idx, subset)
        if not partial:
            continue
        (r_part,) = partial
        # the main premise is strictly greater than the partial resolvent
        assert clause_gt(lpo, main, r_part.conclusion), \
            (main, r_part.conclusion)
        # side premises plus the partial resolvent entail the resolvent
        assert ground_entails(sides + [r_part.conclusion],
                              r_full.conclusion), \
            (sides, r_part.conclusion, r_full.conclusion)
        done += 1
    assert done == 200
