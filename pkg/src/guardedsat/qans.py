"""The given-clause saturation loop deciding BCQ answering.

Input clauses are the clausified rules and facts (loosely guarded clauses)
plus the separated query clauses.  The loop keeps a *usable* set and a
*worked-off* set; each round picks a given clause (one oldest pick for
every four lightest picks, so old clauses cannot starve), moves it to
worked-off and computes every inference between it and worked-off.

Inseparable chained-only query clauses take the special route: their
top-variable resolvent is immediately re-abstracted (T-Trans) and
re-separated, so only loosely guarded clauses and query clauses are ever
inserted.  The derivation of the empty clause means the query is entailed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .clausify import TransOutput, trans
from .engine import (
    ClauseIndex, Inference, _main_inferences, factor, is_tautology,
    side_literals,
)
from .orders import LPO, Precedence
from .qic import q_ic_all
from .qsep import DefinitionRegistry, q_sep
from .qsep import is_icq
from .syntax import Problem
from .terms import (
    reset_rename_counter,
    App, Clause, Literal, Term, Var, condense, is_ground, subsumes,
)


def clause_weight(c: Clause) -> int:
    """Number of symbol occurrences (predicates, functions, constants,
    variables)."""
    def tw(t: Term) -> int:
        if isinstance(t, App):
            return 1 + sum(tw(a) for a in t.args)
        return 1

    return sum(1 + sum(tw(a) for a in lit.args) for lit in c)


@dataclass
class SaturationState:
    lpo: LPO
    registry: DefinitionRegistry
    step_budget: int = 10 ** 6
    seed: int = 0
    worked_off: ClauseIndex = None  # type: ignore[assignment]
    usable: dict[int, Clause] = field(default_factory=dict)
    trace: list[str] = field(default_factory=list)
    steps: int = 0
    next_id: int = 1
    picks: int = 0

    def __post_init__(self) -> None:
        if self.worked_off is None:
            self.worked_off = ClauseIndex(self.lpo)
        self.rng = random.Random(self.seed)
        reset_rename_counter()

    # -- insertion ---------------------------------------------------------

    def insert(self, c: Clause, reason: str) -> Optional[int]:
        """Forward-simplify and add a clause to usable; None if redundant."""
        c = condense(c)
        if is_tautology(c):
            return None
        for d in list(self.usable.values()) + \
                [cl for _, cl in self.worked_off.clauses()]:
            if len(d) <= len(c) and subsumes(d, c):
                return None
        # backward simplification: drop clauses the new one subsumes
        for cid, d in list(self.usable.items()):
            if len(c) <= len(d) and subsumes(c, d):
                del self.usable[cid]
        for cid, d in list(self.worked_off.clauses()):
            if len(c) <= len(d) and subsumes(c, d):
                self.worked_off.remove(cid)
        cid = self.next_id
        self.next_id += 1
        self.usable[cid] = c
        self.trace.append(f"[{cid}] {reason} {c}")
        return cid

    # -- pick --------------------------------------------------------------

    def pick(self) -> tuple[int, Clause]:
        """1-in-5 oldest, otherwise lightest (ties broken by the seeded
        RNG for determinism under a fixed seed)."""
        self.picks += 1
        if self.picks % 5 == 1:
            cid = min(self.usable)
        else:
            best = min(clause_weight(c) for c in self.usable.values())
            ties = sorted(cid for cid, c in self.usable.items()
                          if clause_weight(c) == best)
            cid = ties[self.rng.randrange(len(ties))] if len(ties) > 1 \
                else ties[0]
        return cid, self.usable.pop(cid)


@dataclass
class AnswerResult:
    verdict: str  # "yes" | "no" | "unknown"
    trace: list[str]
    steps: int
    n_clauses: int
    registry_size: int


def saturate(state: SaturationState) -> str:
    """Run the loop to saturation or the empty clause."""
    while state.usable:
        if state.steps >= state.step_budget:
            return "unknown"
        state.steps += 1
        given_id, given = state.pick()
        if given.is_empty():
            return "yes"
        state.worked_off.add(given_id, given)
        derived = _inferences_with(state, given_id, given)
        for concl, reason in derived:
            new_id = state.insert(concl, reason)
            if new_id is not None and concl.is_empty():
                return "yes"
    return "no"


def _inferences_with(state: SaturationState, given_id: int,
                     given: Clause) -> list[tuple[Clause, str]]:
    n = state.worked_off
    out: list[tuple[Clause, str]] = []

    def emit_inference(inf: Inference) -> None:
        parents = ",".join(str(p) for p in (inf.main,) + inf.sides)
        out.append((inf.conclusion, f"{inf.rule}({parents})"))

    def emit_icq(main_id: int, must: Optional[int]) -> None:
        for r in q_ic_all(main_id, n, state.registry, must_include=must):
            assert r.inference is not None
            parents = ",".join(
                str(p) for p in (r.inference.main,) + r.inference.sides)
            tag = f"QIC({parents})"
            for c in r.lg_clauses + r.guarded + r.icq:
                out.append((c, tag))

    if is_icq(given):
        emit_icq(given_id, None)
    else:
        for inf in _main_inferences(given_id, given, n, only_side=None):
            emit_inference(inf)
        for inf in factor(given_id, given, state.lpo):
            emit_inference(inf)
    # the given clause as a new side premise for existing mains
    if side_literals(given, state.lpo):
        for cid, c in n.clauses():
            if cid == given_id:
                continue
            if is_icq(c):
                emit_icq(cid, given_id)
            else:
                for inf in _main_inferences(cid, c, n, only_side=given_id):
                    emit_inference(inf)
    return out


def answer(problem: Problem, step_budget: int = 10 ** 6,
           seed: int = 0) -> AnswerResult:
    """Decide whether the rules and facts entail the union of BCQs."""
    result, _ = run(problem, step_budget=step_budget, seed=seed)
    return result


def run(problem: Problem, step_budget: int = 10 ** 6,
        seed: int = 0) -> tuple[AnswerResult, SaturationState]:
    """Like answer(), but also hands back the final saturation state (the
    worked-off set is the saturated clausal set when the verdict is
    "no")."""
    symbols = problem.symbols
    out: TransOutput = trans(problem)
    registry = DefinitionRegistry(symbols)
    lpo = LPO(Precedence(symbols))
    state = SaturationState(lpo=lpo, registry=registry,
                            step_budget=step_budget, seed=seed)
    # ground unit facts first, then the remaining rule clauses
    facts = [c for c in out.lg_clauses if len(c) == 1 and is_ground(c)]
    rest = [c for c in out.lg_clauses if not (len(c) == 1 and is_ground(c))]
    for c in facts:
        state.insert(c, "input")
    for c in rest:
        state.insert(c, "input")
    for q in out.query_clauses:
        sep = q_sep(q, registry)
        for c in sep.guarded + sep.icq:
            state.insert(c, "input")
    verdict = saturate(state)
    result = AnswerResult(
        verdict=verdict,
        trace=state.trace,
        steps=state.steps,
        n_clauses=state.next_id - 1,
        registry_size=len(registry),
    )
    return result, state
