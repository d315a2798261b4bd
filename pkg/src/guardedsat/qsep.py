"""Query separation: rewriting a query clause into guarded clauses and
inseparable chained-only query (ICQ) clauses.

A query clause is a flat negative clause (the negation of a Boolean
conjunctive query).  ``analyze`` computes its surface literals (those whose
variable set is not strictly contained in another literal's), its chained
variables (shared between surface literals with different variable sets)
and its isolated variables (the rest).

``q_sep`` repeatedly splits the clause:

* decomposable clauses split into variable-disjoint parts linked by two
  fresh propositional symbols;
* an indecomposable clause with isolated variables gives up a surface
  literal, together with everything touching its isolated variables, to a
  fresh definer over its chained variables;
* chained-only indecomposable clauses (variable cycles) are emitted as ICQ
  clauses, everything else lands in the guarded set.

Fresh definers are drawn from a :class:`DefinitionRegistry` keyed by the
canonical form of the defined subclause, so re-separating the same shape
reuses the same symbol; this is what keeps saturation finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .terms import (
    Clause, Literal, SymbolKind, SymbolOrigin, SymbolTable, Var, canonical,
    clause_vars, condense, is_decomposable, lit_vars, literal_key,
    membership, variable_components,
)

_MARK = "?def"


@dataclass(frozen=True, slots=True)
class QueryAnalysis:
    surface: tuple[Literal, ...]
    chained: frozenset[str]
    isolated: frozenset[str]
    hyperedges: tuple[frozenset[str], ...]
    decomposable: bool


def analyze(q: Clause) -> QueryAnalysis:
    varsets = [(lit, frozenset(lit_vars(lit))) for lit in q]
    surface = tuple(lit for lit, vs in varsets
                    if not any(vs < vs2 for _, vs2 in varsets))
    surf_sets = [frozenset(lit_vars(l)) for l in surface]
    chained: set[str] = set()
    for i, vs1 in enumerate(surf_sets):
        for vs2 in surf_sets[i + 1:]:
            if vs1 != vs2:
                chained |= vs1 & vs2
    isolated = clause_vars(q) - chained
    return QueryAnalysis(
        surface=surface,
        chained=frozenset(chained),
        isolated=frozenset(isolated),
        hyperedges=tuple(frozenset(vs) for _, vs in varsets),
        decomposable=is_decomposable(q),
    )


class DefinitionRegistry:
    """Canonical-clause-form keyed registry of definer symbols.

    The key of a definition is the canonical form (condensed, variables
    renumbered by first occurrence) of the defined subclause with a marker
    literal holding the definer's argument tuple.  Defining the same shape
    twice returns the same symbol.
    """

    def __init__(self, symbols: SymbolTable) -> None:
        self.symbols = symbols
        self._defs: dict[tuple, str] = {}

    def __len__(self) -> int:
        return len(self._defs)

    def definer(self, subclause: list[Literal],
                args: tuple[Var, ...]) -> tuple[str, bool]:
        """Definer symbol for ``subclause`` abstracted over ``args``.

        Returns ``(name, fresh)`` where ``fresh`` says whether the symbol
        was newly introduced.
        """
        key = canonical(Clause(subclause + [Literal(True, _MARK, args)])
                        ).literals
        name = self._defs.get(key)
        if name is not None:
            return name, False
        kind = SymbolKind.PREDICATE if args else SymbolKind.PROPOSITIONAL
        sym = self.symbols.fresh("q", kind, len(args), SymbolOrigin.DEFINER)
        self._defs[key] = sym.name
        return sym.name, True


@dataclass
class SepResult:
    guarded: list[Clause] = field(default_factory=list)
    icq: list[Clause] = field(default_factory=list)
    acyclic: bool = True
    fresh_symbols: int = 0


def _split_components(q: Clause) -> list[list[Literal]]:
    """Variable-connected components; variable-free literals attach to the
    first component so a split always shrinks the variable part."""
    ground = [l for l in q if not lit_vars(l)]
    rest = [l for l in q if lit_vars(l)]
    comps = variable_components(Clause(rest)) if rest else []
    if ground:
        if comps:
            comps[0] = comps[0] + ground
        else:
            comps = [ground]
    return comps


def sep_decomposable(q: Clause, reg: DefinitionRegistry
                     ) -> tuple[Clause, Clause, Clause]:
    """Split ``C | D`` into ``C | ~p1``, ``~p2 | D`` and ``p1 | p2``."""
    comps = _split_components(q)
    assert len(comps) > 1
    c_part, d_part = comps[0], [l for grp in comps[1:] for l in grp]
    p1, _ = reg.definer(c_part, ())
    p2, _ = reg.definer(d_part, ())
    return (Clause(c_part + [Literal(False, p1)]),
            Clause([Literal(False, p2)] + d_part),
            Clause([Literal(True, p1), Literal(True, p2)]))


def sep_indecomposable(q: Clause, reg: DefinitionRegistry,
                       an: QueryAnalysis) -> tuple[Clause, Clause]:
    """One separation step on an indecomposable query clause.

    Picks the surface literal with the most isolated variables (ties broken
    structurally), peels it off together with the literals sharing its
    isolated variables, and bridges through a fresh definer over the
    chained variables that remain in the residue.
    """
    def iso_count(lit: Literal) -> int:
        return len(lit_vars(lit) & an.isolated)

    cands = [l for l in an.surface if iso_count(l) > 0]
    pick = sorted(cands, key=lambda l: (-iso_count(l), literal_key(l)))[0]
    iso = lit_vars(pick) & an.isolated
    c_part = [l for l in q if l != pick and lit_vars(l) & iso]
    d_part = [l for l in q if l != pick and not (lit_vars(l) & iso)]
    d_vars = clause_vars(Clause(d_part))
    # definer arguments: chained variables of the picked literal that the
    # residue still needs, in first-occurrence order within the literal
    xbar = tuple(dict.fromkeys(
        v for v in _var_order(pick) if v in an.chained and v in d_vars))
    args = tuple(Var(v) for v in xbar)
    name, _ = reg.definer(c_part + [pick], args)
    sep = Clause(c_part + [pick, Literal(True, name, args)])
    residue = Clause([Literal(False, name, args)] + d_part)
    return sep, residue


def _var_order(lit: Literal) -> list[str]:
    out: list[str] = []
    for a in lit.args:
        if isinstance(a, Var) and a.name not in out:
            out.append(a.name)
    return out


def q_sep(q: Clause, reg: DefinitionRegistry) -> SepResult:
    """Separate a query clause to a fixpoint.

    Returns the guarded clauses and the ICQ clauses; the query was acyclic
    iff no ICQ clause is produced.
    """
    res = SepResult()
    before = len(reg)
    todo = [condense(q)]
    while todo:
        cur = condense(todo.pop())
        if cur.is_empty():
            res.guarded.append(cur)
            continue
        if "LG" in membership(cur):
            # already in the clausal class (covers ground literals and
            # loosely guarded residues); re-splitting could loop on the
            # propositional definers a split introduces
            res.guarded.append(cur)
            continue
        if len(_split_components(cur)) > 1:
            c1, c2, link = sep_decomposable(cur, reg)
            res.guarded.append(link)
            todo.extend([c1, c2])
            continue
        an = analyze(cur)
        if not an.chained:
            # isolated-only residue: loosely covered by any surface literal
            res.guarded.append(cur)
            continue
        if not an.isolated:
            res.icq.append(cur)
            res.acyclic = False
            continue
        sep, residue = sep_indecomposable(cur, reg, an)
        res.guarded.append(sep)
        todo.append(residue)
    res.fresh_symbols = len(reg) - before
    return res


def is_icq(c: Clause) -> bool:
    """Chained-only indecomposable query clause (a variable cycle)."""
    m = membership(c)
    return "query" in m and "LG" not in m and not c.is_empty()
