"""Formula syntax: AST, a TPTP-flavoured parser, printer, fragment checks.

Problem files are sequences of statements::

    % comment
    rule:  ! [X,Y] : (r(X,Y) => a(X)).
    fact:  r(c1,c2).
    query: ? [X] : (a(X) & b(X)).

Identifiers starting with an upper-case letter are variables, everything
else names constants, functions or predicates.  ``query`` statements are
the disjuncts of a union of Boolean conjunctive queries.  The grammar also
accepts ``formula:`` statements with ``=`` / ``!=`` atoms so that rewriting
output can be parsed back.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .terms import (
    App, Clause, Const, Literal, SymbolKind, SymbolOrigin, SymbolTable,
    Term, Var,
)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Bottom:
    pass


@dataclass(frozen=True, slots=True)
class AtomF:
    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    items: tuple["Formula", ...]


@dataclass(frozen=True, slots=True)
class Or:
    items: tuple["Formula", ...]


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    vars: tuple[str, ...]
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    vars: tuple[str, ...]
    body: "Formula"


Formula = Top | Bottom | AtomF | Not | And | Or | Implies | Iff | Forall | Exists

EQ_PRED = "="


def free_vars(f: Formula, bound: frozenset[str] = frozenset()) -> set[str]:
    if isinstance(f, AtomF):
        out: set[str] = set()
        for t in f.args:
            _term_free(t, bound, out)
        return out
    if isinstance(f, Not):
        return free_vars(f.body, bound)
    if isinstance(f, (And, Or)):
        out = set()
        for g in f.items:
            out |= free_vars(g, bound)
        return out
    if isinstance(f, (Implies, Iff)):
        return free_vars(f.left, bound) | free_vars(f.right, bound)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body, bound | frozenset(f.vars))
    return set()


def _term_free(t: Term, bound: frozenset[str], out: set[str]) -> None:
    if isinstance(t, Var):
        if t.name not in bound:
            out.add(t.name)
    elif isinstance(t, App):
        for a in t.args:
            _term_free(a, bound, out)


# ---------------------------------------------------------------------------
# printing


def print_term(t: Term) -> str:
    if isinstance(t, App):
        return f"{t.fn}({','.join(print_term(a) for a in t.args)})"
    return t.name


def print_formula(f: Formula) -> str:
    if isinstance(f, Top):
        return "$true"
    if isinstance(f, Bottom):
        return "$false"
    if isinstance(f, AtomF):
        if f.pred == EQ_PRED:
            return f"{print_term(f.args[0])} = {print_term(f.args[1])}"
        if not f.args:
            return f.pred
        return f"{f.pred}({','.join(print_term(a) for a in f.args)})"
    if isinstance(f, Not):
        if isinstance(f.body, AtomF) and f.body.pred == EQ_PRED:
            return (f"{print_term(f.body.args[0])} != "
                    f"{print_term(f.body.args[1])}")
        return f"~{_wrap(f.body)}"
    if isinstance(f, And):
        return " & ".join(_wrap(g) for g in f.items)
    if isinstance(f, Or):
        return " | ".join(_wrap(g) for g in f.items)
    if isinstance(f, Implies):
        return f"{_wrap(f.left)} => {_wrap(f.right)}"
    if isinstance(f, Iff):
        return f"{_wrap(f.left)} <=> {_wrap(f.right)}"
    if isinstance(f, Forall):
        return f"! [{','.join(f.vars)}] : {_wrap(f.body)}"
    if isinstance(f, Exists):
        return f"? [{','.join(f.vars)}] : {_wrap(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula) -> str:
    if isinstance(f, (Top, Bottom, AtomF, Not)):
        return print_formula(f)
    return f"({print_formula(f)})"


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int) -> None:
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


@dataclass(frozen=True, slots=True)
class _Tok:
    kind: str  # 'id', 'var', 'punct', 'dollar'
    text: str
    line: int
    col: int


_PUNCT = ("<=>", "=>", "!=", "(", ")", "[", "]", ",", ".", ":",
          "&", "|", "~", "!", "?", "=")
_ID_CHARS = set(string.ascii_letters + string.digits + "_")


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "$":
            j = i + 1
            while j < n and text[j] in _ID_CHARS:
                j += 1
            toks.append(_Tok("dollar", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _ID_CHARS:
            j = i
            while j < n and text[j] in _ID_CHARS:
                j += 1
            word = text[i:j]
            kind = "var" if word[0].isupper() else "id"
            toks.append(_Tok(kind, word, line, col))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                toks.append(_Tok("punct", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    return toks


@dataclass
class Problem:
    rules: list[Formula] = field(default_factory=list)
    facts: list[AtomF] = field(default_factory=list)
    queries: list[Formula] = field(default_factory=list)
    formulas: list[Formula] = field(default_factory=list)
    symbols: SymbolTable = field(default_factory=SymbolTable)
    mode: str = "answer"


class _Parser:
    def __init__(self, toks: list[_Tok]) -> None:
        self.toks = toks
        self.i = 0

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else _Tok("punct", "", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col)
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}",
                             tok.line, tok.col)
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    # formula := disjunction (('=>' | '<=>') formula)?
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.at("=>"):
            self.next()
            return Implies(left, self.formula())
        if self.at("<=>"):
            self.next()
            return Iff(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        items = [self.conjunction()]
        while self.at("|"):
            self.next()
            items.append(self.conjunction())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def conjunction(self) -> Formula:
        items = [self.unary()]
        while self.at("&"):
            self.next()
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", 0, 0)
        if tok.text == "~":
            self.next()
            return Not(self.unary())
        if tok.text in ("!", "?"):
            self.next()
            self.expect("[")
            vs = [self._variable()]
            while self.at(","):
                self.next()
                vs.append(self._variable())
            self.expect("]")
            self.expect(":")
            body = self.unary()
            return Forall(tuple(vs), body) if tok.text == "!" \
                else Exists(tuple(vs), body)
        if tok.text == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind == "dollar":
            self.next()
            if tok.text == "$true":
                return Top()
            if tok.text == "$false":
                return Bottom()
            raise ParseError(f"unknown token {tok.text!r}", tok.line, tok.col)
        return self.atom()

    def _variable(self) -> str:
        tok = self.next()
        if tok.kind != "var":
            raise ParseError(
                f"expected a variable (upper-case), found {tok.text!r}",
                tok.line, tok.col)
        return tok.text

    def atom(self) -> Formula:
        t = self.term()
        if self.at("=") or self.at("!="):
            op = self.next().text
            rhs = self.term()
            eq = AtomF(EQ_PRED, (t, rhs))
            return eq if op == "=" else Not(eq)
        # reinterpret the parsed term as a predicate atom
        if isinstance(t, Const):
            return AtomF(t.name)
        if isinstance(t, App):
            return AtomF(t.fn, t.args)
        tok = self.toks[self.i - 1]
        raise ParseError("a variable is not a formula", tok.line, tok.col)

    def term(self) -> Term:
        tok = self.next()
        if tok.kind == "var":
            return Var(tok.text)
        if tok.kind != "id":
            raise ParseError(f"expected a term, found {tok.text!r}",
                             tok.line, tok.col)
        if self.at("("):
            self.next()
            args = [self.term()]
            while self.at(","):
                self.next()
                args.append(self.term())
            self.expect(")")
            return App(tok.text, tuple(args))
        return Const(tok.text)


_STATEMENT_KINDS = ("rule", "fact", "query", "formula")


def parse(text: str) -> Problem:
    """Parse a problem file into rules, facts and query disjuncts."""
    toks = _tokenize(text)
    p = _Parser(toks)
    prob = Problem()
    while p.peek() is not None:
        head = p.next()
        if head.kind != "id" or head.text not in _STATEMENT_KINDS:
            raise ParseError(
                f"expected one of {_STATEMENT_KINDS}, found {head.text!r}",
                head.line, head.col)
        p.expect(":")
        f = p.formula()
        dot = p.expect(".")
        if head.text == "fact":
            if not isinstance(f, AtomF) or free_vars(f) or \
                    any(isinstance(a, App) for a in f.args) or \
                    f.pred == EQ_PRED:
                raise ParseError("a fact must be a ground function-free atom",
                                 head.line, head.col)
            prob.facts.append(f)
        elif head.text == "rule":
            prob.rules.append(f)
        elif head.text == "query":
            prob.queries.append(f)
        else:
            prob.formulas.append(f)
        del dot
    _declare_symbols(prob)
    return prob


def parse_formula(text: str) -> Formula:
    """Parse a single bare formula (no statement keyword, no final dot)."""
    p = _Parser(_tokenize(text))
    f = p.formula()
    tok = p.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return f


def _declare_symbols(prob: Problem) -> None:
    for f in prob.rules + prob.queries + prob.formulas:
        declare_formula_symbols(prob.symbols, f)
    for a in prob.facts:
        declare_formula_symbols(prob.symbols, a)


def declare_formula_symbols(symbols: SymbolTable, f: Formula) -> None:
    if isinstance(f, AtomF):
        if f.pred != EQ_PRED:
            kind = SymbolKind.PREDICATE if f.args else SymbolKind.PROPOSITIONAL
            symbols.declare(f.pred, kind, len(f.args))
        for t in f.args:
            _declare_term_symbols(symbols, t)
    elif isinstance(f, Not):
        declare_formula_symbols(symbols, f.body)
    elif isinstance(f, (And, Or)):
        for g in f.items:
            declare_formula_symbols(symbols, g)
    elif isinstance(f, (Implies, Iff)):
        declare_formula_symbols(symbols, f.left)
        declare_formula_symbols(symbols, f.right)
    elif isinstance(f, (Forall, Exists)):
        declare_formula_symbols(symbols, f.body)


def _declare_term_symbols(symbols: SymbolTable, t: Term) -> None:
    if isinstance(t, Const):
        symbols.declare(t.name, SymbolKind.CONSTANT, 0)
    elif isinstance(t, App):
        symbols.declare(t.fn, SymbolKind.FUNCTION, len(t.args))
        for a in t.args:
            _declare_term_symbols(symbols, a)


# ---------------------------------------------------------------------------
# fragment checking


@dataclass(frozen=True, slots=True)
class FragmentResult:
    fragment: str  # "GF" | "LGF" | "CGF" | "none"
    witness: Optional[Formula] = None  # offending subformula when "none"


def expand_iff(f: Formula) -> Formula:
    if isinstance(f, Iff):
        l, r = expand_iff(f.left), expand_iff(f.right)
        return And((Implies(l, r), Implies(r, l)))
    if isinstance(f, Not):
        return Not(expand_iff(f.body))
    if isinstance(f, And):
        return And(tuple(expand_iff(g) for g in f.items))
    if isinstance(f, Or):
        return Or(tuple(expand_iff(g) for g in f.items))
    if isinstance(f, Implies):
        return Implies(expand_iff(f.left), expand_iff(f.right))
    if isinstance(f, Forall):
        return Forall(f.vars, expand_iff(f.body))
    if isinstance(f, Exists):
        return Exists(f.vars, expand_iff(f.body))
    return f


def _merge_quant(f: Formula) -> Formula:
    """Fuse ``! [X] : ! [Y] : F`` into ``! [X,Y] : F`` (same for ``?``)."""
    if isinstance(f, Forall) and isinstance(f.body, Forall):
        return _merge_quant(Forall(f.vars + f.body.vars, f.body.body))
    if isinstance(f, Exists) and isinstance(f.body, Exists):
        return _merge_quant(Exists(f.vars + f.body.vars, f.body.body))
    return f


def _conj_atoms(f: Formula) -> Optional[list[AtomF]]:
    if isinstance(f, AtomF):
        return [f]
    if isinstance(f, And):
        out: list[AtomF] = []
        for g in f.items:
            sub = _conj_atoms(g)
            if sub is None:
                return None
            out.extend(sub)
        return out
    return None


def _atom_vars(a: AtomF) -> set[str]:
    out: set[str] = set()
    for t in a.args:
        _term_free(t, frozenset(), out)
    return out


def _cooccur_ok(pairs_left: set[str], guard_atoms: list[AtomF],
                all_guard_vars: set[str]) -> bool:
    """Each variable in ``pairs_left`` co-occurs with every other guard
    variable in some single guard atom."""
    for x in pairs_left:
        for y in all_guard_vars:
            if y == x:
                continue
            if not any({x, y} <= _atom_vars(a) for a in guard_atoms):
                return False
    return True


def _guard_split(f: Formula) -> Optional[tuple[Formula, Formula]]:
    """Split a quantifier body into (guard part, guarded part)."""
    if isinstance(f, Implies):
        return f.left, f.right
    return None


def check_fragment(f: Formula) -> FragmentResult:
    """Smallest guarded fragment containing ``f`` (after expanding ``<=>``).

    Function symbols and equality are outside all three fragments.  The
    result is monotone: membership in GF implies LGF implies CGF.
    """
    f = expand_iff(f)
    bad = _fragment_violation(f, "GF")
    if bad is None:
        return FragmentResult("GF")
    bad = _fragment_violation(f, "LGF")
    if bad is None:
        return FragmentResult("LGF")
    bad = _fragment_violation(f, "CGF")
    if bad is None:
        return FragmentResult("CGF")
    return FragmentResult("none", witness=bad)


def _atom_ok(a: AtomF) -> bool:
    return a.pred != EQ_PRED and not any(isinstance(t, App) for t in a.args)


def _fragment_violation(f: Formula, frag: str) -> Optional[Formula]:
    """The first subformula breaking the rules of ``frag``, if any."""
    if isinstance(f, (Top, Bottom)):
        return None
    if isinstance(f, AtomF):
        return None if _atom_ok(f) else f
    if isinstance(f, Not):
        return _fragment_violation(f.body, frag)
    if isinstance(f, (And, Or)):
        for g in f.items:
            bad = _fragment_violation(g, frag)
            if bad is not None:
                return bad
        return None
    if isinstance(f, Implies):
        bad = _fragment_violation(f.left, frag)
        if bad is not None:
            return bad
        return _fragment_violation(f.right, frag)
    if isinstance(f, (Forall, Exists)):
        return _check_quantified(_merge_quant(f), frag)
    return f


def _guard_ok(frag: str, outer: set[str], guard_f: Formula,
              sub: Formula) -> bool:
    """Do ``guard_f`` and ``sub`` satisfy the guard conditions of ``frag``?"""
    inner_ex: tuple[str, ...] = ()
    g = guard_f
    if isinstance(g, Exists):
        if frag != "CGF":
            return False
        g = _merge_quant(g)
        inner_ex = g.vars  # type: ignore[union-attr]
        g = g.body  # type: ignore[union-attr]
    atoms = _conj_atoms(g)
    if atoms is None or not all(_atom_ok(a) for a in atoms):
        return False
    if frag == "GF" and len(atoms) != 1:
        return False

    guard_vars: set[str] = set()
    for a in atoms:
        guard_vars |= _atom_vars(a)
    fv_sub = free_vars(sub)

    # (a) free variables of the guarded part occur (free) in the guard
    if not fv_sub <= guard_vars - set(inner_ex):
        return False
    if frag == "CGF":
        # (b) each guard-existential variable occurs in only one guard atom
        for x in inner_ex:
            if sum(1 for a in atoms if x in _atom_vars(a)) != 1:
                return False
    if frag in ("LGF", "CGF"):
        # (b)/(c) each quantified variable co-occurs with every other guard
        # variable in a single guard atom
        if not _cooccur_ok(outer & guard_vars, atoms, guard_vars):
            return False
    return True


def _check_quantified(f: Forall | Exists, frag: str) -> Optional[Formula]:
    body = f.body
    outer = set(f.vars)
    if isinstance(f, Forall):
        split = _guard_split(body)
        if split is None:
            return f
        guard_f, sub = split
        if not _guard_ok(frag, outer, guard_f, sub):
            return f
        return _fragment_violation(sub, frag)
    # existential: try every split of the conjunction into guard & rest
    items = body.items if isinstance(body, And) else (body,)
    for k in range(1, len(items) + 1):
        head = items[:k]
        guard_f: Formula
        if len(head) == 1:
            guard_f = head[0]
        elif all(isinstance(h, AtomF) for h in head):
            guard_f = And(head)
        else:
            break
        rest = items[k:]
        sub = Top() if not rest else (rest[0] if len(rest) == 1 else And(rest))
        if _guard_ok(frag, outer, guard_f, sub) and \
                _fragment_violation(sub, frag) is None:
            return None
    return f


# ---------------------------------------------------------------------------
# query clauses


def negate_query(q: Formula) -> Clause:
    """Negate one BCQ disjunct into a flat negative (query) clause."""
    body = q
    seen_vars: tuple[str, ...] = ()
    while isinstance(body, Exists):
        seen_vars += body.vars
        body = body.body
    atoms = _conj_atoms(body)
    if atoms is None or not all(_atom_ok(a) for a in atoms):
        raise ValueError(
            f"not a Boolean conjunctive query: {print_formula(q)}")
    return Clause(Literal(False, a.pred, a.args) for a in atoms)
