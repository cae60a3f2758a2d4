"""Scenario documents: the ``.vz`` DSL.

A document is a sequence of declarations, facts, and config entries.
Every symbol must be declared before use; the parser is sort-directed,
so variables written ``?x`` pick up their sort from the argument
position they appear in.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import (DuplicateDeclaration, ParseError, SortMismatch,
                     UndeclaredSymbol)
from .printer import print_formula, print_real, print_term
from .sexpr import SList, SNum, SSym, read_all
from .terms import (BUILTIN_SYMBOLS, And, Application, Atom, Constant, Exists,
                    ForAll, Formula, FunctionSymbol, Iff, Implies, Modal,
                    ModalOp, Not, Or, Ought, Sort, Term, Variable,
                    check_formula, fits, moment, sort_of)

SORT_NAMES = {s.value: s for s in Sort}

_MODAL_BY_NAME = {
    "perceives": ModalOp.PERCEIVES,
    "knows": ModalOp.KNOWS,
    "believes": ModalOp.BELIEVES,
    "desires": ModalOp.DESIRES,
    "intends": ModalOp.INTENDS,
    "common": ModalOp.COMMON,
    "says": ModalOp.SAYS,
    "says-to": ModalOp.SAYS_TO,
}

_CONNECTIVES = {"not", "and", "or", "implies", "iff", "forall", "exists", "ought"}


class SymbolTable:
    """Declared constants and function symbols; builtins preloaded."""

    def __init__(self):
        self.functions: dict[str, FunctionSymbol] = dict(BUILTIN_SYMBOLS)
        self.constants: dict[str, Constant] = {}
        self.agents: list[Constant] = []

    def _check_fresh(self, name, loc):
        if name in self.functions or name in self.constants:
            raise DuplicateDeclaration(f"symbol {name!r} already declared", *loc)

    def declare_constant(self, name, sort, loc=(None, None)) -> Constant:
        self._check_fresh(name, loc)
        c = Constant(name, sort)
        self.constants[name] = c
        if sort is Sort.AGENT:
            self.agents.append(c)
        return c

    def declare_function(self, name, arg_sorts, result_sort, loc=(None, None)) -> FunctionSymbol:
        self._check_fresh(name, loc)
        f = FunctionSymbol(name, tuple(arg_sorts), result_sort)
        self.functions[name] = f
        return f


# ---------------------------------------------------------------------------
# Document model


@dataclass(frozen=True)
class Declaration:
    kind: str  # agent | action-type | fluent | predicate | constant
    name: str
    arg_sorts: tuple[Sort, ...] = ()
    sort: Optional[Sort] = None


@dataclass(frozen=True)
class InitiallyFact:
    fluent: Term


@dataclass(frozen=True)
class HappensFact:
    event: Term
    time: int


@dataclass(frozen=True)
class NuFact:
    agent: Constant
    fluent: Term
    time: int
    value: float


@dataclass(frozen=True)
class ThetaFact:
    agent: Constant
    mode: str  # always | never | at
    time: Optional[int] = None


@dataclass(frozen=True)
class InitiatesRule:
    event: Term
    fluent: Term
    time: Term


@dataclass(frozen=True)
class TerminatesRule:
    event: Term
    fluent: Term
    time: Term


@dataclass(frozen=True)
class HornRule:
    antecedents: tuple[Formula, ...]
    consequent: Formula


@dataclass(frozen=True)
class AssertFact:
    formula: Formula


@dataclass(frozen=True)
class GroupFact:
    formulas: tuple[Formula, ...]


@dataclass(frozen=True)
class ObserveFact:
    id: str
    agent: Optional[Constant]
    time: int
    formulas: tuple[Formula, ...]
    alternatives: tuple[Term, ...]
    performed: Optional[Term]


@dataclass(frozen=True)
class QueryFact:
    id: str
    time: int
    formulas: tuple[Formula, ...]


Fact = Union[InitiallyFact, HappensFact, NuFact, ThetaFact, InitiatesRule,
             TerminatesRule, HornRule, AssertFact, GroupFact, ObserveFact,
             QueryFact]


@dataclass
class ScenarioDoc:
    symbols: SymbolTable
    declarations: list[Declaration] = field(default_factory=list)
    facts: list[Fact] = field(default_factory=list)
    horizon: Optional[int] = None
    config: dict = field(default_factory=dict)

    def _of(self, cls):
        return [f for f in self.facts if isinstance(f, cls)]

    @property
    def agents(self) -> list[Constant]:
        return list(self.symbols.agents)

    @property
    def initially(self):
        return [f.fluent for f in self._of(InitiallyFact)]

    @property
    def happens(self):
        return [(f.event, f.time) for f in self._of(HappensFact)]

    @property
    def nu_facts(self):
        return self._of(NuFact)

    @property
    def theta_facts(self):
        return self._of(ThetaFact)

    @property
    def initiates_rules(self):
        return self._of(InitiatesRule)

    @property
    def terminates_rules(self):
        return self._of(TerminatesRule)

    @property
    def horn_rules(self):
        return self._of(HornRule)

    @property
    def asserts(self):
        return [f.formula for f in self._of(AssertFact)]

    @property
    def groups(self):
        return [f.formulas for f in self._of(GroupFact)]

    @property
    def observations(self):
        return self._of(ObserveFact)

    @property
    def queries(self):
        return self._of(QueryFact)

    def effective_horizon(self) -> int:
        if self.horizon is not None:
            return self.horizon
        times = [0]
        for f in self.facts:
            if isinstance(f, (HappensFact, NuFact, ObserveFact, QueryFact)):
                times.append(f.time)
            elif isinstance(f, ThetaFact) and f.time is not None:
                times.append(f.time)
        return max(times)


# ---------------------------------------------------------------------------
# Parsing


def _loc(sx):
    return (sx.line, sx.col)


def _expect_sym(sx, what="identifier") -> str:
    if not isinstance(sx, SSym):
        raise ParseError(f"expected {what}", *_loc(sx))
    return sx.text


def _expect_nat(sx) -> int:
    if not (isinstance(sx, SNum) and sx.is_int and not sx.text.startswith("-")):
        raise ParseError("expected a non-negative integer", *_loc(sx))
    return sx.value


def _parse_sort(sx) -> Sort:
    name = _expect_sym(sx, "sort name")
    if name not in SORT_NAMES:
        raise ParseError(f"unknown sort {name!r}", *_loc(sx))
    return SORT_NAMES[name]


class _FormulaParser:
    """Parses terms and formulas against a symbol table. ``freevars``
    accumulates ``?name`` variables so repeated mentions agree on sort;
    its scope is one fact (or one observe/query block)."""

    def __init__(self, table: SymbolTable):
        self.table = table
        self.freevars: dict[str, Variable] = {}

    def fresh_scope(self):
        self.freevars = {}

    def term(self, sx, expected: Sort, env=None) -> Term:
        env = env or {}
        if isinstance(sx, SNum):
            if expected is Sort.MOMENT and sx.is_int and not sx.text.startswith("-"):
                return moment(sx.value)
            raise SortMismatch(f"number not allowed where {expected.value} expected", *_loc(sx))
        if isinstance(sx, SSym):
            name = sx.text
            if name.startswith("?"):
                return self._variable(name[1:], expected, _loc(sx))
            if name in env:
                v = env[name]
                if not fits(v.sort, expected):
                    raise SortMismatch(f"variable {name} has sort {v.sort.value}, "
                                       f"expected {expected.value}", *_loc(sx))
                return v
            if name in self.table.constants:
                c = self.table.constants[name]
                if not fits(c.sort, expected):
                    raise SortMismatch(f"{name} has sort {c.sort.value}, "
                                       f"expected {expected.value}", *_loc(sx))
                return c
            raise UndeclaredSymbol(f"undeclared symbol {name!r}", *_loc(sx))
        if isinstance(sx, SList):
            if not sx.items:
                raise ParseError("empty application", *_loc(sx))
            head = _expect_sym(sx.items[0], "symbol name")
            if head.startswith("?"):
                raise ParseError("symbol variables are not part of the input grammar", *_loc(sx))
            sym = self.table.functions.get(head)
            if sym is None:
                raise UndeclaredSymbol(f"undeclared symbol {head!r}", *_loc(sx))
            args = sx.items[1:]
            if len(args) != len(sym.arg_sorts):
                raise ParseError(f"{head} expects {len(sym.arg_sorts)} arguments, "
                                 f"got {len(args)}", *_loc(sx))
            terms = tuple(self.term(a, s, env) for a, s in zip(args, sym.arg_sorts))
            if not fits(sym.result_sort, expected):
                raise SortMismatch(f"{head} yields {sym.result_sort.value}, "
                                   f"expected {expected.value}", *_loc(sx))
            return Application(sym, terms)
        raise ParseError("expected a term", *_loc(sx))

    def _variable(self, name, expected, loc) -> Variable:
        v = self.freevars.get(name)
        if v is None:
            v = Variable(name, expected)
            self.freevars[name] = v
        elif not fits(v.sort, expected):
            raise SortMismatch(f"variable ?{name} used at sorts {v.sort.value} "
                               f"and {expected.value}", *loc)
        return v

    def moment_term(self, sx, env=None) -> Term:
        """A moment position that may also be a bare (implicitly declared)
        moment variable, as in effect rules."""
        if isinstance(sx, SSym) and not sx.text.startswith("?") \
                and sx.text not in self.table.constants and sx.text not in (env or {}):
            return self._variable(sx.text, Sort.MOMENT, _loc(sx))
        return self.term(sx, Sort.MOMENT, env)

    def formula(self, sx, env=None) -> Formula:
        env = env or {}
        if not isinstance(sx, SList) or not sx.items:
            raise ParseError("expected a formula", *_loc(sx))
        head = sx.items[0]
        name = head.text if isinstance(head, SSym) else None
        body = sx.items[1:]
        if name == "not":
            self._arity(sx, 1)
            return Not(self.formula(body[0], env))
        if name in ("and", "or"):
            if not body:
                raise ParseError(f"({name}) needs at least one part", *_loc(sx))
            parts = tuple(self.formula(p, env) for p in body)
            return And(parts) if name == "and" else Or(parts)
        if name == "implies":
            self._arity(sx, 2)
            return Implies(self.formula(body[0], env), self.formula(body[1], env))
        if name == "iff":
            self._arity(sx, 2)
            return Iff(self.formula(body[0], env), self.formula(body[1], env))
        if name in ("forall", "exists"):
            self._arity(sx, 2)
            if not isinstance(body[0], SList):
                raise ParseError("expected binder list", *_loc(body[0]))
            env2 = dict(env)
            bvars = []
            for b in body[0].items:
                if not (isinstance(b, SList) and len(b.items) == 2):
                    raise ParseError("binder must be (name sort)", *_loc(b))
                vname = _expect_sym(b.items[0], "variable name")
                v = Variable(vname, _parse_sort(b.items[1]))
                env2[vname] = v
                bvars.append(v)
            cls = ForAll if name == "forall" else Exists
            return cls(tuple(bvars), self.formula(body[1], env2))
        if name == "ought":
            self._arity(sx, 4)
            agent = self.term(body[0], Sort.AGENT, env)
            time = self.moment_term(body[1], env)
            cond = self.formula(body[2], env)
            deontic = self.formula(body[3], env)
            try:
                return Ought(agent, time, cond, deontic)
            except SortMismatch as exc:
                raise SortMismatch(str(exc), *_loc(sx))
        if name in _MODAL_BY_NAME:
            op = _MODAL_BY_NAME[name]
            nagents = {ModalOp.COMMON: 0, ModalOp.SAYS_TO: 2}.get(op, 1)
            if name == "says" and len(body) == 4:
                op, nagents = ModalOp.SAYS_TO, 2
            if len(body) != nagents + 2:
                raise ParseError(f"({name} ...) has wrong arity", *_loc(sx))
            agents = tuple(self.term(b, Sort.AGENT, env) for b in body[:nagents])
            time = self.moment_term(body[nagents], env)
            return Modal(op, agents, time, self.formula(body[nagents + 1], env))
        # plain atom
        t = self.term(sx, Sort.BOOLEAN, env)
        if not isinstance(t, Application):
            raise ParseError("an atom must be an application", *_loc(sx))
        return Atom(t)

    def _arity(self, sx, n):
        if len(sx.items) != n + 1:
            raise ParseError(f"({sx.items[0].text} ...) expects {n} parts", *_loc(sx))

    def literal(self, sx, env=None) -> Formula:
        if isinstance(sx, SList) and sx.items and \
                isinstance(sx.items[0], SSym) and sx.items[0].text == "not":
            self._arity(sx, 1)
            return Not(self.literal(sx.items[1], env))
        f = self.formula(sx, env)
        if not isinstance(f, Atom):
            raise ParseError("expected an atom", *_loc(sx))
        return f


_CONFIG_KEYS = {"n", "m", "gamma", "learner", "max-depth", "mode"}


def parse_scenario(text: str) -> ScenarioDoc:
    """Parse and sort-check a scenario document. The first error wins; no
    partial documents are returned."""
    table = SymbolTable()
    doc = ScenarioDoc(table)
    fp = _FormulaParser(table)
    for sx in read_all(text):
        if not (isinstance(sx, SList) and sx.items and isinstance(sx.items[0], SSym)):
            raise ParseError("expected a (keyword ...) item", *_loc(sx))
        _parse_item(sx, doc, table, fp)
    for fact in doc.facts:
        _sort_check_fact(fact)
    return doc


def _parse_item(sx, doc, table, fp):
    head = sx.items[0].text
    body = sx.items[1:]
    loc = _loc(sx)
    fp.fresh_scope()

    def need(n):
        if len(body) != n:
            raise ParseError(f"({head} ...) expects {n} parts", *loc)

    if head == "declare-agent":
        need(1)
        name = _expect_sym(body[0])
        table.declare_constant(name, Sort.AGENT, loc)
        doc.declarations.append(Declaration("agent", name))
    elif head == "declare-constant":
        need(2)
        name = _expect_sym(body[0])
        sort = _parse_sort(body[1])
        table.declare_constant(name, sort, loc)
        doc.declarations.append(Declaration("constant", name, sort=sort))
    elif head in ("declare-action-type", "declare-fluent", "declare-predicate"):
        need(2)
        name = _expect_sym(body[0])
        if not isinstance(body[1], SList):
            raise ParseError("expected argument sort list", *_loc(body[1]))
        arg_sorts = tuple(_parse_sort(s) for s in body[1].items)
        result = {"declare-action-type": Sort.ACTION_TYPE,
                  "declare-fluent": Sort.FLUENT,
                  "declare-predicate": Sort.BOOLEAN}[head]
        table.declare_function(name, arg_sorts, result, loc)
        doc.declarations.append(Declaration(head.removeprefix("declare-"), name, arg_sorts))
    elif head == "horizon":
        need(1)
        if doc.horizon is not None:
            raise DuplicateDeclaration("duplicate horizon declaration", *loc)
        doc.horizon = _expect_nat(body[0])
    elif head == "set":
        need(2)
        key = _expect_sym(body[0])
        if key not in _CONFIG_KEYS:
            raise ParseError(f"unknown config key {key!r}", *loc)
        if key in ("n", "m", "max-depth"):
            doc.config[key] = _expect_nat(body[1])
        elif key == "gamma":
            if not isinstance(body[1], SNum):
                raise ParseError("gamma must be a number", *loc)
            doc.config[key] = float(body[1].value)
        else:
            doc.config[key] = _expect_sym(body[1])
    elif head == "initially":
        need(1)
        doc.facts.append(InitiallyFact(fp.term(body[0], Sort.FLUENT)))
    elif head == "happens":
        need(2)
        ev = fp.term(body[0], Sort.EVENT)
        doc.facts.append(HappensFact(ev, _expect_nat(body[1])))
    elif head == "nu":
        need(4)
        agent = fp.term(body[0], Sort.AGENT)
        fluent = fp.term(body[1], Sort.FLUENT)
        t = _expect_nat(body[2])
        if not isinstance(body[3], SNum):
            raise ParseError("nu value must be a number", *_loc(body[3]))
        doc.facts.append(NuFact(agent, fluent, t, float(body[3].value)))
    elif head == "theta":
        if len(body) not in (2, 3):
            raise ParseError("(theta ...) expects 2 or 3 parts", *loc)
        agent = fp.term(body[0], Sort.AGENT)
        mode = _expect_sym(body[1])
        if mode in ("always", "never"):
            need(2)
            doc.facts.append(ThetaFact(agent, mode))
        elif mode == "at":
            need(3)
            doc.facts.append(ThetaFact(agent, "at", _expect_nat(body[2])))
        else:
            raise ParseError("theta mode must be always, never, or at", *loc)
    elif head in ("initiates", "terminates"):
        need(3)
        ev = fp.term(body[0], Sort.EVENT)
        fl = fp.term(body[1], Sort.FLUENT)
        tm = fp.moment_term(body[2])
        cls = InitiatesRule if head == "initiates" else TerminatesRule
        doc.facts.append(cls(ev, fl, tm))
    elif head == "rule":
        need(2)
        if not isinstance(body[0], SList):
            raise ParseError("expected antecedent list", *_loc(body[0]))
        ants = tuple(fp.literal(a) for a in body[0].items)
        doc.facts.append(HornRule(ants, fp.literal(body[1])))
    elif head == "assert":
        need(1)
        doc.facts.append(AssertFact(fp.formula(body[0])))
    elif head == "group":
        doc.facts.append(GroupFact(tuple(fp.formula(f) for f in body)))
    elif head == "observe":
        doc.facts.append(_parse_observe(sx, body, fp))
    elif head == "query":
        doc.facts.append(_parse_query(sx, body, fp))
    else:
        raise ParseError(f"unknown item {head!r}", *loc)


def _sections(body, loc, allowed):
    out = {}
    for part in body:
        if not (isinstance(part, SList) and part.items and isinstance(part.items[0], SSym)):
            raise ParseError("expected a (section ...) entry", *loc)
        key = part.items[0].text
        if key not in allowed:
            raise ParseError(f"unknown section {key!r}", *_loc(part))
        if key in out:
            raise DuplicateDeclaration(f"duplicate section {key!r}", *_loc(part))
        out[key] = part
    return out


def _parse_observe(sx, body, fp) -> ObserveFact:
    loc = _loc(sx)
    if not body:
        raise ParseError("(observe ...) needs an id", *loc)
    oid = _expect_sym(body[0], "situation id")
    secs = _sections(body[1:], loc, {"agent", "time", "formulas", "alternatives", "performed"})
    agent = None
    if "agent" in secs:
        agent = fp.term(secs["agent"].items[1], Sort.AGENT)
    time = _expect_nat(secs["time"].items[1]) if "time" in secs else 0
    formulas = tuple(fp.formula(f) for f in secs.get("formulas", SList((None,), *loc)).items[1:])
    alts = tuple(fp.term(t, Sort.ACTION_TYPE) for t in secs.get("alternatives", SList((None,), *loc)).items[1:])
    performed = None
    if "performed" in secs:
        items = secs["performed"].items[1:]
        if len(items) != 1:
            raise ParseError("(performed ...) takes one action type", *_loc(secs["performed"]))
        performed = fp.term(items[0], Sort.ACTION_TYPE)
    return ObserveFact(oid, agent, time, formulas, alts, performed)


def _parse_query(sx, body, fp) -> QueryFact:
    loc = _loc(sx)
    if not body:
        raise ParseError("(query ...) needs an id", *loc)
    qid = _expect_sym(body[0], "situation id")
    secs = _sections(body[1:], loc, {"time", "formulas"})
    time = _expect_nat(secs["time"].items[1]) if "time" in secs else 0
    formulas = tuple(fp.formula(f) for f in secs.get("formulas", SList((None,), *loc)).items[1:])
    return QueryFact(qid, time, formulas)


def _sort_check_fact(fact):
    if isinstance(fact, (HornRule,)):
        for a in fact.antecedents:
            check_formula(a)
        check_formula(fact.consequent)
    elif isinstance(fact, AssertFact):
        check_formula(fact.formula)
    elif isinstance(fact, GroupFact):
        for f in fact.formulas:
            check_formula(f)
    elif isinstance(fact, (ObserveFact, QueryFact)):
        for f in fact.formulas:
            check_formula(f)


# ---------------------------------------------------------------------------
# Printing


def print_fact(fact) -> str:
    if isinstance(fact, InitiallyFact):
        return f"(initially {print_term(fact.fluent)})"
    if isinstance(fact, HappensFact):
        return f"(happens {print_term(fact.event)} {fact.time})"
    if isinstance(fact, NuFact):
        return (f"(nu {print_term(fact.agent)} {print_term(fact.fluent)} "
                f"{fact.time} {print_real(fact.value)})")
    if isinstance(fact, ThetaFact):
        if fact.mode == "at":
            return f"(theta {print_term(fact.agent)} at {fact.time})"
        return f"(theta {print_term(fact.agent)} {fact.mode})"
    if isinstance(fact, (InitiatesRule, TerminatesRule)):
        kw = "initiates" if isinstance(fact, InitiatesRule) else "terminates"
        return f"({kw} {print_term(fact.event)} {print_term(fact.fluent)} {print_term(fact.time)})"
    if isinstance(fact, HornRule):
        ants = " ".join(print_formula(a) for a in fact.antecedents)
        return f"(rule ({ants}) {print_formula(fact.consequent)})"
    if isinstance(fact, AssertFact):
        return f"(assert {print_formula(fact.formula)})"
    if isinstance(fact, GroupFact):
        return f"(group {' '.join(print_formula(f) for f in fact.formulas)})"
    if isinstance(fact, ObserveFact):
        parts = [f"(observe {fact.id}"]
        if fact.agent is not None:
            parts.append(f"(agent {print_term(fact.agent)})")
        parts.append(f"(time {fact.time})")
        parts.append(f"(formulas {' '.join(print_formula(f) for f in fact.formulas)})")
        parts.append(f"(alternatives {' '.join(print_term(t) for t in fact.alternatives)})")
        if fact.performed is not None:
            parts.append(f"(performed {print_term(fact.performed)})")
        return " ".join(parts) + ")"
    if isinstance(fact, QueryFact):
        return (f"(query {fact.id} (time {fact.time}) "
                f"(formulas {' '.join(print_formula(f) for f in fact.formulas)}))")
    raise TypeError(f"not a fact: {fact!r}")


def print_declaration(d: Declaration) -> str:
    if d.kind == "agent":
        return f"(declare-agent {d.name})"
    if d.kind == "constant":
        return f"(declare-constant {d.name} {d.sort.value})"
    kw = {"action-type": "declare-action-type", "fluent": "declare-fluent",
          "predicate": "declare-predicate"}[d.kind]
    return f"({kw} {d.name} ({' '.join(s.value for s in d.arg_sorts)}))"


def print_scenario(doc: ScenarioDoc) -> str:
    lines = [print_declaration(d) for d in doc.declarations]
    if doc.horizon is not None:
        lines.append(f"(horizon {doc.horizon})")
    for key in sorted(doc.config):
        lines.append(f"(set {key} {doc.config[key]})")
    lines += [print_fact(f) for f in doc.facts]
    return "\n".join(lines) + "\n"
