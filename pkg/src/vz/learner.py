"""Exemplar identification and trait learning.

Exemplars come from admiration records; traits are learnt by
generalizing the situations in which the exemplar acted and
anti-unifying the performed action instances against the same variable
memo, which links situation variables to action variables whenever
their witnessing ground values agree across all inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .emotions import EmotionKind, EmotionRecord
from .errors import NoAlignment, UnboundActionVariable, UnsupportedFragment
from .generalize import FIRST_ORDER, VarNamer, anti_unify, generalize_sets
from .inference import horn_closure
from .printer import print_formula, print_term
from .subst import Substitution, apply_substitution, match
from .terms import (ACTION, HAPPENS, INITIATES, TERMINATES, Application, Atom,
                    Constant, Formula, Not, Sort, Term, Variable,
                    free_variables, is_ground, moment)


@dataclass(frozen=True)
class Situation:
    id: str
    time: int
    formulas: tuple[Formula, ...]
    available_alternatives: tuple[Term, ...] = ()
    performed: Optional[Term] = None
    agent: Optional[Constant] = None

    @classmethod
    def from_observation(cls, obs) -> "Situation":
        return cls(obs.id, obs.time, obs.formulas, obs.alternatives,
                   obs.performed, obs.agent)


@dataclass(frozen=True)
class TraitCriteria:
    min_situations: int = 2        # m
    fraction: float = 0.9          # gamma
    exemplar_threshold: int = 2    # n

    def __post_init__(self):
        if self.min_situations < 1 or self.exemplar_threshold < 1:
            raise ValueError("thresholds must be positive")
        if not (0 < self.fraction <= 1):
            raise ValueError("fraction must lie in (0, 1]")

    @classmethod
    def from_config(cls, config: dict) -> "TraitCriteria":
        return cls(min_situations=config.get("m", 2),
                   fraction=config.get("gamma", 0.9),
                   exemplar_threshold=config.get("n", 2))


@dataclass(frozen=True)
class LearntTrait:
    pattern: tuple[Formula, ...]   # free variables shared with the action
    action_pattern: Term
    exemplar: Optional[Constant] = None
    source_situations: tuple[str, ...] = ()

    def __post_init__(self):
        pattern_vars = set()
        for f in self.pattern:
            pattern_vars |= free_variables(f)
        loose = {v for v in free_variables(self.action_pattern)
                 if isinstance(v, Variable)} - pattern_vars
        if loose:
            raise UnboundActionVariable(
                f"action variables without a situation anchor: {sorted(v.name for v in loose)}")


@dataclass(frozen=True)
class ExemplarRecord:
    learner: Constant
    exemplar: Constant
    admiration_count: int
    admitted_at: Optional[int] = None


def check_consistency(sigma: Situation, alpha: Term, agent: Constant) -> bool:
    """True iff adding happens(action(agent, alpha), sigma.time) to the
    situation derives no contradiction and no effect conflict under the
    Horn closure."""
    event = Application(ACTION, (agent, alpha))
    new_atom = Atom(Application(HAPPENS, (event, moment(sigma.time))))
    gamma = list(sigma.formulas) + [new_atom]
    closure = horn_closure(gamma)
    atoms = {f for f in closure if isinstance(f, Atom)}
    for f in closure:
        if isinstance(f, Not) and f.body in atoms:
            return False
    # effect conflict: same fluent both initiated and terminated at one moment
    initiated = {(f.pred.args[1], f.pred.args[2]) for f in atoms
                 if f.pred.symbol is INITIATES}
    terminated = {(f.pred.args[1], f.pred.args[2]) for f in atoms
                  if f.pred.symbol is TERMINATES}
    return not (initiated & terminated)


def _instantiates(term: Term, alpha_symbol) -> bool:
    return isinstance(term, Application) and term.symbol == alpha_symbol


def detect_trait(history, alpha_symbol, criteria: TraitCriteria) -> bool:
    """Does the history establish alpha as a trait? Eligible situations
    offer a consistent instantiation of alpha among at least two genuine
    alternatives; the performed fraction must reach the threshold."""
    eligible = 0
    performed = 0
    for sigma in sorted(history, key=lambda s: (s.time, s.id)):
        if len(sigma.available_alternatives) < 2:
            continue
        agent = sigma.agent or Constant("_self", Sort.AGENT)
        candidates = [t for t in sigma.available_alternatives if _instantiates(t, alpha_symbol)]
        try:
            ok = any(check_consistency(sigma, c, agent) for c in candidates)
        except UnsupportedFragment:
            ok = False
        if not ok:
            continue
        eligible += 1
        if sigma.performed is not None and _instantiates(sigma.performed, alpha_symbol):
            performed += 1
    if eligible < criteria.min_situations:
        return False
    return performed / eligible >= criteria.fraction


def identify_exemplars(records, learner: Constant,
                       criteria: TraitCriteria) -> list[ExemplarRecord]:
    """One record per admired agent; admission happens at the hold time
    of the n-th admiration in chronological order."""
    by_exemplar: dict[Constant, list[EmotionRecord]] = {}
    for r in records:
        if r.kind is EmotionKind.ADMIRATION_FOR and r.subject == learner:
            by_exemplar.setdefault(r.object, []).append(r)
    out = []
    for exemplar in sorted(by_exemplar, key=lambda c: c.name):
        rs = sorted(by_exemplar[exemplar],
                    key=lambda r: (r.hold_time, r.event_time, print_term(r.event)))
        n = criteria.exemplar_threshold
        admitted_at = rs[n - 1].hold_time if len(rs) >= n else None
        out.append(ExemplarRecord(learner, exemplar, len(rs), admitted_at))
    return out


def learn_trait(situations, performed_instances, mode: str = FIRST_ORDER,
                exemplar: Optional[Constant] = None,
                min_situations: int = 2) -> LearntTrait:
    """Generalize the situations and the performed action instances with
    a shared variable memo, yielding a trait whose situation and action
    variables are linked by witness agreement."""
    situations = list(situations)
    performed_instances = list(performed_instances)
    if len(situations) != len(performed_instances):
        raise NoAlignment("one performed instance per situation required")
    if len(situations) < min_situations:
        raise NoAlignment(f"need at least {min_situations} situations")
    namer = VarNamer()
    gen = generalize_sets([s.formulas for s in situations], mode, namer=namer)
    action = anti_unify(performed_instances, mode, namer=namer)
    return LearntTrait(gen.patterns, action.pattern, exemplar,
                       tuple(s.id for s in situations))


def _match_all(patterns, formulas, binding: Substitution):
    """Yield substitutions matching every pattern against some formula."""
    if not patterns:
        yield binding
        return
    head, rest = patterns[0], patterns[1:]
    grounded = apply_substitution(binding, head)
    for f in formulas:
        s = match(grounded, f)
        if s is None:
            continue
        merged = dict(binding.var_bindings)
        merged.update(s.vars)
        symmerged = dict(binding.sym_bindings)
        symmerged.update(s.symbols)
        yield from _match_all(rest, formulas, Substitution.of(merged, symmerged))


def apply_trait(trait: LearntTrait, sigma: Situation,
                learner: Constant) -> list[Term]:
    """Proposed events: for every substitution making all pattern
    formulas match the situation, the learner performs the instantiated
    action at the situation's time, provided consistency holds."""
    proposals = []
    seen = set()
    for s in _match_all(list(trait.pattern), list(sigma.formulas), Substitution()):
        action_type = apply_substitution(s, trait.action_pattern)
        if not is_ground(action_type):
            continue
        if not check_consistency(sigma, action_type, learner):
            continue
        event = Application(ACTION, (learner, action_type))
        key = print_term(event)
        if key not in seen:
            seen.add(key)
            proposals.append(event)
    proposals.sort(key=print_term)
    return proposals
