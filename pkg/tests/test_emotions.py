import pytest

from vz.ec import project
from vz.emotions import (EmotionKind, EmotionRecord, Theta, World,
                         eval_admiration, eval_distress, eval_happy_for,
                         eval_joy, eval_occ_table_emotion, sweep_emotions,
                         world_from_doc)
from vz.errors import UnknownOccurrence
from vz.scenario import HappensFact, parse_scenario
from vz.terms import ACTION, Application, Sort
from vz.utility import NuTable

from conftest import add_effects, make_doc

ALWAYS = lambda *agents: Theta(tuple((a, "always") for a in agents))


def simple_world(nu_entries, initiated=(), terminated=(), horizon=4,
                 theta=None):
    """One event at t=1 with the given effects; agents ag0/ag1."""
    doc = make_doc(3, 1, horizon=horizon)
    e = doc.events[0]
    add_effects(doc, e,
                [doc.fluents[i] for i in initiated],
                [doc.fluents[i] for i in terminated])
    doc.facts.append(HappensFact(e, 1))
    tl = project(doc)
    a0 = doc.symbols.constants["ag0"]
    a1 = doc.symbols.constants["ag1"]
    by_name = {"a0": a0, "a1": a1}
    table = NuTable.of({(by_name[k[0]], doc.fluents[k[1]], k[2]): v
                        for k, v in nu_entries.items()})
    theta = theta if theta is not None else ALWAYS(a0, a1)
    return World(tl, table, theta, (a0, a1), horizon), e, a0, a1, doc


class TestJoyDistress:
    def test_theta_never_blocks(self):
        w, e, a0, a1, _ = simple_world({("a0", 0, 2): 2.0}, initiated=[0],
                                       theta=Theta())
        assert not eval_joy(a0, e, 1, 2, w)

    def test_joy_positive_clean(self):
        w, e, a0, _, _ = simple_world({("a0", 0, 2): 2.0}, initiated=[0])
        assert eval_joy(a0, e, 1, 0, w)

    def test_joy_blocked_by_negative_consequence(self):
        w, e, a0, _, _ = simple_world(
            {("a0", 0, 2): 2.0, ("a0", 1, 4): -1.0}, initiated=[0, 1])
        assert not eval_joy(a0, e, 1, 0, w)

    def test_distress_zero_table_false(self):
        w, e, a0, _, _ = simple_world({}, initiated=[0])
        assert not eval_distress(a0, e, 1, 0, w)

    def test_distress_negative_clean(self):
        w, e, a0, _, _ = simple_world({("a0", 0, 2): -3.0}, initiated=[0])
        assert eval_distress(a0, e, 1, 0, w)
        assert not eval_distress(a0, e, 1, 0,
                                 World(w.timeline, w.nu, Theta(), w.agents, w.horizon))

    def test_unknown_occurrence(self):
        w, e, a0, _, _ = simple_world({}, initiated=[0])
        with pytest.raises(UnknownOccurrence):
            eval_joy(a0, e, 3, 0, w)


class TestOtherDirected:
    def test_happy_for_self_false(self):
        w, e, a0, _, _ = simple_world({("a0", 0, 2): 1.0}, initiated=[0])
        assert not eval_happy_for(a0, a0, e, 1, 0, w)

    def test_happy_for_true(self):
        w, e, a0, a1, _ = simple_world({("a1", 0, 2): 1.0}, initiated=[0])
        assert eval_happy_for(a0, a1, e, 1, 0, w)

    def test_happy_for_blocked(self):
        w, e, a0, a1, _ = simple_world(
            {("a1", 0, 2): 1.0, ("a1", 1, 3): -0.1}, initiated=[0, 1])
        assert not eval_happy_for(a0, a1, e, 1, 0, w)

    def test_resentment_mirrors_happy_for_conditions(self):
        w, e, a0, a1, _ = simple_world({("a1", 0, 2): 1.0}, initiated=[0])
        assert eval_occ_table_emotion(EmotionKind.RESENTMENT, a0, a1, e, 1, 0, w)

    def test_gloating_strict_inequality(self):
        w, e, a0, a1, _ = simple_world({}, initiated=[0])
        assert not eval_occ_table_emotion(EmotionKind.GLOATING, a0, a1, e, 1, 0, w)

    def test_gloating_and_pity_on_undesirable(self):
        w, e, a0, a1, _ = simple_world({("a1", 0, 2): -1.0}, initiated=[0])
        assert eval_occ_table_emotion(EmotionKind.GLOATING, a0, a1, e, 1, 0, w)
        assert eval_occ_table_emotion(EmotionKind.PITY_FOR, a0, a1, e, 1, 0, w)
        assert not eval_occ_table_emotion(EmotionKind.PITY_FOR, a1, a1, e, 1, 0, w)


def action_world(nu_entries, horizon=4):
    """ag0 performs an action at t=1 initiating fluent 0."""
    doc = make_doc(2, 0, horizon=horizon)
    alpha = doc.symbols.declare_function("wave", (), Sort.ACTION_TYPE)
    a0 = doc.symbols.constants["ag0"]
    a1 = doc.symbols.constants["ag1"]
    ev = Application(ACTION, (a0, alpha()))
    add_effects(doc, ev, initiated=[doc.fluents[0]])
    doc.facts.append(HappensFact(ev, 1))
    tl = project(doc)
    by_name = {"a0": a0, "a1": a1}
    table = NuTable.of({(by_name[k[0]], doc.fluents[k[1]], k[2]): v
                        for k, v in nu_entries.items()})
    w = World(tl, table, ALWAYS(a0, a1), (a0, a1), horizon)
    return w, alpha(), a0, a1


class TestAdmiration:
    def test_good_action_admired(self):
        w, alpha, a0, a1 = action_world({("a0", 0, 2): 2.0, ("a1", 0, 2): 2.0})
        assert eval_admiration(a1, a0, alpha, 1, 0, w)

    def test_own_action_not_admired(self):
        w, alpha, a0, a1 = action_world({("a0", 0, 2): 4.0})
        assert not eval_admiration(a0, a0, alpha, 1, 0, w)

    def test_negative_mu_consequence_blocks(self):
        w, alpha, a0, a1 = action_world(
            {("a0", 0, 2): 4.0, ("a0", 0, 3): -1.0, ("a1", 0, 3): 0.5})
        # mu(f,3) = -0.5 < 0 even though the total is positive
        assert not eval_admiration(a1, a0, alpha, 1, 0, w)

    def test_invariant_under_nu_redistribution(self, rng):
        w, alpha, a0, a1 = action_world({("a0", 0, 2): 2.0, ("a1", 0, 3): 1.0})
        f = None
        for (ag, fl, t), v in w.nu._index.items():
            f = fl
        base = eval_admiration(a1, a0, alpha, 1, 0, w)
        for _ in range(100):
            # redistribute each (fluent, t) total between the two agents
            entries = {}
            for t in range(w.horizon + 1):
                total = sum(w.nu.get(a, f, t) for a in w.agents)
                share = rng.uniform(-5, 5)
                entries[(a0, f, t)] = share
                entries[(a1, f, t)] = total - share
            w2 = World(w.timeline, NuTable.of(entries), w.theta, w.agents, w.horizon)
            assert eval_admiration(a1, a0, alpha, 1, 0, w2) == base


class TestSweep:
    def test_theta_never_empty(self):
        w, e, a0, a1, _ = simple_world({("a0", 0, 2): 1.0}, initiated=[0],
                                       theta=Theta())
        assert sweep_emotions(w) == []

    def test_mutual_exclusion_and_determinism(self):
        w, e, a0, a1, _ = simple_world(
            {("a0", 0, 2): 1.0, ("a1", 0, 2): -1.0}, initiated=[0])
        recs = sweep_emotions(w)
        assert recs == sweep_emotions(w)
        seen = {(r.kind, r.subject, r.event, r.event_time, r.hold_time) for r in recs}
        for r in recs:
            if r.kind is EmotionKind.JOY:
                assert (EmotionKind.DISTRESS, r.subject, r.event,
                        r.event_time, r.hold_time) not in seen

    def test_theta_gating_removes_only_that_agent(self):
        w, e, a0, a1, _ = simple_world(
            {("a0", 0, 2): 1.0, ("a1", 0, 2): -1.0}, initiated=[0])
        gated = World(w.timeline, w.nu, ALWAYS(a1), w.agents, w.horizon)
        full = sweep_emotions(w)
        part = sweep_emotions(gated)
        assert part == [r for r in full if r.subject == a1]

    def test_single_agent_no_other_directed(self):
        doc = make_doc(1, 1, horizon=3)
        # fresh doc with one agent only
        from vz.scenario import ScenarioDoc, SymbolTable
        table = SymbolTable()
        doc = ScenarioDoc(table, horizon=3)
        f = table.declare_function("fl0", (), Sort.FLUENT)()
        e = table.declare_constant("e0", Sort.EVENT)
        solo = table.declare_constant("solo", Sort.AGENT)
        doc.fluents, doc.events = [f], [e]
        add_effects(doc, e, initiated=[f])
        doc.facts.append(HappensFact(e, 1))
        tl = project(doc)
        w = World(tl, NuTable.of({(solo, f, 2): 1.0}), ALWAYS(solo), (solo,), 3)
        recs = sweep_emotions(w)
        assert recs and all(r.kind is EmotionKind.JOY for r in recs)


# ---------------------------------------------------------------------------
# Independent interpreter: a direct transcription of each defining
# biconditional, computed from raw sums without the utility module.


def _raw_nu_bar(world, agent, occ):
    s = 0.0
    for y in range(occ.time + 1, world.horizon + 1):
        s += sum(world.nu.get(agent, f, y) for f in occ.initiated)
        s -= sum(world.nu.get(agent, f, y) for f in occ.terminated)
    return s


def _raw_mu(world, f, t):
    return sum(world.nu.get(a, f, t) for a in world.agents)


def reference_eval(kind, a, b, occ, t2, world):
    if not world.theta.holds(a, t2):
        return False
    moments = range(world.horizon + 1)
    if kind is EmotionKind.JOY:
        return (_raw_nu_bar(world, a, occ) > 0 and
                all(world.nu.get(a, f, y) >= 0 for f in occ.initiated for y in moments))
    if kind is EmotionKind.DISTRESS:
        return (_raw_nu_bar(world, a, occ) < 0 and
                all(world.nu.get(a, f, y) <= 0 for f in occ.initiated for y in moments))
    if kind is EmotionKind.ADMIRATION_FOR:
        ev = occ.event
        if (not isinstance(ev, Application) or ev.symbol.name != "action"
                or ev.args[0] != b or a == b):
            return False
        total = sum(_raw_nu_bar(world, ag, occ) for ag in world.agents)
        return (total > 0 and
                all(_raw_mu(world, f, y) >= 0 for f in occ.initiated for y in moments))
    if a == b:
        return False
    nb = _raw_nu_bar(world, b, occ)
    if kind in (EmotionKind.HAPPY_FOR, EmotionKind.RESENTMENT):
        return nb > 0 and all(world.nu.get(b, f, y) >= 0
                              for f in occ.initiated for y in moments)
    return nb < 0 and all(world.nu.get(b, f, y) <= 0
                          for f in occ.initiated for y in moments)


def random_emotion_world(rng):
    doc = make_doc(3, 0, horizon=rng.randint(1, 4))
    alpha = doc.symbols.declare_function("wave", (), Sort.ACTION_TYPE)
    a0 = doc.symbols.constants["ag0"]
    a1 = doc.symbols.constants["ag1"]
    ev = Application(ACTION, (a0, alpha()))
    pool = list(doc.fluents)
    rng.shuffle(pool)
    k = rng.randint(1, len(pool))
    add_effects(doc, ev, pool[:k // 2 + 1], pool[k // 2 + 1:k])
    doc.facts.append(HappensFact(ev, rng.randint(0, doc.horizon)))
    tl = project(doc)
    entries = {(a, f, t): rng.choice([-2.0, -1.0, 0.0, 1.0, 2.0])
               for a in (a0, a1) for f in doc.fluents
               for t in range(doc.horizon + 1) if rng.random() < 0.6}
    return World(tl, NuTable.of(entries), ALWAYS(a0, a1), (a0, a1), doc.horizon)


def test_eval_matches_reference_interpreter(rng):
    for _ in range(300):
        w = random_emotion_world(rng)
        occ = w.timeline.occurrences[0]
        ev, t = occ.event, occ.time
        actor = ev.args[0]
        for t2 in range(w.horizon + 1):
            for a in w.agents:
                assert eval_joy(a, ev, t, t2, w) == reference_eval(
                    EmotionKind.JOY, a, None, occ, t2, w)
                assert eval_distress(a, ev, t, t2, w) == reference_eval(
                    EmotionKind.DISTRESS, a, None, occ, t2, w)
                for b in w.agents:
                    if a == b:
                        continue
                    assert eval_happy_for(a, b, ev, t, t2, w) == reference_eval(
                        EmotionKind.HAPPY_FOR, a, b, occ, t2, w)
                    for kind in (EmotionKind.GLOATING, EmotionKind.PITY_FOR,
                                 EmotionKind.RESENTMENT):
                        assert eval_occ_table_emotion(kind, a, b, ev, t, t2, w) \
                            == reference_eval(kind, a, b, occ, t2, w)
                    if b == actor:
                        assert eval_admiration(a, b, ev.args[1], t, t2, w) \
                            == reference_eval(EmotionKind.ADMIRATION_FOR,
                                              a, b, occ, t2, w)
