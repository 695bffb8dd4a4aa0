"""Transition systems: coproduct, product, grafting, and architecture functors.

A system is (states, initial, optional unique final, labels, transitions).
Idle transitions (s, *, s) are implicit on every state and materialize
only during language enumeration, which keeps products and coproducts
small.  Labels carry an integer delay block (0 unless the time-delay
subcategory is in play).  Bridge labels introduced by grafting are
namespaced ("e", edge_id) so they never collide with part labels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graph import DiGraph, CycleDetected, condensation, kahn_order, tarjan_scc

IDLE = "*"

PRODUCT_STATE_BUDGET = 4096
STRONG_SUMMAND_BUDGET = 64
ENUM_BUDGET = 200_000


class TransitionError(ValueError):
    pass


class StateNotFound(TransitionError):
    pass


class ProductBudgetExceeded(TransitionError):
    pass


class BudgetExceeded(TransitionError):
    pass


class EnumerationBudgetExceeded(TransitionError):
    pass


class MachineNotStronglyConnected(TransitionError):
    pass


class CondensationNotAcyclic(TransitionError):
    pass


def _key(x) -> str:
    """Deterministic total-order key for mixed state/label values.

    Ints sort numerically (zero-padded) so canonical renumbering is
    stable under re-canonicalization.
    """
    if isinstance(x, bool):
        return "b1" if x else "b0"
    if isinstance(x, int):
        return "i%020d" % x if x >= 0 else "j%020d" % (10**20 + x)
    if isinstance(x, str):
        return "s" + x
    if isinstance(x, tuple):
        return "t(" + ",".join(_key(e) for e in x) + ")"
    return "r" + repr(x)


@dataclass
class TransitionSystem:
    states: tuple
    initial: object
    labels: tuple  # of (name, delay) pairs, sorted by repr
    transitions: tuple  # of (src, label_name, dst), sorted by repr
    final: object = None

    def __post_init__(self):
        sset = set(self.states)
        if self.initial not in sset:
            raise StateNotFound(f"initial {self.initial!r} not a state")
        if self.final is not None and self.final not in sset:
            raise StateNotFound(f"final {self.final!r} not a state")
        names = {n for n, _ in self.labels}
        if len(names) != len(self.labels):
            raise TransitionError("duplicate label names")
        if IDLE in names:
            raise TransitionError("the idle label is implicit")
        for s, l, t in self.transitions:
            if s not in sset or t not in sset:
                raise TransitionError(f"transition {(s, l, t)!r} leaves the state set")
            if l not in names:
                raise TransitionError(f"transition uses unknown label {l!r}")

    @staticmethod
    def make(states, initial, labels, transitions, final=None) -> "TransitionSystem":
        labs = tuple(sorted(((n, int(d)) for n, d in labels), key=_key))
        trans = tuple(sorted(set(transitions), key=_key))
        return TransitionSystem(tuple(states), initial, labs, trans, final)

    @staticmethod
    def zero() -> "TransitionSystem":
        """The stationary single-state system (the categorical zero object)."""
        return TransitionSystem(("i",), "i", (), ())

    @property
    def n_states(self) -> int:
        return len(self.states)

    def delay_of(self, name) -> int:
        for n, d in self.labels:
            if n == name:
                return d
        raise TransitionError(f"unknown label {name!r}")

    def out_transitions(self, s) -> list:
        return [t for t in self.transitions if t[0] == s]

    def __eq__(self, other):
        if not isinstance(other, TransitionSystem):
            return NotImplemented
        return (self.states, self.initial, self.labels, self.transitions, self.final) == (
            other.states, other.initial, other.labels, other.transitions, other.final)

    def to_json_obj(self) -> dict:
        return {
            "states": [_key(s) for s in self.states],
            "initial": _key(self.initial),
            "final": None if self.final is None else _key(self.final),
            "labels": [{"name": _key(n), "delay": d} for n, d in self.labels],
            "transitions": [[_key(s), _key(l), _key(t)] for s, l, t in self.transitions],
        }


def canonicalize(ts: TransitionSystem) -> TransitionSystem:
    """Rename states to 0..k-1 in BFS order from the initial state.

    Outgoing transitions are explored sorted by (label, target) repr;
    unreachable states follow in repr order.  Idempotent by construction.
    """
    order = [ts.initial]
    seen = {ts.initial}
    qpos = 0
    out_by_state = {}
    for s, l, t in ts.transitions:
        out_by_state.setdefault(s, []).append((l, t))
    while qpos < len(order):
        s = order[qpos]
        qpos += 1
        for l, t in sorted(out_by_state.get(s, []), key=_key):
            if t not in seen:
                seen.add(t)
                order.append(t)
    for s in sorted(ts.states, key=_key):
        if s not in seen:
            seen.add(s)
            order.append(s)
    rename = {s: i for i, s in enumerate(order)}
    return TransitionSystem.make(
        tuple(range(len(order))),
        rename[ts.initial],
        ts.labels,
        [(rename[s], l, rename[t]) for s, l, t in ts.transitions],
        None if ts.final is None else rename[ts.final],
    )


def _merge_labels(*label_sets) -> tuple:
    merged: dict = {}
    for labels in label_sets:
        for n, d in labels:
            if n in merged and merged[n] != d:
                raise TransitionError(f"label {n!r} carries conflicting delays")
            merged[n] = d
    return tuple(sorted(merged.items(), key=_key))


def coproduct(t1: TransitionSystem, t2: TransitionSystem) -> TransitionSystem:
    """Categorical sum: branches share one initial state, nothing else.

    When exactly one summand has a final state it survives; two finals
    are ambiguous and the result carries none.
    """
    ts, maps = coproduct_many([t1, t2])
    final = None
    if t1.final is not None and t2.final is None:
        final = maps[0][t1.final]
    elif t2.final is not None and t1.final is None:
        final = maps[1][t2.final]
    return TransitionSystem.make(ts.states, ts.initial, ts.labels, ts.transitions, final)


def coproduct_many(systems: list) -> tuple[TransitionSystem, list[dict]]:
    """n-ary coproduct plus the state embeddings of each summand."""
    init = ("i",)
    states = [init]
    maps = []
    for i, t in enumerate(systems):
        m = {}
        for s in t.states:
            m[s] = init if s == t.initial else ("c", i, s)
        maps.append(m)
        states.extend(m[s] for s in t.states if s != t.initial)
    labels = _merge_labels(*(t.labels for t in systems))
    transitions = []
    for t, m in zip(systems, maps):
        transitions.extend((m[s], l, m[d]) for s, l, d in t.transitions)
    ts = TransitionSystem.make(tuple(states), init, labels, transitions)
    return ts, maps


def product(t1: TransitionSystem, t2: TransitionSystem,
            budget: int = PRODUCT_STATE_BUDGET) -> TransitionSystem:
    """Synchronous product with idle interleavings.

    A pair transition exists iff both projections are transitions, idles
    included; the both-idle pair is the product's own implicit idle.
    """
    n = t1.n_states * t2.n_states
    if n > budget:
        raise ProductBudgetExceeded(f"{n} product states exceed budget {budget}")
    states = tuple((a, b) for a in t1.states for b in t2.states)
    labels = {}
    transitions = []
    for (s1, l1, d1) in t1.transitions:
        for (s2, l2, d2) in t2.transitions:
            labels[(l1, l2)] = 0
            transitions.append(((s1, s2), (l1, l2), (d1, d2)))
    for (s1, l1, d1) in t1.transitions:
        for b in t2.states:
            labels[(l1, IDLE)] = 0
            transitions.append(((s1, b), (l1, IDLE), (d1, b)))
    for (s2, l2, d2) in t2.transitions:
        for a in t1.states:
            labels[(IDLE, l2)] = 0
            transitions.append(((a, s2), (IDLE, l2), (a, d2)))
    final = None
    if t1.final is not None and t2.final is not None:
        final = (t1.final, t2.final)
    return TransitionSystem.make(
        states, (t1.initial, t2.initial),
        tuple(labels.items()), transitions, final)


def graft(t1: TransitionSystem, s, t2: TransitionSystem, s2,
          bridge=("e", 0), bridge_delay: int = 0) -> TransitionSystem:
    """Join t2 onto t1 by one fresh bridge transition from s to s2."""
    if s not in set(t1.states):
        raise StateNotFound(f"{s!r} not a state of the first system")
    if s2 not in set(t2.states):
        raise StateNotFound(f"{s2!r} not a state of the second system")
    m1 = {x: ("L", x) for x in t1.states}
    m2 = {x: ("R", x) for x in t2.states}
    labels = _merge_labels(t1.labels, t2.labels, ((bridge, bridge_delay),))
    transitions = [(m1[a], l, m1[b]) for a, l, b in t1.transitions]
    transitions += [(m2[a], l, m2[b]) for a, l, b in t2.transitions]
    transitions.append((m1[s], bridge, m2[s2]))
    final = None
    if t1.final is not None and t2.final is not None and s == t1.final and s2 == t2.initial:
        final = m2[t2.final]
    return TransitionSystem.make(
        tuple(m1[x] for x in t1.states) + tuple(m2[x] for x in t2.states),
        m1[t1.initial], labels, transitions, final)


def _require_final(ts: TransitionSystem, where) -> None:
    if ts.final is None:
        raise TransitionError(f"part at {where!r} must have a unique final state")


def graft_acyclic(g: DiGraph, order: list[int], parts: dict,
                  delays: dict | None = None) -> TransitionSystem:
    """Graft parts along an acyclic graph: one bridge per edge.

    States are tagged (vertex, local state); the initial state is the
    first vertex's initial, the final state the last vertex's final.
    Parallel edges each contribute their own bridge label, carrying the
    per-edge delay when one is supplied.
    """
    kahn_order(g)  # raises CycleDetected on cycles
    if sorted(order) != sorted(g.vertices):
        raise TransitionError("order must enumerate the vertices")
    pos = {v: i for i, v in enumerate(order)}
    for _, s, t in g.edges:
        if pos[s] >= pos[t]:
            raise TransitionError("order is not topological for this graph")
    delays = delays or {}
    states = []
    transitions = []
    label_sets = []
    for v in order:
        p = parts[v]
        _require_final(p, v)
        states.extend((v, x) for x in p.states)
        transitions.extend(((v, a), l, (v, b)) for a, l, b in p.transitions)
        label_sets.append(p.labels)
    bridges = []
    for eid, s, t in g.edges:
        bridges.append((("e", eid), int(delays.get(eid, 0))))
        transitions.append(((s, parts[s].final), ("e", eid), (t, parts[t].initial)))
    labels = _merge_labels(*(label_sets + [tuple(bridges)]))
    first, last = order[0], order[-1]
    return TransitionSystem.make(
        states, (first, parts[first].initial), labels, transitions,
        (last, parts[last].final))


def strong_pair_summand(g: DiGraph, parts: dict, vin: int, vout: int,
                        delays: dict | None = None) -> TransitionSystem:
    """One entry/exit summand of the strong grafting: all parts, a bridge
    per edge, initial at vin's part and final at vout's part."""
    delays = delays or {}
    states = []
    transitions = []
    label_sets = []
    for v in sorted(g.vertices):
        p = parts[v]
        _require_final(p, v)
        states.extend((v, x) for x in p.states)
        transitions.extend(((v, a), l, (v, b)) for a, l, b in p.transitions)
        label_sets.append(p.labels)
    bridges = []
    for eid, s, t in g.edges:
        bridges.append((("e", eid), int(delays.get(eid, 0))))
        transitions.append(((s, parts[s].final), ("e", eid), (t, parts[t].initial)))
    labels = _merge_labels(*(label_sets + [tuple(bridges)]))
    return TransitionSystem.make(
        states, (vin, parts[vin].initial), labels, transitions,
        (vout, parts[vout].final))


def graft_strong(g: DiGraph, parts: dict, delays: dict | None = None,
                 budget: int = STRONG_SUMMAND_BUDGET) -> TransitionSystem:
    """Grafting of a strongly connected graph: coproduct over entry/exit pairs.

    Each pair (v_in, v_out) contributes a summand with all the parts,
    bridges along every edge, initial at v_in and final at v_out.  The
    result's final state is the first summand's in the lexicographic
    pair order (the coproduct leaves the choice free).
    """
    comps = tarjan_scc(g)
    if len(comps) != 1:
        raise TransitionError("graft_strong needs a strongly connected graph")
    pairs = sorted(itertools.product(sorted(g.vertices), repeat=2))
    if len(pairs) > budget:
        raise BudgetExceeded(f"{len(pairs)} summands exceed budget {budget}")
    summands = [strong_pair_summand(g, parts, vin, vout, delays)
                for (vin, vout) in pairs]
    if len(summands) == 1:
        return summands[0]
    ts, maps = coproduct_many(summands)
    final = maps[0][summands[0].final]
    return TransitionSystem.make(ts.states, ts.initial, ts.labels, ts.transitions, final)


def _quotient_multigraph(g: DiGraph, blocks: list[list[int]]) -> DiGraph:
    """Contract each block to a vertex, keeping parallel crossing edges
    (edge ids are preserved so bridge delays can follow them)."""
    block_of = {}
    for i, b in enumerate(blocks):
        for v in b:
            block_of[v] = i
    edges = tuple((eid, block_of[s], block_of[t]) for eid, s, t in g.edges
                  if block_of[s] != block_of[t])
    return DiGraph(tuple(range(len(blocks))), edges)


def xi(g: DiGraph, phi: dict) -> TransitionSystem:
    """The computational-architecture functor on a plain directed graph.

    Strongly connected components are grafted internally over all
    entry/exit pairs, then the components are grafted along the
    condensation in Kahn order, with one bridge per original
    inter-component edge.
    """
    comps = tarjan_scc(g)
    comp_systems = {}
    for i, comp in enumerate(comps):
        vs = set(comp)
        sub = DiGraph(tuple(sorted(comp)),
                      tuple(e for e in g.edges if e[1] in vs and e[2] in vs))
        comp_systems[i] = graft_strong(sub, {v: phi[v] for v in comp})
    quo = _quotient_multigraph(g, comps)
    if len(comps) == 1:
        return comp_systems[0]
    order = kahn_order(quo)
    return graft_acyclic(quo, order, comp_systems)


@dataclass(frozen=True)
class DistributedStructure:
    """Machine partition with hub vertices, per the neuromodulation model.

    machines[i] lists the vertices of machine i; source_sets[i] and
    target_sets[i] are subsets of machine i.  The enlarged graph gains a
    hub vertex per machine; hub in-edges are the listed (source vertex,
    machine) pairs in in_delays (the source may sit in any machine,
    which is what carries neuromodulation across machines), and each hub
    sends an edge to its own machine's target vertices with the delay in
    out_delays[(machine, vertex)].  Original edges stay at delay 0.
    """

    machines: tuple
    source_sets: tuple
    target_sets: tuple
    in_delays: dict = field(default_factory=dict)
    out_delays: dict = field(default_factory=dict)

    def validate(self, g: DiGraph) -> None:
        seen = []
        for i, m in enumerate(self.machines):
            seen.extend(m)
            for v in self.source_sets[i]:
                if v not in m:
                    raise TransitionError(f"source vertex {v} outside machine {i}")
            for v in self.target_sets[i]:
                if v not in m:
                    raise TransitionError(f"target vertex {v} outside machine {i}")
        if sorted(seen) != sorted(g.vertices):
            raise TransitionError("machines must partition the vertex set")
        all_sources = {v for ss in self.source_sets for v in ss}
        for (v, i) in self.in_delays:
            if v not in all_sources:
                raise TransitionError(f"hub in-edge source {v} is not a source vertex")
            if not 0 <= i < len(self.machines):
                raise TransitionError(f"hub in-edge targets unknown machine {i}")

    def hub(self, i: int, g: DiGraph) -> int:
        return max(g.vertices) + 1 + i

    def enlarged_graph(self, g: DiGraph) -> tuple[DiGraph, dict, list[list[int]]]:
        """(G0, delay per added edge id, machine vertex blocks incl. hubs)."""
        self.validate(g)
        n_machines = len(self.machines)
        verts = list(g.vertices) + [self.hub(i, g) for i in range(n_machines)]
        edges = list(g.edges)
        delays = {}
        next_eid = (max((e[0] for e in g.edges), default=-1)) + 1
        for (v, i) in sorted(self.in_delays):
            edges.append((next_eid, v, self.hub(i, g)))
            delays[next_eid] = int(self.in_delays[(v, i)])
            next_eid += 1
        for i in range(n_machines):
            h = self.hub(i, g)
            for v in sorted(self.target_sets[i]):
                edges.append((next_eid, h, v))
                delays[next_eid] = int(self.out_delays.get((i, v), 0))
                next_eid += 1
        blocks = [sorted(list(m) + [self.hub(i, g)]) for i, m in enumerate(self.machines)]
        return DiGraph(tuple(verts), tuple(edges)), delays, blocks


def xi_t(g: DiGraph, ds: DistributedStructure, phi: dict) -> TransitionSystem:
    """Architecture functor over a distributed structure with time delays.

    Machines (with their hubs) must induce strongly connected subgraphs
    of the enlarged graph, and the machine condensation must be acyclic;
    bridge labels between machines carry the hub-edge delays.
    """
    g0, delays, blocks = ds.enlarged_graph(g)
    machine_systems = {}
    for i, block in enumerate(blocks):
        vs = set(block)
        sub = DiGraph(tuple(sorted(block)),
                      tuple(e for e in g0.edges if e[1] in vs and e[2] in vs))
        if len(tarjan_scc(sub)) != 1:
            raise MachineNotStronglyConnected(f"machine {i} is not strongly connected")
        local_delays = {eid: delays.get(eid, 0) for eid, _, _ in sub.edges}
        machine_systems[i] = graft_strong(sub, {v: phi[v] for v in block},
                                          delays=local_delays)
    quo = _quotient_multigraph(g0, blocks)
    try:
        order = kahn_order(quo)
    except CycleDetected as exc:
        raise CondensationNotAcyclic(str(exc)) from exc
    if len(blocks) == 1:
        return machine_systems[0]
    bridge_delays = {eid: delays.get(eid, 0) for eid, _, _ in quo.edges}
    return graft_acyclic(quo, order, machine_systems, delays=bridge_delays)


def language_words(ts: TransitionSystem, n: int,
                   budget: int = ENUM_BUDGET) -> list[tuple]:
    """All composable transition sequences of length n from the initial state.

    Idle transitions are materialized here; output is in a canonical
    deterministic order.
    """
    words: list[tuple] = [()]
    states = [ts.initial]
    out_by_state = {}
    for tr in ts.transitions:
        out_by_state.setdefault(tr[0], []).append(tr)
    for _ in range(n):
        nxt_words = []
        nxt_states = []
        for w, s in zip(words, states):
            options = [(s, IDLE, s)] + sorted(out_by_state.get(s, []), key=_key)
            for tr in options:
                nxt_words.append(w + (tr,))
                nxt_states.append(tr[2])
                if len(nxt_words) > budget:
                    raise EnumerationBudgetExceeded(
                        f"more than {budget} words of length <= {n}")
        words, states = nxt_words, nxt_states
    return sorted(words, key=_key)


def is_idle(tr) -> bool:
    return tr[1] == IDLE


def word_labels(word) -> tuple:
    return tuple(tr[1] for tr in word)


def time_slice(ts: TransitionSystem, word, t: int) -> tuple:
    """Labels of the word whose delay block equals t (idles drop out)."""
    out = []
    for tr in word:
        if is_idle(tr):
            continue
        if ts.delay_of(tr[1]) == t:
            out.append(tr[1])
    return tuple(out)


def extract_code(ts: TransitionSystem, n: int, budget: int = ENUM_BUDGET):
    """Binary code of length n: digit 1 where the word leaves idle.

    Duplicate codewords collapse; the all-idle word supplies the zero
    word.
    """
    from .codes import Code

    words = language_words(ts, n, budget)
    codewords = {tuple(0 if is_idle(tr) else 1 for tr in w) for w in words}
    return Code.make(n, 2, sorted(codewords))


def word_support_vertices(word) -> set:
    """Owning vertices of the states a word passes through.

    States produced by the grafting constructions are (vertex, local)
    pairs, possibly re-tagged by coproducts; the leading vertex tag is
    recovered by digging through the nesting.
    """
    def dig(state):
        if not isinstance(state, tuple) or not state:
            return None
        head = state[0]
        if head == "c" and len(state) == 3:
            return dig(state[2])
        if head in ("L", "R") and len(state) == 2:
            return dig(state[1])
        if isinstance(head, int) and len(state) == 2:
            inner = dig(state[1])
            return inner if inner is not None else head
        return None

    out = set()
    for (s, _, t) in word:
        for st in (s, t):
            v = dig(st)
            if v is not None:
                out.add(v)
    return out


def is_ts_morphism(sigma: dict, lam: dict, t1: TransitionSystem,
                   t2: TransitionSystem) -> bool:
    """Validate a morphism pair: initial preserved, transitions carried.

    lam may be partial; transitions whose label it drops impose nothing.
    """
    if sigma.get(t1.initial) != t2.initial:
        return False
    t2set = set(t2.transitions) | {(s, IDLE, s) for s in t2.states}
    for (s, l, d) in t1.transitions:
        if l not in lam:
            continue
        img = (sigma.get(s), lam[l], sigma.get(d))
        if img not in t2set:
            return False
    return True


def make_integrate_fire(levels: int) -> TransitionSystem:
    """Threshold integrate-and-fire automaton with quantized membrane levels.

    'in' climbs the membrane one level; at the top, 'spike' moves to the
    single final (fired) state.
    """
    if levels < 1:
        raise TransitionError("need at least one membrane level")
    states = tuple(f"m{i}" for i in range(levels + 1)) + ("fired",)
    transitions = [(f"m{i}", "in", f"m{i+1}") for i in range(levels)]
    transitions.append((f"m{levels}", "spike", "fired"))
    return TransitionSystem.make(states, "m0", (("in", 0), ("spike", 0)),
                                 transitions, "fired")


def single_step(label="a") -> TransitionSystem:
    """The smallest C'-object: one transition from initial to final."""
    return TransitionSystem.make(("s0", "s1"), "s0", ((label, 0),),
                                 [("s0", label, "s1")], "s1")


def ts_to_json(ts: TransitionSystem) -> str:
    import json
    return json.dumps(ts.to_json_obj(), sort_keys=True, separators=(",", ":")) + "\n"


def ts_from_json_obj(obj) -> TransitionSystem:
    """Inverse of to_json_obj for systems with string/int state names."""
    import ast

    def parse(x):
        try:
            return ast.literal_eval(x)
        except (ValueError, SyntaxError):
            return x

    states = tuple(parse(s) for s in obj["states"])
    labels = tuple((parse(l["name"]), l["delay"]) for l in obj["labels"])
    transitions = [(parse(a), parse(l), parse(b)) for a, l, b in obj["transitions"]]
    final = None if obj.get("final") is None else parse(obj["final"])
    return TransitionSystem.make(states, parse(obj["initial"]), labels, transitions, final)
