"""Summing functors on pointed edge/vertex sets and the vertex conservation law.

A summing functor is stored by its generator map alone (edge id to
carrier object); evaluation on any pointed subset is the iterated
categorical sum, so the empty/star-only subset lands on the zero object
by construction.  Source/target pushforwards restrict along preimages,
and the equalizer test compares canonical forms per single vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import codes as codes_mod
from .graph import PointedDiGraph


class FunctorError(ValueError):
    pass


class UnknownEdge(FunctorError):
    pass


class UndefinedSubgraph(FunctorError):
    pass


class CarrierOps:
    """Operations a target category must provide to host summing functors."""

    def zero(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def canon(self, a):
        return a

    def eq(self, a, b, tol: float = 0.0) -> bool:
        return self.canon(a) == self.canon(b)


class WeightedCodeOps(CarrierOps):
    def __init__(self, n: int, q: int = 2):
        self.n, self.q = n, q

    def zero(self):
        return codes_mod.WeightedCode.zero(self.n, self.q)

    def add(self, a, b):
        return codes_mod.wedge_sum(a, b)

    def eq(self, a, b, tol: float = 0.0) -> bool:
        if a.n != b.n or a.q != b.q or a.size != b.size:
            return False
        for (w1, t1), (w2, t2) in zip(a.items, b.items):
            if w1 != w2 or abs(t1 - t2) > tol:
                return False
        return True


class CodeOps(CarrierOps):
    def __init__(self, n: int, q: int = 2):
        self.n, self.q = n, q

    def zero(self):
        return codes_mod.Code.zero(self.n, self.q)

    def add(self, a, b):
        return codes_mod.wedge_sum(a, b)


class DimensionOps(CarrierOps):
    """Non-negative integers under addition (dimension-valued assignments)."""

    def zero(self):
        return 0

    def add(self, a, b):
        return a + b


class TransitionSystemOps(CarrierOps):
    """Transition systems under coproduct, compared in canonical form."""

    def zero(self):
        from .transitions import TransitionSystem
        return TransitionSystem.zero()

    def add(self, a, b):
        from .transitions import coproduct
        return coproduct(a, b)

    def canon(self, a):
        from .transitions import canonicalize
        return canonicalize(a)

    def eq(self, a, b, tol: float = 0.0) -> bool:
        return self.canon(a) == self.canon(b)


@dataclass
class SummingFunctor:
    """Generator-backed summing functor on the pointed edges (or vertices).

    gen maps a non-base index to a carrier object; indices absent from
    gen evaluate to the zero object.
    """

    network: PointedDiGraph
    ops: CarrierOps
    gen: dict
    over_edges: bool = True

    def _universe(self) -> set:
        if self.over_edges:
            return set(self.network.edge_ids())
        return set(self.network.base.vertices)

    def _star(self):
        return self.network.star_edge if self.over_edges else self.network.star_vertex

    def eval(self, subset) -> object:
        """Canonical-form sum of generator values over subset minus the star."""
        subset = set(subset)
        star = self._star()
        bad = subset - self._universe() - {star}
        if bad:
            raise UnknownEdge(f"indices {sorted(bad)} outside the pointed set")
        total = self.ops.zero()
        for idx in sorted(subset - {star}):
            if idx in self.gen:
                total = self.ops.add(total, self.gen[idx])
        return self.ops.canon(total)


def pushforward(phi: SummingFunctor, which: str) -> SummingFunctor:
    """Source or target pushforward: value at A is eval on the preimage of A."""
    if not phi.over_edges:
        raise FunctorError("pushforward starts from an edge functor")
    if which not in ("source", "target"):
        raise FunctorError("which must be 'source' or 'target'")
    pos = 1 if which == "source" else 2
    gen = {}
    for v in phi.network.base.vertices:
        pre = [e[0] for e in phi.network.base.edges if e[pos] == v]
        gen[v] = phi.eval(set(pre) | {phi.network.star_edge})
    return SummingFunctor(phi.network, phi.ops, gen, over_edges=False)


def is_in_equalizer(phi: SummingFunctor, tol: float = 0.0):
    """Conservation law at vertices: incoming sum equals outgoing sum.

    By the summing property the single-vertex check suffices; returns
    (verdict, per-vertex report).
    """
    src = pushforward(phi, "source")
    tgt = pushforward(phi, "target")
    report = {}
    ok = True
    for v in phi.network.base.vertices:
        a, b = src.gen[v], tgt.gen[v]
        same = phi.ops.eq(a, b, tol)
        report[v] = {"outgoing": a, "incoming": b, "equal": same}
        ok = ok and same
    return ok, report


def inclusion_exclusion_check(assign: dict, g1: frozenset, g2: frozenset) -> bool:
    """dim(g1 & g2) + dim(g1 | g2) == dim(g1) + dim(g2) for subgraph keys."""
    keys = [g1, g2, g1 & g2, g1 | g2]
    for k in keys:
        if k not in assign:
            raise UndefinedSubgraph(f"no dimension assigned to {sorted(k)}")
    return assign[g1 & g2] + assign[g1 | g2] == assign[g1] + assign[g2]


def entropy_bound_report(phi: SummingFunctor, chains: list[list[set]]):
    """Diagnostic for the nested-subset entropy bound on code carriers.

    For each chain A_0 subset A_1 subset ... reports the entropy of the
    instance distribution per level and the smallest multiplier lam with
    S(P_A) <= lam * S(P_A') across consecutive levels.  Entropy is not
    monotone under the wedge embeddings, so nothing is asserted here.
    """
    from .information import shannon_entropy_of_masses

    rows = []
    lam_max = 1.0
    for chain in chains:
        ents = []
        for subset in chain:
            val = phi.eval(subset)
            code = val.code() if isinstance(val, codes_mod.WeightedCode) else val
            try:
                masses = [m for m in codes_mod.probability(code).values()]
                ents.append(shannon_entropy_of_masses(masses))
            except codes_mod.CodeError:
                ents.append(0.0)
        rows.append(ents)
        for s_small, s_big in zip(ents, ents[1:]):
            if s_big > 0:
                lam_max = max(lam_max, s_small / s_big)
    return {"entropies": rows, "lambda_max": lam_max}
