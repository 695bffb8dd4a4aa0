"""Threshold dynamics on weighted-code-valued summing functors.

States are weighted codes that grow by wedge sums every step, so they
are held as unevaluated expression DAGs (leaf / scale / wedge).  Total
weight and word counts evaluate structurally in O(DAG) without
materializing words; canonical word multisets materialize on demand
behind an explicit budget, since the flat object grows exponentially in
the step count.

A zero coupling acts as the zero endofunctor (contributes no words);
a nonzero coupling t rescales all weights of its argument by t, which
makes the classical total-weight recursion an exact theorem of the
implementation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import codes as codes_mod
from .codes import WeightedCode
from .graph import PointedDiGraph
from .netfunctors import CarrierOps, SummingFunctor, is_in_equalizer
from .resources import Measuring, real_measuring, threshold

DEFAULT_WORD_BUDGET = 200_000
DEFAULT_KEY_BUDGET = 1 << 20

VARIANT_SELF = "self"
VARIANT_PURE = "pure"


class HopfieldError(ValueError):
    pass


class DimensionMismatch(HopfieldError):
    pass


class ModeMismatch(HopfieldError):
    pass


class WordBudgetExceeded(HopfieldError):
    pass


class CodeExpr:
    """A weighted code given by an unevaluated sum/scale expression."""

    __slots__ = ("kind", "payload", "children", "_alpha", "_nwords", "_counter")

    def __init__(self, kind, payload=None, children=()):
        self.kind = kind  # "leaf" | "scale" | "wedge"
        self.payload = payload
        self.children = children
        self._alpha = None
        self._nwords = None
        self._counter = None

    @staticmethod
    def leaf(wc: WeightedCode) -> "CodeExpr":
        return CodeExpr("leaf", wc)

    @staticmethod
    def scale(t: float, child: "CodeExpr") -> "CodeExpr":
        return CodeExpr("scale", float(t), (child,))

    @staticmethod
    def wedge(children) -> "CodeExpr":
        return CodeExpr("wedge", None, tuple(children))

    def alpha(self) -> float:
        """Total weight, evaluated structurally."""
        if self._alpha is None:
            if self.kind == "leaf":
                self._alpha = codes_mod.total_weight(self.payload)
            elif self.kind == "scale":
                self._alpha = self.payload * self.children[0].alpha()
            else:
                self._alpha = float(sum(c.alpha() for c in self.children))
        return self._alpha

    def nonzero_words(self) -> int:
        """Number of nonzero word instances in the flattened object."""
        if self._nwords is None:
            if self.kind == "leaf":
                self._nwords = self.payload.size - 1
            elif self.kind == "scale":
                self._nwords = self.children[0].nonzero_words()
            else:
                self._nwords = sum(c.nonzero_words() for c in self.children)
        return self._nwords

    def counter(self, key_budget: int = DEFAULT_KEY_BUDGET) -> dict:
        """Canonical multiset {(word, weight): count} of nonzero instances.

        Counts are exact integers; the number of distinct keys is
        budgeted, not the (possibly astronomical) flat word count.
        """
        if self._counter is None:
            if self.kind == "leaf":
                acc: dict = {}
                for w, wt in self.payload.nonzero_items():
                    acc[(w, wt)] = acc.get((w, wt), 0) + 1
            elif self.kind == "scale":
                t = self.payload
                acc = {}
                for (w, wt), k in self.children[0].counter(key_budget).items():
                    key = (w, t * wt)
                    acc[key] = acc.get(key, 0) + k
            else:
                acc = {}
                for c in self.children:
                    for key, k in c.counter(key_budget).items():
                        acc[key] = acc.get(key, 0) + k
            if len(acc) > key_budget:
                raise WordBudgetExceeded(
                    f"{len(acc)} distinct (word, weight) keys exceed budget {key_budget}")
            self._counter = acc
        return self._counter

    def materialize(self, word_budget: int = DEFAULT_WORD_BUDGET) -> WeightedCode:
        """Flatten to an explicit WeightedCode; guarded by a word budget."""
        if self.nonzero_words() > word_budget:
            raise WordBudgetExceeded(
                f"{self.nonzero_words()} words exceed budget {word_budget}")
        n, q = self.shape()
        items = []
        for (w, wt), k in self.counter().items():
            items.extend([(w, wt)] * k)
        return WeightedCode.make(n, q, items)

    def shape(self) -> tuple[int, int]:
        node = self
        while node.kind != "leaf":
            if not node.children:
                raise HopfieldError("expression has no leaf to infer word length")
            node = node.children[0]
        return node.payload.n, node.payload.q


class ExprOps(CarrierOps):
    """Carrier operations for expression-valued summing functors."""

    def __init__(self, n: int, q: int = 2, key_budget: int = DEFAULT_KEY_BUDGET):
        self.n, self.q, self.key_budget = n, q, key_budget

    def zero(self):
        return CodeExpr.leaf(WeightedCode.zero(self.n, self.q))

    def add(self, a, b):
        return CodeExpr.wedge((a, b))

    def canon(self, a):
        return a

    def eq(self, a, b, tol: float = 0.0) -> bool:
        ca = a.counter(self.key_budget)
        cb = b.counter(self.key_budget)
        if sum(ca.values()) != sum(cb.values()):
            return False
        ka = sorted(ca.items())
        kb = sorted(cb.items())
        for ((wa, ta), na), ((wb, tb), nb) in zip(ka, kb):
            if wa != wb or na != nb or abs(ta - tb) > tol:
                return False
        return True


@dataclass
class HopfieldSystem:
    """Network, couplings, external inputs, variant, and threshold carrier.

    Couplings are indexed by the non-base edges in construction order;
    t[i, j] scales the contribution of edge j's state to edge i's
    update.  Zero entries contribute nothing (the zero endofunctor).
    """

    network: PointedDiGraph
    t: np.ndarray
    theta: dict  # edge id -> WeightedCode
    variant: str = VARIANT_SELF
    measuring: Measuring = field(default_factory=real_measuring)
    linear_inhibitory: bool = False

    def __post_init__(self):
        edges = self.network.edge_ids()
        self.t = np.asarray(self.t, dtype=float)
        if self.t.shape != (len(edges), len(edges)):
            raise DimensionMismatch(
                f"coupling matrix {self.t.shape} vs {len(edges)} edges")
        missing = [e for e in edges if e not in self.theta]
        if missing:
            raise DimensionMismatch(f"theta missing edges {missing}")
        if self.variant not in (VARIANT_SELF, VARIANT_PURE):
            raise HopfieldError(f"unknown variant {self.variant}")
        if self.linear_inhibitory:
            if not np.all(self.t < 0):
                raise ModeMismatch("linear-inhibitory mode requires all t < 0")
            for e in edges:
                if codes_mod.total_weight(self.theta[e]) <= 0:
                    raise ModeMismatch("linear-inhibitory mode requires theta > 0")

    @property
    def edges(self) -> tuple[int, ...]:
        return self.network.edge_ids()

    def edge_index(self) -> dict:
        return {e: i for i, e in enumerate(self.edges)}

    def theta_alpha(self) -> dict:
        return {e: codes_mod.total_weight(self.theta[e]) for e in self.edges}

    def vertex_balance_deviation(self) -> float:
        """Max deviation of the per-column vertex balance of t.

        For every vertex v and column edge e', the sum of t over rows
        leaving v must match the sum over rows entering v.
        """
        idx = self.edge_index()
        dev = 0.0
        for v in self.network.base.vertices:
            out_rows = [idx[e[0]] for e in self.network.base.edges if e[1] == v]
            in_rows = [idx[e[0]] for e in self.network.base.edges if e[2] == v]
            for j in range(len(self.edges)):
                s_out = float(sum(self.t[i, j] for i in out_rows))
                s_in = float(sum(self.t[i, j] for i in in_rows))
                dev = max(dev, abs(s_out - s_in))
        return dev


@dataclass
class HopfieldState:
    exprs: dict  # edge id -> CodeExpr
    n: int = 0

    def shape(self) -> tuple[int, int]:
        for x in self.exprs.values():
            return x.shape()
        raise HopfieldError("empty state")


def state_from_codes(sys: HopfieldSystem, assignment: dict) -> HopfieldState:
    """Wrap concrete weighted codes into an initial expression state."""
    missing = [e for e in sys.edges if e not in assignment]
    if missing:
        raise DimensionMismatch(f"initial state missing edges {missing}")
    return HopfieldState({e: CodeExpr.leaf(assignment[e]) for e in sys.edges}, 0)


def state_alphas(state: HopfieldState) -> dict:
    return {e: x.alpha() for e, x in state.exprs.items()}


def step_categorical(sys: HopfieldSystem, state: HopfieldState) -> HopfieldState:
    """One update: wedge the gated coupling sum onto (or in place of) the state.

    Per edge e the candidate Y_e wedges the t-scaled states of all
    coupled edges with the external input; the gate admits Y_e iff its
    total weight clears the resource threshold, otherwise the zero
    object is appended (with-self variant) or becomes the state (pure).
    """
    if set(state.exprs) != set(sys.edges):
        raise DimensionMismatch("state edges do not match the system")
    idx = sys.edge_index()
    edges = sys.edges
    n, q = state.shape()
    zero = CodeExpr.leaf(WeightedCode.zero(n, q))
    new = {}
    for e in edges:
        i = idx[e]
        children = []
        for ep in edges:
            tij = float(sys.t[i, idx[ep]])
            if tij != 0.0:
                children.append(CodeExpr.scale(tij, state.exprs[ep]))
        children.append(CodeExpr.leaf(sys.theta[e]))
        y = CodeExpr.wedge(children)
        gate = threshold(sys.measuring.carrier, y.alpha())
        if sys.variant == VARIANT_SELF:
            new[e] = CodeExpr.wedge((state.exprs[e], y)) if gate else state.exprs[e]
        else:
            new[e] = y if gate else zero
    return HopfieldState(new, state.n + 1)


def step_classical(sys: HopfieldSystem, alpha: dict, variant: str | None = None) -> dict:
    """The total-weight recursion with the max(0, .) gate, evaluated exactly."""
    variant = variant or sys.variant
    idx = sys.edge_index()
    th = sys.theta_alpha()
    out = {}
    for e in sys.edges:
        i = idx[e]
        drive = sum(float(sys.t[i, idx[ep]]) * alpha[ep] for ep in sys.edges) + th[e]
        gated = max(0.0, drive)
        out[e] = alpha[e] + gated if variant == VARIANT_SELF else gated
    return out


def expr_functor(sys: HopfieldSystem, state: HopfieldState,
                 key_budget: int = DEFAULT_KEY_BUDGET) -> SummingFunctor:
    n, q = state.shape()
    return SummingFunctor(sys.network, ExprOps(n, q, key_budget), dict(state.exprs))


def run(sys: HopfieldSystem, initial: HopfieldState, n_steps: int,
        check_equalizer: bool = False, tol: float = 1e-9):
    """Iterate the dynamics; returns (state trajectory, alpha trajectory).

    With check_equalizer on, every state must satisfy the vertex
    conservation law; violations raise HopfieldError.
    """
    states = [initial]
    alphas = [state_alphas(initial)]
    for _ in range(n_steps):
        nxt = step_categorical(sys, states[-1])
        states.append(nxt)
        alphas.append(state_alphas(nxt))
    if check_equalizer:
        for st in states:
            ok, report = is_in_equalizer(expr_functor(sys, st), tol)
            if not ok:
                bad = sorted(v for v, r in report.items() if not r["equal"])
                raise HopfieldError(
                    f"state at step {st.n} violates conservation at vertices {bad}")
    return states, alphas


def verify_reduction(sys: HopfieldSystem, initial: HopfieldState, n_steps: int) -> float:
    """Max deviation between structural total weights and the classical path.

    Requires the linear-inhibitory hypotheses: strictly negative
    couplings and positive external weights.
    """
    if not np.all(sys.t < 0):
        raise ModeMismatch("reduction requires all couplings strictly negative")
    for e in sys.edges:
        if codes_mod.total_weight(sys.theta[e]) <= 0:
            raise ModeMismatch("reduction requires positive theta")
    _, alphas = run(sys, initial, n_steps)
    classical = [dict(alphas[0])]
    for _ in range(n_steps):
        classical.append(step_classical(sys, classical[-1]))
    dev = 0.0
    for a_cat, a_cls in zip(alphas, classical):
        for e in sys.edges:
            dev = max(dev, abs(a_cat[e] - a_cls[e]))
    return dev


def leak_relation_residual(sys: HopfieldSystem, states: list[HopfieldState]) -> float:
    """Residual of the leak-form relation on total weights along a trajectory.

    The relation equates the wedge of consecutive states with the gated
    drive; it is not used as a dynamics (no update rule follows from
    it), only checked.  Returns max |alpha(X_{n+1}) + alpha(X_n) - gated
    drive| over steps and edges.
    """
    idx = sys.edge_index()
    th = sys.theta_alpha()
    worst = 0.0
    for st, nxt in zip(states, states[1:]):
        a = state_alphas(st)
        b = state_alphas(nxt)
        for e in sys.edges:
            i = idx[e]
            drive = sum(float(sys.t[i, idx[ep]]) * a[ep] for ep in sys.edges) + th[e]
            gated = max(0.0, drive)
            worst = max(worst, abs(b[e] + a[e] - gated))
    return worst


def word_count_identity_deviation(sys: HopfieldSystem, states: list[HopfieldState]) -> int:
    """Bookkeeping check for dense nonzero couplings in the with-self variant:
    the nonzero word count grows by the gated sum of all coupled
    word counts plus the external words."""
    if sys.variant != VARIANT_SELF:
        raise HopfieldError("word bookkeeping is stated for the with-self variant")
    idx = sys.edge_index()
    th = sys.theta_alpha()
    worst = 0
    for st, nxt in zip(states, states[1:]):
        a = state_alphas(st)
        for e in sys.edges:
            i = idx[e]
            drive = sum(float(sys.t[i, idx[ep]]) * a[ep] for ep in sys.edges) + th[e]
            gate = 1 if drive >= 0.0 else 0
            contributed = sum(st.exprs[ep].nonzero_words()
                              for ep in sys.edges if sys.t[i, idx[ep]] != 0.0)
            expected = st.exprs[e].nonzero_words() + gate * (
                contributed + (sys.theta[e].size - 1))
            worst = max(worst, abs(nxt.exprs[e].nonzero_words() - expected))
    return worst
