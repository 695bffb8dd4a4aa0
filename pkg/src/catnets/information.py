"""Finite joint distributions, entropy deformations, and the cocycle calculus.

Variables are partitions of a flat outcome space; the semigroup action
sends a cochain to its conditional evaluation weighted by block masses
raised to alpha.  Conventions 0 log 0 = 0 and 0^alpha = 0 are fixed
globally.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

PROB_TOL = 1e-12


class InformationError(ValueError):
    pass


class InvalidAlpha(InformationError):
    pass


class SupportViolation(InformationError):
    pass


@dataclass(frozen=True)
class JointDistribution:
    """Probabilities over a named product outcome space, flat row-major."""

    axes: tuple[tuple[str, int], ...]
    probs: np.ndarray

    def __post_init__(self):
        size = 1
        for _, k in self.axes:
            size *= k
        p = np.asarray(self.probs, dtype=float).reshape(-1)
        if p.size != size:
            raise InformationError(f"{p.size} entries for outcome space of size {size}")
        if np.any(p < -PROB_TOL):
            raise InformationError("negative probabilities")
        if abs(float(p.sum()) - 1.0) > 1e-9:
            raise InformationError(f"probabilities sum to {p.sum()}")
        object.__setattr__(self, "probs", np.maximum(p, 0.0))

    @staticmethod
    def make(axes, probs) -> "JointDistribution":
        return JointDistribution(tuple((str(n), int(k)) for n, k in axes),
                                 np.asarray(probs, dtype=float))

    @property
    def size(self) -> int:
        return self.probs.size

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.axes)

    def nd(self) -> np.ndarray:
        return self.probs.reshape(self.shape)

    def axis_index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.axes):
            if n == name:
                return i
        raise InformationError(f"no axis named {name}")

    def to_json(self) -> str:
        obj = {"axes": [{"name": n, "size": k} for n, k in self.axes],
               "probs": [float(x) for x in self.probs]}
        return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"

    @staticmethod
    def from_json(text: str) -> "JointDistribution":
        obj = json.loads(text)
        return JointDistribution.make(
            [(a["name"], a["size"]) for a in obj["axes"]], obj["probs"])


@dataclass(frozen=True)
class VariableSpec:
    """A coarse-graining of the outcome space: block label per flat outcome."""

    labels: tuple[int, ...]
    n_blocks: int

    def __post_init__(self):
        if sorted(set(self.labels)) != list(range(self.n_blocks)):
            raise InformationError("labels must be a surjection onto 0..n_blocks-1")

    @staticmethod
    def from_axis(dist: JointDistribution, name: str) -> "VariableSpec":
        """The coordinate projection onto one axis."""
        i = dist.axis_index(name)
        shape = dist.shape
        labels = []
        for idx in itertools.product(*(range(k) for k in shape)):
            labels.append(idx[i])
        return VariableSpec(tuple(labels), shape[i])

    @staticmethod
    def from_axes(dist: JointDistribution, names) -> "VariableSpec":
        """Joint projection onto several axes."""
        idxs = [dist.axis_index(n) for n in names]
        shape = dist.shape
        sizes = [shape[i] for i in idxs]
        labels = []
        for idx in itertools.product(*(range(k) for k in shape)):
            flat = 0
            for i, k in zip(idxs, sizes):
                flat = flat * k + idx[i]
            labels.append(flat)
        return VariableSpec(tuple(labels), int(np.prod(sizes)) if sizes else 1)

    @staticmethod
    def from_function(dist: JointDistribution, fn) -> "VariableSpec":
        """Level sets of an arbitrary function of the flat outcome index."""
        values = [fn(i) for i in range(dist.size)]
        order = sorted(set(values), key=lambda v: (str(type(v)), str(v)))
        pos = {v: i for i, v in enumerate(order)}
        return VariableSpec(tuple(pos[v] for v in values), len(order))

    @staticmethod
    def collapse(dist: JointDistribution) -> "VariableSpec":
        """The terminal variable with a single value."""
        return VariableSpec((0,) * dist.size, 1)

    def meet(self, other: "VariableSpec") -> "VariableSpec":
        """Joint measurement: the common refinement of the two partitions."""
        pairs = list(zip(self.labels, other.labels))
        order = sorted(set(pairs))
        pos = {p: i for i, p in enumerate(order)}
        return VariableSpec(tuple(pos[p] for p in pairs), len(order))

    def is_coarsening_of(self, other: "VariableSpec") -> bool:
        """True iff this variable's value is determined by the other's."""
        seen = {}
        for mine, theirs in zip(self.labels, other.labels):
            if theirs in seen and seen[theirs] != mine:
                return False
            seen[theirs] = mine
        return True

    def pushforward(self, dist: JointDistribution) -> np.ndarray:
        masses = np.zeros(self.n_blocks)
        np.add.at(masses, np.asarray(self.labels), dist.probs)
        return masses

    def conditional(self, dist: JointDistribution, block: int) -> JointDistribution:
        """The normalized restriction of the distribution to one block."""
        mask = np.asarray(self.labels) == block
        mass = float(dist.probs[mask].sum())
        if mass <= 0.0:
            raise InformationError(f"conditioning on a null block {block}")
        p = np.where(mask, dist.probs, 0.0) / mass
        return JointDistribution(dist.axes, p)


def shannon_entropy_of_masses(masses) -> float:
    p = np.asarray(list(masses), dtype=float)
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def entropy(p, alpha: float = 1.0) -> float:
    """Tsallis entropy of order alpha; alpha = 1 is the Shannon entropy."""
    if alpha <= 0:
        raise InvalidAlpha(f"alpha={alpha} must be positive")
    masses = p.probs if isinstance(p, JointDistribution) else np.asarray(p, dtype=float)
    if alpha == 1.0:
        return shannon_entropy_of_masses(masses)
    m = masses[masses > 0]
    return float((1.0 - (m ** alpha).sum()) / (alpha - 1.0))


def kl(p, q, alpha: float = 1.0) -> float:
    """KL divergence and its one-parameter deformation.

    alpha = 1 gives sum p log(p/q); otherwise
    (1/(1-alpha)) sum p ((p/q)^(1-alpha) - 1).
    """
    if alpha <= 0:
        raise InvalidAlpha(f"alpha={alpha} must be positive")
    pm = p.probs if isinstance(p, JointDistribution) else np.asarray(p, dtype=float)
    qm = q.probs if isinstance(q, JointDistribution) else np.asarray(q, dtype=float)
    if pm.shape != qm.shape:
        raise InformationError("shapes differ")
    bad = (pm > 0) & (qm <= 0)
    if np.any(bad):
        raise SupportViolation("support of p is not contained in support of q")
    sel = pm > 0
    pp, qq = pm[sel], qm[sel]
    if alpha == 1.0:
        return float((pp * np.log(pp / qq)).sum())
    return float((pp * ((pp / qq) ** (1.0 - alpha) - 1.0)).sum() / (1.0 - alpha))


def variable_entropy(var: VariableSpec, p: JointDistribution, alpha: float = 1.0) -> float:
    """Entropy of the pushforward distribution of a variable."""
    return entropy(var.pushforward(p), alpha)


def sigma_action(y: VariableSpec, f, p: JointDistribution, alpha: float = 1.0) -> float:
    """Semigroup action: sum over blocks of mass^alpha times f(conditional)."""
    masses = y.pushforward(p)
    total = 0.0
    for b in range(y.n_blocks):
        m = float(masses[b])
        if m <= 0.0:
            continue
        total += (m ** alpha) * f(y.conditional(p, b))
    return float(total)


def coboundary0(f, x1: VariableSpec, p: JointDistribution, alpha: float = 1.0) -> float:
    """Degree-0 coboundary: (X1 . f)(P) - f(P)."""
    return sigma_action(x1, f, p, alpha) - f(p)


def coboundary1(f, x1: VariableSpec, x2: VariableSpec, p: JointDistribution,
                alpha: float = 1.0) -> float:
    """Degree-1 coboundary: (X1 . f[X2]) - f[X1 ^ X2] + f[X1]."""
    first = sigma_action(x1, lambda q: f(x2, q), p, alpha)
    return first - f(x1.meet(x2), p) + f(x1, p)


def coboundary2(g, x1: VariableSpec, x2: VariableSpec, x3: VariableSpec,
                p: JointDistribution, alpha: float = 1.0) -> float:
    """Degree-2 coboundary, used only for the delta-squared sanity check."""
    first = sigma_action(x1, lambda q: g(x2, x3, q), p, alpha)
    return (first - g(x1.meet(x2), x3, p) + g(x1, x2.meet(x3), p) - g(x1, x2, p))


def tsallis_cochain(alpha: float):
    """The degree-1 entropy cochain f[X](P) = S_alpha(X_* P)."""

    def f(var: VariableSpec, p: JointDistribution) -> float:
        return variable_entropy(var, p, alpha)

    return f


def delta_squared(f0, x1: VariableSpec, x2: VariableSpec, p: JointDistribution,
                  alpha: float = 1.0) -> float:
    """delta(delta f) for a degree-0 cochain, evaluated at [X1|X2]."""

    def df(var: VariableSpec, q: JointDistribution) -> float:
        return coboundary0(f0, var, q, alpha)

    return coboundary1(df, x1, x2, p, alpha)


def surjective_pushforward_deficit(var: VariableSpec, p: JointDistribution) -> tuple[float, float]:
    """(S(P) - S(var_* P), fiberwise conditional entropy sum).

    For surjective coarse-grainings with probability fibers the two
    agree: the entropy drop equals sum_y Q(y) S(fiber | y).
    """
    s_full = entropy(p, 1.0)
    masses = var.pushforward(p)
    s_push = entropy(masses, 1.0)
    deficit = 0.0
    for b in range(var.n_blocks):
        m = float(masses[b])
        if m <= 0:
            continue
        cond = var.conditional(p, b)
        deficit += m * entropy(cond, 1.0)
    return s_full - s_push, deficit


def code_to_outcomes(c):
    """Outcome space of a code: its word instances, zero word first.

    Returns (outcomes, b_variable_builder) where outcomes is the tuple
    of (word, instance) pairs and the builder turns any function on
    instances that vanishes on the zero word into a VariableSpec over a
    distribution on this space.
    """
    from .codes import ones_count

    z = (0,) * c.n
    outcomes = []
    counts: dict = {}
    for w in c.words:
        i = counts.get(w, 0)
        counts[w] = i + 1
        outcomes.append((w, i))
    outcomes.sort(key=lambda wi: (wi[0] != z, wi[0], wi[1]))

    def variable(dist: JointDistribution, fn=None) -> VariableSpec:
        if dist.size != len(outcomes):
            raise InformationError("distribution does not live on this code's outcomes")
        fn = fn or (lambda word, inst: ones_count(word))
        def wrapped(i):
            word, inst = outcomes[i]
            value = 0 if word == z else fn(word, inst)
            return value
        return VariableSpec.from_function(dist, wrapped)

    return outcomes, variable


def code_distribution(c) -> JointDistribution:
    """The instance-level code probability as a flat distribution."""
    from .codes import probability

    outcomes, _ = code_to_outcomes(c)
    masses = probability(c)
    probs = [masses[o] for o in outcomes]
    return JointDistribution.make([("word", len(outcomes))], probs)


def qx_complex(code=None, graph=None, max_dim: int = 8):
    """Combinatorial shadow of the probability-functor simplicial set.

    A code source yields its nerve; a graph source yields the directed
    clique complex, cross-checked against an independent subset-by-subset
    clique enumeration.
    """
    from . import simplicial as simp

    if (code is None) == (graph is None):
        raise InformationError("give exactly one of code or graph")
    if code is not None:
        return simp.code_nerve(code)
    k = simp.directed_flag_complex(graph, max_dim)
    brute = _brute_directed_cliques(graph, max_dim)
    if brute != k:
        raise InformationError("flag-complex construction paths disagree")
    return k


def _brute_directed_cliques(g, max_dim: int):
    """Independent directed-clique enumeration over all vertex subsets."""
    from . import simplicial as simp

    adj = {v: set() for v in g.vertices}
    for _, s, t in g.edges:
        adj[s].add(t)
    accepted = [(v,) for v in g.vertices]
    verts = sorted(g.vertices)
    for size in range(2, max_dim + 2):
        for sub in itertools.combinations(verts, size):
            for perm in itertools.permutations(sub):
                if all(perm[j] in adj[perm[i]]
                       for i in range(size) for j in range(i + 1, size)):
                    accepted.append(sub)
                    break
    return simp.SimplicialComplex.from_simplices(accepted)
