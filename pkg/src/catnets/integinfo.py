"""Geometric integrated information over factorized approximation families.

The disconnected family for a partition keeps the input marginal fixed
and routes each block's outputs through a conditional channel that sees
only the same block's inputs.  KL projection onto that family decouples
per block, so block-coordinate descent converges in one sweep; a grid
oracle bounds the modeling gap in the tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graph import DiGraph, rng_for
from .information import JointDistribution, kl

SMOOTH_EPS = 1e-12


class IntegInfoError(ValueError):
    pass


class AxisMismatch(IntegInfoError):
    pass


class TooManyUnits(IntegInfoError):
    pass


class NoConvergence(IntegInfoError):
    pass


@dataclass(frozen=True)
class SystemPartition:
    """Blocks over unit indices 0..n-1, applied jointly to X and Y axes."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        flat = [u for b in self.blocks for u in b]
        if not flat or sorted(flat) != list(range(len(flat))):
            raise IntegInfoError("blocks must partition 0..n-1")
        for b in self.blocks:
            if tuple(sorted(b)) != b or not b:
                raise IntegInfoError("blocks must be sorted and nonempty")
        if tuple(sorted(self.blocks, key=lambda b: b[0])) != self.blocks:
            raise IntegInfoError("blocks must be sorted by first element")

    @staticmethod
    def make(blocks) -> "SystemPartition":
        bs = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
        return SystemPartition(bs)

    @property
    def n_units(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def encoding(self) -> tuple[int, ...]:
        """Restricted-growth encoding, the deterministic tie-break key."""
        owner = {}
        for i, b in enumerate(self.blocks):
            for u in b:
                owner[u] = i
        out = []
        seen = {}
        for u in range(self.n_units):
            blk = owner[u]
            if blk not in seen:
                seen[blk] = len(seen)
            out.append(seen[blk])
        return tuple(out)


def all_partitions(n: int) -> list[SystemPartition]:
    """Every set partition of n units with at least 2 blocks."""
    def rec(units):
        if not units:
            yield []
            return
        first, rest = units[0], units[1:]
        for k in range(len(rest) + 1):
            for members in itertools.combinations(rest, k):
                remaining = [u for u in rest if u not in members]
                for tail in rec(remaining):
                    yield [(first,) + members] + tail
    parts = [SystemPartition.make(bs) for bs in rec(list(range(n)))]
    return sorted((p for p in parts if p.n_blocks >= 2),
                  key=lambda p: p.encoding())


def bipartitions(n: int) -> list[SystemPartition]:
    """Unordered two-block partitions of n units."""
    out = []
    rest = list(range(1, n))
    for k in range(0, n - 1):
        for members in itertools.combinations(rest, k):
            side = (0,) + members
            other = tuple(u for u in range(n) if u not in side)
            out.append(SystemPartition.make([side, other]))
    return sorted(out, key=lambda p: p.encoding())


@dataclass
class ProjectionResult:
    q_star: JointDistribution
    kl_value: float
    constraint_residual: float
    iterations: int
    smoothed: bool = False


def _split_axes(p: JointDistribution) -> int:
    n2 = len(p.axes)
    if n2 % 2 != 0:
        raise AxisMismatch("need paired (X_i, Y_i) axes")
    n = n2 // 2
    for i in range(n):
        if p.axes[i][0] != f"x{i}" or p.axes[n + i][0] != f"y{i}":
            raise AxisMismatch("axes must be named x0..x{n-1}, y0..y{n-1} in order")
    return n


def make_xy_joint(x_sizes, probs) -> JointDistribution:
    n = len(x_sizes)
    axes = [(f"x{i}", x_sizes[i]) for i in range(n)] + \
           [(f"y{i}", x_sizes[i]) for i in range(n)]
    return JointDistribution.make(axes, probs)


def manifold_residual(q: JointDistribution, lam: SystemPartition) -> float:
    """Max deviation of Q(Y_B | X) from Q(Y_B | X_B) over supported X."""
    n = _split_axes(q)
    if lam.n_units != n:
        raise AxisMismatch(f"partition over {lam.n_units} units, joint has {n}")
    nd = q.nd()
    y_axes = tuple(range(n, 2 * n))
    qx = nd.sum(axis=y_axes)
    worst = 0.0
    for block in lam.blocks:
        k = len(block)
        yb = tuple(n + u for u in block)
        other_y = tuple(a for a in y_axes if a not in yb)
        # axes of the reductions keep their original relative order:
        # all x axes first, then the kept y_B axes
        q_x_yb = nd.sum(axis=other_y) if other_y else nd
        with np.errstate(divide="ignore", invalid="ignore"):
            cond_full = np.where(
                qx.reshape(qx.shape + (1,) * k) > 0,
                q_x_yb / np.where(qx > 0, qx, 1.0).reshape(qx.shape + (1,) * k),
                0.0)
        other_x = tuple(u for u in range(n) if u not in block)
        q_xb_yb = q_x_yb.sum(axis=other_x) if other_x else q_x_yb
        q_xb = qx.sum(axis=other_x) if other_x else qx
        with np.errstate(divide="ignore", invalid="ignore"):
            cond_block = np.where(
                q_xb.reshape(q_xb.shape + (1,) * k) > 0,
                q_xb_yb / np.where(q_xb > 0, q_xb, 1.0).reshape(q_xb.shape + (1,) * k),
                0.0)
        # broadcast the block conditional over the dropped x axes
        expand = [nd.shape[u] if u in block else 1 for u in range(n)]
        expand += [nd.shape[a] for a in yb]
        cond_block_b = cond_block.reshape(expand)
        mask = (qx > 0).reshape(qx.shape + (1,) * k)
        diff = np.abs(np.where(mask, cond_full - cond_block_b, 0.0))
        worst = max(worst, float(diff.max()))
    return worst


def _block_factor(p_nd: np.ndarray, n: int, block: tuple[int, ...]):
    """Conditional marginal P(y_B | x_B) as an ndarray over (x_B, y_B)."""
    axes_keep = tuple(block) + tuple(n + u for u in block)
    drop = tuple(a for a in range(2 * n) if a not in axes_keep)
    marg = p_nd.sum(axis=drop) if drop else p_nd.copy()
    k = len(block)
    x_mass = marg.sum(axis=tuple(range(k, 2 * k)), keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(x_mass > 0, marg / np.where(x_mass > 0, x_mass, 1.0), 0.0)
    return cond


def _assemble(p_nd: np.ndarray, n: int, lam: SystemPartition, factors: dict) -> np.ndarray:
    """Q(x, y) = P_X(x) * prod_B q_B(y_B | x_B), broadcast to the full shape."""
    y_axes = tuple(range(n, 2 * n))
    px = p_nd.sum(axis=y_axes)
    q = px.reshape(px.shape + (1,) * n).astype(float)
    for block in lam.blocks:
        fac = factors[block]
        shape = [1] * (2 * n)
        for j, u in enumerate(block):
            shape[u] = fac.shape[j]
        for j, u in enumerate(block):
            shape[n + u] = fac.shape[len(block) + j]
        q = q * fac.reshape(shape)
    return q


def project(p: JointDistribution, lam: SystemPartition, tol: float = 1e-8,
            max_iter: int = 50) -> ProjectionResult:
    """KL projection onto the factorized disconnected family.

    Block-coordinate updates land each factor on the block conditional
    marginal; the loop certifies stationarity by sweeping until factors
    stop moving (normally after one sweep).
    """
    n = _split_axes(p)
    if lam.n_units != n:
        raise AxisMismatch(f"partition over {lam.n_units} units, joint has {n}")
    nd = p.nd().astype(float)
    smoothed = False
    if np.any(nd <= 0):
        nd = nd + SMOOTH_EPS
        nd /= nd.sum()
        smoothed = True
    factors = {}
    for block in lam.blocks:
        k = len(block)
        shape = tuple(nd.shape[u] for u in block) + tuple(nd.shape[n + u] for u in block)
        y_size = int(np.prod(shape[k:])) if k else 1
        factors[block] = np.full(shape, 1.0 / y_size)
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        delta = 0.0
        for block in lam.blocks:
            new = _block_factor(nd, n, block)
            delta = max(delta, float(np.abs(new - factors[block]).max()))
            factors[block] = new
        if delta <= tol:
            break
    else:
        raise NoConvergence(f"projection did not settle in {max_iter} sweeps")
    q_nd = _assemble(nd, n, lam, factors)
    q = JointDistribution(p.axes, q_nd.reshape(-1))
    value = kl(nd.reshape(-1), q_nd.reshape(-1))
    residual = manifold_residual(q, lam)
    return ProjectionResult(q, float(value), float(residual), iterations, smoothed)


def ii_lambda(p: JointDistribution, lam: SystemPartition, tol: float = 1e-8) -> float:
    """Integrated information for one partition: the projected KL value."""
    return project(p, lam, tol).kl_value


def ii(p: JointDistribution, partitions: str = "auto", cap: int | None = None,
       tol: float = 1e-8) -> tuple[float, SystemPartition]:
    """Minimum of ii_lambda over enumerated partitions, with the minimizer.

    partitions: "all" (every set partition, Bell guard), "bi"
    (bipartitions), or "auto" (all for <= 4 units, bipartitions above).
    Ties break lexicographically on the partition encoding.
    """
    n = _split_axes(p)
    if partitions == "auto":
        partitions = "all" if n <= 4 else "bi"
    if partitions == "all":
        limit = cap if cap is not None else 6
        if n > limit:
            raise TooManyUnits(f"{n} units exceed cap {limit} for full enumeration")
        lams = all_partitions(n)
    elif partitions == "bi":
        limit = cap if cap is not None else 16
        if n > limit:
            raise TooManyUnits(f"{n} units exceed cap {limit}")
        lams = bipartitions(n)
    else:
        raise IntegInfoError(f"unknown partition mode {partitions}")
    if not lams:
        raise IntegInfoError("no non-trivial partitions for a single unit")
    best = None
    for lam in lams:
        val = ii_lambda(p, lam, tol)
        key = (val, lam.encoding())
        if best is None or key < best[0]:
            best = (key, lam)
    (val, _), lam = best
    return float(val), lam


@dataclass
class PythagoreanReport:
    deviations: list[float]
    max_signed_deviation: float
    minimizer_ok: bool


def pythagorean_check(p: JointDistribution, lam: SystemPartition,
                      r_samples: int = 100, seed: int = 0) -> PythagoreanReport:
    """Sample family members R and report KL(P||R) - KL(P||Q*) - KL(Q*||R).

    The minimizer inequality KL(P||R) >= KL(P||Q*) is asserted up to
    1e-8; the exact three-point identity is reported, not asserted,
    since the factorized family need not exhaust the constraint set.
    """
    n = _split_axes(p)
    res = project(p, lam)
    nd = p.nd().astype(float)
    if res.smoothed:
        nd = nd + SMOOTH_EPS
        nd /= nd.sum()
    rng = rng_for(seed)
    devs = []
    ok = True
    for _ in range(r_samples):
        factors = {}
        for block in lam.blocks:
            k = len(block)
            shape = tuple(nd.shape[u] for u in block) + tuple(nd.shape[n + u] for u in block)
            x_cells = int(np.prod(shape[:k]))
            y_cells = int(np.prod(shape[k:]))
            rows = rng.gamma(1.0, size=(x_cells, y_cells)) + 1e-9
            rows /= rows.sum(axis=1, keepdims=True)
            factors[block] = rows.reshape(shape)
        r_nd = _assemble(nd, n, lam, factors)
        kl_pr = kl(nd.reshape(-1), r_nd.reshape(-1))
        kl_qr = kl(res.q_star.probs, r_nd.reshape(-1))
        dev = kl_pr - res.kl_value - kl_qr
        devs.append(float(dev))
        if kl_pr < res.kl_value - 1e-8:
            ok = False
    worst = max(devs, key=abs) if devs else 0.0
    return PythagoreanReport(devs, float(worst), ok)


def causal_closure_partition(g: DiGraph) -> SystemPartition:
    """Finest unit partition whose blocks contain every unit's parents.

    Built by union-find over {v} cup parents(v); for a feedforward
    update this is exactly the partition in which the joint factorizes,
    so integrated information vanishes on it.  On a fully connected
    multilayer stack it collapses to one block (the vacuous constraint).
    """
    parent = {v: v for v in g.vertices}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for _, s, t in g.edges:
        union(s, t)
    groups: dict[int, list[int]] = {}
    order = {v: i for i, v in enumerate(sorted(g.vertices))}
    for v in g.vertices:
        groups.setdefault(find(v), []).append(order[v])
    return SystemPartition.make(groups.values())


def mlp_update_bits(g: DiGraph, x_bits: tuple[int, ...]) -> tuple[int, ...]:
    """Deterministic layer-wise threshold update: majority of parents,
    copy-through on parentless (input) units."""
    order = {v: i for i, v in enumerate(sorted(g.vertices))}
    parents = {v: [] for v in g.vertices}
    for _, s, t in g.edges:
        parents[t].append(s)
    out = []
    for v in sorted(g.vertices):
        ps = parents[v]
        if not ps:
            out.append(x_bits[order[v]])
        else:
            total = sum(x_bits[order[p]] for p in ps)
            out.append(1 if 2 * total >= len(ps) else 0)
    return tuple(out)


def binary_map_joint(n_units: int, fn, eps: float, center=None) -> JointDistribution:
    """Exact joint of (X, Y): X a product of flips around a center (or
    uniform when center is None), Y the image of X with i.i.d. output
    flips at rate eps."""
    if not 0.0 < eps <= 0.5:
        raise IntegInfoError("flip noise must lie in (0, 0.5]")
    size = 1 << n_units
    probs = np.zeros((size, size))
    for xi in range(size):
        x_bits = tuple((xi >> (n_units - 1 - k)) & 1 for k in range(n_units))
        if center is None:
            px = 1.0 / size
        else:
            mism = sum(1 for a, b in zip(x_bits, center) if a != b)
            px = (eps ** mism) * ((1.0 - eps) ** (n_units - mism))
        det = fn(x_bits)
        for yi in range(size):
            y_bits = tuple((yi >> (n_units - 1 - k)) & 1 for k in range(n_units))
            mism = sum(1 for a, b in zip(y_bits, det) if a != b)
            probs[xi, yi] = px * (eps ** mism) * ((1.0 - eps) ** (n_units - mism))
    flat = _interleave_xy(probs, n_units)
    return make_xy_joint([2] * n_units, flat)


def _interleave_xy(joint_xy: np.ndarray, n: int) -> np.ndarray:
    """Reshape a (2^n x 2^n) table into the flat (x0..x_{n-1}, y0..y_{n-1})
    row-major layout."""
    nd = joint_xy.reshape((2,) * (2 * n))
    return nd.reshape(-1)


def feedforward_ii(g: DiGraph, eps: float, seed: int = 0) -> float:
    """Integrated information of one update of a feedforward stack.

    Uniform inputs, majority-threshold update with flip noise, and the
    causal-closure partition; the joint lies on the factorized family by
    construction, so the value is numerically zero.
    """
    n_units = g.n_vertices
    if n_units > 10:
        raise TooManyUnits(f"{n_units} units exceed the exact-enumeration cap")
    joint = binary_map_joint(n_units, lambda xb: mlp_update_bits(g, xb), eps)
    lam = causal_closure_partition(g)
    return ii_lambda(joint, lam)


def recurrent_xor_joint(eps: float) -> JointDistribution:
    """2-unit control: both outputs compute the noisy XOR of both inputs."""
    def fn(xb):
        v = xb[0] ^ xb[1]
        return (v, v)
    return binary_map_joint(2, fn, eps)


def hopfield_ii_trace(sys, initial, steps: int, theta_b: float, eps: float,
                      seed: int = 0, partitions: str = "bi") -> list[tuple[float, SystemPartition]]:
    """Per-step integrated information of the binarized weight dynamics.

    At each step the edge weights binarize at theta_b; the joint couples
    a flip-noise neighborhood of the current binary state with its image
    under one binarized classical update.  Exact enumeration caps at 10
    edges.
    """
    from .hopfield import run, step_classical

    if eps <= 0.0:
        raise IntegInfoError("flip noise must be positive: the deterministic "
                             "joint has degenerate support")
    edges = sys.edges
    n_units = len(edges)
    if n_units > 10:
        raise TooManyUnits(f"{n_units} edges exceed the exact-enumeration cap")
    _, alphas = run(sys, initial, steps)

    def gmap(bits):
        alpha = {e: float(b) for e, b in zip(edges, bits)}
        nxt = step_classical(sys, alpha)
        return tuple(1 if nxt[e] > theta_b else 0 for e in edges)

    series = []
    for n in range(steps):
        center = tuple(1 if alphas[n][e] > theta_b else 0 for e in edges)
        joint = binary_map_joint(n_units, gmap, eps, center=center)
        val, lam = ii(joint, partitions=partitions)
        series.append((float(val), lam))
    return series
