"""Flag complexes, code nerves, field homology, and persistence.

Homology over a field stands in for homotopy groups throughout: we
compute beta_k = dim ker d_k - rank d_{k+1} from boundary ranks, over
GF(2) (bitmask elimination) or over the rationals (exact fractions).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .graph import DiGraph, NotSimple

GF2 = "GF2"
Q = "Q"

INF = float("inf")


class SimplicialError(ValueError):
    pass


class NonBinary(SimplicialError):
    pass


class NonMonotone(SimplicialError):
    pass


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplices per dimension, stored as canonically sorted vertex tuples."""

    simplices: tuple[tuple[tuple[int, ...], ...], ...]  # [dim][i] -> vertex tuple

    def __post_init__(self):
        stored = set()
        for d, level in enumerate(self.simplices):
            for s in level:
                if len(s) != d + 1 or tuple(sorted(set(s))) != s:
                    raise SimplicialError(f"malformed simplex {s} in dim {d}")
                stored.add(s)
        for d, level in enumerate(self.simplices):
            if d == 0:
                continue
            for s in level:
                for f in itertools.combinations(s, d):
                    if f not in stored:
                        raise SimplicialError(f"missing face {f} of {s}")

    @staticmethod
    def from_simplices(simps) -> "SimplicialComplex":
        """Downward closure of an arbitrary family of vertex sets."""
        closed = set()
        for s in simps:
            s = tuple(sorted(set(s)))
            if not s:
                continue
            for k in range(1, len(s) + 1):
                closed.update(itertools.combinations(s, k))
        if not closed:
            return SimplicialComplex(())
        top = max(len(s) for s in closed)
        levels = tuple(
            tuple(sorted(s for s in closed if len(s) == d + 1)) for d in range(top)
        )
        return SimplicialComplex(levels)

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    @property
    def vertex_set(self) -> tuple[int, ...]:
        if not self.simplices:
            return ()
        return tuple(v for (v,) in self.simplices[0])

    def level(self, d: int) -> tuple[tuple[int, ...], ...]:
        if 0 <= d < len(self.simplices):
            return self.simplices[d]
        return ()

    def all_simplices(self):
        for level in self.simplices:
            yield from level

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(level) for d, level in enumerate(self.simplices))

    def to_json_obj(self) -> dict:
        return {f"dim_{d}": [list(s) for s in level] for d, level in enumerate(self.simplices)}


def _gf2_rank(rows: list[int]) -> int:
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            hb = row.bit_length() - 1
            if hb in pivots:
                row ^= pivots[hb]
            else:
                pivots[hb] = row
                rank += 1
                break
    return rank


def _q_rank(rows: list[list[Fraction]]) -> int:
    if not rows:
        return 0
    mat = [r[:] for r in rows]
    ncols = len(mat[0])
    rank = 0
    prow = 0
    for c in range(ncols):
        piv = None
        for r in range(prow, len(mat)):
            if mat[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[prow], mat[piv] = mat[piv], mat[prow]
        pv = mat[prow][c]
        for r in range(prow + 1, len(mat)):
            if mat[r][c] != 0:
                f = mat[r][c] / pv
                row = mat[r]
                prow_vals = mat[prow]
                for j in range(c, ncols):
                    row[j] -= f * prow_vals[j]
        rank += 1
        prow += 1
        if prow == len(mat):
            break
    return rank


def boundary_rank(k: SimplicialComplex, d: int, field: str = GF2) -> int:
    """Rank of the boundary map from d-chains to (d-1)-chains."""
    if d <= 0 or d > k.dim:
        return 0
    faces = {s: i for i, s in enumerate(k.level(d - 1))}
    if field == GF2:
        rows = []
        for s in k.level(d):
            m = 0
            for f in itertools.combinations(s, d):
                m |= 1 << faces[f]
            rows.append(m)
        return _gf2_rank(rows)
    if field == Q:
        rows = []
        nf = len(faces)
        for s in k.level(d):
            row = [Fraction(0)] * nf
            for j in range(d + 1):
                f = s[:j] + s[j + 1:]
                row[faces[f]] = Fraction((-1) ** j)
            rows.append(row)
        return _q_rank(rows)
    raise SimplicialError(f"unknown field {field}")


def betti(k: SimplicialComplex, field: str = GF2) -> list[int]:
    """Betti numbers beta_0..beta_dim from boundary ranks."""
    if not k.simplices:
        return []
    out = []
    for d in range(k.dim + 1):
        n_d = len(k.level(d))
        rank_d = boundary_rank(k, d, field)
        rank_d1 = boundary_rank(k, d + 1, field)
        out.append(n_d - rank_d - rank_d1)
    return out


def connectivity_proxy(k: SimplicialComplex, m: int) -> bool:
    """GF(2) homology proxy for m-connectedness: beta_0 = 1, beta_1..beta_m = 0.

    This is a proxy only; the homotopy-level statement is out of desk
    reach and is reported as such wherever this is used.
    """
    b = betti(k, GF2)
    if not b or b[0] != 1:
        return False
    for i in range(1, m + 1):
        if i < len(b) and b[i] != 0:
            return False
    return True


EDGE_PAIR = "edge-pair"
PATH = "path"


def _semiconnected_chain(verts: tuple[int, ...], adj: dict[int, set[int]]) -> bool:
    """Induced subgraph admits an ordering with i<j => directed path i->j,
    and has a unique source and a unique sink."""
    vs = set(verts)
    # reachability within the induced subgraph
    reach = {v: {v} for v in verts}
    for v in verts:
        frontier = [v]
        while frontier:
            u = frontier.pop()
            for w in adj.get(u, ()):
                if w in vs and w not in reach[v]:
                    reach[v].add(w)
                    frontier.append(w)
    for a, b in itertools.combinations(verts, 2):
        if b not in reach[a] and a not in reach[b]:
            return False
    sources = [v for v in verts if not any(v in adj.get(u, ()) for u in vs if u != v)]
    sinks = [v for v in verts if not (adj.get(v, set()) & (vs - {v}))]
    return len(sources) == 1 and len(sinks) == 1


def directed_flag_complex(g: DiGraph, max_dim: int, variant: str = EDGE_PAIR) -> SimplicialComplex:
    """Directed cliques of g, filled as simplices up to max_dim.

    edge-pair: a k-simplex per vertex set admitting an ordering with an
    edge v_i -> v_j for every i < j (unique source and sink follow).
    path: the edge requirement is relaxed to directed-path reachability
    inside the induced subgraph, still with a unique source and sink;
    the complex is the downward closure of the accepted sets.
    """
    g.require_simple()
    if max_dim < 1:
        raise SimplicialError("max_dim must be >= 1")
    adj = {v: set() for v in g.vertices}
    for _, s, t in g.edges:
        adj[s].add(t)

    if variant == EDGE_PAIR:
        # grow ordered chains (v_0..v_k) with all forward edges present
        levels: list[set] = [set((v,) for v in g.vertices)]
        chains = [tuple([v]) for v in sorted(g.vertices)]
        d = 0
        while chains and d < max_dim:
            nxt = []
            level = set()
            for ch in chains:
                cands = set(adj[ch[0]])
                for v in ch[1:]:
                    cands &= adj[v]
                for w in sorted(cands):
                    nxt.append(ch + (w,))
                    level.add(tuple(sorted(ch + (w,))))
            if level:
                levels.append(level)
            chains = nxt
            d += 1
        return SimplicialComplex(tuple(tuple(sorted(lv)) for lv in levels))

    if variant == PATH:
        accepted = [ (v,) for v in g.vertices ]
        # breadth-first growth over vertex sets keeps this exhaustive yet
        # cheap on the desk-scale graphs it is meant for
        frontier = {frozenset((v,)) for v in g.vertices}
        seen = set(frontier)
        for size in range(2, max_dim + 2):
            new_frontier = set()
            for base in frontier:
                for w in g.vertices:
                    if w in base:
                        continue
                    cand = base | {w}
                    if cand in seen:
                        continue
                    seen.add(cand)
                    verts = tuple(sorted(cand))
                    if _semiconnected_chain(verts, adj):
                        accepted.append(verts)
                        new_frontier.add(cand)
            frontier = new_frontier
            if not frontier:
                break
        return SimplicialComplex.from_simplices(accepted)

    raise SimplicialError(f"unknown variant {variant}")


def undirected_flag_complex(g: DiGraph, max_dim: int) -> SimplicialComplex:
    """Flag complex of the underlying undirected graph (random-graph mode)."""
    g.require_simple()
    if max_dim < 1:
        raise SimplicialError("max_dim must be >= 1")
    nbrs = {v: set() for v in g.vertices}
    for _, s, t in g.edges:
        nbrs[s].add(t)
        nbrs[t].add(s)
    levels: list[tuple] = [tuple((v,) for v in sorted(g.vertices))]
    current = [ (v,) for v in sorted(g.vertices) ]
    d = 0
    while current and d < max_dim:
        nxt = []
        for s in current:
            common = nbrs[s[0]] - set(s)
            for v in s[1:]:
                common &= nbrs[v]
            for w in sorted(common):
                if w > s[-1]:
                    nxt.append(s + (w,))
        if nxt:
            levels.append(tuple(sorted(nxt)))
        current = nxt
        d += 1
    return SimplicialComplex(tuple(levels))


def code_nerve(c) -> SimplicialComplex:
    """Nerve of a binary code: one simplex per nonzero codeword support.

    The support of a word is the set of positions carrying a 1; the
    complex is the downward closure of all supports.  The zero word
    contributes nothing.
    """
    if c.q != 2:
        raise NonBinary("code nerve needs a binary code")
    supports = []
    for w in c.words:
        sup = tuple(i for i, ch in enumerate(w) if ch != 0)
        if sup:
            supports.append(sup)
    return SimplicialComplex.from_simplices(supports)


@dataclass(frozen=True)
class Filtration:
    """A complex with a monotone real value per simplex."""

    complex: SimplicialComplex
    value: dict  # simplex tuple -> float

    def validate(self) -> None:
        for level in self.complex.simplices:
            for s in level:
                if s not in self.value:
                    raise NonMonotone(f"missing filtration value for {s}")
                if len(s) > 1:
                    for f in itertools.combinations(s, len(s) - 1):
                        if self.value[f] > self.value[s] + 1e-15:
                            raise NonMonotone(f"value({f}) > value({s})")


def persistence(f: Filtration, field: str = GF2) -> list[tuple[int, float, float]]:
    """Barcodes by standard GF(2) boundary-matrix reduction.

    Returns (dim, birth, death) with death = inf for essential classes;
    zero-length bars are dropped.  Bars are sorted by (dim, birth).
    """
    if field != GF2:
        raise SimplicialError("persistence is computed over GF2")
    f.validate()
    simps = sorted(
        f.complex.all_simplices(),
        key=lambda s: (f.value[s], len(s), s),
    )
    index = {s: i for i, s in enumerate(simps)}
    columns: list[int] = []
    for s in simps:
        col = 0
        if len(s) > 1:
            for face in itertools.combinations(s, len(s) - 1):
                col |= 1 << index[face]
        columns.append(col)

    low_to_col: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    for j in range(len(columns)):
        col = columns[j]
        while col:
            low = col.bit_length() - 1
            if low in low_to_col:
                col ^= columns[low_to_col[low]]
            else:
                low_to_col[low] = j
                columns[j] = col
                pairs.append((low, j))
                break
        else:
            columns[j] = 0

    paired = set()
    bars = []
    for (i, j) in pairs:
        paired.add(i)
        paired.add(j)
        birth, death = f.value[simps[i]], f.value[simps[j]]
        if death > birth:
            bars.append((len(simps[i]) - 1, birth, death))
    for i, s in enumerate(simps):
        if i not in paired:
            bars.append((len(s) - 1, f.value[s], INF))
    bars.sort(key=lambda b: (b[0], b[1], b[2]))
    return bars


def bars_alive_at(bars, t: float) -> dict[int, int]:
    """How many bars per dimension are alive at filtration value t."""
    alive: dict[int, int] = {}
    for d, b, e in bars:
        if b <= t < e:
            alive[d] = alive.get(d, 0) + 1
    return alive


def sublevel(f: Filtration, t: float) -> SimplicialComplex:
    return SimplicialComplex.from_simplices(
        [s for s in f.complex.all_simplices() if f.value[s] <= t]
    )


def barcode_csv(bars) -> str:
    lines = ["dim,birth,death"]
    for d, b, e in bars:
        lines.append(f"{d},{b:.12g},{'inf' if e == INF else format(e, '.12g')}")
    return "\n".join(lines) + "\n"
