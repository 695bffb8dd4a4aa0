import itertools

import pytest

from catnets import graph as G
from catnets import netfunctors as NF
from catnets.codes import WeightedCode, wedge_sum


def star_functor(g, assignment, n=2):
    p = G.to_pointed(g)
    return NF.SummingFunctor(p, NF.WeightedCodeOps(n), assignment)


def wc(n, *items):
    return WeightedCode.make(n, 2, list(items))


def test_eval_star_only_is_zero():
    g = G.DiGraph.from_edges(2, [(0, 1)])
    phi = star_functor(g, {0: wc(2, ((1, 0), 1.0))})
    assert phi.eval({G.STAR_EDGE}) == WeightedCode.zero(2)
    assert phi.eval(set()) == WeightedCode.zero(2)


def test_eval_singleton_and_unknown():
    g = G.DiGraph.from_edges(2, [(0, 1)])
    x = wc(2, ((1, 0), 1.0))
    phi = star_functor(g, {0: x})
    assert phi.eval({0}) == x
    with pytest.raises(NF.UnknownEdge):
        phi.eval({5})


def test_eval_additive_on_disjoint_subsets_exhaustive():
    g = G.DiGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    gen = {i: wc(2, ((1, 0), float(i + 1)), ((0, 1), -0.5 * i)) for i in range(5)}
    phi = star_functor(g, gen)
    edge_ids = list(range(5))
    for r in range(len(edge_ids) + 1):
        for a_set in itertools.combinations(edge_ids, r):
            rest = [e for e in edge_ids if e not in a_set]
            for r2 in range(len(rest) + 1):
                for b_set in itertools.combinations(rest, r2):
                    lhs = phi.eval(set(a_set) | set(b_set))
                    rhs = wedge_sum(phi.eval(set(a_set)), phi.eval(set(b_set)))
                    assert lhs == rhs


def test_pushforward_two_cycle():
    g = G.DiGraph.from_edges(2, [(0, 1), (1, 0)])
    x = wc(2, ((1, 0), 1.0))
    y = wc(2, ((0, 1), 2.0))
    phi = star_functor(g, {0: x, 1: y})
    src = NF.pushforward(phi, "source")
    tgt = NF.pushforward(phi, "target")
    assert src.gen[0] == x and src.gen[1] == y
    assert tgt.gen[0] == y and tgt.gen[1] == x


def test_pushforward_no_incoming_is_zero():
    g = G.DiGraph.from_edges(2, [(0, 1)])
    phi = star_functor(g, {0: wc(2, ((1, 0), 1.0))})
    tgt = NF.pushforward(phi, "target")
    assert tgt.gen[0] == WeightedCode.zero(2)


def test_pushforward_is_summing_on_vertex_sets():
    g = G.DiGraph.from_edges(3, [(0, 1), (1, 2), (2, 0), (0, 2)])
    gen = {i: wc(3, ((1, 0, 0), 1.0 + i)) for i in range(4)}
    phi = star_functor(g, gen, n=3)
    src = NF.pushforward(phi, "source")
    for a_set in itertools.combinations(g.vertices, 1):
        rest = [v for v in g.vertices if v not in a_set]
        for b_set in itertools.combinations(rest, 1):
            lhs = src.eval(set(a_set) | set(b_set))
            rhs = wedge_sum(src.eval(set(a_set)), src.eval(set(b_set)))
            assert lhs == rhs


def test_equalizer_two_cycle():
    g = G.DiGraph.from_edges(2, [(0, 1), (1, 0)])
    x = wc(2, ((1, 0), 1.0))
    phi = star_functor(g, {0: x, 1: x})
    ok, _ = NF.is_in_equalizer(phi)
    assert ok
    phi2 = star_functor(g, {0: x, 1: wc(2, ((1, 0), 2.0))})
    ok, report = NF.is_in_equalizer(phi2)
    assert not ok
    assert not report[0]["equal"] and not report[1]["equal"]


def test_equalizer_star_graph_is_linear_neuron_law():
    # three edges into vertex 3, one edge out
    g = G.DiGraph.from_edges(5, [(0, 3), (1, 3), (2, 3), (3, 4)])
    ins = [wc(2, ((1, 0), 1.0)), wc(2, ((0, 1), 2.0)), wc(2, ((1, 1), 3.0))]
    out_obj = wedge_sum(wedge_sum(ins[0], ins[1]), ins[2])
    gen = {0: ins[0], 1: ins[1], 2: ins[2], 3: out_obj}
    phi = star_functor(g, gen)
    _, report = NF.is_in_equalizer(phi)
    assert report[3]["equal"]  # out(v) object equals the wedge of the inputs
    gen_bad = dict(gen)
    gen_bad[3] = ins[0]
    _, report = NF.is_in_equalizer(star_functor(g, gen_bad))
    assert not report[3]["equal"]


def test_inclusion_exclusion():
    g1 = frozenset({0, 1})
    g2 = frozenset({1, 2})
    edge_dims = {0: 2, 1: 3, 2: 5}

    def additive(sub):
        return sum(edge_dims[e] for e in sub)

    assign = {k: additive(k) for k in
              [g1, g2, g1 & g2, g1 | g2]}
    assert NF.inclusion_exclusion_check(assign, g1, g2)
    assert NF.inclusion_exclusion_check(assign, g1, g1)
    broken = dict(assign)
    broken[g1 | g2] += 1
    assert not NF.inclusion_exclusion_check(broken, g1, g2)
    with pytest.raises(NF.UndefinedSubgraph):
        NF.inclusion_exclusion_check({g1: 1}, g1, g2)


def test_entropy_bound_report_runs():
    from catnets.codes import Code
    g = G.DiGraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    p = G.to_pointed(g)
    gen = {0: Code.make(3, 2, [(1, 1, 0)]),
           1: Code.make(3, 2, [(0, 1, 1), (1, 0, 0)]),
           2: Code.make(3, 2, [(1, 0, 1)])}
    phi = NF.SummingFunctor(p, NF.CodeOps(3), gen)
    chains = [[{0}, {0, 1}, {0, 1, 2}]]
    rep = NF.entropy_bound_report(phi, chains)
    assert rep["lambda_max"] >= 1.0
    assert len(rep["entropies"][0]) == 3
