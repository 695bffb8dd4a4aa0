from fractions import Fraction

import pytest

from catnets import codes as C
from catnets.graph import rng_for


def random_binary_code(rng, n_max=16, size_max=64):
    n = int(rng.integers(1, n_max + 1))
    k = int(rng.integers(1, size_max))
    words = [tuple(int(b) for b in rng.integers(0, 2, size=n)) for _ in range(k)]
    code = C.Code.make(n, 2, words)
    if code.size == 2 and (1,) * n in code.words:
        code = C.wedge_sum(code, C.Code.make(n, 2, [(1,) + (0,) * (n - 1)] if n > 1 else []))
    return code


def test_wedge_unit():
    c = C.Code.make(3, 2, [(1, 1, 0)])
    assert C.wedge_sum(c, C.Code.zero(3)) == c


def test_wedge_union():
    a = C.Code.make(3, 2, [(1, 1, 0)])
    b = C.Code.make(3, 2, [(0, 1, 1)])
    w = C.wedge_sum(a, b)
    assert set(w.words) == {(0, 0, 0), (1, 1, 0), (0, 1, 1)}
    assert w.size == a.size + b.size - 1


def test_wedge_weighted_restricts():
    a = C.WeightedCode.make(2, 2, [((1, 0), 0.5)])
    b = C.WeightedCode.make(2, 2, [((0, 1), -2.0)])
    w = C.wedge_sum(a, b)
    assert ((1, 0), 0.5) in w.items and ((0, 1), -2.0) in w.items
    assert w.size == 3


def test_wedge_length_mismatch():
    with pytest.raises(C.LengthMismatch):
        C.wedge_sum(C.Code.zero(2), C.Code.zero(3))


def test_concat_full_square():
    c = C.Code.make(1, 2, [(1,)])
    s = C.concat_sum(c, c)
    assert set(s.words) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_concat_lengths_add_and_alphabet_mismatch():
    a = C.Code.make(2, 2, [(1, 0)])
    b = C.Code.make(3, 2, [(1, 1, 1), (0, 1, 0)])
    assert C.concat_sum(a, b).n == 5
    with pytest.raises(C.AlphabetMismatch):
        C.concat_sum(a, C.Code.make(2, 3, [(2, 0)]))


def test_concat_min_distance_law():
    rng = rng_for(3)
    for _ in range(20):
        a = random_binary_code(rng, n_max=5, size_max=6)
        b = random_binary_code(rng, n_max=5, size_max=6)
        if a.size < 2 or b.size < 2:
            continue
        da, db = C.min_distance(a), C.min_distance(b)
        if min(da, db) == 0:
            continue
        assert C.min_distance(C.concat_sum(a, b)) == min(da, db)


def test_probability_worked_example():
    c = C.Code.make(3, 2, [(1, 1, 0), (1, 1, 1)])
    p = C.probability(c)
    assert p[((1, 1, 0), 0)] == pytest.approx(1 / 3)
    assert p[((1, 1, 1), 0)] == pytest.approx(1 / 2)
    assert p[((0, 0, 0), 0)] == pytest.approx(1 / 6)
    assert C.binary_rate(c) == pytest.approx(5 / 9)


def test_probability_rejects_degenerate():
    with pytest.raises(C.DegenerateCode):
        C.probability(C.Code.make(2, 2, [(1, 1)]))  # {zero, all-ones}
    # mass at the zero word would vanish
    with pytest.raises(C.DegenerateCode):
        C.probability(C.Code.make(2, 2, [(1, 1), (1, 1)]))


def test_probability_normalized_nonnegative_random():
    rng = rng_for(7)
    for _ in range(200):
        c = random_binary_code(rng)
        try:
            p = C.probability(c)
        except C.DegenerateCode:
            continue
        total = sum(p.values())
        assert abs(total - 1.0) <= 1e-12
        assert all(v >= 0 for v in p.values())


def test_mix_law_example_and_symmetric():
    a = C.Code.make(2, 2, [(1, 0)])
    b = C.Code.make(3, 2, [(1, 1, 0), (0, 0, 1)])
    lam, dev = C.mix_law_check(a, b)
    assert lam == pytest.approx(0.4)
    assert dev <= 1e-12
    lam, dev = C.mix_law_check(a, a)
    assert dev == 0.0


def test_mix_law_random_pairs():
    rng = rng_for(100)
    checked = 0
    while checked < 100:
        a = random_binary_code(rng)
        b = random_binary_code(rng)
        _, dev = C.mix_law_check(a, b)
        assert dev <= 1e-12
        checked += 1


def test_wedge_mixing_exact_structure():
    rng = rng_for(17)
    for _ in range(50):
        a = random_binary_code(rng, n_max=6, size_max=10)
        b = random_binary_code(rng, n_max=6, size_max=10)
        if a.n != b.n:
            continue
        try:
            assert C.wedge_mixing_exact(a, b)
        except C.DegenerateCode:
            continue


def test_morphism_scaling_reconstruction():
    # reconstruct P_C from the fiberwise scalings and P_C'
    a = C.Code.make(3, 2, [(1, 1, 0), (1, 0, 0), (0, 1, 1)])
    b = C.Code.make(3, 2, [(1, 0, 0), (0, 1, 0)])

    def f(w):
        if w == (0, 0, 0):
            return (0, 0, 0)
        return (1, 0, 0) if w[0] == 1 else (0, 1, 0)

    assert C.is_code_morphism(f, a, b)
    lams = C.morphism_scalings(f, a, b)
    pa = C.probability(a)
    pb = C.probability(b)
    for key, lam in lams.items():
        w = key[0]
        assert pa[key] == pytest.approx(lam * pb[(tuple(f(w)), 0)], abs=1e-12)


def test_bernoulli_degenerate_guard():
    c = C.gen_bernoulli_code(10, 5, 1e-9, 0)
    assert c.words.count((0,) * 10) == 1
    assert c.size <= 6


def test_bernoulli_reproducible_and_concentrated():
    a = C.gen_bernoulli_code(200, 200, 0.3, 9)
    b = C.gen_bernoulli_code(200, 200, 0.3, 9)
    assert a == b
    total_ones = sum(C.ones_count(w) for w in a.words)
    frac = total_ones / (200 * 200)
    assert abs(frac - 0.3) < 4 / (200 * 200) ** 0.5


def test_firing_rate_estimate_converges():
    n = 10_000
    hits = 0
    for seed in range(100):
        c = C.gen_bernoulli_code(n, 1, 0.3, seed)
        w = max(c.words, key=C.ones_count)
        if abs(C.ones_count(w) / n - 0.3) < 0.02:
            hits += 1
    assert hits >= 99


def test_bernoulli_rejects_bad_p():
    with pytest.raises(C.InvalidProbability):
        C.gen_bernoulli_code(4, 2, 0.0, 0)


def test_total_weight_monoid_homomorphism():
    z = C.WeightedCode.zero(4)
    assert C.total_weight(z) == 0.0
    wc = C.WeightedCode.make(4, 2, [((1, 0, 0, 0), 1.0), ((0, 1, 0, 0), 1.0),
                                    ((0, 0, 1, 0), 1.0), ((1, 1, 0, 0), 1.0)])
    assert C.total_weight(wc) == 4.0
    rng = rng_for(23)
    for _ in range(100):
        n = int(rng.integers(1, 6))
        items_a = [(tuple(int(b) for b in rng.integers(0, 2, n)), float(rng.normal()))
                   for _ in range(int(rng.integers(0, 6)))]
        items_b = [(tuple(int(b) for b in rng.integers(0, 2, n)), float(rng.normal()))
                   for _ in range(int(rng.integers(0, 6)))]
        a = C.WeightedCode.make(n, 2, [it for it in items_a if any(it[0])])
        b = C.WeightedCode.make(n, 2, [it for it in items_b if any(it[0])])
        lhs = C.total_weight(C.wedge_sum(a, b))
        rhs = C.total_weight(a) + C.total_weight(b)
        assert abs(lhs - rhs) <= 1e-15 * max(1.0, abs(lhs), abs(rhs))


def test_is_code_morphism_cases():
    a = C.Code.make(2, 2, [(1, 0), (0, 1)])
    assert C.is_code_morphism(lambda w: w, a, a)
    z = C.Code.zero(2)
    assert C.is_code_morphism(lambda w: (0, 0), a, z)
    # a bit flip moves the zero word
    b = C.Code.make(2, 2, [(1, 0), (0, 1), (1, 1)])
    assert not C.is_code_morphism(lambda w: (w[1], 1 - w[0]), a, b)


def test_code_file_round_trip():
    c = C.Code.make(3, 2, [(1, 0, 1), (0, 1, 0)])
    assert C.code_from_file(C.code_to_file(c)) == c
    wc = C.WeightedCode.make(3, 2, [((1, 0, 1), 0.25)])
    assert C.code_from_file(C.code_to_file(wc.code(), wc)) == wc


def test_relative_distance_diagnostic():
    c = C.Code.make(4, 2, [(1, 1, 0, 0), (0, 0, 1, 1)])
    delta, comp = C.relative_distance_profile(c)
    assert delta == pytest.approx(0.5) and comp == pytest.approx(0.5)
