from fractions import Fraction

import pytest

from catnets import resources as R
from catnets.graph import rng_for


def test_conversion_rate_integers_example():
    carrier = R.RealResource()
    assert R.conversion_rate(carrier, 3.0, 2.0, 2) == Fraction(3, 2)


def test_conversion_rate_identity():
    carrier = R.RealResource()
    assert R.conversion_rate(carrier, 5.0, 5.0, 4) == Fraction(1)


def test_conversion_rate_monotone_in_bound():
    carrier = R.RealResource()
    vals = [R.conversion_rate(carrier, 3.0, 2.0, n) for n in range(1, 8)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_conversion_rate_unbounded():
    carrier = R.RealResource()
    with pytest.raises(R.UnboundedRate):
        R.conversion_rate(carrier, 1.0, -2.0, 3)
    with pytest.raises(R.ResourceError):
        R.conversion_rate(carrier, 1.0, 0.0, 3)


def test_measuring_bound_on_random_vectors():
    rng = rng_for(31)
    carrier = R.VectorResource(3)
    m = R.vector_measuring([1.0, 2.0, 0.5])
    for _ in range(100):
        a = tuple(int(x) for x in rng.integers(0, 8, size=3))
        b = tuple(int(x) for x in rng.integers(0, 8, size=3))
        if b == carrier.unit or carrier.geq(carrier.unit, b):
            continue
        rho = R.conversion_rate(carrier, a, b, 6)
        assert float(rho) * m(b) <= m(a) + 1e-9


def test_measuring_homomorphism_and_order():
    rng = rng_for(32)
    m = R.vector_measuring([1.0, 0.5])
    carrier = m.carrier
    for _ in range(200):
        a = tuple(int(x) for x in rng.integers(-5, 6, size=2))
        b = tuple(int(x) for x in rng.integers(-5, 6, size=2))
        assert m.check_homomorphism(a, b)
        assert m.check_order(a, b)


def test_threshold_unit_and_negative():
    carrier = R.RealResource()
    assert R.threshold(carrier, 0.0)
    assert not R.threshold(carrier, -0.1)


def test_threshold_agrees_with_measuring_sign():
    rng = rng_for(33)
    carrier = R.RealResource()
    m = R.real_measuring()
    for _ in range(1000):
        r = float(rng.normal())
        assert R.threshold(carrier, r) == (m(r) >= 0)


def test_conversion_rate_antitone_in_target():
    carrier = R.RealResource()
    rng = rng_for(34)
    for _ in range(50):
        a = float(rng.integers(1, 20))
        b1 = float(rng.integers(1, 10))
        b2 = b1 + float(rng.integers(0, 5))
        r1 = R.conversion_rate(carrier, a, b1, 6)
        r2 = R.conversion_rate(carrier, a, b2, 6)
        assert r1 >= r2
