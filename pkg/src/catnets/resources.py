"""Preordered commutative resource carriers and measuring homomorphisms.

Two concrete carriers: signed reals under addition (ordered by >=), and
integer vectors under componentwise addition (ordered componentwise).
A Measuring is an additive, order-preserving real valuation; the sign
test M(r) >= 0 is the threshold gate the weighted-code dynamics uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class ResourceError(ValueError):
    pass


class UnboundedRate(ResourceError):
    pass


@dataclass(frozen=True)
class RealResource:
    """Reals under +, preordered by >=.  Signed values are admitted so the
    threshold gate can see negative totals."""

    unit = 0.0

    def combine(self, a: float, b: float) -> float:
        return a + b

    def scale(self, k: int, a: float) -> float:
        return k * a

    def geq(self, a: float, b: float) -> bool:
        return a >= b


@dataclass(frozen=True)
class VectorResource:
    """Integer vectors under componentwise +, ordered componentwise."""

    dim: int

    @property
    def unit(self) -> tuple[int, ...]:
        return (0,) * self.dim

    def combine(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def scale(self, k: int, a):
        return tuple(k * x for x in a)

    def geq(self, a, b) -> bool:
        return all(x >= y for x, y in zip(a, b))


@dataclass(frozen=True)
class Measuring:
    """An additive order-preserving valuation M with M(r) >= 0 iff r >= 0."""

    carrier: object
    fn: object = None  # element -> float; identity on reals when None

    def __call__(self, r) -> float:
        if self.fn is None:
            return float(r)
        return float(self.fn(r))

    def check_homomorphism(self, a, b, tol: float = 1e-12) -> bool:
        lhs = self(self.carrier.combine(a, b))
        rhs = self(a) + self(b)
        return abs(lhs - rhs) <= tol * max(1.0, abs(lhs), abs(rhs))

    def check_order(self, a, b) -> bool:
        if self.carrier.geq(a, b):
            return self(a) >= self(b) - 1e-12
        return True


def real_measuring() -> Measuring:
    return Measuring(RealResource())


def vector_measuring(weights) -> Measuring:
    """Dot product against non-negative weights; order-preserving by sign."""
    ws = tuple(float(w) for w in weights)
    if any(w < 0 for w in ws):
        raise ResourceError("measuring weights must be non-negative")
    return Measuring(VectorResource(len(ws)), lambda v: sum(w * x for w, x in zip(ws, v)))


def threshold(carrier, r) -> bool:
    """The gate: true iff r >= 0 in the carrier preorder."""
    return carrier.geq(r, carrier.unit)


def _m_bound(carrier, a, b, n: int) -> int:
    """Largest m worth trying for n copies of a against m copies of b."""
    na = carrier.scale(n, a)
    if isinstance(carrier, RealResource):
        if b <= 0:
            raise UnboundedRate("target resource is not positive")
        return max(0, int(na // b))
    bounds = []
    for x, y in zip(na, b):
        if y > 0:
            bounds.append(x // y if x >= 0 else -1)
    if not bounds:
        raise UnboundedRate("target resource has no positive component")
    return max(0, min(bounds))


def conversion_rate(carrier, a, b, n_max: int) -> Fraction:
    """Best m/n with n*a >= m*b over 1 <= n <= n_max, by direct enumeration.

    Monotone non-decreasing in n_max.  Returns 0 when no pair converts.
    """
    if n_max < 1:
        raise ResourceError("n_max must be >= 1")
    if b == carrier.unit:
        raise ResourceError("conversion target must not be the unit")
    if carrier.geq(carrier.unit, b):
        raise UnboundedRate("unit dominates target; rate is unbounded")
    best = Fraction(0)
    for n in range(1, n_max + 1):
        na = carrier.scale(n, a)
        cap = _m_bound(carrier, a, b, n)
        for m in range(cap, -1, -1):
            if Fraction(m, n) <= best:
                break
            if carrier.geq(na, carrier.scale(m, b)):
                best = Fraction(m, n)
                break
    return best
