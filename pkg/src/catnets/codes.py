"""Pointed codes, weighted codes, their sums, and probability assignments.

Codes are multisets of fixed-length words over {0..q-1} containing the
zero word exactly once.  Word instances are kept in a canonical sorted
order; weighted codes carry one real weight per instance with weight 0
on the zero word.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import rng_for

Word = tuple[int, ...]


class CodeError(ValueError):
    pass


class LengthMismatch(CodeError):
    pass


class AlphabetMismatch(CodeError):
    pass


class DegenerateCode(CodeError):
    pass


class InvalidProbability(CodeError):
    pass


class NonBinaryCode(CodeError):
    pass


def _zero(n: int) -> Word:
    return (0,) * n


def ones_count(w: Word) -> int:
    """Number of nonzero digits (the firing count b of a word)."""
    return sum(1 for d in w if d != 0)


def hamming(a: Word, b: Word) -> int:
    return sum(1 for x, y in zip(a, b) if x != y)


@dataclass(frozen=True)
class Code:
    """A pointed code: words sorted, zero word present exactly once."""

    n: int
    q: int
    words: tuple[Word, ...]

    def __post_init__(self):
        if self.n < 1 or self.q < 2:
            raise CodeError("need n >= 1 and q >= 2")
        z = _zero(self.n)
        if self.words.count(z) != 1:
            raise CodeError("zero word must appear exactly once")
        for w in self.words:
            if len(w) != self.n:
                raise CodeError(f"word {w} has wrong length")
            if any(not 0 <= d < self.q for d in w):
                raise CodeError(f"word {w} outside alphabet")
        if tuple(sorted(self.words)) != self.words:
            raise CodeError("words must be in canonical sorted order")

    @staticmethod
    def make(n: int, q: int, words) -> "Code":
        ws = [tuple(w) for w in words]
        z = _zero(n)
        ws = [w for w in ws if w != z]
        return Code(n, q, tuple(sorted(ws + [z])))

    @staticmethod
    def zero(n: int, q: int = 2) -> "Code":
        return Code(n, q, (_zero(n),))

    @property
    def size(self) -> int:
        return len(self.words)

    def is_zero_object(self) -> bool:
        return self.size == 1

    def nonzero_words(self) -> tuple[Word, ...]:
        z = _zero(self.n)
        return tuple(w for w in self.words if w != z)


@dataclass(frozen=True)
class WeightedCode:
    """Word instances with weights; zero word carries weight 0.

    Instances are sorted by (word, weight) so equality of canonical
    forms is plain tuple equality.
    """

    n: int
    q: int
    items: tuple[tuple[Word, float], ...]

    def __post_init__(self):
        z = _zero(self.n)
        zs = [w for w, _ in self.items if w == z]
        if len(zs) != 1:
            raise CodeError("zero word must appear exactly once")
        for w, wt in self.items:
            if len(w) != self.n or any(not 0 <= d < self.q for d in w):
                raise CodeError(f"bad word {w}")
            if w == z and wt != 0.0:
                raise CodeError("zero word must have weight 0")
        if tuple(sorted(self.items)) != self.items:
            raise CodeError("items must be in canonical sorted order")

    @staticmethod
    def make(n: int, q: int, items) -> "WeightedCode":
        z = _zero(n)
        out = [(tuple(w), float(wt)) for w, wt in items if tuple(w) != z]
        out.append((z, 0.0))
        return WeightedCode(n, q, tuple(sorted(out)))

    @staticmethod
    def zero(n: int, q: int = 2) -> "WeightedCode":
        return WeightedCode(n, q, ((_zero(n), 0.0),))

    @staticmethod
    def from_code(c: Code, weight_fn) -> "WeightedCode":
        items = [(w, weight_fn(w)) for w in c.nonzero_words()]
        return WeightedCode.make(c.n, c.q, items)

    @property
    def size(self) -> int:
        return len(self.items)

    def is_zero_object(self) -> bool:
        return self.size == 1

    def code(self) -> Code:
        return Code.make(self.n, self.q, [w for w, _ in self.items])

    def nonzero_items(self) -> tuple[tuple[Word, float], ...]:
        z = _zero(self.n)
        return tuple((w, wt) for w, wt in self.items if w != z)

    def nonnegative(self) -> bool:
        return all(wt >= 0.0 for _, wt in self.items)

    def scale(self, t: float) -> "WeightedCode":
        return WeightedCode.make(self.n, self.q, [(w, t * wt) for w, wt in self.nonzero_items()])


def wedge_sum(a, b):
    """Categorical sum: disjoint union of words with zero words identified."""
    if a.n != b.n:
        raise LengthMismatch(f"lengths {a.n} != {b.n}")
    if a.q != b.q:
        raise AlphabetMismatch(f"alphabets {a.q} != {b.q}")
    if isinstance(a, WeightedCode) and isinstance(b, WeightedCode):
        return WeightedCode.make(a.n, a.q, a.nonzero_items() + b.nonzero_items())
    if isinstance(a, Code) and isinstance(b, Code):
        z = _zero(a.n)
        merged = [w for w in a.words if w != z] + [w for w in b.words if w != z]
        return Code(a.n, a.q, tuple(sorted(merged + [z])))
    raise CodeError("wedge_sum needs two codes of the same kind")


def concat_sum(a: Code, b: Code) -> Code:
    """Length-concatenation sum: all pairs (c, c'), multiplicities multiply."""
    if a.q != b.q:
        raise AlphabetMismatch(f"alphabets {a.q} != {b.q}")
    words = tuple(sorted(u + v for u in a.words for v in b.words))
    return Code(a.n + b.n, a.q, words)


def min_distance(c: Code) -> int:
    """Minimum pairwise Hamming distance over distinct instances."""
    if c.size < 2:
        raise DegenerateCode("min distance needs at least two words")
    return min(
        hamming(c.words[i], c.words[j])
        for i in range(c.size)
        for j in range(i + 1, c.size)
    )


def relative_distance_profile(c: Code) -> tuple[float, float]:
    """Diagnostic pair (delta, 1 - delta) from the relative minimum distance."""
    delta = min_distance(c) / c.n
    return (delta, 1.0 - delta)


def _check_pointed_object(c: Code) -> None:
    onesw = (1,) * c.n
    if c.size == 2 and c.words.count(onesw) == 1:
        raise DegenerateCode("code {zero, all-ones} carries no usable information")


def probability(c: Code) -> dict[tuple[Word, int], float]:
    """Instance-level distribution: P(w) = b(w) / (n (|C|-1)) off the zero word.

    Keys are (word, instance index among equal words) so repeated words
    keep separate mass.  The remainder sits on the zero word and must be
    strictly positive.
    """
    if c.q != 2:
        raise NonBinaryCode("instance probabilities are defined for binary codes")
    if c.size < 2:
        raise DegenerateCode("need at least two words")
    _check_pointed_object(c)
    denom = c.n * (c.size - 1)
    out: dict[tuple[Word, int], float] = {}
    counts: dict[Word, int] = {}
    total = 0.0
    z = _zero(c.n)
    for w in c.words:
        if w == z:
            continue
        i = counts.get(w, 0)
        counts[w] = i + 1
        p = ones_count(w) / denom
        out[(w, i)] = p
        total += p
    rest = 1.0 - total
    if rest <= 0.0:
        raise DegenerateCode(f"mass at zero word would be {rest}")
    out[(z, 0)] = rest
    return out


def binary_rate(c: Code) -> float:
    """The two-point reduction p = sum_c b(c) / (n |C|) of a code."""
    return sum(ones_count(w) for w in c.words) / (c.n * c.size)


def binary_rate_exact(c: Code) -> Fraction:
    return Fraction(sum(ones_count(w) for w in c.words), c.n * c.size)


def mix_law_check(c1: Code, c2: Code) -> tuple[float, float]:
    """Mixing of two-point rates under concatenation.

    Returns (lam, deviation) for the identity
    p(C (+) C') = lam p(C) + (1 - lam) p(C') with lam = n / (n + n').
    """
    if c1.q != 2 or c2.q != 2:
        raise NonBinaryCode("mixing law is stated for binary codes")
    lam = c1.n / (c1.n + c2.n)
    lhs = binary_rate(concat_sum(c1, c2))
    rhs = lam * binary_rate(c1) + (1.0 - lam) * binary_rate(c2)
    return lam, abs(lhs - rhs)


def probability_exact(c: Code) -> list[tuple[Word, Fraction]]:
    """Exact rational version of :func:`probability`, one entry per instance."""
    if c.size < 2:
        raise DegenerateCode("need at least two words")
    _check_pointed_object(c)
    denom = Fraction(c.n * (c.size - 1))
    z = _zero(c.n)
    out = []
    total = Fraction(0)
    for w in c.words:
        if w == z:
            continue
        mass = Fraction(ones_count(w)) / denom
        out.append((w, mass))
        total += mass
    rest = 1 - total
    if rest <= 0:
        raise DegenerateCode(f"mass at zero word would be {rest}")
    out.append((z, rest))
    return out


def wedge_mixing_exact(c1: Code, c2: Code) -> bool:
    """Exact rational check of the wedge mixing coefficients N/(N+N').

    With N = |C1| - 1 and N' = |C2| - 1, the instance masses of the
    actual wedge sum must equal the originals rescaled by N/(N+N') and
    N'/(N+N'), compared as multisets per word.
    """
    nn, mm = c1.size - 1, c2.size - 1
    if nn == 0 or mm == 0:
        return True
    w = wedge_sum(c1, c2)
    coeff1 = Fraction(nn, nn + mm)
    coeff2 = Fraction(mm, nn + mm)
    z = _zero(w.n)
    got: dict[Word, list[Fraction]] = {}
    for word, mass in probability_exact(w):
        if word != z:
            got.setdefault(word, []).append(mass)
    want: dict[Word, list[Fraction]] = {}
    for c, coeff in ((c1, coeff1), (c2, coeff2)):
        for word, mass in probability_exact(c):
            if word != z:
                want.setdefault(word, []).append(coeff * mass)
    if set(got) != set(want):
        return False
    return all(sorted(got[k]) == sorted(want[k]) for k in got)


def gen_bernoulli_code(n: int, k: int, p: float, seed: int) -> Code:
    """k words with i.i.d. Bernoulli(p) digits; zero word ensured once."""
    if not 0.0 < p < 1.0:
        raise InvalidProbability(f"p={p} not in (0,1)")
    rng = rng_for(seed)
    draws = rng.random((k, n)) < p
    z = _zero(n)
    words = [tuple(int(b) for b in row) for row in draws]
    words = [w for w in words if w != z]
    return Code(n, 2, tuple(sorted(words + [z])))


def total_weight(wc: WeightedCode) -> float:
    """The monoid homomorphism alpha: sum of all word weights."""
    return float(sum(wt for _, wt in wc.items))


def is_code_morphism(f, a: Code, b: Code) -> bool:
    """True iff f fixes the zero word and never increases Hamming distance."""
    za, zb = _zero(a.n), _zero(b.n)
    images = {}
    for w in set(a.words):
        fw = tuple(f(w))
        if len(fw) != b.n:
            return False
        images[w] = fw
    if images.get(za) != zb:
        return False
    ws = list(set(a.words))
    for i in range(len(ws)):
        for j in range(i + 1, len(ws)):
            if hamming(images[ws[i]], images[ws[j]]) > hamming(ws[i], ws[j]):
                return False
    return True


def morphism_scalings(f, a: Code, b: Code) -> dict[tuple[Word, int], float]:
    """Fiberwise scalings lambda_{f(c)}(c) = P_C(c) / P_{C'}(f(c))."""
    pa = probability(a)
    pb = probability(b)
    z = _zero(b.n)
    out = {}
    for (w, i), mass in pa.items():
        fw = tuple(f(w))
        target = pb[(fw, 0)] if fw == z else pb.get((fw, 0))
        if target is None or target == 0.0:
            raise DegenerateCode(f"image word {fw} has no mass")
        out[(w, i)] = mass / target
    return out


def code_to_file(c: Code, weights: WeightedCode | None = None) -> str:
    """One word per line of digits; header 'n q'; optional weight column."""
    lines = [f"{c.n} {c.q}"]
    if weights is None:
        for w in c.words:
            lines.append("".join(str(d) for d in w))
    else:
        for w, wt in weights.items:
            lines.append("".join(str(d) for d in w) + "\t" + repr(wt))
    return "\n".join(lines) + "\n"


def code_from_file(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    n, q = (int(x) for x in lines[0].split())
    words = []
    weights = []
    weighted = False
    for ln in lines[1:]:
        if "\t" in ln:
            weighted = True
            wpart, wt = ln.split("\t")
            weights.append(float(wt))
        else:
            wpart = ln
        words.append(tuple(int(ch) for ch in wpart.strip()))
    if weighted:
        return WeightedCode.make(n, q, list(zip(words, weights)))
    return Code.make(n, q, words)
