"""
Group quasimorphisms on free groups and free products of cyclic groups.

Four kinds are supported: homomorphisms given by generator weights, counting
quasimorphisms (signed count of a fixed word), their homogenizations, and
rational linear combinations.  All values are exact Fractions.

Every Quasimorphism carries a certified upper bound on its defect
D(f) = sup |f(g) + f(h) - f(gh)| and the largest value witnessed so far.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from qforge.errors import CertificationError, InputError, PreconditionError
from qforge.words import (
    Alphabet, GroupWord, check_word, commutator_ball, cyclic_reduction,
    enumerate_ball, exponent_sums, format_word, in_commutator_subgroup,
    invert_tokens, multiply, parse_word, random_ball_word, token_char,
    token_string, tokens,
)

EXHAUSTIVE_LIMIT = 10**6
EMPIRICAL_RADIUS = 4
EMPIRICAL_SAFETY = 2

KINDS = ("hom", "count", "hcount", "lin")


def frac_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class Quasimorphism:
    kind: str
    weights: tuple[Fraction, ...] = ()
    word: GroupWord | None = None
    terms: tuple[tuple[Fraction, "Quasimorphism"], ...] = ()
    defect_upper: Fraction = Fraction(0)
    defect_lower: Fraction = Fraction(0)
    homogeneous: bool = False
    empirical: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown quasimorphism kind {self.kind!r}")
        object.__setattr__(self, "defect_upper", Fraction(self.defect_upper))
        object.__setattr__(self, "defect_lower", Fraction(self.defect_lower))
        if self.defect_lower > self.defect_upper:
            raise CertificationError(
                f"witnessed defect {self.defect_lower} exceeds bound {self.defect_upper}")
        if self.kind == "hom" and (self.defect_upper != 0 or not self.homogeneous):
            raise InputError("homomorphisms have defect 0 and are homogeneous")
        if self.kind in ("count", "hcount") and not self.word:
            raise InputError("counting quasimorphisms need a nonempty word")


# -- construction ----------------------------------------------------------------

def homomorphism(weights, A: Alphabet) -> Quasimorphism:
    """Weights per generator, given as a sequence or a {name: weight} dict."""
    if isinstance(weights, dict):
        unknown = set(weights) - set(A.generators)
        if unknown:
            raise InputError(f"weights for unknown generators {sorted(unknown)}")
        ws = [Fraction(weights.get(g, 0)) for g in A.generators]
    else:
        ws = [Fraction(x) for x in weights]
    if len(ws) != len(A):
        raise InputError("one weight per generator required")
    for wt, k in zip(ws, A.orders):
        if wt and k is not None:
            raise InputError("a finite-order generator admits no nonzero real weight")
    return Quasimorphism("hom", weights=tuple(ws), homogeneous=True)


def is_cyclically_reduced(w: GroupWord, A: Alphabet) -> bool:
    t = tokens(w, A)
    return len(t) <= 1 or t[0] != invert_tokens(t[-1:])[0]


def counting_defect_bound(w: GroupWord, A: Alphabet) -> Fraction:
    """Certified defect bound of the counting quasimorphism on a free group.

    Writing g = uc, h = c^-1 v, gh = uv reduced, the defect is a signed sum
    of three junction counts, each at most |w| - 1 in absolute value.  For
    cyclically reduced w the two junctions sharing the prefix of c cannot
    both saturate with opposite signs, which leaves 2(|w| - 1).
    """
    n = len(tokens(w, A))
    factor = 2 if is_cyclically_reduced(w, A) else 3
    return Fraction(factor * (n - 1))


def counting(w: GroupWord | str, A: Alphabet, defect_upper=None,
             radius: int = EMPIRICAL_RADIUS) -> Quasimorphism:
    """Signed occurrence count of w in normal forms.

    Over free groups the defect bound is the certified constant from
    counting_defect_bound.  Over free products of cyclics no closed form is
    used: the defect is measured exhaustively on the ball of the given radius
    and multiplied by EMPIRICAL_SAFETY, and the result is flagged empirical.
    """
    if isinstance(w, str):
        w = parse_word(w, A)
    check_word(w, A)
    if not w:
        raise InputError("counting quasimorphism of the empty word")
    if defect_upper is not None:
        return Quasimorphism("count", word=w, defect_upper=Fraction(defect_upper),
                             empirical=not A.is_free)
    if A.is_free:
        return Quasimorphism("count", word=w, defect_upper=counting_defect_bound(w, A))
    probe = Quasimorphism("count", word=w, defect_upper=Fraction(0))
    measured, _ = _scan_defect(probe, A, radius, samples=0, seed=0)
    return Quasimorphism("count", word=w, defect_upper=EMPIRICAL_SAFETY * measured,
                         defect_lower=measured, empirical=True)


def homogenized_counting(w: GroupWord | str, A: Alphabet, defect_upper=None) -> Quasimorphism:
    if defect_upper is not None:
        if isinstance(w, str):
            w = parse_word(w, A)
        return Quasimorphism("hcount", word=w, defect_upper=Fraction(defect_upper),
                             homogeneous=True, empirical=not A.is_free)
    return homogenize(counting(w, A), A)


def linear_combination(pairs: Iterable[tuple[object, Quasimorphism]]) -> Quasimorphism:
    terms = tuple((Fraction(c), q) for c, q in pairs)
    if not terms:
        raise InputError("empty linear combination")
    bound = sum((abs(c) * q.defect_upper for c, q in terms), Fraction(0))
    return Quasimorphism(
        "lin", terms=terms, defect_upper=bound,
        homogeneous=all(q.homogeneous for _, q in terms),
        empirical=any(q.empirical for _, q in terms))


def homogenize(phi: Quasimorphism, A: Alphabet) -> Quasimorphism:
    """Exact homogenization; the certified defect at most doubles."""
    if phi.homogeneous:
        return phi
    if phi.kind == "count":
        return Quasimorphism("hcount", word=phi.word, defect_upper=2 * phi.defect_upper,
                             homogeneous=True, empirical=phi.empirical)
    if phi.kind == "lin":
        return linear_combination((c, homogenize(q, A)) for c, q in phi.terms)
    raise PreconditionError(f"cannot homogenize kind {phi.kind}")


# -- evaluation --------------------------------------------------------------------

def _occurrences(pattern: str, text: str, stop: int | None = None) -> int:
    """Overlapping occurrences of pattern in text starting before `stop`."""
    if stop is None:
        stop = len(text)
    count, p = 0, text.find(pattern)
    while 0 <= p < stop:
        count += 1
        p = text.find(pattern, p + 1)
    return count


@functools.lru_cache(maxsize=1024)
def _patterns(w: GroupWord, A: Alphabet) -> tuple[str, str]:
    wt = tokens(w, A)
    return "".join(map(token_char, wt)), "".join(map(token_char, invert_tokens(wt)))


def _signed_count(w: GroupWord, A: Alphabet, text: str, stop: int | None = None) -> int:
    pat, inv = _patterns(w, A)
    return _occurrences(pat, text, stop) - _occurrences(inv, text, stop)


@functools.lru_cache(maxsize=1 << 18)
def _eval(phi: Quasimorphism, g: GroupWord, A: Alphabet) -> Fraction:
    if phi.kind == "hom":
        sums = exponent_sums(g, A)
        return sum((w * s for w, s in zip(phi.weights, sums)), Fraction(0))
    if phi.kind == "count":
        return Fraction(_signed_count(phi.word, A, token_string(g, A)))
    if phi.kind == "hcount":
        # occurrences per period of the bi-infinite word ...ccc...; any
        # cyclically reduced conjugate gives the same count
        c = cyclic_reduction(g, A)
        if not c or (len(c) == 1 and A.orders[c.syllables[0][0]] is not None):
            return Fraction(0)
        period = token_string(c, A)
        L, m = len(period), len(_patterns(phi.word, A)[0])
        text = period * (1 + (m + L - 1) // L)
        return Fraction(_signed_count(phi.word, A, text, L))
    return sum((c * _eval(q, g, A) for c, q in phi.terms), Fraction(0))


def evaluate(phi: Quasimorphism, g: GroupWord, A: Alphabet) -> Fraction:
    check_word(g, A)
    return _eval(phi, g, A)


# `eval` is the documented name of the operation
eval = evaluate  # noqa: A001


# -- defect --------------------------------------------------------------------------

def _scan_defect(phi: Quasimorphism, A: Alphabet, radius: int, samples: int,
                 seed: int) -> tuple[Fraction, tuple[GroupWord, GroupWord] | None]:
    ball = list(enumerate_ball(A, radius))
    if len(ball) ** 2 <= EXHAUSTIVE_LIMIT or samples <= 0:
        pairs: Iterable = ((g, h) for g in ball for h in ball)
    else:
        rng = random.Random(seed)
        pairs = ((random_ball_word(A, radius, rng), random_ball_word(A, radius, rng))
                 for _ in range(samples))
    best, witness = Fraction(0), None
    for g, h in pairs:
        d = abs(_eval(phi, g, A) + _eval(phi, h, A) - _eval(phi, multiply(g, h, A), A))
        if d > best:
            best, witness = d, (g, h)
    return best, witness


def measure_defect(phi: Quasimorphism, A: Alphabet, radius: int, samples: int = 10_000,
                   seed: int = 0) -> Fraction:
    """Largest |f(g) + f(h) - f(gh)| over ball pairs.

    Pairs are exhaustive when the ball has at most 1000 elements, otherwise
    `samples` seeded random pairs.  Raises CertificationError if the witness
    exceeds the certified bound.
    """
    if radius < 1:
        raise InputError("radius must be at least 1")
    value, witness = _scan_defect(phi, A, radius, samples, seed)
    if value > phi.defect_upper:
        g, h = witness
        raise CertificationError(
            f"defect {value} at ({format_word(g, A)}, {format_word(h, A)}) "
            f"exceeds certified bound {phi.defect_upper}")
    return value


def record_defect(phi: Quasimorphism, A: Alphabet, radius: int, samples: int = 10_000,
                  seed: int = 0) -> Quasimorphism:
    """Return a copy of phi whose defect_lower includes a fresh measurement."""
    value = measure_defect(phi, A, radius, samples, seed)
    return replace(phi, defect_lower=max(phi.defect_lower, value))


def vanishes_on_cyclic(phi: Quasimorphism, h: GroupWord, A: Alphabet) -> bool:
    if not phi.homogeneous:
        raise PreconditionError("vanishing on <h> is only decided for homogeneous maps")
    return evaluate(phi, h, A) == 0


@dataclass
class CommutatorReport:
    radius: int
    max_abs: Fraction
    witness: GroupWord
    bound: Fraction
    count: int

    @property
    def within_bound(self) -> bool:
        return self.max_abs <= self.bound


def restriction_is_zero_on_commutators(phi: Quasimorphism, A: Alphabet,
                                       radius: int) -> CommutatorReport:
    if not phi.homogeneous:
        raise PreconditionError("commutator restriction needs a homogeneous map")
    best, witness, n = Fraction(0), GroupWord(), 0
    for g in commutator_ball(A, radius):
        n += 1
        v = abs(evaluate(phi, g, A))
        if v > best:
            best, witness = v, g
    return CommutatorReport(radius, best, witness, phi.defect_upper, n)


# -- scl ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SclBound:
    element: GroupWord
    lower: Fraction
    witness: Quasimorphism | None


def scl_lower_bound(g: GroupWord, family: Sequence[Quasimorphism], A: Alphabet) -> SclBound:
    """Bavard lower bound max |phi(g)| / (2 D(phi)) over the family."""
    check_word(g, A)
    if not in_commutator_subgroup(g, A):
        raise InputError("scl is defined on the commutator subgroup only")
    best, witness = Fraction(0), None
    for phi in family:
        if phi.kind == "hom" or phi.defect_upper == 0:
            continue
        if not phi.homogeneous:
            raise PreconditionError("scl bounds need homogeneous quasimorphisms")
        v = abs(evaluate(phi, g, A)) / (2 * phi.defect_upper)
        if witness is None or v > best:
            best, witness = v, phi
    return SclBound(g, best, witness)


# -- serialization -------------------------------------------------------------------

def to_json(phi: Quasimorphism, A: Alphabet) -> dict:
    d: dict = {"kind": phi.kind}
    if phi.kind == "hom":
        d["weights"] = {g: frac_str(w) for g, w in zip(A.generators, phi.weights)}
    elif phi.kind in ("count", "hcount"):
        d["word"] = format_word(phi.word, A)
    else:
        d["coeffs"] = [frac_str(c) for c, _ in phi.terms]
        d["terms"] = [to_json(q, A) for _, q in phi.terms]
    d["defect_upper"] = frac_str(phi.defect_upper)
    if phi.defect_lower:
        d["defect_lower"] = frac_str(phi.defect_lower)
    if phi.empirical:
        d["empirical"] = True
    return d


def from_json(data: dict, A: Alphabet) -> Quasimorphism:
    try:
        kind = data["kind"]
        upper = data.get("defect_upper")
        if kind == "hom":
            return homomorphism({k: parse_frac(v) for k, v in data["weights"].items()}, A)
        if kind == "count":
            return counting(data["word"], A, defect_upper=upper)
        if kind == "hcount":
            return homogenized_counting(data["word"], A, defect_upper=upper)
        if kind == "lin":
            coeffs = [parse_frac(c) for c in data["coeffs"]]
            terms = [from_json(t, A) for t in data["terms"]]
            if len(coeffs) != len(terms):
                raise InputError("coeffs and terms differ in length")
            q = linear_combination(zip(coeffs, terms))
            if upper is not None:
                q = replace(q, defect_upper=parse_frac(upper))
            return q
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed quasimorphism JSON: {exc}") from exc
    raise InputError(f"unknown quasimorphism kind {data.get('kind')!r}")
