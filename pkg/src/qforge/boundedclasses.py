"""
Unbounded quandle quasimorphisms from homogeneous group quasimorphisms, and
the bounded 2-cocycles they define.

Given a coset quandle X = U_i (G/<h_i>, z_i), a homogeneous quasimorphism
phi on G vanishing on <h_{i0}>, the map

    phi_X(H_{i0} a) = phi(rep(a)),   phi_X = 0 on the other parts,

is a quandle quasimorphism with

    |phi_X(x) - phi_X(x*y)| <= max_r |phi(z_{i0}) - phi(z_r)| + 6 D(phi).

When phi(x) != 0 it grows along powers, |phi_X(H x^n)| >= n|phi(x)| - D(phi),
so d^1 phi_X is a bounded 2-cocycle whose class is nonzero in H^2_b.

Reports serialize as {"kind", "parameters", "certified", "empirical",
"witnesses", "seed", ...}, rationals as "p/q" strings.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from qforge.errors import CertificationError, InputError, PreconditionError
from qforge.quandle import (
    CHOOSERS, CosetQuandle, PermutationRackZ, free_k_quandle, rack_op,
)
from qforge.quasimorphism import (
    EXHAUSTIVE_LIMIT, Quasimorphism, evaluate, frac_str, homogenized_counting,
    linear_combination, vanishes_on_cyclic,
)
from qforge.words import (
    GroupWord, enumerate_ball, format_word, parse_word, power,
)

DEFAULT_SEARCH_RADIUS = 4


@dataclass(frozen=True)
class QuandleQuasimorphism:
    """phi_X on a coset quandle, or e_n on the permutation rack.

    For the coset case `source` is the homogeneous group quasimorphism and
    `base` a representative x with phi(x) != 0 (None if the search failed).
    For the permutation rack `en` holds the parameter n.
    """
    quandle: CosetQuandle | PermutationRackZ
    source: Quasimorphism | None = None
    part: int = 0
    chooser: str = "shortest"
    base: GroupWord | None = None
    en: int | None = None
    warnings: tuple[str, ...] = ()

    def value(self, x) -> Fraction:
        if self.en is not None:
            return Fraction(x - self.en) if x >= self.en else Fraction(0)
        i, rep = x
        if i != self.part:
            return Fraction(0)
        X = self.quandle
        return evaluate(self.source, CHOOSERS[self.chooser](X, i, rep), X.alphabet)

    __call__ = value

    def coboundary(self, x, y) -> Fraction:
        """(d^1 phi_X)(x, y) = phi_X(x) - phi_X(x*y)."""
        return self.value(x) - self.value(rack_op(self.quandle, x, y))

    @property
    def defect(self) -> Fraction:
        if self.en is not None:
            return Fraction(0)
        return self.source.defect_upper

    @property
    def empirical(self) -> bool:
        return self.source is not None and self.source.empirical

    def cocycle_bound(self) -> Fraction:
        """Certified bound for sup |phi_X(x) - phi_X(x*y)|."""
        if self.en is not None:
            return Fraction(1)
        X, phi = self.quandle, self.source
        A = X.alphabet
        z0 = evaluate(phi, X.parts[self.part][1], A)
        spread = max(abs(z0 - evaluate(phi, z, A)) for _, z in X.parts)
        return spread + 6 * phi.defect_upper

    def describe(self) -> str:
        if self.en is not None:
            return f"e_{self.en} on the permutation rack"
        return f"phi_X for {_describe_qm(self.source, self.quandle)} on part {self.part}"


def _describe_qm(phi: Quasimorphism, X) -> str:
    A = X.alphabet
    if phi.kind in ("count", "hcount"):
        return f"{phi.kind}({format_word(phi.word, A)})"
    if phi.kind == "hom":
        return "hom(" + ",".join(frac_str(w) for w in phi.weights) + ")"
    return " + ".join(f"{frac_str(c)}*{_describe_qm(q, X)}" for c, q in phi.terms)


def _fmt(X, x) -> str:
    if isinstance(X, CosetQuandle):
        return X.format_element(x)
    return str(x)


def _base_json(kind: str, parameters: dict, certified: bool, empirical: bool,
               witnesses: list, seed: int | None, **extra) -> dict:
    out = {"kind": kind, "parameters": parameters, "certified": certified,
           "empirical": empirical, "witnesses": witnesses, "seed": seed}
    out.update(extra)
    return out


# -- construction -----------------------------------------------------------------------

def find_base(X: CosetQuandle, phi: Quasimorphism, part: int, chooser: str = "shortest",
              radius: int = DEFAULT_SEARCH_RADIUS) -> GroupWord | None:
    """First representative (length-then-lex over the ball) with phi != 0."""
    A = X.alphabet
    for g in enumerate_ball(A, radius):
        rep = CHOOSERS[chooser](X, part, X.canonical(part, g))
        if evaluate(phi, rep, A) != 0:
            return rep
    return None


def build_phi_X(X: CosetQuandle, phi: Quasimorphism, part: int = 0, chooser: str = "shortest",
                search_radius: int = DEFAULT_SEARCH_RADIUS) -> QuandleQuasimorphism:
    if not isinstance(X, CosetQuandle):
        raise InputError("build_phi_X needs a coset quandle")
    if not 0 <= part < len(X.parts):
        raise InputError(f"part index {part} out of range")
    if chooser not in CHOOSERS:
        raise InputError(f"unknown chooser {chooser!r}; choose from {sorted(CHOOSERS)}")
    h = X.parts[part][0]
    if not vanishes_on_cyclic(phi, h, X.alphabet):  # raises if not homogeneous
        raise PreconditionError(
            f"phi does not vanish on the stabilizer <{format_word(h, X.alphabet)}>")
    base = find_base(X, phi, part, chooser, search_radius)
    warnings = ()
    if base is None:
        warnings = (f"no representative with nonzero value in the ball of radius "
                    f"{search_radius}; no growth certificate possible",)
    return QuandleQuasimorphism(X, phi, part, chooser, base, warnings=warnings)


def en_family(n: int) -> QuandleQuasimorphism:
    """e_n(m) = m - n for m >= n and 0 for m < n on the rack m*k = m+1."""
    return QuandleQuasimorphism(PermutationRackZ(), en=int(n))


# -- defect -------------------------------------------------------------------------------

@dataclass
class DefectReport:
    phi: QuandleQuasimorphism
    radius: int
    pairs: int
    exhaustive: bool
    observed: Fraction
    bound: Fraction
    witness: tuple | None
    seed: int

    @property
    def certified(self) -> bool:
        return self.observed <= self.bound

    def to_json(self) -> dict:
        X = self.phi.quandle
        wit = ([{"x": _fmt(X, self.witness[0]), "y": _fmt(X, self.witness[1]),
                 "value": frac_str(self.observed)}] if self.witness else [])
        return _base_json("defect_report",
                          {"radius": self.radius, "pairs": self.pairs,
                           "exhaustive": self.exhaustive, "phi": self.phi.describe()},
                          self.certified, self.phi.empirical, wit, self.seed,
                          observed=frac_str(self.observed), bound=frac_str(self.bound))


def _pairs(X, radius: int, samples: int, seed: int):
    if isinstance(X, PermutationRackZ):
        pts = range(-radius, radius + 1)
        return list(itertools.product(pts, pts)), True
    elems = X.elements_in_ball(radius)
    if len(elems) ** 2 <= EXHAUSTIVE_LIMIT:
        return list(itertools.product(elems, elems)), True
    rng = random.Random(seed)
    return [(X.random_element(rng, radius), X.random_element(rng, radius))
            for _ in range(samples)], False


def defect_report(phiX: QuandleQuasimorphism, radius: int = 3, samples: int = 10_000,
                  seed: int = 0) -> DefectReport:
    """Largest |phi_X(x) - phi_X(x*y)| on ball pairs, checked against the bound.

    Pairs are exhaustive when there are at most 10^6 of them, otherwise
    `samples` seeded random pairs.  Raises CertificationError on violation.
    """
    pairs, exhaustive = _pairs(phiX.quandle, radius, samples, seed)
    bound = phiX.cocycle_bound()
    best, witness = Fraction(0), None
    for x, y in pairs:
        d = abs(phiX.coboundary(x, y))
        if d > best:
            best, witness = d, (x, y)
    rep = DefectReport(phiX, radius, len(pairs), exhaustive, best, bound, witness, seed)
    if not rep.certified:
        X = phiX.quandle
        raise CertificationError(
            f"|phi_X(x) - phi_X(x*y)| = {best} at x={_fmt(X, witness[0])}, "
            f"y={_fmt(X, witness[1])} exceeds the bound {bound}")
    return rep


def cocycle_check(phiX: QuandleQuasimorphism, samples: int = 1000, radius: int = 4,
                  seed: int = 0) -> int:
    """Pointwise d^2(d^1 phi_X) = 0 on sampled triples; returns the count checked.

    (d^2 c)(x,y,z) = c(x,z) - c(x*y,z) - c(x,y) + c(x*z, y*z).
    """
    X = phiX.quandle
    rng = random.Random(seed)
    c = phiX.coboundary
    for _ in range(samples):
        if isinstance(X, PermutationRackZ):
            x, y, z = (rng.randint(-radius, radius) for _ in range(3))
        else:
            x, y, z = (X.random_element(rng, radius) for _ in range(3))
        xy, xz, yz = rack_op(X, x, y), rack_op(X, x, z), rack_op(X, y, z)
        if c(x, z) - c(xy, z) - c(x, y) + c(xz, yz) != 0:
            raise CertificationError(f"cocycle identity fails at {_fmt(X, x)}, "
                                     f"{_fmt(X, y)}, {_fmt(X, z)}")
    return samples


def off_part_vanishes(phiX: QuandleQuasimorphism, radius: int = 3) -> bool:
    X = phiX.quandle
    others = [i for i in range(len(X.parts)) if i != phiX.part]
    return all(phiX.value(x) == 0 for x in X.elements_in_ball(radius, parts=others))


# -- growth -------------------------------------------------------------------------------

@dataclass
class GrowthCertificate:
    phi: QuandleQuasimorphism
    base: GroupWord | int
    base_value: Fraction
    ns: list[int]
    values: list[Fraction]
    defect: Fraction

    @property
    def slope_lower_bound(self) -> Fraction:
        return abs(self.base_value)

    @property
    def certified(self) -> bool:
        return all(abs(v) >= n * abs(self.base_value) - self.defect
                   for n, v in zip(self.ns, self.values)) and self.base_value != 0

    def to_json(self) -> dict:
        X = self.phi.quandle
        base = (format_word(self.base, X.alphabet) if isinstance(self.base, GroupWord)
                else self.base)
        return _base_json("growth_certificate",
                          {"phi": self.phi.describe(), "n_max": max(self.ns)},
                          self.certified, self.phi.empirical,
                          [{"base": base, "base_value": frac_str(self.base_value)}], None,
                          values=[frac_str(v) for v in self.values],
                          slope_lower_bound=frac_str(self.slope_lower_bound),
                          defect=frac_str(self.defect))


def growth_certificate(phiX: QuandleQuasimorphism, n_max: int = 32,
                       base: GroupWord | None = None) -> GrowthCertificate:
    """Check |phi_X(H x^n)| >= n|phi(x)| - D for n = 0..n_max."""
    if phiX.en is not None:
        # e_n along the orbit m = n + t: values are exactly t
        ns = list(range(n_max + 1))
        vals = [phiX.value(phiX.en + t) for t in ns]
        cert = GrowthCertificate(phiX, phiX.en + 1, Fraction(1), ns, vals, Fraction(0))
    else:
        X, phi = phiX.quandle, phiX.source
        A = X.alphabet
        base = phiX.base if base is None else base
        if base is None:
            raise PreconditionError("no base element with nonzero value; cannot certify growth")
        b = evaluate(phi, base, A)
        if b == 0:
            raise PreconditionError("base element has value 0")
        ns = list(range(n_max + 1))
        vals = [phiX.value((phiX.part, X.canonical(phiX.part, power(base, n, A)))) for n in ns]
        cert = GrowthCertificate(phiX, base, b, ns, vals, phi.defect_upper)
    if not cert.certified:
        bad = next(n for n, v in zip(cert.ns, cert.values)
                   if abs(v) < n * abs(cert.base_value) - cert.defect)
        raise CertificationError(f"growth bound fails at n = {bad}")
    return cert


# -- chooser independence ------------------------------------------------------------------

@dataclass
class ChooserReport:
    choosers: tuple[str, str]
    samples: int
    eta_max: Fraction
    defect: Fraction
    pairs_checked: int
    mismatches: int
    empirical: bool
    seed: int

    @property
    def certified(self) -> bool:
        return self.eta_max <= self.defect and self.mismatches == 0

    def to_json(self) -> dict:
        return _base_json("chooser_independence",
                          {"choosers": list(self.choosers), "samples": self.samples,
                           "pairs": self.pairs_checked},
                          self.certified, self.empirical, [], self.seed,
                          eta_max=frac_str(self.eta_max), defect=frac_str(self.defect),
                          mismatches=self.mismatches)


def chooser_independence(X: CosetQuandle, phi: Quasimorphism, part: int = 0,
                         chooser1: str = "shortest", chooser2: str = "shifted",
                         samples: int = 1000, radius: int = 6, seed: int = 0) -> ChooserReport:
    """eta = phi_X - phi_X' is bounded by D and d^1(phi_X - phi_X') = d^1 eta."""
    p1 = build_phi_X(X, phi, part, chooser1)
    p2 = build_phi_X(X, phi, part, chooser2)
    rng = random.Random(seed)
    eta_max, mismatches = Fraction(0), 0
    for _ in range(samples):
        x = X.random_element(rng, radius, part=part)
        eta_max = max(eta_max, abs(p1.value(x) - p2.value(x)))
    for _ in range(samples):
        x = X.random_element(rng, radius)
        y = X.random_element(rng, radius)
        xy = rack_op(X, x, y)
        lhs = p1.coboundary(x, y) - p2.coboundary(x, y)
        eta_x = p1.value(x) - p2.value(x)
        eta_xy = p1.value(xy) - p2.value(xy)
        if lhs != eta_x - eta_xy:
            mismatches += 1
    rep = ChooserReport((chooser1, chooser2), samples, eta_max, phi.defect_upper,
                        samples, mismatches, phi.empirical, seed)
    if not rep.certified:
        raise CertificationError(
            f"chooser independence fails: |eta| max {eta_max} vs D = {phi.defect_upper}, "
            f"{mismatches} coboundary mismatches")
    return rep


# -- independence ---------------------------------------------------------------------------

@dataclass
class TrialResult:
    index: int
    coefficients: tuple[Fraction, ...]
    witness: GroupWord | None
    value: Fraction | None
    growth: GrowthCertificate | None

    @property
    def status(self) -> str:
        return "witness" if self.growth is not None else "inconclusive"


@dataclass
class IndependenceReport:
    family: list[str]
    ball_radius: int
    n_max: int
    trials: list[TrialResult]
    empirical: bool
    seed: int
    alphabet: object = None

    @property
    def witnessed(self) -> int:
        return sum(t.status == "witness" for t in self.trials)

    @property
    def inconclusive(self) -> int:
        return len(self.trials) - self.witnessed

    def to_json(self) -> dict:
        wit = []
        for t in self.trials:
            entry = {"trial": t.index, "coefficients": [frac_str(c) for c in t.coefficients],
                     "status": t.status}
            if t.witness is not None:
                entry["g"] = format_word(t.witness, self.alphabet)
                entry["value"] = frac_str(t.value)
            wit.append(entry)
        return _base_json("independence_certificate",
                          {"family": self.family, "ball_radius": self.ball_radius,
                           "n_max": self.n_max, "trials": len(self.trials)},
                          self.inconclusive == 0, self.empirical, wit, self.seed,
                          witnessed=self.witnessed, inconclusive=self.inconclusive)


def _random_coefficients(rng: random.Random, k: int) -> tuple[Fraction, ...]:
    while True:
        c = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(k))
        if any(c):
            return c


def independence_certificate(X: CosetQuandle, family: Sequence[QuandleQuasimorphism],
                             coeff_trials: int = 20, ball_radius: int = 4, n_max: int = 8,
                             seed: int = 0,
                             coefficients: Sequence[Sequence] | None = None) -> IndependenceReport:
    """Seeded coefficient trials; each either yields a growth witness or is inconclusive.

    A witness means the combination sum c_k phi_k,X is unbounded on the
    component of part i0, so its coboundary class is nonzero.  An
    inconclusive trial is never read as linear dependence.
    """
    if not family:
        raise InputError("empty family")
    parts = {f.part for f in family}
    if len(parts) != 1 or any(f.quandle != X for f in family):
        raise InputError("family members must live on the same quandle and part")
    part = parts.pop()
    A = X.alphabet
    if coefficients is None:
        vectors = [_random_coefficients(random.Random(f"{seed}:{t}"), len(family))
                   for t in range(coeff_trials)]
    else:
        vectors = [tuple(Fraction(c) for c in v) for v in coefficients]
    trials = []
    for t, c in enumerate(vectors):
        if len(c) != len(family):
            raise InputError("coefficient vector length does not match the family")
        if not any(c):
            raise InputError("zero coefficient vector")
        combo = linear_combination((ck, f.source) for ck, f in zip(c, family) if ck)
        phiX = QuandleQuasimorphism(X, combo, part, family[0].chooser)
        base = find_base(X, combo, part, phiX.chooser, ball_radius)
        if base is None:
            trials.append(TrialResult(t, c, None, None, None))
            continue
        try:
            growth = growth_certificate(phiX, n_max, base=base)
        except CertificationError:
            growth = None
        trials.append(TrialResult(t, c, base, evaluate(combo, base, A), growth))
    return IndependenceReport([f.describe() for f in family], ball_radius, n_max, trials,
                              any(f.empirical for f in family), seed, A)


def counting_family(X: CosetQuandle, words: Sequence[str], part: int = 0,
                    chooser: str = "shortest") -> list[QuandleQuasimorphism]:
    A = X.alphabet
    return [build_phi_X(X, homogenized_counting(w, A), part, chooser) for w in words]


# -- the e_n family ------------------------------------------------------------------------

@dataclass
class EnReport:
    ns: list[int]
    m_range: tuple[int, int]
    max_abs_coboundary: Fraction
    unit_above_n: bool
    linear_growth: bool
    pairwise_distinct: bool
    independent_classes: int
    reason: str

    @property
    def certified(self) -> bool:
        return (self.max_abs_coboundary <= 1 and self.unit_above_n and self.linear_growth
                and self.pairwise_distinct)

    def to_json(self) -> dict:
        return _base_json("en_family", {"ns": self.ns, "m_range": list(self.m_range)},
                          self.certified, False, [], None,
                          max_abs_coboundary=frac_str(self.max_abs_coboundary),
                          unit_above_n=self.unit_above_n, linear_growth=self.linear_growth,
                          pairwise_distinct=self.pairwise_distinct,
                          independent_classes=self.independent_classes,
                          independence_reason=self.reason)


def en_independent_classes(ns: Sequence[int]) -> tuple[int, str]:
    """Dimension of the span of the classes [d^1 e_n] in the kernel of c^2.

    For m >= max(ns) every e_n is m - n, so sum c_n e_n = (sum c_n) m + const
    there and is constant (= 0) below min(ns).  A combination is therefore
    bounded exactly when sum c_n = 0: the classes span a space of dimension 1
    (0 for an empty list), whatever the number of distinct n.
    """
    if not ns:
        return 0, "empty family"
    return 1, ("e_n - e_n' is bounded by |n - n'| on Z, so all classes [d^1 e_n] coincide "
               "modulo bounded functions; only sum c_n != 0 gives an unbounded combination")


def en_report(ns: Sequence[int], m_range: tuple[int, int] = (-100, 100),
              growth_steps: int = 50) -> EnReport:
    lo, hi = m_range
    fams = [en_family(n) for n in ns]
    max_abs = Fraction(0)
    unit = True
    tables = []
    for f in fams:
        row = []
        for m in range(lo, hi + 1):
            d = f.coboundary(m, 0)
            row.append(d)
            max_abs = max(max_abs, abs(d))
            if m >= f.en and abs(d) != 1:
                unit = False
        tables.append(tuple(row))
    growth = all(f.value(f.en + t) == t for f in fams for t in range(growth_steps + 1))
    distinct = len(set(tables)) == len(tables)
    dim, reason = en_independent_classes(list(ns))
    return EnReport(list(ns), m_range, max_abs, unit, growth, distinct, dim, reason)


# -- free k-quandles -------------------------------------------------------------------------

@dataclass
class KQuandlePipelineReport:
    generators: list[str]
    k: int
    word: str
    warnings: list[str]
    base: str | None
    defect: DefectReport | None
    growth: GrowthCertificate | None
    defect_upper: Fraction

    @property
    def certified(self) -> bool:
        return self.growth is not None and self.defect is not None and self.defect.certified

    def to_json(self) -> dict:
        wit = [{"base": self.base}] if self.base else []
        return _base_json("k_quandle_pipeline",
                          {"generators": self.generators, "k": self.k, "word": self.word},
                          self.certified, True, wit, None,
                          warnings=self.warnings, defect_upper=frac_str(self.defect_upper),
                          defect_report=self.defect.to_json() if self.defect else None,
                          growth=self.growth.to_json() if self.growth else None)


def k_quandle_pipeline(generators: Sequence[str], k: int, word: str = "ab", n_max: int = 16,
                       radius: int = 3, samples: int = 10_000, seed: int = 0,
                       search_radius: int = DEFAULT_SEARCH_RADIUS) -> KQuandlePipelineReport:
    """FQ_k(S), the homogenized counting quasimorphism of `word`, phi_X and its certificates."""
    gens = list(generators)
    if k < 2:
        raise InputError("k must be at least 2")
    warnings = []
    if not ((len(gens) >= 2 and k >= 3) or (len(gens) >= 3 and k == 2)):
        warnings.append(f"(|S|, k) = ({len(gens)}, {k}) is outside |S| >= 2, k >= 3 or "
                        f"|S| >= 3, k = 2; bounded behaviour is expected here")
    X = free_k_quandle(gens, k)
    A = X.alphabet
    w = parse_word(word, A)
    if len({g for g, _ in w.syllables}) < 2:
        raise InputError("the counting word must use at least two distinct generators")
    phi = homogenized_counting(w, A)
    phiX = build_phi_X(X, phi, 0, search_radius=search_radius)
    warnings.extend(phiX.warnings)
    defect = defect_report(phiX, radius, samples, seed)
    growth = growth_certificate(phiX, n_max) if phiX.base is not None else None
    base = format_word(phiX.base, A) if phiX.base is not None else None
    return KQuandlePipelineReport(gens, k, word, warnings, base, defect, growth,
                                  phi.defect_upper)
