"""
Rack and quandle cochain complexes of finite racks, with exact ranks.

An n-cochain on a rack of size m is a table of m**n rationals indexed by
tuples (x_1, ..., x_n) in lexicographic order (x_1 most significant).  The
coboundary C^{n-1} -> C^n is

    (d f)(x_1..x_n) = sum_i (-1)^i ( f(x_1..^x_i..x_n)
                                     - f(x_1*x_i, .., x_{i-1}*x_i, x_{i+1}, .., x_n) ).

Quandle cohomology uses the subcomplex of cochains vanishing on degenerate
tuples (x_i = x_{i+1} for some i).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from qforge.errors import InputError, UnsupportedDegreeError
from qforge.linalg import SparseMatrix, is_zero, matmul, rank
from qforge.quandle import TableRack, components

MAX_DEGREE = 3
THEORIES = ("rack", "quandle")


def _tuples(m: int, n: int):
    return itertools.product(range(m), repeat=n)


def _index(t, m: int) -> int:
    i = 0
    for x in t:
        i = i * m + x
    return i


def is_degenerate(t) -> bool:
    return any(t[i] == t[i + 1] for i in range(len(t) - 1))


@dataclass(frozen=True)
class Cochain:
    rack: TableRack
    degree: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.degree < 0:
            raise InputError("negative degree")
        vals = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.rack.size ** self.degree:
            raise InputError(f"a {self.degree}-cochain on {self.rack.size} elements needs "
                             f"{self.rack.size ** self.degree} values, got {len(vals)}")

    def __call__(self, *xs: int) -> Fraction:
        return self.values[_index(xs, self.rack.size)]

    @property
    def is_normalized(self) -> bool:
        """True if the cochain vanishes on degenerate tuples."""
        m = self.rack.size
        return all(self.values[_index(t, m)] == 0
                   for t in _tuples(m, self.degree) if is_degenerate(t))

    @classmethod
    def from_function(cls, X: TableRack, degree: int, f) -> "Cochain":
        return cls(X, degree, tuple(Fraction(f(*t)) for t in _tuples(X.size, degree)))

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "values": [f"{v.numerator}/{v.denominator}" for v in self.values]}

    @classmethod
    def from_json(cls, X: TableRack, data: dict) -> "Cochain":
        try:
            return cls(X, int(data["degree"]), tuple(Fraction(v) for v in data["values"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"malformed cochain JSON: {exc}") from exc


def _terms(X: TableRack, t: tuple[int, ...]):
    """Signed (n-1)-tuples making up (d f)(t)."""
    op = X.op
    n = len(t)
    for i in range(n):
        s = -1 if i % 2 == 0 else 1  # (-1)^(i+1) with 0-based i
        xi = t[i]
        yield s, t[:i] + t[i + 1:]
        yield -s, tuple(op[x][xi] for x in t[:i]) + t[i + 1:]


def _check_degree(n: int):
    if not 1 <= n <= MAX_DEGREE + 1:
        raise UnsupportedDegreeError(f"coboundary into degree {n} not supported "
                                     f"(targets 1..{MAX_DEGREE + 1})")


def coboundary(f: Cochain) -> Cochain:
    """d^{n-1} f for a cochain of degree n-1 <= 3."""
    X, n = f.rack, f.degree + 1
    _check_degree(n)
    m = X.size
    vals = []
    for t in _tuples(m, n):
        acc = Fraction(0)
        for s, u in _terms(X, t):
            acc += s * f.values[_index(u, m)]
        vals.append(acc)
    return Cochain(X, n, tuple(vals))


@dataclass(frozen=True)
class CoboundaryMatrix:
    """Matrix of d^{n-1}: C^{n-1} -> C^n; rows are n-tuples, columns (n-1)-tuples.

    For the quandle theory rows and columns range over nondegenerate tuples
    only, re-indexed consecutively in lexicographic order.
    """
    degree: int
    theory: str
    nrows: int
    ncols: int
    matrix: SparseMatrix

    def rank(self) -> int:
        return rank(self.matrix.values(), self.ncols)


def _basis(m: int, n: int, theory: str) -> list[tuple[int, ...]]:
    ts = list(_tuples(m, n))
    if theory == "quandle":
        ts = [t for t in ts if not is_degenerate(t)]
    return ts


def _check_theory(X: TableRack, theory: str):
    if theory not in THEORIES:
        raise InputError(f"theory must be one of {THEORIES}")
    if theory == "quandle" and not X.is_quandle:
        raise InputError("quandle cohomology requires a quandle")


def coboundary_matrix(X: TableRack, n: int, theory: str = "rack") -> CoboundaryMatrix:
    """The matrix of d^{n-1} into degree n (1 <= n <= 4)."""
    _check_degree(n)
    _check_theory(X, theory)
    m = X.size
    rows_b = _basis(m, n, theory)
    cols_b = _basis(m, n - 1, theory)
    col_index = {t: j for j, t in enumerate(cols_b)}
    M: SparseMatrix = {}
    for r, t in enumerate(rows_b):
        row: dict[int, int] = {}
        for s, u in _terms(X, t):
            j = col_index.get(u)
            if j is None:
                continue  # degenerate argument: the cochain vanishes there
            row[j] = row.get(j, 0) + s
        row = {j: v for j, v in row.items() if v}
        if row:
            M[r] = row
    return CoboundaryMatrix(n, theory, len(rows_b), len(cols_b), M)


def cochain_dimension(X: TableRack, n: int, theory: str = "rack") -> int:
    return len(_basis(X.size, n, theory))


def composite_is_zero(X: TableRack, n: int, theory: str = "rack") -> bool:
    """d^n o d^{n-1} = 0 as matrices (C^{n-1} -> C^{n+1})."""
    A = coboundary_matrix(X, n + 1, theory).matrix
    B = coboundary_matrix(X, n, theory).matrix
    return is_zero(matmul(A, B))


def preserves_degenerate(X: TableRack, n: int) -> bool:
    """d^{n-1} maps cochains vanishing on degenerate tuples to such cochains.

    Equivalently, in the full rack matrix, every row indexed by a degenerate
    n-tuple vanishes on the columns of nondegenerate (n-1)-tuples.
    """
    full = coboundary_matrix(X, n, "rack")
    m = X.size
    rows_b = list(_tuples(m, n))
    cols_b = list(_tuples(m, n - 1))
    for r, row in full.matrix.items():
        if not is_degenerate(rows_b[r]):
            continue
        if any(v and not is_degenerate(cols_b[j]) for j, v in row.items()):
            return False
    return True


def cohomology_dimension(X: TableRack, degree: int, theory: str = "rack") -> int:
    """dim H^n = dim C^n - rank d^n - rank d^{n-1} over Q, for n in 1..3."""
    if not 1 <= degree <= MAX_DEGREE:
        raise UnsupportedDegreeError(f"degree must be in 1..{MAX_DEGREE}")
    _check_theory(X, theory)
    dim = cochain_dimension(X, degree, theory)
    r_out = coboundary_matrix(X, degree + 1, theory).rank()
    r_in = coboundary_matrix(X, degree, theory).rank() if degree >= 1 else 0
    return dim - r_out - r_in


def cocycle_dimension(X: TableRack, degree: int, theory: str = "rack") -> int:
    """dim ker d^degree."""
    _check_theory(X, theory)
    return cochain_dimension(X, degree, theory) - coboundary_matrix(X, degree + 1, theory).rank()


@dataclass
class ComparisonReport:
    degree: int
    theory: str
    bounded_dimension: int
    dimension: int
    kernel_dimension: int
    reason: str

    def to_json(self) -> dict:
        return dict(self.__dict__)


def bounded_comparison_finite(X: TableRack, degree: int = 2, theory: str = "quandle") -> ComparisonReport:
    """Comparison map H^n_b -> H^n for a finite rack.

    Every cochain on a finite set is bounded, so the bounded and ordinary
    complexes coincide and the comparison map is the identity.
    """
    if theory == "quandle" and not X.is_quandle:
        theory = "rack"
    d = cohomology_dimension(X, degree, theory)
    return ComparisonReport(degree, theory, d, d, 0,
                            f"finite carrier ({X.size} elements): every cochain is bounded")


def components_count(X: TableRack) -> int:
    return len(components(X))
