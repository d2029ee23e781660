"""
Racks and quandles.

Three carriers are supported behind one small interface (`op`, `op_inv`,
`contains`):

* TableRack       -- finite racks given by an operation table, op[i][j] = i*j
* CosetQuandle    -- disjoint unions of right coset spaces (G/H_i, z_i) where G
                     is a free group or a free product of cyclic groups and
                     every H_i = <h_i> is cyclic
* PermutationRackZ -- the rack on Z with m*k = m+1

Coset quandle elements are pairs (part index, canonical representative).
"""

from __future__ import annotations

import functools
import itertools
import random
from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterable, Sequence

from qforge.errors import DomainError, InputError
from qforge.linalg import abelian_invariants
from qforge.words import (
    IDENTITY, Alphabet, GroupWord, check_word, cyclic_normal_form,
    element_order, enumerate_ball, format_word, invert, lex_key, normalize,
    parse_word, power, random_ball_word, word_length,
)


# -- finite tables --------------------------------------------------------------------

@dataclass
class AxiomReport:
    size: int
    right_invertible: bool
    self_distributive: bool
    idempotent: bool
    invertibility_witness: tuple | None = None
    distributivity_witness: tuple | None = None
    idempotence_witness: int | None = None

    @property
    def rack(self) -> bool:
        return self.right_invertible and self.self_distributive

    @property
    def quandle(self) -> bool:
        return self.rack and self.idempotent

    @property
    def classification(self) -> str:
        return "quandle" if self.quandle else "rack" if self.rack else "neither"


def _check_table_shape(op) -> tuple[tuple[int, ...], ...]:
    try:
        table = tuple(tuple(int(v) for v in row) for row in op)
    except (TypeError, ValueError) as exc:
        raise InputError(f"operation table must be a square integer array: {exc}") from exc
    n = len(table)
    if n == 0:
        raise InputError("empty operation table")
    for row in table:
        if len(row) != n:
            raise InputError("operation table is not square")
        for v in row:
            if not 0 <= v < n:
                raise InputError(f"table entry {v} outside 0..{n - 1}")
    return table


def check_axioms(op) -> AxiomReport:
    """Exhaustive check of right-invertibility, self-distributivity, idempotence."""
    table = _check_table_shape(op.op if isinstance(op, TableRack) else op)
    n = len(table)
    inv_w = None
    for j in range(n):
        col = [table[i][j] for i in range(n)]
        if len(set(col)) != n:
            i1, i2 = next((a, b) for a, b in itertools.combinations(range(n), 2)
                          if col[a] == col[b])
            inv_w = (i1, i2, j)
            break
    dist_w = None
    for x in range(n):
        tx = table[x]
        for y in range(n):
            xy = tx[y]
            ty = table[y]
            for z in range(n):
                if table[xy][z] != table[tx[z]][ty[z]]:
                    dist_w = (x, y, z)
                    break
            if dist_w:
                break
        if dist_w:
            break
    idem_w = next((i for i in range(n) if table[i][i] != i), None)
    return AxiomReport(n, inv_w is None, dist_w is None, idem_w is None,
                       inv_w, dist_w, idem_w)


@dataclass(frozen=True)
class TableRack:
    size: int
    op: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        table = _check_table_shape(self.op)
        object.__setattr__(self, "op", table)
        if self.size != len(table):
            raise InputError("size does not match the table")

    @classmethod
    def from_table(cls, op, check: bool = True) -> "TableRack":
        X = cls(len(op), op)
        if check:
            rep = check_axioms(X)
            if not rep.rack:
                raise InputError(f"table is not a rack: {rep}")
        return X

    @functools.cached_property
    def inverse_table(self) -> tuple[tuple[int, ...], ...]:
        n = self.size
        inv = [[0] * n for _ in range(n)]
        for j in range(n):
            for i in range(n):
                inv[self.op[i][j]][j] = i
        return tuple(tuple(r) for r in inv)

    @property
    def is_quandle(self) -> bool:
        return all(self.op[i][i] == i for i in range(self.size))

    def contains(self, x) -> bool:
        return isinstance(x, int) and 0 <= x < self.size

    def elements(self) -> range:
        return range(self.size)

    def op_(self, x: int, y: int) -> int:
        return self.op[x][y]

    def column(self, y: int) -> tuple[int, ...]:
        """The right translation S_y as a permutation x -> x*y."""
        return tuple(self.op[x][y] for x in range(self.size))

    def to_json(self) -> dict:
        return {"size": self.size, "op": [list(r) for r in self.op]}

    @classmethod
    def from_json(cls, data: dict, check: bool = True) -> "TableRack":
        try:
            op = data["op"]
            size = int(data.get("size", len(op)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed table JSON: {exc}") from exc
        if size != len(op):
            raise InputError("size does not match the table")
        return cls.from_table(op, check=check)


def dihedral(n: int) -> TableRack:
    """R_n: i*j = 2j - i mod n."""
    return TableRack.from_table([[(2 * j - i) % n for j in range(n)] for i in range(n)])


def trivial(n: int) -> TableRack:
    """T_n: i*j = i."""
    return TableRack.from_table([[i] * n for i in range(n)])


def alexander(n: int, t: int) -> TableRack:
    """Alexander quandle Z_n[t]/(...) with i*j = t*i + (1-t)*j mod n, t a unit."""
    if gcd(t, n) != 1:
        raise InputError("t must be a unit mod n")
    return TableRack.from_table([[(t * i + (1 - t) * j) % n for j in range(n)] for i in range(n)])


def _perm_mul(p: tuple, q: tuple) -> tuple:
    """Apply p, then q."""
    return tuple(q[p[i]] for i in range(len(p)))


def _perm_inv(p: tuple) -> tuple:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def permutation_closure(gens: Sequence[Sequence[int]]) -> list[tuple]:
    gens = [tuple(g) for g in gens]
    n = len(gens[0]) if gens else 0
    e = tuple(range(n))
    seen = {e}
    order = [e]
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = _perm_mul(x, g)
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
    return sorted(order)


def conjugation_quandle(gens: Sequence[Sequence[int]], subset: Iterable[tuple] | None = None) -> TableRack:
    """Conj(G) on the group generated by permutations `gens`: x*y = y^-1 x y.

    If `subset` is given it must be a union of conjugacy classes; the table
    is built on it in sorted order.
    """
    G = permutation_closure(gens)
    elems = sorted(set(map(tuple, subset))) if subset is not None else G
    index = {g: i for i, g in enumerate(elems)}
    table = []
    for x in elems:
        row = []
        for y in elems:
            c = _perm_mul(_perm_mul(_perm_inv(y), x), y)
            if c not in index:
                raise InputError("subset is not closed under conjugation")
            row.append(index[c])
        table.append(row)
    return TableRack.from_table(table)


def finite_coset_quandle(gens: Sequence[Sequence[int]],
                         parts: Sequence[tuple[Sequence[Sequence[int]], Sequence[int]]]) -> TableRack:
    """Table of the coset quandle of a finite permutation group.

    Each part is (generators of H_i, z_i); H_i must centralize z_i.  Cosets
    H_i x are listed part by part, each as its sorted element set.
    """
    G = permutation_closure(gens)
    elements: list[tuple[int, frozenset]] = []
    index: dict[tuple[int, frozenset], int] = {}
    zs = []
    for i, (hgens, z) in enumerate(parts):
        z = tuple(z)
        H = permutation_closure(hgens) if hgens else [tuple(range(len(z)))]
        for h in H:
            if _perm_mul(h, z) != _perm_mul(z, h):
                raise InputError(f"H_{i} does not centralize z_{i}")
        zs.append(z)
        for x in G:
            coset = frozenset(_perm_mul(h, x) for h in H)
            key = (i, coset)
            if key not in index:
                index[key] = len(elements)
                elements.append(key)
    reps = [min(c) for _, c in elements]
    n = len(elements)
    table = [[0] * n for _ in range(n)]
    for a, (i, cx) in enumerate(elements):
        x = reps[a]
        for b, (j, cy) in enumerate(elements):
            y = reps[b]
            # H_i z_i^-1 x y^-1 z_j y
            w = _perm_mul(_perm_mul(_perm_mul(_perm_mul(_perm_inv(zs[i]), x), _perm_inv(y)), zs[j]), y)
            coset = next(c for (p, c) in elements if p == i and w in c)
            table[a][b] = index[(i, coset)]
    return TableRack.from_table(table)


# -- components, Inn, Env ---------------------------------------------------------------

def components(X: TableRack) -> list[list[int]]:
    """Orbits of the right translations, each sorted, ordered by least element."""
    parent = list(range(X.size))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in range(X.size):
        for y in range(X.size):
            ra, rb = find(x), find(X.op[x][y])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for x in range(X.size):
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values())


def inner_group_order(X: TableRack) -> int:
    """|Inn(X)|, the order of the permutation group generated by all S_y."""
    from sympy.combinatorics import Permutation, PermutationGroup

    cols = {X.column(y) for y in range(X.size)}
    gens = [Permutation(list(c)) for c in cols if list(c) != list(range(X.size))]
    if not gens:
        return 1
    return int(PermutationGroup(gens).order())


@dataclass
class GroupPresentation:
    generators: list[str]
    # (lhs, conjugator, base, sign): e_lhs = e_conj^-sign e_base e_conj^sign
    relations: list[tuple[int, int, int, int]]
    free_rank: int
    torsion: list[int]

    def abelianization(self) -> tuple[int, list[int]]:
        return self.free_rank, self.torsion


def presentation_from_relations(ngens: int, relations: list[tuple[int, int, int, int]],
                                names: list[str] | None = None) -> GroupPresentation:
    rows = []
    for lhs, _, base, _ in relations:
        row: dict[int, int] = {}
        row[lhs] = row.get(lhs, 0) + 1
        row[base] = row.get(base, 0) - 1
        rows.append({k: v for k, v in row.items() if v})
    free, torsion = abelian_invariants(rows, ngens)
    names = names or [f"e{i}" for i in range(ngens)]
    return GroupPresentation(names, relations, free, torsion)


def env_presentation(X: TableRack) -> GroupPresentation:
    """Env(X) = < e_x | e_{x*y} = e_y^-1 e_x e_y >, with exact abelianization."""
    rels = [(X.op[x][y], y, x, 1) for x in range(X.size) for y in range(X.size)]
    return presentation_from_relations(X.size, rels)


# -- coset quandles ---------------------------------------------------------------------

@dataclass(frozen=True)
class CosetQuandle:
    alphabet: Alphabet
    parts: tuple[tuple[GroupWord, GroupWord], ...]

    def __post_init__(self):
        A = self.alphabet
        parts = tuple((h, z) for h, z in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise InputError("a coset quandle needs at least one part")
        for i, (h, z) in enumerate(parts):
            check_word(h, A)
            check_word(z, A)
            if normalize(h.syllables + z.syllables, A) != normalize(z.syllables + h.syllables, A):
                raise InputError(f"h_{i} = {format_word(h, A)} does not commute with "
                                 f"z_{i} = {format_word(z, A)}")

    def __hash__(self):
        return hash((self.alphabet, self.parts))

    def contains(self, x) -> bool:
        try:
            i, g = x
        except (TypeError, ValueError):
            return False
        if not (isinstance(i, int) and 0 <= i < len(self.parts) and isinstance(g, GroupWord)):
            return False
        try:
            check_word(g, self.alphabet)
        except InputError:
            return False
        return self.canonical(i, g) == g

    def _check(self, x):
        if not self.contains(x):
            raise InputError(f"{x!r} is not a canonical element of this coset quandle")

    def canonical(self, i: int, g: GroupWord) -> GroupWord:
        return _shortest_rep(self.alphabet, self.parts[i][0], g)

    def element(self, i: int, g: GroupWord | str) -> tuple[int, GroupWord]:
        if isinstance(g, str):
            g = parse_word(g, self.alphabet)
        return (i, self.canonical(i, g))

    def op_(self, x, y):
        self._check(x)
        self._check(y)
        return self._op(x, y)

    def _op(self, x, y):
        A = self.alphabet
        (i, a), (j, b) = x, y
        zi, zj = self.parts[i][1], self.parts[j][1]
        w = normalize(invert(zi, A).syllables + a.syllables + invert(b, A).syllables
                      + zj.syllables + b.syllables, A)
        return (i, self.canonical(i, w))

    def op_inv(self, x, y):
        self._check(x)
        self._check(y)
        A = self.alphabet
        (i, a), (j, b) = x, y
        zi, zj = self.parts[i][1], self.parts[j][1]
        # inverse of H_i a -> H_i z_i^-1 a b^-1 z_j b
        w = normalize(zi.syllables + a.syllables + invert(b, A).syllables
                      + invert(zj, A).syllables + b.syllables, A)
        return (i, self.canonical(i, w))

    def elements_in_ball(self, radius: int, parts: Iterable[int] | None = None) -> list[tuple[int, GroupWord]]:
        """Distinct elements whose canonical representative has length <= radius."""
        idx = range(len(self.parts)) if parts is None else parts
        out = []
        ball = list(enumerate_ball(self.alphabet, radius))
        for i in idx:
            seen = set()
            for g in ball:
                r = self.canonical(i, g)
                if r not in seen and word_length(r, self.alphabet) <= radius:
                    seen.add(r)
                    out.append((i, r))
        return out

    def random_element(self, rng: random.Random, radius: int, part: int | None = None):
        i = rng.randrange(len(self.parts)) if part is None else part
        return (i, self.canonical(i, random_ball_word(self.alphabet, radius, rng)))

    def format_element(self, x) -> str:
        i, g = x
        return f"{i}:{format_word(g, self.alphabet)}"

    def to_json(self) -> dict:
        A = self.alphabet
        return {"generators": list(A.generators), "orders": list(A.orders),
                "parts": [{"h": format_word(h, A), "z": format_word(z, A)} for h, z in self.parts]}

    @classmethod
    def from_json(cls, data: dict) -> "CosetQuandle":
        try:
            A = Alphabet.from_json(data)
            parts = tuple((parse_word(p["h"], A), parse_word(p["z"], A)) for p in data["parts"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed coset quandle JSON: {exc}") from exc
        return cls(A, parts)


@functools.lru_cache(maxsize=1 << 17)
def _shortest_rep(A: Alphabet, h: GroupWord, g: GroupWord) -> GroupWord:
    """Canonical representative of the right coset <h> g.

    The representative is the shortest element h^n g, ties broken by the
    lexicographic order.  For h a single generator letter this is the same
    as stripping the leading syllable on that generator.
    """
    if not h:
        return g
    if len(h.syllables) == 1:
        a, e = h.syllables[0]
        k = A.orders[a]
        if abs(e) == 1 if k is None else gcd(e, k) == 1:
            if g.syllables and g.syllables[0][0] == a:
                return GroupWord._raw(g.syllables[1:])
            return g
    return _scan_rep(A, h, g)


def _scan_rep(A: Alphabet, h: GroupWord, g: GroupWord) -> GroupWord:
    order = element_order(h, A)
    if order is not None:
        exps = range(order)
    else:
        c, t = cyclic_normal_form(h, A)
        # |h^n g| >= |n||c| - 2|t| - |g|, so only |n| <= (2|g| + 2|t|)/|c| can win
        bound = (2 * word_length(g, A) + 2 * word_length(t, A)) // word_length(c, A) + 1
        exps = range(-bound, bound + 1)
    best, best_key = None, None
    for n in exps:
        cand = normalize(power(h, n, A).syllables + g.syllables, A)
        key = (word_length(cand, A), lex_key(cand, A))
        if best is None or key < best_key:
            best, best_key = cand, key
    return best


def free_quandle(generators: Sequence[str]) -> CosetQuandle:
    """FQ(S) as the union of (F(S)/<a_i>, a_i)."""
    A = Alphabet.free(generators)
    parts = tuple((GroupWord(((i, 1),)), GroupWord(((i, 1),))) for i in range(len(A)))
    return CosetQuandle(A, parts)


def free_k_quandle(generators: Sequence[str], k: int) -> CosetQuandle:
    """FQ_k(S) as the union of (F_k(S)/C(a_i), a_i) with C(a_i) = <a_i>."""
    A = Alphabet.cyclic_product(generators, k)
    parts = tuple((GroupWord(((i, 1),)), GroupWord(((i, 1),))) for i in range(len(A)))
    return CosetQuandle(A, parts)


def free_product(X1: CosetQuandle, X2: CosetQuandle) -> CosetQuandle:
    """Free product of coset quandles over disjoint alphabets.

    The ambient group is the free product of the two ambient groups and the
    stabilizers stay the per-factor cyclic subgroups.
    """
    A1, A2 = X1.alphabet, X2.alphabet
    clash = set(A1.generators) & set(A2.generators)
    if clash:
        raise InputError(f"alphabets share generators {sorted(clash)}")
    A = Alphabet(A1.generators + A2.generators, A1.orders + A2.orders)
    shift = len(A1)

    def lift(w: GroupWord) -> GroupWord:
        return GroupWord(tuple((g + shift, e) for g, e in w.syllables))

    parts = X1.parts + tuple((lift(h), lift(z)) for h, z in X2.parts)
    return CosetQuandle(A, parts)


# -- choosers of coset representatives ------------------------------------------------------

def _shortest(X: CosetQuandle, i: int, rep: GroupWord) -> GroupWord:
    return rep


def _shifted(X: CosetQuandle, i: int, rep: GroupWord) -> GroupWord:
    """h^s * rep with s = 1 + (|rep| mod 2): another transversal of <h>."""
    A = X.alphabet
    h = X.parts[i][0]
    if not h:
        return rep
    s = 1 + word_length(rep, A) % 2
    order = element_order(h, A)
    if order is not None:
        s %= order
    return normalize(power(h, s, A).syllables + rep.syllables, A)


CHOOSERS: dict[str, Callable[[CosetQuandle, int, GroupWord], GroupWord]] = {
    "shortest": _shortest,
    "shifted": _shifted,
}


# -- the permutation rack on Z -------------------------------------------------------------

@dataclass(frozen=True)
class PermutationRackZ:
    """The rack on Z with m*k = m+1 (not a quandle)."""

    def contains(self, x) -> bool:
        return isinstance(x, int) and not isinstance(x, bool)

    def op_(self, m: int, k: int) -> int:
        if not (self.contains(m) and self.contains(k)):
            raise InputError("elements of the permutation rack are integers")
        return m + 1

    def op_inv(self, m: int, k: int) -> int:
        if not (self.contains(m) and self.contains(k)):
            raise InputError("elements of the permutation rack are integers")
        return m - 1


# -- uniform operations ----------------------------------------------------------------------

def rack_op(X, x, y):
    if isinstance(X, TableRack):
        if not (X.contains(x) and X.contains(y)):
            raise InputError(f"element outside 0..{X.size - 1}")
        return X.op[x][y]
    return X.op_(x, y)


def rack_op_inv(X, x, y):
    if isinstance(X, TableRack):
        if not (X.contains(x) and X.contains(y)):
            raise InputError(f"element outside 0..{X.size - 1}")
        return X.inverse_table[x][y]
    return X.op_inv(x, y)


# -- the metric ----------------------------------------------------------------------------

def _table_distances(X: TableRack, x: int) -> dict[int, int]:
    dist = {x: 0}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for v in set(X.op[u]):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def metric_distance(X, x, y, cap: int = 3, op_radius: int = 3):
    """Least n with y = (((x*x_1)*x_2)...)*x_n, or None when not found within cap.

    Finite tables are searched exactly.  For coset quandles the operating
    elements are restricted to those with representatives in the ball of
    radius op_radius, so a returned value is an upper bound for the true
    distance and None means "> cap" for this restricted search.
    """
    if isinstance(X, TableRack):
        if not (X.contains(x) and X.contains(y)):
            raise InputError("element outside the rack")
        comp = next(c for c in components(X) if x in c)
        if y not in comp:
            raise DomainError(f"{x} and {y} lie in different components")
        d = _table_distances(X, x).get(y)
        return d if d is not None and d <= cap else None
    if isinstance(X, CosetQuandle):
        X._check(x)
        X._check(y)
        if x[0] != y[0]:
            raise DomainError("elements of different parts lie in different components")
        if x == y:
            return 0
        ops = X.elements_in_ball(op_radius)
        frontier = {x}
        seen = {x}
        for d in range(1, cap + 1):
            nxt = set()
            for u in frontier:
                for o in ops:
                    v = X._op(u, o)
                    if v == y:
                        return d
                    if v not in seen:
                        seen.add(v)
                        nxt.add(v)
            frontier = nxt
        return None
    if isinstance(X, PermutationRackZ):
        return y - x if y >= x and y - x <= cap else None
    raise InputError(f"unsupported rack type {type(X).__name__}")


def component_diameter(X: TableRack) -> list[int]:
    """Exact diameter of each component (ordered as in `components`)."""
    out = []
    for comp in components(X):
        diam = 0
        for x in comp:
            dist = _table_distances(X, x)
            for y in comp:
                if y not in dist:
                    # only possible for racks where S_y^-1 is not reached
                    raise DomainError(f"{y} unreachable from {x} by right multiplications")
                diam = max(diam, dist[y])
        out.append(diam)
    return out


@dataclass
class TruncatedMetric:
    part: int
    radius: int
    op_radius: int
    nodes: int
    reached: int
    eccentricity: int | None = None
    diameter: int | None = None


def truncated_distances(X: CosetQuandle, base, radius: int, op_radius: int | None = None,
                        ops: list | None = None) -> dict:
    """BFS distances from base inside the part, truncated to reps of length <= radius.

    Operating elements have representatives of length <= op_radius
    (default: radius).  Only moves staying inside the truncation are used,
    so each distance is an upper bound for the true d while the growth of
    the eccentricity with the radius is a lower-bound statement.
    """
    A = X.alphabet
    op_radius = radius if op_radius is None else op_radius
    ops = X.elements_in_ball(op_radius) if ops is None else ops
    dist = {base: 0}
    queue = deque([base])
    while queue:
        u = queue.popleft()
        for o in ops:
            v = X._op(u, o)
            if v not in dist and word_length(v[1], A) <= radius:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def truncated_eccentricity(X: CosetQuandle, base, radius: int,
                           op_radius: int | None = 3) -> TruncatedMetric:
    X._check(base)
    op_radius = radius if op_radius is None else op_radius
    dist = truncated_distances(X, base, radius, op_radius)
    nodes = X.elements_in_ball(radius, parts=[base[0]])
    return TruncatedMetric(base[0], radius, op_radius, len(nodes), len(dist),
                           eccentricity=max(dist.values()))


def truncated_diameter(X: CosetQuandle, part: int, radius: int,
                       op_radius: int | None = 3) -> TruncatedMetric:
    """Largest finite truncated distance between elements of one part."""
    op_radius = radius if op_radius is None else op_radius
    nodes = X.elements_in_ball(radius, parts=[part])
    ops = X.elements_in_ball(op_radius)
    diam, reached = 0, len(nodes)
    for x in nodes:
        dist = truncated_distances(X, x, radius, op_radius, ops=ops)
        reached = min(reached, len(dist))
        diam = max(diam, max(dist.values()))
    return TruncatedMetric(part, radius, op_radius, len(nodes), reached, diameter=diam)


def load_quandle(data: dict):
    """Build a TableRack or CosetQuandle from its JSON form."""
    if "op" in data:
        return TableRack.from_json(data)
    if "parts" in data:
        return CosetQuandle.from_json(data)
    raise InputError("JSON is neither a table rack nor a coset quandle")
