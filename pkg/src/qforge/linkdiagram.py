"""
Oriented link diagrams given as crossing lists, their quandle presentations,
Wirtinger presentations and coloring counts.

Each crossing records the over arc j, the incoming under arc k, the outgoing
under arc i and the sign; the relation is x_k *^sign x_j = x_i.

JSON format:

    {"arcs": s, "crossings": [{"over": j, "under_in": k, "under_out": i, "sign": 1}, ...]}
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from qforge.errors import InputError
from qforge.quandle import GroupPresentation, TableRack, presentation_from_relations

BRUTE_FORCE_LIMIT = 10**6
LIST_LIMIT = 100


@dataclass(frozen=True)
class Crossing:
    over: int
    under_in: int
    under_out: int
    sign: int = 1

    def to_json(self) -> dict:
        return {"over": self.over, "under_in": self.under_in,
                "under_out": self.under_out, "sign": self.sign}


@dataclass(frozen=True)
class DiagramCode:
    arcs: int
    crossings: tuple[Crossing, ...]

    def __post_init__(self):
        validate(self.arcs, self.crossings)

    @property
    def components(self) -> list[list[int]]:
        """Arcs grouped by link component (under_in and under_out share a strand)."""
        parent = list(range(self.arcs))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for c in self.crossings:
            ra, rb = find(c.under_in), find(c.under_out)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, list[int]] = {}
        for a in range(self.arcs):
            groups.setdefault(find(a), []).append(a)
        return sorted(groups.values())

    def mirror_reverse(self) -> "DiagramCode":
        """Flip every sign and swap the under arcs (same relations read backwards)."""
        return DiagramCode(self.arcs, tuple(Crossing(c.over, c.under_out, c.under_in, -c.sign)
                                            for c in self.crossings))

    def to_json(self) -> dict:
        return {"arcs": self.arcs, "crossings": [c.to_json() for c in self.crossings]}


def validate(arcs: int, crossings) -> None:
    if not isinstance(arcs, int) or isinstance(arcs, bool) or arcs < 1:
        raise InputError("arcs must be a positive integer")
    seen_in: dict[int, int] = {}
    seen_out: dict[int, int] = {}
    for n, c in enumerate(crossings):
        for name in ("over", "under_in", "under_out"):
            v = getattr(c, name)
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < arcs:
                raise InputError(f"crossing {n}: {name} = {v!r} is not an arc id in [0, {arcs})")
        if c.sign not in (1, -1):
            raise InputError(f"crossing {n}: sign must be 1 or -1, got {c.sign!r}")
        if c.under_in in seen_in:
            raise InputError(f"crossing {n}: arc {c.under_in} already enters crossing "
                             f"{seen_in[c.under_in]} from below")
        if c.under_out in seen_out:
            raise InputError(f"crossing {n}: arc {c.under_out} already leaves crossing "
                             f"{seen_out[c.under_out]} from below")
        seen_in[c.under_in] = n
        seen_out[c.under_out] = n
    for a in range(arcs):
        if (a in seen_in) != (a in seen_out):
            where = seen_in.get(a, seen_out.get(a))
            raise InputError(f"arc {a} is an open strand: it is under-crossing at crossing "
                             f"{where} at only one end")


def parse(text: str) -> DiagramCode:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return from_json(data)


def from_json(data) -> DiagramCode:
    if not isinstance(data, dict) or "arcs" not in data:
        raise InputError("diagram JSON must be an object with an 'arcs' field")
    crossings = []
    for n, c in enumerate(data.get("crossings", [])):
        if not isinstance(c, dict):
            raise InputError(f"crossing {n}: expected an object")
        missing = [k for k in ("over", "under_in", "under_out") if k not in c]
        if missing:
            raise InputError(f"crossing {n}: missing {', '.join(missing)}")
        crossings.append(Crossing(c["over"], c["under_in"], c["under_out"], c.get("sign", 1)))
    return DiagramCode(data["arcs"], tuple(crossings))


@dataclass(frozen=True)
class QuandlePresentation:
    generators: tuple[str, ...]
    # (k, j, i, sign): x_k *^sign x_j = x_i
    relations: tuple[tuple[int, int, int, int], ...]

    def format_relations(self) -> list[str]:
        g = self.generators
        return [f"{g[k]} {'*' if s == 1 else '*^-1'} {g[j]} = {g[i]}"
                for k, j, i, s in self.relations]


def presentation(code: DiagramCode) -> QuandlePresentation:
    gens = tuple(f"x{a}" for a in range(code.arcs))
    rels = tuple((c.under_in, c.over, c.under_out, c.sign) for c in code.crossings)
    return QuandlePresentation(gens, rels)


def wirtinger_presentation(pres: QuandlePresentation) -> GroupPresentation:
    """e_i = e_j^-s e_k e_j^s per relation, with exact abelianization."""
    names = [f"e_{g}" for g in pres.generators]
    rels = [(i, j, k, s) for k, j, i, s in pres.relations]
    return presentation_from_relations(len(pres.generators), rels, names)


def _satisfied(X: TableRack, rel, col) -> bool:
    k, j, i, s = rel
    op = X.op if s == 1 else X.inverse_table
    return op[col[k]][col[j]] == col[i]


def colorings(pres: QuandlePresentation, X: TableRack, limit: int | None = None):
    """Backtracking enumeration of colorings arcs -> X, in lexicographic order."""
    s = len(pres.generators)
    by_last: dict[int, list] = {}
    for rel in pres.relations:
        by_last.setdefault(max(rel[:3]), []).append(rel)
    col = [0] * s
    found = 0

    def rec(a):
        nonlocal found
        if a == s:
            found += 1
            yield tuple(col)
            return
        for v in range(X.size):
            col[a] = v
            if all(_satisfied(X, r, col) for r in by_last.get(a, ())):
                yield from rec(a + 1)
                if limit is not None and found >= limit:
                    return

    yield from rec(0)


def count_colorings(pres: QuandlePresentation, X: TableRack, check: bool = True) -> int:
    """Number of quandle homomorphisms Q(L) -> X.

    When |X|^s <= 10^6 the backtracking count is confirmed by brute force.
    """
    n = sum(1 for _ in colorings(pres, X))
    s = len(pres.generators)
    if check and X.size ** s <= BRUTE_FORCE_LIMIT:
        brute = brute_force_colorings(pres, X)
        if brute != n:
            raise AssertionError(f"backtracking found {n} colorings, brute force {brute}")
    return n


def brute_force_colorings(pres: QuandlePresentation, X: TableRack) -> int:
    s = len(pres.generators)
    return sum(all(_satisfied(X, r, col) for r in pres.relations)
               for col in itertools.product(range(X.size), repeat=s))


def list_colorings(pres: QuandlePresentation, X: TableRack, limit: int = LIST_LIMIT):
    """All colorings if there are at most `limit`, else None."""
    out = list(colorings(pres, X, limit + 1))
    return out if len(out) <= limit else None


# -- a few standard diagrams ----------------------------------------------------------------

def _code(arcs, rows) -> DiagramCode:
    return DiagramCode(arcs, tuple(Crossing(*r) for r in rows))


def unknot() -> DiagramCode:
    return DiagramCode(1, ())


def unlink(n: int = 2) -> DiagramCode:
    return DiagramCode(n, ())


def trefoil() -> DiagramCode:
    return _code(3, [(1, 0, 2, 1), (2, 1, 0, 1), (0, 2, 1, 1)])


def kinked_trefoil() -> DiagramCode:
    """The trefoil with one Reidemeister-1 kink added on arc 0."""
    return _code(4, [(1, 3, 2, 1), (2, 1, 0, 1), (0, 2, 1, 1), (3, 0, 3, 1)])


def figure_eight() -> DiagramCode:
    return _code(4, [(0, 1, 2, 1), (2, 3, 0, 1), (1, 2, 3, -1), (3, 0, 1, -1)])


def hopf_link() -> DiagramCode:
    return _code(2, [(1, 0, 0, 1), (0, 1, 1, 1)])


STANDARD = {
    "unknot": unknot, "unlink": unlink, "trefoil": trefoil,
    "kinked_trefoil": kinked_trefoil, "figure_eight": figure_eight, "hopf": hopf_link,
}
