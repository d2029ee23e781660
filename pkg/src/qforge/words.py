"""
Words in free groups F(S) and free products of cyclic groups Z_k * ... * Z_k.

Elements are stored as syllable normal forms: a tuple of (generator index,
exponent) pairs with adjacent generators distinct.  Exponents of a generator
of finite order k live in 1..k-1; free generators carry any nonzero integer.

Words do not know their alphabet.  Every operation takes the Alphabet
explicitly, so a GroupWord is plain, hashable data.

>>> A = Alphabet.free("ab")
>>> w = parse_word("ab^-1", A)
>>> format_word(invert(w, A), A)
'ba^-1'
>>> format_word(multiply(parse_word("ab", A), parse_word("b^-1a", A), A), A)
'a^2'
"""

from __future__ import annotations

import functools
import random
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from qforge.errors import InputError

Syllable = tuple[int, int]
# A token is one scanning letter: (generator, +1 | -1 | 0).  Sign 0 marks the
# self-inverse half-turn a^(k/2) of an even-order generator.
Token = tuple[int, int]


@dataclass(frozen=True)
class Alphabet:
    generators: tuple[str, ...]
    orders: tuple[int | None, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        orders = tuple(self.orders)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "orders", orders)
        if len(gens) != len(orders):
            raise InputError("generators and orders differ in length")
        if len(set(gens)) != len(gens):
            raise InputError(f"duplicate generator names in {gens}")
        for g in gens:
            if not g or not isinstance(g, str):
                raise InputError(f"invalid generator name {g!r}")
            if any(ch in g for ch in "^-* ") or g.isdigit():
                raise InputError(f"generator name {g!r} collides with word syntax")
        for k in orders:
            if k is not None and (not isinstance(k, int) or k < 2):
                raise InputError(f"generator order must be None or >= 2, got {k!r}")

    @classmethod
    def free(cls, generators: Sequence[str]) -> "Alphabet":
        gens = tuple(generators)
        return cls(gens, (None,) * len(gens))

    @classmethod
    def cyclic_product(cls, generators: Sequence[str], k: int) -> "Alphabet":
        gens = tuple(generators)
        return cls(gens, (k,) * len(gens))

    def __len__(self):
        return len(self.generators)

    @property
    def is_free(self) -> bool:
        return all(k is None for k in self.orders)

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise InputError(f"unknown generator {name!r}") from None

    def to_json(self) -> dict:
        return {"generators": list(self.generators), "orders": list(self.orders)}

    @classmethod
    def from_json(cls, data: dict) -> "Alphabet":
        gens = data["generators"]
        orders = data.get("orders") or [None] * len(gens)
        orders = [None if k in (None, 0, "inf") else int(k) for k in orders]
        return cls(tuple(gens), tuple(orders))


@dataclass(frozen=True, order=False)
class GroupWord:
    syllables: tuple[Syllable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "syllables", tuple(tuple(s) for s in self.syllables))

    @classmethod
    def _raw(cls, syllables: tuple) -> "GroupWord":
        # trusted fast path: syllables already a tuple of (int, int) tuples
        w = object.__new__(cls)
        object.__setattr__(w, "syllables", syllables)
        return w

    def __bool__(self):
        return bool(self.syllables)

    def __len__(self):
        return len(self.syllables)


IDENTITY = GroupWord()


def generator(A: Alphabet, name: str | int, exponent: int = 1) -> GroupWord:
    i = A.index(name) if isinstance(name, str) else name
    return normalize([(i, exponent)], A)


def _reduce_exponent(e: int, k: int | None) -> int:
    return e if k is None else e % k


def check_word(w: GroupWord, A: Alphabet) -> None:
    """Raise InputError unless w is a normal form over A."""
    prev = None
    for g, e in w.syllables:
        if not (0 <= g < len(A)):
            raise InputError(f"generator index {g} outside alphabet of size {len(A)}")
        k = A.orders[g]
        if e == 0 or (k is not None and not (1 <= e <= k - 1)):
            raise InputError(f"exponent {e} not canonical for generator {A.generators[g]}")
        if g == prev:
            raise InputError("adjacent syllables share a generator")
        prev = g


def normalize(syllables: Sequence[Syllable], A: Alphabet) -> GroupWord:
    """Fold an arbitrary syllable sequence into normal form."""
    stack: list[list[int]] = []
    for g, e in syllables:
        if not (0 <= g < len(A)):
            raise InputError(f"generator index {g} outside alphabet of size {len(A)}")
        k = A.orders[g]
        if stack and stack[-1][0] == g:
            e2 = _reduce_exponent(stack[-1][1] + e, k)
            if e2 == 0:
                stack.pop()
            else:
                stack[-1][1] = e2
        else:
            e2 = _reduce_exponent(e, k)
            if e2 != 0:
                stack.append([g, e2])
    return GroupWord._raw(tuple((g, e) for g, e in stack))


def multiply(w1: GroupWord, w2: GroupWord, A: Alphabet) -> GroupWord:
    check_word(w1, A)
    check_word(w2, A)
    return normalize(w1.syllables + w2.syllables, A)


def product(words: Sequence[GroupWord], A: Alphabet) -> GroupWord:
    syl: list[Syllable] = []
    for w in words:
        syl.extend(w.syllables)
    return normalize(syl, A)


def invert(w: GroupWord, A: Alphabet) -> GroupWord:
    return normalize([(g, -e) for g, e in reversed(w.syllables)], A)


def conjugate(w: GroupWord, by: GroupWord, A: Alphabet) -> GroupWord:
    """Return by^-1 * w * by."""
    return normalize(invert(by, A).syllables + w.syllables + by.syllables, A)


def power(w: GroupWord, n: int, A: Alphabet) -> GroupWord:
    base = w if n >= 0 else invert(w, A)
    return normalize(base.syllables * abs(n), A)


def commutator(x: GroupWord, y: GroupWord, A: Alphabet) -> GroupWord:
    """[x, y] = x y x^-1 y^-1."""
    return product([x, y, invert(x, A), invert(y, A)], A)


# -- letters and lengths ----------------------------------------------------

def _signed(e: int, k: int | None) -> int | None:
    """Symmetric exponent of a syllable; None for the half-turn of even k."""
    if k is None:
        return e
    if 2 * e < k:
        return e
    if 2 * e > k:
        return e - k
    return None


def syllable_length(g: int, e: int, A: Alphabet) -> int:
    k = A.orders[g]
    s = _signed(e, k)
    return k // 2 if s is None else abs(s)


def word_length(w: GroupWord, A: Alphabet) -> int:
    return sum(syllable_length(g, e, A) for g, e in w.syllables)


@functools.lru_cache(maxsize=1 << 16)
def tokens(w: GroupWord, A: Alphabet) -> tuple[Token, ...]:
    """Expand w into scanning letters.

    Free and odd-order syllables become |s| copies of (g, sign s) for the
    symmetric exponent s; the half-turn of an even-order generator is a single
    self-inverse token (g, 0).  This expansion commutes with inversion.
    """
    out: list[Token] = []
    for g, e in w.syllables:
        s = _signed(e, A.orders[g])
        if s is None:
            out.append((g, 0))
        else:
            out.extend([(g, 1 if s > 0 else -1)] * abs(s))
    return tuple(out)


def invert_tokens(t: Sequence[Token]) -> tuple[Token, ...]:
    return tuple((g, -s) for g, s in reversed(t))


_SIGN_RANK = {1: 0, -1: 1, 0: 2}


def token_char(t: Token) -> str:
    """One character per token; code points sort like the lexicographic order."""
    g, s = t
    return chr(0x100 + 3 * g + _SIGN_RANK[s])


@functools.lru_cache(maxsize=1 << 16)
def token_string(w: GroupWord, A: Alphabet) -> str:
    return "".join(token_char(t) for t in tokens(w, A))


def lex_key(w: GroupWord, A: Alphabet) -> str:
    return token_string(w, A)


def exponent_sums(w: GroupWord, A: Alphabet) -> list[int]:
    sums = [0] * len(A)
    for g, e in w.syllables:
        sums[g] += e
    return [s if k is None else s % k for s, k in zip(sums, A.orders)]


def in_commutator_subgroup(w: GroupWord, A: Alphabet) -> bool:
    return all(s == 0 for s in exponent_sums(w, A))


# -- cyclic normal form ---------------------------------------------------------

def cyclic_normal_form(w: GroupWord, A: Alphabet) -> tuple[GroupWord, GroupWord]:
    """Return (c, u) with w = u^-1 c u.

    c is cyclically reduced (first and last syllables on different
    generators, or a single syllable) and lexicographically least among its
    syllable rotations.  Ties between equal rotations keep the smallest shift.
    """
    check_word(w, A)
    T = IDENTITY  # invariant: cur = T w T^-1
    cur = w
    while len(cur) >= 2 and cur.syllables[0][0] == cur.syllables[-1][0]:
        t = GroupWord((cur.syllables[-1],))
        cur = normalize(cur.syllables[-1:] + cur.syllables[:-1], A)
        T = normalize(t.syllables + T.syllables, A)
    m = len(cur)
    if m <= 1:
        return cur, T
    best_r, best_key = 0, lex_key(cur, A)
    for r in range(1, m):
        rot = GroupWord(cur.syllables[r:] + cur.syllables[:r])
        key = lex_key(rot, A)
        if key < best_key:
            best_r, best_key = r, key
    if best_r == 0:
        return cur, T
    c = GroupWord(cur.syllables[best_r:] + cur.syllables[:best_r])
    # c = Q cur Q^-1 with Q the rotated-away suffix
    Q = cur.syllables[best_r:]
    return c, normalize(Q + T.syllables, A)


def cyclic_reduction(w: GroupWord, A: Alphabet) -> GroupWord:
    """Some cyclically reduced conjugate of w (no rotation normalization)."""
    cur = w
    while len(cur) >= 2 and cur.syllables[0][0] == cur.syllables[-1][0]:
        cur = normalize(cur.syllables[-1:] + cur.syllables[:-1], A)
    return cur


def has_finite_order(w: GroupWord, A: Alphabet) -> bool:
    c = cyclic_reduction(w, A)
    if not c:
        return True
    return len(c) == 1 and A.orders[c.syllables[0][0]] is not None


def element_order(w: GroupWord, A: Alphabet) -> int | None:
    """Order of w, or None when infinite."""
    c, _ = cyclic_normal_form(w, A)
    if not c:
        return 1
    if len(c) == 1:
        g, e = c.syllables[0]
        k = A.orders[g]
        if k is not None:
            from math import gcd
            return k // gcd(e, k)
    return None


# -- enumeration ----------------------------------------------------------------

def _syllable_choices(g: int, budget: int, A: Alphabet) -> list[tuple[int, int]]:
    """(exponent, length) pairs for syllables on g of length <= budget."""
    k = A.orders[g]
    if k is None:
        out = []
        for s in range(1, budget + 1):
            out.append((s, s))
            out.append((-s, s))
        return out
    return [(e, syllable_length(g, e, A)) for e in range(1, k)
            if syllable_length(g, e, A) <= budget]


def sphere(A: Alphabet, n: int) -> list[GroupWord]:
    """All normal forms of length exactly n, in lexicographic order."""
    out: list[GroupWord] = []

    def rec(prefix: list[Syllable], prev: int, remaining: int):
        if remaining == 0:
            out.append(GroupWord(tuple(prefix)))
            return
        for g in range(len(A)):
            if g == prev:
                continue
            for e, ln in _syllable_choices(g, remaining, A):
                prefix.append((g, e))
                rec(prefix, g, remaining - ln)
                prefix.pop()

    rec([], -1, n)
    out.sort(key=lambda w: lex_key(w, A))
    return out


def enumerate_ball(A: Alphabet, radius: int) -> Iterator[GroupWord]:
    """Yield every normal form of length <= radius once, length-then-lex."""
    if radius < 0:
        raise InputError("radius must be nonnegative")
    for n in range(radius + 1):
        yield from sphere(A, n)


def commutator_ball(A: Alphabet, radius: int) -> Iterator[GroupWord]:
    for w in enumerate_ball(A, radius):
        if in_commutator_subgroup(w, A):
            yield w


def random_word(A: Alphabet, length: int, rng: random.Random) -> GroupWord:
    """A random product of `length` generator letters (then reduced)."""
    syl = []
    for _ in range(length):
        g = rng.randrange(len(A))
        syl.append((g, rng.choice((1, -1))))
    return normalize(syl, A)


def random_ball_word(A: Alphabet, radius: int, rng: random.Random) -> GroupWord:
    """A random normal form of length <= radius built by a reduced random walk."""
    n = rng.randint(0, radius)
    syl: list[Syllable] = []
    length = 0
    prev = -1
    while length < n:
        g = rng.choice([i for i in range(len(A)) if i != prev] or [0])
        choices = _syllable_choices(g, n - length, A)
        if not choices:
            break
        e, ln = rng.choice(choices)
        syl.append((g, e))
        length += ln
        prev = g
    return GroupWord(tuple(syl))


# -- text form ---------------------------------------------------------------------

_EXP = re.compile(r"\^(-?\d+)")


def format_word(w: GroupWord, A: Alphabet) -> str:
    if not w:
        return "1"
    parts = []
    for g, e in w.syllables:
        name = A.generators[g]
        parts.append(name if e == 1 else f"{name}^{e}")
    return "".join(parts)


def parse_word(text: str, A: Alphabet) -> GroupWord:
    """Parse caret notation such as "a^2b^-1"; "1" is the identity.

    Generator names are matched longest-first.  The result is normalized,
    so non-canonical input such as "aa^-1" is accepted.
    """
    s = text.replace(" ", "").replace("*", "")
    if s in ("", "1"):
        return IDENTITY
    names = sorted(A.generators, key=len, reverse=True)
    syl: list[Syllable] = []
    pos = 0
    while pos < len(s):
        for name in names:
            if s.startswith(name, pos):
                pos += len(name)
                e = 1
                m = _EXP.match(s, pos)
                if m:
                    e = int(m.group(1))
                    pos = m.end()
                syl.append((A.index(name), e))
                break
        else:
            raise InputError(f"cannot parse word {text!r} at position {pos}")
    return normalize(syl, A)
