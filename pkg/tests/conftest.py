import itertools

import pytest

from qforge.words import Alphabet, GroupWord


def naive_reduce(letters, orders):
    """Reduce a list of (generator, +-1) letters by string rewriting.

    Independent of qforge.words.normalize: inverse letters of finite-order
    generators are first rewritten as k-1 positive letters, then free
    cancellation and deletion of k-fold runs are applied until nothing changes.
    """
    out = []
    for g, s in letters:
        k = orders[g]
        if k is not None and s < 0:
            out.extend([(g, 1)] * (k - 1))
        else:
            out.append((g, s))
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            (g1, s1), (g2, s2) = out[i], out[i + 1]
            if g1 == g2 and s1 == -s2:
                del out[i:i + 2]
                changed = True
                break
        if changed:
            continue
        for i in range(len(out)):
            g = out[i][0]
            k = orders[g]
            if k is not None and out[i:i + k] == [(g, 1)] * k:
                del out[i:i + k]
                changed = True
                break
    syl = []
    for g, grp in itertools.groupby(out, key=lambda t: t[0]):
        e = sum(s for _, s in grp)
        syl.append((g, e))
    return GroupWord(tuple(syl))


def letters_of(w):
    out = []
    for g, e in w.syllables:
        out.extend([(g, 1 if e > 0 else -1)] * abs(e))
    return out


@pytest.fixture
def F2():
    return Alphabet.free("ab")


@pytest.fixture
def Z2Z2():
    return Alphabet.cyclic_product("ab", 2)


@pytest.fixture
def Z3Z3():
    return Alphabet.cyclic_product("ab", 3)


ACCEPTANCE_LINES: dict[int, str] = {}


def record_acceptance(n: int, ok: bool, detail: str, seconds: float) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({seconds:.1f} s) {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
