"""Shared oracles and strategies.

The oracles here deliberately avoid the library's own execution paths: string
labeling uses a plain dict-based fold, and minimality is checked with the
quadratic table-filling algorithm rather than partition refinement.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from dfanet.automata import Dfa


def plain_fold(dfa: Dfa, string) -> int:
    """Reference run: dict lookups only, no numpy, no library fold."""
    table = {(i, j): int(dfa.transitions[i, j])
             for i in range(dfa.state_count) for j in range(dfa.alphabet_size)}
    state = dfa.start_state
    for symbol in string:
        state = table[(state, int(symbol))]
    return state


def plain_accepts(dfa: Dfa, string) -> bool:
    return plain_fold(dfa, string) in dfa.accepting


def strings_up_to(alphabet_size: int, max_length: int):
    for length in range(max_length + 1):
        yield from itertools.product(range(alphabet_size), repeat=length)


def table_filling_minimal_count(dfa: Dfa) -> int:
    """Minimal state count by reachability plus pairwise distinguishability."""
    reachable = [dfa.start_state]
    seen = {dfa.start_state}
    for q in reachable:
        for c in range(dfa.alphabet_size):
            nxt = int(dfa.transitions[q, c])
            if nxt not in seen:
                seen.add(nxt)
                reachable.append(nxt)

    marked = {
        (p, q)
        for p in reachable
        for q in reachable
        if p < q and ((p in dfa.accepting) != (q in dfa.accepting))
    }
    changed = True
    while changed:
        changed = False
        for p in reachable:
            for q in reachable:
                if p >= q or (p, q) in marked:
                    continue
                for c in range(dfa.alphabet_size):
                    a, b = int(dfa.transitions[p, c]), int(dfa.transitions[q, c])
                    if a == b:
                        continue
                    if (min(a, b), max(a, b)) in marked:
                        marked.add((p, q))
                        changed = True
                        break

    # group unmarked (equivalent) pairs into classes
    class_of = {}
    for q in reachable:
        for representative in reachable:
            if representative == q or (min(representative, q), max(representative, q)) not in marked:
                class_of[q] = representative
                break
    return len(set(class_of.values()))


@st.composite
def dfas(draw, max_states: int = 8, max_symbols: int = 3) -> Dfa:
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(1, max_symbols))
    table = np.array(
        [[draw(st.integers(0, n - 1)) for _ in range(k)] for _ in range(n)], dtype=np.int64
    )
    accepting = frozenset(
        i for i in range(n) if draw(st.booleans())
    )
    start = draw(st.integers(0, n - 1))
    return Dfa(state_count=n, alphabet_size=k, transitions=table,
               start_state=start, accepting=accepting)


@pytest.fixture
def parity():
    from dfanet.automata import make_parity_dfa

    return make_parity_dfa()
