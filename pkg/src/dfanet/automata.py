"""Deterministic finite automata: model, execution, minimization, Nerode classes.

States and symbols are dense non-negative indices. Human-readable names only
exist at the file-format level (see :mod:`dfanet.formats`). A string over the
alphabet is any sequence of symbol indices; the empty sequence is valid and
denotes the empty string.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SymbolString = Sequence[int]


@dataclass(frozen=True, eq=False)
class Dfa:
    """A complete DFA: total transition table, start state, accepting set.

    ``transitions[state, symbol]`` is the successor state. The table must be
    total and closed (every entry a valid state index).
    """

    state_count: int
    alphabet_size: int
    transitions: np.ndarray
    start_state: int
    accepting: frozenset[int]

    def __post_init__(self) -> None:
        if self.state_count < 1:
            raise ValueError("state_count must be positive")
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be positive")
        table = np.array(self.transitions, dtype=np.int64)
        if table.shape != (self.state_count, self.alphabet_size):
            raise ValueError(
                f"transition table must be total: expected shape "
                f"{(self.state_count, self.alphabet_size)}, got {table.shape}"
            )
        if table.min() < 0 or table.max() >= self.state_count:
            raise ValueError("transition table entries must be valid state indices")
        table.flags.writeable = False
        object.__setattr__(self, "transitions", table)
        if not 0 <= self.start_state < self.state_count:
            raise ValueError(f"start_state {self.start_state} out of range")
        accepting = frozenset(int(q) for q in self.accepting)
        if any(not 0 <= q < self.state_count for q in accepting):
            raise ValueError("accepting states must be valid state indices")
        object.__setattr__(self, "accepting", accepting)


def step(dfa: Dfa, state: int, symbol: int) -> int:
    """Apply the transition table once."""
    if not 0 <= state < dfa.state_count:
        raise ValueError(f"state {state} out of range [0, {dfa.state_count})")
    if not 0 <= symbol < dfa.alphabet_size:
        raise ValueError(f"symbol {symbol} out of range [0, {dfa.alphabet_size})")
    return int(dfa.transitions[state, symbol])


def run(dfa: Dfa, x: SymbolString) -> int:
    """Fold the transition table over ``x`` from the start state.

    The empty string returns the start state.
    """
    state = dfa.start_state
    for symbol in x:
        state = step(dfa, state, int(symbol))
    return state


def accepts(dfa: Dfa, x: SymbolString) -> bool:
    """Whether the state reached by ``x`` is accepting."""
    return run(dfa, x) in dfa.accepting


def run_batch(dfa: Dfa, strings: np.ndarray) -> np.ndarray:
    """Vectorized :func:`run` over a ``(count, length)`` matrix of symbols."""
    strings = np.asarray(strings, dtype=np.int64)
    if strings.ndim != 2:
        raise ValueError("strings must be a 2-D matrix of symbol indices")
    if strings.size and (strings.min() < 0 or strings.max() >= dfa.alphabet_size):
        raise ValueError("invalid symbol index in batch")
    states = np.full(strings.shape[0], dfa.start_state, dtype=np.int64)
    for t in range(strings.shape[1]):
        states = dfa.transitions[states, strings[:, t]]
    return states


def accepts_batch(dfa: Dfa, strings: np.ndarray) -> np.ndarray:
    """Vectorized :func:`accepts`; returns a boolean vector."""
    final = run_batch(dfa, strings)
    table = np.zeros(dfa.state_count, dtype=bool)
    table[list(dfa.accepting)] = True
    return table[final]


def reachable_states(dfa: Dfa) -> list[int]:
    """States reachable from the start, in BFS first-reached order."""
    seen = {dfa.start_state}
    order = [dfa.start_state]
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for c in range(dfa.alphabet_size):
            nxt = int(dfa.transitions[q, c])
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    return order


def _hopcroft_blocks(dfa: Dfa, reachable: list[int]) -> list[frozenset[int]]:
    """Partition the reachable states into equivalence classes.

    Worklist refinement: repeatedly split blocks against the preimage of a
    splitter block under each symbol, keeping the smaller half on the
    worklist.
    """
    reach = set(reachable)
    finals = frozenset(q for q in reachable if q in dfa.accepting)
    others = frozenset(reach - finals)

    preimage: list[dict[int, list[int]]] = [{} for _ in range(dfa.alphabet_size)]
    for q in reachable:
        for c in range(dfa.alphabet_size):
            preimage[c].setdefault(int(dfa.transitions[q, c]), []).append(q)

    partition = {b for b in (finals, others) if b}
    worklist = set(partition)
    while worklist:
        splitter = worklist.pop()
        for c in range(dfa.alphabet_size):
            movers = set()
            for target in splitter:
                movers.update(preimage[c].get(target, ()))
            if not movers:
                continue
            for block in [b for b in partition if b & movers and b - movers]:
                inside = frozenset(block & movers)
                outside = frozenset(block - movers)
                partition.remove(block)
                partition.update((inside, outside))
                if block in worklist:
                    worklist.remove(block)
                    worklist.update((inside, outside))
                else:
                    worklist.add(inside if len(inside) <= len(outside) else outside)
    return list(partition)


def minimize(dfa: Dfa) -> Dfa:
    """Return the language-equivalent DFA with the minimum number of states.

    Unreachable states are dropped, then equivalent states are merged by
    partition refinement. Output state indices follow first-reached BFS order
    from the start state, so the result is deterministic.
    """
    reachable = reachable_states(dfa)
    blocks = _hopcroft_blocks(dfa, reachable)
    block_of = {q: block for block in blocks for q in block}

    index_of: dict[frozenset[int], int] = {}
    order: list[frozenset[int]] = []
    queue = deque([block_of[dfa.start_state]])
    index_of[block_of[dfa.start_state]] = 0
    order.append(block_of[dfa.start_state])
    while queue:
        block = queue.popleft()
        representative = next(iter(block))
        for c in range(dfa.alphabet_size):
            succ = block_of[int(dfa.transitions[representative, c])]
            if succ not in index_of:
                index_of[succ] = len(order)
                order.append(succ)
                queue.append(succ)

    table = np.zeros((len(order), dfa.alphabet_size), dtype=np.int64)
    accepting = set()
    for i, block in enumerate(order):
        representative = next(iter(block))
        for c in range(dfa.alphabet_size):
            table[i, c] = index_of[block_of[int(dfa.transitions[representative, c])]]
        if representative in dfa.accepting:
            accepting.add(i)
    return Dfa(
        state_count=len(order),
        alphabet_size=dfa.alphabet_size,
        transitions=table,
        start_state=0,
        accepting=frozenset(accepting),
    )


@dataclass(frozen=True)
class NerodePartition:
    """Right-congruence classes of a set of strings: class id per string."""

    class_of: dict[tuple[int, ...], int]
    class_count: int


def nerode_classes(dfa: Dfa, strings: Iterable[SymbolString]) -> NerodePartition:
    """Group strings by the minimal-DFA state they reach.

    Two strings get the same class id iff no continuation distinguishes their
    membership in the DFA's language.
    """
    minimal = minimize(dfa)
    class_of = {tuple(int(s) for s in x): run(minimal, x) for x in strings}
    return NerodePartition(class_of=class_of, class_count=len(set(class_of.values())))


def make_parity_dfa() -> Dfa:
    """Two states over {0, 1}; accepts strings with an even count of ones."""
    return Dfa(
        state_count=2,
        alphabet_size=2,
        transitions=np.array([[0, 1], [1, 0]]),
        start_state=0,
        accepting=frozenset({0}),
    )


def make_mod_counter_dfa(n: int) -> Dfa:
    """Count '1' symbols modulo ``n`` over {0, 1}; '0' is a self-loop.

    Accepts exactly the strings whose count of ones is 0 mod n.
    """
    if n < 1:
        raise ValueError("counter modulus must be at least 1")
    table = np.stack([np.arange(n), (np.arange(n) + 1) % n], axis=1)
    return Dfa(
        state_count=n,
        alphabet_size=2,
        transitions=table,
        start_state=0,
        accepting=frozenset({0}),
    )


def random_dfa(state_count: int, alphabet_size: int, seed) -> Dfa:
    """Seeded uniform random total DFA (each state accepting with prob 1/2)."""
    rng = np.random.default_rng(seed)
    table = rng.integers(0, state_count, size=(state_count, alphabet_size))
    accepting = frozenset(np.flatnonzero(rng.random(state_count) < 0.5).tolist())
    return Dfa(
        state_count=state_count,
        alphabet_size=alphabet_size,
        transitions=table,
        start_state=0,
        accepting=accepting,
    )


def all_strings(alphabet_size: int, length: int) -> np.ndarray:
    """All strings of exactly ``length``, lexicographically ordered, as rows."""
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([np.arange(alphabet_size)] * length), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def all_strings_up_to(alphabet_size: int, max_length: int) -> list[tuple[int, ...]]:
    """All strings of length 0..max_length, shortest first, lex within length."""
    out: list[tuple[int, ...]] = []
    for length in range(max_length + 1):
        out.extend(tuple(row) for row in all_strings(alphabet_size, length).tolist())
    return out
