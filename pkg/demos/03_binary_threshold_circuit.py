"""Transitions over compact binary state codes, using step units only.

States are ceil(log2 n)-bit codes instead of n-wide one-hots. Hidden step
units match one input pattern each (weights +1/-1 against the pattern,
threshold = its popcount); each output bit ORs the units whose successor
code sets that bit. The circuit is exact for every automaton size.
"""

import numpy as np

from dfanet import (
    binary_state_encoding,
    build_binary_threshold_network,
    forward,
    make_mod_counter_dfa,
    one_hot,
    step,
)

for n in (2, 8, 32):
    counter = make_mod_counter_dfa(n)
    enc = binary_state_encoding(n)
    net = build_binary_threshold_network(counter)
    wrong = 0
    for state in range(n):
        for symbol in range(2):
            x = np.concatenate([enc.codes[state], one_hot(symbol, 2)])
            out = forward(net, x)
            wrong += not np.array_equal(out, enc.codes[step(counter, state, symbol)])
    print(
        f"mod-{n:2d} counter: state wires {enc.dim} (vs {n} one-hot), "
        f"{len(net.layers[0].weights)} hidden gates, "
        f"all {2 * n} transitions exact: {wrong == 0}"
    )

counter = make_mod_counter_dfa(8)
enc = binary_state_encoding(8)
net = build_binary_threshold_network(counter)
out = forward(net, np.concatenate([enc.codes[5], one_hot(1, 2)]))
print(f"\nexample: state 5 {enc.codes[5].tolist()} + '1' -> {out.tolist()} (= code of state 6)")
