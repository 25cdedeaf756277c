"""One transition step as a two-layer ReLU lookup.

Each hidden unit is an AND gadget for one (state, symbol) pair: +1 on both
one-hot coordinates, bias -1, so it emits exactly 1 for its pair and 0
otherwise. The output layer wires each gadget to the one-hot code of the
successor state. The table below is reproduced with zero error.
"""

import numpy as np

from dfanet import build_transition_layer, forward, one_hot, random_dfa, step

dfa = random_dfa(state_count=5, alphabet_size=3, seed=42)
net = build_transition_layer(dfa)

print(f"automaton: {dfa.state_count} states, {dfa.alphabet_size} symbols")
print(f"network:   {net.input_dim} inputs -> {net.layers[0].output_dim} hidden (= n*k) "
      f"-> {net.output_dim} outputs\n")

mismatches = 0
for state in range(dfa.state_count):
    row = []
    for symbol in range(dfa.alphabet_size):
        x = np.concatenate([one_hot(state, dfa.state_count), one_hot(symbol, dfa.alphabet_size)])
        predicted = int(forward(net, x).argmax())
        actual = step(dfa, state, symbol)
        mismatches += predicted != actual
        row.append(f"d(q{state},s{symbol})=q{predicted}")
    print("  ".join(row))

print(f"\nexact on all {dfa.state_count * dfa.alphabet_size} transitions: {mismatches == 0}")
