"""State embeddings: identical for equivalent strings, separated otherwise.

Two strings are right-congruent when no continuation can tell them apart;
that is the same as reaching the same automaton state. The embedding network
maps every string to its state's column of a chosen matrix, so equivalent
strings collide exactly and inequivalent ones stay apart. A seeded random
projection compresses the embedding to ceil(log2 n) + 1 dimensions while
keeping every pair of states more than epsilon apart.
"""

import itertools

import numpy as np

from dfanet import (
    build_compressed_embedding,
    build_embedding_head,
    encode_string,
    forward,
    make_mod_counter_dfa,
    nerode_classes,
    run,
)

counter = make_mod_counter_dfa(4)
strings = [tuple(s) for length in range(4) for s in itertools.product(range(2), repeat=length)]

partition = nerode_classes(counter, strings)
print(f"{len(strings)} strings of length <= 3 fall into {partition.class_count} classes\n")

by_class: dict[int, list[str]] = {}
for s in strings:
    by_class.setdefault(partition.class_of[s], []).append("".join(map(str, s)) or "(empty)")
for cls, members in sorted(by_class.items()):
    shown = " ".join(members[:6])
    print(f"class {cls} (count mod 4 = {cls}): {shown}{' ...' if len(members) > 6 else ''}")

epsilon = 0.1
projection, achieved = build_compressed_embedding(counter, epsilon=epsilon, seed=11)
print(f"\nrandom projection to {projection.shape[0]} dims: "
      f"min pairwise state distance {achieved:.3f} > epsilon {epsilon}")

compressed = build_embedding_head(counter, 3, head=projection)
for s in [(1, 1, 0), (0, 1, 1), (1, 1, 1)]:
    emb = forward(compressed, encode_string(s, 2).data)
    print(f"embed {''.join(map(str, s))} -> {np.round(emb, 3).tolist()} (state {run(counter, s)})")
