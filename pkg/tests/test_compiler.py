import itertools

import numpy as np
import pytest

from dfanet.automata import make_mod_counter_dfa, random_dfa
from dfanet.compiler import (
    EnumerationBudgetError,
    ProjectionError,
    build_binary_threshold_network,
    build_compressed_embedding,
    build_embedding_head,
    build_transition_layer,
    build_unrolled_acceptor,
    verify_exact,
    verify_sampled,
)
from dfanet.encodings import binary_state_encoding, encode_string, one_hot
from dfanet.network import LayerSpec, NetworkSpec, forward

from conftest import plain_accepts, plain_fold


def transition_input(dfa, state, symbol):
    return np.concatenate([one_hot(state, dfa.state_count), one_hot(symbol, dfa.alphabet_size)])


def test_transition_layer_parity_shape_and_values(parity):
    net = build_transition_layer(parity)
    assert net.layers[0].output_dim == 4  # n*k hidden units
    out = forward(net, transition_input(parity, 0, 1))
    assert out.tolist() == [0.0, 1.0]  # exactly e1, reading '1' from even


def test_transition_layer_mod4():
    counter = make_mod_counter_dfa(4)
    net = build_transition_layer(counter)
    assert net.layers[0].output_dim == 8
    for state in range(4):
        for symbol in range(2):
            out = forward(net, transition_input(counter, state, symbol))
            # analytic rule: '0' self-loops, '1' increments mod 4
            expected_state = state if symbol == 0 else (state + 1) % 4
            assert np.array_equal(out, one_hot(expected_state, 4))
    assert np.array_equal(forward(net, transition_input(counter, 3, 1)), one_hot(0, 4))


@pytest.mark.parametrize("seed", range(6))
def test_transition_layer_exact_on_random_dfas(seed):
    dfa = random_dfa(seed % 10 + 2, seed % 3 + 1, seed=seed)
    net = build_transition_layer(dfa)
    assert net.layers[0].output_dim == dfa.state_count * dfa.alphabet_size
    for state in range(dfa.state_count):
        for symbol in range(dfa.alphabet_size):
            out = forward(net, transition_input(dfa, state, symbol))
            assert np.array_equal(out, one_hot(int(dfa.transitions[state, symbol]), dfa.state_count))


def test_unrolled_zero_length_reads_out_start_state(parity):
    net = build_unrolled_acceptor(parity, 0)
    assert net.input_dim == 0
    assert forward(net, np.zeros(0)).tolist() == [1.0]  # empty string has even parity

    from dfanet.automata import Dfa

    shifted = Dfa(
        state_count=3, alphabet_size=2, transitions=make_mod_counter_dfa(3).transitions,
        start_state=1, accepting=frozenset({0}),
    )
    assert forward(build_unrolled_acceptor(shifted, 0), np.zeros(0)).tolist() == [0.0]


def test_unrolled_parity_t4_example(parity):
    net = build_unrolled_acceptor(parity, 4)
    assert forward(net, encode_string([0, 1, 1, 0], 2).data).tolist() == [1.0]


def test_unrolled_parity_t3_matches_enumeration(parity):
    net = build_unrolled_acceptor(parity, 3)
    for string in itertools.product(range(2), repeat=3):
        out = forward(net, encode_string(string, 2).data)
        assert out.tolist() == [1.0 if plain_accepts(parity, string) else 0.0]


def test_unrolled_depth_and_stage_count(parity):
    for length in (0, 1, 4, 7):
        net = build_unrolled_acceptor(parity, length)
        assert net.metadata["depth"] == length + 1
        assert net.metadata["transition_modules"] == length
        assert len(net.layers) == (2 * length + 1 if length else 1)


def test_unrolled_readout_is_strict_step(parity):
    net = build_unrolled_acceptor(parity, 2)
    readout = net.layers[-1]
    assert readout.activation == "step"
    assert readout.strict is True
    assert readout.thresholds.tolist() == [0.5]


def test_verify_exact_parity_lengths(parity):
    report = verify_exact(build_unrolled_acceptor(parity, 7), parity, 7)
    assert report.total_strings == 128 and report.exact
    report = verify_exact(build_unrolled_acceptor(parity, 12), parity, 12)
    assert report.total_strings == 4096 and report.exact


def test_verify_exact_finds_corruption_witness(parity):
    net = build_unrolled_acceptor(parity, 3)
    corrupted_readout = LayerSpec(
        weights=1.0 - net.layers[-1].weights,  # invert the accepting indicator
        bias=net.layers[-1].bias,
        activation="step",
        thresholds=net.layers[-1].thresholds,
        strict=True,
    )
    corrupted = NetworkSpec(
        layers=net.layers[:-1] + (corrupted_readout,),
        input_dim=net.input_dim,
        output_dim=net.output_dim,
    )
    report = verify_exact(corrupted, parity, 3)
    assert not report.exact
    string, expected, got = report.mismatches[0]
    assert expected != got
    assert plain_accepts(parity, string) == expected
    # mismatches are in lexicographic order
    assert list(report.mismatches) == sorted(report.mismatches)


def test_verify_exact_budget_refusal(parity):
    net = build_unrolled_acceptor(parity, 30)
    with pytest.raises(EnumerationBudgetError):
        verify_exact(net, parity, 30)


def test_verify_exact_dimension_mismatch(parity):
    net = build_unrolled_acceptor(parity, 4)
    with pytest.raises(ValueError):
        verify_exact(net, parity, 5)


def test_verify_sampled(parity):
    net = build_unrolled_acceptor(parity, 30)
    report = verify_sampled(net, parity, 30, count=500, seed=1)
    assert report.exact and report.total_strings == 500


def test_binary_threshold_parity(parity):
    net = build_binary_threshold_network(parity)
    out = forward(net, np.array([0.0, 0.0, 1.0]))  # state code 0, symbol '1'
    assert out.tolist() == [1.0]


def test_binary_threshold_mod8_example():
    counter = make_mod_counter_dfa(8)
    enc = binary_state_encoding(8)
    net = build_binary_threshold_network(counter)
    out = forward(net, np.concatenate([enc.codes[5], one_hot(1, 2)]))
    assert out.tolist() == enc.codes[6].tolist() == [0.0, 1.0, 1.0]


@pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 32])
def test_binary_threshold_exact_on_counters(n):
    counter = make_mod_counter_dfa(n)
    enc = binary_state_encoding(n)
    net = build_binary_threshold_network(counter)
    for state in range(n):
        for symbol in range(2):
            out = forward(net, np.concatenate([enc.codes[state], one_hot(symbol, 2)]))
            assert np.array_equal(out, enc.codes[int(counter.transitions[state, symbol])])


def test_embedding_head_identity_is_one_hot_state(parity):
    net = build_embedding_head(parity, 3)
    for string in itertools.product(range(2), repeat=3):
        out = forward(net, encode_string(string, 2).data)
        assert np.array_equal(out, one_hot(plain_fold(parity, string), 2))


def test_embedding_head_scalar_codes(parity):
    net = build_embedding_head(parity, 2, head=np.array([[0.0, 1.0]]))
    assert forward(net, encode_string([0, 1], 2).data).tolist() == [1.0]
    assert forward(net, encode_string([1, 1], 2).data).tolist() == [0.0]


def test_embedding_head_mod4_binary_codes_distinct():
    counter = make_mod_counter_dfa(4)
    codes = binary_state_encoding(4).codes.T  # 2 x 4, one column per state
    embeddings = set()
    for length in range(4):
        net = build_embedding_head(counter, length, head=codes)
        for string in itertools.product(range(2), repeat=length):
            embeddings.add(tuple(forward(net, encode_string(string, 2).data)))
    assert len(embeddings) == 4


def test_embedding_head_rejects_duplicate_columns(parity):
    with pytest.raises(ValueError):
        build_embedding_head(parity, 2, head=np.array([[1.0, 1.0]]))


def test_embedding_soundness_up_to_length_8():
    counter = make_mod_counter_dfa(4)
    for length in range(9):
        net = build_embedding_head(counter, length)
        for string in itertools.product(range(2), repeat=length):
            out = forward(net, encode_string(string, 2).data)
            assert np.array_equal(out, one_hot(plain_fold(counter, string), 4))


def test_compressed_embedding_postcondition():
    dfa = make_mod_counter_dfa(2)
    projection, achieved = build_compressed_embedding(dfa, epsilon=0.1, seed=3)
    assert projection.shape == (2, 2)  # ceil(log2 2) + 1 rows
    assert achieved > 0.1
    assert np.linalg.norm(projection[:, 0] - projection[:, 1]) == pytest.approx(achieved)


def test_compressed_embedding_frozen_regression():
    projection, achieved = build_compressed_embedding(make_mod_counter_dfa(8), epsilon=0.1, seed=7)
    assert projection.shape == (4, 8)
    assert achieved == pytest.approx(0.4467873425264411, rel=1e-12)


def test_compressed_embedding_unattainable_separation():
    with pytest.raises(ProjectionError) as excinfo:
        build_compressed_embedding(make_mod_counter_dfa(4), epsilon=1e6, seed=0)
    assert excinfo.value.best_distance > 0


def test_compressed_embedding_needs_two_states():
    with pytest.raises(ValueError):
        build_compressed_embedding(make_mod_counter_dfa(1), epsilon=0.1, seed=0)


def test_compressed_head_separates_strings():
    dfa = make_mod_counter_dfa(4)
    epsilon = 0.1
    projection, _ = build_compressed_embedding(dfa, epsilon=epsilon, seed=11)
    net = build_embedding_head(dfa, 5, head=projection)
    by_state: dict[int, np.ndarray] = {}
    for string in itertools.product(range(2), repeat=5):
        out = forward(net, encode_string(string, 2).data)
        state = plain_fold(dfa, string)
        if state in by_state:
            assert np.array_equal(out, by_state[state])
        else:
            by_state[state] = out
    for a in by_state:
        for b in by_state:
            if a < b:
                assert np.linalg.norm(by_state[a] - by_state[b]) > epsilon


def test_embedding_head_strict_class_separation():
    # compiled embeddings are constant within a class, so the max intra-class
    # distance is exactly zero and strictly below any inter-class distance
    counter = make_mod_counter_dfa(4)
    head = np.array([[0.3, -1.2, 0.3, 2.0], [0.0, 0.5, 1.5, -0.25]])
    for length in (2, 5):
        net = build_embedding_head(counter, length, head=head)
        groups: dict[int, list[np.ndarray]] = {}
        for string in itertools.product(range(2), repeat=length):
            groups.setdefault(plain_fold(counter, string), []).append(
                forward(net, encode_string(string, 2).data)
            )
        for members in groups.values():
            for emb in members[1:]:
                assert np.array_equal(emb, members[0])
        states = sorted(groups)
        for a in states:
            for b in states:
                if a < b:
                    assert np.linalg.norm(groups[a][0] - groups[b][0]) > 0.0


def test_unrolled_exact_for_counter_family_sample():
    for n in (2, 8, 32):
        counter = make_mod_counter_dfa(n)
        for length in (0, 1, 5, 9):
            report = verify_exact(build_unrolled_acceptor(counter, length), counter, length)
            assert report.exact, f"n={n} T={length}"
