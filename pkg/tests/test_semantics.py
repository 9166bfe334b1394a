import math

import numpy as np
import pytest

from argfair import (
    Argument,
    FinalWeights,
    NonConvergenceError,
    ParameterError,
    WeightedArgGraph,
    evaluate,
    extract_explanation,
    hbs_converge,
)

A, B, C = Argument("x", "a"), Argument("x", "b"), Argument("x", "c")


def graph_from(edges, k, arguments=None):
    args = set(arguments or [])
    for src, dst in edges:
        args.add(src)
        args.add(dst)
    return WeightedArgGraph(
        arguments=frozenset(args),
        attack_counts=dict(edges.items()) if isinstance(edges, dict) else {e: k for e in edges},
        k=k,
        initial_weights={a: 1.0 for a in args},
    )


def reference_weights(graph, steps):
    """Plain dict-based long-horizon iteration, kept independent of the
    production path on purpose."""
    weights = {a: graph.initial_weight(a) for a in graph.arguments}
    incoming = {a: [] for a in graph.arguments}
    for (src, dst), count in graph.attack_counts.items():
        incoming[dst].append((src, count / graph.k))
    for _ in range(steps):
        weights = {
            a: graph.initial_weight(a)
            / (1.0 + sum(s * weights[src] for src, s in incoming[a]))
            for a in graph.arguments
        }
    return weights


def test_no_attacks_all_weights_one_after_one_step():
    g = graph_from({}, k=5, arguments=[A, B, C])
    fw = hbs_converge(g, epsilon=0.01)
    assert fw.iterations == 1
    assert fw.converged
    assert all(w == 1.0 for w in fw.weights.values())


def test_single_attack_halves_the_target():
    g = graph_from({(A, B): 1}, k=1)
    fw = hbs_converge(g, epsilon=1e-10)
    assert fw.weights[A] == 1.0
    assert fw.weights[B] == pytest.approx(0.5, abs=1e-9)


def test_mutual_attack_cycle_converges_to_golden_ratio_conjugate():
    # scalar oracle: x = 1 / (1 + x), iterated to machine precision
    x = 1.0
    for _ in range(200):
        x = 1.0 / (1.0 + x)
    assert x == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-12)

    g = graph_from({(A, B): 1, (B, A): 1}, k=1)
    fw = hbs_converge(g, epsilon=1e-12)
    assert fw.weights[A] == pytest.approx(x, abs=1e-10)
    assert fw.weights[B] == pytest.approx(x, abs=1e-10)


def test_self_attack_hits_the_same_fixed_point():
    g = graph_from({(A, A): 1}, k=1)
    fw = hbs_converge(g, epsilon=1e-12)
    assert fw.weights[A] == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-10)


def test_figure_like_three_target_graph_rounds_to_frozen_values():
    # the worked-example graph, entered directly by its 15 edge strengths
    lg = Argument("workclass", "Local-gov")
    pr = Argument("workclass", "Private")
    ba = Argument("education", "Bachelors")
    hs = Argument("education", "HS-grad")
    ma = Argument("education", "Masters")
    bl = Argument("race", "Black")
    wh = Argument("race", "White")
    edges = {
        (pr, lg): 2, (pr, ba): 1, (pr, bl): 2,
        (ma, lg): 1, (ma, ba): 2, (ma, bl): 2,
        (wh, lg): 2, (wh, ba): 3, (wh, bl): 5,
        (hs, ba): 1, (hs, bl): 1,
        (lg, ba): 2, (lg, bl): 3,
        (ba, lg): 1, (ba, bl): 2,
    }
    g = graph_from(edges, k=5)
    fw = hbs_converge(g, epsilon=0.01)
    rounded = fw.rounded()
    assert rounded[bl] == 0.29
    assert rounded[lg] == 0.48
    assert rounded[ba] == 0.39
    assert all(rounded[a] == 1.0 for a in (pr, ma, wh, hs))


def test_matches_long_horizon_reference_on_random_graphs():
    rng = np.random.default_rng(7)
    for _ in range(300):
        n = int(rng.integers(1, 9))
        k = int(rng.integers(1, 7))
        args = [Argument("z", str(i)) for i in range(n)]
        edges = {}
        for src in args:
            for dst in args:
                if rng.random() < 0.3:
                    edges[(src, dst)] = int(rng.integers(1, k + 1))
        g = graph_from(edges, k=k, arguments=args)
        fw = hbs_converge(g, epsilon=0.01)
        ref = reference_weights(g, steps=10_000)
        for a in args:
            assert abs(fw.weights[a] - ref[a]) <= 2 * 0.01


def test_weights_stay_in_unit_interval_and_unattacked_stay_one():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(1, 9))
        k = int(rng.integers(1, 6))
        args = [Argument("z", str(i)) for i in range(n)]
        edges = {}
        for src in args:
            for dst in args:
                if rng.random() < 0.25:
                    edges[(src, dst)] = int(rng.integers(1, k + 1))
        g = graph_from(edges, k=k, arguments=args)
        fw = hbs_converge(g, epsilon=1e-6)
        attacked = {dst for _, dst in edges}
        for a in args:
            assert 0.0 < fw.weights[a] <= 1.0
            if a not in attacked:
                assert fw.weights[a] == 1.0


def test_one_step_damage_is_monotone_in_added_attacks():
    # a huge epsilon stops the iteration right after the first update
    base = graph_from({(A, C): 1}, k=2, arguments=[A, B, C])
    more = graph_from({(A, C): 1, (B, C): 1}, k=2, arguments=[A, B, C])
    stronger = graph_from({(A, C): 2}, k=2, arguments=[A, B, C])
    one_step = lambda g: hbs_converge(g, epsilon=10.0).weights[C]
    assert one_step(more) <= one_step(base)
    assert one_step(stronger) <= one_step(base)


def test_non_convergence_carries_last_iterate():
    g = graph_from({(A, B): 1, (B, A): 1}, k=1)
    with pytest.raises(NonConvergenceError) as exc:
        hbs_converge(g, epsilon=1e-9, max_iter=3)
    err = exc.value
    assert err.iterations == 3
    assert not err.last_weights.converged
    assert set(err.last_weights.weights) == {A, B}


def test_parameter_validation():
    g = graph_from({}, k=1, arguments=[A])
    with pytest.raises(ParameterError):
        hbs_converge(g, epsilon=0.0)
    with pytest.raises(ParameterError):
        hbs_converge(g, epsilon=-1.0)
    with pytest.raises(ParameterError):
        hbs_converge(g, max_iter=0)


def test_extract_explanation_min_set():
    fw = FinalWeights(
        weights={A: 0.3712, B: 0.3748, C: 0.884}, iterations=5, epsilon=0.01, converged=True
    )
    expl = extract_explanation(fw)
    assert expl.weakest == frozenset({A, B})
    assert not expl.consistent
    assert expl.rounded_weights == {A: 0.37, B: 0.37, C: 0.88}


def test_extract_explanation_consistent_case():
    fw = FinalWeights(
        weights={A: 1.0, B: 0.9999}, iterations=2, epsilon=0.01, converged=True
    )
    expl = extract_explanation(fw)
    assert expl.consistent
    assert expl.weakest == frozenset()


def test_extract_explanation_requires_convergence():
    fw = FinalWeights(weights={A: 0.5}, iterations=9, epsilon=0.01, converged=False)
    with pytest.raises(ParameterError):
        extract_explanation(fw)


def test_evaluate_dispatch():
    g = graph_from({(A, B): 1}, k=1)
    fw = evaluate(g, semantics="hbs", epsilon=1e-8)
    assert fw.weights[B] == pytest.approx(0.5, abs=1e-7)
    with pytest.raises(ParameterError):
        evaluate(g, semantics="nope")
