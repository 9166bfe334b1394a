import json

import numpy as np
import pytest

from argfair import (
    Argument,
    NonConvergenceError,
    SchemaError,
    audit_batch,
    fixed_bias_assignment,
    inject_bias,
    labels_from_dataset,
    render_report,
    report_to_doc,
    verify_bias_experiment,
    write_report,
)

from conftest import make_pool, make_schema


@pytest.fixture
def two_attr_schema():
    return make_schema({"a1": {"x", "y"}, "a2": {"u", "w"}})


def test_hand_run_three_row_pool(two_attr_schema):
    # row 0 queried (-), row 1 the lone positive neighbor differing on a1,
    # row 2 negative and differing on a2. Worked by hand:
    #   row 0 audit: the positive neighbor differs only on a1, so (a1,x)
    #     takes attacks from (a1,y) and (a2,u), both 1/2 ->
    #     weight 1/(1+0.5+0.5) = 0.50, unique weakest
    #   row 2 audit: the positive neighbor differs on a1 and a2, so (a1,x)
    #     and (a2,w) each take the same two 1/2 attacks -> both 0.50, tied
    pool = make_pool(two_attr_schema, [
        (("x", "u"), "-"),
        (("y", "u"), "+"),
        (("x", "w"), "-"),
    ])
    labels = labels_from_dataset(pool)
    report = audit_batch(pool, labels, k=2, epsilon=1e-9)

    assert report.queried_count == 2
    assert report.weakest_counts == {("a1", "x"): 2, ("a2", "w"): 1}
    assert report.consistent_fraction == 0.0

    expl0 = report.per_individual[0]
    assert expl0.weakest == frozenset({Argument("a1", "x")})
    assert expl0.rounded_weights[Argument("a1", "x")] == 0.5
    expl2 = report.per_individual[2]
    assert expl2.weakest == frozenset({Argument("a1", "x"), Argument("a2", "w")})
    assert expl2.rounded_weights[Argument("a2", "w")] == 0.5


def test_uniform_labels_mean_everyone_is_consistent(two_attr_schema):
    pool = make_pool(two_attr_schema, [
        (("x", "u"), "-"), (("y", "u"), "-"), (("x", "w"), "-"), (("y", "w"), "-"),
    ])
    report = audit_batch(pool, labels_from_dataset(pool), k=3)
    assert report.consistent_fraction == 1.0
    assert report.weakest_counts == {}
    assert all(e.consistent for e in report.per_individual.values())


def test_consistent_plus_flagged_fractions_sum_to_one():
    rng = np.random.default_rng(5)
    schema = make_schema({f"z{j}": {"0", "1", "2"} for j in range(3)})
    rows = [
        (tuple(str(rng.integers(3)) for _ in range(3)), "+" if rng.random() < 0.5 else "-")
        for _ in range(40)
    ]
    pool = make_pool(schema, rows)
    report = audit_batch(pool, labels_from_dataset(pool), k=4)
    with_weakest = sum(1 for e in report.per_individual.values() if e.weakest)
    assert report.consistent_fraction + with_weakest / report.queried_count == pytest.approx(1.0)


def test_audit_is_deterministic(two_attr_schema):
    pool = make_pool(two_attr_schema, [
        (("x", "u"), "-"), (("y", "u"), "+"), (("x", "w"), "-"), (("y", "w"), "+"),
    ])
    labels = labels_from_dataset(pool)
    r1 = audit_batch(pool, labels, k=2)
    r2 = audit_batch(pool, labels, k=2)
    assert report_to_doc(r1) == report_to_doc(r2)


def test_parallel_audit_matches_serial():
    rng = np.random.default_rng(17)
    schema = make_schema({f"z{j}": {"0", "1"} for j in range(4)})
    rows = [
        (tuple(str(rng.integers(2)) for _ in range(4)), "+" if rng.random() < 0.4 else "-")
        for _ in range(60)
    ]
    pool = make_pool(schema, rows)
    labels = labels_from_dataset(pool)
    serial = audit_batch(pool, labels, k=5, jobs=1)
    parallel = audit_batch(pool, labels, k=5, jobs=2)
    assert report_to_doc(serial) == report_to_doc(parallel)


def test_positive_polarity_batch(two_attr_schema):
    # flip the audit: explain the positively classified individuals
    pool = make_pool(two_attr_schema, [
        (("x", "u"), "+"), (("y", "u"), "-"), (("x", "w"), "-"), (("x", "u"), "-"),
    ])
    labels = labels_from_dataset(pool)
    report = audit_batch(pool, labels, k=3, polarity="+")
    assert report.queried_count == 1
    assert set(report.per_individual) == {0}
    assert report.config["polarity"] == "+"
    expl = report.per_individual[0]
    assert expl.weakest  # negative neighbors differ on a1 or a2
    for arg in expl.weakest:
        assert pool[0].values[arg.attribute] == arg.value


def test_zero_queried_individuals(two_attr_schema):
    pool = make_pool(two_attr_schema, [(("x", "u"), "+"), (("y", "w"), "+")])
    report = audit_batch(pool, labels_from_dataset(pool), k=1)
    assert report.queried_count == 0
    assert report.consistent_fraction == 1.0
    assert report.per_individual == {}


def test_separate_neighbor_pool(two_attr_schema):
    queried_pool = make_pool(two_attr_schema, [(("x", "u"), "-")])
    neighbor_pool = make_pool(two_attr_schema, [
        (("x", "u"), "-"), (("y", "u"), "+"),
    ])
    report = audit_batch(
        queried_pool,
        labels_from_dataset(queried_pool),
        k=2,
        neighbor_pool=neighbor_pool,
        neighbor_labels=labels_from_dataset(neighbor_pool),
    )
    # both neighbor rows are eligible (no self-exclusion across pools)
    assert report.queried_count == 1
    assert report.weakest_counts == {("a1", "x"): 1}
    with pytest.raises(SchemaError):
        audit_batch(queried_pool, labels_from_dataset(queried_pool), k=1,
                    neighbor_pool=neighbor_pool)


def test_non_convergence_reports_the_row(two_attr_schema):
    pool = make_pool(two_attr_schema, [
        (("x", "u"), "-"), (("y", "w"), "+"), (("y", "u"), "+"),
    ])
    labels = labels_from_dataset(pool)
    with pytest.raises(NonConvergenceError) as exc:
        audit_batch(pool, labels, k=2, epsilon=1e-12, max_iter=1)
    assert exc.value.row_index == 0
    assert "row 0" in str(exc.value)


# ---- bias injection


def test_inject_bias_adds_a_fair_coin_column(two_attr_schema):
    pool = make_pool(two_attr_schema, [(("x", "u"), "-")] * 10_000)
    biased = inject_bias(pool, seed=123)
    values = [r.values["bias-attr"] for r in biased]
    assert set(values) <= {"0", "1"}
    ones = values.count("1") / len(values)
    assert abs(ones - 0.5) <= 0.02
    assert biased.schema.attributes[-1] == "bias-attr"
    assert biased.schema.domains["bias-attr"] == frozenset({"0", "1"})


def test_inject_bias_is_deterministic(two_attr_schema):
    pool = make_pool(two_attr_schema, [(("x", "u"), "-")] * 50)
    a = inject_bias(pool, seed=9)
    b = inject_bias(pool, seed=9)
    assert [r.values["bias-attr"] for r in a] == [r.values["bias-attr"] for r in b]


def test_inject_bias_rejects_name_collision(two_attr_schema):
    pool = make_pool(two_attr_schema, [(("x", "u"), "-")])
    biased = inject_bias(pool, seed=0)
    with pytest.raises(SchemaError):
        inject_bias(biased, seed=0)


def test_bias_labels_equal_the_injected_column(two_attr_schema):
    pool = make_pool(two_attr_schema, [(("x", "u"), None)] * 200)
    biased = inject_bias(pool, seed=7)
    labels = fixed_bias_assignment(biased)
    for i, row in enumerate(biased):
        assert labels[i] == ("+" if row.values["bias-attr"] == "1" else "-")


def test_verify_bias_experiment_vacuous_case():
    from argfair import AuditReport, Explanation

    consistent = Explanation(weakest=frozenset(), consistent=True, rounded_weights={})
    report = AuditReport(
        per_individual={0: consistent, 3: consistent},
        consistent_fraction=1.0,
        weakest_counts={},
        queried_count=2,
        config={},
    )
    outcome = verify_bias_experiment(report)
    assert outcome["all_flagged"] is True
    assert outcome["flagged_fraction"] == 0.0


def test_bias_always_flagged_on_random_pools():
    # when the classification is a pure function of the injected attribute,
    # its zero value collects every attacker any other target has, at equal
    # or higher strength, so it is always among the weakest
    rng = np.random.default_rng(77)
    for _ in range(300):
        p = int(rng.integers(1, 4))
        n = int(rng.integers(4, 10))
        k = int(rng.integers(1, min(n, 5)))
        schema = make_schema({f"z{j}": {"a", "b", "c"} for j in range(p)}, label_column=None)
        rows = [
            (tuple(rng.choice(["a", "b", "c"]) for _ in range(p)), None)
            for _ in range(n)
        ]
        pool = inject_bias(make_pool(schema, rows), seed=int(rng.integers(10_000)))
        labels = fixed_bias_assignment(pool)
        report = audit_batch(pool, labels, k=k)
        assert verify_bias_experiment(report)["all_flagged"] is True


def test_verify_bias_experiment_counts_flags(two_attr_schema):
    pool = make_pool(two_attr_schema, [(("x", "u"), None)] * 3)
    biased = inject_bias(pool, seed=2)  # mixed coin values
    values = [r.values["bias-attr"] for r in biased]
    assert "0" in values and "1" in values
    labels = fixed_bias_assignment(biased)
    report = audit_batch(biased, labels, k=2)
    outcome = verify_bias_experiment(report)
    assert outcome["all_flagged"] is True
    assert outcome["flagged_fraction"] > 0.0


# ---- report serialization


def test_report_files_are_stable_and_readable(tmp_path, two_attr_schema):
    pool = make_pool(two_attr_schema, [
        (("x", "u"), "-"), (("y", "u"), "+"), (("x", "w"), "-"),
    ])
    labels = labels_from_dataset(pool)
    report = audit_batch(pool, labels, k=2, seed=11)
    p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
    write_report(report, p1)
    write_report(audit_batch(pool, labels, k=2, seed=11), p2)
    assert p1.read_bytes() == p2.read_bytes()

    doc = json.loads(p1.read_text())
    assert doc["config"]["k"] == 2
    assert doc["config"]["seed"] == 11
    assert doc["queried_count"] == 2
    assert {"attribute", "value", "count", "proportion"} <= set(doc["weakest_counts"][0])

    text = render_report(report)
    assert "queried individuals: 2" in text
    assert "a1=x" in text
