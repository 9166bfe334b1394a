"""Batch audits: one explanation per queried individual, plus aggregates.

A queried individual is any pool member whose classification matches the
audited polarity. Its k nearest neighbors are found in the pool (minus
itself), the argumentation graph is built and evaluated, and the weakest
attribute-value pairs are recorded. Aggregate counts say how often each
pair was singled out across the whole pool.
"""

import concurrent.futures
import json
from dataclasses import dataclass, replace

import numpy as np

from .argcore import build_attacks
from .classifier import BIAS_ATTRIBUTE
from .dataset import Dataset, Individual
from .errors import NonConvergenceError, SchemaError
from .semantics import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITER,
    extract_explanation,
    hbs_converge,
)
from .similarity import NeighborIndex


@dataclass(frozen=True)
class AuditReport:
    """Explanations for every queried individual plus aggregate counts."""

    per_individual: dict
    consistent_fraction: float
    weakest_counts: dict
    queried_count: int
    config: dict

    def proportions(self):
        if self.queried_count == 0:
            return {}
        return {
            pair: count / self.queried_count
            for pair, count in self.weakest_counts.items()
        }


def _explain_one(row, row_index, row_label, neighbor_index, neighbor_labels,
                 k, epsilon, max_iter, polarity, exclude_index):
    neighbors = neighbor_index.query(row, k, exclude_index=exclude_index)
    graph = build_attacks(
        row, neighbors, labels=neighbor_labels, polarity=polarity, e0_label=row_label
    )
    try:
        final = hbs_converge(graph, epsilon=epsilon, max_iter=max_iter)
    except NonConvergenceError as err:
        err.row_index = row_index
        err.args = (f"queried row {row_index}: {err.args[0]}",)
        raise
    return extract_explanation(final)


_WORKER = {}


def _init_worker(pool, labels, k, epsilon, max_iter, polarity):
    _WORKER["pool"] = pool
    _WORKER["labels"] = labels
    _WORKER["index"] = NeighborIndex(pool)
    _WORKER["params"] = (k, epsilon, max_iter, polarity)


def _run_chunk(indices):
    pool, labels = _WORKER["pool"], _WORKER["labels"]
    neighbor_index = _WORKER["index"]
    k, epsilon, max_iter, polarity = _WORKER["params"]
    return [
        (
            i,
            _explain_one(
                pool.rows[i], i, labels[i], neighbor_index, labels.labels,
                k, epsilon, max_iter, polarity, exclude_index=i,
            ),
        )
        for i in indices
    ]


def audit_batch(pool, labels, k=5, epsilon=DEFAULT_EPSILON, polarity="-",
                max_iter=DEFAULT_MAX_ITER, seed=None, jobs=1,
                neighbor_pool=None, neighbor_labels=None):
    """Audit every pool individual classified with the given polarity.

    By default neighbors come from the same pool with the queried row
    excluded; pass ``neighbor_pool`` (with its own ``neighbor_labels``) to
    draw them from elsewhere. Deterministic given the pool order and
    labels; ``jobs > 1`` parallelizes across queried individuals without
    changing any result.
    """
    labels.validate(pool)
    queried = [i for i in range(len(pool)) if labels[i] == polarity]
    same_pool = neighbor_pool is None
    if not same_pool:
        if neighbor_labels is None:
            raise SchemaError("neighbor_pool requires neighbor_labels")
        neighbor_labels.validate(neighbor_pool)

    results = []
    if jobs > 1 and len(queried) > 1 and same_pool:
        chunks = [list(c) for c in np.array_split(queried, jobs * 4) if len(c)]
        with concurrent.futures.ProcessPoolExecutor(
            max_workers=jobs,
            initializer=_init_worker,
            initargs=(pool, labels, k, epsilon, max_iter, polarity),
        ) as executor:
            for chunk_result in executor.map(_run_chunk, chunks):
                results.extend(chunk_result)
    else:
        neighbor_index = NeighborIndex(pool if same_pool else neighbor_pool)
        nlabels = labels.labels if same_pool else neighbor_labels.labels
        for i in queried:
            results.append(
                (
                    i,
                    _explain_one(
                        pool.rows[i], i, labels[i], neighbor_index, nlabels,
                        k, epsilon, max_iter, polarity,
                        exclude_index=i if same_pool else None,
                    ),
                )
            )

    per_individual = dict(results)
    counts = {}
    consistent = 0
    for _, expl in results:
        if expl.consistent:
            consistent += 1
            continue
        for arg in sorted(expl.weakest):
            key = (arg.attribute, arg.value)
            counts[key] = counts.get(key, 0) + 1

    return AuditReport(
        per_individual=per_individual,
        consistent_fraction=consistent / len(queried) if queried else 1.0,
        weakest_counts=dict(sorted(counts.items())),
        queried_count=len(queried),
        config={
            "k": k,
            "epsilon": epsilon,
            "polarity": polarity,
            "seed": seed,
            "max_iter": max_iter,
            "pool_size": len(pool),
            "labels": labels.provenance,
        },
    )


def inject_bias(test, seed):
    """Append a fresh 'bias-attr' column with fair-coin 0/1 values."""
    schema = test.schema
    if BIAS_ATTRIBUTE in schema.attributes:
        raise SchemaError(f"{BIAS_ATTRIBUTE!r} already present in schema")
    draws = np.random.default_rng(seed).integers(0, 2, size=len(test))
    new_schema = replace(
        schema,
        attributes=schema.attributes + (BIAS_ATTRIBUTE,),
        domains={**schema.domains, BIAS_ATTRIBUTE: frozenset({"0", "1"})},
    )
    rows = [
        Individual(values={**row.values, BIAS_ATTRIBUTE: str(int(d))}, label=row.label)
        for row, d in zip(test.rows, draws)
    ]
    return Dataset(schema=new_schema, rows=rows)


def verify_bias_experiment(report):
    """Check that every inconsistently-treated individual has the injected
    zero value among its weakest arguments."""
    flagged = 0
    non_consistent = 0
    for expl in report.per_individual.values():
        if expl.consistent:
            continue
        non_consistent += 1
        if any(a.attribute == BIAS_ATTRIBUTE and a.value == "0" for a in expl.weakest):
            flagged += 1
    return {
        "all_flagged": flagged == non_consistent,
        "flagged_fraction": flagged / report.queried_count if report.queried_count else 0.0,
    }


# ---------------------------------------------------------------------------
# report serialization


def report_to_doc(report):
    """Machine-readable key-value document for an audit report."""
    proportions = report.proportions()
    return {
        "config": report.config,
        "queried_count": report.queried_count,
        "consistent_fraction": round(report.consistent_fraction, 6),
        "weakest_counts": [
            {
                "attribute": attr,
                "value": value,
                "count": count,
                "proportion": round(proportions[(attr, value)], 6),
            }
            for (attr, value), count in sorted(
                report.weakest_counts.items(), key=lambda kv: (-kv[1], kv[0])
            )
        ],
        "per_individual": {
            str(i): {
                "consistent": expl.consistent,
                "weakest": [[a.attribute, a.value] for a in sorted(expl.weakest)],
                "rounded_weights": {
                    f"{a.attribute}={a.value}": round(w, 2)
                    for a, w in sorted(expl.rounded_weights.items())
                },
            }
            for i, expl in sorted(report.per_individual.items())
        },
    }


def write_report(report, path):
    with open(path, "w") as fh:
        json.dump(report_to_doc(report), fh, indent=1, sort_keys=False)
        fh.write("\n")


def render_report(report, top=None):
    """Human-readable summary table."""
    lines = []
    lines.append("audit configuration:")
    for key, value in report.config.items():
        lines.append(f"  {key} = {value}")
    lines.append(f"queried individuals: {report.queried_count}")
    lines.append(f"consistent fraction: {report.consistent_fraction:.1%}")
    rows = sorted(report.weakest_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    if top is not None:
        rows = rows[:top]
    if rows:
        width = max(len(f"{a}={v}") for (a, v), _ in rows)
        lines.append(f"{'weakest pair'.ljust(width)}  count  proportion")
        proportions = report.proportions()
        for (attr, value), count in rows:
            name = f"{attr}={value}".ljust(width)
            lines.append(f"{name}  {count:5d}  {proportions[(attr, value)]:9.1%}")
    else:
        lines.append("no weakest pairs recorded (every queried individual consistent)")
    return "\n".join(lines) + "\n"
