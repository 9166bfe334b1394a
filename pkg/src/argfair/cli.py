"""Command line entry point wiring datasets, classifiers, and audits.

Every command reads the same declarative schema config; flags override the
run parameters. All randomness flows through explicit --seed flags and the
resolved configuration is echoed into every report, so identical
invocations produce identical outputs.
"""

import argparse
import pathlib
import sys
from dataclasses import replace

from . import __version__
from .audit import audit_batch, inject_bias, render_report, write_report
from .argcore import build_attacks, to_dot
from .classifier import (
    LogRegModel,
    TrainConfig,
    evaluate_model,
    fixed_bias_assignment,
    load_predictions,
    predict_dataset,
    save_predictions,
    train_logreg,
)
from .dataset import NEGATIVE, POSITIVE, Schema, bin_numeric, load_table, split
from .errors import ArgfairError
from .semantics import DEFAULT_EPSILON, DEFAULT_MAX_ITER, extract_explanation, hbs_converge
from .similarity import NeighborIndex

POLARITY = {"neg": NEGATIVE, "pos": POSITIVE}


def _load(args, binned=True):
    schema = Schema.from_yaml(args.schema)
    dataset = load_table(args.data, schema)
    if binned and schema.numeric_attributes:
        dataset = bin_numeric(dataset)
    return dataset


def _labels_for(args, dataset, parser):
    if getattr(args, "predictions", None):
        return load_predictions(args.predictions, dataset)
    if getattr(args, "model", None):
        return predict_dataset(LogRegModel.load(args.model), dataset)
    if getattr(args, "classifier", None) == "fixed-bias":
        return fixed_bias_assignment(dataset)
    parser.error("no label source: pass --predictions, --model, or --classifier fixed-bias")


def cmd_prepare(args, parser):
    schema = Schema.from_yaml(args.schema)
    dataset = load_table(args.data, schema)
    print(f"loaded {len(dataset) + dataset.dropped_rows} rows, "
          f"dropped {dataset.dropped_rows} with nulls, kept {len(dataset)}")
    dataset = bin_numeric(dataset)
    train, test = split(dataset, args.test_fraction, args.seed)
    print(f"split with seed {args.seed}: {len(train)} train / {len(test)} test")

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    prepared = replace(
        dataset.schema, positive_label=POSITIVE, null_values=(), drop_columns=()
    )
    train.schema = test.schema = prepared
    prepared.to_yaml(out / "schema.yaml")
    train.to_csv(out / "train.csv")
    test.to_csv(out / "test.csv")
    print(f"wrote {out / 'schema.yaml'}, {out / 'train.csv'}, {out / 'test.csv'}")
    return 0


def cmd_train(args, parser):
    dataset = _load(args)
    hyper = TrainConfig(
        learning_rate=args.learning_rate,
        epochs=args.epochs,
        l2=args.l2,
        seed=args.seed,
        threshold=args.threshold,
    )
    model = train_logreg(dataset, hyper)
    model.save(args.out)
    stats = evaluate_model(model, dataset)
    print(f"trained on {len(dataset)} rows: "
          f"train accuracy {stats['accuracy']:.1%}, F1 {stats['f1']:.1%}")
    print(f"wrote {args.out}")
    return 0


def cmd_predict(args, parser):
    dataset = _load(args)
    model = LogRegModel.load(args.model)
    labels = predict_dataset(model, dataset)
    save_predictions(labels, args.out)
    positive = sum(1 for v in labels.labels.values() if v == POSITIVE)
    print(f"predicted {len(labels)} rows: {positive} positive, "
          f"{len(labels) - positive} negative")
    if len(dataset) and all(row.label is not None for row in dataset):
        stats = evaluate_model(model, dataset)
        print(f"against dataset labels: accuracy {stats['accuracy']:.1%}, F1 {stats['f1']:.1%}")
    print(f"wrote {args.out}")
    return 0


def _explain_row(args, parser):
    dataset = _load(args)
    labels = _labels_for(args, dataset, parser)
    if not 0 <= args.row < len(dataset):
        print(f"error: row {args.row} out of range, valid range is 0..{len(dataset) - 1}",
              file=sys.stderr)
        return None
    e0 = dataset[args.row]
    polarity = POLARITY[args.polarity] if args.polarity else labels[args.row]
    neighbors = NeighborIndex(dataset).query(e0, args.k, exclude_index=args.row)
    graph = build_attacks(
        e0, neighbors, labels=labels.labels, polarity=polarity, e0_index=args.row
    )
    final = hbs_converge(graph, epsilon=args.epsilon, max_iter=args.max_iter)
    return e0, neighbors, graph, final


def cmd_explain(args, parser):
    result = _explain_row(args, parser)
    if result is None:
        return 2
    e0, neighbors, graph, final = result

    attrs = list(e0.values)
    print("queried individual:")
    print("  " + ", ".join(f"{a}={e0.values[a]}" for a in attrs))
    print(f"{len(neighbors.neighbors)} most similar individuals (distance, row, values):")
    for n in neighbors.neighbors:
        values = ", ".join(f"{a}={n.individual.values[a]}" for a in attrs)
        print(f"  d={n.distance}  row {n.index}: {values}")

    explanation = extract_explanation(final)
    print(f"final weights after {final.iterations} iterations (epsilon {final.epsilon}):")
    for arg in sorted(graph.arguments):
        print(f"  ({arg.attribute}, {arg.value}) = {explanation.rounded_weights[arg]:.2f}")
    if explanation.consistent:
        print("classification consistent with similar individuals; no pair singled out")
    else:
        weakest = ", ".join(f"({a.attribute}, {a.value})" for a in sorted(explanation.weakest))
        print(f"weakest arguments: {weakest}")

    if args.dot:
        pathlib.Path(args.dot).write_text(to_dot(graph, weights=final.weights))
        print(f"wrote {args.dot}")
    return 0


def cmd_export_dot(args, parser):
    result = _explain_row(args, parser)
    if result is None:
        return 2
    _, _, graph, final = result
    pathlib.Path(args.out).write_text(to_dot(graph, weights=final.weights))
    print(f"wrote {args.out}")
    return 0


def cmd_audit(args, parser):
    dataset = _load(args)
    labels = _labels_for(args, dataset, parser)
    report = audit_batch(
        dataset,
        labels,
        k=args.k,
        epsilon=args.epsilon,
        polarity=POLARITY[args.polarity],
        max_iter=args.max_iter,
        seed=args.seed,
        jobs=args.jobs,
    )
    print(render_report(report, top=args.top), end="")
    if args.out:
        write_report(report, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_inject_bias(args, parser):
    dataset = _load(args)
    biased = inject_bias(dataset, args.seed)
    biased.to_csv(args.out)
    ones = sum(1 for r in biased if r.values["bias-attr"] == "1")
    print(f"injected bias-attr with seed {args.seed}: "
          f"{ones}/{len(biased)} ones")
    if args.out_schema:
        biased.schema.to_yaml(args.out_schema)
        print(f"wrote {args.out} and {args.out_schema}")
    else:
        print(f"wrote {args.out}")
    return 0


def _add_label_source(sub):
    sub.add_argument("--predictions", help="predictions file (row_index,label)")
    sub.add_argument("--model", help="trained model file")
    sub.add_argument("--classifier", choices=["fixed-bias"],
                     help="built-in rule instead of a file")


def _add_semantics_flags(sub):
    sub.add_argument("--k", type=int, default=5, help="number of similar individuals")
    sub.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                     help="convergence threshold")
    sub.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="argfair",
        description="Explain why an individual is classified differently "
                    "from its nearest neighbors.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("prepare", help="load, clean, bin, and split a dataset")
    p.add_argument("--schema", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_prepare)

    p = commands.add_parser("train", help="train the built-in logistic regression")
    p.add_argument("--schema", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--learning-rate", type=float, default=TrainConfig.learning_rate)
    p.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    p.add_argument("--l2", type=float, default=TrainConfig.l2)
    p.add_argument("--seed", type=int, default=TrainConfig.seed)
    p.add_argument("--threshold", type=float, default=TrainConfig.threshold)
    p.set_defaults(run=cmd_train)

    p = commands.add_parser("predict", help="write predictions for a dataset")
    p.add_argument("--schema", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(run=cmd_predict)

    p = commands.add_parser("explain", help="explain one individual's classification")
    p.add_argument("--schema", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--row", type=int, required=True)
    _add_label_source(p)
    _add_semantics_flags(p)
    p.add_argument("--polarity", choices=["neg", "pos"],
                   help="default: the queried row's own classification")
    p.add_argument("--dot", help="also write the graph as DOT")
    p.set_defaults(run=cmd_explain)

    p = commands.add_parser("export-dot", help="write one individual's graph as DOT")
    p.add_argument("--schema", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--row", type=int, required=True)
    _add_label_source(p)
    _add_semantics_flags(p)
    p.add_argument("--polarity", choices=["neg", "pos"])
    p.add_argument("--out", required=True)
    p.set_defaults(run=cmd_export_dot)

    p = commands.add_parser("audit", help="audit every individual of one polarity")
    p.add_argument("--schema", required=True)
    p.add_argument("--data", required=True)
    _add_label_source(p)
    _add_semantics_flags(p)
    p.add_argument("--polarity", choices=["neg", "pos"], default="neg")
    p.add_argument("--jobs", type=int, default=1, help="parallel audit workers")
    p.add_argument("--seed", type=int, default=None, help="recorded in the report")
    p.add_argument("--top", type=int, default=None, help="table rows to print")
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(run=cmd_audit)

    p = commands.add_parser("inject-bias", help="append a random bias attribute")
    p.add_argument("--schema", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--out-schema", help="write the extended schema here")
    p.set_defaults(run=cmd_inject_bias)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args, parser)
    except ArgfairError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
