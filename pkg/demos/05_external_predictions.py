#!/usr/bin/env python3
"""Audit the output of any external classifier.

The auditor never needs model internals: it consumes one label per row.
This demo writes a predictions file (here produced by the built-in model,
but it could come from anything) and audits through that file alone.
"""

import tempfile

from argfair import (
    Schema,
    TrainConfig,
    audit_batch,
    bin_numeric,
    load_predictions,
    load_table,
    predict_dataset,
    render_report,
    save_predictions,
    split,
    train_logreg,
)

schema = Schema.from_yaml("configs/bank.yaml")
data = bin_numeric(load_table("data/bank.csv", schema))
train, test = split(data, test_fraction=0.2, seed=0)

# stand-in for "somebody else's model": any process that yields row,label
model = train_logreg(train, TrainConfig())
predictions = predict_dataset(model, test)

with tempfile.NamedTemporaryFile("w", suffix=".csv", delete=False) as fh:
    path = fh.name
save_predictions(predictions, path)
print(f"wrote predictions for {len(predictions)} rows to {path}")
print("first lines of the exchange format:")
with open(path) as fh:
    for _ in range(4):
        print("  " + next(fh).rstrip())

external = load_predictions(path, test)
print(f"\nloaded back with provenance {external.provenance!r}; auditing...")
report = audit_batch(test, external, k=5)
print()
print(render_report(report, top=10))
