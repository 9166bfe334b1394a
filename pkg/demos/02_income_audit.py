#!/usr/bin/env python3
"""Full audit of the census-income dataset.

Loads the raw file, drops rows with nulls, bins the numeric attributes,
splits 80/20, trains the built-in logistic regression, and audits every
negatively classified test individual against its 5 nearest neighbors.
Takes about half a minute.
"""

import time

from argfair import (
    Schema,
    TrainConfig,
    audit_batch,
    bin_numeric,
    evaluate_model,
    load_table,
    predict_dataset,
    render_report,
    split,
    train_logreg,
)

SEED = 0

schema = Schema.from_yaml("configs/adult.yaml")
raw = load_table("data/adult.csv", schema)
print(f"loaded {len(raw) + raw.dropped_rows} rows, kept {len(raw)} after dropping "
      f"{raw.dropped_rows} with missing values")

data = bin_numeric(raw)
train, test = split(data, test_fraction=0.2, seed=SEED)
print(f"split: {len(train)} train / {len(test)} test")

model = train_logreg(train, TrainConfig())
stats = evaluate_model(model, test)
print(f"classifier: test accuracy {stats['accuracy']:.1%}, F1 {stats['f1']:.1%}")

labels = predict_dataset(model, test)
start = time.perf_counter()
report = audit_batch(test, labels, k=5, seed=SEED)
print(f"audited {report.queried_count} negatively classified individuals "
      f"in {time.perf_counter() - start:.1f}s\n")

print(render_report(report, top=20))

protected = [("sex", "Female"), ("sex", "Male"), ("race", "White"), ("race", "Black")]
proportions = report.proportions()
print("selected attribute values:")
for pair in protected:
    count = report.weakest_counts.get(pair, 0)
    print(f"  {pair[0]}={pair[1]}: weakest for {count} individuals "
          f"({proportions.get(pair, 0.0):.2%} of queried)")
