#!/usr/bin/env python3
"""Audit of the bank-marketing dataset.

Here a positive classification means the individual is predicted NOT to
subscribe to a term deposit, so the audit explains predicted subscribers.
Age is grouped into MidAge (25-60) versus YoungOrOld (under 25 or over 60);
the other numeric attributes use the bins declared in configs/bank.yaml.
"""

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

schema = Schema.from_yaml("configs/bank.yaml")
data = bin_numeric(load_table("data/bank.csv", schema))
print(f"loaded {len(data)} rows (semicolon-delimited source)")

train, test = split(data, test_fraction=0.2, seed=SEED)
model = train_logreg(train, TrainConfig())
stats = evaluate_model(model, test)
print(f"classifier: test accuracy {stats['accuracy']:.1%}, F1 {stats['f1']:.1%}")

labels = predict_dataset(model, test)
report = audit_batch(test, labels, k=5, seed=SEED)
print()
print(render_report(report, top=15))

proportions = report.proportions()
for pair in [("age", "YoungOrOld"), ("age", "MidAge")]:
    count = report.weakest_counts.get(pair, 0)
    print(f"{pair[0]}={pair[1]}: weakest for {count} individuals "
          f"({proportions.get(pair, 0.0):.2%} of queried)")
print("\nage=YoungOrOld is singled out far more often than age=MidAge, matching")
print("the much higher rate of subscription among the young and the old.")
