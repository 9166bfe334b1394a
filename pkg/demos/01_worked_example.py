#!/usr/bin/env python3
"""Walk through one explanation end to end on a six-row sample.

The queried individual (row 0) is the only one classified negatively. Its
five neighbors all get a positive classification, so every attribute where
a neighbor disagrees becomes an attacked argument, and the semantics tells
us which disagreement matters most.
"""

from argfair import (
    Schema,
    build_attacks,
    extract_explanation,
    hbs_converge,
    k_nearest,
    labels_from_dataset,
    load_table,
    to_dot,
)

schema = Schema.from_yaml("configs/table1.yaml")
data = load_table("data/table1.csv", schema)
labels = labels_from_dataset(data)

queried = data[0]
print("queried individual:", queried.values, "classified", queried.label)

neighbors = k_nearest(queried, data, k=5, exclude_index=0)
print("\nfive most similar individuals:")
for n in neighbors.neighbors:
    print(f"  distance {n.distance}: {n.individual.values} -> {n.individual.label}")

graph = build_attacks(queried, neighbors, labels=labels.labels, polarity="-", e0_index=0)
print(f"\ngraph: {len(graph.arguments)} arguments, {len(graph.attack_counts)} attacks")
for (src, dst) in sorted(graph.attack_counts):
    print(f"  {src} -> {dst}  [{graph.strength_label(src, dst)}]")

final = hbs_converge(graph, epsilon=0.01)
print(f"\nconverged in {final.iterations} iterations:")
for arg, weight in sorted(final.rounded().items()):
    print(f"  {arg} = {weight:.2f}")

explanation = extract_explanation(final)
print("\nweakest argument(s):", ", ".join(str(a) for a in sorted(explanation.weakest)))
print("so the pair contributing most to the negative classification is race=Black.")

with open("worked_example.dot", "w") as fh:
    fh.write(to_dot(graph, weights=final.weights))
print("\nwrote worked_example.dot (render with: dot -Tpng worked_example.dot -o graph.png)")
