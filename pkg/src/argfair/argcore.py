"""Weighted argumentation graph built from a queried individual and its
nearest neighbors.

Arguments are the distinct attribute-value pairs appearing in the queried
individual or any neighbor. Every neighbor classified differently from the
queried individual attacks, with all of its own pairs, each queried pair it
disagrees on. An attack's strength counts, out of all k neighbors, the
differently-classified ones that carry the attacking pair and disagree with
the queried individual on the attacked attribute, so strengths always lie
in {1/k, ..., k/k}. Counting only differently-classified voters is what
guarantees that an attribute fully determining the classification is always
among the weakest arguments: its pair collects every attacker any other
target has, at equal or higher strength.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import CoverageError, ParameterError, SchemaError


class Argument(NamedTuple):
    attribute: str
    value: str

    def __str__(self):
        return f"({self.attribute}, {self.value})"


@dataclass(frozen=True)
class WeightedArgGraph:
    """Arguments with initial weights, plus attacks with rational strengths.

    Strengths are stored as integer neighbor counts over a common
    denominator ``k`` so exports can print exact fractions.
    """

    arguments: frozenset
    attack_counts: dict
    k: int
    initial_weights: dict = field(default_factory=dict)

    def __post_init__(self):
        for (src, dst), count in self.attack_counts.items():
            if src not in self.arguments or dst not in self.arguments:
                raise SchemaError(f"attack {src} -> {dst} references unknown argument")
            if not 1 <= count <= self.k:
                raise ParameterError(f"attack count {count} outside 1..{self.k}")
        for arg, w in self.initial_weights.items():
            if not 0 <= w <= 1:
                raise ParameterError(f"initial weight {w} outside [0, 1]")

    @property
    def attacks(self):
        return set(self.attack_counts)

    def initial_weight(self, arg):
        return self.initial_weights.get(arg, 1.0)

    def strength(self, src, dst):
        return self.attack_counts[(src, dst)] / self.k

    def strength_label(self, src, dst):
        return f"{self.attack_counts[(src, dst)]}/{self.k}"

    def attackers_of(self, arg):
        """(attacker, strength) pairs for every attack on ``arg``."""
        return [
            (src, count / self.k)
            for (src, dst), count in self.attack_counts.items()
            if dst == arg
        ]


def build_arguments(e0, neighbors):
    """Distinct attribute-value pairs of the queried individual and its
    neighbors."""
    args = {Argument(a, v) for a, v in e0.pairs()}
    for ind in neighbors.individuals():
        args.update(Argument(a, v) for a, v in ind.pairs())
    return frozenset(args)


def _label_of(labels, index, individual):
    if labels is not None and index is not None:
        try:
            return labels[index]
        except KeyError:
            raise CoverageError(f"no label for pool row {index}") from None
    if individual.label is not None:
        return individual.label
    raise CoverageError("individual has no label and no assignment entry")


def build_attacks(e0, neighbors, labels=None, polarity="-", e0_index=None, e0_label=None):
    """Construct the full weighted graph for one audit.

    ``labels`` maps pool row index to '+'/'-'; when omitted, the labels
    carried on the individuals themselves are used. The queried
    individual's label resolves from ``e0_label``, then ``labels[e0_index]``,
    then its own ``label`` field. ``polarity`` is the classification being
    audited and must match that label.
    """
    if e0_label is None:
        e0_label = _label_of(labels, e0_index, e0)
    if e0_label != polarity:
        raise ParameterError(
            f"queried individual is classified {e0_label!r}, not the audited {polarity!r}"
        )
    neighbor_labels = [
        _label_of(labels, n.index, n.individual) for n in neighbors.neighbors
    ]

    arguments = build_arguments(e0, neighbors)
    others = [
        n.individual
        for n, lab in zip(neighbors.neighbors, neighbor_labels)
        if lab != e0_label
    ]

    attack_counts = {}
    for ind in others:
        disagreements = [
            attr for attr, v0 in e0.pairs() if ind.values[attr] != v0
        ]
        for attr in disagreements:
            target = Argument(attr, e0.values[attr])
            for src_attr, src_value in ind.pairs():
                source = Argument(src_attr, src_value)
                key = (source, target)
                if key not in attack_counts:
                    # votes come from differently-classified neighbors only;
                    # the denominator stays k
                    attack_counts[key] = sum(
                        1
                        for n in others
                        if n.values[src_attr] == src_value
                        and n.values[attr] != e0.values[attr]
                    )

    return WeightedArgGraph(
        arguments=arguments,
        attack_counts=attack_counts,
        k=neighbors.k,
        initial_weights={a: 1.0 for a in arguments},
    )


def to_dot(graph, weights=None, name="argumentation"):
    """Render the graph as DOT text: one node per argument (annotated with
    its final weight when given), one edge per attack labelled 'n/k'."""
    def node_id(arg):
        return f"{arg.attribute}={arg.value}"

    lines = [f'digraph "{name}" {{', "  rankdir=LR;"]
    for arg in sorted(graph.arguments):
        label = f"({arg.attribute}, {arg.value})"
        if weights is not None and arg in weights:
            label += f"\\ns = {round(weights[arg], 2):.2f}"
        lines.append(f'  "{node_id(arg)}" [label="{label}"];')
    for (src, dst) in sorted(graph.attack_counts):
        lines.append(
            f'  "{node_id(src)}" -> "{node_id(dst)}" '
            f'[label="{graph.strength_label(src, dst)}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
