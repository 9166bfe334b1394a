"""Tabular data handling: schema-validated loading, binning, and splitting.

Everything downstream works on purely categorical individuals, so the one
job of this module is to turn a delimited text file into clean categorical
rows: drop rows with nulls, map numeric attributes onto declared bins, and
produce reproducible train/test partitions.
"""

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np
import yaml

from .errors import (
    BinningError,
    DomainError,
    ParameterError,
    ParseError,
    SchemaError,
)

POSITIVE = "+"
NEGATIVE = "-"


def _bound(value):
    """Bin bound: a number, or the spellings '.inf' / '-.inf'."""
    if isinstance(value, str):
        text = value.strip().lstrip("+")
        if text in (".inf", "inf"):
            return math.inf
        if text in ("-.inf", "-inf"):
            return -math.inf
    return float(value)


@dataclass(frozen=True)
class Schema:
    """Declared shape of a dataset: ordered attributes and their domains.

    ``domains[a]`` is a frozenset of admissible values for categorical
    attributes and ``None`` for numeric attributes that still await binning.
    ``binning[a]`` holds half-open ``[lower, upper)`` ranges with a category
    label each; several ranges may share one label.
    """

    attributes: tuple
    domains: dict
    binning: dict = field(default_factory=dict)
    label_column: str = None
    positive_label: str = None
    delimiter: str = ","
    null_values: tuple = ()
    drop_columns: tuple = ()
    name: str = "unnamed"

    def __post_init__(self):
        if len(set(self.attributes)) != len(self.attributes):
            raise SchemaError("attribute names must be unique")
        if self.label_column is not None and self.label_column in self.attributes:
            raise SchemaError(f"label column {self.label_column!r} must not be an attribute")
        for attr in self.domains:
            if attr not in self.attributes:
                raise SchemaError(f"domain declared for unknown attribute {attr!r}")
        for attr, bins in self.binning.items():
            if attr not in self.attributes:
                raise SchemaError(f"bins declared for unknown attribute {attr!r}")
            ordered = sorted(bins, key=lambda b: b[0])
            for (lo, hi, label) in ordered:
                if not lo < hi:
                    raise SchemaError(f"empty bin [{lo}, {hi}) on {attr!r}")
            for (_, hi, _), (lo, _, _) in zip(ordered, ordered[1:]):
                if hi > lo:
                    raise SchemaError(f"overlapping bins on {attr!r}")

    @property
    def numeric_attributes(self):
        return tuple(a for a in self.attributes if self.domains.get(a) is None)

    def is_numeric(self, attr):
        return self.domains.get(attr) is None

    @classmethod
    def from_yaml(cls, path):
        """Read the declarative schema config (attributes, domains, bins,
        drop list, label column, positive-label literal)."""
        with open(path) as fh:
            raw = yaml.safe_load(fh)
        attributes = []
        domains = {}
        binning = {}
        for entry in raw.get("attributes", []):
            name = entry["name"]
            attributes.append(name)
            if entry.get("numeric"):
                domains[name] = None
                if "bins" in entry:
                    bins = []
                    for lo, hi, label in entry["bins"]:
                        bins.append((_bound(lo), _bound(hi), str(label)))
                    binning[name] = tuple(bins)
            else:
                domains[name] = frozenset(str(v) for v in entry["values"])
        label = raw.get("label_column")
        return cls(
            attributes=tuple(attributes),
            domains=domains,
            binning=binning,
            label_column=label,
            positive_label=None if label is None else str(raw.get("positive_label")),
            delimiter=raw.get("delimiter", ","),
            null_values=tuple(str(v) for v in raw.get("null_values", [])),
            drop_columns=tuple(raw.get("drop_columns", [])),
            name=raw.get("name", "unnamed"),
        )

    def to_yaml(self, path):
        entries = []
        for attr in self.attributes:
            if self.is_numeric(attr):
                entry = {"name": attr, "numeric": True}
                if attr in self.binning:
                    entry["bins"] = [[lo, hi, label] for lo, hi, label in self.binning[attr]]
            else:
                entry = {"name": attr, "values": sorted(self.domains[attr])}
            entries.append(entry)
        doc = {
            "name": self.name,
            "delimiter": self.delimiter,
            "null_values": list(self.null_values),
            "drop_columns": list(self.drop_columns),
            "label_column": self.label_column,
            "positive_label": self.positive_label,
            "attributes": entries,
        }
        with open(path, "w") as fh:
            yaml.safe_dump(doc, fh, sort_keys=False, allow_unicode=True)


@dataclass(frozen=True)
class Individual:
    """One row: a value for every schema attribute, plus an optional label."""

    values: dict
    label: str = None

    def value(self, attr):
        try:
            return self.values[attr]
        except KeyError:
            raise SchemaError(f"individual has no attribute {attr!r}") from None

    def pairs(self):
        """Attribute-value pairs in schema order (dict preserves insertion)."""
        return tuple(self.values.items())


@dataclass
class Dataset:
    """Schema plus ordered rows. Row position is the stable identity used
    for neighbor tie-breaking, label assignments, and reports."""

    schema: Schema
    rows: list

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    def to_csv(self, path):
        """Serialize attributes (and label, if any) back to delimited text.

        Loading the result with the same schema reproduces the rows, so a
        schema whose labels are already +/- must declare positive_label '+'.
        """
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, delimiter=self.schema.delimiter)
            header = list(self.schema.attributes)
            if self.schema.label_column:
                header.append(self.schema.label_column)
            writer.writerow(header)
            for row in self.rows:
                record = [row.values[a] for a in self.schema.attributes]
                if self.schema.label_column:
                    record.append(row.label if row.label is not None else "")
                writer.writerow(record)


def load_table(path, schema):
    """Load a delimited file with a header row into a Dataset.

    Rows containing a null literal (or empty cell) in any kept column are
    dropped whole; the drop count is kept on the returned dataset as
    ``dropped_rows``. Unknown header columns raise SchemaError; categorical
    values outside their declared domain raise DomainError with the
    offending 0-based data row index.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=schema.delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected a header row")
        known = set(schema.attributes) | set(schema.drop_columns)
        if schema.label_column:
            known.add(schema.label_column)
        unknown = [c for c in header if c not in known]
        if unknown:
            raise SchemaError(f"{path}: unknown column(s) {unknown}")
        missing = [a for a in schema.attributes if a not in header]
        if schema.label_column and schema.label_column not in header:
            missing.append(schema.label_column)
        if missing:
            raise SchemaError(f"{path}: missing column(s) {missing}")

        col = {c: i for i, c in enumerate(header)}
        keep = [(a, col[a]) for a in schema.attributes]
        label_idx = col[schema.label_column] if schema.label_column else None
        nulls = set(schema.null_values) | {""}

        rows = []
        dropped = 0
        for row_index, record in enumerate(reader):
            if len(record) != len(header):
                raise ParseError(f"{path}: row {row_index} has {len(record)} cells, expected {len(header)}")
            cells = [record[i] for _, i in keep]
            label_cell = record[label_idx] if label_idx is not None else None
            if any(c in nulls for c in cells) or (label_cell is not None and label_cell in nulls):
                dropped += 1
                continue
            values = {}
            for (attr, _), cell in zip(keep, cells):
                domain = schema.domains[attr]
                if domain is None:
                    try:
                        float(cell)
                    except ValueError:
                        raise ParseError(
                            f"{path}: row {row_index}: non-numeric value {cell!r} for {attr!r}"
                        ) from None
                elif cell not in domain:
                    raise DomainError(attr, cell, row_index)
                values[attr] = cell
            label = None
            if label_cell is not None:
                label = POSITIVE if label_cell == schema.positive_label else NEGATIVE
            rows.append(Individual(values=values, label=label))

    dataset = Dataset(schema=schema, rows=rows)
    dataset.dropped_rows = dropped
    return dataset


def _bin_value(bins, attr, raw):
    x = float(raw)
    for lo, hi, label in bins:
        if lo <= x < hi:
            return label
    raise BinningError(attr, raw)


def bin_numeric(dataset, binning=None):
    """Replace numeric attributes by their bin categories.

    ``binning`` defaults to the bins declared on the schema. The returned
    dataset has updated domains: each binned attribute's domain becomes its
    set of bin labels.
    """
    schema = dataset.schema
    binning = dict(schema.binning if binning is None else binning)
    targets = [a for a in schema.attributes if schema.is_numeric(a)]
    for attr in targets:
        if attr not in binning:
            raise BinningError(attr, "<no bins declared>")

    new_domains = dict(schema.domains)
    for attr in targets:
        new_domains[attr] = frozenset(label for _, _, label in binning[attr])
    new_schema = replace(schema, domains=new_domains, binning={})

    new_rows = []
    for row in dataset.rows:
        values = dict(row.values)
        for attr in targets:
            values[attr] = _bin_value(binning[attr], attr, values[attr])
        new_rows.append(Individual(values=values, label=row.label))
    return Dataset(schema=new_schema, rows=new_rows)


def split(dataset, test_fraction, seed):
    """Shuffle-then-cut partition: deterministic in ``seed``.

    The permutation comes from ``numpy.random.default_rng(seed)``; the first
    ``floor(n * (1 - test_fraction))`` permuted rows form the train set and
    the remainder the test set.
    """
    if not 0 < test_fraction < 1:
        raise ParameterError(f"test_fraction must be in (0, 1), got {test_fraction}")
    n = len(dataset)
    perm = np.random.default_rng(seed).permutation(n)
    n_train = math.floor(n * (1 - test_fraction))
    train_rows = [dataset.rows[i] for i in perm[:n_train]]
    test_rows = [dataset.rows[i] for i in perm[n_train:]]
    return (
        Dataset(schema=dataset.schema, rows=train_rows),
        Dataset(schema=dataset.schema, rows=test_rows),
    )
