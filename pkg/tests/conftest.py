import pathlib

import pytest

from argfair import Dataset, Individual, Schema, labels_from_dataset, load_table

ROOT = pathlib.Path(__file__).resolve().parents[1]
DATA = ROOT / "data"
CONFIGS = ROOT / "configs"


def make_schema(domains, label_column="label", positive_label="+", name="test"):
    """Schema from a {attr: iterable-of-values} mapping, attributes in dict order."""
    return Schema(
        attributes=tuple(domains),
        domains={a: frozenset(vs) for a, vs in domains.items()},
        label_column=label_column,
        positive_label=positive_label,
        name=name,
    )


def make_pool(schema, rows):
    """Dataset from (value-tuple, label) pairs in schema attribute order."""
    individuals = [
        Individual(values=dict(zip(schema.attributes, values)), label=label)
        for values, label in rows
    ]
    return Dataset(schema=schema, rows=individuals)


@pytest.fixture(scope="session")
def table1_schema():
    return Schema.from_yaml(CONFIGS / "table1.yaml")


@pytest.fixture(scope="session")
def table1_dataset(table1_schema):
    return load_table(DATA / "table1.csv", table1_schema)


@pytest.fixture(scope="session")
def table1_labels(table1_dataset):
    return labels_from_dataset(table1_dataset)
