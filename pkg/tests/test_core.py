import numpy as np
import pytest

from mibrv import Bag, BagLabel, Dataset, validate_dataset
from mibrv.errors import (
    DimMismatch,
    DuplicateBagId,
    EmptyBag,
    EmptyDataset,
    NonFiniteFeature,
)

from conftest import make_bag


def two_bag_dataset():
    return Dataset.from_bags([
        make_bag([[0, 0], [1, 1], [2, 2]], "b1", BagLabel.POSITIVE),
        make_bag([[3, 3], [4, 4], [5, 5]], "b2", BagLabel.NEGATIVE),
    ])


def test_validate_returns_same_dataset():
    ds = two_bag_dataset()
    assert validate_dataset(ds) is ds


def test_validate_idempotent():
    ds = validate_dataset(two_bag_dataset())
    assert validate_dataset(ds) == ds


def test_empty_bag_rejected():
    ds = Dataset.from_bags([make_bag([[1.0]], "ok"), Bag("empty", np.empty((0, 1)))])
    with pytest.raises(EmptyBag, match="empty"):
        validate_dataset(ds)


def test_dim_mismatch_names_bag():
    ds = Dataset.from_bags([make_bag([[1, 2]], "flat"), make_bag([[1, 2, 3]], "deep")])
    with pytest.raises(DimMismatch, match="deep"):
        validate_dataset(ds)


def test_duplicate_id_rejected():
    ds = Dataset.from_bags([make_bag([[1.0]], "twin"), make_bag([[2.0]], "twin")])
    with pytest.raises(DuplicateBagId, match="twin"):
        validate_dataset(ds)


def test_non_finite_rejected():
    ds = Dataset.from_bags([make_bag([[np.nan, 1.0]], "bad")])
    with pytest.raises(NonFiniteFeature, match="bad"):
        validate_dataset(ds)


def test_empty_dataset_rejected():
    with pytest.raises(EmptyDataset):
        Dataset.from_bags([])


def test_features_are_read_only():
    bag = make_bag([[1.0, 2.0]], "b")
    with pytest.raises(ValueError):
        bag.features[0, 0] = 9.0


def test_bag_requires_2d_features():
    with pytest.raises(ValueError):
        Bag("b", np.zeros(3))
    with pytest.raises(ValueError):
        Bag("b", np.zeros((2, 0)))


def test_label_values():
    assert set(BagLabel) == {BagLabel.POSITIVE, BagLabel.NEGATIVE}
    assert int(BagLabel.POSITIVE) == 1
    assert int(BagLabel.NEGATIVE) == -1
    with pytest.raises(ValueError):
        BagLabel(0)


def test_label_coerced_on_construction():
    assert make_bag([[0.0]], "b", 1).label is BagLabel.POSITIVE
    assert make_bag([[0.0]], "b", -1).label is BagLabel.NEGATIVE


def test_dataset_accessors():
    ds = two_bag_dataset()
    assert len(ds) == 2
    assert ds.ids() == ("b1", "b2")
    assert ds.labels() == (BagLabel.POSITIVE, BagLabel.NEGATIVE)
    assert [b.id for b in ds] == ["b1", "b2"]
    assert ds.dim == 2


def test_bag_equality_by_content():
    a = make_bag([[1, 2]], "x", 1)
    b = make_bag([[1, 2]], "x", 1)
    c = make_bag([[1, 3]], "x", 1)
    assert a == b
    assert a != c
