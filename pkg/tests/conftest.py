import numpy as np
import pytest

from mibrv import Bag, BagLabel, Dataset


def make_bag(points, bag_id="b", label=None):
    return Bag(id=bag_id, features=np.asarray(points, dtype=float), label=label)


def random_bag(rng, bag_id, dim, max_instances=8, label=None, low=-10.0, high=10.0):
    n = int(rng.integers(1, max_instances + 1))
    return Bag(id=bag_id, features=rng.uniform(low, high, (n, dim)), label=label)


def random_dataset(rng, n_bags=8, dim=3, max_instances=6):
    bags = []
    for i in range(n_bags):
        label = BagLabel.POSITIVE if i % 2 == 0 else BagLabel.NEGATIVE
        bags.append(random_bag(rng, f"bag{i}", dim, max_instances, label))
    return Dataset.from_bags(bags)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
