"""Pytest configuration and shared fixtures."""
import numpy as np
import pytest
from unittest.mock import MagicMock

from wfcterrain.models.domain import HeightMap
from wfcterrain.models.patterns import Model, Pattern, PatternCatalog
from wfcterrain.services.gradient import compute_gradients, training_set
from wfcterrain.services.patterns import build_model, infer_adjacency
from wfcterrain.services.synthetic import synthetic_terrain
from wfcterrain.storage.redis_store import ModelStore


def binary_pattern(rows, frequency=1):
    """A pattern whose gx channel is the given 2x2 matrix and whose gy channel is zero."""
    return Pattern.from_cells(rows, [[0, 0], [0, 0]], frequency)


# Six gx-only tiles: zeros, ones, vertical stripes both ways, horizontal stripes both ways.
SIX_TILES = [
    binary_pattern([[0, 0], [0, 0]], 4),
    binary_pattern([[1, 1], [1, 1]], 3),
    binary_pattern([[0, 1], [0, 1]], 2),
    binary_pattern([[1, 0], [1, 0]], 2),
    binary_pattern([[0, 0], [1, 1]], 1),
    binary_pattern([[1, 1], [0, 0]], 1),
]


@pytest.fixture
def sine_heightmap():
    """40x40 egg-crate terrain."""
    return synthetic_terrain("sine", 40, 40)


@pytest.fixture
def ramp_heightmap():
    return synthetic_terrain("ramp", 6, 6)


@pytest.fixture
def small_heightmap():
    """4x4 hand-written heights."""
    return HeightMap.from_rows([
        [10, 12, 15, 15],
        [11, 12, 14, 16],
        [13, 13, 13, 17],
        [14, 15, 16, 18],
    ])


@pytest.fixture
def sine_model(sine_heightmap):
    return build_model(training_set(sine_heightmap))


@pytest.fixture
def six_tile_model():
    catalog = PatternCatalog.from_patterns(SIX_TILES)
    return Model(catalog, infer_adjacency(catalog))


@pytest.fixture
def contradiction_model():
    """One pattern that cannot neighbour itself in any direction."""
    catalog = PatternCatalog.from_patterns([Pattern.from_cells([[0, 1], [2, 3]], [[4, 5], [6, 7]])])
    return Model(catalog, infer_adjacency(catalog))


@pytest.fixture
def random_heightmap():
    """Factory for seeded void-free heightmaps."""
    def make(rows, cols, seed=0, low=-50, high=50):
        rng = np.random.default_rng(seed)
        return HeightMap(rng.integers(low, high + 1, size=(rows, cols)))
    return make


@pytest.fixture
def sine_field(sine_heightmap):
    return compute_gradients(sine_heightmap)


@pytest.fixture
def mock_model_store():
    """Create a mock ModelStore for testing."""
    store = MagicMock(spec=ModelStore)
    store.models = {}  # model_id -> model text

    def put_model(model_text: str):
        model_id = ModelStore.model_id(model_text)
        store.models.setdefault(model_id, model_text)
        return model_id

    def get_model_text(model_id: str):
        return store.models.get(model_id)

    store.put_model.side_effect = put_model
    store.get_model_text.side_effect = get_model_text
    store.exists.side_effect = lambda model_id: model_id in store.models
    store.ping.return_value = True
    return store
