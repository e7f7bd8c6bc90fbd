"""Tests for the model file format."""
import pytest

from wfcterrain.errors import ModelFormatError
from wfcterrain.models.patterns import Direction
from wfcterrain.storage.model_io import dump_model, load_model, load_model_file, save_model_file


def replace_line(text: str, index: int, line: str) -> str:
    lines = text.splitlines()
    lines[index] = line
    return "\n".join(lines) + "\n"


class TestDumpModel:
    """Tests for writing models."""

    def test_header(self, six_tile_model):
        """Test the magic line and the shape line."""
        lines = dump_model(six_tile_model).splitlines()
        assert lines[0] == "wfcterrain-model v1"
        assert lines[1] == "pattern_size 2 channels 2 patterns 6"

    def test_pattern_lines(self, six_tile_model):
        """Test that patterns are written in id order with frequencies."""
        lines = dump_model(six_tile_model).splitlines()
        assert lines[2] == "pattern 0 0 0 0 0 0 0 0 0 freq 4"
        assert all(line.startswith(f"pattern {i} ") for i, line in enumerate(lines[2:8]))

    def test_only_right_and_down_stored(self, six_tile_model):
        """Test that two adjacency lines per pattern are written."""
        adj = [line.split()[2] for line in dump_model(six_tile_model).splitlines() if line.startswith("adj")]
        assert adj == ["R", "D"] * 6

    def test_deterministic(self, sine_model):
        """Test that one model always dumps to the same text."""
        assert dump_model(sine_model) == dump_model(sine_model)


class TestLoadModel:
    """Tests for reading models."""

    def test_round_trip(self, sine_model):
        """Test that loading a dump restores catalog and all four tables."""
        loaded = load_model(dump_model(sine_model))
        assert loaded.catalog == sine_model.catalog
        assert loaded.rules == sine_model.rules
        assert loaded.rules.allowed[Direction.UP] == sine_model.rules.allowed[Direction.UP]

    def test_file_round_trip(self, six_tile_model, tmp_path):
        """Test saving and loading through a file."""
        path = save_model_file(six_tile_model, tmp_path / "m.wfc")
        assert load_model_file(path).rules == six_tile_model.rules

    def test_bad_magic(self, six_tile_model):
        """Test that another file type is rejected."""
        with pytest.raises(ModelFormatError, match="not a model file"):
            load_model(replace_line(dump_model(six_tile_model), 0, "something v1"))

    def test_unknown_version(self, six_tile_model):
        """Test that a future version is rejected."""
        with pytest.raises(ModelFormatError, match="version"):
            load_model(replace_line(dump_model(six_tile_model), 0, "wfcterrain-model v2"))

    def test_unsupported_pattern_size(self, six_tile_model):
        """Test that only 2x2 patterns are accepted."""
        text = replace_line(dump_model(six_tile_model), 1, "pattern_size 3 channels 2 patterns 6")
        with pytest.raises(ModelFormatError):
            load_model(text)

    def test_truncated(self, six_tile_model):
        """Test that a missing adjacency line is rejected."""
        text = "\n".join(dump_model(six_tile_model).splitlines()[:-1]) + "\n"
        with pytest.raises(ModelFormatError):
            load_model(text)

    def test_empty(self):
        """Test that an empty file is rejected."""
        with pytest.raises(ModelFormatError):
            load_model("")

    def test_out_of_order_patterns(self, six_tile_model):
        """Test that swapped pattern lines are rejected."""
        lines = dump_model(six_tile_model).splitlines()
        lines[2], lines[3] = lines[3], lines[2]
        with pytest.raises(ModelFormatError):
            load_model("\n".join(lines) + "\n")

    def test_non_canonical_values(self, six_tile_model):
        """Test that patterns out of lexicographic order are rejected."""
        lines = dump_model(six_tile_model).splitlines()
        values_a = lines[2].split()[2:10]
        values_b = lines[3].split()[2:10]
        lines[2] = " ".join(["pattern", "0", *values_b, "freq", "1"])
        lines[3] = " ".join(["pattern", "1", *values_a, "freq", "1"])
        with pytest.raises(ModelFormatError, match="canonical"):
            load_model("\n".join(lines) + "\n")

    def test_zero_frequency(self, six_tile_model):
        """Test that frequencies must be positive."""
        text = dump_model(six_tile_model).replace("freq 4", "freq 0")
        with pytest.raises(ModelFormatError, match="frequency"):
            load_model(text)

    def test_adjacency_violating_overlap(self, six_tile_model):
        """Test that a pair whose edges differ is rejected."""
        lines = dump_model(six_tile_model).splitlines()
        right_of_zeros = next(i for i, line in enumerate(lines) if line.startswith("adj 0 R"))
        lines[right_of_zeros] = "adj 0 R 0 1 2 3 4 5"
        with pytest.raises(ModelFormatError, match="overlap"):
            load_model("\n".join(lines) + "\n")

    def test_pattern_id_out_of_range(self, six_tile_model):
        """Test that adjacency ids must exist."""
        lines = dump_model(six_tile_model).splitlines()
        lines[-1] = lines[-1].split(" D")[0] + " D 99"
        with pytest.raises(ModelFormatError, match="out of range"):
            load_model("\n".join(lines) + "\n")

    def test_duplicate_entry(self, six_tile_model):
        """Test that a pattern cannot have two R lines."""
        lines = dump_model(six_tile_model).splitlines()
        d_line = next(i for i, line in enumerate(lines) if line.startswith("adj 5 D"))
        r_line = next(line for line in lines if line.startswith("adj 5 R"))
        lines[d_line] = r_line
        with pytest.raises(ModelFormatError, match="duplicate"):
            load_model("\n".join(lines) + "\n")

    def test_non_ascii_whitespace(self, six_tile_model):
        """Test that text which only str.split would accept is rejected."""
        with pytest.raises(ModelFormatError, match="ASCII"):
            load_model(dump_model(six_tile_model) + "\u00a0\n")

    def test_non_ascii_file(self, tmp_path):
        """Test that undecodable bytes are a format error."""
        path = tmp_path / "m.wfc"
        path.write_bytes(b"\xef\xbb\xbfwfcterrain-model v1\n")
        with pytest.raises(ModelFormatError, match="not ASCII"):
            load_model_file(path)
