"""wfcterrain: terrain heightmap synthesis with WaveFunctionCollapse over slope patterns."""

__version__ = "1.0.0"
