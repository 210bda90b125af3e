"""
Fixture graphs and colourings shipped with the package.
Provides helpers to list fixtures and load them as validated objects.
"""

from .loader import FIXTURE_DIR, fixture_names, fixture_path, load_colouring, load_graph

__all__ = [
    "FIXTURE_DIR",
    "fixture_names",
    "fixture_path",
    "load_colouring",
    "load_graph",
]
