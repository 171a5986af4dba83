"""Configuration file for pytest."""

# Use pytest_plugins to import fixtures instead of direct imports
pytest_plugins = [
    "tests.fixtures.graph_fixtures",
    "tests.fixtures.measure_fixtures",
    "tests.fixtures.graphing_fixtures",
]
