"""Configuration constants for the taxicab analysis tools."""

# Console output separators
SEPARATOR_LONG = "=" * 70
SEPARATOR_SHORT = "=" * 60

# File names
SETTINGS_FILE = "taxicab.yml"
MANIFEST_FILENAME = "manifest.yml"
DEFAULT_OUTPUT_DIR = "results"
CSV_TABLE_FILES = {
    "deltas": "deltas.csv",
    "qsr": "qsr.csv",
    "row_scores": "row_scores.csv",
    "col_scores": "col_scores.csv",
}

# Exit codes
EXIT_SUCCESS = 0
EXIT_USAGE = 1
EXIT_DATA_ERROR = 2
EXIT_INTERNAL = 3

# Numerical tolerances
CENTERING_TOL = 1e-10
MASS_TOL = 1e-12
ZERO_DISPERSION_TOL = 1e-12

# Search defaults
DEFAULT_MAX_AXES = 2
DEFAULT_EXHAUSTIVE_CAP = 25
AUTO_EXHAUSTIVE_CAP = 21
DEFAULT_CRISSCROSS_MAX_ITER = 100
DEFAULT_CHUNK_SIZE = 1 << 14
DEFAULT_POPULATION = 50
DEFAULT_GENERATIONS = 200
DEFAULT_MUTATION_RATE = 0.05
DEFAULT_ELITISM = 2
DEFAULT_TOURNAMENT_SIZE = 3
DEFAULT_SEED = 42

# Synthetic label prefixes for unlabeled input
ROW_LABEL_PREFIX = "R"
COL_LABEL_PREFIX = "C"
