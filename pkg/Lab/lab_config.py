import os

# MARK: Field limits
MAX_FIELD_DEGREE = 20
EAGER_TABLE_DEGREE = 16

# MARK: Enumeration limits
DEFAULT_PLACE_CAP = 200_000
ENUMERATION_QS = (2, 4, 8, 16, 32)
MAX_PATH_LENGTH = 8
# Largest generator matrix (rows x columns) a preset may materialise.
MAX_MATRIX_ENTRIES = 1 << 24

# MARK: Structure suite limits
FIELD_SCAN_MAX_Q = 64
SELF_COLOR_MAX_Q = 32
PAIR_PARTITION_MAX_Q = 16

# MARK: Distance search
DEFAULT_SEARCH_BUDGET = 2**31
# Largest table of partial codewords held in memory by the exhaustive search.
SEARCH_BLOCK_ROWS = 2**16
SAMPLE_BATCH = 50_000
REPAIR_SAMPLES = 200

# MARK: Bounds
GV_GRID_POINTS = 10_000
GV_TOLERANCE = 1e-9

# MARK: Runtime
THREADS_ENV_VAR = "LRCLAB_THREADS"
SCHEMA_VERSION = 1
RESULT_DB = "lrclab_results.db"
DIAGNOSTICS_LOGGER = "lrclab.diagnostics"


def worker_count():
    """Number of worker threads, capped by LRCLAB_THREADS when it is set."""
    default = min(8, os.cpu_count() or 1)
    value = os.environ.get(THREADS_ENV_VAR)
    if not value:
        return default
    try:
        return max(1, int(value))
    except ValueError:
        return default
