FORMAT_JSON = "json"
FORMAT_MSGPACK = "msgpack"
FORMAT_PICKLE = "pickle"
FORMAT_KEYVALUE = "kv"

BACKEND_EXACT = "exact"
BACKEND_MPS = "mps"

# Approximate Mott insulator to superfluid transition of the unit-filling chain.
CRITICAL_J_OVER_U = 0.31

DEFAULT_DEPTH = 10.0
DEFAULT_CUTOFF = 16
DEFAULT_GRID_POINTS = 2048
DEFAULT_PERIODS = 8

DEFAULT_N_ERROR = 0.10
DEFAULT_GRID = "0.01:0.6:30"

FIG2_COLUMNS = ["j_over_u", "e_exact_per_n", "g_per_n", "d", "band_low", "band_high"]
FIG3_COLUMNS = ["j_over_u", "b_mean", "abs_work_per_dj"]

CHECKPOINT_HEADER = b"BHCMPS/1\n"

# J/U window of the fourth-power discrepancy fit.
FIT_RANGE = (0.02, 0.1)
