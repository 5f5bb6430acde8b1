# config.py - default experiment settings (override with a key=value file or CLI flags)

# Scenario: ambient dimension, true sparsity, noise variance, stream length
DIM = 256
SPARSITY_TRUE = 25
NOISE_VAR = 0.1
ITERS = 1500
SEED = 2024

# Optional abrupt change of the unknown vector (None = no change)
CHANGE_AT = None
CHANGE_COUNT = 0

# Algorithm: estimated sparsity K, window q, relaxation floor, step multiplier
SPARSITY_EST = 25
WINDOW = 98
EPS_PRIME = 0.1
MU_SCALE = 1.0

# Strict-shrinkage margin of the GT operator
DELTA = 1e-6

# Shrinkage rule token, e.g. "hard", "scad:alpha=12", "bridge:p=3", "soft:lambda=0.05"
RULE = "bridge:p=3"
SCAD_ALPHA = 12.0
BRIDGE_P = 10

# Hyperslab half-width = EPS_MULT * sigma
EPS_MULT = 1.3

# Monte-Carlo realizations and worker pool (None = all available cores)
REALIZATIONS = 100
WORKERS = None

# Per-iteration probes written as extra CSV columns
# Available: slab-distance, omega-distance, sparsity, theta-equivalence
PROBES = ""

# MSE thresholds reported in the run summary
MSE_THRESHOLDS = "0.1,0.01,0.001"

OUT = "apgt_mse.csv"

# Named random generator recorded in every CSV header
RNG_NAME = "Philox"

# K/L ratio used by the scaling benchmark (None = keep K* and K fixed)
BENCH_SPARSITY = None

# Omega-distance probe is only allowed at desk scale
OMEGA_PROBE_MAX_DIM = 64
OMEGA_PROBE_MAX_WINDOW = 8
