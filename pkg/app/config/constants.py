class SpecPrefix:
    """Prefixes of the spec strings accepted on the command line."""
    WELL_MIXED = "well-mixed"
    SINGLETON = "singleton"
    ALL_AT_ONE = "all-at-one"
    FILE = "file"

    STRONG = "strong"
    ROTATING_LINE = "rotating-line"
    STATIC_PATH = "static-path"
    STATIC_STAR = "static-star"
    STATIC_CLIQUE = "static-clique"
    RANDOM = "random"
    TREE = "tree"

    SYMDIFF = "symdiff"
    SYMDIFF_ORIENTED = "symdiff-oriented"
    DET_SYMDIFF = "det-symdiff"
    BROADCAST = "bcast"

    TRUE_RANDOM = "true-random"
    PRF = "prf"


class BroadcastPolicyName:
    RANDOM = "random"
    ROUND_ROBIN = "round-robin"
    MIN_ID = "min-id"


class Fingerprint:
    PARITIES_PER_TEST = 7  # false-equal probability 2^-7 < 1/100
    FRAMING_BITS = 1  # direction turn after each test
    AMPLIFY_EXTRA = 7  # repetitions = ceil(log2(1/error)) + AMPLIFY_EXTRA
    PRF_SEED_MULTIPLIER = 4  # default seed bits = ceil(log2(k*d/alpha)) * 4


class FlowConfig:
    RETRY_GROWTH = 2  # window multiplier per retry


class Defaults:
    GREEN_FRACTION = 0.125
    BUDGET_CONST = 4
    MAX_RETRIES = 3
    SAMPLE_EPS = 0.1
    SAMPLE_TRIALS = 2000
    SAMPLE_DIST_TRIALS = 200_000  # per pair in the sample-dist sweep
    WITNESS_LOG_FACTOR = 5  # witness sizes are compared against ceil(5 * log2 n)
    STRONG_MAX_ROUNDS = 1000  # strong-adversary runs are expected to time out


class Scenarios:
    SYMDIFF_SCALING = "symdiff-scaling"
    STRONG_ADVERSARY = "strong-adversary"
    DET_SYMDIFF_LB = "det-symdiff-lb"
    OFFLINE_MULTIPORT = "offline-multiport"
    OFFLINE_BROADCAST = "offline-broadcast"
    DERANDOMIZE = "derandomize"
    SAMPLE_DIST = "sample-dist"

    ALL = (
        SYMDIFF_SCALING,
        STRONG_ADVERSARY,
        DET_SYMDIFF_LB,
        OFFLINE_MULTIPORT,
        OFFLINE_BROADCAST,
        DERANDOMIZE,
        SAMPLE_DIST,
    )


class CsvColumns:
    """Fixed column orders of every CSV artifact."""
    TRACE = (
        "round", "progress", "missing_total", "groups", "inter_group_edges",
        "components", "witness_size", "color",
    )
    SIMULATION_SUMMARY = (
        "run_id", "n", "k", "seed", "completion_round", "timed_out",
        "red", "green", "blue", "black", "max_witness_size",
        "half_missing_round", "progress_violations", "witness_violations",
    )
    OFFLINE_SUMMARY = (
        "run_id", "n", "k", "seed", "mode", "length", "length_bound", "valid",
        "phase_flows", "phase_retries", "selected",
    )
    SAMPLE_SUMMARY = (
        "run_id", "k", "seed", "a", "b", "eps", "trials", "empty_verdicts",
        "tv_distance", "mean_bits", "seed_bits",
    )
    SAMPLE_HISTOGRAM = ("token", "count", "frequency")


class Artifacts:
    SUMMARY = "summary.csv"
    TRACES_DIR = "traces"
    METRICS = "metrics.prom"
    LOG_FILE = "kgossip.log"
