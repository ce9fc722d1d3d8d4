from fractions import Fraction

# Code defaults
DEFAULT_L           = 4
DEFAULT_W           = 600
DEFAULT_C           = Fraction(1, 5)
DEFAULT_SEED        = 0
DEFAULT_SYMBOL_SIZE = 1500
MEGA_K              = 100_000
MAX_L               = 16

# Edge derivation
MAX_RESAMPLE_ATTEMPTS = 64
EDGE_CHUNK            = 4096

# LT baseline
LT_K                = 400
SOLITON_C           = 0.03
SOLITON_DELTA       = 0.5

# Oracle guard
ORACLE_MAX_BALLS    = 256

# Experiments
DEFAULT_TRIALS          = 50
SEARCH_TRIALS           = 1000
TARGET_FAILURE          = 1e-3
GRID_STEP               = Fraction(1, 200)   # 0.5 percentage points
GRID_MAX_METTLE         = Fraction(1, 2)
GRID_MAX_LT             = Fraction(3, 2)
ERRORFLOOR_BALLS        = 10_000_000
GE_VALIDATE_STEPS       = 1_000_000
GE_RELATIVE_TOLERANCE   = 0.01
BENCH_SMALL_K           = 10_000
REFERENCE_DECODE_US     = 2.6
UNIFORM_BLOCK           = 4096
GE_RUN_BLOCK            = 65536

# GE channel presets: (name, p_g2b, p_b2g, eps_g, eps_b)
GE_CHANNELS = {
	'ge1': ('VoIP',             5e-4,  0.2,  0.01, 1.0),
	'ge2': ('WiMAX',            0.04,  0.05, 0.01, 0.02),
	'ge3': ('Video-conf-light', 0.05,  0.75, 0.01, 0.1),
	'ge4': ('Video-conf-heavy', 0.05,  0.75, 0.05, 0.5),
	'ge5': ('Long-fade',        0.001, 0.01, 0.01, 0.1),
}

# Reference values per channel: (avg latency, p95 latency, overhead c)
REFERENCE_CHANNELS = {
	'bec:0.01': (61,  459, Fraction(11, 200)),
	'bec:0.02': (84,  582, Fraction(8, 100)),
	'bec:0.03': (117, 663, Fraction(9, 100)),
	'bec:0.08': (133, 728, Fraction(20, 100)),
	'bec:0.1':  (199, 815, Fraction(25, 100)),
	'ge1':      (37,  291, Fraction(9, 100)),
	'ge2':      (72,  522, Fraction(6, 100)),
	'ge3':      (53,  425, Fraction(8, 100)),
	'ge4':      (127, 713, Fraction(20, 100)),
	'ge5':      (50,  420, Fraction(12, 100)),
}

# LT overhead at k=400, cited for context
REFERENCE_LT_OVERHEAD = {
	'bec:0.01': 0.76, 'bec:0.02': 0.78, 'bec:0.03': 0.81, 'bec:0.08': 0.92, 'bec:0.1': 0.96,
	'ge1': 0.76, 'ge2': 0.78, 'ge3': 0.78, 'ge4': 0.93, 'ge5': 0.78,
}

# RaptorQ overhead (k) and decode time per symbol, cited only, never computed
REFERENCE_RAPTORQ_OVERHEAD = {
	'bec:0.01': (0.0614, 114), 'bec:0.02': (0.0714, 168), 'bec:0.03': (0.0763, 236),
	'bec:0.08': (0.156, 269),  'bec:0.1': (0.15, 405),    'ge1': (0.238, 84),
	'ge2': (0.0604, 149),      'ge3': (0.0702, 114),      'ge4': (0.1556, 257),
	'ge5': (0.1584, 101),
}
REFERENCE_RAPTORQ_DECODE_US = {127: 122, 257: 150, 511: 265, 1002: 616, 2040: 3545, 4069: 5824, 8194: 21451}

# CSV columns
TRIAL_COLUMNS = [
	'trial', 'total_balls', 'decoded', 'error_floor_balls', 'stalled_balls', 'stall_occurred',
	'avg_latency', 'p95_latency', 'bins_sent', 'bins_received', 'peel_ops',
]
SUMMARY_COLUMNS = [
	'code', 'channel', 'c', 'w', 'l', 'k', 'trials', 'seed', 'failure_rate', 'avg_latency',
	'p95_latency', 'overhead_used', 'error_floor_rate', 'peel_ops_per_symbol',
]
SEARCH_COLUMNS = ['c', 'trials', 'failures', 'failure_rate', 'upper_95', 'passed']
ERRORFLOOR_COLUMNS = ['channel', 'l', 'balls', 'error_floor_balls', 'error_floor_rate', 'expected_rate']
GE_COLUMNS = [
	'channel', 'steps', 'empirical_rate', 'expected_rate', 'relative_error', 'std_error', 'z_score',
	'mean_bad_sojourn', 'expected_bad_sojourn', 'within_tolerance',
]
BENCH_COLUMNS = ['k', 'trials', 'payload_size', 'decode_us_per_symbol', 'peel_ops_per_symbol', 'failures']

# Messages
OUT_OF_ORDER        = 'Source symbol {got} pushed but the encoder expects position {expected}.'
NOT_ASCENDING       = 'Bin {got} is not above the last processed bin {last}.'
PAST_STREAM_END     = 'Bin {got} lies past the end of the stream (last bin {last}).'
WRONG_PAYLOAD_SIZE  = 'Payload has {got} bytes, expected {expected}.'
STREAM_INCOMPLETE   = 'The stream is not fully consumed yet (processed through bin {cursor}).'
BALL_COUNT_MISMATCH = 'Decoder was built for {expected} balls, report asked for {got}.'
TOO_MANY_BALLS      = 'Oracle refuses {got} balls, the bound is {bound}.'
DEGENERATE_GE       = 'Gilbert-Elliott chain with p_g2b + p_b2g = 0 has no stationary rate.'
BAD_CHANNEL         = 'Cannot parse channel "{spec}". Use bec:<epsilon>, ge:<p_g2b>,<p_b2g>,<eps_g>,<eps_b> or ge1..ge5.'
BAD_RATIO           = 'Cannot parse overhead ratio "{value}". Use p/q, a decimal or a percentage.'
LATENCY_NEEDS_METTLE = 'The latency experiment only runs the mettle code.'
ERRORFLOOR_NEEDS_BEC = 'The error-floor experiment needs a bec:<epsilon> channel.'
GE_VALIDATE_NEEDS_GE = 'ge-validate needs a Gilbert-Elliott channel.'
TARGET_UNREACHABLE  = 'No grid point up to c={c_max} reached failure rate {target}; best was c={best} at {rate:.4g}.'
UNKNOWN_COMMAND     = 'Unknown command "{cmd}". Try: {available}'
DECODE_MISSING      = '{missing} of {total} source symbols could not be decoded ({stalled} stalled, {error_floor} error floor).'
DECODE_NEEDS_K      = 'decode needs --k, the number of source symbols in the stream.'
BAD_FLAG_VALUE      = 'Config file value {key}={value} is not a valid boolean.'
UNKNOWN_CONFIG_KEY  = 'Config file key "{key}" matches no flag.'
HELP_TEXT           = '''
Commands:
  latency : average and p95 decoding latency over mega-codeword trials
  efficiency : smallest overhead ratio c reaching the target failure rate
  errorfloor : fraction of balls whose l bins were all erased
  bench : decode time and peel operations per symbol
  ge-validate : empirical Gilbert-Elliott erasure rate against the closed form
  encode : source bytes to coded wire records
  decode : coded wire records back to source bytes
'''
