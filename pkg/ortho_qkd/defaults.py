"""Default values shared by the library and the command line runner."""

# numerical tolerances
NORM_TOLERANCE = 1e-10
ALGEBRA_TOLERANCE = 1e-10
MATCH_TOLERANCE = 1e-9

# dense states beyond this size are rejected
MAX_QUBITS = 12

# protocol run defaults
N = 100
CHECKING_FRACTION = 0.5
DECOY_RATIO = 0.25
ERROR_THRESHOLD = 0.0

# experiment runner defaults
TRIALS = 1
WORKERS = 1
REPORT_FORMAT = 'json'
REPORT_FORMATS = ('json', 'csv', 'text')
GROUPINGS = ('correlated', 'independent')
CONFIDENCE_Z = 1.96

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(message)s"
LOG_DATE_FORMAT = "%H:%M:%S"
