"""Toolkit configuration: paths, scoring defaults, service limits."""

from pathlib import Path

# Root directories
PROJECT_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = PROJECT_ROOT / "data"
TEMPLATES_DIR = PROJECT_ROOT / "templates"
FIXTURES_DIR = DATA_DIR / "fixtures"

VERSION = "0.3.0"

# Placeholder surface form (case-sensitive, brackets literal)
PH_TOKEN = "<ph>"

# Abstention cost factor fitted on listening-test preferences (lambda = 0.1)
DEFAULT_ALPHA = 0.5064

# Alignment
COST_TOLERANCE = 1e-9

# Calibration
DEFAULT_LAMBDA = 0.1
LOG_PROB_FLOOR = 1e-12
CALIBRATION_GRID_START = 0.01
CALIBRATION_GRID_STOP = 0.99
CALIBRATION_GRID_STEP = 0.01
CALIBRATION_TOLERANCE = 1e-4
CALIBRATION_MAX_ITERATIONS = 100
FLAT_LOSS_TOLERANCE = 1e-12

# Synthetic preference data
SYNTH_VOCABULARY = (
    "the", "patient", "reported", "chronic", "pain", "in", "left", "knee",
    "after", "surgery", "meeting", "agenda", "budget", "review", "remote",
    "control", "design", "team", "market", "project", "deadline", "next",
    "week", "signal", "noise", "ratio", "clinic", "dose", "daily", "tablet",
)
SYNTH_MAX_DELTA = 0.15
SYNTH_MIN_SLOPE = 1.5
SYNTH_MAX_ATTEMPTS_PER_ITEM = 2_000

# Confidence-bar replacement
DEFAULT_BAR = 0.2
DEFAULT_BAR_GRID = (0.0, 0.5, 0.01)   # start, stop (inclusive), step

# Reports
REPORT_DECIMALS = 6

# Reward service
SERVICE_HOST = "127.0.0.1"
SERVICE_PORT = 8080
MAX_BATCH_ITEMS = 10_000
MAX_PAYLOAD_BYTES = 16 * 1024 * 1024
ADVANTAGE_STD_FLOOR = 1e-8

# CLI exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3
