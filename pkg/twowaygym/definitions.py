"""Global variables used across the package."""
import pathlib

# Dirs
TWOWAYGYM_ROOT_DIR = pathlib.Path(__file__).parent.absolute()
TWOWAYGYM_REPO_DIR = TWOWAYGYM_ROOT_DIR.parent
TWOWAYGYM_DATA_DIR = TWOWAYGYM_REPO_DIR / 'data'
TWOWAYGYM_RESULTS_DIR = TWOWAYGYM_DATA_DIR / 'results'
TWOWAYGYM_COUNTEREXAMPLES_DIR = TWOWAYGYM_DATA_DIR / 'counterexamples'

# Config files shipped with the package
CAPS_PTH = TWOWAYGYM_ROOT_DIR / 'caps.json'
REGRESSION_PTH = TWOWAYGYM_ROOT_DIR / 'regression.json'

# Tape endmarkers (never part of an input alphabet)
CENT = "¢"
DOLLAR = "$"
ENDMARKERS = (CENT, DOLLAR)

# JSON names of the endmarkers
ENDMARKER_JSON_NAMES = {CENT: "CENT", DOLLAR: "DOLLAR"}

# Codec symbols
HASH = "#"
BOTTOM = "⊥"
QUATERNARY = {"0": "00", "1": "01", HASH: "11", BOTTOM: "10"}
BINARY_ALPHABET = ("0", "1")
UNARY_SYMBOL = "1"

# Head directions; 0 only appears transiently before stationary-move elimination
LEFT = -1
RIGHT = +1
STAY = 0

# Work-tape symbols used by the space-bounded machines
BLANK = "B"
EDGE = "▯"
WILDCARD = "?"

# Versioning
MACHINE_JSON_VERSION = 1
MANIFEST_VERSION = 1
TWOWAYGYM_VERSION = "0.1.0"
