# config.py - defaults for the glue synthesis toolkit; CLI flags override them
import os
from pathlib import Path

# === OUTPUT ===
OUTPUT_DIR_ENV = "CBA_GLUE_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = Path("output")
MANIFEST_NAME = "manifest.yaml"
GLUE_DOT_NAME = "glue.dot"
GLUE_LTS_NAME = "glue.lts"
VALIDATION_REPORT_NAME = "validation_report.json"

# === SIMULATION ===
DEFAULT_SEED = 0
DEFAULT_MAX_STEPS = 200

# === NAMING ===
ROUTER_PREFIX = "K"     # K2, K3, ... as in the enhanced Client-Server system
GLUE_PREFIX = "G"
WRAPPER_NAME = "W"      # identity enhancements


def output_dir() -> Path:
    """Default output directory; the environment variable wins over the built-in default."""
    return Path(os.environ.get(OUTPUT_DIR_ENV, DEFAULT_OUTPUT_DIR))
