"""Runtime configuration, read from the environment (and an optional .env file)."""

import os

from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = os.getenv("EXPDIFF_LOG_LEVEL", "WARNING").strip().upper()

# Numeric context defaults
PRECISION = int(os.getenv("EXPDIFF_PRECISION", "256"))
INITIAL_SAMPLES = int(os.getenv("EXPDIFF_INITIAL_SAMPLES", str(2 ** 10)))
MAX_SAMPLES = int(os.getenv("EXPDIFF_MAX_SAMPLES", str(2 ** 18)))
WINDING_TOL = float(os.getenv("EXPDIFF_WINDING_TOL", "1e-6"))
CONTOUR_RETRIES = int(os.getenv("EXPDIFF_CONTOUR_RETRIES", "5"))
# zeros closer to the contour than this many finest-level sample spacings force a nudge
CLEARANCE_SPACINGS = int(os.getenv("EXPDIFF_CLEARANCE_SPACINGS", "64"))

DEFAULT_RADII = os.getenv("EXPDIFF_RADII", "geometric:10,2,5")
