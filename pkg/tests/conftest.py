import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

# wall-clock deadlines are noise on a loaded machine; correctness only
settings.register_profile(
    "ci", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ci")

sys.path.insert(0, str(Path(__file__).parent))
