"""Classical baselines and evaluation tooling for Bangla hate-speech classification."""

from importlib import resources
from pathlib import Path

__version__ = "0.1.0"


def fixture_dir() -> Path:
    """Directory holding the bundled synthetic fixture corpus and its configs."""
    return Path(str(resources.files("banglahate").joinpath("data/fixture")))
