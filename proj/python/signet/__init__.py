"""Opinion dynamics on signed networks: spectral thresholds, frustration,
continuous- and discrete-time simulation and parameter sweeps."""

from ._signet import *  # noqa: F401,F403
from ._signet import SignetError

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
