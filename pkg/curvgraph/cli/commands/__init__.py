from . import corpus
from . import curvature
from . import ends
from . import gh
from . import harmonic

__all__ = [
    "corpus",
    "curvature",
    "ends",
    "gh",
    "harmonic",
]
