from . import curvature
from . import ends
from . import exact_simplex
from . import generators
from . import gh_limit
from . import graph_core
from . import harmonic
from . import linear_solvers
from . import reporting
from . import worker_pool

__all__ = [
    "curvature",
    "ends",
    "exact_simplex",
    "generators",
    "gh_limit",
    "graph_core",
    "harmonic",
    "linear_solvers",
    "reporting",
    "worker_pool",
]
