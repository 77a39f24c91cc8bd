"""Simulation laboratory for the 1-d Bouchaud trap model and the FIN diffusion."""
import warnings

import numba

# TBB on this platform is often too old; workqueue is always available.
numba.config.THREADING_LAYER = "workqueue"
warnings.filterwarnings("ignore", message="The TBB threading layer", category=numba.NumbaWarning)

__version__ = "0.1.0"
