"""Verification suite and spectral solver for the 1d Dirac-Klein-Gordon system.

Subpackages:

* ``spinor``          -- Dirac matrices, eigenprojections, the null form
* ``weights``         -- hyperbolic weights and the 3/2 dominance inequality
* ``norms``           -- discrete space-time Fourier analysis and weighted norms
* ``counterexamples`` -- frequency-strip constructions, scaling fits, free-wave products
* ``regions``         -- well-posedness regions and the iteration constraint system
* ``solver``          -- charge-conserving split-step evolution
* ``cli``             -- command-line front end (``dkg1d``)
"""

__version__ = "0.1.0"

__all__ = [
    "spinor",
    "weights",
    "norms",
    "counterexamples",
    "regions",
    "solver",
    "cli",
]
