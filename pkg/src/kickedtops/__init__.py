"""Coupled kicked tops and random-matrix predictions for their entanglement.

Modules
-------
spin
    Spin-j matrices and the single-top factors of the map.
tops
    Floquet operator, initial states and stroboscopic evolution.
entanglement
    Reduced density matrices, Schmidt spectra, von Neumann and linear entropy.
rmt
    Random states, the RDM eigenvalue density, gamma(Q) and Monte Carlo.
spectral
    Floquet eigenproblem, eigenstate averages, level spacings, symmetries.
experiments, cli
    Experiment runners and the ``kickedtops`` command.
"""
__version__ = "0.1.0"

from ._core import BACKEND  # noqa: E402
