"""Spectral toolkit for the 2D Schrodinger operator with a -C*K0(s) well.

Subpackages by role:

- specfun: K0/K1 special functions, from scratch
- quadrature: double-exponential semi-infinite quadrature
- model: units, coupling, effective potential, closed-form constants
- eigensolver: radial bound-state counts, energies, and wavefunctions
- bounds: Seto counting bounds and the Kato-inequality sampler
- cli: sweep / potential / verify subcommands
"""

from .model import Coupling, PhysicalParams
from .eigensolver import RadialProblem

__all__ = ["Coupling", "PhysicalParams", "RadialProblem"]
__version__ = "0.1.0"
