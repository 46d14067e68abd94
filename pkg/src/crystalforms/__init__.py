"""Exact decomposition of shift-invariant closed uniform forms on crystal lattices.

Typical use::

    from crystalforms import parse_builtin, exclusion, ConfigSpace, decompose
    lat = parse_builtin("euclidean(2)")
    space = ConfigSpace(lat, exclusion())
    result = decompose(omega, space, lat.box_window([5, 5]))
"""

__version__ = "0.1.0"

from .calculus import (Differential, FormSum, InvariantFunction, TabulatedForm, TransportPotential, ZeroForm, expand,
                       expand_invariant, integrate, potential, reconstruct)
from .configspace import STAR, ConfigSpace, Configuration, Transition
from .crystal import (FiniteWindow, LatticeEdge, LatticeVertex, PeriodicLattice, essentially_euclidean_equivalent,
                      is_essentially_euclidean, maximal_abelian_cover, parse_builtin)
from .errors import (CapExceeded, CertificateError, ClosednessError, CrystalFormsError, InconclusiveError,
                     SplittingError, ValidationError)
from .interaction import (Interaction, conserved_basis, evidence_passes, exclusion, generalized_exclusion,
                          identity_interaction, irreducibility_evidence, simplicity, two_species_exclusion)
from .multigraph import MultiGraph
from .varadhan import AFunction, DecompositionOptions, DecompositionResult, Pairing, decompose, split_cocycle

__all__ = [name for name in dir() if not name.startswith("_")]
