"""Structural physical approximations of positive maps and entanglement witnesses.

Modules:

- ``linalg``, ``states``: bipartite linear algebra and standard states
- ``maps``: Choi-matrix representation and a catalog of maps
- ``witnesses``: witness constructors, zero sets, antisymmetric-support family
- ``spa``: approximation thresholds and constructions
- ``separability``: graded separability certificates
- ``gaussian``: covariance-matrix level Gaussian channels
- ``claims``, ``io``, ``cli``: claim registry, JSON I/O and command line
"""

from .maps import MapRep, catalog_map, parse_map_spec
from .spa import SpaResult, spa_standard, spa_with_channel
from .witnesses import Witness, witness_from_map

__all__ = ["MapRep", "SpaResult", "Witness", "catalog_map", "parse_map_spec", "spa_standard", "spa_with_channel",
           "witness_from_map"]
__version__ = "0.1.0"
