"""shiftlab: exact workbench for subshift automorphism constructions.

Subpackages by topic:

- geometry: balls, finite-index lattices, cosets of Z and Z^2
- subshifts: SFT / sofic / full / product specs, exact languages, clopen sets
- cultures: the colony-merging process on periodic configurations
- exchange: pattern exchangeability and restricted permutation groups
- autos: block maps, controlled track permutations, partial shifts, words
- perms: permutation groups on Cartesian products (stabilizer chains)
- periodic: synchronizing words, periodic points, finite approximations
- uniformt / witness: certified growth and the factor decomposition
- cli / verify / render: command line, check suites, culture renders
"""

__version__ = "0.1.0"

from .geometry import Lattice, ball, default_gens, lattices_up_to_index
from .subshifts import (
    ClopenSet,
    Pattern,
    PeriodicConfig,
    SubshiftSpec,
    extendable,
    full_shift,
    golden_mean,
    hard_square,
    language,
    parse_spec,
    product_spec,
    safe_check,
)
from .cultures import run_process, validate_culture, verify_stable
from .autos import block_maps_equal, compose, controlled_permutation, partial_shift

__all__ = [
    "Lattice",
    "ball",
    "default_gens",
    "lattices_up_to_index",
    "ClopenSet",
    "Pattern",
    "PeriodicConfig",
    "SubshiftSpec",
    "extendable",
    "full_shift",
    "golden_mean",
    "hard_square",
    "language",
    "parse_spec",
    "product_spec",
    "safe_check",
    "run_process",
    "validate_culture",
    "verify_stable",
    "block_maps_equal",
    "compose",
    "controlled_permutation",
    "partial_shift",
]
