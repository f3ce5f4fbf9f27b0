"""Z-rotation synthesis from distilled resource-state ladders.

Modules:
  qcore      exact state-vector / density-matrix substrate
  ladder     resource-state ladders: angles, merges, climb costs
  factories  post-selected 4-qubit circuits producing the psi base states
  synthesis  greedy rotation compilation and the min-online variant
  noise      noisy-resource propagation and decay fits
  study      Monte Carlo scaling studies, reference comparisons, exports
  cli        command-line interface
"""

from .ladder import ALL_FAMILIES, Family, expected_climb_cost, simulate_climb
from .seeding import DEFAULT_SEED, derive_rng
from .synthesis import (
    SynthesisConfig,
    SynthesisResult,
    min_online_synthesize,
    synthesize,
)

__all__ = [
    "ALL_FAMILIES",
    "DEFAULT_SEED",
    "Family",
    "SynthesisConfig",
    "SynthesisResult",
    "derive_rng",
    "expected_climb_cost",
    "min_online_synthesize",
    "simulate_climb",
    "synthesize",
]

__version__ = "0.1.0"
