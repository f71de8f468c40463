"""scindex: exact truncated-series engine for superconformal indices.

Computes 4d N=2 superconformal indices of theories built from free
hypermultiplets, gauging, nilpotent slicing and class-S three-punctured
spheres, in the full elliptic limit and its Macdonald, Schur and
Hall-Littlewood degenerations, together with Hall-Littlewood polynomials,
root-system data and Higgs-branch Hilbert series used as cross-checks.
All arithmetic is exact (integer/rational); results carry certified
truncation orders.
"""

from .engine import (LimitKind, TheoryExpr, Hyp, Product, Gauge, Slice, Sphere,
                     eval_expr, hyper_index, gauge_index, slice_index, tg_sum,
                     minimal_orbit_hs)
from .lie import (RootSystem, build_root_system, weyl_dim, irrep_character,
                  hall_littlewood, hl_norm_sq)
from .nilpotent import Partition, NilpotentData, nilpotent_data
from .rings import FlavorSlot, RingConfig
from .series import (CertifiedOrderError, ConfigMismatch, FugacityMap,
                     RegularityError, TruncatedSeries, compare_to_order,
                     constant_term, geom, invert, substitute)

__version__ = "0.1.0"
