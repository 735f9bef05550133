"""Computing and certifying weighted Chebyshev polynomials on planar compact sets."""

from .bounds import (BoundReport, bernstein_walsh_check, compare_weights, doubled_bound_check,
                     sharpness_sweep, szego_lower_bound)
from .certificates import (AlternationChain, ExtremalSet, Improvable, RivlinShapiro,
                           alternation_verify, equality_case_check, extremal_points,
                           kolmogorov_check, rivlin_shapiro_multipliers)
from .domains import Circle, CompactSet, Grid, IntervalUnion, Preimage, SampledSet
from .errors import WChebError
from .polynomials import Poly, compose, eval_poly, power_sums_fiber, roots
from .potential import (capacity, eq_quadrature, green, green_pole, harmonic_measure_rule,
                        leja_capacity, log_weight_integral, poisson_integral, szego_integral)
from .solver import (ChebyshevResult, WidomReport, lawson_discrete, preimage_transfer, remez_real,
                     solve, widom_factor)
from .weights import (AbsPolyPower, Constant, FunctionWeight, Pullback, Restricted, Tabulated,
                      eps_weight, szego_class_check, usc_regularize)

__version__ = "0.1.0"
