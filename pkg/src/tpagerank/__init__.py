"""Temperature-dependent nonlinear PageRank of directed graphs.

The ranking at temperature T is a fixed point of the map sending a
stochastic vector x to the invariant measure of the rank-dependent
transition matrix M_T(x).  Large T recovers the classical PageRank;
below a critical temperature the fixed point stops being unique and the
ranking starts validating its own initial belief.
"""

from ._backend import COMPILED
from .critical import (CompleteGraphSolution, HomotopyEstimate,
                       SweepTrajectory, complete_fixed_points,
                       homotopy_critical_estimate, t_alpha_k,
                       temperature_sweep, tstar_complete)
from .errors import (BoundaryPointError, ConvergenceError, GraphFormatError,
                     InvalidConfigError, NegativeWeightError,
                     NonPositiveDerivativeError, NonPositiveError,
                     NonSquareError, OscillationError, TPageRankError,
                     ZeroRowError)
from .graph import (Graph, StructureReport, analyze_structure, complete_graph,
                    load_edge_list, load_matrix_market, normalize_dangling,
                    random_graph, random_irreducible_graph, ring_graph)
from .kernel import (INF, IterationReport, KernelConfig, apply_kernel,
                     classical_pagerank, default_tol, invariant_measure,
                     iterate_f, iterate_u, uniform, vertex)
from .metrics import (birkhoff_coefficient, birkhoff_sampled,
                      hilbert_distance, kernel_distance_bound)
from .oracle import (Arborescence, FixedPointSet, fixed_points_2x2, h_vector,
                     mtt_invariant, multistart_fixed_points,
                     spanning_arborescences)
from .weights import (LipBounds, UniquenessCertificate, Verdict,
                      WeightFunction, certify_uniqueness)

__version__ = "0.1.0"
