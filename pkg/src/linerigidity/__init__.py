"""Distance-reconstruction rigidity on the real line, at desk scale.

Exact multigraph decompositions (two-core, kernel, subcubic pruning),
rigid-map enumeration over exact rational embeddings, random models of
sparse two-cores, structural subset events, and a seeded experiment
harness.
"""

__version__ = "0.1.0"

from .errors import (ConvergenceError, IndeterminateResultError, ResourceCapError,
                     RigidityError, ValidationError)
from .graphcore import (KernelDecomposition, Multigraph, build_multigraph,
                        combinatorial_bounds, connected_components,
                        edge_boundary_count, enumerate_connected_subsets,
                        induced_subgraph, kernel_decompose, prune_to_subcubic,
                        second_adjacency_eigenvalue, two_core, two_core_vertices,
                        vertex_expansion_audit)
from .linegeom import (LineEmbedding, RigidMapClass, ReconstructionReport,
                       enumerate_rigid_map_classes, is_reconstructible,
                       kernel_isometry_coverage, largest_reconstructible_set,
                       path_extension_solutions, random_integer_embedding)
from .randmodels import (DegreeSequenceSample, ModelParams, PlacedTwoCoreSample,
                         TwoCoreSample, conjugate_rate, multigraph_count_estimate,
                         sample_degree_sequence, sample_gnp, sample_pairing,
                         sample_placed_two_core, sample_regular_simple,
                         sample_regular_stub_matching, sample_two_core,
                         tail_bounds, validate_degree_sequence)
from .events import (AnchorReport, SubsetStats, anchor_census, anchor_check,
                     subset_stats, write_census_csv)
from .jsonio import graph_io
from .rng import SplitMix64, per_trial_seed
