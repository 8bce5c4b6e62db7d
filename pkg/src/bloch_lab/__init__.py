"""Split operator bases, correlation tensors, a correlation monotone and
linear-entropy inequalities, with Monte-Carlo verification tooling."""

from .basis import BasisElement, GramReport, OperatorBasis, gellmann_basis, split_basis, verify_orthogonality
from .correlation import (BlochCoefficients, SplitSectorNorms, all_subset_norms,
                          bases_with_split, bloch_coefficients, cross_norm_sum,
                          purity_from_tensor, reconstruct, split_purity,
                          split_sector_norms, tensor_norm_sq)
from .entropy import (EntropyVector, TripleVerdict, check_dim_ssa,
                      check_gen_pseudo_additivity, check_subadditivity, classify_grid,
                      classify_triple, dim_ssa_vs_subadd, entropy_vector, linear_entropy,
                      max_sab_genpseudo, max_sab_subadd, pseudo_additivity_residual,
                      renyi, tsallis, validate_surface)
from .errors import BlochLabError, InvalidStateError, NotPureError, NumericError
from .figures import Fig1Data, FigAData, FigBData, sweep_fig1, sweep_figA, sweep_figB
from .io import load_state, save_state
from .monotone import (MonotoneResult, NormalizationPolicy, OptimizerConfig, check_lemma5,
                       check_lemma6, check_thm1_i, check_thm1_ii, correlation_monotone,
                       eve_bound, excess, lemma6_bounds, monotone_pure_exact)
from .reports import InequalityReport
from .states import (DensityMatrix, EnsembleSpec, derive_seed, from_matrix,
                     max_entangled, maximally_mixed, partial_trace, pure, purify,
                     random_state, tensor)
from .verify import (Campaign, CampaignReport, CheckStats, applicable_inequalities,
                     negation_control, precise_slack, refine_minimum, run_campaign)

__version__ = "0.1.0"

__all__ = [
    "BasisElement", "GramReport", "OperatorBasis", "gellmann_basis", "split_basis",
    "verify_orthogonality",
    "BlochCoefficients", "SplitSectorNorms", "all_subset_norms", "bases_with_split",
    "bloch_coefficients", "cross_norm_sum", "purity_from_tensor", "reconstruct",
    "split_purity", "split_sector_norms", "tensor_norm_sq",
    "EntropyVector", "TripleVerdict", "check_dim_ssa", "check_gen_pseudo_additivity",
    "check_subadditivity", "classify_grid", "classify_triple", "dim_ssa_vs_subadd",
    "entropy_vector", "linear_entropy", "max_sab_genpseudo", "max_sab_subadd",
    "pseudo_additivity_residual", "renyi", "tsallis", "validate_surface",
    "BlochLabError", "InvalidStateError", "NotPureError", "NumericError",
    "Fig1Data", "FigAData", "FigBData", "sweep_fig1", "sweep_figA", "sweep_figB",
    "load_state", "save_state",
    "MonotoneResult", "NormalizationPolicy", "OptimizerConfig", "check_lemma5",
    "check_lemma6", "check_thm1_i", "check_thm1_ii", "correlation_monotone", "eve_bound",
    "excess", "lemma6_bounds", "monotone_pure_exact",
    "InequalityReport",
    "DensityMatrix", "EnsembleSpec", "derive_seed", "from_matrix", "max_entangled",
    "maximally_mixed", "partial_trace", "pure", "purify", "random_state", "tensor",
    "Campaign", "CampaignReport", "CheckStats", "applicable_inequalities",
    "negation_control", "precise_slack", "refine_minimum", "run_campaign",
    "__version__",
]
