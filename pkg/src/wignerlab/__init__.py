"""Generalized Wigner matrices: sampling, local laws, resolvent tools and universality experiments."""
from .comparison import (ComparisonReport, ObservableSpec, SwapSchedule, gfct_statistic, hybrid_matrix,
                         ordering_map, repulsion_estimate, resolvent_expansion_remainder,
                         telescope_decompose, universality_experiment)
from .ensembles import (COMPLEX, REAL, EnsembleSpec, EntryLaw, VarianceProfile, gue, goe, goe_textbook,
                        make_entry_law, make_variance_profile, match_moments, moments_match, sample_matrix,
                        tail_check, validate_profile, wigner_ensemble)
from .helffer import direct_trace, hs_trace
from .reconstruct import reconstruct_overlap, reconstruct_overlap_edge, reconstruct_overlap_smoothed
from .resolvent import (control_params, count_sandwich, green_matrix, local_law_audit, sharp_vs_smooth_gap,
                        smoothed_count, stieltjes, tilde_green)
from .rng import derive_seed
from .semicircle import classical_location, m_sc, n_sc, rho_sc
from .spectral import eigendecompose, eigenvector_overlap, rigidity_profile
from .stats import binomial_ci, bootstrap_ci, ks_two_sample
from .trials import run_trials

__version__ = "0.1.0"
