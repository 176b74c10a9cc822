"""Diffusion tensors of linear-Gaussian kinetic models.

Two independent routes to the self-diffusion tensor — the Poisson-equation
(cell-problem) solve and the direct Green-Kubo time integral — plus the
spectral analysis of the skew operator that controls the weak- and
strong-dissipation asymptotics.
"""

from .errors import (ConvergenceDomainError, ErgodicityError, IllConditionedError,
                     MemoryGuardError, ParameterDomainError, SingularMetricError,
                     TailFitError)
from .hermite import (HermiteBasis, OperatorMatrix, assemble_generator, build_basis,
                      gram_matrix, h_inner, observable_coefficients,
                      split_sym_antisym)
from .models import (DEFAULT_J3, GaussianMeasure, LinearGaussianModel, build_genou,
                     build_gle, build_magnetic, build_ou, model_from_json,
                     model_to_json, stationary_covariance)
from .montecarlo import (PropagatorPair, TrajectoryStore, VacfEstimate, analytic_vacf,
                         estimate_vacf, green_kubo_analytic, integrate_vacf,
                         propagator, simulate)
from .operator_analysis import (HSpaceOperator, SpectralMeasure, VHat, build_G,
                                g_norm_by_degree, hspace_for_model,
                                large_gamma_series, reconstruct_tensor,
                                small_gamma_limit, spectral_measure,
                                stieltjes_antisymmetric, stieltjes_symmetric,
                                vhat_and_projections)
from .poisson import (DiffusionTensor, PoissonSolution, diffusion_tensor,
                      directional_coefficient, gle_subdiffusion_sweep,
                      solve_galerkin, solve_linear_ansatz, tensor_to_dict)
from .sweeps import dissipation_sweep, log_grid, model_at_dissipation

__version__ = "0.1.0"

__all__ = [
    "ConvergenceDomainError", "ErgodicityError", "IllConditionedError",
    "MemoryGuardError", "ParameterDomainError", "SingularMetricError", "TailFitError",
    "HermiteBasis", "OperatorMatrix", "assemble_generator", "build_basis",
    "gram_matrix", "h_inner", "observable_coefficients", "split_sym_antisym",
    "DEFAULT_J3", "GaussianMeasure", "LinearGaussianModel", "build_genou",
    "build_gle", "build_magnetic", "build_ou", "model_from_json", "model_to_json",
    "stationary_covariance",
    "PropagatorPair", "TrajectoryStore", "VacfEstimate", "analytic_vacf",
    "estimate_vacf", "green_kubo_analytic", "integrate_vacf", "propagator", "simulate",
    "HSpaceOperator", "SpectralMeasure", "VHat", "build_G", "g_norm_by_degree",
    "hspace_for_model", "large_gamma_series", "reconstruct_tensor",
    "small_gamma_limit", "spectral_measure", "stieltjes_antisymmetric",
    "stieltjes_symmetric", "vhat_and_projections",
    "DiffusionTensor", "PoissonSolution", "diffusion_tensor",
    "directional_coefficient", "gle_subdiffusion_sweep", "solve_galerkin",
    "solve_linear_ansatz", "tensor_to_dict",
    "dissipation_sweep", "log_grid", "model_at_dissipation",
]
