"""Poisson-equation route to the diffusion tensor.

Solving ``-L phi = V`` turns the time integral of the velocity
autocorrelation into a static average, and for linear observables the
solution is itself linear, ``phi = C z``.  The normative index convention
throughout the package is the stochastic one,

    D_ij = int_0^inf E[ V_i(z(t)) V_j(z(0)) ] dt,

which the Poisson route reproduces as ``D = C Sigma M^T`` with ``Sigma`` the
stationary covariance.  Note that the pure product formula
``int V (x) phi dmu`` written with the opposite index order yields the
transpose; the Monte-Carlo route in :mod:`greenkubo.montecarlo` settles every
sign, and comparisons against tensors quoted elsewhere are made up to
transpose where their convention is ambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import hermite
from .errors import ErgodicityError, IllConditionedError, ParameterDomainError
from .models import LinearGaussianModel, build_gle, stationary_covariance

CONVENTION = "D_ij = int_0^inf E[V_i(z(t)) V_j(z(0))] dt"

# largest condition number accepted for a truncated Galerkin solve
GALERKIN_COND_LIMIT = 1e12

PSD_SLACK = 1e-9  # tolerance for the nonnegativity check of deterministic routes


@dataclass(frozen=True, eq=False)
class PoissonSolution:
    """Solution of ``-L phi = V``, mean-zero gauge.

    ``kind`` is ``"linear_ansatz"`` (phi_i = (C z)_i, matrix ``C``) or
    ``"galerkin"`` (per-component Hermite coefficients).  ``residual`` is the
    truncated norm of ``L phi + V``.
    """

    kind: str
    C: np.ndarray | None = None
    coeffs: np.ndarray | None = None
    residual: float = 0.0
    basis: hermite.HermiteBasis | None = field(default=None, repr=False)


@dataclass(frozen=True, eq=False)
class DiffusionTensor:
    """Diffusion tensor with provenance.

    ``route`` records which computation produced it (``poisson``,
    ``green_kubo_analytic``, ``green_kubo_mc`` or ``stieltjes``); ``stderr``
    is only present for the Monte-Carlo route.
    """

    D: np.ndarray
    route: str
    convention: str = CONVENTION
    stderr: np.ndarray | None = None

    def __post_init__(self):
        D = np.array(self.D, dtype=float)
        D.setflags(write=False)
        object.__setattr__(self, "D", D)

    @property
    def symmetric_part(self) -> np.ndarray:
        return 0.5 * (self.D + self.D.T)

    @property
    def antisymmetric_part(self) -> np.ndarray:
        return 0.5 * (self.D - self.D.T)


def _check_nonnegative(D: np.ndarray, route: str) -> None:
    sym = 0.5 * (D + D.T)
    lo = np.linalg.eigvalsh(sym).min()
    if lo < -PSD_SLACK * max(1.0, np.abs(D).max()):
        raise RuntimeError(f"{route} tensor has a negative symmetric part: {lo:.3g}")


def solve_linear_ansatz(model: LinearGaussianModel) -> PoissonSolution:
    """Closed-form solve for a linear observable: ``C (-B) = M``.

    Writing ``phi = C z`` and using ``L (c . z) = (B^T c) . z`` reduces the
    Poisson equation to one dense linear system per observable component.
    """
    B = model.drift
    M = model.observable
    try:
        C = np.linalg.solve((-B).T, M.T).T
    except np.linalg.LinAlgError as exc:
        raise ErgodicityError(f"drift is singular, Poisson equation unsolvable: {exc}")
    residual = float(np.abs(C @ (-B) - M).max())
    return PoissonSolution(kind="linear_ansatz", C=C, residual=residual)


def solve_galerkin(model: LinearGaussianModel, basis: hermite.HermiteBasis,
                   V_coeffs: np.ndarray | None = None) -> PoissonSolution:
    """Galerkin solve of ``-L phi = V`` on the truncated mean-zero subspace.

    ``V_coeffs`` are per-component coefficient rows; they default to the
    model's own linear observable.  For a linear observable the result must
    coincide with the linear ansatz and carry no degree >= 2 content, which
    the tests assert.
    """
    if V_coeffs is None:
        V = hermite.observable_coefficients(model, basis)
    else:
        V = np.atleast_2d(np.asarray(V_coeffs, dtype=float))
    if V.shape[1] != basis.size:
        raise ParameterDomainError(f"V coefficient rows must have length {basis.size}")
    vmax = max(np.abs(V).max(), np.finfo(float).tiny)
    if np.abs(V[:, 0]).max() > 1e-12 * vmax:
        raise ParameterDomainError("observable is not mean-zero (constant coefficient != 0)")

    L = hermite.assemble_generator(model, basis)
    L0 = L.entries[1:, 1:]
    cond = np.linalg.cond(L0)
    if not np.isfinite(cond) or cond > GALERKIN_COND_LIMIT:
        raise IllConditionedError(
            f"truncated generator has condition number {cond:.3g}; "
            "increase max_degree or move parameters away from degeneracy")
    sol = np.linalg.solve(-L0, V[:, 1:].T).T
    coeffs = np.zeros_like(V)
    coeffs[:, 1:] = sol
    residual = float(np.linalg.norm(coeffs @ L.entries.T + V))
    return PoissonSolution(kind="galerkin", coeffs=coeffs, residual=residual, basis=basis)


def diffusion_tensor(model: LinearGaussianModel, phi: PoissonSolution) -> DiffusionTensor:
    """Gaussian-moment evaluation of the static average behind the tensor.

    For the linear ansatz ``D = C Sigma M^T`` (Sigma from the Lyapunov solve,
    never assumed isotropic); for a Galerkin solution the orthonormal basis
    turns the average into a plain coefficient pairing.  Either way the
    result matches the analytic Green-Kubo tensor ``M (-B)^-1 Sigma M^T``.
    """
    if phi.kind == "linear_ansatz":
        sigma = stationary_covariance(model).covariance
        D = phi.C @ sigma @ model.observable.T
    elif phi.kind == "galerkin":
        V = hermite.observable_coefficients(model, phi.basis)
        D = phi.coeffs @ V.T
    else:
        raise ParameterDomainError(f"unknown Poisson solution kind {phi.kind!r}")
    _check_nonnegative(D, "poisson")
    return DiffusionTensor(D=D, route="poisson")


def directional_coefficient(model: LinearGaussianModel, e) -> float:
    """Diffusion coefficient ``D^e = e . D e`` along a unit direction.

    Solved directly for the scalar observable ``V^e = e . V``; agrees with
    contracting the full tensor.
    """
    e = np.asarray(e, dtype=float)
    norm = np.linalg.norm(e)
    if norm == 0.0:
        raise ParameterDomainError("direction e must be nonzero")
    e = e / norm
    Me = e @ model.observable
    ce = np.linalg.solve((-model.drift).T, Me)
    sigma = stationary_covariance(model).covariance
    return float(ce @ sigma @ Me)


def gle_subdiffusion_sweep(lambda_rule, alpha_rule, n_max: int, beta: float):
    """Diffusion coefficient of the generalized Langevin chain as modes accrue.

    ``lambda_rule`` and ``alpha_rule`` map the 1-based mode number k to the
    coupling lambda_k and decay rate alpha_k.  Returns ``[(N, D_N)]`` for
    N = 1..n_max, with each D_N computed through the linear-ansatz solve.
    The sequence is strictly decreasing whenever every lambda_k is nonzero;
    it tends to zero exactly when sum_k lambda_k^2 / alpha_k diverges, which
    is the fingerprint of subdiffusion in this model.
    """
    if n_max < 1:
        raise ParameterDomainError(f"n_max must be >= 1, got {n_max}")
    lambdas = [float(lambda_rule(k)) for k in range(1, n_max + 1)]
    alphas = [float(alpha_rule(k)) for k in range(1, n_max + 1)]
    out = []
    for n in range(1, n_max + 1):
        model = build_gle(lambdas[:n], alphas[:n], beta)
        tensor = diffusion_tensor(model, solve_linear_ansatz(model))
        out.append((n, float(tensor.D[0, 0])))
    return out


def tensor_to_dict(tensor: DiffusionTensor) -> dict:
    """JSON document: route, convention, dimension and row-major entries."""
    d = tensor.D.shape[0]
    doc = {
        "route": tensor.route,
        "convention": tensor.convention,
        "d": d,
        "entries": [float(v) for v in tensor.D.ravel()],
    }
    if tensor.stderr is not None:
        doc["stderr"] = [float(v) for v in np.asarray(tensor.stderr).ravel()]
    return doc
