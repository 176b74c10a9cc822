"""Catalog of linear-Gaussian Markov models.

Every model describes a state process and a linear velocity observable

    dz = B z dt + sigma dW,        V(z) = M z,

with inverse temperature ``beta`` fixing the Gaussian stationary law.  The
catalog contains the four classical examples of self-diffusion driven by a
linear collision mechanism:

``ou``        scalar Ornstein-Uhlenbeck velocity process,
``magnetic``  charged particle in a constant magnetic field with isotropic
              white-noise collisions,
``gle``       Markovian embedding of the generalized Langevin equation with
              an exponential-sum memory kernel,
``genou``     Ornstein-Uhlenbeck process with an additional skew (rotational)
              drift, the minimal irreversible example.

All four share the Maxwellian stationary covariance ``beta^-1 I``, which the
test suite checks against a direct Lyapunov solve.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import ErgodicityError, ParameterDomainError

# Tolerances used by construction-time validation, fixed once for the package.
SKEW_TOL = 1e-12        # relative bound on ||J + J^T|| for skew inputs
SYMMETRY_TOL = 1e-12    # relative bound for symmetric-matrix checks
LYAPUNOV_TOL = 1e-10    # relative residual bound for stationary covariances

# Default skew coupling for the ``genou`` model (3-dimensional).  Its null
# space is spanned by (1, -1, 1), which controls the weak-dissipation limit
# of the diffusion coefficient along that direction.
DEFAULT_J3 = np.array([
    [0.0, 1.0, 1.0],
    [-1.0, 0.0, 1.0],
    [-1.0, -1.0, 0.0],
])

MODEL_LABELS = ("ou", "magnetic", "gle", "genou")


def _as_matrix(value, name: str) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.ndim != 2:
        raise ParameterDomainError(f"{name} must be a 2-d array, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class LinearGaussianModel:
    """A linear SDE ``dz = B z dt + sigma dW`` with observable ``V = M z``.

    Instances are immutable after construction and safe to share across
    threads.  Construction validates that the drift is Hurwitz (every
    eigenvalue has strictly negative real part) and that the diffusion
    matrix ``sigma sigma^T`` is symmetric positive semidefinite.
    """

    state_dim: int
    obs_dim: int
    drift: np.ndarray
    noise: np.ndarray
    inv_temp: float
    observable: np.ndarray
    label: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        d = int(self.state_dim)
        m = int(self.obs_dim)
        drift = _as_matrix(self.drift, "drift")
        noise = _as_matrix(self.noise, "noise")
        obs = _as_matrix(self.observable, "observable")
        if drift.shape != (d, d):
            raise ParameterDomainError(f"drift must be {d}x{d}, got {drift.shape}")
        if noise.shape != (d, d):
            raise ParameterDomainError(f"noise must be {d}x{d}, got {noise.shape}")
        if obs.shape != (m, d):
            raise ParameterDomainError(f"observable must be {m}x{d}, got {obs.shape}")
        if not self.inv_temp > 0:
            raise ParameterDomainError(f"inv_temp must be positive, got {self.inv_temp}")

        eigs = np.linalg.eigvals(drift)
        if not np.all(eigs.real < 0.0):
            raise ErgodicityError(
                f"drift of model '{self.label}' is not Hurwitz: "
                f"max Re(eig) = {eigs.real.max():.3g}"
            )

        dd = noise @ noise.T
        scale = max(np.abs(dd).max(), 1.0)
        if np.abs(dd - dd.T).max() > SYMMETRY_TOL * scale:
            raise ParameterDomainError("noise covariance sigma sigma^T is not symmetric")
        if np.linalg.eigvalsh(0.5 * (dd + dd.T)).min() < -SYMMETRY_TOL * scale:
            raise ParameterDomainError("noise covariance sigma sigma^T is not PSD")

        for arr in (drift, noise, obs):
            arr.setflags(write=False)
        object.__setattr__(self, "state_dim", d)
        object.__setattr__(self, "obs_dim", m)
        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "noise", noise)
        object.__setattr__(self, "observable", obs)
        object.__setattr__(self, "inv_temp", float(self.inv_temp))

    @property
    def diffusion_matrix(self) -> np.ndarray:
        """``sigma sigma^T``, twice the second-order coefficient of the generator."""
        return self.noise @ self.noise.T


@dataclass(frozen=True, eq=False)
class GaussianMeasure:
    """Zero-mean Gaussian law with a symmetric positive-definite covariance."""

    covariance: np.ndarray

    def __post_init__(self):
        cov = _as_matrix(self.covariance, "covariance")
        scale = max(np.abs(cov).max(), 1.0)
        if np.abs(cov - cov.T).max() > SYMMETRY_TOL * scale:
            raise ParameterDomainError("covariance is not symmetric")
        if np.linalg.eigvalsh(0.5 * (cov + cov.T)).min() <= 0.0:
            raise ParameterDomainError("covariance is not positive definite")
        cov.setflags(write=False)
        object.__setattr__(self, "covariance", cov)

    @property
    def dim(self) -> int:
        return self.covariance.shape[0]


def build_ou(gamma: float, beta: float) -> LinearGaussianModel:
    """Scalar Ornstein-Uhlenbeck velocity process.

    ``dp = -gamma p dt + sqrt(2 gamma / beta) dW`` with observable ``V = p``.
    """
    if not gamma > 0:
        raise ParameterDomainError(f"gamma must be positive, got {gamma}")
    if not beta > 0:
        raise ParameterDomainError(f"beta must be positive, got {beta}")
    return LinearGaussianModel(
        state_dim=1,
        obs_dim=1,
        drift=[[-gamma]],
        noise=[[np.sqrt(2.0 * gamma / beta)]],
        inv_temp=beta,
        observable=[[1.0]],
        label="ou",
        params={"gamma": float(gamma), "beta": float(beta)},
    )


def build_magnetic(omega: float, nu: float, beta: float) -> LinearGaussianModel:
    """Charged particle in a constant magnetic field along the third axis.

    The velocity obeys ``dp = (Omega p x e3 - nu p) dt + sqrt(2 nu / beta) dW``,
    so the drift is ``Omega R - nu I`` with ``R`` the rotation generator in the
    1-2 plane.  Collisions (``nu > 0``) are required for ergodicity; the
    rotation alone is conservative.
    """
    if not nu > 0:
        raise ParameterDomainError(f"nu must be positive, got {nu}")
    if not beta > 0:
        raise ParameterDomainError(f"beta must be positive, got {beta}")
    rot = np.zeros((3, 3))
    rot[0, 1] = 1.0
    rot[1, 0] = -1.0
    drift = omega * rot - nu * np.eye(3)
    return LinearGaussianModel(
        state_dim=3,
        obs_dim=3,
        drift=drift,
        noise=np.sqrt(2.0 * nu / beta) * np.eye(3),
        inv_temp=beta,
        observable=np.eye(3),
        label="magnetic",
        params={"omega": float(omega), "nu": float(nu), "beta": float(beta)},
    )


def build_gle(lambdas, alphas, beta: float) -> LinearGaussianModel:
    """Markovian embedding of the generalized Langevin equation.

    The memory kernel ``sum_j lambda_j^2 exp(-alpha_j |t|)`` is realized by
    auxiliary variables ``u_j``:

        dp   = sum_j lambda_j u_j dt
        du_j = (-alpha_j u_j - lambda_j p) dt + sqrt(2 alpha_j / beta) dW_j

    State is ``(p, u_1, ..., u_N)``; the observable selects ``p``.  At least
    one ``lambda_j`` must be nonzero, otherwise ``p`` is undamped.
    """
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    alp = np.atleast_1d(np.asarray(alphas, dtype=float))
    if lam.ndim != 1 or alp.ndim != 1 or lam.size != alp.size or lam.size < 1:
        raise ParameterDomainError("lambdas and alphas must be 1-d of equal length >= 1")
    if not np.all(alp > 0):
        raise ParameterDomainError("alphas must all be positive")
    if not beta > 0:
        raise ParameterDomainError(f"beta must be positive, got {beta}")
    if not np.sum(lam**2 / alp) > 0:
        raise ParameterDomainError("all lambdas vanish: p coordinate is undamped")

    n = lam.size
    drift = np.zeros((n + 1, n + 1))
    drift[0, 1:] = lam
    drift[1:, 0] = -lam
    drift[1:, 1:] = -np.diag(alp)
    noise = np.zeros((n + 1, n + 1))
    noise[1:, 1:] = np.diag(np.sqrt(2.0 * alp / beta))
    observable = np.zeros((1, n + 1))
    observable[0, 0] = 1.0
    return LinearGaussianModel(
        state_dim=n + 1,
        obs_dim=1,
        drift=drift,
        noise=noise,
        inv_temp=beta,
        observable=observable,
        label="gle",
        params={"lambdas": lam.tolist(), "alphas": alp.tolist(), "beta": float(beta)},
    )


def build_genou(J, alpha: float, gamma: float, beta: float) -> LinearGaussianModel:
    """Ornstein-Uhlenbeck process with a skew drift: ``dp = (alpha J - gamma I) p dt + sqrt(2 gamma / beta) dW``.

    ``J`` must be skew-symmetric; the skew term leaves the Gaussian
    equilibrium unchanged but makes the process irreversible.
    """
    Jm = _as_matrix(J, "J")
    d = Jm.shape[0]
    if Jm.shape != (d, d):
        raise ParameterDomainError(f"J must be square, got {Jm.shape}")
    scale = max(np.abs(Jm).max(), 1.0)
    if np.abs(Jm + Jm.T).max() > SKEW_TOL * scale:
        raise ParameterDomainError("J is not skew-symmetric (J + J^T != 0)")
    if not gamma > 0:
        raise ParameterDomainError(f"gamma must be positive, got {gamma}")
    if not beta > 0:
        raise ParameterDomainError(f"beta must be positive, got {beta}")
    return LinearGaussianModel(
        state_dim=d,
        obs_dim=d,
        drift=alpha * Jm - gamma * np.eye(d),
        noise=np.sqrt(2.0 * gamma / beta) * np.eye(d),
        inv_temp=beta,
        observable=np.eye(d),
        label="genou",
        params={"J": Jm.tolist(), "alpha": float(alpha), "gamma": float(gamma),
                "beta": float(beta)},
    )


def stationary_covariance(model: LinearGaussianModel) -> GaussianMeasure:
    """Stationary covariance of the model, from the continuous Lyapunov equation.

    Solves ``B Sigma + Sigma B^T + sigma sigma^T = 0`` and checks the residual
    against ``LYAPUNOV_TOL * ||sigma sigma^T||``.  For every catalog model the
    result is ``beta^-1 I``.
    """
    B = model.drift
    eigs = np.linalg.eigvals(B)
    if not np.all(eigs.real < 0.0):
        raise ErgodicityError("drift is not Hurwitz; no stationary covariance exists")
    Q = model.diffusion_matrix
    sigma = linalg.solve_continuous_lyapunov(B, -Q)
    sigma = 0.5 * (sigma + sigma.T)
    residual = np.abs(B @ sigma + sigma @ B.T + Q).max()
    if residual > LYAPUNOV_TOL * max(np.abs(Q).max(), 1.0):
        raise ErgodicityError(f"Lyapunov solve residual too large: {residual:.3g}")
    return GaussianMeasure(covariance=sigma)


def model_to_dict(model: LinearGaussianModel) -> dict:
    """JSON-ready document; matrices are nested lists in row-major order."""
    return {
        "label": model.label,
        "params": model.params,
        "state_dim": model.state_dim,
        "obs_dim": model.obs_dim,
        "drift": model.drift.tolist(),
        "noise": model.noise.tolist(),
        "beta": model.inv_temp,
        "observable": model.observable.tolist(),
    }


def model_from_dict(doc: dict) -> LinearGaussianModel:
    return LinearGaussianModel(
        state_dim=int(doc["state_dim"]),
        obs_dim=int(doc["obs_dim"]),
        drift=doc["drift"],
        noise=doc["noise"],
        inv_temp=float(doc["beta"]),
        observable=doc["observable"],
        label=str(doc["label"]),
        params=dict(doc.get("params", {})),
    )


def model_to_json(model: LinearGaussianModel) -> str:
    return json.dumps(model_to_dict(model), indent=2)


def model_from_json(text: str) -> LinearGaussianModel:
    return model_from_dict(json.loads(text))
