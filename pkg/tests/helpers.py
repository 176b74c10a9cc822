"""Independent oracles used across the test suite.

These deliberately avoid the code paths they check: the Lyapunov oracle uses
a Kronecker-product linear solve instead of the Schur-based library routine,
and the Green-Kubo oracle integrates the matrix exponential by adaptive
quadrature instead of inverting the drift.
"""

import numpy as np
from scipy import integrate, linalg


def lyapunov_oracle(B: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Solve B X + X B^T + Q = 0 via the vectorized linear system."""
    d = B.shape[0]
    eye = np.eye(d)
    A = np.kron(eye, B) + np.kron(B, eye)
    x = np.linalg.solve(A, -Q.ravel())
    return x.reshape(d, d)


def green_kubo_quadrature_oracle(model, t_max=200.0) -> np.ndarray:
    """Integrate M e^{Bt} Sigma M^T dt by adaptive quadrature."""
    sigma = lyapunov_oracle(model.drift, model.diffusion_matrix)
    M = model.observable

    def integrand(t):
        return (M @ linalg.expm(model.drift * t) @ sigma @ M.T).ravel()

    val, _ = integrate.quad_vec(integrand, 0.0, t_max, epsabs=1e-13, epsrel=1e-13)
    return val.reshape(model.obs_dim, model.obs_dim)


def rng(seed=0):
    return np.random.default_rng(seed)
