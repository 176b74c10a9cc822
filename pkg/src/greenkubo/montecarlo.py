"""Direct Green-Kubo route: exact sampling, autocorrelation, time integration.

Linear SDEs admit an exact discrete-time transition,

    z_{n+1} = e^{B dt} z_n + xi_n,   xi_n ~ N(0, int_0^dt e^{Bs} Q e^{B^T s} ds),

so trajectories here carry no time-discretization bias: every discrepancy
against the Poisson route is attributable to Monte-Carlo variance alone.
Randomness comes from counter-based Philox streams indexed by (seed, path),
making results reproducible and independent of scheduling.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft
from scipy import linalg

from .errors import MemoryGuardError, ParameterDomainError, TailFitError
from .models import LinearGaussianModel, stationary_covariance
from .poisson import DiffusionTensor, _check_nonnegative

PROPAGATOR_TOL = 1e-10   # relative stationarity-preservation residual
MAX_STORE_ELEMENTS = 150_000_000  # default cap on n_paths * (n_steps+1) * state_dim


@dataclass(frozen=True, eq=False)
class PropagatorPair:
    """One-step transition of the linear SDE over a fixed dt.

    Attributes
    ----------
    step_matrix : ndarray
        e^{B dt}.
    step_covariance : ndarray
        Covariance of the integrated noise over one step (symmetric PSD).
    dt : float
        Step length.
    """

    step_matrix: np.ndarray
    step_covariance: np.ndarray
    dt: float


@dataclass(frozen=True, eq=False)
class TrajectoryStore:
    """Stationary sample paths; states has shape (n_paths, n_steps+1, state_dim)."""

    model: LinearGaussianModel
    states: np.ndarray
    dt: float
    seed: int

    @property
    def n_paths(self) -> int:
        return self.states.shape[0]

    @property
    def n_steps(self) -> int:
        return self.states.shape[1] - 1


@dataclass(frozen=True, eq=False)
class VacfEstimate:
    """Velocity autocorrelation estimate at discrete lags.

    Attributes
    ----------
    dt : float
        Lag spacing.
    tensors : ndarray, shape (lags+1, d, d)
        C_hat(l dt), averaged over paths and time origins.
    stderr : ndarray, same shape
        Standard error across independent paths.
    integral_mean, integral_stderr : ndarray, shape (d, d)
        Trapezoidal integral of each path's own curve over the recorded
        window, averaged across paths (used by :func:`integrate_vacf` so the
        error bar is statistically valid).
    """

    dt: float
    lags: int
    tensors: np.ndarray
    stderr: np.ndarray
    integral_mean: np.ndarray
    integral_stderr: np.ndarray
    n_paths: int
    n_steps: int
    seed: int

    @property
    def lag_times(self) -> np.ndarray:
        return self.dt * np.arange(self.lags + 1)


def propagator(model: LinearGaussianModel, dt: float) -> PropagatorPair:
    """Exact one-step transition over dt.

    The step matrix is the scaling-and-squaring matrix exponential; the step
    covariance comes from the block (augmented-exponential) identity

        exp([[ -B, Q ], [ 0, B^T ]] dt) = [[ ..., F^T S ], [ 0, F^T ]],

    with F = e^{B dt}, so S = F (F^T S) is read off two blocks.  The pair
    preserves the stationary covariance: F Sigma F^T + S = Sigma.
    """
    if not dt > 0:
        raise ParameterDomainError(f"dt must be positive, got {dt}")
    d = model.state_dim
    B = model.drift
    Q = model.diffusion_matrix
    blk = np.zeros((2 * d, 2 * d))
    blk[:d, :d] = -B
    blk[:d, d:] = Q
    blk[d:, d:] = B.T
    eblk = linalg.expm(blk * dt)
    step = linalg.expm(B * dt)
    cov = step @ eblk[:d, d:]
    cov = 0.5 * (cov + cov.T)

    sigma = stationary_covariance(model).covariance
    residual = np.abs(step @ sigma @ step.T + cov - sigma).max()
    if residual > PROPAGATOR_TOL * max(np.abs(sigma).max(), 1.0):
        raise RuntimeError(f"propagator does not preserve stationarity: {residual:.3g}")
    return PropagatorPair(step_matrix=step, step_covariance=cov, dt=float(dt))


def _covariance_factor(cov: np.ndarray) -> np.ndarray:
    # symmetric square root with small negative eigenvalues clipped
    vals, vecs = np.linalg.eigh(cov)
    vals = np.clip(vals, 0.0, None)
    return vecs * np.sqrt(vals)


def simulate(model: LinearGaussianModel, dt: float, n_steps: int, n_paths: int,
             seed: int = 0, max_elements: int = MAX_STORE_ELEMENTS) -> TrajectoryStore:
    """Sample stationary trajectories, exact in distribution.

    Initial states are drawn from the stationary Gaussian and every step uses
    the exact transition, so single-time statistics are unbiased at any dt.
    Path p consumes the Philox stream jumped p times from the seeded state;
    a fixed (seed, path) pair always yields the same trajectory.

    Raises
    ------
    MemoryGuardError
        If n_paths * (n_steps+1) * state_dim exceeds ``max_elements``.
    """
    if n_steps < 1 or n_paths < 1:
        raise ParameterDomainError("n_steps and n_paths must be >= 1")
    d = model.state_dim
    total = n_paths * (n_steps + 1) * d
    if total > max_elements:
        raise MemoryGuardError(
            f"requested store of {total} doubles exceeds cap {max_elements}; "
            "thin the trajectories (fewer paths, fewer steps, or larger dt)")

    prop = propagator(model, dt)
    sigma = stationary_covariance(model).covariance
    root_sigma = _covariance_factor(sigma)
    root_step = _covariance_factor(prop.step_covariance)

    states = np.empty((n_paths, n_steps + 1, d))
    base = np.random.Philox(key=seed)
    for p in range(n_paths):
        rng = np.random.Generator(base.jumped(p))
        draws = rng.standard_normal((n_steps + 1, d))
        states[p, 0] = root_sigma @ draws[0]
        states[p, 1:] = draws[1:] @ root_step.T

    FT = prop.step_matrix.T
    for n in range(n_steps):
        states[:, n + 1] += states[:, n] @ FT
    return TrajectoryStore(model=model, states=states, dt=float(dt), seed=int(seed))


def estimate_vacf(trajectories: TrajectoryStore, max_lag: int,
                  chunk_paths: int = 128) -> VacfEstimate:
    """Autocorrelation of the observable at lags 0..max_lag.

    Every time origin in [0, n_steps - max_lag] contributes to every lag, so
    each lag averages the same window; origins within a path are correlated,
    which is why the error bar comes from the spread across independent
    paths only.  The per-path curves are also trapezoid-integrated here so
    that :func:`integrate_vacf` can propagate a valid standard error.
    """
    n_steps = trajectories.n_steps
    if not 0 < max_lag < n_steps:
        raise ParameterDomainError(f"max_lag must lie in [1, {n_steps - 1}], got {max_lag}")
    model = trajectories.model
    d_obs = model.obs_dim
    window = n_steps - max_lag  # origins 0..window inclusive
    n_time = n_steps + 1
    nfft = sfft.next_fast_len(n_time + max_lag + 1)

    weights = np.full(max_lag + 1, trajectories.dt)
    weights[0] *= 0.5
    weights[-1] *= 0.5

    n_paths = trajectories.n_paths
    sum_c = np.zeros((max_lag + 1, d_obs, d_obs))
    sum_c2 = np.zeros_like(sum_c)
    sum_i = np.zeros((d_obs, d_obs))
    sum_i2 = np.zeros_like(sum_i)
    MT = model.observable.T
    for start in range(0, n_paths, chunk_paths):
        z = trajectories.states[start:start + chunk_paths]
        v = z @ MT  # (chunk, n_time, d_obs)
        spec_full = sfft.rfft(v, n=nfft, axis=1)
        spec_win = sfft.rfft(v[:, :window + 1], n=nfft, axis=1)
        # cross spectra: + lag applied to the first index of C_ij
        cross = spec_full[:, :, :, None] * np.conj(spec_win[:, :, None, :])
        corr = sfft.irfft(cross, n=nfft, axis=1)[:, :max_lag + 1]
        corr /= (window + 1)
        sum_c += corr.sum(axis=0)
        sum_c2 += (corr**2).sum(axis=0)
        integ = np.einsum("l,plij->pij", weights, corr)
        sum_i += integ.sum(axis=0)
        sum_i2 += (integ**2).sum(axis=0)

    mean_c = sum_c / n_paths
    mean_i = sum_i / n_paths
    if n_paths > 1:
        var_c = np.clip(sum_c2 / n_paths - mean_c**2, 0.0, None) * n_paths / (n_paths - 1)
        var_i = np.clip(sum_i2 / n_paths - mean_i**2, 0.0, None) * n_paths / (n_paths - 1)
        stderr_c = np.sqrt(var_c / n_paths)
        stderr_i = np.sqrt(var_i / n_paths)
    else:
        stderr_c = np.full_like(mean_c, np.inf)
        stderr_i = np.full_like(mean_i, np.inf)

    tail_scale = np.abs(mean_c[-1]).max()
    tail_err = stderr_c[-1].max()
    if tail_scale > 5.0 * max(tail_err, np.finfo(float).tiny):
        warnings.warn(
            f"autocorrelation has not decayed at the final lag "
            f"(|C| = {tail_scale:.3g} vs stderr {tail_err:.3g}); "
            "increase max_lag or use tail='exp_fit' when integrating",
            stacklevel=2)

    return VacfEstimate(
        dt=trajectories.dt, lags=max_lag, tensors=mean_c, stderr=stderr_c,
        integral_mean=mean_i, integral_stderr=stderr_i,
        n_paths=n_paths, n_steps=n_steps, seed=trajectories.seed)


def analytic_vacf(model: LinearGaussianModel, t) -> np.ndarray:
    """Exact autocorrelation ``C(t) = M e^{Bt} Sigma M^T`` of the observable.

    Accepts a scalar or an array of times; the result gains a leading time
    axis in the array case.
    """
    sigma = stationary_covariance(model).covariance
    M = model.observable
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(times < 0):
        raise ParameterDomainError("t must be nonnegative")
    out = np.stack([M @ linalg.expm(model.drift * ti) @ sigma @ M.T for ti in times])
    return out[0] if np.isscalar(t) or np.ndim(t) == 0 else out


def green_kubo_analytic(model: LinearGaussianModel) -> DiffusionTensor:
    """Closed-form time integral of the autocorrelation: ``M (-B)^-1 Sigma M^T``."""
    sigma = stationary_covariance(model).covariance
    M = model.observable
    D = M @ np.linalg.solve(-model.drift, sigma) @ M.T
    _check_nonnegative(D, "green_kubo_analytic")
    return DiffusionTensor(D=D, route="green_kubo_analytic")


def _exponential_tail(vacf: VacfEstimate) -> np.ndarray:
    """Tail integral beyond the last lag from a single-exponential fit."""
    times = vacf.lag_times
    trace = np.einsum("lii->l", vacf.tensors)
    n_fit = max(vacf.lags // 5, 8)
    t_fit = times[-n_fit:]
    y_fit = trace[-n_fit:]
    if np.any(y_fit <= 0):
        # fall back to the envelope so oscillatory traces still fit
        y_fit = np.abs(y_fit)
        if np.any(y_fit == 0):
            raise TailFitError("autocorrelation trace vanishes in the fit window")
    slope, _ = np.polyfit(t_fit, np.log(y_fit), 1)
    if not slope < 0:
        raise TailFitError(
            f"fitted tail rate {-slope:.3g} is not positive; data do not decay")
    rate = -slope
    return vacf.tensors[-1] / rate


def integrate_vacf(vacf: VacfEstimate, tail: str = "truncate") -> DiffusionTensor:
    """Time-integrate the estimated autocorrelation into a diffusion tensor.

    Trapezoidal quadrature over the recorded lags, plus a tail completion:
    ``"truncate"`` adds nothing, ``"exp_fit"`` extrapolates a fitted single
    exponential beyond the final lag.  The standard error comes from the
    across-path spread of per-path integrals.
    """
    if tail not in ("truncate", "exp_fit"):
        raise ParameterDomainError(f"tail must be 'truncate' or 'exp_fit', got {tail!r}")
    D = vacf.integral_mean.copy()
    if tail == "exp_fit":
        D = D + _exponential_tail(vacf)
    return DiffusionTensor(D=D, route="green_kubo_mc", stderr=vacf.integral_stderr.copy())


def vacf_to_csv(vacf: VacfEstimate, stream) -> None:
    """Columns: lag_time, C entries row-major, stderr entries row-major."""
    d = vacf.tensors.shape[1]
    names = [f"C_{i}{j}" for i in range(d) for j in range(d)]
    errs = [f"stderr_{i}{j}" for i in range(d) for j in range(d)]
    stream.write("# format: vacf-v1\n")
    stream.write("lag_time," + ",".join(names + errs) + "\n")
    for idx, t in enumerate(vacf.lag_times):
        row = [repr(float(t))]
        row += [repr(float(v)) for v in vacf.tensors[idx].ravel()]
        row += [repr(float(v)) for v in vacf.stderr[idx].ravel()]
        stream.write(",".join(row) + "\n")
