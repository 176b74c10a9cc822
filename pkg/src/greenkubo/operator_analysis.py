"""Skew-operator analysis of the diffusion tensor on the dissipative Hilbert space.

Splitting the generator into symmetric and antisymmetric parts, L = A + g S,
the natural geometry is the inner product ``<f, h> = (f, (-S) h)_mu``.  In
that geometry the operator ``G = (-S)^-1 A`` is antisymmetric, and the whole
dependence of the diffusion tensor on the dissipation strength g collapses
onto the fixed spectral data of ``Gamma = i G``:

* a null-space mass, which produces the 1/g divergence as g -> 0,
* discrete atoms (lambda, weight) feeding Lorentzian kernels, which produce
  the symmetric part ``2 g w / (g^2 + lambda^2)`` and the antisymmetric part
  ``i lambda w / (g^2 + lambda^2)``.

Functions depending on p alone can have zero seminorm (the generalized
Langevin embedding dissipates only through the auxiliary variables), so the
finite proxy of the space quotients those directions away: ``G`` is built as
the compression of the antisymmetric part onto the range of ``-S``, which
keeps the antisymmetry identity exact.  Observable components lost to the
quotient are reported, since the spectral formulas cannot see them; for such
models the Poisson route remains the tool of choice.

Normalization of the two Lorentzian formulas was fixed once against the
direct linear solve on the skew-drift model and is frozen below; the
symmetric kernel folds the +/- atom pairs, and the antisymmetric sum carries
the factor ``i lambda`` that makes the paired atoms combine to a real matrix.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import hermite
from .errors import ConvergenceDomainError, ParameterDomainError, SingularMetricError
from .models import LinearGaussianModel
from .poisson import DiffusionTensor

METRIC_NULL_TOL = 1e-10   # relative cutoff separating the range of -S
ANTISYM_RESIDUAL_TOL = 1e-10
KERNEL_TOL_DEFAULT = 1e-8  # relative singular-value cutoff defining the null space

# Calibration of the discrete Stieltjes formulas (see module docstring).
SYMMETRIC_NORMALIZATION = 1.0
ANTISYMMETRIC_NORMALIZATION = 1.0


@dataclass(frozen=True, eq=False)
class HSpaceOperator:
    """Compression of (-S)^-1 A onto the range of -S, mean-zero modes.

    ``gram`` is (-S) on the mean-zero block; ``modes``/``mode_scales`` hold
    its positive eigenpairs, and ``skew`` is the operator expressed in the
    whitened coordinates where the dissipative inner product is Euclidean.
    ``norm`` estimates the operator norm (largest |eigenvalue| of i G), the
    quantity whose growth with the truncation degree signals an unbounded
    operator.
    """

    basis: hermite.HermiteBasis
    gram: np.ndarray
    G: np.ndarray
    modes: np.ndarray = field(repr=False)
    mode_scales: np.ndarray = field(repr=False)
    skew: np.ndarray = field(repr=False)
    norm: float = 0.0

    @property
    def n_meanzero(self) -> int:
        return self.gram.shape[0]

    @property
    def n_retained(self) -> int:
        return self.skew.shape[0]


@dataclass(frozen=True, eq=False)
class VHat:
    """Preconditioned observable ``V_hat = (-S)^-1 V`` and its null split.

    Coefficient arrays are full-basis rows (one per observable component);
    ``w*`` are the same objects in whitened coordinates, where null and
    orthogonal parts are Euclidean-orthogonal.  ``dropped_norm`` records the
    stationary-law norm of any component of V annihilated by -S, i.e. not
    representable in this geometry.
    """

    vhat: np.ndarray
    vhat_null: np.ndarray
    vhat_perp: np.ndarray
    w: np.ndarray = field(repr=False)
    w_null: np.ndarray = field(repr=False)
    w_perp: np.ndarray = field(repr=False)
    dropped_norm: np.ndarray = field(repr=False)
    tol: float = KERNEL_TOL_DEFAULT

    @property
    def obs_dim(self) -> int:
        return self.w.shape[0]

    def h_norm_sq(self, component: int = 0) -> float:
        """Squared dissipative norm of one component of V_hat."""
        return float(self.w[component] @ self.w[component])


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """Discrete spectral data of Gamma = i G paired against V_hat components.

    ``atoms`` is a tuple of (lambda, weight) with Hermitian weight matrices
    ``W_ij = <P_lambda V_hat_i, V_hat_j>``; ``null_mass`` collects the
    zero-eigenvalue pairing.  Their total reproduces the full inner-product
    pairing (stored as ``gram_pairing``), a resolution-of-identity check.
    """

    atoms: tuple
    null_mass: np.ndarray
    gram_pairing: np.ndarray
    obs_dim: int


def build_G(S: hermite.OperatorMatrix, A: hermite.OperatorMatrix) -> HSpaceOperator:
    """Build the antisymmetric operator G from the split generator.

    -S must be positive semidefinite on the mean-zero subspace.  Directions
    in its kernel carry zero seminorm and are projected away before the
    inverse is taken; on the remainder, ``<G f, h> = -<f, G h>`` holds to
    machine precision by construction.
    """
    if S.symmetry_tag != "symmetric" or A.symmetry_tag != "antisymmetric":
        raise ParameterDomainError("build_G expects (symmetric S, antisymmetric A)")
    if S.basis is not A.basis:
        raise ParameterDomainError("S and A must share one basis")
    basis = S.basis
    gram = -S.entries[1:, 1:]
    A0 = A.entries[1:, 1:]

    vals, vecs = np.linalg.eigh(0.5 * (gram + gram.T))
    vmax = vals.max(initial=0.0)
    if vmax <= 0.0:
        raise SingularMetricError("-S vanishes on the mean-zero subspace; no geometry")
    if vals.min() < -METRIC_NULL_TOL * vmax:
        raise SingularMetricError(
            f"-S is indefinite on the mean-zero subspace (min eig {vals.min():.3g})")
    keep = vals > METRIC_NULL_TOL * vmax
    Q = vecs[:, keep]
    scales = np.sqrt(vals[keep])

    K = (Q.T @ A0 @ Q) / np.outer(scales, scales)
    K = 0.5 * (K - K.T)
    G = (Q / scales) @ K @ (Q * scales).T
    norm = float(np.linalg.svd(K, compute_uv=False)[0]) if K.size else 0.0

    residual = np.abs(gram @ G + G.T @ gram).max()
    scale = max(np.abs(gram @ G).max(), np.finfo(float).tiny)
    if residual > ANTISYM_RESIDUAL_TOL * scale:
        raise SingularMetricError(f"antisymmetry residual {residual:.3g} out of tolerance")
    return HSpaceOperator(basis=basis, gram=gram, G=G, modes=Q, mode_scales=scales,
                          skew=K, norm=norm)


def _meanzero_rows(G: HSpaceOperator, coeffs) -> np.ndarray:
    rows = np.atleast_2d(np.asarray(coeffs, dtype=float))
    if rows.shape[1] != G.basis.size:
        raise ParameterDomainError(f"coefficient rows must have length {G.basis.size}")
    cmax = max(np.abs(rows).max(), np.finfo(float).tiny)
    if np.abs(rows[:, 0]).max() > 1e-12 * cmax:
        raise ParameterDomainError("observable has a nonzero constant component")
    return rows[:, 1:]


def vhat_and_projections(G: HSpaceOperator, V, tol: float = KERNEL_TOL_DEFAULT) -> VHat:
    """Compute V_hat = (-S)^-1 V and split it against the null space of G.

    The null space is read off the singular spectrum of the whitened skew
    operator, with cutoff ``tol`` relative to the largest singular value; a
    warning reports singular values crowding the cutoff.
    """
    if not tol > 0:
        raise ParameterDomainError("tol must be positive")
    rows = _meanzero_rows(G, V)
    n_obs = rows.shape[0]

    proj = rows @ G.modes                    # components along the retained modes
    w_hat = proj / G.mode_scales             # whitened V_hat
    dropped = rows - proj @ G.modes.T
    dropped_norm = np.linalg.norm(dropped, axis=1)

    K = G.skew
    if K.size:
        _, sv, Vt = np.linalg.svd(K)
        sv_max = sv.max(initial=0.0)
        cutoff = tol * sv_max
        null_rows = Vt[sv <= cutoff] if sv_max > 0 else Vt
        crowding = np.sum((sv > cutoff) & (sv <= 10 * cutoff))
        if sv_max > 0 and crowding:
            gap = sv[(sv > cutoff)].min() / sv_max
            warnings.warn(
                f"{crowding} singular value(s) within a decade of the null cutoff "
                f"(smallest kept: {gap:.3g} of max); the null split may be fragile",
                stacklevel=2)
    else:
        null_rows = np.zeros((0, 0))

    if null_rows.size:
        w_null = (w_hat @ null_rows.T) @ null_rows
    else:
        w_null = np.zeros_like(w_hat)
    w_perp = w_hat - w_null

    def to_coeffs(w):
        out = np.zeros((n_obs, G.basis.size))
        out[:, 1:] = (w / G.mode_scales) @ G.modes.T
        return out

    return VHat(vhat=to_coeffs(w_hat), vhat_null=to_coeffs(w_null),
                vhat_perp=to_coeffs(w_perp), w=w_hat, w_null=w_null,
                w_perp=w_perp, dropped_norm=dropped_norm, tol=float(tol))


def _single_component(vhat: VHat) -> np.ndarray:
    if vhat.obs_dim != 1:
        raise ParameterDomainError(
            "directional asymptotics need a single observable component; "
            "contract V with a direction first")
    return vhat.w[0]


def large_gamma_series(G: HSpaceOperator, vhat: VHat, gamma: float,
                       n_terms: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Resolvent series of D^e in powers of 1/gamma, with alternating signs.

    Term k is ``gamma^-(2k+1) <G^2k V_hat, V_hat>``; antisymmetry forces
    ``<G^2k f, f> = (-1)^k ||G^k f||^2``, so the terms alternate and the
    partial sums converge to the exact coefficient with geometric ratio
    ``(||G|| / gamma)^2``.  An all-positive reading of the same terms
    overshoots the limit, which the tests demonstrate.  Requires
    ``gamma > ||G||``.
    """
    if n_terms < 0:
        raise ParameterDomainError("n_terms must be >= 0")
    w = _single_component(vhat)
    if not gamma > G.norm:
        raise ConvergenceDomainError(
            f"gamma = {gamma} is inside the operator-norm bound {G.norm:.6g}; "
            "the resolvent series does not converge")
    K = G.skew
    terms = np.empty(n_terms + 1)
    y = w.copy()
    for k in range(n_terms + 1):
        terms[k] = float(y @ w) / gamma ** (2 * k + 1)
        if k < n_terms:
            y = K @ (K @ y)
    return np.cumsum(terms), terms


def small_gamma_limit(G: HSpaceOperator, vhat: VHat) -> tuple[float, bool]:
    """Weak-dissipation limit of ``gamma D^e`` and a solvability check.

    The limit equals the squared null-space mass of V_hat; it is zero (so
    ``D^e = o(1/gamma)``) exactly when V_hat has no null component.  The flag
    reports whether the orthogonal part lies in the range of G (a least
    squares residual below 1e-8 relative), the hypothesis under which the
    limit statement holds.
    """
    w = _single_component(vhat)
    w_null = vhat.w_null[0]
    w_perp = vhat.w_perp[0]
    limit = float(w_null @ w_null)
    perp_norm = np.linalg.norm(w_perp)
    if perp_norm == 0.0:
        return limit, True
    sol, *_ = np.linalg.lstsq(G.skew, -w_perp, rcond=None)
    residual = np.linalg.norm(G.skew @ sol + w_perp)
    return limit, bool(residual <= 1e-8 * perp_norm)


def spectral_measure(G: HSpaceOperator, vhat: VHat,
                     vhat_second: VHat | None = None) -> SpectralMeasure:
    """Eigen-resolution of Gamma = i G paired against V_hat components.

    Eigenvalues of the whitened skew operator come in +/- pairs with
    conjugate weights; clusters closer than 1e-9 of the spectral radius are
    merged into one atom.  Atoms within the null cutoff contribute to
    ``null_mass`` instead.
    """
    K = G.skew
    Wt = vhat.w.T
    Wt2 = Wt if vhat_second is None else vhat_second.w.T
    if Wt2.shape[0] != Wt.shape[0]:
        raise ParameterDomainError("both VHat arguments must come from the same operator")
    n_obs = Wt.shape[1]
    n_obs2 = Wt2.shape[1]
    gram_pairing = vhat.w @ Wt2

    if K.size == 0:
        return SpectralMeasure(atoms=(), null_mass=np.zeros((n_obs, n_obs2)),
                               gram_pairing=gram_pairing, obs_dim=n_obs)

    lam, U = np.linalg.eigh(1j * K)
    C1 = U.conj().T @ Wt
    C2 = U.conj().T @ Wt2
    scale = np.abs(lam).max(initial=0.0)
    group_tol = max(1e-9 * scale, 1e-13)
    null_tol = max(vhat.tol * scale, 1e-13)

    atoms = []
    null_mass = np.zeros((n_obs, n_obs2), dtype=complex)
    mass_scale = max(np.abs(gram_pairing).max(), np.finfo(float).tiny)
    start = 0
    for stop in range(1, lam.size + 1):
        if stop < lam.size and lam[stop] - lam[stop - 1] <= group_tol:
            continue
        block = slice(start, stop)
        lam_bar = float(lam[block].mean())
        weight = C1[block].conj().T @ C2[block]
        if abs(lam_bar) <= null_tol:
            null_mass += weight
        elif np.abs(weight).max() > 1e-13 * mass_scale:  # massless atoms are not atoms
            atoms.append((lam_bar, weight))
        start = stop
    if np.abs(null_mass.imag).max(initial=0.0) > 1e-10 * max(np.abs(null_mass).max(), 1.0):
        raise RuntimeError("null mass came out non-real; eigen-resolution inconsistent")
    return SpectralMeasure(atoms=tuple(atoms), null_mass=null_mass.real,
                           gram_pairing=gram_pairing, obs_dim=n_obs)


def stieltjes_symmetric(measure: SpectralMeasure, gamma: float) -> np.ndarray:
    """Symmetric part of D(gamma) from the spectral atoms.

    ``null_mass / gamma`` plus Lorentzian contributions ``gamma W / (gamma^2
    + lambda^2)`` summed over all atoms; the +/- pairs fold into the
    half-line form with the familiar factor 2.
    """
    if not gamma > 0:
        raise ParameterDomainError("gamma must be positive")
    out = measure.null_mass / gamma
    for lam, weight in measure.atoms:
        out = out + gamma * weight.real / (gamma**2 + lam**2)
    out = SYMMETRIC_NORMALIZATION * out
    return 0.5 * (out + out.T)


def stieltjes_antisymmetric(measure: SpectralMeasure, gamma: float) -> np.ndarray:
    """Antisymmetric part of D(gamma) from the spectral atoms.

    ``sum_m i lambda_m W_m / (lambda_m^2 + gamma^2)``: the conjugate +/-
    pairs combine to a real antisymmetric matrix.  The null mass never
    enters (its atoms sit at lambda = 0), so this part is independent of the
    null projection of V_hat by construction.
    """
    if not gamma > 0:
        raise ParameterDomainError("gamma must be positive")
    acc = np.zeros_like(measure.null_mass, dtype=complex)
    for lam, weight in measure.atoms:
        acc = acc + (1j * lam / (gamma**2 + lam**2)) * weight
    if np.abs(acc.imag).max(initial=0.0) > 1e-9 * max(np.abs(acc).max(), 1.0):
        raise RuntimeError("antisymmetric reconstruction has a residual imaginary part")
    out = ANTISYMMETRIC_NORMALIZATION * acc.real
    return 0.5 * (out - out.T)


def reconstruct_tensor(measure: SpectralMeasure, gamma: float) -> DiffusionTensor:
    """Full tensor at dissipation strength gamma, symmetric plus antisymmetric."""
    D = stieltjes_symmetric(measure, gamma) + stieltjes_antisymmetric(measure, gamma)
    return DiffusionTensor(D=D, route="stieltjes")


def hspace_for_model(model: LinearGaussianModel, max_degree: int):
    """Convenience: basis, split generator and G for a model.

    Pass the model at unit dissipation when the result feeds a sweep over
    the dissipation strength; the antisymmetric part does not depend on it
    and the symmetric part then carries unit normalization.
    """
    basis = hermite.build_basis(model.state_dim, max_degree, model.inv_temp)
    L = hermite.assemble_generator(model, basis)
    S, A = hermite.split_sym_antisym(L)
    return basis, S, A, build_G(S, A)


def g_norm_by_degree(model: LinearGaussianModel, degrees) -> list[tuple[int, float]]:
    """Operator-norm estimate of G as the truncation degree grows.

    Growth without saturation is the finite-dimensional shadow of an
    unbounded operator (the generalized Langevin embedding shows it);
    saturation indicates a bounded one.
    """
    out = []
    for deg in degrees:
        _, _, _, gop = hspace_for_model(model, deg)
        out.append((int(deg), gop.norm))
    return out


def measure_to_dict(measure: SpectralMeasure) -> dict:
    """JSON document: null mass and atoms with split real/imaginary weights."""
    return {
        "null_mass": [[float(v) for v in row] for row in np.atleast_2d(measure.null_mass)],
        "atoms": [
            {
                "lambda": float(lam),
                "weight_re": [[float(v) for v in row] for row in weight.real],
                "weight_im": [[float(v) for v in row] for row in weight.imag],
            }
            for lam, weight in measure.atoms
        ],
    }
