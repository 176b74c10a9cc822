"""Dissipation sweeps: D^e(gamma) with small- and large-gamma predictions.

Each model family exposes one knob multiplying its dissipative part:

``ou``        the friction gamma itself,
``magnetic``  the collision frequency nu,
``genou``     the damping gamma (the skew drift is untouched),
``gle``       the total kernel mass sum_k lambda_k^2 / alpha_k, swept by
              rescaling the couplings of a normalized base kernel — this is
              the zero-frequency friction of the memory kernel, and with it
              gamma * D = beta^-1 holds identically.

Sweeping the knob leaves the antisymmetric part of the generator fixed, so
the spectral data computed once at unit dissipation predicts the whole
curve: ``gamma D^e -> ||V_hat^e_null||^2`` as gamma -> 0 and ``gamma D^e ->
||V_hat^e||^2 = beta^-1`` as gamma -> infinity.  For the gle observable the
preconditioned V_hat does not exist (see :mod:`greenkubo.operator_analysis`)
and the prediction columns are NaN.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import operator_analysis as oa
from .errors import ParameterDomainError
from .hermite import observable_coefficients
from .models import (LinearGaussianModel, build_genou, build_gle, build_magnetic,
                     build_ou)
from .poisson import directional_coefficient


def model_at_dissipation(label: str, params: dict, gamma: float) -> LinearGaussianModel:
    """Instantiate a catalog model with its dissipation knob set to gamma."""
    if not gamma > 0:
        raise ParameterDomainError(f"dissipation strength must be positive, got {gamma}")
    beta = float(params.get("beta", 1.0))
    if label == "ou":
        return build_ou(gamma, beta)
    if label == "magnetic":
        return build_magnetic(float(params.get("omega", 1.0)), gamma, beta)
    if label == "genou":
        J = params.get("J")
        return build_genou(J, float(params.get("alpha", 1.0)), gamma, beta)
    if label == "gle":
        lam = np.asarray(params["lambdas"], dtype=float)
        alp = np.asarray(params["alphas"], dtype=float)
        mass = float(np.sum(lam**2 / alp))
        if mass <= 0:
            raise ParameterDomainError("base kernel has zero mass")
        return build_gle(lam * np.sqrt(gamma / mass), alp, beta)
    raise ParameterDomainError(f"unknown model label {label!r}")


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    d_e: float
    gamma_d_e: float
    small_gamma_limit: float
    large_gamma_limit: float


def log_grid(gmin: float, gmax: float, count: int) -> np.ndarray:
    if not (gmin > 0 and gmax >= gmin and count >= 1):
        raise ParameterDomainError("grid needs 0 < min <= max and count >= 1")
    return np.geomspace(gmin, gmax, count)


def dissipation_sweep(label: str, params: dict, e, gammas,
                      max_degree: int = 2) -> list[SweepRow]:
    """D^e over a gamma grid with the two asymptotic predictions attached.

    The predictions come from the operator machinery at unit dissipation;
    D^e itself comes from the per-gamma Poisson solve, so the table doubles
    as a cross-check of the two routes.
    """
    unit = model_at_dissipation(label, params, 1.0)
    e = np.asarray(e, dtype=float)
    e = e / np.linalg.norm(e)

    basis, _, _, gop = oa.hspace_for_model(unit, max_degree)
    V = observable_coefficients(unit, basis)
    ve = (e @ V).reshape(1, -1)
    vhat = oa.vhat_and_projections(gop, ve)
    if vhat.dropped_norm.max() > 1e-10:
        small_pred = float("nan")
        large_pred = float("nan")
    else:
        small_pred = float(vhat.w_null[0] @ vhat.w_null[0])
        large_pred = vhat.h_norm_sq(0)

    rows = []
    for g in np.asarray(gammas, dtype=float):
        model = model_at_dissipation(label, params, float(g))
        de = directional_coefficient(model, e)
        rows.append(SweepRow(gamma=float(g), d_e=de, gamma_d_e=float(g) * de,
                             small_gamma_limit=small_pred, large_gamma_limit=large_pred))
    return rows
