"""Batch front door: model selection, route comparison, sweeps, spectra.

Subcommands: solve | compare | sweep | spectrum | expand | model list.
Flags may also be supplied through a JSON config file (--config); explicit
flags override file entries.  Outputs are deterministic given the same
configuration and seed.  ``compare`` exits nonzero when any Monte-Carlo
z-score exceeds 4, so the route equivalence can gate a CI pipeline.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import montecarlo as mc
from . import operator_analysis as oa
from .errors import (ConvergenceDomainError, ErgodicityError, IllConditionedError,
                     MemoryGuardError, ParameterDomainError, SingularMetricError,
                     TailFitError)
from .hermite import observable_coefficients
from .models import DEFAULT_J3, MODEL_LABELS, build_genou, build_gle, build_magnetic, build_ou
from .poisson import (diffusion_tensor, directional_coefficient, solve_linear_ansatz,
                      tensor_to_dict)
from .sweeps import dissipation_sweep, log_grid, model_at_dissipation

COMPARE_Z_LIMIT = 4.0


def _parse_vector(text: str, flag: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",") if v != ""])
    except ValueError:
        raise ParameterDomainError(f"{flag} must be a comma-separated number list, got {text!r}")


def _parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ParameterDomainError(f"--gamma-grid must be min:max:count, got {text!r}")
    return float(parts[0]), float(parts[1]), int(parts[2])


def build_model_from_args(args) -> "LinearGaussianModel":
    label = args.model
    if label is None:
        raise ParameterDomainError("--model is required")
    beta = args.beta
    if label == "ou":
        if args.gamma is None:
            raise ParameterDomainError("--gamma is required for model 'ou'")
        return build_ou(args.gamma, beta)
    if label == "magnetic":
        if args.nu is None:
            raise ParameterDomainError("--nu is required for model 'magnetic'")
        return build_magnetic(args.omega if args.omega is not None else 0.0, args.nu, beta)
    if label == "gle":
        if args.lambdas is None or args.alphas is None:
            raise ParameterDomainError("--lambdas and --alphas are required for model 'gle'")
        return build_gle(_parse_vector(args.lambdas, "--lambdas"),
                         _parse_vector(args.alphas, "--alphas"), beta)
    if label == "genou":
        J = DEFAULT_J3 if args.J is None else np.array(json.load(open(args.J)), dtype=float)
        if args.gamma is None:
            raise ParameterDomainError("--gamma is required for model 'genou'")
        return build_genou(J, args.alpha if args.alpha is not None else 1.0,
                           args.gamma, beta)
    raise ParameterDomainError(f"unknown model {label!r}")


def _family_params(args) -> dict:
    label = args.model
    params = {"beta": args.beta}
    if label == "magnetic":
        params["omega"] = args.omega if args.omega is not None else 1.0
    elif label == "genou":
        params["J"] = (DEFAULT_J3 if args.J is None
                       else np.array(json.load(open(args.J)), dtype=float))
        params["alpha"] = args.alpha if args.alpha is not None else 1.0
    elif label == "gle":
        params["lambdas"] = (_parse_vector(args.lambdas, "--lambdas")
                             if args.lambdas is not None else np.array([1.0]))
        params["alphas"] = (_parse_vector(args.alphas, "--alphas")
                            if args.alphas is not None else np.array([1.0]))
    return params


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _matrix_lines(name: str, M: np.ndarray) -> list[str]:
    lines = [name]
    for row in np.atleast_2d(M):
        lines.append("  " + "  ".join(f"{v: .12g}" for v in row))
    return lines


def cmd_solve(args) -> int:
    model = build_model_from_args(args)
    phi = solve_linear_ansatz(model)
    tensor = diffusion_tensor(model, phi)
    if args.format == "json":
        doc = tensor_to_dict(tensor)
        doc["phi_coefficients"] = [[float(v) for v in row] for row in phi.C]
        doc["model"] = model.label
        _emit(json.dumps(doc, indent=2) + "\n", args)
        return 0
    if args.format == "csv":
        buf = io.StringIO()
        d = tensor.D.shape[0]
        buf.write("# format: solve-v1\n")
        buf.write(",".join(f"D_{i}{j}" for i in range(d) for j in range(d)) + "\n")
        buf.write(",".join(repr(float(v)) for v in tensor.D.ravel()) + "\n")
        _emit(buf.getvalue(), args)
        return 0
    lines = [f"model: {model.label}  params: {json.dumps(model.params)}"]
    lines += _matrix_lines("diffusion tensor D (route: poisson)", tensor.D)
    lines += _matrix_lines("symmetric part", tensor.symmetric_part)
    lines += _matrix_lines("antisymmetric part", tensor.antisymmetric_part)
    lines += _matrix_lines("phi coefficients (phi = C z)", phi.C)
    _emit("\n".join(lines) + "\n", args)
    return 0


def cmd_compare(args) -> int:
    model = build_model_from_args(args)
    exact = diffusion_tensor(model, solve_linear_ansatz(model))
    analytic = mc.green_kubo_analytic(model)
    store = mc.simulate(model, args.dt, args.steps, args.paths, seed=args.seed)
    vacf = mc.estimate_vacf(store, max_lag=min(args.steps - 1, args.lags))
    est = mc.integrate_vacf(vacf, tail=args.tail)

    diff_routes = np.abs(exact.D - analytic.D).max()
    z = np.abs(est.D - exact.D) / np.where(est.stderr > 0, est.stderr, np.inf)
    zmax = float(z.max())

    lines = [f"model: {model.label}  paths: {args.paths}  steps: {args.steps}  dt: {args.dt}"
             f"  seed: {args.seed}"]
    lines += _matrix_lines("D poisson", exact.D)
    lines += _matrix_lines("D green-kubo analytic", analytic.D)
    lines += _matrix_lines("D green-kubo monte-carlo", est.D)
    lines += _matrix_lines("monte-carlo stderr", est.stderr)
    lines += _matrix_lines("z-scores |mc - poisson| / stderr", z)
    lines.append(f"max |poisson - analytic|: {diff_routes:.3e}")
    lines.append(f"max z-score: {zmax:.3f} (limit {COMPARE_Z_LIMIT})")
    status = 0 if zmax < COMPARE_Z_LIMIT else 1
    lines.append("status: " + ("PASS" if status == 0 else "FAIL"))
    _emit("\n".join(lines) + "\n", args)
    return status


def cmd_sweep(args) -> int:
    gmin, gmax, count = _parse_grid(args.gamma_grid)
    grid = log_grid(gmin, gmax, count)
    e = _parse_vector(args.e, "--e") if args.e else None
    if e is None:
        model = model_at_dissipation(args.model, _family_params(args), 1.0)
        e = np.zeros(model.obs_dim)
        e[0] = 1.0
    rows = dissipation_sweep(args.model, _family_params(args), e, grid,
                             max_degree=args.degree)
    buf = io.StringIO()
    buf.write("# format: sweep-v1\n")
    buf.write("gamma,D_e,gamma_D_e,small_gamma_limit,large_gamma_limit\n")
    for row in rows:
        buf.write(",".join(repr(float(v)) for v in
                           (row.gamma, row.d_e, row.gamma_d_e,
                            row.small_gamma_limit, row.large_gamma_limit)) + "\n")
    _emit(buf.getvalue(), args)
    return 0


def cmd_spectrum(args) -> int:
    unit = model_at_dissipation(args.model, _family_params(args), 1.0)
    basis, _, _, gop = oa.hspace_for_model(unit, args.degree)
    V = observable_coefficients(unit, basis)
    vhat = oa.vhat_and_projections(gop, V)
    measure = oa.spectral_measure(gop, vhat)
    doc = oa.measure_to_dict(measure)
    doc["model"] = args.model
    doc["g_norm"] = gop.norm

    gmin, gmax, count = _parse_grid(args.gamma_grid)
    grid = log_grid(gmin, gmax, count)
    recon = []
    for g in grid:
        model = model_at_dissipation(args.model, _family_params(args), float(g))
        exact = diffusion_tensor(model, solve_linear_ansatz(model))
        rebuilt = oa.reconstruct_tensor(measure, float(g))
        err = float(np.abs(rebuilt.D - exact.D).max())
        recon.append({"gamma": float(g),
                      "D": [float(v) for v in rebuilt.D.ravel()],
                      "reconstruction_error": err})
    doc["reconstruction"] = recon
    _emit(json.dumps(doc, indent=2) + "\n", args)
    return 0


def cmd_expand(args) -> int:
    unit = model_at_dissipation(args.model, _family_params(args), 1.0)
    basis, _, _, gop = oa.hspace_for_model(unit, args.degree)
    V = observable_coefficients(unit, basis)
    e = _parse_vector(args.e, "--e") if args.e else np.eye(unit.obs_dim)[0]
    e = e / np.linalg.norm(e)
    vhat = oa.vhat_and_projections(gop, (e @ V).reshape(1, -1))
    sums, terms = oa.large_gamma_series(gop, vhat, args.gamma, n_terms=args.terms)
    model = model_at_dissipation(args.model, _family_params(args), args.gamma)
    exact = directional_coefficient(model, e)
    buf = io.StringIO()
    buf.write("# format: expand-v1\n")
    buf.write("k,term,partial_sum,exact,abs_error\n")
    for k, (term, part) in enumerate(zip(terms, sums)):
        row = (k, float(term), float(part), float(exact), abs(float(part) - float(exact)))
        buf.write(",".join(repr(v) for v in row) + "\n")
    _emit(buf.getvalue(), args)
    return 0


def cmd_model_list(args) -> int:
    flags = {
        "ou": "--gamma --beta",
        "magnetic": "--omega --nu --beta",
        "gle": "--lambdas --alphas --beta",
        "genou": "--J --alpha --gamma --beta",
    }
    lines = [f"{label:10s} {flags[label]}" for label in MODEL_LABELS]
    _emit("\n".join(lines) + "\n", args)
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=MODEL_LABELS)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--nu", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--alphas", type=str)
    p.add_argument("--lambdas", type=str)
    p.add_argument("--J", type=str, help="path to a JSON file holding a skew matrix")
    p.add_argument("--e", type=str, help="direction, comma separated")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str)
    p.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    p.add_argument("--config", type=str, help="JSON file with defaults for any flag")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greenkubo",
        description="Diffusion tensors of linear-Gaussian kinetic models")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="Poisson-route diffusion tensor")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="cross-validate poisson vs Green-Kubo routes")
    _add_common(p)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--paths", type=int, default=10000)
    p.add_argument("--lags", type=int, default=1000)
    p.add_argument("--tail", choices=("truncate", "exp_fit"), default="truncate")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="D^e over a dissipation grid with predicted limits")
    _add_common(p)
    p.add_argument("--gamma-grid", dest="gamma_grid", type=str, default="0.01:100:50",
                   help="min:max:count, log spaced")
    p.add_argument("--degree", type=int, default=2)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("spectrum", help="spectral atoms, null mass and reconstruction")
    _add_common(p)
    p.add_argument("--gamma-grid", dest="gamma_grid", type=str, default="0.01:100:25")
    p.add_argument("--degree", type=int, default=2)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("expand", help="large-dissipation resolvent series")
    _add_common(p)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--terms", type=int, default=8)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("model", help="model catalog utilities")
    model_sub = p.add_subparsers(dest="model_command", required=True)
    pl = model_sub.add_parser("list", help="list catalog models and their flags")
    pl.add_argument("--out", type=str)
    pl.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    pl.set_defaults(func=cmd_model_list)

    return parser


def _apply_config(args, parser, argv) -> None:
    if getattr(args, "config", None):
        with open(args.config) as fh:
            defaults = json.load(fh)
        explicit = {a.split("=", 1)[0] for a in argv if a.startswith("--")}
        for key, value in defaults.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                continue
            if f"--{key}" in explicit or f"--{attr}" in explicit:
                continue  # flags override the file
            default = parser.get_default(attr)
            if getattr(args, attr) == default:
                setattr(args, attr, value)


def main(argv=None) -> int:
    parser = make_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)
    try:
        _apply_config(args, parser, argv)
        return args.func(args)
    except ParameterDomainError as exc:
        sys.stderr.write(f"parameter error: {exc}\n")
        return 2
    except (ConvergenceDomainError, ErgodicityError, IllConditionedError,
            MemoryGuardError, SingularMetricError, TailFitError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
