"""Command line front end.

Subcommands:
    spectrum       masses and splits for a model file
    validate       structural and invariance defects for a model file
    unitary-gauge  canonical gauge slice for a multiplet field on a grid
    gauge-check    discretization orders of the covariance identities
    yukawa         trilinear invariance and post-breaking fermion masses
    electroweak    built-in preset report

Output formats: "table" for reading, "machine" for the document dialect
of modelfile (17 significant digits, byte-identical for identical
inputs and seeds).  Exit status 0 only when every checked tolerance
passes; 1 on tolerance failure; 2 on input or usage errors.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .breaking import spectrum
from .chiral import Representation, triple_invariance_defect
from .electroweak import (
    ElectroweakParams,
    boson_mass_predictions,
    build_model,
    charge_operators,
    elementary_charge,
    weinberg_angle,
)
from .gridfile import GridFileError, read_field, write_field
from .higgsmodel import NotAVacuumError, check_potential_invariance, potential_gradient, potential_hessian
from .latticefields import (
    Grid,
    LatticeError,
    convergence_orders,
    gauge_transform_gauge,
    gauge_transform_matter,
    higgs_density,
    klein_gordon_density,
    quadratic_expansion_check,
    smooth_gauge_field,
    smooth_multiplet_field,
    strength_covariance_defect,
    yang_mills_density,
    field_strength,
)
from .liecore import GeneratorError, act, exponentiate, validate_generators
from .modelfile import ModelFileError, emit_document, parse_model_file
from .unitarygauge import DegeneratePointError, UnitaryGaugeConfig, apply_unitary_gauge_field

__all__ = ["main"]

ENV_SEED = "SSB_SPECTRUM_SEED"
ORDER_BAND = (1.9, 2.1)


def _fmt_table_value(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt_table_value(v) for v in value) + "]"
    return str(value)


def _print_report(doc, fmt: str, out) -> None:
    if fmt == "machine":
        out.write(emit_document(doc))
        return
    for section, entries in doc.items():
        out.write(f"{section}\n")
        width = max((len(k) for k in entries), default=0)
        for key, value in entries.items():
            out.write(f"  {key.ljust(width)}  {_fmt_table_value(value)}\n")
        out.write("\n")


def _floats(values) -> list:
    return [float(v) for v in np.asarray(values).ravel()]


def _nested(values) -> list:
    arr = np.asarray(values, dtype=float)
    return arr.tolist()


def _load_bundle(path):
    with open(path, "r") as fh:
        return parse_model_file(fh.read())


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(ENV_SEED)
    return int(env) if env else 0


# ---------------------------------------------------------------------------
# subcommands


def _cmd_electroweak(args, out) -> int:
    p = ElectroweakParams(g=args.g, gp=args.gp, mu=args.mu, lam=args.lam)
    model = build_model(p)
    spec = spectrum(model)
    pred = boson_mass_predictions(p)
    report = validate_generators(model.generators)
    mass_gap = float(np.max(np.abs(pred.as_array() - spec.boson_masses)))
    higgs_gap = abs(pred.higgs - float(spec.higgs_masses[0]))
    ops = charge_operators(model.generators, p)
    unbroken_norm = max(
        float(np.linalg.norm(act(model.generators, row, model.vacuum)))
        for row in spec.unbroken
    )
    tol = args.tol if args.tol is not None else 1e-9
    ok = (
        mass_gap < tol
        and higgs_gap < tol
        and report.skew_defect < 1e-10
        and report.closure_defect < 1e-10
        and unbroken_norm < 1e-12
    )
    doc = {
        "report": {"command": "electroweak", "tolerance": tol},
        "parameters": {"g": p.g, "gp": p.gp, "mu": p.mu, "lambda": p.lam},
        "masses": {
            "w": pred.w,
            "z": pred.z,
            "photon": pred.photon,
            "higgs": pred.higgs,
            "numerical_bosons": _floats(spec.boson_masses),
            "numerical_higgs": _floats(spec.higgs_masses),
            "goldstone_count": spec.goldstone_count,
        },
        "derived": {
            "weinberg_angle": weinberg_angle(p),
            "elementary_charge": elementary_charge(p),
            "isospin_diagonal": _floats(np.diag(ops.t3).real),
            "hypercharge_diagonal": _floats(np.diag(ops.hypercharge).real),
            "charge_diagonal": _floats(np.diag(ops.charge).real),
        },
        "validation": {
            "skew_defect": report.skew_defect,
            "closure_defect": report.closure_defect,
            "mass_gap": mass_gap,
            "higgs_gap": higgs_gap,
            "unbroken_action_norm": unbroken_norm,
            "pass": ok,
        },
    }
    _print_report(doc, args.format, out)
    return 0 if ok else 1


def _cmd_spectrum(args, out) -> int:
    bundle = _load_bundle(args.model)
    model = bundle.model
    seed = _resolve_seed(args)
    spec = spectrum(model)
    report = validate_generators(model.generators)
    grad = float(np.linalg.norm(potential_gradient(model.potential, model.vacuum)))
    invariance = check_potential_invariance(model, samples=50, seed=seed)
    tol = args.tol if args.tol is not None else 1e-8
    ok = report.skew_defect < tol and report.closure_defect < tol and grad < tol and invariance < tol
    r = model.generators.r
    d = spec.goldstone_count
    doc = {
        "report": {"command": "spectrum", "seed": seed, "tolerance": tol},
        "model": {
            "n": model.generators.n,
            "r": r,
            "vacuum_norm": float(np.linalg.norm(model.vacuum)),
        },
        "spectrum": {
            "boson_masses": _floats(spec.boson_masses),
            "goldstone_count": d,
            "unbroken_dimension": r - d,
            "unbroken": "H = G" if d == 0 else f"{r - d} of {r} generators",
            "higgs_masses": _floats(spec.higgs_masses),
        },
        "validation": {
            "skew_defect": report.skew_defect,
            "closure_defect": report.closure_defect,
            "vacuum_gradient": grad,
            "potential_invariance": invariance,
            "pass": ok,
        },
    }
    _print_report(doc, args.format, out)
    return 0 if ok else 1


def _cmd_validate(args, out) -> int:
    bundle = _load_bundle(args.model)
    model = bundle.model
    seed = _resolve_seed(args)
    report = validate_generators(model.generators)
    grad = float(np.linalg.norm(potential_gradient(model.potential, model.vacuum)))
    hess_min = float(np.linalg.eigvalsh(potential_hessian(model.potential, model.vacuum)).min())
    invariance = check_potential_invariance(model, samples=100, seed=seed)
    tol = args.tol if args.tol is not None else 1e-8
    checks = {
        "skew_defect": report.skew_defect,
        "closure_defect": report.closure_defect,
        "vacuum_gradient": grad,
        "hessian_min_eigenvalue": hess_min,
        "potential_invariance": invariance,
    }
    ok = (
        report.skew_defect < tol
        and report.closure_defect < tol
        and grad < tol
        and hess_min > -tol
        and invariance < tol
    )
    if bundle.yukawa is not None:
        reps = _yukawa_reps(bundle)
        defect = triple_invariance_defect(bundle.yukawa.product, *reps)
        checks["yukawa_invariance"] = defect
        ok = ok and defect < tol
    checks["pass"] = ok
    doc = {
        "report": {"command": "validate", "seed": seed, "tolerance": tol},
        "checks": checks,
    }
    _print_report(doc, args.format, out)
    return 0 if ok else 1


def _yukawa_reps(bundle):
    reps = []
    for name in bundle.yukawa.slots:
        if name == "higgs":
            reps.append(Representation(bundle.model.generators.matrices))
        else:
            reps.append(bundle.representations[name])
    return tuple(reps)


def _cmd_yukawa(args, out) -> int:
    bundle = _load_bundle(args.model)
    if bundle.yukawa is None:
        out.write("error: model file has no [yukawa] section\n")
        return 2
    from .chiral import fermion_mass_after_breaking, fermion_mass_matrix

    tau = bundle.yukawa.product
    reps = _yukawa_reps(bundle)
    defect = triple_invariance_defect(tau, *reps)
    v0 = bundle.model.vacuum
    g_y = bundle.yukawa.g_y
    matrix = fermion_mass_matrix(tau, v0, g_y)
    dirac = fermion_mass_after_breaking(tau, v0, g_y)
    scale = max(1.0, float(np.max(matrix)))
    massless = [int(i) for i in range(matrix.shape[0]) if np.all(matrix[i] < 1e-12 * scale)]
    tol = args.tol if args.tol is not None else 1e-10
    ok = defect < tol
    doc = {
        "report": {"command": "yukawa", "tolerance": tol},
        "yukawa": {
            "slots": list(bundle.yukawa.slots),
            "g_y": g_y,
            "invariance_defect": defect,
            "dirac_mass": dirac,
            "mass_matrix": _nested(matrix),
            "massless_rows": massless,
            "pass": ok,
        },
    }
    _print_report(doc, args.format, out)
    return 0 if ok else 1


def _cmd_unitary_gauge(args, out) -> int:
    bundle = _load_bundle(args.model)
    model = bundle.model
    seed = _resolve_seed(args)
    if args.field:
        grid, kind, field = read_field(args.field)
        if kind != "multiplet":
            out.write(f"error: expected a multiplet field file, got kind {kind!r}\n")
            return 2
        if field.shape[-1] != model.generators.n:
            out.write(
                f"error: field has {field.shape[-1]} components, model multiplet has "
                f"{model.generators.n}\n"
            )
            return 2
    else:
        grid = bundle.grid
        if grid is None:
            out.write("error: no --field given and the model file has no [grid] section\n")
            return 2
        field = model.vacuum + 0.35 * smooth_multiplet_field(
            grid, model.generators.n, seed
        )
    tol = args.tol if args.tol is not None else 1e-10
    config = UnitaryGaugeConfig(tol=tol)
    result = apply_unitary_gauge_field(
        model.generators, model.vacuum, field, config=config
    )
    if args.out:
        write_field(args.out, grid, "multiplet", result.transformed)
    ok = result.max_defect < tol
    doc = {
        "report": {"command": "unitary-gauge", "seed": seed, "tolerance": tol},
        "input": {
            "sites": int(np.prod(grid.shape)),
            "shape": list(grid.shape),
            "spacing": grid.spacing,
            "synthesized": not bool(args.field),
        },
        "result": {
            "max_defect": result.max_defect,
            "total_iterations": int(np.sum(result.iterations)),
            "pass": ok,
        },
    }
    _print_report(doc, args.format, out)
    return 0 if ok else 1


def _cmd_gauge_check(args, out) -> int:
    if args.model:
        gs = _load_bundle(args.model).model.generators
    else:
        gs = build_model(ElectroweakParams()).generators
    seed = _resolve_seed(args)
    extent = args.grid if args.grid is not None else 16
    refine = args.refine if args.refine is not None else 2
    base = Grid(dim=2, shape=(extent, extent), spacing=1.0 / extent, metric=args.metric)
    der = convergence_orders(gs, base, seed=seed, refinements=refine)
    stren = convergence_orders(
        gs, base, seed=seed, refinements=refine, measure=strength_covariance_defect
    )
    lo, hi = ORDER_BAND
    orders_ok = all(lo <= o <= hi for o in der.orders + stren.orders)

    # constant transforms must leave every density unchanged
    rng = np.random.default_rng(seed)
    a = smooth_gauge_field(base, gs.r, seed + 10)
    psi = smooth_multiplet_field(base, gs.n, seed + 11)
    sigma = np.broadcast_to(
        exponentiate(gs, rng.normal(size=gs.r)), base.shape + (gs.n, gs.n)
    ).copy()
    a2 = gauge_transform_gauge(gs, base, sigma, a).coefficients
    psi2 = gauge_transform_matter(sigma, psi)
    gap = max(
        float(
            np.max(
                np.abs(
                    yang_mills_density(base, field_strength(gs, base, a))
                    - yang_mills_density(base, field_strength(gs, base, a2))
                )
            )
        ),
        float(
            np.max(
                np.abs(
                    klein_gordon_density(gs, base, a, psi, 0.5)
                    - klein_gordon_density(gs, base, a2, psi2, 0.5)
                )
            )
        ),
    )
    invariance_ok = gap < 1e-10
    ok = orders_ok and invariance_ok
    doc = {
        "report": {
            "command": "gauge-check",
            "seed": seed,
            "grid": extent,
            "refine": refine,
            "metric": args.metric,
        },
        "derivative": {
            "defects": _floats(der.defects),
            "orders": _floats(der.orders),
        },
        "strength": {
            "defects": _floats(stren.defects),
            "orders": _floats(stren.orders),
        },
        "invariance": {"constant_transform_gap": gap},
        "result": {
            "order_band": [lo, hi],
            "orders_pass": orders_ok,
            "invariance_pass": invariance_ok,
            "pass": ok,
        },
    }
    _print_report(doc, args.format, out)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument plumbing


def _add_common(sp, model_required=True, with_model=True):
    if with_model:
        sp.add_argument(
            "--model", required=model_required, help="model file path", default=None
        )
    sp.add_argument("--seed", type=int, default=None, help=f"rng seed (or ${ENV_SEED})")
    sp.add_argument("--tol", type=float, default=None, help="pass/fail tolerance")
    sp.add_argument(
        "--format",
        choices=("table", "machine"),
        default="table",
        help="output rendering",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssbspec",
        description="spectra, gauge slices, and lattice checks for broken gauge models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="masses and splits for a model file")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_spectrum)

    sp = sub.add_parser("validate", help="structural and invariance defects")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_validate)

    sp = sub.add_parser("unitary-gauge", help="canonical gauge slice over a grid field")
    _add_common(sp)
    sp.add_argument("--field", default=None, help="input multiplet field file")
    sp.add_argument("--out", default=None, help="output field file")
    sp.set_defaults(handler=_cmd_unitary_gauge)

    sp = sub.add_parser("gauge-check", help="covariance discretization orders")
    _add_common(sp, model_required=False)
    sp.add_argument("--grid", type=int, default=None, help="base grid extent")
    sp.add_argument("--refine", type=int, default=None, help="number of refinements")
    sp.add_argument(
        "--metric", choices=("euclidean", "lorentzian"), default="euclidean"
    )
    sp.set_defaults(handler=_cmd_gauge_check)

    sp = sub.add_parser("yukawa", help="trilinear invariance and fermion masses")
    _add_common(sp)
    sp.set_defaults(handler=_cmd_yukawa)

    sp = sub.add_parser("electroweak", help="built-in preset report")
    _add_common(sp, with_model=False)
    sp.add_argument("--g", type=float, default=2.0)
    sp.add_argument("--gp", type=float, default=1.0)
    sp.add_argument("--mu", type=float, default=2.0)
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
    sp.set_defaults(handler=_cmd_electroweak)

    return parser


def main(argv=None, stdout=None) -> int:
    out = stdout if stdout is not None else sys.stdout
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, out)
    except ModelFileError as err:
        for issue in err.issues:
            out.write(f"error: {issue}\n")
        return 2
    except FileNotFoundError as err:
        out.write(f"error: {err}\n")
        return 2
    except (
        GridFileError,
        LatticeError,
        GeneratorError,
        NotAVacuumError,
        DegeneratePointError,
        ValueError,
    ) as err:
        out.write(f"error: {err}\n")
        return 2
