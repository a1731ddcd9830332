"""Command-line front end.

analyze   -- full multiaxial report for a state file (JSON or text)
compare   -- LU-equivalence verdict for two state files
generate  -- build a family state and write it as a state file
sweep     -- grid a family parameter, report PSD/PPT/class per point and
             bisect the sign-change boundaries
selftest  -- run the built-in example corpus
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from .classify import (
    Tolerances,
    class_signature,
    lu_equivalent,
    pure_separability_check,
)
from .families import FAMILY_PARAMS, FamilyParameterError, family_density, family_ranges
from .fano import extract_tensors
from .halfint import HalfInteger
from .states import (
    DensityMatrix,
    StateFormatError,
    as_density,
    ppt_check,
    read_state,
    state_to_json,
    validate,
    write_state,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2


def _angles_of(axis) -> dict:
    return {
        "theta_rad": axis.theta,
        "phi_rad": axis.phi,
        "theta_deg": math.degrees(axis.theta),
        "phi_deg": math.degrees(axis.phi),
    }


def build_report(rho: DensityMatrix, tolerances: Tolerances) -> dict:
    report = validate(rho)
    tensors = extract_tensors(rho)
    signature = class_signature(rho, tolerances)

    tensor_table = []
    for k in range(tensors.max_rank + 1):
        for q in range(-k, k + 1):
            z = tensors.component(k, q)
            tensor_table.append({"k": k, "q": q, "re": z.real, "im": z.imag})

    ranks = []
    for entry in signature.entries:
        item = {"k": entry.k, "present": entry.present, "r_k": entry.r_k}
        if entry.present:
            item["configuration"] = entry.configuration.render()
            item["fit_residual"] = entry.decomposition.fit_residual
            item["axes"] = [
                {**_angles_of(axis), "multiplicity": mult}
                for axis, mult in entry.decomposition.axes
            ]
        ranks.append(item)

    if report.is_pure:
        verdict = pure_separability_check(rho, tolerances)
        separability = {
            "method": "pure-recipe",
            "separable": verdict.separable,
            "reason": verdict.reason,
        }
    else:
        ppt = ppt_check(rho)
        if ppt.applicable:
            separability = {
                "method": "ppt",
                "separable": not ppt.entangled,
                "reason": f"partial-transpose minimum eigenvalue "
                          f"{ppt.min_eigenvalue:.9e}",
            }
        else:
            separability = {
                "method": "undetermined",
                "separable": None,
                "reason": "mixed state with j != 1; no applicable test",
            }

    return {
        "j": str(rho.j),
        "purity": report.purity,
        "validation": {
            "hermiticity_defect": report.hermiticity_defect,
            "trace_defect": report.trace_defect,
            "min_eigenvalue": report.min_eigenvalue,
            "is_valid": report.is_valid,
            "is_pure": report.is_pure,
        },
        "tensors": tensor_table,
        "ranks": ranks,
        "signature": signature.render(),
        "fingerprint": {
            "r": {str(k): v for k, v in sorted(signature.r_values.items())},
            "pairwise_cosines": list(signature.pairwise),
        },
        "separability": separability,
    }


def render_text_report(doc: dict) -> str:
    lines = [
        f"j = {doc['j']}   purity = {doc['purity']:.9f}   "
        f"valid = {doc['validation']['is_valid']}",
        f"min eigenvalue = {doc['validation']['min_eigenvalue']:.3e}",
        "",
        "tensor components t^k_q:",
    ]
    for row in doc["tensors"]:
        if abs(row["re"]) > 1e-14 or abs(row["im"]) > 1e-14:
            lines.append(
                f"  t^{row['k']}_{row['q']:+d} = {row['re']:+.9f} "
                f"{row['im']:+.9f}i"
            )
    lines.append("")
    for item in doc["ranks"]:
        if not item["present"]:
            lines.append(f"rank {item['k']}: absent")
            continue
        config = item["configuration"]
        pretty = config
        if "_" in config:
            head, tail = config.split("_", 1)
            pretty = head + "_{" + tail + "}"
        lines.append(
            f"rank {item['k']}: r = {item['r_k']:.9f}   {pretty}   "
            f"residual = {item['fit_residual']:.2e}"
        )
        for axis in item["axes"]:
            lines.append(
                f"  axis x{axis['multiplicity']}: theta = "
                f"{axis['theta_deg']:9.4f} deg ({axis['theta_rad']:.6f} rad), "
                f"phi = {axis['phi_deg']:9.4f} deg ({axis['phi_rad']:.6f} rad)"
            )
    lines.append("")
    lines.append(f"signature: {doc['signature']}")
    sep = doc["separability"]
    lines.append(
        f"separability [{sep['method']}]: {sep['separable']} -- {sep['reason']}"
    )
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _tolerances(args) -> Tolerances:
    return Tolerances(zero=args.tol_zero, angle=args.tol_angle)


def cmd_analyze(args) -> int:
    try:
        state = read_state(args.state)
    except (OSError, StateFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rho = as_density(state)
    doc = build_report(rho, _tolerances(args))
    if args.format == "json":
        _emit(_json_dumps(doc), args.out)
    else:
        _emit(render_text_report(doc), args.out)
    return EXIT_OK if doc["validation"]["is_valid"] else EXIT_VALIDATION


def cmd_compare(args) -> int:
    try:
        a = as_density(read_state(args.state_a))
        b = as_density(read_state(args.state_b))
    except (OSError, StateFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if a.j != b.j:
        print(f"error: spin mismatch j={a.j} vs j={b.j}", file=sys.stderr)
        return EXIT_USAGE
    result = lu_equivalent(a, b, _tolerances(args))
    doc = {"verdict": result.verdict, "reason": result.reason}
    if result.witness is not None:
        doc["witness_euler_zyz"] = {
            "alpha": result.witness.alpha,
            "beta": result.witness.beta,
            "gamma": result.witness.gamma,
        }
    _emit(_json_dumps(doc), args.out)
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        with open(args.spec) as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read family spec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    name = spec.get("family")
    try:
        rho, psd_ok, note = family_density(name, spec.get("params", {}))
    except (FamilyParameterError, TypeError) as exc:
        hint = ""
        if name in FAMILY_PARAMS:
            hint = f" (valid ranges: {family_ranges(name)})"
        print(f"error: {exc}{hint}", file=sys.stderr)
        return EXIT_USAGE
    if not psd_ok:
        print(f"warning: {note}", file=sys.stderr)
    if args.out:
        write_state(args.out, rho)
    else:
        _emit(_json_dumps(state_to_json(rho)), None)
    return EXIT_OK


def _parse_assignments(pairs: list[str]) -> dict:
    out = {}
    for item in pairs:
        key, _, value = item.partition("=")
        if not _:
            raise ValueError(f"expected name=value, got {item!r}")
        out[key] = float(value)
    return out


def _sweep_metrics(family: str, params: dict, reports: list[str],
                   tolerances: Tolerances):
    rho, _, _ = family_density(family, params)
    row = {}
    if "psd" in reports:
        row["min_eigenvalue"] = validate(rho).min_eigenvalue
    if "ppt" in reports:
        ppt = ppt_check(rho)
        row["ppt_min_eigenvalue"] = (
            ppt.min_eigenvalue if ppt.applicable else "undetermined"
        )
    if "class" in reports:
        try:
            row["class"] = class_signature(rho, tolerances).render()
        except Exception as exc:  # non-decomposable point: keep sweeping
            row["class"] = f"error: {exc}"
    return row


def _bisect_boundary(evaluate, lo, hi, f_lo, tol=1e-6):
    """Refine the sign change of evaluate() between lo and hi to tol."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (evaluate(mid) >= 0.0) == (f_lo >= 0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cmd_sweep(args) -> int:
    try:
        fixed = _parse_assignments(args.fix or [])
        name, _, spec = args.vary.partition("=")
        start, stop, steps = spec.split(":")
        start, stop, steps = float(start), float(stop), int(steps)
        if steps < 2:
            raise ValueError("need at least 2 grid points")
    except ValueError as exc:
        print(f"error: bad sweep specification: {exc}", file=sys.stderr)
        return EXIT_USAGE
    reports = [r.strip() for r in args.report.split(",") if r.strip()]
    tolerances = _tolerances(args)
    grid = np.linspace(start, stop, steps)

    rows = []
    try:
        for value in grid:
            params = dict(fixed)
            params[name] = float(value)
            metrics = _sweep_metrics(args.family, params, reports, tolerances)
            rows.append((float(value), metrics))
    except FamilyParameterError as exc:
        print(f"error: {exc} (valid ranges: "
              f"{family_ranges(args.family) if args.family in FAMILY_PARAMS else '?'})",
              file=sys.stderr)
        return EXIT_USAGE

    boundaries = []
    for column, shift in (("min_eigenvalue", -1e-10),
                          ("ppt_min_eigenvalue", -1e-10)):
        values = [m.get(column) for _, m in rows]
        if any(not isinstance(v, float) for v in values):
            continue

        def signed(x, _column=column):
            params = dict(fixed)
            params[name] = x
            return _sweep_metrics(args.family, params, [
                "psd" if _column == "min_eigenvalue" else "ppt"
            ], tolerances)[_column] - shift

        for i in range(len(rows) - 1):
            f_lo = values[i] - shift
            f_hi = values[i + 1] - shift
            if (f_lo >= 0.0) != (f_hi >= 0.0):
                root = _bisect_boundary(signed, rows[i][0], rows[i + 1][0], f_lo)
                boundaries.append((column, root))

    fieldnames = ["row_type", name] + sorted(
        {key for _, m in rows for key in m}
    ) + ["boundary_of"]
    out_fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out_fh, fieldnames=fieldnames)
        writer.writeheader()
        for value, metrics in rows:
            record = {"row_type": "grid", name: f"{value:.17g}"}
            for key, v in metrics.items():
                record[key] = f"{v:.17g}" if isinstance(v, float) else v
            writer.writerow(record)
        for column, root in boundaries:
            writer.writerow({
                "row_type": "boundary",
                name: f"{root:.17g}",
                "boundary_of": column,
            })
    finally:
        if args.out:
            out_fh.close()
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .families import make_bell, make_ghz, make_w
    from .states import pure_to_density

    tolerances = Tolerances()
    checks = []

    sig3 = class_signature(pure_to_density(make_ghz(3)), tolerances)
    checks.append(("ghz-3 signature", sig3.render() == "{D^2_2, D^3_1,1,1}"))
    sig4 = class_signature(pure_to_density(make_ghz(4)), tolerances)
    checks.append(("ghz-4 signature", sig4.render() == "{D^2_2, D^4_2,2}"))
    bell = pure_to_density(make_bell())
    checks.append(("bell signature",
                   class_signature(bell, tolerances).render() == "{D^2_2}"))
    checks.append(("bell ppt entangled", ppt_check(bell).entangled))
    w = pure_to_density(make_w(3))
    checks.append(("w signature",
                   class_signature(w, tolerances).render()
                   == "{D^1_1, D^2_2, D^3_3}"))
    checks.append(("w not separable",
                   not pure_separability_check(w, tolerances).separable))

    ok = True
    for label, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'}  {label}")
        ok = ok and passed
    return EXIT_OK if ok else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multiaxial",
        description="Multiaxial (per-rank axis) analysis of symmetric "
                    "N-qubit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--tol-angle", type=float, default=1e-6,
                       help="identical-axis / pairing threshold in radians")
        p.add_argument("--tol-zero", type=float, default=1e-12,
                       help="threshold below which a rank is absent")
        p.add_argument("--out", help="write output to this file")

    p = sub.add_parser("analyze", help="full report for one state file")
    p.add_argument("state")
    add_common(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="LU-equivalence verdict for two states")
    p.add_argument("state_a")
    p.add_argument("state_b")
    add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("generate", help="write a family state file")
    p.add_argument("spec", help='JSON file {"family": ..., "params": {...}}')
    p.add_argument("--out", help="output state file (default: stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sweep", help="grid a family parameter")
    p.add_argument("--family", required=True)
    p.add_argument("--vary", required=True, metavar="NAME=START:STOP:STEPS")
    p.add_argument("--fix", action="append", metavar="NAME=VALUE",
                   help="hold another parameter fixed (repeatable)")
    p.add_argument("--report", default="psd,ppt,class",
                   help="comma list of psd, ppt, class")
    add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="run the built-in example corpus")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
