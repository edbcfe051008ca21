"""Batch command-line front end: JSON configs in, CSV/JSON artifacts out.

Commands: validate, evolve, spectrum, reconstruct, associator, fock-check.
Exit codes: 0 all checks pass, 1 at least one asserted property fails,
2 usage or parse error.  Outputs are written atomically and are
bit-identical across runs for a fixed seed; every file header stamps the
1/4-normalization convention in use ("paper" keeps the literal factors,
"rescaled" multiplies the four-component energy/charge observables by 4).
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from .fock import (
    FockSpace,
    ModeTable,
    four_component_table,
    ladder_ccr_report,
    reflection_symmetric,
)
from .fields import Reconstructor, field_ccr_report, variant_wave
from .lattice import init_from_plane_wave, run
from .minkowski import FourVector
from .planewave import (
    ConstraintViolation,
    PlaneWaveSpec,
    validate_constraints,
)
from .symbolic import ChainBroken, ladder_associator_check, \
    ladder_matrix_associator, verify_associator_chain

TWO_PI_CUBED = (2.0 * math.pi) ** 3

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class ConfigError(ValueError):
    pass


def _fmt(value):
    return "%.17g" % value


def _atomic_write(path, text):
    tmp = "%s.tmp.%d" % (path, os.getpid())
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(args, text, default_stdout=True):
    if args.out:
        _atomic_write(args.out, text)
    elif default_stdout:
        sys.stdout.write(text)


def _load_config(args, required=True):
    if args.config is None:
        if required:
            raise ConfigError("--config is required for this command")
        return {}
    try:
        with open(args.config) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError("config file not found: %s" % args.config)
    except json.JSONDecodeError as exc:
        raise ConfigError("config is not valid JSON: %s" % exc)


def _load_spec(config):
    if "spec" in config:
        return PlaneWaveSpec.from_dict(config["spec"])
    if "spec_path" in config:
        return PlaneWaveSpec.from_json(config["spec_path"])
    # a bare plane-wave document is also accepted
    if {"m", "theta", "k0", "k1"} <= set(config):
        return PlaneWaveSpec.from_dict(config)
    raise ConfigError("config needs a 'spec' object or 'spec_path'")


def _load_table(config):
    if "mode_table" in config:
        return ModeTable.from_dict(config["mode_table"])
    if "mode_table_path" in config:
        return ModeTable.from_json(config["mode_table_path"])
    if "spec" in config or "spec_path" in config:
        return four_component_table(_load_spec(config))
    raise ConfigError("config needs 'mode_table', 'mode_table_path' or a spec")


def _convention_factor(args):
    return 1.0 if args.convention == "paper" else 4.0


def _csv(header_cols, rows, args, extra_header=()):
    lines = ["# convention: %s" % args.convention]
    lines.extend(extra_header)
    lines.append(",".join(header_cols))
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------


def cmd_validate(args):
    config = _load_config(args)
    try:
        spec = _load_spec(config)
    except (KeyError, TypeError) as exc:
        raise ConfigError("malformed spec document: %s" % exc)
    try:
        report = validate_constraints(spec, tol=args.tol)
    except ConstraintViolation as exc:
        raise ConfigError(str(exc))
    payload = {"convention": args.convention}
    payload.update(report.to_dict())
    names = ("mass_shell[0]", "mass_shell[1]",
             "orthogonality[0]", "orthogonality[1]")
    residuals = report.mass_shell_residuals + report.orthogonality_residuals
    payload["violated"] = [n for n, r in zip(names, residuals)
                           if r > report.tolerance]
    _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print("validate: %s (worst residual %.3e, tolerance %.3e)"
          % ("pass" if report.passed else
             "FAIL %s" % ",".join(payload["violated"]),
             report.worst(), report.tolerance))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_evolve(args):
    config = _load_config(args)
    spec = _load_spec(config)
    n_sites = int(config.get("n_sites", 256))
    dx = float(config.get("dx", 1.0))
    dt = float(config.get("dt", config.get("dt_factor", 0.5) * dx))
    n_steps = int(config.get("n_steps", 10000))
    sample_every = int(config.get("sample_every", max(1, n_steps // 100)))
    energy_tol = float(config.get("energy_tol", 1e-6))
    charge_tol = float(config.get("charge_tol", 1e-8))
    factor = _convention_factor(args)

    state = init_from_plane_wave(spec, n_sites, dx, dt)
    samples = run(state, n_steps, sample_every)
    q0 = np.array(samples[0]["charges"])
    qscale = np.maximum(np.abs(q0), 1e-30)

    rows = []
    worst_energy = 0.0
    worst_charge = 0.0
    for s in samples:
        drift = s["energy_drift_rel"]
        worst_energy = max(worst_energy, drift)
        qdrift = np.max(np.abs(np.array(s["charges"]) - q0) / qscale)
        worst_charge = max(worst_charge, float(qdrift))
        rows.append([_fmt(s["time"]), _fmt(factor * s["energy"])]
                    + [_fmt(c) for c in s["charges"]] + [_fmt(drift)])
    text = _csv(["time", "energy", "charge1", "charge2", "charge3",
                 "charge4", "energy_drift_rel"], rows, args)
    _emit(args, text, default_stdout=args.out is None)
    passed = worst_energy <= energy_tol and worst_charge <= charge_tol
    print("evolve: %s (energy drift %.3e <= %.1e, charge drift %.3e <= %.1e)"
          % ("pass" if passed else "FAIL", worst_energy, energy_tol,
             worst_charge, charge_tol))
    return EXIT_OK if passed else EXIT_FAIL


def _spectrum_operators(fs, config, args):
    from .fock import charge2, charge4, hamiltonian2, hamiltonian4

    if fs.modes.scheme == "four":
        return hamiltonian4(fs), charge4(fs), _convention_factor(args)
    theta0 = config.get("Theta0")
    if theta0 is None:
        raise ConfigError("two-component spectrum needs 'Theta0'")
    # no 1/4 factor exists in the two-component operators; the convention
    # flag does not rescale them
    return hamiltonian2(fs, float(theta0)), charge2(fs, float(theta0)), 1.0


def cmd_spectrum(args):
    config = _load_config(args)
    table = _load_table(config)
    n_max = int(config.get("n_max", 1))
    fs = FockSpace(table, n_max)
    h, q, factor = _spectrum_operators(fs, config, args)

    hd = h.diagonal().real
    qd = q.diagonal().real
    # closed-form weighted occupation sums
    if fs.modes.scheme == "four":
        wh = np.array([0.25 * m.energy for m in fs.modes.modes])
        wq = np.array([0.25 * (1 if m.species == "a" else -1)
                       for m in fs.modes.modes])
    else:
        theta0 = float(config["Theta0"])
        trig = np.array([math.cos(theta0) ** 2 if m.index == 1
                         else math.sin(theta0) ** 2 for m in fs.modes.modes])
        wh = trig * np.array([m.energy for m in fs.modes.modes])
        wq = trig * np.array([1 if m.species == "a" else -1
                              for m in fs.modes.modes])
    occ = fs.occupations.astype(float)
    worst = max(float(np.max(np.abs(hd - occ @ wh))),
                float(np.max(np.abs(qd - occ @ wq))))
    from scipy import sparse
    for mat in (h, q):
        off = sparse.csr_matrix(mat - sparse.diags(mat.diagonal()))
        if off.nnz:
            worst = max(worst, float(np.max(np.abs(off.data))))
    comm = sparse.csr_matrix(h @ q - q @ h)
    if comm.nnz:
        worst = max(worst, float(np.max(np.abs(comm.data))))

    rows = []
    for i in range(fs.dim):
        occ = "-".join(str(n) for n in fs.occupations[i])
        rows.append([str(i), occ, _fmt(factor * hd[i]), _fmt(factor * qd[i])])
    text = _csv(["index", "occupations", "energy", "charge"], rows, args,
                extra_header=["# scheme: %s, n_max: %d, dim: %d"
                              % (fs.modes.scheme, n_max, fs.dim)])
    _emit(args, text, default_stdout=args.out is None)
    passed = worst <= args.tol
    print("spectrum: %s (dim %d, off-diagonal/commutator dev %.3e)"
          % ("pass" if passed else "FAIL", fs.dim, worst))
    return EXIT_OK if passed else EXIT_FAIL


def _grid_points(config):
    grid = config.get("grid", {})
    axes = []
    defaults = {"t": (0.0, 2.0, 10), "x1": (-1.0, 1.0, 10),
                "x2": (-1.0, 1.0, 5), "x3": (0.0, 1.0, 2)}
    for name in ("t", "x1", "x2", "x3"):
        lo, hi, n = grid.get(name, defaults[name])
        n = int(n)
        if n < 1:
            raise ConfigError("grid axis %s needs >= 1 points" % name)
        axes.append(np.linspace(float(lo), float(hi), n))
    pts = [FourVector(t, a, b, c)
           for t in axes[0] for a in axes[1] for b in axes[2] for c in axes[3]]
    return pts


def cmd_reconstruct(args):
    config = _load_config(args)
    spec = _load_spec(config)
    variant = int(config.get("variant", 1))
    if variant not in (1, 2, 3, 4):
        raise ConfigError("variant must be 1..4")
    n_max = int(config.get("n_max", 1))
    fs = FockSpace(four_component_table(spec), n_max)
    reconstruct = Reconstructor(fs, spec, variant)
    points = _grid_points(config)
    scale = 1.0 / math.sqrt(TWO_PI_CUBED)

    rows = []
    worst = 0.0
    for x in points:
        got = reconstruct(x)
        want = scale * variant_wave(spec, x, variant)
        dev = max(abs(u - v) for u, v in
                  zip(got.components(), want.components()))
        worst = max(worst, dev)
        rows.append([_fmt(v) for v in x.components()]
                    + [_fmt(v) for v in want.components()]
                    + [_fmt(v) for v in got.components()]
                    + [_fmt(dev)])
    tol = args.tol if args.tol_set else 1e-10
    text = _csv(["t", "x1", "x2", "x3",
                 "cl_w", "cl_x", "cl_y", "cl_z",
                 "rc_w", "rc_x", "rc_y", "rc_z", "deviation"],
                rows, args,
                extra_header=["# variant: %d, points: %d"
                              % (variant, len(points))])
    _emit(args, text, default_stdout=args.out is None)
    passed = worst <= tol
    print("reconstruct: %s (variant %d, %d points, max deviation %.3e)"
          % ("pass" if passed else "FAIL", variant, len(points), worst))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_associator(args):
    config = _load_config(args, required=False)
    same_index = bool(config.get("same_index", True))
    try:
        trace = verify_associator_chain(same_index=same_index)
        ladder = {}
        for which in ("a_adag", "a_bdag", "adag_a"):
            expr, ltrace = ladder_associator_check(which, with_trace=True)
            ladder[which] = ltrace.to_json()
        numeric = ladder_matrix_associator()
    except ChainBroken as exc:
        print("associator: FAIL (%s)" % exc)
        return EXIT_FAIL
    print(trace.render_text())
    print("ladder associators: all 0; quaternion-matrix cross-check: %.1g"
          % numeric)
    payload = {
        "convention": args.convention,
        "chain": trace.to_json(),
        "ladder": ladder,
        "matrix_cross_check_max_abs": numeric,
    }
    _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n",
          default_stdout=False)
    return EXIT_OK if numeric == 0.0 else EXIT_FAIL


def cmd_fock_check(args):
    config = _load_config(args)
    table = _load_table(config)
    if config.get("symmetrize", False):
        table = reflection_symmetric(table)
    n_max = int(config.get("n_max", 3))
    fs = FockSpace(table, n_max)
    ladder = ladder_ccr_report(fs, tol=args.tol)

    if "points" in config:
        pts = [FourVector(*[float(v) for v in p]) for p in config["points"]]
        if len(pts) != 2 or pts[0].t != pts[1].t:
            raise ConfigError("'points' must be two equal-time points")
        x, y = pts
    else:
        rng = np.random.default_rng(args.seed)
        t = float(rng.uniform(-1, 1))
        x = FourVector(t, *rng.uniform(-1, 1, size=3))
        y = x if not config.get("symmetrize", False) \
            else FourVector(t, *rng.uniform(-1, 1, size=3))
    fields_report = field_ccr_report(fs, x, y, tol=args.tol)

    passed = ladder["passed"] and fields_report["passed"]
    payload = {
        "convention": args.convention,
        "scheme": table.scheme,
        "n_modes": len(table),
        "n_max": n_max,
        "dim": fs.dim,
        "points": [list(x.components()), list(y.components())],
        "ladder_ccr": ladder,
        "field_ccr": fields_report,
        "passed": passed,
    }
    _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print("fock-check: %s (dim %d; ladder same-mode dev %.3e, "
          "field worst dev %.3e)"
          % ("pass" if passed else "FAIL", fs.dim,
             ladder["same_mode_identity_dev"],
             max(v for k, v in fields_report.items() if k != "passed")))
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quatfield",
        description="checks for the quaternionic scalar field at desk scale")
    sub = parser.add_subparsers(dest="command", required=True)
    handlers = {
        "validate": (cmd_validate, "check plane-wave constraints"),
        "evolve": (cmd_evolve, "lattice evolution with conservation checks"),
        "spectrum": (cmd_spectrum, "energy/charge eigenvalues on a basis"),
        "reconstruct": (cmd_reconstruct,
                        "compare quantized and classical waves"),
        "associator": (cmd_associator, "print the associator proof trace"),
        "fock-check": (cmd_fock_check, "canonical commutator test matrix"),
    }
    for name, (handler, help_text) in handlers.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config path")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance override")
        p.add_argument("--convention", choices=("paper", "rescaled"),
                       default="paper",
                       help="handling of the literal 1/4 factors")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized checks")
        p.set_defaults(handler=handler)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.tol_set = args.tol is not None
    if args.tol is None:
        args.tol = 1e-12
    elif args.tol <= 0:
        parser.error("--tol must be positive")
    try:
        return args.handler(args)
    except ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except (ChainBroken,) as exc:
        print("check failed: %s" % exc, file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
