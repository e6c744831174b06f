"""Command-line entry point.

    zenoport run    --preset fig2 --set n_measurements=0 --out runs
    zenoport sweep  --preset fig2 --out runs
    zenoport figure fig3 --out runs
    zenoport check

Progress goes to stderr; data only to files. Exit codes: 0 success,
1 physics-precondition failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import experiments
from .experiments import ConfigError, ExperimentSpec, apply_overrides
from .grid import make_grid, to_momentum, to_position
from .potential import GaussianPotential
from .state import Wavefunction, gaussian_packet, norm2
from .zeno import BoundaryLeakError, QzdConfig, make_window, project, qzd_run


def _log(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


def _load_spec(args) -> ExperimentSpec:
    if args.spec:
        doc = experiments.load_spec(args.spec).to_dict()
    else:
        name = args.preset or getattr(args, "figure", None) or "fig2"
        doc = experiments.preset(name).to_dict()
    overrides = [tuple(kv.split("=", 1)) for kv in args.set]
    if any(len(kv) != 2 for kv in overrides):
        raise ConfigError("overrides must look like KEY=VALUE")
    doc = apply_overrides(doc, overrides)
    if args.out:
        doc["output_dir"] = args.out
    return ExperimentSpec.from_dict(doc)


def cmd_run(args) -> int:
    spec = _load_spec(args)
    particle = spec.particles[0]
    n = int(spec.measurement["n_measurements"])
    record, row = experiments.execute_run(spec.to_dict(), particle, n)
    run_dir = os.path.join(spec.output_dir, spec.name, row["run"])
    experiments.write_run_dir(record, run_dir)
    experiments.write_experiment_index(os.path.join(spec.output_dir, spec.name),
                                       spec, [row])
    _log(args, f"run {row['run']}: survival={row['survival']:.5f} -> {run_dir}")
    return 0


def cmd_sweep(args) -> int:
    spec = _load_spec(args)
    particle = spec.particles[0]
    n_list = spec.measurement["n_list"]
    if not n_list:
        raise ConfigError("spec has no measurement.n_list to sweep")
    doc = spec.to_dict()
    argses = [(doc, particle, int(n), None, None, max(1, int(n) // 32))
              for n in n_list]
    results = experiments._pool_map(experiments.execute_run, argses, args.jobs)
    ex_dir = os.path.join(spec.output_dir, spec.name)
    rows = []
    for rec, row in results:
        experiments.write_run_dir(rec, os.path.join(ex_dir, row["run"]))
        rows.append(row)
        _log(args, f"N={row['n_measurements']:6d}  P={row['survival']:.5f}")
    experiments.write_experiment_index(ex_dir, spec, rows)
    return 0


def cmd_figure(args) -> int:
    spec = _load_spec(args) if (args.spec or args.set or args.out) else None
    result = experiments.run_figure(args.figure, spec, jobs=args.jobs)
    _log(args, f"figure {args.figure}: {len(result['rows'])} runs -> {result['dir']}")
    return 0


def _check_invariants() -> list[tuple[str, bool, float]]:
    rng = np.random.default_rng(7)
    g = make_grid(-40.0, 40.0, 256)
    V = GaussianPotential(v0=5.0, xp=8.0, kind="well")
    psi = gaussian_packet(g, 8.0, 1.5, 0.0)
    checks = []

    phat = to_momentum(psi)
    parseval = abs(norm2(phat) - norm2(psi))
    checks.append(("parseval", parseval <= 1e-12, parseval))

    rand = Wavefunction(g, rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n))
    back = to_position(to_momentum(rand))
    rt = float(np.max(np.abs(back.amplitudes - rand.amplitudes))
               / np.max(np.abs(rand.amplitudes)))
    checks.append(("transform_roundtrip", rt <= 1e-12, rt))

    cfg = QzdConfig(m=1.0, delta_v=2.0, horizon=2.0, n_measurements=64,
                    max_substep=0.01, record_flux_at=None)
    rec = qzd_run(psi, V, cfg)
    # norm may change only at projections; between them evolution is unitary
    deltas = np.abs(np.diff(rec.norm_series))
    meas_idx = np.searchsorted(rec.sample_times, rec.times)
    unitary_steps = np.ones(len(deltas), dtype=bool)
    unitary_steps[meas_idx - 1] = False
    unit = float(deltas[unitary_steps].max())
    checks.append(("unitarity_per_step", unit <= 1e-12, unit))

    eq6 = abs(rec.survival[-1] - float(np.prod(rec.step_probabilities)))
    checks.append(("survival_product_identity", eq6 <= 1e-10, eq6))

    w = make_window(g, 1.0, 1.0)
    proj1, _ = project(to_momentum(psi), w)
    proj2, p2 = project(proj1, w)
    idem = float(np.max(np.abs(proj2.amplitudes - proj1.amplitudes)))
    checks.append(("projector_idempotent", idem == 0.0 and abs(p2 - 1.0) <= 1e-14, idem))

    # all-pass window: Zeno run degenerates to pure evolution at equal dt
    n_meas, horizon = 16, 2.0
    dt_meas = horizon / n_meas
    substeps = math.ceil(dt_meas / 0.05)
    cfg_all = QzdConfig(m=1.0, delta_v=1e6, horizon=horizon, n_measurements=n_meas,
                        max_substep=0.05, record_flux_at=None)
    cfg_pure = QzdConfig(m=1.0, delta_v=1.0, horizon=horizon, n_measurements=0,
                         max_substep=dt_meas / substeps, record_flux_at=None)
    rec_all = qzd_run(psi, V, cfg_all)
    rec_pure = qzd_run(psi, V, cfg_pure)
    allpass = float(np.max(np.abs(rec_all.final_state.amplitudes
                                  - rec_pure.final_state.amplitudes)))
    checks.append(("allpass_window_equivalence", allpass <= 1e-10, allpass))
    return checks


def cmd_check(args) -> int:
    failures = 0
    for name, ok, value in _check_invariants():
        status = "PASS" if ok else "FAIL"
        print(f"{status} {name} ({value:.3e})", file=sys.stderr)
        failures += 0 if ok else 1
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zenoport",
                                     description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--spec", help="path to a spec JSON document")
        p.add_argument("--preset", help="built-in preset name (default: fig2, "
                                        "or the figure being run)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a spec field (dotted path; repeatable)")
        p.add_argument("--out", help="output directory (overrides the spec)")
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                       help="parallel runs for sweeps and figures")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")

    p_run = sub.add_parser("run", help="execute a single Zeno run from a spec")
    add_common(p_run)
    p_run.set_defaults(fn=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run the spec's measurement-count sweep")
    add_common(p_sweep)
    p_sweep.set_defaults(fn=cmd_sweep)

    p_fig = sub.add_parser("figure", help="run a figure preset end to end")
    p_fig.add_argument("figure", choices=sorted(experiments.FIGURE_RUNNERS))
    add_common(p_fig)
    p_fig.set_defaults(fn=cmd_figure)

    p_check = sub.add_parser("check", help="run the fast invariant suite")
    p_check.add_argument("--quiet", action="store_true")
    p_check.set_defaults(fn=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, BoundaryLeakError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
