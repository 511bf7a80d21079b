"""Command-line front end: ``spread-spectra <command> ...``.

Exit codes: 0 success, 1 usage error, 2 invalid or missing scenario,
3 the results contain Undetermined verdicts and ``--strict`` was given.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

from . import report
from .analysis import Budget, GridSpec, Status, classify_model, grid_classify, model_region
from .errors import BadGrid, ModelError, OutsideInterior, ScenarioError, SpreadSpectraError
from .matrixlab import finite_lab_run, residual_report, truncate_model
from .scenario import Scenario, parse_complex, parse_scenario

EXIT_OK, EXIT_USAGE, EXIT_SCENARIO, EXIT_UNDETERMINED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load(path: str) -> Scenario:
    try:
        text = Path(path).read_bytes()
    except OSError as e:
        raise ScenarioError(f"cannot read scenario {path}: {e.strerror}") from None
    return parse_scenario(text)


def _budget(args, scenario: Scenario | None) -> Budget:
    base = scenario.budget if scenario is not None and scenario.budget is not None else Budget()
    env = os.environ.get("SPREAD_SPECTRA_BUDGET")
    n_max = base.n_max
    if env:
        n_max = Budget.from_env().n_max
    if getattr(args, "nmax", None) is not None:
        n_max = args.nmax
    return Budget(n_max=n_max, precision=base.precision)


def _out(args, scenario: Scenario | None, suffix: str) -> Path:
    if args.out:
        return Path(args.out)
    stem = scenario.name if scenario is not None else "finlab"
    return Path(args.outdir) / f"{stem}_{suffix}.csv"


def _lambda(args) -> complex:
    if args.lam is not None:
        if args.modulus is not None or args.phase is not None:
            raise UsageError("give either --lambda or --modulus/--phase, not both")
        try:
            return parse_complex(args.lam)
        except ValueError as e:
            raise UsageError(str(e)) from None
    if args.modulus is None:
        raise UsageError("a lambda is required: --lambda a+bi or --modulus r [--phase t]")
    phase = args.phase or 0.0
    return complex(args.modulus * math.cos(phase), args.modulus * math.sin(phase))


def _cmd_region(args) -> int:
    sc = _load(args.scenario)
    rep = model_region(sc.model(), _budget(args, sc))
    out = _out(args, sc, "region")
    report.write_text(out, report.region_csv(rep))
    points = out.with_name(out.stem + "_points.csv")
    report.write_text(points, report.points_csv(rep))
    written = [out, points]
    if args.svg:
        written.append(report.write_text(args.svg, report.region_svg(rep)))
    for i, reg in enumerate(rep.shift_regions):
        state = "empty" if reg.empty else f"[{reg.inner_radius!r}, {reg.outer_radius!r}] closed=({reg.inner_closed}, {reg.outer_closed})"
        print(f"channel {i}: {state}")
    for z in rep.discrete_points:
        print(f"point: {z.real!r}{z.imag:+}i")
    print("wrote " + ", ".join(map(str, written)))
    undetermined = any(reg.inner_closed is None or reg.outer_closed is None for reg in rep.shift_regions)
    return EXIT_UNDETERMINED if args.strict and undetermined else EXIT_OK


def _cmd_grid(args) -> int:
    sc = _load(args.scenario)
    model = sc.model()
    try:
        spec = GridSpec(args.rmin, args.rmax, args.nr, args.ntheta)
    except BadGrid as e:
        raise UsageError(str(e)) from None
    budget = _budget(args, sc)
    if args.jobs > 1:
        with ThreadPoolExecutor(args.jobs) as ex:
            result = grid_classify(model, spec, budget, ex)
    else:
        result = grid_classify(model, spec, budget)
    out = _out(args, sc, "grid")
    report.write_text(out, report.grid_csv(result))
    written = [out]
    if args.svg:
        written.append(report.write_text(args.svg, report.region_svg(model_region(model, budget), result)))
    counts = result.counts
    print(" ".join(f"{s.value}={counts[s]}" for s in Status))
    print("wrote " + ", ".join(map(str, written)))
    return EXIT_UNDETERMINED if args.strict and counts[Status.UNDETERMINED] else EXIT_OK


def _cmd_verify(args) -> int:
    sc = _load(args.scenario)
    lam = _lambda(args)
    verdict = classify_model(sc.model(), lam, _budget(args, sc))
    print(verdict)
    return EXIT_UNDETERMINED if args.strict and verdict.status is Status.UNDETERMINED else EXIT_OK


def _cmd_truncate(args) -> int:
    sc = _load(args.scenario)
    model = sc.model()
    matrix = truncate_model(model, args.blocks, args.channels)
    out = _out(args, sc, "matrix")
    report.write_text(out, matrix.to_csv())
    written = [out]
    channel = model.channels[0]
    if args.lam is not None or args.modulus is not None:
        lam = _lambda(args)
    else:
        lam = complex(math.sqrt(channel.forward_limit * channel.backward_limit))
    levels = args.levels or list(range(max(1, args.blocks // 2), args.blocks + 1))
    try:
        res = residual_report(channel, lam, levels)
    except OutsideInterior as e:
        print(f"residual report skipped: {e}", file=sys.stderr)
        res = None
    if res is not None:
        rpath = out.with_name(out.stem.replace("_matrix", "") + "_residual.csv")
        report.write_text(rpath, report.residual_csv(res))
        written.append(rpath)
    print(f"dimension {matrix.dim}, {len(matrix.triplets())} nonzero entries")
    print("wrote " + ", ".join(map(str, written)))
    return EXIT_OK


def _cmd_finlab(args) -> int:
    l1, l2 = args.lambda1, args.lambda2
    if args.scenario:
        sc = _load(args.scenario)
        l1, l2 = sc.spec.lambda1, sc.spec.lambda2
    if l1 is None or l2 is None:
        raise UsageError("finlab needs --lambda1 and --lambda2 (or a scenario with both)")
    rep = finite_lab_run(args.dim, l1, l2, (args.d1, args.d2), args.trials, args.seed)
    out = Path(args.out) if args.out else Path(args.outdir) / "finlab.csv"
    report.write_text(out, report.finlab_csv(rep))
    print(f"trials={rep.trials} max_excess={rep.max_modulus_excess!r} "
          f"containment_violations={rep.containment_violations} "
          f"boundary_violations={rep.boundary_count_violations} positivity_violations={rep.positivity_violations}")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_plot(args) -> int:
    regions = report.read_region_csv(args.region) if args.region else []
    points = report.read_points_csv(args.points) if args.points else []
    grid = report.read_grid_csv(args.grid) if args.grid else []
    if not (regions or points or grid):
        raise UsageError("plot needs at least one of --region, --points, --grid")
    report.write_text(args.out, report.render_svg(regions, points, grid))
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spread-spectra", description="Point spectra of weighted shift models.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def common(sp, scenario_required=True):
        sp.add_argument("--scenario", required=scenario_required, help="scenario JSON file")
        sp.add_argument("--out", help="output CSV path")
        sp.add_argument("--outdir", default=".", help="directory for default output names")
        sp.add_argument("--nmax", type=int, help="term budget per one-sided sum")
        sp.add_argument("--strict", action="store_true", help="exit 3 if anything is Undetermined")

    def lam_flags(sp):
        sp.add_argument("--lambda", dest="lam", help="complex point, e.g. 1.5+0i")
        sp.add_argument("--modulus", type=float)
        sp.add_argument("--phase", type=float, help="radians")

    sp = sub.add_parser("region", help="predicted point-spectrum regions")
    common(sp)
    sp.add_argument("--svg", help="also render the regions to this SVG")
    sp.set_defaults(func=_cmd_region)

    sp = sub.add_parser("grid", help="classify a polar grid")
    common(sp)
    sp.add_argument("--rmin", type=float, required=True)
    sp.add_argument("--rmax", type=float, required=True)
    sp.add_argument("--nr", type=int, required=True)
    sp.add_argument("--ntheta", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--svg", help="also render regions and grid to this SVG")
    sp.set_defaults(func=_cmd_grid)

    sp = sub.add_parser("verify", help="classify one point")
    common(sp)
    lam_flags(sp)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("truncate", help="finite section matrix and residual decay")
    common(sp)
    sp.add_argument("--blocks", type=int, required=True, help="N: keep indices |n| <= N")
    sp.add_argument("--channels", type=int, default=1, help="K: number of channels")
    sp.add_argument("--levels", type=lambda s: [int(x) for x in s.split(",")], help="comma-separated N values")
    lam_flags(sp)
    sp.set_defaults(func=_cmd_truncate)

    sp = sub.add_parser("finlab", help="random finite U*A experiments")
    common(sp, scenario_required=False)
    sp.add_argument("--dim", type=int, default=24)
    sp.add_argument("--lambda1", type=float)
    sp.add_argument("--lambda2", type=float)
    sp.add_argument("--d1", type=int, default=2)
    sp.add_argument("--d2", type=int, default=3)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=42)
    sp.set_defaults(func=_cmd_finlab)

    sp = sub.add_parser("plot", help="SVG from region/points/grid CSVs")
    sp.add_argument("--region")
    sp.add_argument("--points")
    sp.add_argument("--grid")
    sp.add_argument("--out", required=True, help="SVG path")
    sp.set_defaults(func=_cmd_plot)
    return p


def run_command(argv: Sequence[str]) -> int:
    try:
        args = build_parser().parse_args(list(argv))
        return args.func(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (ScenarioError, ModelError) as e:
        print(f"invalid scenario: {e}", file=sys.stderr)
        return EXIT_SCENARIO
    except (SpreadSpectraError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))
