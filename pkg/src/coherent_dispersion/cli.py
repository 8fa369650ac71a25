"""Command-line front end.

Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, load_config, parse_quantity
from .constants import C_LIGHT, RB87_D2_WAVELENGTH
from .lambda_analytic import (
    LambdaParams,
    center_dispersion,
    extrema_offsets,
    n_lambda,
    optimal_rabi_squared,
    optimal_saturation,
    peak_index_change,
)
from .optics import Spectrum, dispersion_report, group_velocity, phase_shift
from .sweeps import intensity_scan, saturation_scan, spectrum_scan, write_saturation, write_sidecar, write_spectrum
from .system import build_generator, dump_generator_csv
from .validation import ORACLE_RTOL, run_oracle_suite

__all__ = ["main", "run", "build_parser"]

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; that code is reserved for numerical failures
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="coherent-dispersion", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def config_cmd(name, help):
        s = sub.add_parser(name, help=help)
        s.add_argument("--config", required=True, help="JSON run configuration")
        s.add_argument("--output", help="output directory (overrides the config)")
        s.add_argument("--workers", type=int, help="worker processes (overrides the config)")
        return s

    s = config_cmd("spectrum", "offset scan of chi, n, alpha and D")
    s.add_argument("--dump-generator", metavar="CSV", help="write the drive-dressed generator as sparse CSV")
    config_cmd("saturation", "D(0) versus drive saturation")
    config_cmd("kerr", "index versus drive intensity with a Kerr fit")

    a = sub.add_parser("analytic", help="ideal Lambda-scheme curves and optima")
    a.add_argument("--gamma-ratio", type=float, default=1e-3, help="gamma/Gamma")
    a.add_argument("--saturation", type=float, help="drive saturation for the spectrum (default: optimum)")
    a.add_argument("--density", default="1e16 m^-3")
    a.add_argument("--wavelength", default="780.241209686 nm")
    a.add_argument("--report-optimum", action="store_true", help="print the optimal drive")
    a.add_argument("--output", help="directory for analytic_center.csv and analytic_spectrum.csv")

    g = sub.add_parser("groupvelocity", help="group velocity from a spectrum file or from n and D")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--spectrum", help="spectrum CSV written by the spectrum command")
    src.add_argument("--dispersion", help="D = dn/dnu with units, e.g. '-6e-11 1/Hz'")
    g.add_argument("--n", type=float, default=1.0, help="refractive index (with --dispersion)")
    g.add_argument("--wavelength", help="optical wavelength with units (default: Rb D2 or the sidecar)")
    g.add_argument("--cell-length", default="5 cm")

    v = sub.add_parser("validate", help="frequency-domain versus time-domain oracle suite")
    v.add_argument("--quick", action="store_true", help="two points per transition instead of ten")
    v.add_argument("--gamma-ratio", type=float, default=0.1)
    return p


def _load(args):
    rc = load_config(args.config, args.command)
    plan = rc.plan
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigError("--workers: must be a positive integer")
        plan = plan.replace(workers=args.workers)
    out = Path(args.output) if args.output else rc.output
    out.mkdir(parents=True, exist_ok=True)
    return rc, plan, out


def _cmd_spectrum(args):
    rc, plan, out = _load(args)
    if args.dump_generator:
        dump_generator_csv(build_generator(plan.scheme, plan.drive()), args.dump_generator)
    spec = spectrum_scan(plan)
    csv, side = write_spectrum(spec, out / "spectrum.csv", rc.resolved)
    rep = dispersion_report(spec, plan.scheme, rc.cell_length)
    print(f"wrote {csv} and {side}")
    print(f"D(0) = {rep.D0:.6e} 1/Hz ({'anomalous' if rep.D0 < 0 else 'normal'})")
    vg = "divergent" if rep.Vg.divergent else f"{rep.Vg.in_units_of_c:.6e} c"
    print(f"V_g = {vg}")
    print(f"peak-to-peak n = {rep.delta_n_pp:.6e} at offsets {rep.extrema_offsets[0]:.6g} Hz, {rep.extrema_offsets[1]:.6g} Hz")
    print(f"phase swing over {rc.cell_length:g} m = {rep.phase_shift:.6e} rad")


def _cmd_saturation(args):
    rc, plan, out = _load(args)
    pts = saturation_scan(plan)
    csv, side = write_saturation(pts, plan, out / "saturation.csv", rc.resolved)
    print(f"wrote {csv} and {side}")
    for p in pts:
        print(f"S = {p.S:.4e}  D(0) = {p.D0: .6e} 1/Hz")


def _cmd_kerr(args):
    rc, plan, out = _load(args)
    fit, samples = intensity_scan(plan, rc.delta_eval)
    path = out / "kerr.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("intensity_w_per_m2,rabi_over_gamma,n_minus_1,alpha_per_m\n")
        for s in samples:
            fh.write(f"{s.intensity:.17g},{s.rabi:.17g},{s.n_minus_1:.17g},{s.alpha:.17g}\n")
    meta = dict(
        plan.describe(),
        kind="kerr",
        delta_eval_over_Gamma=rc.delta_eval,
        fit={"n1_minus_1": fit.n1 - 1, "n2_m2_per_W": fit.n2, "relative_residual": fit.relative_residual},
    )
    side = write_sidecar(path.with_suffix(".json"), meta, rc.resolved)
    print(f"wrote {path} and {side}")
    print(f"n1 - 1 = {fit.n1 - 1:.6e}")
    print(f"n2 = {fit.n2_cm2_per_W:.6e} cm^2/W")
    print(f"relative residual = {fit.relative_residual:.3e}")


def _cmd_analytic(args):
    g = args.gamma_ratio
    N = parse_quantity(args.density, "density", "--density")
    lam = parse_quantity(args.wavelength, "length", "--wavelength")
    try:
        base = LambdaParams(0.0, gamma=g, wavelength=lam, N=N)
    except ValueError as exc:
        raise ConfigError(f"--gamma-ratio: {exc}") from None
    w2opt = optimal_rabi_squared(base)
    if args.report_optimum:
        print(f"S_opt = {optimal_saturation(base):.6g}")
        print(f"Omega^2_opt = {w2opt:.6g} Gamma^2 (Gamma gamma / 2)")
        print(f"D(0)_max = {center_dispersion(base.with_rabi_squared(w2opt)):.6e} per unit Gamma")
    S = 2 * w2opt if args.saturation is None else args.saturation
    if S < 0:
        raise ConfigError("--saturation: must be non-negative")
    p = base.with_rabi_squared(S / 2)
    lo, hi = extrema_offsets(p)
    print(f"S = {S:.6g}: extrema at delta = {lo:.6g}, {hi:.6g} Gamma; max |n - 1| = {peak_index_change(p):.6e}")
    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        w2 = np.logspace(np.log10(g) - 4, np.log10(g) + 4, 161)
        with open(out / "analytic_center.csv", "w", encoding="utf-8", newline="") as fh:
            fh.write("omega2_over_gamma2,saturation,d0_per_gamma\n")
            for x in w2:
                fh.write(f"{x:.17g},{2 * x:.17g},{center_dispersion(base.with_rabi_squared(x)):.17g}\n")
        d = np.linspace(3 * lo, 3 * hi, 601) if hi > 0 else np.linspace(-1, 1, 601)
        with open(out / "analytic_spectrum.csv", "w", encoding="utf-8", newline="") as fh:
            fh.write("delta_over_Gamma,n_minus_1\n")
            for x, n in zip(d, n_lambda(p, d) - 1):
                fh.write(f"{x:.17g},{n:.17g}\n")
        print(f"wrote {out / 'analytic_center.csv'} and {out / 'analytic_spectrum.csv'}")


def _cmd_groupvelocity(args):
    cell = parse_quantity(args.cell_length, "length", "--cell-length")
    if args.spectrum:
        path = Path(args.spectrum)
        if not path.exists():
            raise ConfigError(f"--spectrum: {path} not found")
        try:
            spec = Spectrum.from_csv(path)
        except ValueError as exc:
            raise ConfigError(f"--spectrum: {exc}") from None
        lam = RB87_D2_WAVELENGTH
        side = path.with_suffix(".json")
        if args.wavelength:
            lam = parse_quantity(args.wavelength, "length", "--wavelength")
        elif side.exists():
            lam = json.loads(side.read_text())["parameters"]["scheme"]["wavelength_m"]
        n, D = 1 + spec.at_zero("n_minus_1"), spec.at_zero("D")
    else:
        D = parse_quantity(args.dispersion, "dispersion", "--dispersion")
        n = args.n
        lam = parse_quantity(args.wavelength, "length", "--wavelength") if args.wavelength else RB87_D2_WAVELENGTH
    nu = C_LIGHT / lam
    vg = group_velocity(n, nu, D)
    print(f"n = {n:.12g}, D = {D:.6e} 1/Hz, nu = {nu:.9e} Hz, nu D = {nu * D:.6e}")
    if vg.divergent:
        print(f"V_g divergent: |n + nu D| = {abs(vg.denominator):.3e} below threshold")
    else:
        print(f"V_g = {vg.value:.6e} m/s = c/{1 / vg.in_units_of_c:.6g}")
    print(f"phase l (n - 1) omega / c over {cell:g} m = {float(phase_shift(n, cell, 2 * np.pi * nu)):.6e} rad")


def _cmd_validate(args):
    def show(c):
        status = "ok" if c.passed() else "FAIL"
        print(
            f"Fg={c.Fg:g} Fe={c.Fe:g} S={c.S:g} delta={c.delta:+.4g} Gamma: rel err {c.rel_error:.2e} {status}",
            flush=True,
        )

    res = run_oracle_suite(gamma=args.gamma_ratio, quick=args.quick, progress=show)
    bad = [c for c in res if not c.passed()]
    print(f"{len(res) - len(bad)}/{len(res)} comparisons within {ORACLE_RTOL:g}")
    return EXIT_NUMERICAL if bad else EXIT_OK


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "saturation": _cmd_saturation,
    "kerr": _cmd_kerr,
    "analytic": _cmd_analytic,
    "groupvelocity": _cmd_groupvelocity,
    "validate": _cmd_validate,
}


def run(argv=None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
        code = _COMMANDS[args.command](args)
    except (_UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK if code is None else code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
