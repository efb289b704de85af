"""Command line entry point: ``wavecascade {run,eoc,sweep,presets}``."""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

from . import outputs
from .cases import GAMMAS, preset_table
from .config import ConfigError, SimulationConfig, parse_config, render_config
from .experiments import SWEEP_AXES, eoc_study, sweep
from .integrate import InstabilityError, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNSTABLE = 3
EXIT_IO = 4

logger = logging.getLogger("wavecascade")


def load_config(path: str) -> SimulationConfig:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_config(text)


def _out_dir(config: SimulationConfig, override: str | None) -> Path:
    return Path(override or config.out_dir) / config.label


def run_command(config: SimulationConfig, out: str | None = None) -> int:
    """Run one simulation and write moments.csv, snapshots.csv and report.txt."""
    target = _out_dir(config, out)
    text = render_config(config)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            result = run(config)
        except InstabilityError as exc:
            if exc.result is not None:
                _write_run(target, exc.result)
            outputs.atomic_write(target / "report.txt", outputs.report_text(text, exc.result, str(exc)))
            logger.error("%s", exc)
            return EXIT_UNSTABLE
    for w in caught:
        logger.warning("%s", w.message)
    _write_run(target, result)
    outputs.atomic_write(target / "report.txt", outputs.report_text(text, result))
    logger.info("wrote %s", target)
    return EXIT_OK


def _write_run(target: Path, result) -> None:
    outputs.write_csv(target / "moments.csv", outputs.MOMENT_COLUMNS, outputs.moments_rows(result))
    outputs.write_csv(target / "snapshots.csv", outputs.SNAPSHOT_COLUMNS, outputs.snapshot_rows(result))


def eoc_command(config: SimulationConfig, hs, fine_hs, h_star: float, out: str | None = None) -> int:
    """Grid-refinement study; writes eoc.csv."""
    target = _out_dir(config, out)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            rows = eoc_study(config, hs=hs, fine_hs=fine_hs, h_star=h_star)
        except InstabilityError as exc:
            outputs.atomic_write(target / "report.txt", outputs.report_text(render_config(config), None, str(exc)))
            logger.error("%s", exc)
            return EXIT_UNSTABLE
    outputs.write_csv(target / "eoc.csv", outputs.EOC_COLUMNS, rows)
    for r in rows:
        logger.info(
            "h=%g  p(three-grid)=%.4f  p(classical)=%.4f  p(fine)=%.4f",
            r["h"], r["p_paper_formula"], r["p_classical"], r["p_fine_grid"],
        )
    return EXIT_OK


def sweep_command(config: SimulationConfig, axis: str, values, window=None, out: str | None = None) -> int:
    """Parameter sweep; each variant gets its own subdirectory plus a combined decay_rates.csv."""
    target = _out_dir(config, out)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            rows, results = sweep(config, axis, values, window)
        except InstabilityError as exc:
            outputs.atomic_write(target / "report.txt", outputs.report_text(render_config(config), None, str(exc)))
            logger.error("%s", exc)
            return EXIT_UNSTABLE
    for cfg, result in results:
        sub = target / cfg.label
        _write_run(sub, result)
        outputs.atomic_write(sub / "report.txt", outputs.report_text(render_config(cfg), result))
    outputs.write_csv(target / "decay_rates.csv", outputs.DECAY_COLUMNS, rows)
    for r in rows:
        logger.info("%s=%g  decay exponent %.4f", axis, r["value"], r["decay_exponent"])
    return EXIT_OK


def presets_command() -> int:
    print(f"{'name':6} {'ic':7} {'R':>5} {'h':>5} {'dt':>8} {'T':>7}  gammas")
    for row in preset_table():
        gammas = ", ".join(f"{g:g}" for g in GAMMAS)
        print(f"{row['name']:6} {row['ic']:7} {row['R']:5g} {row['h']:5g} {row['dt']:8g} {row['T']:7g}  {gammas}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavecascade", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one simulation")
    p.add_argument("config", help="config file ('-' for stdin)")
    p.add_argument("--out", help="output root (overrides out.dir)")

    p = sub.add_parser("eoc", help="experimental order of convergence study")
    p.add_argument("config")
    p.add_argument("--h", type=float, nargs="+", default=[0.4, 0.3, 0.2], help="coarse spacings for h, h/2, h/4")
    p.add_argument("--fine-h", type=float, nargs="*", default=[0.2, 0.1], help="spacings compared with h*")
    p.add_argument("--h-star", type=float, default=1.0 / 80.0)
    p.add_argument("--out")

    p = sub.add_parser("sweep", help="vary R or gamma and fit decay exponents")
    p.add_argument("config")
    p.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p.add_argument("--values", type=float, nargs="+", required=True)
    p.add_argument("--window", type=float, nargs=2, metavar=("T_LO", "T_HI"))
    p.add_argument("--out")

    sub.add_parser("presets", help="list the built-in experiments")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "presets":
        return presets_command()
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if args.command == "run":
            return run_command(config, args.out)
        if args.command == "eoc":
            return eoc_command(config, args.h, args.fine_h, args.h_star, args.out)
        return sweep_command(config, args.axis, args.values, args.window, args.out)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
