"""Command-line entry point: fig12, fig3, transition and verify."""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..config.schema import SweepConfig
from ..config.settings import ConfigError, load_config, resolve_threads
from ..errors import DecoherenceError
from .commands import CommandCategory, CommandDefinition, CommandRegistry
from .csv_writer import write_gnuplot_stub
from .output import OutputFormatter
from .sweeps import run_fig12_sweep, run_fig3_sweep
from .transition import boundary_path, run_transition_scan
from .verify import run_verify

logger = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3
EXIT_NUMERIC = 4

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


@dataclass
class RunContext:
    config: SweepConfig
    seed: int
    out: Optional[Path]
    threads: int
    gnuplot: bool
    output: OutputFormatter


def _fig12(ctx: RunContext) -> int:
    cfg = ctx.config.fig12
    out = ctx.out or Path(cfg.output)
    rows = run_fig12_sweep(cfg, ctx.seed, out, ctx.threads)
    if ctx.gnuplot:
        write_gnuplot_stub(out, "b0_over_B0", ["rate1_norm", "rate2_norm"], log_x=True)
    ctx.output.print_success(f"fig12: {len(rows)} rows ({cfg.family}) -> {out}")
    return EXIT_OK


def _fig3(ctx: RunContext) -> int:
    cfg = ctx.config.fig3
    out = ctx.out or Path(cfg.output)
    rows = run_fig3_sweep(cfg, ctx.seed, out, ctx.threads)
    if ctx.gnuplot:
        write_gnuplot_stub(out, "r", ["rate1_norm", "rate2_norm"])
    missing = sum(1 for row in rows if row.damping_class == "no_survivors")
    if missing:
        ctx.output.print_warning(f"fig3: {missing} points had no surviving modes")
    ctx.output.print_success(f"fig3: {len(rows)} rows -> {out}")
    return EXIT_OK


def _transition(ctx: RunContext) -> int:
    cfg = ctx.config.transition
    out = ctx.out or Path(cfg.output)
    records, boundaries = run_transition_scan(cfg, out, ctx.threads)
    ctx.output.print_section("Transition boundary")
    ctx.output.print_stats({
        f"b0/B0 = {b.b0_over_B0:g}": "none in range" if b.anisotropy is None
        else f"anisotropy {b.anisotropy:.10g} (residual {b.discriminant_residual:.2e})"
        for b in boundaries
    })
    ctx.output.print_success(f"transition: {len(records)} rows -> {out}, boundary -> {boundary_path(out)}")
    return EXIT_OK


def _verify(ctx: RunContext) -> int:
    cfg = ctx.config.verify
    out = ctx.out or Path(cfg.output)
    report = run_verify(cfg, ctx.seed, out, ctx.threads)

    ctx.output.print_title("Verification")
    for check in report.checks:
        if check.passed:
            ctx.output.print_success(check.describe())
        else:
            ctx.output.print_failure(check.describe())

    if report.passed:
        ctx.output.print_success(f"all {len(report.checks)} checks passed; report -> {out}")
        return EXIT_OK
    ctx.output.print_error(f"{len(report.failures)} of {len(report.checks)} checks failed; report -> {out}")
    return EXIT_VERIFY


def build_registry() -> CommandRegistry:
    registry = CommandRegistry()
    registry.register(CommandDefinition(
        name="fig12",
        description="Exact T1/T2 versus field ratio for ring or sphere noise",
        category=CommandCategory.FIGURES,
        handler=_fig12,
        usage="fig12 [--config PATH] [--out PATH]",
        examples=["fig12 --config config/figures/fig1a.yaml", "fig12 --out fig2.csv --gnuplot"],
    ))
    registry.register(CommandDefinition(
        name="fig3",
        description="Correlated-noise rates versus the s/p-wave mixing r",
        category=CommandCategory.FIGURES,
        handler=_fig3,
        usage="fig3 [--config PATH] [--out PATH]",
        examples=["fig3 --config config/figures/fig3.yaml"],
    ))
    registry.register(CommandDefinition(
        name="transition",
        description="Anisotropy scan and bisected overdamped boundary",
        category=CommandCategory.ANALYSIS,
        handler=_transition,
        aliases=["scan"],
        usage="transition [--config PATH] [--out PATH]",
        examples=["transition --config config/figures/transition.yaml"],
    ))
    registry.register(CommandDefinition(
        name="verify",
        description="Run every oracle against the exact solvers",
        category=CommandCategory.CHECKS,
        handler=_verify,
        aliases=["check"],
        usage="verify [--config PATH] [--seed N] [--threads N]",
        examples=["verify", "verify --config config/figures/verify_negative.yaml"],
    ))
    return registry


def build_parser(registry: CommandRegistry) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML config file (default config/decoherence.yaml)")
    common.add_argument("--out", type=Path, help="CSV output path (overrides the config)")
    common.add_argument("--seed", type=int, help="Master seed (overrides the config)")
    common.add_argument("--threads", type=int, help="Worker threads, 0 = one per CPU (falls back to DECOTM_THREADS)")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    common.add_argument("--gnuplot", action="store_true", help="Also write a gnuplot script next to the CSV")

    parser = argparse.ArgumentParser(
        prog="decotm",
        description="Transfer-matrix decoherence rates for a qubit in piecewise-constant random fields",
        epilog=registry.format_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for cmd in registry.commands.values():
        subparsers.add_parser(
            cmd.name,
            aliases=cmd.aliases,
            parents=[common],
            help=cmd.description,
            description=registry.format_help(cmd.name),
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """
    Parse arguments, load the config and run one subcommand.

    Returns:
        Exit status: 0 ok, 2 config error, 3 verification failure, 4 numerical breach
    """
    registry = build_registry()
    args = build_parser(registry).parse_args(argv)

    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)
    output = OutputFormatter()

    try:
        config = load_config(args.config).validate()
        if args.seed is not None and args.seed < 0:
            raise ConfigError(f"--seed must be non-negative, got {args.seed}")
        if args.threads is not None and args.threads < 0:
            raise ConfigError(f"--threads must be non-negative, got {args.threads}")

        if args.verbose or config.debug:
            logging.getLogger().setLevel(logging.DEBUG)

        ctx = RunContext(
            config=config,
            seed=args.seed if args.seed is not None else config.seed,
            out=args.out,
            threads=resolve_threads(args.threads, config.threads),
            gnuplot=args.gnuplot,
            output=output,
        )
        command = registry.get_command(args.command)
        logger.info(f"Running {command.name} with seed {ctx.seed} on {ctx.threads or 'auto'} threads")
        return command.handler(ctx)

    except ConfigError as e:
        output.print_error(str(e))
        return EXIT_CONFIG
    except DecoherenceError as e:
        logger.error(f"{type(e).__name__}: {e}")
        output.print_error(f"numerical invariant breached: {e}")
        return EXIT_NUMERIC
