"""
Fair Division Toolkit - Command Line Entry Point

Subcommands:
1. gen             - write a seeded random (or preset) bivalued instance
2. solve           - compute a WEFX or WEQX allocation with equilibrium prices
3. verify          - re-check a result file against named criteria
4. oracle          - brute-force fairness sets, PO and fPO checks
5. counterexample  - run the GM dynamic on the cycling instance
6. bench           - round counts on random instances against their bounds

Run as ``python -m src.main <command> ...``.
"""

import argparse
import json
import random
import sys
from enum import IntEnum
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .config import get_all_presets, get_preset_by_id, get_settings, preset_instance
from .exceptions import BudgetError, InstanceError, InternalError
from .models import InstanceFile, Instance, Metric, VerifyReport
from .services import core, verifier
from .services.bench import BenchTrial, run_bench, write_csv
from .services.generator import random_instance_file
from .services.gm_reference import GMCycleDetected, replay_cycle, run_gm, table1_instance, table1_owners
from .services.oracle import OracleBudget, is_fpo_lp, is_po_bruteforce, wefx_set, weqx_set
from .services.reallocation import solve
from .storage import (
    allocation_from_result,
    load_instance_file,
    load_result_file,
    result_to_file,
    save_instance_file,
    save_result_file,
)
from .utils import (
    format_rational,
    get_logger,
    parse_int_range,
    parse_owner_list,
    parse_rational,
    parse_rational_list,
    setup_logger,
)

# Initialize logger
logger = get_logger(__name__)


class ExitCode(IntEnum):
    OK = 0
    VERIFICATION_FAILED = 1
    INPUT_ERROR = 2
    INTERNAL_ERROR = 3
    BUDGET_ERROR = 4


class FairDivisionApp:
    """Command handlers; each returns an exit code."""

    def __init__(self, out=None):
        """
        Initialize the app.

        Args:
            out: Stream for JSON command output (default stdout)
        """
        self.settings = get_settings()
        self.out = out or sys.stdout

    def _resolve_out(self, out: str) -> Path:
        """Bare file names go to the configured data directory."""
        path = Path(out)
        if path.parent == Path("."):
            return Path(self.settings.data_dir) / path
        return path

    def _emit(self, payload) -> None:
        self.out.write(json.dumps(payload, indent=2) + "\n")

    def _emit_text(self, text: str) -> None:
        self.out.write(text + "\n")

    def _load_instance(self, path: Optional[str], preset_id: Optional[str]) -> Instance:
        if preset_id:
            if get_preset_by_id(preset_id) is None:
                raise InstanceError(f"Unknown preset: {preset_id}")
            return preset_instance(preset_id)
        if not path:
            raise InstanceError("either --input or --preset is required")
        return core.validate_instance(load_instance_file(path))

    # Commands

    def gen(self, args: argparse.Namespace) -> int:
        if args.preset:
            preset = get_preset_by_id(args.preset)
            if preset is None:
                raise InstanceError(f"Unknown preset: {args.preset}")
            doc = preset.to_instance_file()
        else:
            if args.agents is None or args.goods is None or args.k is None:
                raise InstanceError("gen needs --agents, --goods and --k (or --preset)")
            if args.agents < 1 or args.goods < 0:
                raise InstanceError("need at least one agent and a non-negative number of goods")
            seed = args.seed
            if seed is None:
                seed = random.SystemRandom().randrange(2**31)
                logger.info(f"Generated seed {seed}")
            k = _rational_arg(args.k)
            doc = random_instance_file(random.Random(seed), args.agents, args.goods, k, args.weights, seed=seed)
        # Rejects k <= 1 and anything else the solver would refuse
        core.validate_instance(doc)
        self._write_doc(doc, args.out)
        return ExitCode.OK

    def solve(self, args: argparse.Namespace) -> int:
        inst = self._load_instance(args.input, args.preset)
        mode = Metric.from_criterion(args.mode)

        owners = None
        if args.initial_owners:
            owners = parse_owner_list(args.initial_owners)
        elif args.preset:
            owners = get_preset_by_id(args.preset).owner_override  # type: ignore[union-attr]

        logger.info(f"Solving {mode.criterion} for n={inst.n} m={inst.m} k={format_rational(inst.k)}")
        result = solve(inst, mode, check_invariants=args.check_invariants, owner_override=owners)
        certificates = verifier.verify_criteria(
            inst, result.state.allocation(), result.state.prices, [mode.criterion, "equilibrium", "fpo-cert"]
        )
        doc = result_to_file(inst, result, certificates, include_trace=args.trace, owner_override=owners)
        if args.out:
            save_result_file(doc, self._resolve_out(args.out))
        else:
            self._emit_text(doc.model_dump_json(indent=2))
        return ExitCode.OK if certificates.passed else ExitCode.VERIFICATION_FAILED

    def verify(self, args: argparse.Namespace) -> int:
        inst = core.validate_instance(load_instance_file(args.input))
        doc = load_result_file(args.result)
        X, prices = allocation_from_result(inst, doc)
        criteria = [name.strip() for name in args.criteria.split(",") if name.strip()] if args.criteria else [
            doc.mode.criterion, "equilibrium", "fpo-cert"
        ]
        try:
            report = verifier.verify_criteria(inst, X, prices, criteria)
        except ValueError as e:
            raise InstanceError(str(e)) from e
        self._emit_text(report.model_dump_json(indent=2))
        logger.info(f"Verified {len(report.verdicts)} criteria, {len(report.failures())} failed")
        return ExitCode.OK if report.passed else ExitCode.VERIFICATION_FAILED

    def oracle(self, args: argparse.Namespace) -> int:
        inst = self._load_instance(args.input, args.preset)
        budget = OracleBudget(max_allocations=args.budget) if args.budget else OracleBudget()
        payload: dict = {}
        verdicts = []

        if args.list:
            found = wefx_set(inst, budget) if args.list == "wefx" else weqx_set(inst, budget)
            payload[args.list] = [
                {inst.agent_labels[i]: [inst.good_labels[e] for e in sorted(X.bundle(i))] for i in inst.agents()}
                for X in found
            ]
            logger.info(f"{len(found)} {args.list} allocations")
        if args.check_po:
            X, _ = allocation_from_result(inst, load_result_file(args.check_po))
            verdicts.append(is_po_bruteforce(inst, X, budget))
        if args.check_fpo:
            X, _ = allocation_from_result(inst, load_result_file(args.check_fpo))
            verdicts.append(is_fpo_lp(inst, X, budget))

        report = VerifyReport(verdicts=verdicts)
        payload["verdicts"] = report.model_dump(mode="json")["verdicts"]
        self._emit(payload)
        return ExitCode.OK if report.passed else ExitCode.VERIFICATION_FAILED

    def counterexample(self, args: argparse.Namespace) -> int:
        inst = table1_instance()
        outcome = run_gm(inst, args.max_rounds, owner_override=table1_owners())
        summary: dict = {"outcome": outcome.kind, "steps": outcome.steps}
        if isinstance(outcome, GMCycleDetected):
            replay = replay_cycle(inst, outcome.proof)
            summary.update({
                "t1": outcome.proof.t1,
                "t2": outcome.proof.t2,
                "scale": format_rational(outcome.proof.scale),
                "replay": replay.status.value,
            })
        summary["prices"] = [[format_rational(p) for p in prices] for prices in outcome.trace.price_history]
        self._emit(summary)
        if args.out:
            path = self._resolve_out(args.out)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(outcome.model_dump_json(indent=2) + "\n", encoding="utf-8")
            logger.info(f"Wrote GM trace to {path}")
        return ExitCode.OK if isinstance(outcome, GMCycleDetected) else ExitCode.VERIFICATION_FAILED

    def bench(self, args: argparse.Namespace) -> int:
        n_range = parse_int_range(args.n_range)
        m_range = parse_int_range(args.m_range)
        k_set = tuple(parse_rational_list(args.k_set))
        if not k_set or any(k <= 1 for k in k_set):
            raise InstanceError("--k-set needs values above 1")
        if n_range[0] < 1 or m_range[0] < 0:
            raise InstanceError("ranges need n >= 1 and m >= 0")
        seed = args.seed if args.seed is not None else random.SystemRandom().randrange(2**31)
        logger.info(f"Bench seed {seed}, {args.trials} trials")

        trials = [
            BenchTrial(seed=seed + t, n_range=n_range, m_range=m_range, k_set=k_set, weights=args.weights)
            for t in range(args.trials)
        ]
        rows = run_bench(trials, workers=args.workers or self.settings.bench_workers)
        write_csv(rows, self._resolve_out(args.csv) if args.csv else self.out)
        exceeded = [row for row in rows if not row.within_bounds]
        for row in exceeded:
            logger.error(f"Seed {row.seed} ({row.mode}) exceeded a round bound")
        return ExitCode.OK if not exceeded else ExitCode.VERIFICATION_FAILED

    def _write_doc(self, doc: InstanceFile, out: Optional[str]) -> None:
        if out:
            save_instance_file(doc, self._resolve_out(out))
        else:
            self._emit_text(doc.model_dump_json(indent=2))


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise InstanceError(str(e)) from e


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(prog="python -m src.main", description="Bivalued fair division toolkit")
    preset_help = f"Named instance: {', '.join(preset.id for preset in get_all_presets())}"
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default from settings)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate an instance file")
    gen.add_argument("--agents", type=int)
    gen.add_argument("--goods", type=int)
    gen.add_argument("--k")
    gen.add_argument("--weights", choices=("equal", "random"), default="equal")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--preset", help=f"{preset_help} (instead of a random instance)")
    gen.add_argument("--out", help="Output path (default stdout); bare file names go to the data directory")

    solve_cmd = sub.add_parser("solve", help="Solve an instance")
    solve_cmd.add_argument("--input")
    solve_cmd.add_argument("--preset", help=preset_help)
    solve_cmd.add_argument("--mode", choices=("wefx", "weqx"), default="wefx")
    solve_cmd.add_argument("--check-invariants", action=argparse.BooleanOptionalAction, default=None)
    solve_cmd.add_argument("--trace", action="store_true", help="Embed the round trace in the result")
    solve_cmd.add_argument("--initial-owners", help="Owner index per good, e.g. 0,0,0,1,1")
    solve_cmd.add_argument("--out", help="Output path (default stdout); bare file names go to the data directory")

    verify_cmd = sub.add_parser("verify", help="Verify a result file")
    verify_cmd.add_argument("--input", required=True)
    verify_cmd.add_argument("--result", required=True)
    verify_cmd.add_argument("--criteria", help=f"Comma-separated subset of {','.join(verifier.CRITERIA)}")

    oracle_cmd = sub.add_parser("oracle", help="Brute-force oracles")
    oracle_cmd.add_argument("--input")
    oracle_cmd.add_argument("--preset", help=preset_help)
    oracle_cmd.add_argument("--list", choices=("wefx", "weqx"))
    oracle_cmd.add_argument("--check-po", help="Result file to test for Pareto optimality")
    oracle_cmd.add_argument("--check-fpo", help="Result file to test for fractional Pareto optimality")
    oracle_cmd.add_argument("--budget", type=int, help="Maximum number of allocations to enumerate")

    cx = sub.add_parser("counterexample", help="Run the GM dynamic on the cycling instance")
    cx.add_argument("--max-rounds", type=int, default=10)
    cx.add_argument("--out", help="Write the full GM trace here")

    bench_cmd = sub.add_parser("bench", help="Round counts against proven bounds")
    bench_cmd.add_argument("--trials", type=int, default=100)
    bench_cmd.add_argument("--n-range", default="2-4")
    bench_cmd.add_argument("--m-range", default="2-8")
    bench_cmd.add_argument("--k-set", default="2,3,5")
    bench_cmd.add_argument("--weights", choices=("equal", "random"), default="equal")
    bench_cmd.add_argument("--seed", type=int)
    bench_cmd.add_argument("--workers", type=int, help="Parallel processes (default from settings)")
    bench_cmd.add_argument("--csv", help="Output path (default stdout); bare file names go to the data directory")
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    """Main entry point."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help
        return int(e.code or 0)

    setup_logger(level=args.log_level or get_settings().log_level)
    app = FairDivisionApp(out=out)
    handler = getattr(app, args.command)

    try:
        return int(handler(args))
    except InstanceError as e:
        logger.error(f"Input error: {e}")
        return ExitCode.INPUT_ERROR
    except InternalError as e:
        logger.error(f"Internal error: {e}")
        return ExitCode.INTERNAL_ERROR
    except BudgetError as e:
        logger.error(f"Budget exceeded: {e}")
        return ExitCode.BUDGET_ERROR
    except ValueError as e:
        logger.error(f"Bad argument: {e}")
        return ExitCode.INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
