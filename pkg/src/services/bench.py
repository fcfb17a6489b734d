"""
Benchmark harness: solve random instances and compare round counts with
their proven bounds.
"""

import concurrent.futures
import csv
import random
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, TextIO, Union

from ..models.trace import Metric
from ..utils.helpers import format_rational
from ..utils.logger import get_logger
from .generator import WeightScheme, random_instance
from .initializer import init_round_bound
from .reallocation import realloc_round_bound, solve

logger = get_logger(__name__)

CSV_COLUMNS = (
    "seed", "n", "m", "k", "mode", "init_rounds", "realloc_rounds", "bound_init", "bound_realloc", "wallclock",
)


@dataclass(frozen=True)
class BenchTrial:
    """Parameters of one trial; everything random derives from seed."""
    seed: int
    n_range: tuple[int, int]
    m_range: tuple[int, int]
    k_set: tuple[Fraction, ...]
    weights: WeightScheme = "equal"
    check_invariants: Optional[bool] = False


@dataclass(frozen=True)
class BenchRow:
    seed: int
    n: int
    m: int
    k: str
    mode: str
    init_rounds: int
    realloc_rounds: int
    bound_init: int
    bound_realloc: int
    wallclock: float

    @property
    def within_bounds(self) -> bool:
        return self.init_rounds <= self.bound_init and self.realloc_rounds <= self.bound_realloc


def run_trial(trial: BenchTrial) -> list[BenchRow]:
    """Draw one instance and solve it in both modes."""
    rng = random.Random(trial.seed)
    n = rng.randint(*trial.n_range)
    m = rng.randint(*trial.m_range)
    k = rng.choice(trial.k_set)
    inst = random_instance(rng, n, m, k, trial.weights)

    rows = []
    for mode in Metric:
        started = time.perf_counter()
        result = solve(inst, mode, check_invariants=trial.check_invariants)
        elapsed = time.perf_counter() - started
        rows.append(BenchRow(
            seed=trial.seed,
            n=n,
            m=m,
            k=format_rational(k),
            mode=mode.criterion,
            init_rounds=result.init_round_count,
            realloc_rounds=result.realloc_round_count,
            bound_init=init_round_bound(inst),
            bound_realloc=realloc_round_bound(inst),
            wallclock=round(elapsed, 6),
        ))
    return rows


def run_bench(trials: Sequence[BenchTrial], workers: int = 1) -> list[BenchRow]:
    """
    Run trials, in parallel processes when workers > 1.

    Rows come back in trial order regardless of completion order.
    """
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            batches = list(executor.map(run_trial, trials))
    else:
        batches = [run_trial(trial) for trial in trials]
    rows = [row for batch in batches for row in batch]
    logger.info(f"Bench finished: {len(trials)} trials, {len(rows)} solves")
    return rows


def write_csv(rows: Iterable[BenchRow], out: Union[str, Path, TextIO]) -> None:
    """Write rows with a header; ``out`` is a path or an open text stream."""
    if isinstance(out, (str, Path)):
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            write_csv(rows, f)
        return
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    for row in rows:
        writer.writerow(asdict(row))
