"""Parameter schedules, n-grid sweeps, aggregation and CSV output.

Every run gets its own seed ``derive_seed(master_seed, n, run_index)`` so any
single run can be replayed with :func:`noisyea.engine.run`, and results do not
depend on the number of workers or the order in which runs finish.
"""

from __future__ import annotations

import enum
import math
import re
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from noisyea import _kernels
from noisyea.engine import (
    DEFAULT_MAX_EVALUATIONS,
    Hitting,
    RunConfig,
    RunResult,
    derive_seed,
    make_rng,
)
from noisyea.noise import NoiseKind, NoiseSpec, SamplingSpec
from noisyea.problems import ProblemKind

CSV_COLUMNS = (
    "n", "p", "q", "m", "runs", "hits", "censored",
    "mean_evals", "median_evals", "stddev_evals", "normalized", "master_seed",
)


class ScheduleKind(enum.Enum):
    CONST = "const"
    LOGN_OVER_N_SQ = "(ln(n)/n)^2"
    LOGN_OVER_N32 = "ln(n)/n^1.5"
    LOGN_OVER_N = "ln(n)/n"
    LOGN2_OVER_N3 = "ln(n)^2/n^3"
    LOGN_OVER_N52 = "ln(n)/n^2.5"
    LOGN_OVER_N2 = "ln(n)/n^2"
    ONE_OVER_N = "1/n"


_FORMULAS = {
    ScheduleKind.LOGN_OVER_N_SQ: lambda n: (math.log(n) / n) ** 2,
    ScheduleKind.LOGN_OVER_N32: lambda n: math.log(n) / n**1.5,
    ScheduleKind.LOGN_OVER_N: lambda n: math.log(n) / n,
    ScheduleKind.LOGN2_OVER_N3: lambda n: math.log(n) ** 2 / n**3,
    ScheduleKind.LOGN_OVER_N52: lambda n: math.log(n) / n**2.5,
    ScheduleKind.LOGN_OVER_N2: lambda n: math.log(n) / n**2,
    ScheduleKind.ONE_OVER_N: lambda n: 1.0 / n,
}


def _normalize_expr(text: str) -> str:
    s = text.strip().lower().replace(" ", "").replace("**", "^")
    s = s.replace("log", "ln").replace("ln(n)", "lnn")
    return s.replace("^(3/2)", "^1.5").replace("^(5/2)", "^2.5").replace("^3/2", "^1.5")


@dataclass(frozen=True)
class Schedule:
    """A probability as a function of n; logarithms are natural."""

    kind: ScheduleKind = ScheduleKind.CONST
    value: float = 0.0

    @classmethod
    def const(cls, v: float) -> "Schedule":
        return cls(ScheduleKind.CONST, float(v))

    @classmethod
    def parse(cls, text: str) -> "Schedule":
        try:
            return cls.const(float(text))
        except ValueError:
            pass
        key = _normalize_expr(text)
        for kind in ScheduleKind:
            if kind is not ScheduleKind.CONST and _normalize_expr(kind.value) == key:
                return cls(kind)
            if kind.name.lower() == key:
                return cls(kind)
        raise ValueError(f"unknown schedule {text!r}")

    def __str__(self) -> str:
        return repr(self.value) if self.kind is ScheduleKind.CONST else self.kind.value


def schedule_eval(s: Schedule, n: int) -> float:
    """Value of ``s`` at problem size ``n`` (n >= 2), clamped to [0, 1]."""
    if n < 2:
        raise ValueError(f"schedules are defined for n >= 2, got n={n}")
    v = s.value if s.kind is ScheduleKind.CONST else _FORMULAS[s.kind](n)
    return min(max(v, 0.0), 1.0)


@dataclass(frozen=True)
class SampleSize:
    """Sample size ``m = round(coef * n^power)``, at least 1 (power 0 = constant)."""

    coef: float = 1.0
    power: float = 0.0

    @classmethod
    def parse(cls, text: str) -> "SampleSize":
        s = text.strip().lower().replace(" ", "").replace("**", "^")
        if re.fullmatch(r"\d+", s):
            return cls(float(s), 0.0)
        m = re.fullmatch(r"(\d*\.?\d*)\*?n(?:\^(\d*\.?\d+))?", s)
        if not m:
            raise ValueError(f"bad sample size {text!r}")
        coef = float(m.group(1)) if m.group(1) else 1.0
        power = float(m.group(2)) if m.group(2) else 1.0
        return cls(coef, power)

    def at(self, n: int) -> int:
        return max(1, int(round(self.coef * n**self.power)))

    def __str__(self) -> str:
        if self.power == 0:
            return str(self.at(1))
        return f"{self.coef:g}n^{self.power:g}"


@dataclass(frozen=True)
class ExperimentConfig:
    problem: ProblemKind
    noise: NoiseKind = NoiseKind.NOISELESS
    p: Schedule = field(default_factory=Schedule)
    q: Schedule = field(default_factory=Schedule)
    m: SampleSize = field(default_factory=SampleSize)
    n_grid: tuple[int, ...] = (8, 16, 32)
    runs_per_n: int = 1000
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS
    master_seed: int = 0
    output: Path | None = None
    hitting: Hitting = Hitting.STATE

    def __post_init__(self):
        grid = tuple(int(n) for n in self.n_grid)
        object.__setattr__(self, "n_grid", grid)
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"n_grid must be non-empty and strictly increasing: {grid}")
        if grid[0] < 2:
            raise ValueError("n_grid entries must be >= 2 (ln n appears in schedules)")
        if self.runs_per_n < 1:
            raise ValueError("runs_per_n must be positive")

    def noise_at(self, n: int) -> NoiseSpec:
        if self.noise is NoiseKind.NOISELESS:
            return NoiseSpec.noiseless()
        p = schedule_eval(self.p, n)
        if self.noise is NoiseKind.ONEBIT:
            return NoiseSpec.onebit(p)
        return NoiseSpec.bitwise(p, schedule_eval(self.q, n))

    def run_config(self, n: int, run_index: int) -> RunConfig:
        return RunConfig(
            problem=self.problem,
            n=n,
            noise=self.noise_at(n),
            sampling=SamplingSpec(self.m.at(n)),
            max_evaluations=self.max_evaluations,
            seed=derive_seed(self.master_seed, n, run_index),
            hitting=self.hitting,
        )


CONFIG_KEYS = (
    "problem", "noise", "p", "q", "m", "n_grid", "runs_per_n",
    "max_evaluations", "master_seed", "output", "hitting",
)


def parse_config(text: str, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Build a config from flat ``key = value`` lines (``#`` starts a comment)."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in CONFIG_KEYS:
            raise ValueError(f"line {lineno}: expected one of {', '.join(CONFIG_KEYS)} = value")
        values[key] = value.strip()
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = str(value)
    if "problem" not in values:
        raise ValueError("config needs a 'problem' key")

    kwargs: dict = {"problem": ProblemKind.parse(values["problem"])}
    if "noise" in values:
        kwargs["noise"] = {
            "none": NoiseKind.NOISELESS,
            "noiseless": NoiseKind.NOISELESS,
            "onebit": NoiseKind.ONEBIT,
            "bitwise": NoiseKind.BITWISE,
        }[values["noise"].lower()]
    for key in ("p", "q"):
        if key in values:
            kwargs[key] = Schedule.parse(values[key])
    if "m" in values:
        kwargs["m"] = SampleSize.parse(values["m"])
    if "n_grid" in values:
        kwargs["n_grid"] = tuple(int(v) for v in re.split(r"[,\s]+", values["n_grid"]) if v)
    for key in ("runs_per_n", "max_evaluations", "master_seed"):
        if key in values:
            kwargs[key] = int(float(values[key])) if "e" in values[key].lower() else int(values[key])
    if values.get("output"):
        kwargs["output"] = Path(values["output"])
    if "hitting" in values:
        kwargs["hitting"] = Hitting[values["hitting"].upper()]
    return ExperimentConfig(**kwargs)


def load_config(path: str | Path, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise OSError(f"cannot read config {path}: {e.strerror or e}") from e
    return parse_config(text, overrides)


@dataclass(frozen=True)
class ResultRow:
    n: int
    p: float
    q: float
    m: int
    runs: int
    hits: int
    censored: int
    mean_evals: float
    median_evals: float
    stddev_evals: float
    normalized: float
    master_seed: int


def aggregate(config: ExperimentConfig, n: int, results: list[RunResult]) -> ResultRow:
    """One row from the runs at size ``n``; censored runs count at their evaluations (the cap)."""
    evals = [r.evaluations for r in results]
    noise = config.noise_at(n)
    mean = statistics.fmean(evals)
    return ResultRow(
        n=n,
        p=noise.p,
        q=noise.q if noise.kind is NoiseKind.BITWISE else 0.0,
        m=config.m.at(n),
        runs=len(results),
        hits=sum(r.hit for r in results),
        censored=sum(r.censored for r in results),
        mean_evals=mean,
        median_evals=float(statistics.median(evals)),
        stddev_evals=statistics.pstdev(evals),
        normalized=math.log(mean) / math.log(n),
        master_seed=config.master_seed,
    )


_NO_TRACE = np.empty(0, np.int64)


def _run_block(config: ExperimentConfig, n: int, start: int, stop: int) -> list[RunResult]:
    out = []
    for i in range(start, stop):
        rc = config.run_config(n, i)
        it, ev, hit, cens, fit = _kernels.run_kernel(
            rc.problem.value, n, rc.noise.kind.value, rc.noise.p, rc.noise.q,
            rc.sampling.m, rc.max_evaluations, rc.hitting.value, make_rng(rc.seed), _NO_TRACE,
        )
        out.append(RunResult(int(it), int(ev), bool(hit), bool(cens), int(fit), rc.seed))
    return out


def simulate(
    config: ExperimentConfig, workers: int = 1, block: int = 25
) -> dict[int, list[RunResult]]:
    """All runs of the experiment, ordered by (n, run_index).

    Blocks of runs execute on a thread pool; the jitted kernel releases the
    GIL, so threads run truly in parallel.
    """
    tasks = [
        (n, s, min(s + block, config.runs_per_n))
        for n in config.n_grid
        for s in range(0, config.runs_per_n, block)
    ]
    if workers <= 1:
        blocks = [_run_block(config, *t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda t: _run_block(config, *t), tasks))
    per_n: dict[int, list[RunResult]] = {n: [] for n in config.n_grid}
    for (n, _, _), results in zip(tasks, blocks):
        per_n[n].extend(results)
    return per_n


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[ResultRow]:
    """Run the sweep, aggregate one row per n, and write the CSV if ``config.output`` is set."""
    per_n = simulate(config, workers)
    rows = [aggregate(config, n, per_n[n]) for n in config.n_grid]
    if config.output is not None:
        write_csv(rows, config.output)
    return rows


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def format_csv(rows: list[ResultRow]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(getattr(row, c)) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def write_csv(rows: list[ResultRow], path: str | Path) -> None:
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_csv(rows))
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e


def with_output(config: ExperimentConfig, output: str | Path | None) -> ExperimentConfig:
    return replace(config, output=Path(output) if output is not None else None)
