"""Seeded parameter sweeps and CSV emission.

One record per (pd, err, trial, method); the trial seed is derived from
the base seed and the grid indices (see ``haprtr.seeding``), so records
are identical however trials are scheduled.  Rows are gathered, sorted by
(pd, err, trial, method), and written atomically (temp file then rename),
giving byte-identical CSVs for identical configurations.  Wall times are
only recorded when ``timing = on``: real timings would break the
byte-identity contract, so the column holds 0 by default.
"""

from __future__ import annotations

import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .config_io import ExperimentConfig
from .errors import ParameterError
from .methods import run_method
from .pipeline import Haplotype, generate_instance, hd_ambiguous, unrecoverable_sites
from .seeding import method_seed, trial_seed

__all__ = [
    "CSV_HEADER",
    "THREADS_ENV_VAR",
    "ExperimentRecord",
    "worker_count",
    "run_trial",
    "run_experiment",
    "records_to_csv",
    "write_csv",
]

CSV_HEADER = "pd,err,trial,seed,method,hd,mec,unrecoverable_sites,iterations,grad_norm,wall_time_ms"

#: Overrides the worker count for trial-level parallelism.
THREADS_ENV_VAR = "HAPRTR_THREADS"


@dataclass(frozen=True)
class ExperimentRecord:
    pd: float
    err: float
    trial: int
    seed: int
    method: str
    hd: int
    mec: int
    unrecoverable_sites: int
    iterations: int
    grad_norm: float
    wall_time_ms: float

    def to_csv_row(self) -> str:
        return ",".join(
            (
                repr(self.pd),
                repr(self.err),
                str(self.trial),
                str(self.seed),
                self.method,
                str(self.hd),
                str(self.mec),
                str(self.unrecoverable_sites),
                str(self.iterations),
                repr(self.grad_norm),
                format(self.wall_time_ms, ".3f") if self.wall_time_ms else "0",
            )
        )


def worker_count() -> int:
    """Worker processes for a sweep: HAPRTR_THREADS, else all cores."""
    value = os.environ.get(THREADS_ENV_VAR)
    if value is None:
        return os.cpu_count() or 1
    try:
        count = int(value)
    except ValueError:
        raise ParameterError(f"{THREADS_ENV_VAR} must be an integer, got {value!r}") from None
    if count < 1:
        raise ParameterError(f"{THREADS_ENV_VAR} must be at least 1, got {count}")
    return count


def run_trial(cfg: ExperimentConfig, pd_index: int, err_index: int, trial: int) -> list[ExperimentRecord]:
    """All method records for one grid cell; pure function of (cfg, indices)."""
    pd = cfg.pd_grid[pd_index]
    err = cfg.err_grid[err_index]
    seed = trial_seed(cfg.base_seed, pd_index, err_index, trial)
    instance = generate_instance(cfg.m, cfg.n, pd, err, seed)
    truth = Haplotype(instance.truth_h)
    dead_sites = unrecoverable_sites(instance.reads)

    records = []
    for name in cfg.methods:
        start = time.perf_counter()
        outcome = run_method(name, instance.reads, cfg, method_seed(seed, name))
        elapsed_ms = (time.perf_counter() - start) * 1e3
        records.append(
            ExperimentRecord(
                pd=pd,
                err=err,
                trial=trial,
                seed=seed,
                method=name,
                hd=hd_ambiguous(outcome.haplotype, truth),
                mec=outcome.mec,
                unrecoverable_sites=dead_sites,
                iterations=outcome.iterations,
                grad_norm=outcome.grad_norm,
                wall_time_ms=elapsed_ms if cfg.timing else 0.0,
            )
        )
    return records


def _run_trial_args(args) -> list[ExperimentRecord]:
    return run_trial(*args)


def run_experiment(cfg: ExperimentConfig, workers: int | None = None) -> list[ExperimentRecord]:
    """Run the full sweep; trials execute concurrently when workers > 1."""
    tasks = [
        (cfg, pd_index, err_index, trial)
        for pd_index in range(len(cfg.pd_grid))
        for err_index in range(len(cfg.err_grid))
        for trial in range(cfg.trials)
    ]
    if workers is None:
        workers = worker_count()

    if workers <= 1 or len(tasks) <= 1:
        batches = [run_trial(*task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            batches = list(pool.map(_run_trial_args, tasks))

    records = [record for batch in batches for record in batch]
    records.sort(key=lambda r: (r.pd, r.err, r.trial, r.method))
    return records


def records_to_csv(records: list[ExperimentRecord]) -> str:
    lines = [CSV_HEADER]
    lines.extend(record.to_csv_row() for record in records)
    return "\n".join(lines) + "\n"


def write_csv(records: list[ExperimentRecord], path):
    """Write via a sibling temp file and rename, so no truncated CSV persists."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".haprtr-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(records_to_csv(records))
        os.replace(tmp_path, path)
    except BaseException:
        os.unlink(tmp_path)
        raise
