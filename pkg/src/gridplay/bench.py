"""Throughput benchmark: data-parallel stepping of independent instances.

Instances are plain environments stepped with random actions, spread
round-robin across a process pool (one env per instance, no shared
state).  Benchmark mode never changes simulation semantics: the audit
entry point replays the same instance seeds serially and compares final
checksums against the parallel run.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from multiprocessing import get_context

from .core.rng import CounterRng, mix64
from .core.snapshot import state_checksum
from .env.config import EnvConfig
from .replay import episode_seed


def instance_seed(base_seed: int, instance: int) -> int:
    return mix64(base_seed ^ mix64(7000 + instance))


@dataclass
class BenchReport:
    env_name: str
    instances: int
    workers: int
    total_steps: int
    wall_seconds: float
    checksums: dict[int, int] | None = None

    @property
    def steps_per_second(self) -> float:
        return self.total_steps / self.wall_seconds if self.wall_seconds else 0.0

    def row(self) -> str:
        return (f"{self.env_name}\t{self.instances}\t{self.workers}\t"
                f"{self.total_steps}\t{self.wall_seconds:.3f}\t"
                f"{self.steps_per_second:.1f}")

    @staticmethod
    def header() -> str:
        return "env\tinstances\tworkers\ttotal_steps\twall_seconds\tsteps_per_second"


class _Instance:
    __slots__ = ("env", "state", "rng", "episode", "seed", "steps")

    def __init__(self, config: EnvConfig, seed: int):
        from .envs import make_env

        self.env = make_env(config)
        self.seed = seed
        self.rng = CounterRng(seed)
        self.episode = 0
        self.state, _ = self.env.reset(seed=episode_seed(seed, 0))
        self.steps = 0

    def step(self) -> None:
        actions = {a.agent_id: self.rng.randrange(len(self.env.action_set))
                   for a in self.state.agents}
        self.state, result = self.env.step(self.state, actions)
        self.steps += 1
        if result.terminated or result.truncated:
            self.episode += 1
            self.state, _ = self.env.reset(
                seed=episode_seed(self.seed, self.episode))


def _run_until_deadline(config: EnvConfig, seeds: list[tuple[int, int]],
                        deadline: float) -> int:
    instances = [_Instance(config, seed) for _, seed in seeds]
    steps = 0
    while time.monotonic() < deadline:
        for inst in instances:
            inst.step()
        steps += len(instances)
    return steps


def _run_fixed_steps(config: EnvConfig, seeds: list[tuple[int, int]],
                     steps_per_instance: int) -> dict[int, int]:
    out = {}
    for instance_id, seed in seeds:
        inst = _Instance(config, seed)
        for _ in range(steps_per_instance):
            inst.step()
        out[instance_id] = state_checksum(inst.state)
    return out


def _chunks(items: list, n: int) -> list[list]:
    return [items[i::n] for i in range(n) if items[i::n]]


def bench(config: EnvConfig, instances: int, workers: int,
          seconds: float) -> BenchReport:
    """Timed throughput run; aggregate steps per second across instances."""
    seeds = [(i, instance_seed(config.seed, i)) for i in range(instances)]
    workers = max(1, min(workers, instances))
    start = time.monotonic()
    deadline = start + seconds
    if workers == 1:
        total = _run_until_deadline(config, seeds, deadline)
    else:
        ctx = get_context("fork")
        with ctx.Pool(workers) as pool:
            counts = pool.starmap(
                _run_until_deadline,
                [(config, chunk, deadline) for chunk in _chunks(seeds, workers)])
        total = sum(counts)
    wall = time.monotonic() - start
    return BenchReport(config.name, instances, workers, total, wall)


def bench_audit(config: EnvConfig, instances: int, workers: int,
                steps_per_instance: int) -> tuple[BenchReport, bool]:
    """Fixed-step run whose per-instance final checksums are compared
    against a serial rerun; returns (report, determinism_ok)."""
    seeds = [(i, instance_seed(config.seed, i)) for i in range(instances)]
    workers = max(1, min(workers, instances))
    start = time.monotonic()
    if workers == 1:
        parallel: dict[int, int] = _run_fixed_steps(config, seeds,
                                                    steps_per_instance)
    else:
        ctx = get_context("fork")
        with ctx.Pool(workers) as pool:
            parts = pool.starmap(
                _run_fixed_steps,
                [(config, chunk, steps_per_instance)
                 for chunk in _chunks(seeds, workers)])
        parallel = {}
        for part in parts:
            parallel.update(part)
    wall = time.monotonic() - start
    serial = _run_fixed_steps(config, seeds, steps_per_instance)
    report = BenchReport(config.name, instances, workers,
                         instances * steps_per_instance, wall,
                         checksums=parallel)
    return report, parallel == serial


def bench_table(config: EnvConfig, instance_counts: list[int], workers: int,
                seconds: float) -> list[BenchReport]:
    return [bench(config, n, workers, seconds) for n in instance_counts]


def available_cores() -> int:
    return os.cpu_count() or 1
