"""Trajectory persistence and participant activity metrics.

One file per session: a single JSON header line (config text, seed,
participants, condition) followed by one JSON line per simulated tick.
The logged per-tick checksum is of the post-step state, which is what the
replay tool re-derives and compares.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class TrajectoryHeader:
    session_id: str
    env_config_text: str
    seed: int
    participants: dict[int, str]
    condition: int | None = None
    episodes: int = 1

    def to_json(self) -> str:
        return json.dumps({
            "kind": "header",
            "session_id": self.session_id,
            "env_config": self.env_config_text,
            "seed": self.seed,
            "participants": {str(k): v for k, v in self.participants.items()},
            "condition": self.condition,
            "episodes": self.episodes,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "TrajectoryHeader":
        data = json.loads(line)
        if data.get("kind") != "header":
            raise ValueError("first line is not a trajectory header")
        return cls(
            session_id=data["session_id"],
            env_config_text=data["env_config"],
            seed=int(data["seed"]),
            participants={int(k): v for k, v in data["participants"].items()},
            condition=data.get("condition"),
            episodes=int(data.get("episodes", 1)),
        )


@dataclass(frozen=True)
class TrajectoryRecord:
    session_id: str
    episode: int
    tick: int
    actions: dict[int, int]
    rewards: dict[int, float]
    infos: dict[int, dict]
    state_checksum: int

    def to_json(self) -> str:
        return json.dumps({
            "kind": "step",
            "episode": self.episode,
            "tick": self.tick,
            "actions": {str(k): v for k, v in self.actions.items()},
            "rewards": {str(k): v for k, v in self.rewards.items()},
            "infos": {str(k): v for k, v in self.infos.items()},
            "checksum": f"{self.state_checksum:016x}",
        }, sort_keys=True)

    @classmethod
    def from_json(cls, session_id: str, line: str) -> "TrajectoryRecord":
        data = json.loads(line)
        return cls(
            session_id=session_id,
            episode=int(data["episode"]),
            tick=int(data["tick"]),
            actions={int(k): int(v) for k, v in data["actions"].items()},
            rewards={int(k): float(v) for k, v in data["rewards"].items()},
            infos={int(k): v for k, v in data["infos"].items()},
            state_checksum=int(data["checksum"], 16),
        )


class TrajectoryWriter:
    def __init__(self, path: str | Path, header: TrajectoryHeader):
        self.path = Path(path)
        self.header = header
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = self.path.open("w")
        self._fh.write(header.to_json() + "\n")
        self.records_written = 0

    def append(self, record: TrajectoryRecord) -> None:
        self._fh.write(record.to_json() + "\n")
        self.records_written += 1

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.flush()
            self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_trajectory(path: str | Path) -> tuple[TrajectoryHeader, list[TrajectoryRecord]]:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty trajectory file")
    header = TrajectoryHeader.from_json(lines[0])
    records = [TrajectoryRecord.from_json(header.session_id, line)
               for line in lines[1:] if line.strip()]
    return header, records


# -- activity metrics ---------------------------------------------------------

NOOP_THRESHOLD = 0.975
BLUR_THRESHOLD = 0.90


@dataclass(frozen=True)
class FocusEvent:
    episode: int
    tick: int
    blurred: bool


@dataclass
class EpisodeActivity:
    episode: int
    ticks: int
    noop_fraction: float
    blur_fraction: float


@dataclass
class ActivityReport:
    agent_id: int
    noop_fraction: float          # aggregate over all ticks
    blur_fraction: float
    per_episode: list[EpisodeActivity] = field(default_factory=list)
    flagged: bool = False
    reasons: list[str] = field(default_factory=list)


def activity_metrics(records: list[TrajectoryRecord],
                     focus_events: list[FocusEvent],
                     agent_id: int,
                     noop_action: int,
                     noop_threshold: float = NOOP_THRESHOLD,
                     blur_threshold: float = BLUR_THRESHOLD) -> ActivityReport:
    """Inactivity and page-blur fractions, per episode and overall.

    A participant is flagged when any episode (or the aggregate) reaches
    the noop threshold, or when any episode reaches the blur threshold.
    Thresholds are inclusive.
    """
    episodes = sorted({r.episode for r in records})
    events_by_episode: dict[int, list[FocusEvent]] = {}
    for event in sorted(focus_events, key=lambda e: (e.episode, e.tick)):
        events_by_episode.setdefault(event.episode, []).append(event)

    per_episode: list[EpisodeActivity] = []
    total_ticks = total_noops = 0
    total_blurred = 0.0
    for episode in episodes:
        rows = sorted((r for r in records if r.episode == episode),
                      key=lambda r: r.tick)
        ticks = len(rows)
        noops = sum(1 for r in rows if r.actions.get(agent_id) == noop_action)
        blurred_ticks = 0
        blurred = False
        events = events_by_episode.get(episode, [])
        cursor = 0
        for row in rows:
            while cursor < len(events) and events[cursor].tick <= row.tick:
                blurred = events[cursor].blurred
                cursor += 1
            blurred_ticks += 1 if blurred else 0
        per_episode.append(EpisodeActivity(
            episode=episode,
            ticks=ticks,
            noop_fraction=noops / ticks if ticks else 0.0,
            blur_fraction=blurred_ticks / ticks if ticks else 0.0,
        ))
        total_ticks += ticks
        total_noops += noops
        total_blurred += blurred_ticks

    report = ActivityReport(
        agent_id=agent_id,
        noop_fraction=total_noops / total_ticks if total_ticks else 0.0,
        blur_fraction=total_blurred / total_ticks if total_ticks else 0.0,
        per_episode=per_episode,
    )
    if report.noop_fraction >= noop_threshold:
        report.reasons.append(
            f"aggregate noop fraction {report.noop_fraction:.4f} >= "
            f"{noop_threshold}")
    for ep in per_episode:
        if ep.noop_fraction >= noop_threshold:
            report.reasons.append(
                f"episode {ep.episode} noop fraction {ep.noop_fraction:.4f}")
        if ep.blur_fraction >= blur_threshold:
            report.reasons.append(
                f"episode {ep.episode} blur fraction {ep.blur_fraction:.4f}")
    report.flagged = bool(report.reasons)
    return report
