"""Game execution on the server side.

ServerAuthoritativeSession owns the simulation: every tick it samples the
latest buffered action per human seat (noop when none arrived), queries
bot policies, steps the environment, logs a trajectory record, and
broadcasts a render payload.  The loop body consumes logical ticks only;
pacing (fps) is the caller's concern, so headless tests and the realtime
server share the exact same code path.

P2PRelay is the server end of client-side multiplayer: it hands both
clients the shared seed and config, forwards input bundles between them,
cross-checks their confirmed checksums, and verifies the uploaded
trajectories by replay before accepting them.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from ..core.rng import mix64
from ..core.snapshot import state_checksum
from ..envs import make_env
from ..replay import MismatchAt, episode_seed, verify_records
from .bots import Policy, make_policy
from .protocol import state_message
from .scenes import ExecutionMode, GymScene
from ..trajectory import (
    FocusEvent,
    TrajectoryHeader,
    TrajectoryRecord,
    TrajectoryWriter,
)

logger = logging.getLogger(__name__)


class ParticipantDisconnected(Exception):
    pass


class QueueConnection:
    """In-memory connection: inbound/outbound message queues."""

    def __init__(self):
        self.inbound: deque[dict] = deque()
        self.outbound: deque[dict] = deque()
        self.closed = False

    def poll(self) -> dict | None:
        return self.inbound.popleft() if self.inbound else None

    def send(self, message: dict) -> None:
        if not self.closed:
            self.outbound.append(message)

    # test/client side helpers
    def push(self, message: dict) -> None:
        self.inbound.append(message)

    def drain_outbound(self) -> list[dict]:
        out = list(self.outbound)
        self.outbound.clear()
        return out


@dataclass
class EpisodeSummary:
    episode: int
    ticks: int
    rewards: dict[int, float]
    deliveries: int = 0

    @property
    def team_reward(self) -> float:
        return sum(self.rewards.values())


@dataclass
class SessionResult:
    session_id: str
    log_path: Path
    episodes: list[EpisodeSummary] = field(default_factory=list)
    focus_events: list[FocusEvent] = field(default_factory=list)


class ServerAuthoritativeSession:
    def __init__(self, scene: GymScene, session_id: str,
                 participants: dict[int, str],
                 connections: dict[int, "QueueConnection"],
                 log_dir: str | Path, seed: int,
                 on_disconnect: str = "abort",
                 condition: int | None = None):
        config = scene.config
        self.scene = scene
        self.session_id = session_id
        self.seed = seed
        self.on_disconnect = on_disconnect
        self.env = make_env(config.env)
        seats = config.seats
        agent_ids = list(range(self.env.num_agents))
        missing = [a for a in agent_ids if a not in seats]
        if missing:
            raise ValueError(f"unseated agents: {missing}")
        self.connections = connections
        for agent_id in config.human_agents:
            if agent_id not in connections:
                raise ValueError(f"human seat {agent_id} has no connection")
        self.bots: dict[int, Policy] = {}
        for agent_id in config.bot_agents:
            policy = make_policy(seats[agent_id].policy or "noop",
                                 seed=mix64(seed ^ agent_id))
            self.bots[agent_id] = policy
        self.noop = self.env.action_set.noop
        log_dir = Path(log_dir)
        self.log_path = log_dir / f"{session_id}.traj"
        self.writer = TrajectoryWriter(self.log_path, TrajectoryHeader(
            session_id=session_id,
            env_config_text=config.env.to_text(),
            seed=seed,
            participants=participants,
            condition=condition,
            episodes=config.episodes,
        ))
        self.result = SessionResult(session_id, self.log_path)
        self._latest_input: dict[int, int] = {}

    # -- input plumbing ----------------------------------------------------

    def _drain(self, episode: int, tick: int) -> None:
        for agent_id, connection in self.connections.items():
            if connection.closed:
                if self.on_disconnect == "abort":
                    raise ParticipantDisconnected(f"agent {agent_id}")
                continue
            while True:
                message = connection.poll()
                if message is None:
                    break
                kind = message.get("type")
                if kind == "input":
                    action = int(message.get("action", self.noop))
                    if 0 <= action < len(self.env.action_set):
                        self._latest_input[agent_id] = action
                elif kind == "focus":
                    self.result.focus_events.append(FocusEvent(
                        episode=episode,
                        tick=int(message.get("tick", tick)),
                        blurred=bool(message.get("blurred", False)),
                    ))

    def _tick_actions(self, state) -> dict[int, int]:
        actions: dict[int, int] = {}
        for agent in state.agents:
            agent_id = agent.agent_id
            if agent_id in self.bots:
                actions[agent_id] = self.bots[agent_id].act(
                    self.env, state, agent_id)
            else:
                # Latest buffered human input; absent input is a noop.
                actions[agent_id] = self._latest_input.pop(agent_id, self.noop)
        return actions

    # -- episode loop --------------------------------------------------------

    def run_episode(self, episode: int, on_tick=None) -> EpisodeSummary:
        config = self.scene.config
        state, _ = self.env.reset(seed=episode_seed(self.seed, episode))
        totals = {agent.agent_id: 0.0 for agent in state.agents}
        deliveries = 0
        self._latest_input.clear()
        for policy in self.bots.values():
            policy.reset(mix64(self.seed ^ (episode + 1)))
        self.broadcast(state_message(
            frame=0, state=state, score=0.0,
            time_left_seconds=config.env.max_ticks / config.fps,
            episode=episode))
        tick = 0
        while True:
            if on_tick is not None:
                on_tick(self, episode, tick)
            self._drain(episode, tick)
            actions = self._tick_actions(state)
            state, result = self.env.step(state, actions)
            for agent_id, value in result.rewards.items():
                totals[agent_id] += value
            deliveries += sum(int(info.get("delivered", 0))
                              for info in result.infos.values())
            self.writer.append(TrajectoryRecord(
                session_id=self.session_id,
                episode=episode,
                tick=tick,
                actions=actions,
                rewards=result.rewards,
                infos=result.infos,
                state_checksum=state_checksum(state),
            ))
            self.broadcast(state_message(
                frame=tick + 1, state=state, score=sum(totals.values()),
                time_left_seconds=(config.env.max_ticks - state.tick) / config.fps,
                episode=episode))
            tick += 1
            if result.terminated or result.truncated:
                break
        return EpisodeSummary(episode=episode, ticks=tick, rewards=totals,
                              deliveries=deliveries)

    def run(self, on_tick=None) -> SessionResult:
        try:
            for episode in range(self.scene.config.episodes):
                summary = self.run_episode(episode, on_tick=on_tick)
                self.result.episodes.append(summary)
                logger.info("session %s episode %d: %d ticks, team reward %.2f",
                            self.session_id, episode, summary.ticks,
                            summary.team_reward)
        finally:
            self.writer.close()
        return self.result

    def broadcast(self, message: dict) -> None:
        for connection in self.connections.values():
            connection.send(message)


class DesyncFlagged(Exception):
    def __init__(self, frame: int):
        super().__init__(f"peer checksums disagree at confirmed frame {frame}")
        self.frame = frame


def _parse_uploaded_records(session_id: str, episode: int,
                            rows: list[dict]) -> list[TrajectoryRecord]:
    return [
        TrajectoryRecord(
            session_id=session_id,
            episode=episode,
            tick=int(row["tick"]),
            actions={int(k): int(v) for k, v in row["actions"].items()},
            rewards={int(k): float(v) for k, v in row["rewards"].items()},
            infos={int(k): v for k, v in row.get("infos", {}).items()},
            state_checksum=int(row["checksum"], 16),
        )
        for row in rows
    ]


class P2PRelay:
    """Reactive relay: feed it inbound messages, ship what it returns.

    The server never simulates here; clients run the environment locally
    from the shared seed and the relay only forwards bundles, compares
    confirmed checksums, and replay-verifies the final uploads.
    """

    def __init__(self, scene: GymScene, session_id: str,
                 participants: dict[int, str], log_dir: str | Path,
                 seed: int, max_prediction: int = 8,
                 condition: int | None = None):
        if scene.config.mode is not ExecutionMode.CLIENT_P2P:
            raise ValueError("scene is not client_p2p")
        self.scene = scene
        self.session_id = session_id
        self.participants = dict(participants)
        self.seed = seed
        self.max_prediction = max_prediction
        self.condition = condition
        self.log_dir = Path(log_dir)
        self.players = sorted(participants)
        self.uploads: dict[tuple[int, int], list[TrajectoryRecord]] = {}
        self.checksums: dict[int, dict[tuple[int, int], int]] = {
            p: {} for p in self.players}
        self.flagged: DesyncFlagged | None = None
        self.log_path: Path | None = None

    def start(self) -> list[tuple[int, dict]]:
        config = self.scene.config
        out = []
        for player in self.players:
            out.append((player, {
                "type": "assign",
                "player_id": player,
                "session_id": self.session_id,
                # Decimal string: 64-bit seeds do not survive JSON numbers.
                "seed": str(self.seed),
                "env_config": config.env.to_text(),
                "episodes": config.episodes,
                "fps": config.fps,
                "max_prediction": self.max_prediction,
                "mode": config.mode.value,
            }))
        return out

    def handle(self, player: int, message: dict) -> list[tuple[int, dict]]:
        kind = message.get("type")
        if kind == "input_bundle":
            other = self._other(player)
            return [(other, {**message, "type": "peer_bundle"})]
        if kind == "checksum":
            return self._on_checksum(player, message)
        if kind == "trajectory_upload":
            episode = int(message["episode"])
            self.uploads[(player, episode)] = _parse_uploaded_records(
                self.session_id, episode, message["records"])
            return []
        if kind == "focus":
            return []
        logger.warning("relay %s: unexpected %r from player %d",
                       self.session_id, kind, player)
        return []

    def _on_checksum(self, player: int, message: dict) -> list[tuple[int, dict]]:
        episode = int(message.get("episode", 0))
        frame = int(message["frame"])
        value = int(message["value"], 16) if isinstance(message["value"], str) \
            else int(message["value"])
        self.checksums[player][(episode, frame)] = value
        other = self._other(player)
        counterpart = self.checksums[other].get((episode, frame))
        if counterpart is not None and counterpart != value:
            self.flagged = DesyncFlagged(frame)
            note = {"type": "session_flagged",
                    "reason": f"desync at episode {episode} frame {frame}"}
            return [(p, note) for p in self.players]
        return []

    def _other(self, player: int) -> int:
        return self.players[1] if player == self.players[0] else self.players[0]

    @property
    def complete(self) -> bool:
        episodes = self.scene.config.episodes
        return all((p, e) in self.uploads
                   for p in self.players for e in range(episodes))

    def finalize(self) -> Path:
        """Replay-verify the uploads, require both peers to agree, and
        persist the canonical trajectory."""
        if self.flagged is not None:
            raise self.flagged
        if not self.complete:
            raise ValueError("missing trajectory uploads")
        config = self.scene.config
        reference = self.players[0]
        records: list[TrajectoryRecord] = []
        for episode in range(config.episodes):
            ours = self.uploads[(reference, episode)]
            theirs = self.uploads[(self._other(reference), episode)]
            if [r.to_json() for r in ours] != [r.to_json() for r in theirs]:
                raise DesyncFlagged(-1)
            records.extend(ours)
        header = TrajectoryHeader(
            session_id=self.session_id,
            env_config_text=config.env.to_text(),
            seed=self.seed,
            participants=self.participants,
            condition=self.condition,
            episodes=config.episodes,
        )
        verify_records(header, records)  # raises MismatchAt on tampering
        self.log_path = self.log_dir / f"{self.session_id}.traj"
        with TrajectoryWriter(self.log_path, header) as writer:
            for record in records:
                writer.append(record)
        return self.log_path


class UploadCollector:
    """Single-player client-side execution: assign, then verify the upload."""

    def __init__(self, scene: GymScene, session_id: str,
                 participants: dict[int, str], log_dir: str | Path,
                 seed: int, condition: int | None = None):
        self.scene = scene
        self.session_id = session_id
        self.participants = dict(participants)
        self.seed = seed
        self.condition = condition
        self.log_dir = Path(log_dir)
        self.records: dict[int, list[TrajectoryRecord]] = {}

    def assign_message(self, player: int = 0) -> dict:
        config = self.scene.config
        return {
            "type": "assign",
            "player_id": player,
            "session_id": self.session_id,
            "seed": str(self.seed),
            "env_config": config.env.to_text(),
            "episodes": config.episodes,
            "fps": config.fps,
            "mode": config.mode.value,
        }

    def handle_upload(self, message: dict) -> None:
        episode = int(message["episode"])
        self.records[episode] = _parse_uploaded_records(
            self.session_id, episode, message["records"])

    @property
    def complete(self) -> bool:
        return all(e in self.records
                   for e in range(self.scene.config.episodes))

    def finalize(self) -> Path:
        if not self.complete:
            raise ValueError("missing trajectory uploads")
        header = TrajectoryHeader(
            session_id=self.session_id,
            env_config_text=self.scene.config.env.to_text(),
            seed=self.seed,
            participants=self.participants,
            condition=self.condition,
            episodes=self.scene.config.episodes,
        )
        rows = [r for e in sorted(self.records) for r in self.records[e]]
        verify_records(header, rows)
        path = self.log_dir / f"{self.session_id}.traj"
        with TrajectoryWriter(path, header) as writer:
            for record in rows:
                writer.append(record)
        return path
