"""Deterministic simulated network for exercising rollback sessions.

Everything is a discrete-event simulation driven by seeded counter RNGs;
wall clock is never consulted, so a (link seed, env seed, scripts) triple
always produces a byte-identical transcript.

Within one simulated tick the phases are: queue local inputs and send
bundles, deliver due messages, advance both sessions.  A message sent at
tick t with zero latency is therefore seen by the receiver before it
simulates that frame, which is what makes the zero-latency case rollback
free.

Input bundles are cumulative since the last frame the peer acknowledged,
so lost packets are repaired by the redundancy of later sends and no
retransmission protocol is needed.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .core.rng import CounterRng
from .core.snapshot import Snapshot, restore, snapshot, state_checksum
from .env.config import EnvConfig
from .env.environment import GridEnv
from .rollback import (
    AdvanceFrame,
    DesyncDetected,
    InputBundle,
    LoadState,
    RollbackSession,
    SaveState,
    SimCommand,
    Stall,
    WindowFull,
)


@dataclass(frozen=True)
class LinkModel:
    base_latency: int = 0
    jitter: int = 0
    loss_rate: float = 0.0
    allow_reorder: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.loss_rate < 1.0:
            raise ValueError("loss_rate must be in [0, 1)")
        if self.base_latency < 0 or self.jitter < 0:
            raise ValueError("latency and jitter must be non-negative")


@dataclass(frozen=True)
class NetMessage:
    sender: int
    send_tick: int
    bundle: InputBundle | None
    ack: int
    checksums: tuple[tuple[int, int], ...] = ()


class Pipe:
    """One direction of a lossy, jittery link."""

    def __init__(self, link: LinkModel, rng: CounterRng):
        self.link = link
        self.rng = rng
        self.sent = 0
        self.lost = 0
        self.delivered = 0
        self._queue: list[tuple[int, int, NetMessage]] = []
        self._seq = 0
        self._last_arrival = 0

    def send(self, message: NetMessage, tick: int) -> None:
        self.sent += 1
        if self.link.loss_rate > 0.0 and self.rng.random() < self.link.loss_rate:
            self.lost += 1
            return
        delay = self.link.base_latency
        if self.link.jitter:
            delay += self.rng.randint(-self.link.jitter, self.link.jitter)
        arrival = tick + max(0, delay)
        if not self.link.allow_reorder:
            arrival = max(arrival, self._last_arrival)
            self._last_arrival = arrival
        self._seq += 1
        heapq.heappush(self._queue, (arrival, self._seq, message))

    def deliver(self, tick: int) -> list[NetMessage]:
        out = []
        while self._queue and self._queue[0][0] <= tick:
            _, _, message = heapq.heappop(self._queue)
            out.append(message)
            self.delivered += 1
        return out

    @property
    def pending(self) -> int:
        return len(self._queue)


@dataclass
class PeerLog:
    player_id: int
    rollbacks: int = 0
    stalls: int = 0
    confirmed_checksums: dict[int, int] = field(default_factory=dict)
    applied_inputs: dict[int, dict[int, int]] = field(default_factory=dict)


@dataclass
class Transcript:
    ticks: int
    wall_ticks: int
    peers: list[PeerLog]
    messages_sent: int
    messages_lost: int
    messages_delivered: int
    outcome: str

    def common_confirmed_frames(self) -> list[int]:
        frames = set(self.peers[0].confirmed_checksums)
        for peer in self.peers[1:]:
            frames &= set(peer.confirmed_checksums)
        return sorted(frames)

    def to_lines(self) -> list[str]:
        lines = [f"transcript ticks={self.ticks} wall={self.wall_ticks} "
                 f"sent={self.messages_sent} lost={self.messages_lost} "
                 f"delivered={self.messages_delivered} outcome={self.outcome}"]
        for peer in self.peers:
            lines.append(f"peer {peer.player_id} rollbacks={peer.rollbacks} "
                         f"stalls={peer.stalls}")
            for frame in sorted(peer.confirmed_checksums):
                actions = peer.applied_inputs.get(frame, {})
                acts = ",".join(f"{p}:{a}" for p, a in sorted(actions.items()))
                lines.append(f"  frame {frame} checksum="
                             f"{peer.confirmed_checksums[frame]:#018x} acts={acts}")
        return lines

    def save(self, path) -> None:
        from pathlib import Path

        Path(path).write_text("\n".join(self.to_lines()) + "\n")


class PeerDriver:
    """Executes SimCommands from one session against its own engine."""

    def __init__(self, env: GridEnv, player_id: int, num_players: int = 2,
                 max_prediction: int = 8):
        from .replay import episode_seed

        self.env = env
        self.player_id = player_id
        self.state, _ = env.reset(seed=episode_seed(env.config.seed, 0))
        self.session = RollbackSession(
            num_players, player_id,
            noop_action=env.action_set.noop,
            max_prediction=max_prediction,
        )
        self.snaps: dict[int, Snapshot] = {}
        self.frame_checksums: dict[int, int] = {}
        self.log = PeerLog(player_id)
        self._recorded_through = -1

    def execute(self, commands: list[SimCommand]) -> None:
        for command in commands:
            if isinstance(command, SaveState):
                self.snaps[command.frame] = snapshot(self.state)
            elif isinstance(command, LoadState):
                self.state = restore(self.snaps[command.frame],
                                     registry=self.env.registry)
            elif isinstance(command, AdvanceFrame):
                self.state, _ = self.env.step(self.state, dict(command.actions))
                self.frame_checksums[command.frame] = state_checksum(self.state)
            elif isinstance(command, Stall):
                pass

    def record_confirmed(self) -> list[tuple[int, int]]:
        """Finalize checksums for newly confirmed frames; returns them."""
        fresh = []
        while self._recorded_through < self.session.confirmed_frame:
            frame = self._recorded_through + 1
            checksum = self.frame_checksums[frame]
            self.session.record_local_checksum(frame, checksum)
            self.log.confirmed_checksums[frame] = checksum
            self.log.applied_inputs[frame] = {
                p: self.session.entry(p, frame)[0]
                for p in range(self.session.num_players)
            }
            fresh.append((frame, checksum))
            self._recorded_through = frame
        return fresh


def lockstep_oracle(config: EnvConfig, scripts: list[list[int]],
                    ticks: int) -> list[int]:
    """Ground truth: apply the true inputs frame by frame, no prediction."""
    from .envs import make_env
    from .replay import episode_seed

    env = make_env(config)
    state, _ = env.reset(seed=episode_seed(config.seed, 0))
    checksums = []
    for frame in range(ticks):
        actions = {player: scripts[player][frame] for player in range(len(scripts))}
        state, _ = env.step(state, actions)
        checksums.append(state_checksum(state))
    return checksums


def run_pair(config: EnvConfig, scripts: list[list[int]], link: LinkModel,
             ticks: int, max_prediction: int = 8, input_delay: int = 0,
             tamper=None) -> Transcript:
    """Drive two full peers against each other over a simulated link.

    ``scripts`` are frame-indexed true inputs, one list per player, each
    at least ``ticks`` long.  ``tamper(peer, tick)`` is an optional fault
    hook for desync testing.  Raises DesyncDetected when the peers'
    confirmed checksums disagree.
    """
    from .envs import make_env

    if len(scripts) != 2:
        raise ValueError("run_pair drives exactly two players")
    if any(len(s) < ticks for s in scripts):
        raise ValueError("scripts must cover every tick")

    rng = CounterRng(link.seed)
    pipes = {
        (0, 1): Pipe(link, rng.spawn(1)),
        (1, 0): Pipe(link, rng.spawn(2)),
    }
    peers = [PeerDriver(make_env(config), p, max_prediction=max_prediction)
             for p in (0, 1)]
    noop = peers[0].env.action_set.noop
    if input_delay > 0:
        # Under a fixed input delay the first ``delay`` frames carry the
        # protocol-known noop for every player, so peers pre-confirm them.
        scripts = delayed_scripts(scripts, input_delay, noop, ticks)
        head = tuple([noop] * min(input_delay, ticks))
        for peer in peers:
            other = 1 - peer.player_id
            if head:
                peer.session.on_remote_input(InputBundle(other, 0, head))
    last_ack_from_peer = [-1, -1]  # most recent ack we received, per peer
    unsent_checksums: list[list[tuple[int, int]]] = [[], []]

    wall_tick = 0
    tick_cap = ticks * 30 + 400
    desync: DesyncDetected | None = None
    try:
        while wall_tick < tick_cap:
            sessions = [p.session for p in peers]
            # Both sessions hold every input and have flushed all their
            # confirmed checksums: the run is over. Whether the last few
            # messages are still in flight no longer matters.
            if all(s.current_frame >= ticks for s in sessions) \
                    and all(s.confirmed_frame >= ticks - 1 for s in sessions) \
                    and not any(unsent_checksums):
                break

            # Phase 1: local inputs and sends.
            for peer in peers:
                session = peer.session
                frame = session.current_frame
                if frame < ticks and session.entry(peer.player_id, frame) is None:
                    try:
                        session.add_local_input(frame, scripts[peer.player_id][frame])
                    except WindowFull:
                        pass
                bundle = session.local_inputs_since(
                    last_ack_from_peer[peer.player_id] + 1)
                bundle = _extend_with_lookahead(
                    bundle, peer, scripts[peer.player_id], input_delay, ticks)
                message = NetMessage(
                    sender=peer.player_id,
                    send_tick=wall_tick,
                    bundle=bundle,
                    ack=session.confirmed_through(1 - peer.player_id),
                    checksums=tuple(unsent_checksums[peer.player_id]),
                )
                unsent_checksums[peer.player_id] = []
                pipes[(peer.player_id, 1 - peer.player_id)].send(message, wall_tick)

            # Phase 2: deliveries.
            for (sender, receiver), pipe in pipes.items():
                for message in pipe.deliver(wall_tick):
                    session = peers[receiver].session
                    if message.bundle is not None:
                        session.on_remote_input(message.bundle)
                    for frame, checksum in message.checksums:
                        session.confirmed_checksum_exchange(frame, checksum)
                    # The ack tells the receiver how much of *its* input
                    # history the sender already holds.
                    last_ack_from_peer[receiver] = max(
                        last_ack_from_peer[receiver], message.ack)

            # Phase 3: advances.
            for peer in peers:
                session = peer.session
                if session.current_frame < ticks:
                    frame = session.current_frame
                    if session.entry(peer.player_id, frame) is None:
                        # The window may have opened up during deliveries.
                        try:
                            session.add_local_input(
                                frame, scripts[peer.player_id][frame])
                        except WindowFull:
                            pass
                    peer.execute(session.advance())
                else:
                    # Finished peers still re-simulate corrections.
                    peer.execute(session.resimulate_pending())
                if tamper is not None:
                    tamper(peer, wall_tick)
                unsent_checksums[peer.player_id].extend(peer.record_confirmed())
                peer.log.rollbacks = session.rollback_count
                peer.log.stalls = session.stall_count
            wall_tick += 1
        else:
            raise RuntimeError(
                f"simulation made no progress within {tick_cap} wall ticks")
    except DesyncDetected as exc:
        desync = exc

    transcript = Transcript(
        ticks=ticks,
        wall_ticks=wall_tick,
        peers=[peer.log for peer in peers],
        messages_sent=sum(p.sent for p in pipes.values()),
        messages_lost=sum(p.lost for p in pipes.values()),
        messages_delivered=sum(p.delivered for p in pipes.values()),
        outcome="ok" if desync is None else f"desync@{desync.frame}",
    )
    if desync is not None:
        desync.transcript = transcript
        raise desync
    return transcript


def export_trajectory(config: EnvConfig, transcript: Transcript, path,
                      session_id: str = "netsim") -> None:
    """Write a transcript's confirmed run as a replay-verifiable
    trajectory file (the confirmed inputs are re-simulated to recover the
    reward and info streams, and every checksum is re-checked)."""
    from .envs import make_env
    from .replay import episode_seed
    from .trajectory import TrajectoryHeader, TrajectoryRecord, TrajectoryWriter

    reference = transcript.peers[0]
    frames = sorted(reference.confirmed_checksums)
    if frames != list(range(len(frames))):
        raise ValueError("transcript confirmed frames are not contiguous")
    env = make_env(config)
    state, _ = env.reset(seed=episode_seed(config.seed, 0))
    header = TrajectoryHeader(
        session_id=session_id,
        env_config_text=config.to_text(),
        seed=config.seed,
        participants={p.player_id: f"peer{p.player_id}"
                      for p in transcript.peers},
    )
    with TrajectoryWriter(path, header) as writer:
        for frame in frames:
            actions = reference.applied_inputs[frame]
            state, result = env.step(state, dict(actions))
            checksum = state_checksum(state)
            if checksum != reference.confirmed_checksums[frame]:
                raise ValueError(f"transcript checksum broken at frame {frame}")
            writer.append(TrajectoryRecord(
                session_id=session_id, episode=0, tick=frame,
                actions=dict(actions), rewards=result.rewards,
                infos=result.infos, state_checksum=checksum))


def delayed_scripts(scripts: list[list[int]], delay: int, noop: int,
                    ticks: int) -> list[list[int]]:
    """Effective frame inputs under a fixed input delay: a key entered at
    tick t lands on frame t + delay, with noop filling the first frames."""
    return [([noop] * delay + list(script))[:max(ticks, len(script))]
            for script in scripts]


def _extend_with_lookahead(bundle: InputBundle | None, peer: PeerDriver,
                           script: list[int], input_delay: int,
                           ticks: int) -> InputBundle | None:
    """Fixed local input delay makes the next ``delay`` inputs known early;
    shipping them with the bundle removes prediction for covered frames."""
    if input_delay <= 0:
        return bundle
    session = peer.session
    first_future = session.confirmed_through(peer.player_id) + 1
    last_future = min(session.current_frame + input_delay, ticks - 1)
    if last_future < first_future:
        return bundle
    future = tuple(script[f] for f in range(first_future, last_future + 1))
    if bundle is None:
        return InputBundle(peer.player_id, first_future, future)
    return InputBundle(peer.player_id, bundle.first_frame,
                       bundle.actions + future)
