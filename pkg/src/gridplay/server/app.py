"""Experiment web service: websocket protocol, matchmaking, sessions.

One websocket per participant.  The server walks each participant
through their stager linearization, measures round-trip latency with a
ping/pong at join, and orchestrates gym scenes in whichever execution
mode the scene declares:

  server_authoritative - the simulation runs here, paced at the scene
      fps in a worker thread; clients stream input messages and receive
      state broadcasts.
  client_single - the client simulates locally from the assigned seed
      and uploads its trajectory, which is replay-verified on arrival.
  client_p2p - two matched clients simulate locally and exchange input
      bundles through the relay; confirmed checksums are cross-checked.

Static files for the browser client are served from --static-dir (the
frontend build output) when present.
"""

from __future__ import annotations

import argparse
import asyncio
import itertools
import json
import logging
import time
import uuid
from pathlib import Path

from aiohttp import WSMsgType, web

from ..core.rng import mix64
from ..replay import MismatchAt
from .matchmaking import MatchTicket, matchmake
from .protocol import ProtocolError, decode, encode
from .runner import (
    DesyncFlagged,
    P2PRelay,
    QueueConnection,
    ServerAuthoritativeSession,
    UploadCollector,
)
from .scenes import (
    EndScene,
    ExecutionMode,
    GymScene,
    InvalidTransition,
    ParticipantFlow,
    StartScene,
    SurveyScene,
    completion_code,
    load_experiment,
    simulated_wait_seconds,
)

logger = logging.getLogger(__name__)


class Participant:
    def __init__(self, participant_id: str, ws: web.WebSocketResponse,
                 flow: ParticipantFlow):
        self.participant_id = participant_id
        self.ws = ws
        self.flow = flow
        self.rtt_ms: float = 0.0
        self.inbox: asyncio.Queue[dict] = asyncio.Queue()
        # Set by the session leader when a shared game session ends; while
        # a peer's handler owns this participant's inbox, our own handler
        # blocks here instead of competing for messages.
        self.released = asyncio.Event()

    async def send(self, message: dict) -> None:
        if not self.ws.closed:
            await self.ws.send_str(encode(message))

    async def recv(self, timeout: float | None = None) -> dict:
        if timeout is None:
            return await self.inbox.get()
        return await asyncio.wait_for(self.inbox.get(), timeout)


class ExperimentServer:
    def __init__(self, stager, settings: dict, log_dir: str | Path,
                 max_rtt_ms: float | None = None, time_scale: float = 1.0,
                 static_dir: str | Path | None = None):
        self.stager = stager
        self.settings = settings
        self.log_dir = Path(log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.max_rtt_ms = max_rtt_ms
        # Scales waiting-room delays; 0 disables them (useful in tests).
        self.time_scale = time_scale
        self.static_dir = Path(static_dir) if static_dir else None
        self._session_counter = itertools.count(1)
        self._queues: dict[str, list[tuple[Participant, float]]] = {}
        self._queue_seq = itertools.count()
        self._survey_log = self.log_dir / "surveys.jsonl"

    # -- wiring --------------------------------------------------------------

    def build_app(self) -> web.Application:
        app = web.Application()
        app.router.add_get("/ws", self.websocket_handler)
        app.router.add_get("/healthz", self.health)
        if self.static_dir and self.static_dir.is_dir():
            app.router.add_get(
                "/", lambda request: web.FileResponse(self.static_dir / "index.html"))
            app.router.add_static("/", self.static_dir)
        return app

    async def health(self, request) -> web.Response:
        return web.json_response({"ok": True})

    # -- participant lifecycle -------------------------------------------------

    async def websocket_handler(self, request) -> web.WebSocketResponse:
        ws = web.WebSocketResponse(heartbeat=30)
        await ws.prepare(request)
        participant: Participant | None = None
        reader = None
        try:
            join = await self._expect(ws, {"join"})
            participant_id = join.get("participant_id") or uuid.uuid4().hex[:10]
            flow = ParticipantFlow(self.stager, participant_id)
            participant = Participant(participant_id, ws, flow)
            reader = asyncio.create_task(self._read_loop(participant))
            await self._measure_rtt(participant)
            if self.max_rtt_ms is not None and participant.rtt_ms > self.max_rtt_ms:
                await participant.send({
                    "type": "error", "code": "rtt_too_high",
                    "detail": f"measured {participant.rtt_ms:.0f}ms over "
                              f"{self.max_rtt_ms:.0f}ms cap"})
                return ws
            await self._send_scene(participant)
            await self._run_flow(participant)
        except (ConnectionError, asyncio.CancelledError):
            pass
        except Exception:
            logger.exception("participant handler failed")
            if participant is not None and not ws.closed:
                await participant.send({"type": "error", "code": "internal"})
        finally:
            if reader is not None:
                reader.cancel()
            if not ws.closed:
                await ws.close()
        return ws

    async def _read_loop(self, participant: Participant) -> None:
        async for msg in participant.ws:
            if msg.type == WSMsgType.TEXT:
                try:
                    message = decode(msg.data)
                except ProtocolError:
                    continue
                await participant.inbox.put(message)
            elif msg.type in (WSMsgType.CLOSE, WSMsgType.ERROR):
                break
        await participant.inbox.put({"type": "_disconnected"})

    async def _expect(self, ws, types: set[str]) -> dict:
        async for msg in ws:
            if msg.type != WSMsgType.TEXT:
                continue
            message = decode(msg.data)
            if message["type"] in types:
                return message
            raise ProtocolError(f"expected {types}, got {message['type']!r}")
        raise ConnectionError("socket closed during handshake")

    async def _measure_rtt(self, participant: Participant) -> None:
        nonce = uuid.uuid4().hex[:8]
        start = time.monotonic()
        await participant.send({"type": "ping", "nonce": nonce})
        while True:
            message = await participant.recv(timeout=10)
            if message.get("type") == "pong" and message.get("nonce") == nonce:
                participant.rtt_ms = (time.monotonic() - start) * 1000
                return
            if message.get("type") == "_disconnected":
                raise ConnectionError("disconnected during rtt measurement")

    # -- scene flow --------------------------------------------------------------

    async def _send_scene(self, participant: Participant) -> None:
        scene = participant.flow.current
        payload: dict = {"type": "scene", "scene_id": scene.scene_id}
        if isinstance(scene, StartScene):
            payload.update(kind="start", page=scene.page)
        elif isinstance(scene, SurveyScene):
            payload.update(kind="survey", questions=list(scene.questions))
        elif isinstance(scene, GymScene):
            payload.update(kind="gym", mode=scene.config.mode.value,
                           key_map=scene.config.key_map,
                           fps=scene.config.fps)
        elif isinstance(scene, EndScene):
            payload.update(kind="end", note=scene.note)
        await participant.send(payload)

    async def _run_flow(self, participant: Participant) -> None:
        flow = participant.flow
        while True:
            scene = flow.current
            if isinstance(scene, EndScene):
                session_id = f"flow-{participant.participant_id}"
                code = completion_code(self.settings["secret"],
                                       participant.participant_id, session_id)
                await participant.send({"type": "code", "code": code})
                return
            if isinstance(scene, GymScene):
                await self._run_gym_scene(participant, scene)
                flow.advance("gym_complete")
                await self._send_scene(participant)
                continue
            message = await participant.recv()
            kind = message.get("type")
            if kind == "_disconnected":
                return
            try:
                if kind == "scene_event":
                    flow.advance(message.get("event", ""))
                elif kind == "survey_submit":
                    self._log_survey(participant, scene.scene_id,
                                     message.get("answers", {}))
                    flow.advance("survey_submit")
                else:
                    continue
            except InvalidTransition as exc:
                await participant.send({"type": "error",
                                        "code": "invalid_transition",
                                        "detail": str(exc)})
                continue
            await self._send_scene(participant)

    def _log_survey(self, participant: Participant, scene_id: str,
                    answers: dict) -> None:
        with self._survey_log.open("a") as fh:
            fh.write(json.dumps({
                "participant": participant.participant_id,
                "scene_id": scene_id,
                "answers": answers,
            }, sort_keys=True) + "\n")

    # -- gym scenes ------------------------------------------------------------

    def _new_session_id(self, scene_id: str) -> str:
        return f"{scene_id}-{next(self._session_counter):04d}"

    def _session_seed(self, session_id: str) -> int:
        return mix64(self.stager.experiment_seed
                     ^ mix64(int.from_bytes(session_id.encode()[:8].ljust(8, b'\0'),
                                            "little")))

    async def _run_gym_scene(self, participant: Participant,
                             scene: GymScene) -> None:
        config = scene.config
        humans_needed = len(config.human_agents)
        if config.mode is ExecutionMode.CLIENT_SINGLE:
            await self._run_client_single(participant, scene)
            return
        if humans_needed <= 1 and config.mode is ExecutionMode.SERVER_AUTHORITATIVE:
            await self._simulated_waiting_room(participant, scene)
            await self._run_server_authoritative(
                {config.human_agents[0]: participant} if humans_needed else {},
                scene)
            return
        group = await self._real_waiting_room(participant, scene)
        if group is None:
            # Another handler leads our session; it owns our inbox until
            # it releases us.
            await participant.released.wait()
            participant.released.clear()
            return
        try:
            if config.mode is ExecutionMode.CLIENT_P2P:
                await self._run_p2p(group, scene)
            else:
                await self._run_server_authoritative(group, scene)
        finally:
            for peer in group.values():
                if peer is not participant:
                    peer.released.set()

    async def _simulated_waiting_room(self, participant: Participant,
                                      scene: GymScene) -> None:
        room = scene.config.waiting_room
        if room.kind != "simulated":
            return
        delay = simulated_wait_seconds(
            self.stager.participant_seed(participant.participant_id), room)
        await participant.send({"type": "match", "status": "waiting",
                                "expected_seconds": round(delay, 1)})
        await asyncio.sleep(delay * self.time_scale)

    async def _real_waiting_room(self, participant: Participant,
                                 scene: GymScene) -> dict[int, Participant] | None:
        """Queue until enough participants reach this scene.

        The earliest-enqueued member of a match (the leader) removes the
        group from the queue and returns it; everyone else gets None and
        must wait to be released.  RTT caps are enforced at join time, so
        queue membership only ends by being matched.
        """
        queue = self._queues.setdefault(scene.scene_id, [])
        ticket_seq = next(self._queue_seq)
        queue.append((participant, ticket_seq))
        await participant.send({"type": "match", "status": "waiting"})
        group_size = len(scene.config.human_agents)
        while True:
            if not any(p is participant for p, _ in queue):
                return None  # a leader matched us into their session
            tickets = [MatchTicket(p.participant_id, seq, p.rtt_ms)
                       for p, seq in queue]
            result = matchmake(tickets, group_size=group_size)
            if result.matches:
                ids = [t.participant_id for t in result.matches[0]]
                if ids[0] == participant.participant_id:
                    matched = [(p, seq) for p, seq in queue
                               if p.participant_id in ids]
                    for entry in matched:
                        queue.remove(entry)
                    group = {agent_id: p for agent_id, (p, _) in
                             zip(sorted(scene.config.human_agents), matched)}
                    for p in group.values():
                        await p.send({"type": "match", "status": "matched"})
                    return group
            await asyncio.sleep(0.02)

    async def _run_server_authoritative(self, humans: dict[int, Participant],
                                        scene: GymScene) -> None:
        session_id = self._new_session_id(scene.scene_id)
        connections = {agent_id: QueueConnection() for agent_id in humans}
        participants = {agent_id: p.participant_id
                        for agent_id, p in humans.items()}
        for agent_id, seat in scene.config.seats.items():
            if seat.kind == "bot":
                participants[agent_id] = f"bot:{seat.policy}"
        session = ServerAuthoritativeSession(
            scene, session_id, participants, connections,
            log_dir=self.log_dir, seed=self._session_seed(session_id),
            on_disconnect="abort")
        pumps = [asyncio.create_task(
            self._pump(humans[agent_id], connections[agent_id]))
            for agent_id in humans]
        frame_interval = (1.0 / scene.config.fps) * self.time_scale
        loop = asyncio.get_running_loop()

        def paced_tick(sess, episode, tick):
            if frame_interval > 0:
                time.sleep(frame_interval)

        try:
            await loop.run_in_executor(None, lambda: session.run(paced_tick))
        finally:
            for pump in pumps:
                pump.cancel()

    async def _pump(self, participant: Participant,
                    connection: QueueConnection) -> None:
        """Bridge one websocket to a session QueueConnection."""
        try:
            while True:
                while True:
                    try:
                        message = participant.inbox.get_nowait()
                    except asyncio.QueueEmpty:
                        break
                    if message.get("type") == "_disconnected":
                        connection.closed = True
                        return
                    if message.get("type") in ("input", "focus"):
                        connection.push(message)
                for outbound in connection.drain_outbound():
                    await participant.send(outbound)
                await asyncio.sleep(0.005)
        except asyncio.CancelledError:
            for outbound in connection.drain_outbound():
                await participant.send(outbound)
            raise

    async def _run_client_single(self, participant: Participant,
                                 scene: GymScene) -> None:
        session_id = self._new_session_id(scene.scene_id)
        collector = UploadCollector(
            scene, session_id, {0: participant.participant_id},
            log_dir=self.log_dir, seed=self._session_seed(session_id))
        await participant.send(collector.assign_message(player=0))
        while not collector.complete:
            message = await participant.recv()
            kind = message.get("type")
            if kind == "_disconnected":
                return
            if kind == "trajectory_upload":
                collector.handle_upload(message)
        try:
            path = collector.finalize()
            logger.info("verified client-side trajectory %s", path)
        except MismatchAt as err:
            await participant.send({"type": "error", "code": "replay_mismatch",
                                    "detail": str(err)})
            raise

    async def _run_p2p(self, pair: dict[int, Participant],
                       scene: GymScene) -> None:
        session_id = self._new_session_id(scene.scene_id)
        players = sorted(pair)
        relay = P2PRelay(scene, session_id,
                         {aid: pair[aid].participant_id for aid in players},
                         log_dir=self.log_dir,
                         seed=self._session_seed(session_id))
        for player, message in relay.start():
            await pair[player].send(message)
        try:
            while not relay.complete and relay.flagged is None:
                idle = True
                for agent_id in players:
                    p = pair[agent_id]
                    try:
                        message = p.inbox.get_nowait()
                    except asyncio.QueueEmpty:
                        continue
                    idle = False
                    if message.get("type") == "_disconnected":
                        raise ConnectionError(f"{p.participant_id} left")
                    for dest, reply in relay.handle(agent_id, message):
                        await pair[dest].send(reply)
                if idle:
                    await asyncio.sleep(0.002)
            if relay.flagged is None:
                relay.finalize()
                logger.info("verified p2p trajectory %s", relay.log_path)
        except DesyncFlagged:
            logger.warning("session %s flagged for desync", session_id)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="gridplay-server",
        description="Serve a browser experiment from a config file.")
    parser.add_argument("--config", required=True,
                        help="experiment config (JSON)")
    parser.add_argument("--port", type=int, default=8080)
    parser.add_argument("--host", default="0.0.0.0")
    parser.add_argument("--max-rtt-ms", type=float, default=None)
    parser.add_argument("--log-dir", default="./logs")
    parser.add_argument("--static-dir", default=None,
                        help="frontend build directory to serve at /")
    parser.add_argument("--headless-bots", action="store_true",
                        help="run all-bot gym scenes at full speed")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    stager, settings = load_experiment(args.config)
    server = ExperimentServer(
        stager, settings, log_dir=args.log_dir, max_rtt_ms=args.max_rtt_ms,
        time_scale=0.0 if args.headless_bots else 1.0,
        static_dir=args.static_dir)
    web.run_app(server.build_app(), host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
