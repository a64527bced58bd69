"""Experiment flow: scenes, the stager, and per-participant linearization.

An experiment is an ordered list of scenes (start page, playable game,
survey, completion page).  The stager owns the ordering policy; each
participant gets a deterministic linearization derived from their seed,
so a participant id plus the experiment seed fully reproduces what they
saw and in which order.
"""

from __future__ import annotations

import hashlib
import hmac
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from ..core.rng import CounterRng, mix64
from ..env.config import EnvConfig, InvalidConfig


class InvalidTransition(Exception):
    pass


class ExecutionMode(str, Enum):
    SERVER_AUTHORITATIVE = "server_authoritative"
    CLIENT_SINGLE = "client_single"
    CLIENT_P2P = "client_p2p"


@dataclass(frozen=True)
class Seat:
    kind: str                 # "human" | "bot"
    policy: str | None = None  # bot policy name

    @classmethod
    def parse(cls, text: str) -> "Seat":
        if text == "human":
            return cls("human")
        if text.startswith("bot:"):
            return cls("bot", text.split(":", 1)[1])
        raise InvalidConfig(f"bad seat spec {text!r}")


@dataclass(frozen=True)
class WaitingRoom:
    kind: str = "simulated"   # "real" | "simulated"
    min_seconds: float = 5.0
    max_seconds: float = 25.0


@dataclass(frozen=True)
class GymSceneConfig:
    env: EnvConfig
    key_map: dict[str, int]
    mode: ExecutionMode
    seats: dict[int, Seat]
    fps: int = 10
    episodes: int = 1
    waiting_room: WaitingRoom = WaitingRoom()

    def __post_init__(self) -> None:
        if self.fps <= 0:
            raise InvalidConfig("fps must be positive")
        if self.episodes <= 0:
            raise InvalidConfig("episodes must be positive")
        actions = list(self.key_map.values())
        if len(set(actions)) != len(actions):
            raise InvalidConfig("key_map must be injective")

    @property
    def human_agents(self) -> list[int]:
        return sorted(a for a, seat in self.seats.items() if seat.kind == "human")

    @property
    def bot_agents(self) -> list[int]:
        return sorted(a for a, seat in self.seats.items() if seat.kind == "bot")


@dataclass(frozen=True)
class StartScene:
    scene_id: str
    page: str = ""


@dataclass(frozen=True)
class GymScene:
    scene_id: str
    config: GymSceneConfig


@dataclass(frozen=True)
class SurveyScene:
    scene_id: str
    questions: tuple[str, ...] = ()


@dataclass(frozen=True)
class EndScene:
    scene_id: str
    note: str = ""


Scene = StartScene | GymScene | SurveyScene | EndScene

# Event each scene type accepts as its completion signal.
COMPLETION_EVENTS = {
    StartScene: "start",
    GymScene: "gym_complete",
    SurveyScene: "survey_submit",
}


@dataclass(frozen=True)
class Randomization:
    policy: str = "fixed"     # "fixed" | "shuffle" | "condition"
    shuffle_ids: tuple[str, ...] = ()
    conditions: tuple[tuple[str, ...], ...] = ()


class Stager:
    """Scene order plus the per-participant randomization policy."""

    def __init__(self, scenes: list[Scene],
                 randomization: Randomization = Randomization(),
                 experiment_seed: int = 0):
        ids = [scene.scene_id for scene in scenes]
        if len(set(ids)) != len(ids):
            raise InvalidConfig("scene ids must be unique")
        if not scenes or not isinstance(scenes[-1], EndScene):
            raise InvalidConfig("last scene must be the completion page")
        self.scenes = list(scenes)
        self.randomization = randomization
        self.experiment_seed = experiment_seed

    def participant_seed(self, participant_id: str) -> int:
        digest = hashlib.sha256(
            f"{self.experiment_seed}:{participant_id}".encode()).digest()
        return int.from_bytes(digest[:8], "little")

    def linearize(self, participant_id: str) -> tuple[list[Scene], int | None]:
        """Deterministic (scene order, condition index) for one participant."""
        rng = CounterRng(self.participant_seed(participant_id))
        policy = self.randomization.policy
        if policy == "fixed":
            return list(self.scenes), None
        if policy == "shuffle":
            subset = [i for i, scene in enumerate(self.scenes)
                      if scene.scene_id in self.randomization.shuffle_ids]
            order = list(subset)
            rng.shuffle(order)
            scenes = list(self.scenes)
            for slot, source in zip(subset, order):
                scenes[slot] = self.scenes[source]
            return scenes, None
        if policy == "condition":
            conditions = self.randomization.conditions
            assigned = rng.randrange(len(conditions))
            excluded = {sid for i, group in enumerate(conditions)
                        if i != assigned for sid in group}
            scenes = [s for s in self.scenes if s.scene_id not in excluded]
            return scenes, assigned
        raise InvalidConfig(f"unknown randomization policy {policy!r}")


@dataclass
class ParticipantFlow:
    """One participant's walk through their linearized scenes."""

    stager: Stager
    participant_id: str
    scenes: list[Scene] = field(init=False)
    condition: int | None = field(init=False)
    index: int = 0

    def __post_init__(self) -> None:
        self.scenes, self.condition = self.stager.linearize(self.participant_id)

    @property
    def current(self) -> Scene:
        return self.scenes[self.index]

    @property
    def done(self) -> bool:
        return isinstance(self.current, EndScene)

    def advance(self, event: str) -> Scene:
        scene = self.current
        expected = COMPLETION_EVENTS.get(type(scene))
        if expected is None:
            raise InvalidTransition("the completion page has no next scene")
        if event != expected:
            raise InvalidTransition(
                f"scene {scene.scene_id!r} expects {expected!r}, got {event!r}")
        self.index += 1
        return self.current


def completion_code(secret: str, participant_id: str, session_id: str) -> str:
    """Keyed completion code handed out on the end scene."""
    mac = hmac.new(secret.encode(), f"{participant_id}:{session_id}".encode(),
                   hashlib.sha256)
    return mac.hexdigest()[:12].upper()


def simulated_wait_seconds(participant_seed: int, room: WaitingRoom,
                           draw_index: int = 0) -> float:
    """Waiting-room delay before a bot partner 'joins', uniform in
    [min_seconds, max_seconds), deterministic per participant."""
    rng = CounterRng(mix64(participant_seed ^ mix64(1000 + draw_index)))
    return rng.uniform(room.min_seconds, room.max_seconds)


# -- experiment config file --------------------------------------------------

def load_experiment(path: str | Path) -> tuple[Stager, dict]:
    """Parse the declarative experiment file (JSON): scenes, stager
    policy, env configs, key maps.  Returns (stager, settings)."""
    path = Path(path)
    data = json.loads(path.read_text())
    settings = {
        "experiment": data.get("experiment", path.stem),
        "secret": data.get("secret", "gridplay-dev-secret"),
        "seed": int(data.get("seed", 0)),
    }
    scenes: list[Scene] = []
    for entry in data["scenes"]:
        kind = entry["type"]
        scene_id = entry["id"]
        if kind == "start":
            scenes.append(StartScene(scene_id, entry.get("page", "")))
        elif kind == "survey":
            scenes.append(SurveyScene(scene_id, tuple(entry.get("questions", ()))))
        elif kind == "end":
            scenes.append(EndScene(scene_id, entry.get("note", "")))
        elif kind == "gym":
            env_spec = entry["env"]
            if isinstance(env_spec, str) and env_spec.startswith("@"):
                env_config = EnvConfig.from_text(
                    (path.parent / env_spec[1:]).read_text())
            else:
                env_config = EnvConfig.from_text(env_spec)
            room = entry.get("waiting_room", {})
            config = GymSceneConfig(
                env=env_config,
                key_map={k: int(v) for k, v in entry.get("key_map", {}).items()},
                mode=ExecutionMode(entry.get("mode", "server_authoritative")),
                seats={int(a): Seat.parse(s)
                       for a, s in entry.get("seats", {}).items()},
                fps=int(entry.get("fps", 10)),
                episodes=int(entry.get("episodes", 1)),
                waiting_room=WaitingRoom(
                    kind=room.get("kind", "simulated"),
                    min_seconds=float(room.get("min_seconds", 5.0)),
                    max_seconds=float(room.get("max_seconds", 25.0)),
                ),
            )
            scenes.append(GymScene(scene_id, config))
        else:
            raise InvalidConfig(f"unknown scene type {kind!r}")
    rand = data.get("randomization", {})
    randomization = Randomization(
        policy=rand.get("policy", "fixed"),
        shuffle_ids=tuple(rand.get("shuffle_ids", ())),
        conditions=tuple(tuple(group) for group in rand.get("conditions", ())),
    )
    stager = Stager(scenes, randomization, experiment_seed=settings["seed"])
    return stager, settings
