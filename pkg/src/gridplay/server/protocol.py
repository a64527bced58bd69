"""Wire protocol: text messages with a type tag, and the render payload.

Every message is one JSON object with a ``type`` field.  Types:

  client -> server: join, input, input_bundle, checksum, focus,
                    survey_submit, scene_event, trajectory_upload, pong
  server -> client: assign, state, scene, match, code, error, ping,
                    peer_bundle, session_flagged

Action indices are the only encoding of actions on the wire.  The render
payload is a flat sprite list plus grid dimensions; sprites are kind
names, agents render as ``agent`` with their orientation.
"""

from __future__ import annotations

import json

from ..core.grid import GridState

CLIENT_TYPES = {
    "join", "input", "input_bundle", "checksum", "focus", "survey_submit",
    "scene_event", "trajectory_upload", "pong",
}
SERVER_TYPES = {
    "assign", "state", "scene", "match", "code", "error", "ping",
    "peer_bundle", "session_flagged",
}


class ProtocolError(Exception):
    pass


def encode(message: dict) -> str:
    if "type" not in message:
        raise ProtocolError("message missing type tag")
    return json.dumps(message, sort_keys=True)


def decode(text: str, allowed: set[str] | None = None) -> dict:
    try:
        message = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"bad message: {exc}") from None
    if not isinstance(message, dict) or "type" not in message:
        raise ProtocolError("message missing type tag")
    if allowed is not None and message["type"] not in allowed:
        raise ProtocolError(f"unexpected message type {message['type']!r}")
    return message


def render_payload(state: GridState) -> dict:
    """Drawable scene description: one sprite per object and agent."""
    sprites = []
    for pos in state.cells():
        static = state.static_at(pos)
        if static is not None:
            sprites.append({
                "pos": [pos.row, pos.col],
                "sprite_id": static.kind.name,
                "orientation": 0,
                "state": list(static.state),
            })
        item = state.item_at(pos)
        if item is not None:
            sprites.append({
                "pos": [pos.row, pos.col],
                "sprite_id": item.kind.name,
                "orientation": 0,
                "state": list(item.state),
            })
    for agent in state.agents:
        sprite = {
            "pos": [agent.pos.row, agent.pos.col],
            "sprite_id": "agent",
            "orientation": int(agent.dir),
            "variant": agent.agent_id,
        }
        if agent.inventory is not None:
            sprite["carrying"] = agent.inventory.name
        sprites.append(sprite)
    return {"width": state.width, "height": state.height, "sprites": sprites}


def state_message(frame: int, state: GridState, score: float,
                  time_left_seconds: float, episode: int) -> dict:
    return {
        "type": "state",
        "frame": frame,
        "episode": episode,
        "render": render_payload(state),
        "hud": {"score": round(score, 2),
                "time_left": round(time_left_seconds, 1)},
    }
