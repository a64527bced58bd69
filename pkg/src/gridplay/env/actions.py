"""Action sets and their wire encoding.

Action indices are the wire format used by every transport (input
messages, bundles, trajectory logs), so the orderings below are frozen.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class ActionMode(str, Enum):
    ROTATIONAL = "rotational"
    CARDINAL = "cardinal"


ROTATIONAL_ACTIONS = (
    "turn_left",
    "turn_right",
    "move_forward",
    "pickup_drop",
    "toggle",
    "noop",
)

CARDINAL_ACTIONS = (
    "move_up",
    "move_down",
    "move_left",
    "move_right",
    "pickup_drop",
    "toggle",
    "noop",
)


class InvalidAction(Exception):
    pass


@dataclass(frozen=True)
class ActionSet:
    mode: ActionMode
    actions: tuple[str, ...]

    def index(self, name: str) -> int:
        try:
            return self.actions.index(name)
        except ValueError:
            raise InvalidAction(f"no action {name!r} in {self.mode.value} set") from None

    def name(self, index: int) -> str:
        if not 0 <= index < len(self.actions):
            raise InvalidAction(f"action index {index} out of range for "
                                f"{self.mode.value} set")
        return self.actions[index]

    @property
    def noop(self) -> int:
        return self.actions.index("noop")

    def __len__(self) -> int:
        return len(self.actions)


def action_set_for(mode: ActionMode | str) -> ActionSet:
    mode = ActionMode(mode)
    if mode is ActionMode.ROTATIONAL:
        return ActionSet(mode, ROTATIONAL_ACTIONS)
    return ActionSet(mode, CARDINAL_ACTIONS)
