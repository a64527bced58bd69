"""Grid world state: layout parsing, agents, and simultaneous movement.

All state is small integers (positions, direction, object state vectors,
tick, RNG words).  Nothing here touches floats or wall-clock time, which
keeps serialized states byte-identical across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, NamedTuple

from .objects import ObjectInstance, ObjectKind, Registry, UnknownKind, default_registry
from .rng import CounterRng


class LayoutError(Exception):
    pass


class NonRectangular(LayoutError):
    pass


class UnknownChar(LayoutError):
    pass


class GridPos(NamedTuple):
    row: int
    col: int


class Direction(IntEnum):
    RIGHT = 0
    DOWN = 1
    LEFT = 2
    UP = 3

    def left(self) -> "Direction":
        return Direction((self - 1) % 4)

    def right(self) -> "Direction":
        return Direction((self + 1) % 4)


# (drow, dcol) per Direction value.
DIR_VECTORS: tuple[tuple[int, int], ...] = ((0, 1), (1, 0), (0, -1), (-1, 0))


def forward_pos(pos: GridPos, direction: Direction) -> GridPos:
    dr, dc = DIR_VECTORS[direction]
    return GridPos(pos.row + dr, pos.col + dc)


DEFAULT_SPAWN_DIR = Direction.RIGHT


@dataclass
class AgentState:
    agent_id: int
    pos: GridPos
    dir: Direction
    inventory: ObjectKind | None = None

    def clone(self) -> "AgentState":
        return AgentState(self.agent_id, self.pos, self.dir, self.inventory)


class GridState:
    """Complete world state: two object layers, agents, tick, RNG."""

    __slots__ = ("width", "height", "scope", "static_layer", "item_layer",
                 "agents", "tick", "rng")

    def __init__(self, width: int, height: int, scope: str,
                 rng: CounterRng | None = None):
        self.width = width
        self.height = height
        self.scope = scope
        self.static_layer: list[ObjectInstance | None] = [None] * (width * height)
        self.item_layer: list[ObjectInstance | None] = [None] * (width * height)
        self.agents: list[AgentState] = []
        self.tick = 0
        self.rng = rng if rng is not None else CounterRng(0)

    # -- cell access ------------------------------------------------------

    def _index(self, pos: GridPos) -> int:
        return pos[0] * self.width + pos[1]

    def in_bounds(self, pos: GridPos) -> bool:
        return 0 <= pos[0] < self.height and 0 <= pos[1] < self.width

    def static_at(self, pos: GridPos) -> ObjectInstance | None:
        return self.static_layer[self._index(pos)] if self.in_bounds(pos) else None

    def item_at(self, pos: GridPos) -> ObjectInstance | None:
        return self.item_layer[self._index(pos)] if self.in_bounds(pos) else None

    def set_static(self, pos: GridPos, obj: ObjectInstance | None) -> None:
        self.static_layer[self._index(pos)] = obj

    def set_item(self, pos: GridPos, obj: ObjectInstance | None) -> None:
        self.item_layer[self._index(pos)] = obj

    def agent(self, agent_id: int) -> AgentState:
        return self.agents[agent_id]

    def agent_at(self, pos: GridPos) -> AgentState | None:
        for a in self.agents:
            if a.pos == pos:
                return a
        return None

    def blocks_movement(self, pos: GridPos) -> bool:
        if not self.in_bounds(pos):
            return True
        obj = self.static_layer[self._index(pos)]
        if obj is not None and obj.kind.blocks(obj.state):
            return True
        # Agents may share a cell with an item only when the item kind
        # opts in via can_overlap.
        item = self.item_layer[self._index(pos)]
        return item is not None and not item.kind.can_overlap

    def cells(self) -> Iterator[GridPos]:
        for r in range(self.height):
            for c in range(self.width):
                yield GridPos(r, c)

    def find_static(self, kind_name: str) -> list[tuple[GridPos, ObjectInstance]]:
        """All static instances of a kind, in row-major order."""
        out = []
        for pos in self.cells():
            obj = self.static_layer[self._index(pos)]
            if obj is not None and obj.kind.name == kind_name:
                out.append((pos, obj))
        return out

    def find_items(self, kind_name: str) -> list[tuple[GridPos, ObjectInstance]]:
        out = []
        for pos in self.cells():
            obj = self.item_layer[self._index(pos)]
            if obj is not None and obj.kind.name == kind_name:
                out.append((pos, obj))
        return out

    def census(self) -> dict[str, int]:
        """Count of placed instances per kind name (both layers)."""
        counts: dict[str, int] = {}
        for layer in (self.static_layer, self.item_layer):
            for obj in layer:
                if obj is not None:
                    counts[obj.kind.name] = counts.get(obj.kind.name, 0) + 1
        return counts

    def clone(self) -> "GridState":
        out = GridState(self.width, self.height, self.scope, self.rng.clone())
        out.static_layer = [o.clone() if o else None for o in self.static_layer]
        out.item_layer = [o.clone() if o else None for o in self.item_layer]
        out.agents = [a.clone() for a in self.agents]
        out.tick = self.tick
        return out


# -- layout parsing --------------------------------------------------------

AGENT_CHARS = "123456789"


def parse_ascii_layout(text: str, scope: str, seed: int = 0,
                       registry: Registry | None = None) -> GridState:
    """Build a tick-0 state from an ASCII layout.

    Spaces are empty floor, digits 1..9 are agent spawns (facing right),
    every other character must resolve to a registered kind in the scope.
    Kinds that can be picked up land in the item layer, everything else in
    the static layer.
    """
    registry = registry or default_registry
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines:
        raise LayoutError("empty layout")
    width = len(lines[0])
    if any(len(line) != width for line in lines):
        raise NonRectangular("layout lines have differing lengths")

    state = GridState(width, len(lines), scope, CounterRng(seed))
    spawns: list[tuple[int, GridPos]] = []
    for r, line in enumerate(lines):
        for c, ch in enumerate(line):
            if ch == " ":
                continue
            if ch in AGENT_CHARS:
                spawns.append((int(ch) - 1, GridPos(r, c)))
                continue
            try:
                kind = registry.by_char(scope, ch)
            except UnknownKind:
                raise UnknownChar(f"char {ch!r} at row {r}, col {c} "
                                  f"not registered in scope {scope!r}") from None
            obj = ObjectInstance(kind)
            if kind.can_pickup:
                state.set_item(GridPos(r, c), obj)
            else:
                state.set_static(GridPos(r, c), obj)

    spawns.sort()
    seen: set[int] = set()
    for agent_id, pos in spawns:
        if agent_id in seen:
            raise LayoutError(f"duplicate agent digit {agent_id + 1}")
        seen.add(agent_id)
        if state.blocks_movement(pos):
            raise LayoutError(f"agent {agent_id + 1} spawns on a blocking cell")
        state.agents.append(AgentState(agent_id, pos, DEFAULT_SPAWN_DIR))
    if sorted(seen) != list(range(len(seen))):
        raise LayoutError("agent digits must be consecutive starting at 1")
    return state


def serialize_layout(state: GridState) -> str:
    """Inverse of parse_ascii_layout for states that came from a layout.

    Cells holding both a static object and an item cannot be represented
    and raise; agents render as their 1-based digit.
    """
    rows = []
    for r in range(state.height):
        row = []
        for c in range(state.width):
            pos = GridPos(r, c)
            static = state.static_at(pos)
            item = state.item_at(pos)
            agent = state.agent_at(pos)
            occupants = sum(x is not None for x in (static, item, agent))
            if occupants > 1:
                raise LayoutError(f"cell {pos} not representable in a layout")
            if agent is not None:
                row.append(str(agent.agent_id + 1))
            elif static is not None:
                row.append(static.kind.char)
            elif item is not None:
                row.append(item.kind.char)
            else:
                row.append(" ")
        rows.append("".join(row))
    return "\n".join(rows) + "\n"


# -- simultaneous movement -------------------------------------------------

def resolve_moves(state: GridState, proposals: dict[int, GridPos]) -> GridState:
    """Apply simultaneous move proposals with mutual blocking.

    Rules (all outcomes deterministic, no RNG):
      * moves into blocking cells or off-grid are cancelled;
      * two or more agents proposing the same cell are all cancelled;
      * two agents swapping cells are both cancelled;
      * moves into a cell whose occupant ends up staying are cancelled
        (applied to a fixpoint, so blocked chains propagate);
      * everything else moves at once, so rotations of 3+ agents succeed.

    The result never depends on agent iteration order.
    """
    current = {a.agent_id: a.pos for a in state.agents}
    moving: dict[int, GridPos] = {}
    for agent_id, target in proposals.items():
        if target != current[agent_id]:
            moving[agent_id] = target

    cancelled: set[int] = set()
    for agent_id, target in moving.items():
        if not state.in_bounds(target) or state.blocks_movement(target):
            cancelled.add(agent_id)

    # Same-target conflicts cancel every contender.
    by_target: dict[GridPos, list[int]] = {}
    for agent_id, target in moving.items():
        by_target.setdefault(target, []).append(agent_id)
    for contenders in by_target.values():
        if len(contenders) > 1:
            cancelled.update(contenders)

    # Swaps cancel both sides.
    for agent_id, target in moving.items():
        other = state.agent_at(target)
        if other is not None and moving.get(other.agent_id) == current[agent_id]:
            cancelled.add(agent_id)
            cancelled.add(other.agent_id)

    # Cancel moves into cells whose occupant is staying, to a fixpoint.
    changed = True
    while changed:
        changed = False
        for agent_id in sorted(moving):
            if agent_id in cancelled:
                continue
            occupant = state.agent_at(moving[agent_id])
            if occupant is None:
                continue
            oid = occupant.agent_id
            if oid not in moving or oid in cancelled:
                cancelled.add(agent_id)
                changed = True

    for agent_id in sorted(moving):
        if agent_id not in cancelled:
            state.agents[agent_id].pos = moving[agent_id]
    return state
