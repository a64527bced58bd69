"""Object kind registry.

A kind describes one species of grid object: its layout character, its
interaction capabilities, and the shape of its per-instance state vector.
Kinds are grouped into scopes so different environments can reuse
characters without colliding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable


class RegistryError(Exception):
    pass


class DuplicateKind(RegistryError):
    pass


class DuplicateChar(RegistryError):
    pass


class UnknownKind(RegistryError):
    pass


@dataclass(frozen=True)
class ObjectKind:
    name: str
    scope: str
    char: str
    color: str = "grey"
    can_pickup: bool = False
    can_toggle: bool = False
    can_overlap: bool = False
    blocks_movement: bool = False
    state_init: tuple[int, ...] = ()
    # Optional override for state-dependent blocking (e.g. an opened door).
    # Receives the instance state vector; only consulted when
    # blocks_movement is True.
    blocks_when: Callable[[tuple[int, ...]], bool] | None = field(
        default=None, compare=False
    )

    def __post_init__(self) -> None:
        if len(self.char) != 1:
            raise ValueError(f"kind {self.name!r}: char must be one character")
        if self.char.isdigit() or self.char == " ":
            raise ValueError(f"kind {self.name!r}: char {self.char!r} is reserved")

    @property
    def state_size(self) -> int:
        return len(self.state_init)

    def blocks(self, state: tuple[int, ...] | list[int]) -> bool:
        if not self.blocks_movement:
            return False
        if self.blocks_when is not None:
            return self.blocks_when(tuple(state))
        return True


class ObjectInstance:
    """A placed object: a kind plus its mutable small-integer state."""

    __slots__ = ("kind", "state")

    def __init__(self, kind: ObjectKind, state: list[int] | None = None):
        self.kind = kind
        self.state = list(kind.state_init) if state is None else list(state)
        if len(self.state) != kind.state_size:
            raise ValueError(
                f"{kind.name}: state length {len(self.state)} != {kind.state_size}"
            )

    def clone(self) -> "ObjectInstance":
        return ObjectInstance(self.kind, list(self.state))

    def __repr__(self) -> str:
        return f"ObjectInstance({self.kind.name}, state={self.state})"


class Registry:
    """Kind lookup by (scope, name) and by (scope, char)."""

    def __init__(self) -> None:
        self._by_name: dict[tuple[str, str], ObjectKind] = {}
        self._by_char: dict[tuple[str, str], ObjectKind] = {}

    def register(self, kind: ObjectKind) -> ObjectKind:
        name_key = (kind.scope, kind.name)
        char_key = (kind.scope, kind.char)
        if name_key in self._by_name:
            raise DuplicateKind(f"{kind.scope}/{kind.name} already registered")
        if char_key in self._by_char:
            raise DuplicateChar(
                f"char {kind.char!r} already registered in scope {kind.scope!r}"
            )
        self._by_name[name_key] = kind
        self._by_char[char_key] = kind
        return kind

    def by_name(self, scope: str, name: str) -> ObjectKind:
        try:
            return self._by_name[(scope, name)]
        except KeyError:
            raise UnknownKind(f"no kind {scope}/{name}") from None

    def by_char(self, scope: str, char: str) -> ObjectKind:
        try:
            return self._by_char[(scope, char)]
        except KeyError:
            raise UnknownKind(f"no kind with char {char!r} in scope {scope!r}") from None

    def has_char(self, scope: str, char: str) -> bool:
        return (scope, char) in self._by_char

    def in_scope(self, scope: str) -> list[ObjectKind]:
        return [k for (s, _), k in sorted(self._by_name.items()) if s == scope]


# Shared default registry; environments register their kinds here at import.
default_registry = Registry()


def register_object_kind(kind: ObjectKind, registry: Registry | None = None) -> ObjectKind:
    return (registry or default_registry).register(kind)
