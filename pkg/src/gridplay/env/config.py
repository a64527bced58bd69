"""Environment configuration and its text file format.

The file format is line-oriented ``key = value``.  The layout is given as
an indented block after ``layout =``; the common leading indent of the
block is stripped, interior spaces are preserved (they are floor cells).

    name = cramped_room
    scope = overcooked
    action_set = cardinal
    max_ticks = 400
    seed = 7
    features = agent_dir, inventory_onehot
    rewards = onion_in_pot, soup_delivery
    param.cook_time = 20
    layout =
        XXPXX
        O 1 X
        X 2 X
        XDXSX
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .actions import ActionMode


class InvalidConfig(Exception):
    pass


@dataclass
class EnvConfig:
    name: str
    scope: str
    layout: str
    action_mode: ActionMode = ActionMode.CARDINAL
    features: list[str] = field(default_factory=list)
    rewards: list[str] = field(default_factory=list)
    max_ticks: int = 400
    seed: int = 0
    params: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if isinstance(self.action_mode, str):
            self.action_mode = ActionMode(self.action_mode)
        if self.max_ticks < 1:
            raise InvalidConfig("max_ticks must be >= 1")
        if not self.layout.strip():
            raise InvalidConfig("layout must be non-empty")

    def param(self, name: str, default: int) -> int:
        return self.params.get(name, default)

    def replace(self, **kwargs) -> "EnvConfig":
        data = dict(
            name=self.name, scope=self.scope, layout=self.layout,
            action_mode=self.action_mode, features=list(self.features),
            rewards=list(self.rewards), max_ticks=self.max_ticks,
            seed=self.seed, params=dict(self.params),
        )
        data.update(kwargs)
        return EnvConfig(**data)

    # -- text format --------------------------------------------------

    def to_text(self) -> str:
        lines = [
            f"name = {self.name}",
            f"scope = {self.scope}",
            f"action_set = {self.action_mode.value}",
            f"max_ticks = {self.max_ticks}",
            f"seed = {self.seed}",
            f"features = {', '.join(self.features)}",
            f"rewards = {', '.join(self.rewards)}",
        ]
        for key in sorted(self.params):
            lines.append(f"param.{key} = {self.params[key]}")
        lines.append("layout =")
        for row in self.layout.splitlines():
            lines.append("    " + row)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "EnvConfig":
        fields: dict[str, str] = {}
        params: dict[str, int] = {}
        layout_lines: list[str] | None = None
        for raw in text.splitlines():
            if layout_lines is not None:
                if raw.strip() == "" and not layout_lines:
                    continue
                if raw.startswith((" ", "\t")):
                    layout_lines.append(raw)
                    continue
                layout_lines = _close_layout(fields, layout_lines)
                # fall through: this line is a new key = value
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidConfig(f"bad config line: {raw!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "layout":
                layout_lines = []
                continue
            if key.startswith("param."):
                try:
                    params[key[len("param."):]] = int(value)
                except ValueError:
                    raise InvalidConfig(f"param {key!r} must be an integer") from None
            else:
                fields[key] = value
        if layout_lines is not None:
            _close_layout(fields, layout_lines)

        missing = {"name", "scope", "layout"} - fields.keys()
        if missing:
            raise InvalidConfig(f"missing config keys: {sorted(missing)}")

        def split_list(value: str) -> list[str]:
            return [v.strip() for v in value.split(",") if v.strip()]

        try:
            return cls(
                name=fields["name"],
                scope=fields["scope"],
                layout=fields["layout"],
                action_mode=ActionMode(fields.get("action_set", "cardinal")),
                features=split_list(fields.get("features", "")),
                rewards=split_list(fields.get("rewards", "")),
                max_ticks=int(fields.get("max_ticks", "400")),
                seed=int(fields.get("seed", "0")),
                params=params,
            )
        except ValueError as exc:
            raise InvalidConfig(str(exc)) from None


def _close_layout(fields: dict[str, str], layout_lines: list[str]) -> None:
    if not layout_lines:
        raise InvalidConfig("layout block is empty")
    indent = min(len(line) - len(line.lstrip(" ")) for line in layout_lines)
    fields["layout"] = "\n".join(line[indent:].rstrip("\r") for line in layout_lines)
    return None
