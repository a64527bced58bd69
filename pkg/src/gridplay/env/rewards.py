"""Declarative interaction rewards.

A rule names the action an agent must take, what it must be holding, and
what it must be facing, all evaluated on the pre-step state.  An optional
extra condition narrows the trigger further (e.g. pot capacity).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..core.grid import GridPos, GridState, forward_pos


class UnknownReward(Exception):
    pass


ExtraCondition = Callable[[GridState, int, GridPos], bool]


@dataclass(frozen=True)
class RewardRule:
    name: str
    action: str
    value: float
    holds: str | None = None
    faces: str | None = None
    extra_condition: ExtraCondition | None = None


_rules: dict[tuple[str, str], RewardRule] = {}


def register_reward(scope: str, rule: RewardRule) -> None:
    key = (scope, rule.name)
    if key in _rules:
        raise ValueError(f"reward {scope}/{rule.name} already registered")
    _rules[key] = rule


def reward_registered(scope: str, name: str) -> bool:
    return (scope, name) in _rules


def rewards_by_name(scope: str, names: list[str]) -> list[RewardRule]:
    out = []
    for name in names:
        try:
            out.append(_rules[(scope, name)])
        except KeyError:
            raise UnknownReward(f"no reward {scope}/{name}") from None
    return out


def _faced_kind_matches(prev: GridState, pos: GridPos, kind_name: str) -> bool:
    static = prev.static_at(pos)
    if static is not None and static.kind.name == kind_name:
        return True
    item = prev.item_at(pos)
    return item is not None and item.kind.name == kind_name


def rule_fires(rule: RewardRule, prev: GridState, agent_id: int,
               action_name: str) -> bool:
    if action_name != rule.action:
        return False
    agent = prev.agent(agent_id)
    if rule.holds is not None:
        if agent.inventory is None or agent.inventory.name != rule.holds:
            return False
    faced = forward_pos(agent.pos, agent.dir)
    if rule.faces is not None and not _faced_kind_matches(prev, faced, rule.faces):
        return False
    if rule.extra_condition is not None:
        return rule.extra_condition(prev, agent_id, faced)
    return True


def evaluate_rewards(rules: list[RewardRule], prev: GridState,
                     action_names: dict[int, str],
                     next_state: GridState) -> dict[int, float]:
    """Per-agent sum of every rule that fires on this transition."""
    totals = {a.agent_id: 0.0 for a in prev.agents}
    for agent_id, action_name in action_names.items():
        for rule in rules:
            if rule_fires(rule, prev, agent_id, action_name):
                totals[agent_id] += rule.value
    return totals
