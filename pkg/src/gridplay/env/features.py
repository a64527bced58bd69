"""Composable observation features.

A feature is registered per scope as a builder: given the environment
config it returns a fixed dimension and a pure extractor mapping
(state, agent_id) to a list of floats.  Extractors must not draw RNG or
mutate the state.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Callable

from ..core.grid import GridState

if TYPE_CHECKING:
    from .config import EnvConfig

Extractor = Callable[[GridState, int], list[float]]
FeatureBuilder = Callable[["EnvConfig"], tuple[int, Extractor]]


class UnknownFeature(Exception):
    pass


_builders: dict[tuple[str, str], FeatureBuilder] = {}


def register_feature(scope: str, name: str, builder: FeatureBuilder) -> None:
    key = (scope, name)
    if key in _builders:
        raise ValueError(f"feature {scope}/{name} already registered")
    _builders[key] = builder


def feature_registered(scope: str, name: str) -> bool:
    return (scope, name) in _builders


class ComposedFeatures:
    """Concatenation of named features, own agent first then others.

    The observation for agent j is the per-agent feature block for j,
    followed by the block for every other agent in ascending agent_id.
    """

    def __init__(self, scope: str, names: list[str], config: "EnvConfig"):
        self.names = list(names)
        self.parts: list[tuple[int, Extractor]] = []
        for name in names:
            try:
                builder = _builders[(scope, name)]
            except KeyError:
                raise UnknownFeature(f"no feature {scope}/{name}") from None
            self.parts.append(builder(config))
        self.per_agent_dim = sum(dim for dim, _ in self.parts)

    def dim(self, num_agents: int) -> int:
        return self.per_agent_dim * num_agents

    def agent_block(self, state: GridState, agent_id: int) -> list[float]:
        block: list[float] = []
        for expected_dim, extractor in self.parts:
            values = extractor(state, agent_id)
            if len(values) != expected_dim:
                raise AssertionError(
                    f"feature produced {len(values)} values, declared {expected_dim}"
                )
            block.extend(values)
        return block

    def observe(self, state: GridState, agent_id: int) -> list[float]:
        obs = self.agent_block(state, agent_id)
        for other in state.agents:
            if other.agent_id != agent_id:
                obs.extend(self.agent_block(state, other.agent_id))
        return obs


def compose_features(names: list[str], config: "EnvConfig") -> ComposedFeatures:
    return ComposedFeatures(config.scope, names, config)
