"""Feature composition and purity."""

import pytest

from gridplay.env import EnvConfig, UnknownFeature, compose_features, register_feature
from gridplay.envs import overcooked


def config_with(features):
    return EnvConfig(
        name="f", scope=overcooked.SCOPE,
        layout="XXXX\nX12X\nXXXX",
        features=features, rewards=[], max_ticks=10, seed=0,
    )


def test_composed_dim_is_per_agent_times_agents():
    config = config_with(["agent_dir"])
    composed = compose_features(["agent_dir"], config)
    assert composed.per_agent_dim == 4
    assert composed.dim(num_agents=2) == 8


def test_empty_feature_list_gives_empty_vector():
    config = config_with([])
    composed = compose_features([], config)
    assert composed.per_agent_dim == 0
    from gridplay.envs.overcooked import make_env
    env = make_env(config)
    state, obs = env.reset()
    assert obs == {0: [], 1: []}


def test_unknown_feature_raises():
    config = config_with([])
    with pytest.raises(UnknownFeature):
        compose_features(["mystery"], config)


def test_own_block_first_then_ascending_others():
    config = config_with(["own_position"])
    composed = compose_features(["own_position"], config)
    env = overcooked.make_env(config_with(["own_position"]))
    state, obs = env.reset()
    # Agent 0 at (1,1), agent 1 at (1,2).
    assert obs[0] == [1.0, 1.0, 1.0, 2.0]
    assert obs[1] == [1.0, 2.0, 1.0, 1.0]
    assert composed.observe(state, 0) == obs[0]


def test_extractors_are_pure():
    env = overcooked.make_env(config_with(overcooked.FEATURE_SET))
    state, _ = env.reset()
    first = env.features.observe(state, 0)
    second = env.features.observe(state, 0)
    assert first == second


def test_duplicate_feature_registration_rejected():
    with pytest.raises(ValueError):
        register_feature(overcooked.SCOPE, "agent_dir", lambda config: (0, None))


def test_dim_mismatch_caught():
    register_feature("feature_test_scope", "liar",
                     lambda config: (3, lambda state, agent_id: [0.0]))
    composed = compose_features(
        ["liar"], config_with([]).replace(scope="feature_test_scope"))
    state, _ = overcooked.make_env(config_with([])).reset()
    with pytest.raises(AssertionError):
        composed.agent_block(state, 0)
