from .actions import (
    CARDINAL_ACTIONS,
    ROTATIONAL_ACTIONS,
    ActionMode,
    ActionSet,
    InvalidAction,
    action_set_for,
)
from .config import EnvConfig, InvalidConfig
from .environment import (
    GridEnv,
    InteractionHooks,
    MissingAction,
    StepResult,
    default_pickup_drop,
)
from .features import (
    ComposedFeatures,
    UnknownFeature,
    compose_features,
    feature_registered,
    register_feature,
)
from .rewards import (
    RewardRule,
    UnknownReward,
    evaluate_rewards,
    register_reward,
    reward_registered,
    rewards_by_name,
    rule_fires,
)

__all__ = [
    "ActionMode",
    "ActionSet",
    "CARDINAL_ACTIONS",
    "ComposedFeatures",
    "EnvConfig",
    "GridEnv",
    "InteractionHooks",
    "InvalidAction",
    "InvalidConfig",
    "MissingAction",
    "ROTATIONAL_ACTIONS",
    "RewardRule",
    "StepResult",
    "UnknownFeature",
    "UnknownReward",
    "action_set_for",
    "compose_features",
    "default_pickup_drop",
    "evaluate_rewards",
    "feature_registered",
    "register_feature",
    "register_reward",
    "reward_registered",
    "rewards_by_name",
    "rule_fires",
]
