from .matchmaking import MatchResult, MatchTicket, matchmake
from .runner import (
    DesyncFlagged,
    EpisodeSummary,
    P2PRelay,
    ParticipantDisconnected,
    QueueConnection,
    ServerAuthoritativeSession,
    SessionResult,
    UploadCollector,
)
from .scenes import (
    EndScene,
    ExecutionMode,
    GymScene,
    GymSceneConfig,
    InvalidTransition,
    ParticipantFlow,
    Randomization,
    Scene,
    Seat,
    Stager,
    StartScene,
    SurveyScene,
    WaitingRoom,
    completion_code,
    load_experiment,
    simulated_wait_seconds,
)
from ..trajectory import (
    ActivityReport,
    FocusEvent,
    TrajectoryHeader,
    TrajectoryRecord,
    TrajectoryWriter,
    activity_metrics,
    read_trajectory,
)

__all__ = [
    "ActivityReport",
    "DesyncFlagged",
    "EndScene",
    "EpisodeSummary",
    "ExecutionMode",
    "FocusEvent",
    "GymScene",
    "GymSceneConfig",
    "InvalidTransition",
    "MatchResult",
    "MatchTicket",
    "P2PRelay",
    "ParticipantDisconnected",
    "ParticipantFlow",
    "QueueConnection",
    "Randomization",
    "Scene",
    "Seat",
    "ServerAuthoritativeSession",
    "SessionResult",
    "Stager",
    "StartScene",
    "SurveyScene",
    "TrajectoryHeader",
    "TrajectoryRecord",
    "TrajectoryWriter",
    "UploadCollector",
    "WaitingRoom",
    "activity_metrics",
    "completion_code",
    "load_experiment",
    "matchmake",
    "read_trajectory",
    "simulated_wait_seconds",
]
