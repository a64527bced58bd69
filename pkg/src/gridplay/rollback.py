"""Rollback session state machine for low-latency multiplayer.

Each peer simulates every frame immediately: its own input is applied as
soon as it is entered, remote inputs are predicted by repeating the last
confirmed action (noop before any is known).  When a remote input arrives
that contradicts a prediction, the session asks the driver to reload the
last state before the mispredicted frame and re-simulate forward with the
corrected inputs.

The session never touches the engine itself.  ``advance()`` returns a
list of SimCommands (save, load, advance, stall) that the driver executes
against whatever simulation it owns, which keeps this module independent
of the grid engine and directly portable.

Frame bookkeeping:
  * ``current_frame``  - next frame to simulate at the frontier;
  * ``confirmed_frame`` - largest frame F such that every player's inputs
    up to and including F are confirmed;
  * speculation is bounded: ``current_frame - confirmed_frame`` may never
    reach ``max_prediction``; the session stalls instead.

``SaveState(f)``/``LoadState(f)`` refer to the state *about to simulate*
frame f (state.tick == f).  Every emitted LoadState targets a frame that
was saved by an earlier SaveState.
"""

from __future__ import annotations

from dataclasses import dataclass


class SessionError(Exception):
    pass


class WrongFrame(SessionError):
    pass


class WindowFull(SessionError):
    pass


class MissingLocalInput(SessionError):
    pass


class MalformedBundle(SessionError):
    pass


class DesyncDetected(SessionError):
    def __init__(self, frame: int, local: int, remote: int):
        super().__init__(
            f"desync at confirmed frame {frame}: "
            f"local {local:#018x} != remote {remote:#018x}")
        self.frame = frame
        self.local = local
        self.remote = remote


@dataclass(frozen=True)
class InputBundle:
    """Contiguous run of one player's actions starting at first_frame."""

    player_id: int
    first_frame: int
    actions: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.actions:
            raise MalformedBundle("empty bundle")
        if self.first_frame < 0:
            raise MalformedBundle("negative first_frame")

    @property
    def last_frame(self) -> int:
        return self.first_frame + len(self.actions) - 1


@dataclass(frozen=True)
class SaveState:
    frame: int


@dataclass(frozen=True)
class LoadState:
    frame: int


@dataclass(frozen=True, eq=True)
class AdvanceFrame:
    frame: int
    actions: dict[int, int]


@dataclass(frozen=True)
class Stall:
    pass


SimCommand = SaveState | LoadState | AdvanceFrame | Stall


@dataclass
class _Entry:
    action: int
    confirmed: bool


class RollbackSession:
    def __init__(self, num_players: int, local_player_id: int,
                 noop_action: int = 0, max_prediction: int = 8):
        if not 0 <= local_player_id < num_players:
            raise ValueError("local_player_id out of range")
        if max_prediction < 1:
            raise ValueError("max_prediction must be >= 1")
        self.num_players = num_players
        self.local_player_id = local_player_id
        self.noop_action = noop_action
        self.max_prediction = max_prediction

        self.current_frame = 0
        self.confirmed_frame = -1
        self.rollback_count = 0
        self.stall_count = 0

        self._log: list[dict[int, _Entry]] = [dict() for _ in range(num_players)]
        self._confirmed_through = [-1] * num_players
        self._highest_confirmed: list[tuple[int, int] | None] = [None] * num_players
        self._pending_rollback: int | None = None
        self._local_checksums: dict[int, int] = {}
        self._remote_checksums: dict[int, int] = {}

    # -- local input --------------------------------------------------

    def add_local_input(self, frame: int, action: int) -> None:
        if frame != self.current_frame:
            raise WrongFrame(f"expected frame {self.current_frame}, got {frame}")
        if frame in self._log[self.local_player_id]:
            raise WrongFrame(f"local input for frame {frame} already recorded")
        if self.current_frame - self.confirmed_frame >= self.max_prediction:
            raise WindowFull(
                f"{self.current_frame - self.confirmed_frame} unconfirmed frames")
        self._store_confirmed(self.local_player_id, frame, action)

    def local_inputs_since(self, first_frame: int) -> InputBundle | None:
        """Confirmed local inputs from first_frame to the newest one."""
        log = self._log[self.local_player_id]
        last = self._confirmed_through[self.local_player_id]
        first = max(first_frame, 0)
        if last < first:
            return None
        actions = tuple(log[f].action for f in range(first, last + 1))
        return InputBundle(self.local_player_id, first, actions)

    # -- remote input ---------------------------------------------------

    def on_remote_input(self, bundle: InputBundle) -> int | None:
        player = bundle.player_id
        if not 0 <= player < self.num_players or player == self.local_player_id:
            raise MalformedBundle(f"bad player id {player}")
        log = self._log[player]
        rollback_to: int | None = None
        for offset, action in enumerate(bundle.actions):
            frame = bundle.first_frame + offset
            entry = log.get(frame)
            if entry is None:
                self._store_confirmed(player, frame, action)
            elif entry.confirmed:
                if entry.action != action:
                    raise MalformedBundle(
                        f"player {player} re-confirmed frame {frame} "
                        f"with a different action")
            else:
                mispredicted = entry.action != action
                self._store_confirmed(player, frame, action)
                if mispredicted and frame < self.current_frame:
                    if rollback_to is None or frame < rollback_to:
                        rollback_to = frame
        if rollback_to is not None:
            if self._pending_rollback is None:
                self._pending_rollback = rollback_to
            else:
                self._pending_rollback = min(self._pending_rollback, rollback_to)
        return rollback_to

    def _store_confirmed(self, player: int, frame: int, action: int) -> None:
        self._log[player][frame] = _Entry(action, True)
        high = self._highest_confirmed[player]
        if high is None or frame > high[0]:
            self._highest_confirmed[player] = (frame, action)
        log = self._log[player]
        through = self._confirmed_through[player]
        while True:
            entry = log.get(through + 1)
            if entry is None or not entry.confirmed:
                break
            through += 1
        self._confirmed_through[player] = through
        self.confirmed_frame = min(self._confirmed_through)

    # -- prediction -----------------------------------------------------

    def predict_input(self, player_id: int, frame: int) -> int:
        """Last confirmed action strictly before ``frame``, else noop."""
        high = self._highest_confirmed[player_id]
        if high is None:
            return self.noop_action
        if high[0] < frame:
            return high[1]
        log = self._log[player_id]
        best_frame, best_action = -1, self.noop_action
        for f, entry in log.items():
            if entry.confirmed and f < frame and f > best_frame:
                best_frame, best_action = f, entry.action
        return best_action

    def _inputs_for(self, frame: int) -> dict[int, int]:
        actions: dict[int, int] = {}
        for player in range(self.num_players):
            entry = self._log[player].get(frame)
            if entry is not None and entry.confirmed:
                actions[player] = entry.action
            else:
                predicted = self.predict_input(player, frame)
                self._log[player][frame] = _Entry(predicted, False)
                actions[player] = predicted
        return actions

    # -- frame advancement ------------------------------------------------

    def resimulate_pending(self) -> list[SimCommand]:
        """Commands for a pending rollback only, without frontier advance."""
        if self._pending_rollback is None:
            return []
        rollback_to = self._pending_rollback
        self._pending_rollback = None
        self.rollback_count += 1
        cmds: list[SimCommand] = [LoadState(rollback_to)]
        for frame in range(rollback_to, self.current_frame):
            cmds.append(SaveState(frame))
            cmds.append(AdvanceFrame(frame, self._inputs_for(frame)))
        return cmds

    def advance(self) -> list[SimCommand]:
        cmds = self.resimulate_pending()
        local = self._log[self.local_player_id].get(self.current_frame)
        if local is None:
            if self.current_frame - self.confirmed_frame >= self.max_prediction:
                self.stall_count += 1
                cmds.append(Stall())
                return cmds
            raise MissingLocalInput(f"no local input for frame {self.current_frame}")
        cmds.append(SaveState(self.current_frame))
        cmds.append(AdvanceFrame(self.current_frame,
                                 self._inputs_for(self.current_frame)))
        self.current_frame += 1
        return cmds

    # -- desync detection -------------------------------------------------

    def record_local_checksum(self, frame: int, checksum: int) -> None:
        if frame > self.confirmed_frame:
            raise SessionError(f"frame {frame} not confirmed yet")
        self._local_checksums[frame] = checksum
        remote = self._remote_checksums.get(frame)
        if remote is not None and remote != checksum:
            raise DesyncDetected(frame, checksum, remote)

    def confirmed_checksum_exchange(self, frame: int, checksum: int) -> bool:
        """Compare a peer's confirmed-frame checksum against our own.

        Returns True on agreement (or when ours is not computed yet, in
        which case the comparison happens in record_local_checksum).
        """
        local = self._local_checksums.get(frame)
        if local is not None and local != checksum:
            raise DesyncDetected(frame, local, checksum)
        self._remote_checksums[frame] = checksum
        return True

    def checksum_log(self) -> dict[int, int]:
        return dict(self._local_checksums)

    # -- introspection -----------------------------------------------------

    def entry(self, player_id: int, frame: int) -> tuple[int, bool] | None:
        e = self._log[player_id].get(frame)
        return None if e is None else (e.action, e.confirmed)

    def confirmed_through(self, player_id: int) -> int:
        """Largest frame with a contiguous confirmed prefix for a player."""
        return self._confirmed_through[player_id]

    @property
    def has_pending_rollback(self) -> bool:
        return self._pending_rollback is not None

    @property
    def speculation_depth(self) -> int:
        return self.current_frame - self.confirmed_frame
