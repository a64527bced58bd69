"""Matchmaking queue: FIFO pairing with a round-trip-latency cap.

Custom logic plugs in as a policy callable; the default pairs tickets in
enqueue order after dropping any whose measured RTT exceeds the cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class MatchTicket:
    participant_id: str
    enqueue_seq: int
    rtt_ms: float
    attributes: dict = field(default_factory=dict)


@dataclass
class MatchResult:
    matches: list[tuple[MatchTicket, ...]]
    rejected: list[tuple[MatchTicket, str]]
    waiting: list[MatchTicket]


def fifo_policy(tickets: list[MatchTicket], group_size: int,
                max_rtt_ms: float | None) -> MatchResult:
    matches: list[tuple[MatchTicket, ...]] = []
    rejected: list[tuple[MatchTicket, str]] = []
    eligible: list[MatchTicket] = []
    for ticket in sorted(tickets, key=lambda t: t.enqueue_seq):
        if max_rtt_ms is not None and ticket.rtt_ms > max_rtt_ms:
            rejected.append((ticket, f"rtt {ticket.rtt_ms:.0f}ms over "
                                     f"{max_rtt_ms:.0f}ms cap"))
            continue
        eligible.append(ticket)
        if len(eligible) == group_size:
            matches.append(tuple(eligible))
            eligible = []
    return MatchResult(matches=matches, rejected=rejected, waiting=eligible)


def matchmake(tickets: list[MatchTicket], group_size: int = 2,
              max_rtt_ms: float | None = None, policy=None) -> MatchResult:
    """Run one matchmaking pass; matched tickets leave the queue."""
    if policy is None:
        return fifo_policy(tickets, group_size, max_rtt_ms)
    return policy(tickets, group_size, max_rtt_ms)
