"""A deterministic phase iterator for the alternating bit protocol.

The sender owns ``q_s`` (next sequence number) and ``p_s`` (sequence number
of the message currently being sent); the receiver owns ``q_r`` (expected
sequence number) and the backup bit ``p_r``, kept equal to ``1 - q_r``.
One packet takes three phases: send, receive, acknowledge. A phase whose
guard is false does nothing and the protocol waits there; if no other
phase can run in the meantime, that wait is permanent.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

PHASES = 6


@dataclass(frozen=True)
class AbpState:
    q_s: int = 0
    q_r: int = 0
    p_s: int = 1
    p_r: int = 1
    phase: int = 1  # phase about to run, 1..6
    packet: int = 0  # index of the packet currently in flight

    def __post_init__(self):
        for name in ("q_s", "q_r", "p_s", "p_r"):
            if getattr(self, name) not in (0, 1):
                raise ValueError(f"{name} must be 0 or 1")
        if not 1 <= self.phase <= PHASES:
            raise ValueError("phase must be between 1 and 6")

    @property
    def bits(self) -> tuple:
        """``((q_s, q_r), (p_s, p_r))``."""
        return (self.q_s, self.q_r), (self.p_s, self.p_r)

    @property
    def backup_consistent(self) -> bool:
        return self.p_r != self.q_r


def _role(phase: int) -> str:
    return ("send", "receive", "ack")[(phase - 1) % 3]


def guard(s: AbpState) -> bool:
    role = _role(s.phase)
    if role == "send":
        return s.q_s != s.p_s
    if role == "receive":
        return s.p_s == s.q_r
    return 1 - s.q_r == s.p_s


def abp_step(s: AbpState) -> AbpState:
    """Run the current phase; a state whose guard fails is returned unchanged."""
    if not guard(s):
        return s
    nxt = s.phase % PHASES + 1
    role = _role(s.phase)
    if role == "send":
        return replace(s, p_s=s.q_s, phase=nxt)
    if role == "receive":
        return replace(s, q_r=1 - s.q_r, p_r=1 - s.p_r, phase=nxt)
    return replace(s, q_s=1 - s.p_s, packet=s.packet + 1, phase=nxt)


def abp_run(packets: int, start: AbpState | None = None) -> list:
    """States at every phase boundary while ``packets`` packets are delivered.

    The list starts with the initial state and has ``3 * packets + 1``
    entries unless the protocol gets stuck, in which case it ends at the
    stuck state.
    """
    s = start or AbpState()
    trace = [s]
    for _ in range(3 * packets):
        nxt = abp_step(s)
        if nxt == s:
            break
        s = nxt
        trace.append(s)
    return trace


def deadlocked(s: AbpState) -> bool:
    """True when the phase about to run can never fire (nothing else moves)."""
    return not guard(s)


def flip(s: AbpState, var: str) -> AbpState:
    """A transient fault flipping one protocol bit."""
    if var not in ("q_s", "q_r", "p_s", "p_r"):
        raise ValueError(f"unknown protocol variable {var!r}")
    return replace(s, **{var: 1 - getattr(s, var)})


def recover_receiver(s: AbpState) -> AbpState:
    """Receiver self-correction: if ``p_r == q_r`` restore ``q_r := 1 - p_r``."""
    if s.p_r == s.q_r:
        return replace(s, q_r=1 - s.p_r)
    return s
