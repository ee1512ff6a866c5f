import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopelogic.abp import AbpState, abp_run, abp_step, deadlocked, flip, guard, recover_receiver

# ((q_s, q_r), (p_s, p_r)) after each of the six phases, starting from ((0,0),(1,1))
TABLE = [
    ((0, 0), (0, 1)),
    ((0, 1), (0, 0)),
    ((1, 1), (0, 0)),
    ((1, 1), (1, 0)),
    ((1, 0), (1, 1)),
    ((0, 0), (1, 1)),
]


def test_six_phase_table():
    trace = abp_run(2)
    assert trace[0].bits == ((0, 0), (1, 1))
    assert [s.bits for s in trace[1:]] == TABLE


def test_cycle_returns_to_start():
    trace = abp_run(2)
    assert trace[-1] == AbpState(packet=2)
    assert trace[-1].bits == trace[0].bits and trace[-1].phase == 1


@given(st.integers(0, 12))
def test_backup_invariant_on_correct_runs(packets):
    trace = abp_run(packets)
    assert len(trace) == 3 * packets + 1
    assert all(s.backup_consistent for s in trace)
    assert [s.packet for s in trace[3::3]] == list(range(1, packets + 1))


def test_sender_flip_after_third_phase_deadlocks():
    s = abp_run(1)[-1]
    assert s.phase == 4 and s.q_s == 1
    bad = flip(s, "q_s")
    assert deadlocked(bad)
    assert abp_step(bad) == bad
    assert abp_run(3, bad) == [bad]


def test_receiver_flip_gets_stuck_and_recovery_fixes_it():
    s = abp_run(1)[2]  # after receiving
    bad = flip(s, "q_r")
    assert not bad.backup_consistent
    stuck = abp_run(2, bad)[-1]
    assert deadlocked(stuck)
    fixed = recover_receiver(bad)
    assert fixed.backup_consistent and fixed.bits == s.bits
    assert len(abp_run(2, fixed)) == 7


def test_recovery_is_noop_on_consistent_state():
    s = AbpState()
    assert recover_receiver(s) is s


def test_state_validation():
    with pytest.raises(ValueError):
        AbpState(q_s=2)
    with pytest.raises(ValueError):
        AbpState(phase=7)
    with pytest.raises(ValueError):
        flip(AbpState(), "x")


def test_guards_hold_along_correct_run():
    assert all(guard(s) for s in abp_run(4))
