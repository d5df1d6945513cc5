import random

import pytest
from hypothesis import given, settings, strategies as st

from czkcke.commit import (
    BadTrapdoor, ElGamalCommitment, eg_break_hiding, eg_commit, eg_verify, tc_commit_bit,
    tc_equivocate, tc_open,
)
from czkcke.group import DEMO, TOY


def test_eg_commit_example():
    c, op = eg_commit(TOY, 5, u=3, r=2)
    assert c.as_tuple() == (8, 4, 1)
    assert (op.v, op.r, op.u) == (5, 2, 3)
    c0, _ = eg_commit(TOY, 0, u=3, r=0)
    assert c0.as_tuple() == (8, 1, 1)


def test_eg_verify_examples():
    c = ElGamalCommitment(8, 4, 1)
    assert eg_verify(TOY, c, 5, 2)
    assert not eg_verify(TOY, c, 6, 2)
    assert not eg_verify(TOY, ElGamalCommitment(8, 5, 1), 5, 2)


def test_eg_roundtrip_random():
    rng = random.Random(3)
    for v in range(TOY.q):
        c, op = eg_commit(TOY, v, rng)
        assert eg_verify(TOY, c, op.v, op.r)


def test_perfect_binding_exhaustive_toy():
    for u in range(1, TOY.q):
        seen = {}
        for v in range(TOY.q):
            for r in range(TOY.q):
                c, _ = eg_commit(TOY, v, u=u, r=r)
                assert seen.setdefault(c.as_tuple(), v) == v


def test_break_hiding_examples():
    assert eg_break_hiding(TOY, ElGamalCommitment(8, 4, 1)) == 5
    c0, _ = eg_commit(TOY, 0, u=3, r=0)
    assert eg_break_hiding(TOY, c0) == 0
    c, _ = eg_commit(DEMO, 777, u=12345, r=654321)
    assert eg_break_hiding(DEMO, c, budget=1) is None


@settings(max_examples=10, deadline=None)
@given(v=st.integers(0, DEMO.q - 1), seed=st.integers(0, 2**32))
def test_break_hiding_inverts_commit_on_demo(v, seed):
    c, _ = eg_commit(DEMO, v, random.Random(seed))
    assert eg_break_hiding(DEMO, c) == v


def test_tc_examples():
    tc, s = tc_commit_bit(TOY, 8, 0, s=4)
    assert tc.c == 2 and s == 4
    m2, s2 = tc_equivocate(TOY, tc, 0, 4, trapdoor=3)
    assert (m2, s2) == (1, 0)
    assert tc_open(TOY, tc, 0, 4) and tc_open(TOY, tc, 1, 0)


def test_tc_bad_trapdoor():
    tc, _ = tc_commit_bit(TOY, 8, 0, s=4)
    with pytest.raises(BadTrapdoor):
        tc_equivocate(TOY, tc, 0, 4, trapdoor=4)


def test_tc_rejects_non_bit():
    with pytest.raises(ValueError):
        tc_commit_bit(TOY, 8, 2, s=1)


def test_tc_equivocation_all_openings():
    for m in (0, 1):
        for s in range(TOY.q):
            tc, _ = tc_commit_bit(TOY, 8, m, s=s)
            m2, s2 = tc_equivocate(TOY, tc, m, s, 3)
            assert tc_open(TOY, tc, m, s) and tc_open(TOY, tc, m2, s2) and m2 != m
