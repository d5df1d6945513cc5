import json
import random

import pytest

from czkcke.attacks import AttackNoCsk, HonestProver, Strategy
from czkcke.group import DEMO, TOY
from czkcke.protocol import DlogClaim, MsgType, Stage, Variant, WireMessage, keygen
from czkcke.runtime import (
    CapExceeded, Execution, Halt, OpenSession, RunRecord, Send, UnknownLabel, resume, run,
    snapshot,
)

STAGE_ORDER = {
    "default": [MsgType.STAGE1_FIRST, MsgType.STAGE1_CHALLENGE, MsgType.STAGE1_RESPONSE,
                MsgType.STAGE2_COMMITMENTS, MsgType.STAGE3_FIRST, MsgType.STAGE3_CHALLENGE,
                MsgType.STAGE3_RESPONSE],
    Variant.DV05: [MsgType.STAGE1_FIRST, MsgType.STAGE1_CHALLENGE, MsgType.STAGE1_RESPONSE,
                   MsgType.DV05_PHASE2, MsgType.DV05_PHASE3A, MsgType.DV05_PHASE3Q,
                   MsgType.DV05_PHASE3Z],
}


def execution(strategy, variant="full", params=TOY, seed=1, **kw):
    kp = keygen(params, random.Random(f"{seed}/keygen"))
    return Execution(strategy, params=params, variant=variant, keypair=kp, seed=seed, **kw)


def test_honest_single_session_accepted():
    record = execution(HonestProver()).run()
    assert [s["status"] for s in record.sessions] == ["Accepted"]


def test_halt_immediately():
    record = execution(Strategy()).run()
    assert record.trace == [] and record.sessions == []


def test_same_seed_byte_identical():
    a = execution(HonestProver(count=3), params=DEMO, seed=5).run().dumps()
    b = execution(HonestProver(count=3), params=DEMO, seed=5).run().dumps()
    assert a == b
    c = execution(HonestProver(count=3), params=DEMO, seed=6).run().dumps()
    assert a != c


def test_session_cap():
    with pytest.raises(CapExceeded):
        execution(HonestProver(count=3), session_cap=2).run()
    with pytest.raises(ValueError):
        execution(HonestProver(), session_cap=0)


def test_invalid_statement_session_rejected():
    class Bad(Strategy):
        def on_start(self, ctx):
            return [OpenSession(DlogClaim(5))]

    record = execution(Bad()).run()
    assert record.sessions[0]["reason"] == "invalid-statement"
    assert record.reverify() == {1: "Rejected"}


def test_protocol_violation_rejects_session():
    class Rude(Strategy):
        def on_start(self, ctx):
            return [OpenSession(DlogClaim(8))]

        def on_message(self, msg, ctx):
            return [Send(WireMessage(msg.sid, MsgType.STAGE3_RESPONSE, 0))]

    record = execution(Rude()).run()
    assert record.sessions[0]["status"] == "Rejected"
    assert record.sessions[0]["reason"].startswith("protocol-violation")


@pytest.mark.parametrize("variant", list(Variant))
def test_projection_validity(variant):
    record = execution(HonestProver(count=4), variant=variant, params=DEMO, seed=2).run()
    order = STAGE_ORDER.get(variant, STAGE_ORDER["default"])
    for s in record.sessions:
        assert [m.type for m in record.messages(s["sid"])] == order
    # sessions really interleave: the global trace is not session-sorted
    sids = [e.msg.sid for e in record.trace]
    assert sids != sorted(sids)


def test_session_isolation():
    ex = execution(HonestProver(count=4), params=DEMO, seed=3)
    while ex.step():
        if not ex.actions:
            continue
        act = ex.actions[0]
        if not isinstance(act, Send):
            continue
        target = act.msg.sid
        before = {sid: ex.session_digest(sid) for sid in ex.sessions if sid != target}
        ex.step()
        after = {sid: ex.session_digest(sid) for sid in before}
        assert before == after


def test_json_roundtrip_and_reverify():
    record = execution(AttackNoCsk(), variant="no-csk", params=DEMO, seed=4).run()
    doc = json.loads(record.dumps())
    again = RunRecord.from_json(doc)
    assert again.dumps() == record.dumps()
    assert again.reverify() == {s["sid"]: s["status"] for s in record.sessions}
    assert "pk" in doc and "aux" in doc and "seed" in doc


def test_snapshot_resume_same_tape_identical_suffix():
    ex = execution(HonestProver(count=2), params=DEMO, seed=7, snapshots=True)
    record = ex.run()
    snap = snapshot(record, "challenge:1")
    again = resume(snap)
    assert again.dumps() == record.dumps()


def test_snapshot_resume_override_differs_from_challenge_on():
    record = execution(HonestProver(count=2), params=DEMO, seed=7, snapshots=True).run()
    snap = snapshot(record, "challenge:2")
    orig = record.view(2).drawn_challenge
    other = resume(snap, orig ^ 1)
    assert other.trace[:snap.position] == record.trace[:snap.position]
    # the triggering Stage3First is delivered first, then the new challenge follows
    first_diff = next(i for i, (a, b) in enumerate(zip(record.trace, other.trace)) if a != b)
    assert other.trace[first_diff].msg.type is MsgType.STAGE3_CHALLENGE
    assert other.trace[first_diff].msg.payload == orig ^ 1
    t1, t2 = record.view(2).transcript, other.view(2).transcript
    assert other.status(2) == "Accepted"
    assert t1.first == t2.first and t1.challenge != t2.challenge


def test_unknown_label():
    record = execution(HonestProver(), snapshots=True).run()
    with pytest.raises(UnknownLabel):
        snapshot(record, "challenge:9")


def test_snapshots_not_taken_unless_asked():
    record = execution(HonestProver()).run()
    assert record.snapshots == {}


def test_run_helper_and_notes():
    kp = keygen(DEMO, random.Random(0))
    record = run(AttackNoCsk(), params=DEMO, variant="no-csk", keypair=kp, seed=0)
    kinds = [n["kind"] for n in record.notes]
    assert kinds == ["borrowed", "challenge-split"]


def test_halt_stops_pending_work():
    class OpenThenHalt(Strategy):
        def on_start(self, ctx):
            return [OpenSession(DlogClaim(8)), Halt(), OpenSession(DlogClaim(8))]

    record = execution(OpenThenHalt()).run()
    assert len(record.sessions) == 1 and record.sessions[0]["status"] == "Open"
    assert record.sessions[0]["stage"] == Stage.AWAIT_STAGE1_CHALLENGE.value
