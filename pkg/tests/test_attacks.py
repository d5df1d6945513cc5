import pytest

from czkcke.attacks import (
    ATTACKS, AttackDv05, AttackNoCsk, AttackNoCw, HonestProver, run_attack,
)
from czkcke.group import DEMO, TOY
from czkcke.protocol import DlogClaim, EmptyClaim, MsgType, Variant, stage3_sigma
from czkcke.sigma import Transcript


def _independent_recheck(record, sid):
    """Recompute the verifier's final check from the recorded messages."""
    assert record.reverify()[sid] == "Accepted"
    view = record.view(sid)
    spec, st = stage3_sigma(record.variant, record.params, record.k, view.claim, record.pk,
                            view.c_w, view.c_sk)
    assert spec.check(st, view.transcript)


def test_no_csk_toy_example():
    out = run_attack("no-csk", TOY, 1, strategy=AttackNoCsk(13))
    assert out.succeeded and not out.witness_known
    assert out.record.view(2).claim == DlogClaim(13)
    _independent_recheck(out.record, 2)


def test_no_cw_empty_inner():
    out = run_attack("no-cw", TOY, 1, strategy=AttackNoCw(EmptyClaim()))
    assert out.succeeded
    _independent_recheck(out.record, 2)


def test_no_cw_dlog_inner():
    out = run_attack("no-cw", DEMO, 2, strategy=AttackNoCw(DlogClaim(DEMO.gexp(1234))))
    assert out.succeeded


def test_dv05_attack_with_dlog_inner():
    out = run_attack("dv05", DEMO, 2, strategy=AttackDv05(DlogClaim(DEMO.gexp(99))))
    assert out.succeeded


@pytest.mark.parametrize("name", ["dv05", "no-cw", "no-csk"])
@pytest.mark.parametrize("params", [TOY, DEMO], ids=["toy", "demo"])
def test_attacks_always_succeed(name, params):
    for seed in range(50):
        out = run_attack(name, params, seed)
        assert out.succeeded, (seed, out.record.sessions)
        assert out.witness_known is False
        assert out.expected


@pytest.mark.parametrize("name", ["dv05", "no-cw", "no-csk"])
def test_xor_bookkeeping(name):
    for seed in range(20):
        out = run_attack(name, DEMO, seed)
        rec = out.record
        split = next(n for n in rec.notes if n["kind"] == "challenge-split")
        v = {k: int(val, 16) for k, val in split.items() if k.startswith(("e_", "q"))}
        verifier_e = rec.view(2).transcript.challenge
        if name == "no-csk":
            assert v["e_x"] ^ v["e_v"] == verifier_e
        elif name == "no-cw":
            assert v["e_xh"] ^ v["e_v"] ^ v["e_sk"] == verifier_e
        else:
            sess = rec.session(2)
            assert v["e_p"] == int(sess["e_hat"], 16) ^ int(sess["coin"], 16) == verifier_e
            assert v["e_xh"] ^ v["e_v"] == v["e_p"]
        # the value routed into session 1 really was its stage-1 challenge
        s1 = [m for m in rec.messages(1) if m.type is MsgType.STAGE1_CHALLENGE]
        assert [m.payload for m in s1] == [v["e_v"]]


@pytest.mark.parametrize("name", ["dv05", "no-cw", "no-csk"])
def test_borrowed_message_annotated(name):
    rec = run_attack(name, DEMO, 3).record
    note = next(n for n in rec.notes if n["kind"] == "borrowed")
    assert (note["from_sid"], note["into_sid"]) == (1, 2)
    donor_first = rec.messages(1)[0]
    assert donor_first.type is MsgType.STAGE1_FIRST
    a_p = rec.view(2).transcript.first
    borrowed = a_p[0][1] if name == "no-cw" else a_p[1]
    assert borrowed == donor_first.payload


def test_transplant_fails_at_clause_b():
    for seed in range(50):
        out = run_attack("full-transplant", TOY, seed)
        assert not out.accepting and out.expected
        assert out.record.session(2)["reason"] == "stage-3 verification failed: clause B"


def test_no_csk_against_full_aborts_structurally():
    out = run_attack("no-csk", TOY, 1, variant="full")
    assert not out.succeeded
    assert out.record.session(2)["reason"] == "stage-2: missing commitment"


@pytest.mark.parametrize("name", sorted(ATTACKS))
def test_attacks_never_touch_witnesses(name):
    strategy = ATTACKS[name]()
    assert not strategy.holds_witness
    assert not any("witness" in k for k in vars(strategy))


def test_honest_prover_under_full_same_x():
    out = run_attack("honest", TOY, 1, variant="full", strategy=HonestProver(witnesses=[7]))
    assert out.record.accepted() == [1]
    assert out.record.view(1).claim == DlogClaim(13)


def test_attack_variant_targets():
    assert {k: ATTACKS[k]().target for k in ATTACKS} == {
        "dv05": Variant.DV05, "no-cw": Variant.NO_CW, "no-csk": Variant.NO_CSK,
        "full-transplant": Variant.FULL}


def test_transcript_shape_no_cw():
    rec = run_attack("no-cw", DEMO, 5).record
    t = rec.view(2).transcript
    assert isinstance(t, Transcript)
    e_a, z_a, e_sk, z_sk = t.response
    assert len(z_a) == 4 and e_a ^ e_sk == t.challenge
