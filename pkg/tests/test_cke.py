import random

import pytest

from czkcke.attacks import AttackNoCsk, HonestProver, KeyCommittingProver, Strategy
from czkcke.cke import (
    CASE1, CASE2, CASE3, FAILED, AbortingVerifier, CoverageFailure, HonestVerifier, break_csk,
    czk_simulate, extract_all, kei_estimate, s_key, s_proof,
)
from czkcke.commit import eg_verify
from czkcke.group import DEMO, TOY
from czkcke.protocol import DlogClaim, MsgType, Variant, keygen, replay_verdict
from czkcke.runtime import Execution, OpenSession, RunRecord


def test_s_key_forced():
    keys = s_key(TOY, s0=3, s1=5, b=0)
    assert (keys.sk, keys.sk_prime, keys.pk) == (3, 5, (8, 9))
    with pytest.raises(ValueError):
        s_key(TOY, s0=3, s1=3, b=0)


def test_s_key_distinct_on_demo():
    rng = random.Random(0)
    for _ in range(50):
        k = s_key(DEMO, rng)
        assert k.sk != k.sk_prime
        assert DEMO.gexp(k.sk) == k.pk[k.b] and DEMO.gexp(k.sk_prime) == k.pk[1 - k.b]


def test_s_proof_is_the_runtime():
    keys = s_key(DEMO, random.Random(1))
    a = s_proof(keys, HonestProver(count=2), 9, params=DEMO, variant="full", aux="z")
    b = Execution(HonestProver(count=2), params=DEMO, variant="full", keypair=keys.keypair,
                  seed=9, aux="z").run()
    assert a.dumps() == b.dumps()
    doc = a.to_json()
    assert doc["aux"] == "z" and doc["pk"]


def test_extract_toy_example():
    keys = s_key(TOY, s0=3, s1=5, b=1)
    rec = s_proof(keys, HonestProver(witnesses=[7]), 1, params=TOY, variant="full")
    rep = extract_all(rec, keys)
    s = rep.sessions[0]
    assert (s.case, s.witness) == (CASE3, 7)
    assert TOY.gexp(7) == 13


def test_extract_no_csk_attack_case2():
    keys = s_key(DEMO, random.Random(2))
    rec = s_proof(keys, AttackNoCsk(), 2, params=DEMO, variant="no-csk")
    rep = extract_all(rec, keys)
    assert rep.sessions[0].witness is None and not rep.sessions[0].accepted
    s = rep.sessions[1]
    assert s.case == CASE2 and DEMO.gexp(s.witness) == keys.pk[keys.b]


def test_non_accepting_is_bottom():
    class OpenOnly(Strategy):
        def on_start(self, ctx):
            return [OpenSession(DlogClaim(8))]

    keys = s_key(TOY, s0=3, s1=5, b=0)
    rec = s_proof(keys, OpenOnly(), 0, params=TOY, variant="full")
    rep = extract_all(rec, keys)
    assert rep.witnesses() == [None] and rep.sessions[0].case is None


def test_extract_requires_snapshots():
    keys = s_key(TOY, s0=3, s1=5, b=0)
    rec = s_proof(keys, HonestProver(), 0, params=TOY, variant="full")
    bare = RunRecord.from_json(rec.to_json())
    with pytest.raises(ValueError):
        extract_all(bare, keys)


def test_rewind_cap_exhaustion_is_failed():
    keys = s_key(TOY, s0=3, s1=5, b=0)

    class AnswersOnce(HonestProver):
        # a class attribute is shared by every snapshot copy, so rewinds see it spent
        left = [1]

        def on_message(self, msg, ctx):
            if msg.type is MsgType.STAGE3_CHALLENGE:
                if not self.left[0]:
                    return []
                self.left[0] -= 1
            return super().on_message(msg, ctx)

    rec = s_proof(keys, AnswersOnce(), 0, params=TOY, variant="full")
    assert rec.accepted() == [1]
    rep = extract_all(rec, keys, rewind_cap=5)
    assert rep.sessions[0].case == FAILED and rep.sessions[0].rewinds == 5
    assert rep.witnesses() == [None]


@pytest.mark.parametrize("variant", list(Variant))
def test_honest_extraction_all_variants(variant):
    keys = s_key(DEMO, random.Random(3))
    strat = HonestProver(count=3)
    rec = s_proof(keys, strat, 3, params=DEMO, variant=variant)
    rep = extract_all(rec, keys)
    assert [s.case for s in rep.sessions] == [CASE3] * 3
    assert rep.witnesses() == strat.witnesses


def test_key_committing_case2_and_case1_agree_with_break_csk():
    rng = random.Random(4)
    for trial in range(4):
        keys = s_key(DEMO, rng)
        use_real = trial % 2 == 0
        kw = (keys.b, keys.sk) if use_real else (1 - keys.b, keys.sk_prime)
        rec = s_proof(keys, KeyCommittingProver(kw), trial, params=DEMO, variant="full")
        s = extract_all(rec, keys).sessions[0]
        assert s.case == (CASE2 if use_real else CASE1)
        assert break_csk(rec, 1) == s.witness == kw[1]
        assert eg_verify(DEMO, rec.view(1).c_sk, s.witness, s.randomness)


def test_break_csk_honest_is_zero_and_budget():
    keys = s_key(DEMO, random.Random(5))
    rec = s_proof(keys, HonestProver(), 5, params=DEMO, variant="full")
    assert break_csk(rec, 1) == 0
    kw = (keys.b, keys.sk)
    rec = s_proof(keys, KeyCommittingProver(kw), 5, params=DEMO, variant="full")
    assert break_csk(rec, 1, budget=1) is None
    rec = s_proof(keys, AttackNoCsk(), 5, params=DEMO, variant="no-csk")
    with pytest.raises(ValueError):
        break_csk(rec, 2)


def test_kei_small():
    st = kei_estimate("no-csk", "attack-no-csk", trials=10, seed=1)
    assert st.p_sk == 1.0 and st.p_sk_prime == 0.0 and st.gap == 1.0
    st = kei_estimate("full", "honest", trials=10, seed=1)
    assert st.gap == 0.0 and st.cases[CASE3] == 10
    st = kei_estimate("full", "honest", relation="first-witness-equals", trials=5, seed=1)
    assert 0 <= st.p_sk <= 1 and 0 <= st.p_sk_prime <= 1


def test_kei_zero_trials_rejected():
    with pytest.raises(ValueError):
        kei_estimate("full", "honest", trials=0)


@pytest.mark.parametrize("params", [TOY, DEMO], ids=["toy", "demo"])
def test_czk_simulate_honest_verifier(params):
    kp = keygen(params, random.Random(6))
    claims = [DlogClaim(params.gexp(e)) for e in (2, 3, 4)]
    view = czk_simulate(params, kp.pk, claims, HonestVerifier("full", params, kp, seed=6), seed=6)
    assert view.key is not None and params.gexp(view.key[1]) == kp.pk[view.key[0]]
    assert set(view.statuses.values()) == {"Accepted"}
    assert set(view.reverify().values()) == {"Accepted"}
    assert view.phases == 2


def test_czk_simulate_aborting_verifier():
    kp = keygen(TOY, random.Random(6))
    claims = [DlogClaim(8)]
    view = czk_simulate(TOY, kp.pk, claims, AbortingVerifier("full", TOY, kp, seed=1))
    assert view.key is None and view.phases == 1
    assert view.prover_stages == {1: "Aborted"}


def test_czk_coverage_failure():
    class AnswersOnce(HonestVerifier):
        left = [1]

        def receive(self, msg):
            if msg.type is MsgType.STAGE1_CHALLENGE:
                if not self.left[0]:
                    return []
                self.left[0] -= 1
            return super().receive(msg)

    kp = keygen(TOY, random.Random(6))
    with pytest.raises(CoverageFailure):
        czk_simulate(TOY, kp.pk, [DlogClaim(8)], AnswersOnce("full", TOY, kp), rewind_cap=3)


def test_simulated_stage3_transcripts_verify_exhaustively_toy():
    # every simulated session on the toy group re-verifies from its messages alone
    for seed in range(20):
        kp = keygen(TOY, random.Random(seed))
        claims = [DlogClaim(TOY.gexp(seed % 11))]
        view = czk_simulate(TOY, kp.pk, claims, HonestVerifier("full", TOY, kp, seed=seed),
                            seed=seed)
        msgs = view.messages(1)
        assert replay_verdict("full", TOY, kp.pk, view.k, claims[0], msgs) == "Accepted"
