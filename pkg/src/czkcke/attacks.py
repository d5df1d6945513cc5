"""Adversarial provers for the runtime, plus the honest baseline.

The three man-in-the-middle strategies share one trick: open a second
session with the same verifier, and use the verifier's own stage-1 proof of
key knowledge (from session 1) as the key clause of the prover's stage-3
proof in session 2. The stage-3 challenge of session 2 is split so that
the part routed back to session 1 is a legitimate stage-1 challenge there.

None of them is ever given a witness for the statement it proves.
"""

import random
from dataclasses import dataclass, field

from . import codec
from .commit import eg_commit, tc_commit_bit
from .protocol import (
    DlogClaim, EmptyClaim, KeyMixClaim, MsgType, ProverSession, Variant, WireMessage,
    claim_sigma, keygen, stage1_sigma, stage3_sigma,
)
from .runtime import Execution, Halt, Note, OpenSession, Send
from .sigma import CommitOpen


def unknown_dlog_element(params, rng):
    """A random subgroup element produced by squaring, so nobody learns its discrete log."""
    while True:
        x = params.mul(*(2 * [rng.randrange(2, params.p - 1)]))
        if x != 1:
            return x


def _fresh_rng(ctx):
    return random.Random(ctx.rng.getrandbits(64))


class Strategy:
    """Base adversary: does nothing. Subclasses override on_start / on_message."""

    holds_witness = False

    def on_start(self, ctx):
        return [Halt()]

    def on_message(self, msg, ctx):
        return []


class HonestProver(Strategy):
    """Runs `count` honest prover sessions concurrently, each with its own fresh witness.

    On DV05 the statement is the key-mixing composite with the witness in
    its first branch, since that variant proves the claim directly.
    """

    holds_witness = True

    def __init__(self, count=1, witnesses=None):
        self.count = count if witnesses is None else len(witnesses)
        self.witnesses = list(witnesses) if witnesses is not None else None
        self.provers = {}

    def _claim(self, ctx, w):
        x = ctx.params.gexp(w)
        if ctx.variant is Variant.DV05:
            return KeyMixClaim(DlogClaim(x), *ctx.pk), (0, w)
        return DlogClaim(x), w

    def on_start(self, ctx):
        if self.witnesses is None:
            self.witnesses = [ctx.params.random_scalar(ctx.rng) for _ in range(self.count)]
        first = ctx.next_sid
        acts = []
        for i, w in enumerate(self.witnesses):
            claim, wit = self._claim(ctx, w)
            sid = first + i
            self.provers[sid] = ProverSession(ctx.variant, ctx.params, ctx.pk, claim, wit, sid=sid,
                                              rng=_fresh_rng(ctx), challenge_bits=ctx.k)
            acts.append(OpenSession(claim))
        return acts

    def on_message(self, msg, ctx):
        prover = self.provers.get(msg.sid)
        if prover is None or prover.stage.terminal:
            return []
        return [Send(m) for m in prover.receive(msg)]


class KeyCommittingProver(HonestProver):
    """Test fixture: knows a key preimage (j, s_j) and proves the key clause with it.

    This is the zero-knowledge simulator's prover, run against the real
    verifier. It puts s_j into c_sk, which lets tests check brute-force
    opening against rewinding extraction.
    """

    holds_witness = False

    def __init__(self, key_witness, count=1):
        super().__init__(count)
        self.key_witness = key_witness

    def on_start(self, ctx):
        first = ctx.next_sid
        acts = []
        for i in range(self.count):
            claim = DlogClaim(unknown_dlog_element(ctx.params, ctx.rng))
            if ctx.variant in (Variant.NO_CW, Variant.DV05):
                claim = KeyMixClaim(EmptyClaim(), *ctx.pk)
            sid = first + i
            self.provers[sid] = ProverSession(ctx.variant, ctx.params, ctx.pk, claim, sid=sid,
                                              key_witness=self.key_witness, rng=_fresh_rng(ctx),
                                              challenge_bits=ctx.k)
            acts.append(OpenSession(claim))
        return acts


class _ManInTheMiddle(Strategy):
    """Shared plumbing: a donor session (1) whose stage-1 proof gets borrowed by session 2."""

    target = None

    def __init__(self):
        self.claim = None
        self.donor = self.target_sid = None
        self.borrowed_first = None
        self.s1_first = self.s1_challenge = None
        self.split = {}

    def _make_claim(self, ctx):
        raise NotImplementedError

    def on_start(self, ctx):
        self.claim = self._make_claim(ctx)
        self.donor = ctx.next_sid
        self.target_sid = self.donor + 1
        return [OpenSession(self.claim)]

    def on_message(self, msg, ctx):
        if msg.sid == self.donor:
            if msg.type is MsgType.STAGE1_FIRST:
                # Keep session 1 suspended right after the verifier's first message.
                self.borrowed_first = msg.payload
                return [OpenSession(self.claim)]
            if msg.type is MsgType.STAGE1_RESPONSE:
                return self._finish(msg.payload, ctx)
            return []
        if msg.sid != self.target_sid:
            return []
        if msg.type is MsgType.STAGE1_FIRST:
            self.s1_first = msg.payload
            self.s1_challenge = ctx.rng.randrange(1 << ctx.k)
            return [Send(WireMessage(msg.sid, MsgType.STAGE1_CHALLENGE, self.s1_challenge))]
        if msg.type is MsgType.STAGE1_RESPONSE:
            if not stage1_sigma(ctx.params, ctx.k).verify(ctx.pk, self.s1_first, self.s1_challenge,
                                                         msg.payload):
                return [Halt()]
            return self._commit_and_first(ctx)
        if msg.type in (MsgType.STAGE3_CHALLENGE, MsgType.DV05_PHASE3Q):
            e_v = self._route_challenge(msg.payload)
            note = Note({"kind": "challenge-split", "sid": self.target_sid, "donor": self.donor,
                         **{k: codec.pack(v) for k, v in self.split.items()}})
            return [note, Send(WireMessage(self.donor, MsgType.STAGE1_CHALLENGE, e_v))]
        return []

    def _borrow_note(self, where):
        return Note({"kind": "borrowed", "from_sid": self.donor, "into_sid": self.target_sid,
                     "message": MsgType.STAGE1_FIRST.value, "used_as": where})


class AttackNoCsk(_ManInTheMiddle):
    """Against the variant without c_sk: clause B is a bare key proof, so the donor's fits."""

    target = Variant.NO_CSK

    def __init__(self, x=None):
        super().__init__()
        self.x = x

    def _make_claim(self, ctx):
        if self.x is None:
            self.x = unknown_dlog_element(ctx.params, ctx.rng)
        return DlogClaim(self.x)

    def _commit_and_first(self, ctx):
        gp = ctx.params
        self.c_w, _ = eg_commit(gp, 0, ctx.rng)
        st_a = (self.x, self.c_w.h, self.c_w.gbar, self.c_w.hbar)
        self.e_x = ctx.rng.randrange(1 << ctx.k)
        self.a_x, self.z_x = CommitOpen(gp, ctx.k).simulate(st_a, self.e_x, ctx.rng)
        a_p = (self.a_x, self.borrowed_first)
        return [Send(WireMessage(self.target_sid, MsgType.STAGE2_COMMITMENTS,
                                 (self.c_w.as_tuple(), None))),
                self._borrow_note("stage-3 clause B first message"),
                Send(WireMessage(self.target_sid, MsgType.STAGE3_FIRST, a_p))]

    def _route_challenge(self, e_p):
        self.e_p = e_p
        self.e_v = e_p ^ self.e_x
        self.split = {"e_p": e_p, "e_x": self.e_x, "e_v": self.e_v}
        return self.e_v

    def _finish(self, z_v, ctx):
        z_p = (self.e_x, self.z_x, self.e_v, z_v)
        return [Send(WireMessage(self.target_sid, MsgType.STAGE3_RESPONSE, z_p))]


class TransplantAttemptFull(AttackNoCsk):
    """The no-c_sk schedule replayed verbatim against the full protocol.

    Clause B there is an OR of commitment-opening proofs about c_sk, so the
    borrowed Schnorr first messages do not even have the right shape and the
    verifier rejects. Kept as a negative control.
    """

    target = Variant.FULL

    def _commit_and_first(self, ctx):
        gp = ctx.params
        u = gp.random_scalar(ctx.rng)
        self.c_w, _ = eg_commit(gp, 0, ctx.rng, u=u)
        self.c_sk, _ = eg_commit(gp, 0, ctx.rng, u=u)
        st_a = (self.x, self.c_w.h, self.c_w.gbar, self.c_w.hbar)
        self.e_x = ctx.rng.randrange(1 << ctx.k)
        self.a_x, self.z_x = CommitOpen(gp, ctx.k).simulate(st_a, self.e_x, ctx.rng)
        a_p = (self.a_x, self.borrowed_first)
        return [Send(WireMessage(self.target_sid, MsgType.STAGE2_COMMITMENTS,
                                 (self.c_w.as_tuple(), self.c_sk.as_tuple()))),
                self._borrow_note("stage-3 clause B first message"),
                Send(WireMessage(self.target_sid, MsgType.STAGE3_FIRST, a_p))]


class AttackNoCw(_ManInTheMiddle):
    """Against the variant without c_w, on the key-mixing statement (inner OR y0 OR y1).

    Clause A is the statement's own OR proof; its key half is the borrowed
    stage-1 proof and its inner half is simulated. Clause B (about c_sk,
    which honestly commits 0) is simulated too. Three-way challenge split.
    """

    target = Variant.NO_CW

    def __init__(self, inner=None):
        super().__init__()
        self.inner = EmptyClaim() if inner is None else inner

    def _make_claim(self, ctx):
        return KeyMixClaim(self.inner, *ctx.pk)

    def _commit_and_first(self, ctx):
        gp, k = ctx.params, ctx.k
        self.c_sk, _ = eg_commit(gp, 0, ctx.rng)
        inner_spec, inner_st = claim_sigma(gp, self.inner, k)
        self.e_xh = ctx.rng.randrange(1 << k)
        self.a_xh, self.z_xh = inner_spec.simulate(inner_st, self.e_xh, ctx.rng)
        spec, (_, st_b) = stage3_sigma(Variant.NO_CW, gp, k, self.claim, ctx.pk, None, self.c_sk)
        self.e_sk = ctx.rng.randrange(1 << k)
        self.a_sk, self.z_sk = spec.branches[1].simulate(st_b, self.e_sk, ctx.rng)
        a_p = ((self.a_xh, self.borrowed_first), self.a_sk)
        return [Send(WireMessage(self.target_sid, MsgType.STAGE2_COMMITMENTS,
                                 (None, self.c_sk.as_tuple()))),
                self._borrow_note("stage-3 clause A, key branch first message"),
                Send(WireMessage(self.target_sid, MsgType.STAGE3_FIRST, a_p))]

    def _route_challenge(self, e_p):
        self.e_p = e_p
        self.e_v = e_p ^ self.e_xh ^ self.e_sk
        self.split = {"e_p": e_p, "e_xh": self.e_xh, "e_v": self.e_v, "e_sk": self.e_sk}
        return self.e_v

    def _finish(self, z_v, ctx):
        e_a = self.e_xh ^ self.e_v
        z_a = (self.e_xh, self.z_xh, self.e_v, z_v)
        z_p = (e_a, z_a, self.e_sk, self.z_sk)
        return [Send(WireMessage(self.target_sid, MsgType.STAGE3_RESPONSE, z_p))]


class AttackDv05(_ManInTheMiddle):
    """Against the coin-tossing structure: the challenge e_P = ê XOR q is known once q arrives."""

    target = Variant.DV05

    def __init__(self, inner=None):
        super().__init__()
        self.inner = EmptyClaim() if inner is None else inner

    def _make_claim(self, ctx):
        return KeyMixClaim(self.inner, *ctx.pk)

    def _commit_and_first(self, ctx):
        gp, k = ctx.params, ctx.k
        self.e_hat = ctx.rng.randrange(1 << k)
        c_e, openings = [], []
        for i in range(k):
            bit = (self.e_hat >> i) & 1
            tc, s = tc_commit_bit(gp, ctx.pk[0], bit, ctx.rng)
            c_e.append(tc.c)
            openings.append((bit, s))
        self.openings = tuple(openings)
        inner_spec, inner_st = claim_sigma(gp, self.inner, k)
        self.e_xh = ctx.rng.randrange(1 << k)
        self.a_xh, self.z_xh = inner_spec.simulate(inner_st, self.e_xh, ctx.rng)
        a_p = (self.a_xh, self.borrowed_first)
        return [Send(WireMessage(self.target_sid, MsgType.DV05_PHASE2, tuple(c_e))),
                self._borrow_note("phase-3 key branch first message"),
                Send(WireMessage(self.target_sid, MsgType.DV05_PHASE3A, a_p))]

    def _route_challenge(self, q_coin):
        self.e_p = self.e_hat ^ q_coin
        self.e_v = self.e_p ^ self.e_xh
        self.split = {"q": q_coin, "e_hat": self.e_hat, "e_p": self.e_p, "e_xh": self.e_xh,
                      "e_v": self.e_v}
        return self.e_v

    def _finish(self, z_v, ctx):
        z_p = (self.e_xh, self.z_xh, self.e_v, z_v)
        return [Send(WireMessage(self.target_sid, MsgType.DV05_PHASE3Z, (self.openings, z_p)))]


def attack_no_csk(x=None):
    return AttackNoCsk(x)


def attack_no_cw(inner=None):
    return AttackNoCw(inner)


def attack_dv05(inner=None):
    return AttackDv05(inner)


def transplant_attempt_full(x=None):
    return TransplantAttemptFull(x)


ATTACKS = {
    "dv05": attack_dv05,
    "no-cw": attack_no_cw,
    "no-csk": attack_no_csk,
    "full-transplant": transplant_attempt_full,
}


@dataclass
class AttackOutcome:
    name: str
    target: Variant
    sessions_opened: int
    accepting: list
    witness_known: bool
    target_sid: int
    record: object = field(repr=False)

    @property
    def succeeded(self):
        return self.target_sid in self.accepting

    @property
    def expected(self):
        """True when the outcome is the one the construction predicts."""
        if self.name == "full-transplant":
            return not self.accepting
        return self.succeeded

    def to_json(self):
        return {
            "attack": self.name,
            "variant": self.target.value,
            "sessions_opened": self.sessions_opened,
            "target_sid": self.target_sid,
            "accepting": self.accepting,
            "witness_known": self.witness_known,
            "expected_outcome": self.expected,
            "record": self.record.to_json(),
        }


def run_attack(name, params, seed, challenge_bits=16, variant=None, strategy=None, snapshots=False):
    """Generate a verifier key from `seed`, run the named attack on its target variant."""
    strategy = strategy or ATTACKS[name]()
    variant = Variant(variant or strategy.target)
    keypair = keygen(params, random.Random(f"{seed}/keygen"))
    ex = Execution(strategy, params=params, variant=variant, keypair=keypair, seed=seed,
                   challenge_bits=challenge_bits, snapshots=snapshots)
    record = ex.run()
    return AttackOutcome(name, variant, ex.opened, record.accepted(),
                         strategy.holds_witness, getattr(strategy, "target_sid", None), record)
