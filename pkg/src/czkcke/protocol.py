"""Prover and verifier state machines for the bare public-key protocol family.

Four variants share one message flow:

  Stage 1  verifier proves knowledge of a preimage of y0 or y1 (Schnorr OR)
  Stage 2  prover commits: c_w to its witness, c_sk to zero
  Stage 3  prover proves "claim OR c_sk opens to a key preimage" (OR proof)

FULL keeps both commitments, NO_CW drops c_w, NO_CSK drops c_sk, and DV05
replaces stages 2-3 with a trapdoor-committed coin toss feeding a single
proof for the claim.
"""

from dataclasses import dataclass
from enum import Enum

from . import codec
from .commit import ElGamalCommitment, eg_commit, tc_commit_bit, tc_open, TrapdoorCommitment
from .sigma import (
    DEFAULT_CHALLENGE_BITS, CommitOpen, EmptyLanguage, NoWitness, OrProof, Schnorr, Transcript,
    challenge_width,
)


class ProtocolViolation(ValueError):
    """A message arrived whose tag or shape does not fit the session's stage."""


class InvalidStatement(ValueError):
    pass


class Variant(str, Enum):
    FULL = "full"
    NO_CW = "no-cw"
    NO_CSK = "no-csk"
    DV05 = "dv05"


class Stage(str, Enum):
    AWAIT_STAGE1_FIRST = "AwaitStage1First"
    AWAIT_STAGE1_CHALLENGE = "AwaitStage1Challenge"
    AWAIT_STAGE1_RESPONSE = "AwaitStage1Response"
    AWAIT_STAGE2 = "AwaitStage2"
    AWAIT_STAGE3_FIRST = "AwaitStage3First"
    AWAIT_STAGE3_CHALLENGE = "AwaitStage3Challenge"
    AWAIT_STAGE3_RESPONSE = "AwaitStage3Response"
    ACCEPTED = "Accepted"
    REJECTED = "Rejected"
    ABORTED = "Aborted"

    @property
    def rank(self):
        return _STAGE_RANK[self]

    @property
    def terminal(self):
        return self in (Stage.ACCEPTED, Stage.REJECTED, Stage.ABORTED)


_STAGE_RANK = {s: min(i, 7) for i, s in enumerate(Stage)}


class MsgType(str, Enum):
    STAGE1_FIRST = "Stage1First"
    STAGE1_CHALLENGE = "Stage1Challenge"
    STAGE1_RESPONSE = "Stage1Response"
    STAGE2_COMMITMENTS = "Stage2Commitments"
    STAGE3_FIRST = "Stage3First"
    STAGE3_CHALLENGE = "Stage3Challenge"
    STAGE3_RESPONSE = "Stage3Response"
    DV05_PHASE2 = "Dv05Phase2"
    DV05_PHASE3A = "Dv05Phase3a"
    DV05_PHASE3Q = "Dv05Phase3q"
    DV05_PHASE3Z = "Dv05Phase3z"


# Messages that make the verifier draw its stage-3 challenge.
CHALLENGE_TRIGGERS = (MsgType.STAGE3_FIRST, MsgType.DV05_PHASE3A)


@dataclass(frozen=True)
class WireMessage:
    sid: int
    type: MsgType
    payload: object

    def to_dict(self):
        return {"sid": self.sid, "type": self.type.value, "payload": codec.pack(self.payload)}

    @classmethod
    def from_dict(cls, d):
        return cls(d["sid"], MsgType(d["type"]), codec.unpack(d["payload"]))


# -- statements --------------------------------------------------------------

@dataclass(frozen=True)
class DlogClaim:
    """Knowledge of w with g^w = x."""
    x: int


@dataclass(frozen=True)
class EmptyClaim:
    """A claim from the empty language: true of nothing."""


@dataclass(frozen=True)
class KeyMixClaim:
    """`inner` OR knowledge of a preimage of y0 or y1."""
    inner: object
    y0: int
    y1: int


def claim_to_dict(claim):
    if isinstance(claim, DlogClaim):
        return {"type": "dlog", "x": codec.pack(claim.x)}
    if isinstance(claim, EmptyClaim):
        return {"type": "empty"}
    if isinstance(claim, KeyMixClaim):
        return {"type": "keymix", "inner": claim_to_dict(claim.inner),
                "y0": codec.pack(claim.y0), "y1": codec.pack(claim.y1)}
    raise TypeError(claim)


def claim_from_dict(d):
    kind = d["type"]
    if kind == "dlog":
        return DlogClaim(codec.unpack(d["x"]))
    if kind == "empty":
        return EmptyClaim()
    if kind == "keymix":
        return KeyMixClaim(claim_from_dict(d["inner"]), codec.unpack(d["y0"]), codec.unpack(d["y1"]))
    raise ValueError(f"unknown claim type {kind!r}")


def claim_valid(params, claim):
    if isinstance(claim, DlogClaim):
        return params.is_member(claim.x)
    if isinstance(claim, EmptyClaim):
        return True
    if isinstance(claim, KeyMixClaim):
        return (claim_valid(params, claim.inner)
                and params.is_member(claim.y0) and params.is_member(claim.y1))
    return False


def claim_sigma(params, claim, k):
    """Proof system and statement for a claim."""
    if isinstance(claim, DlogClaim):
        return Schnorr(params, k), claim.x
    if isinstance(claim, EmptyClaim):
        return EmptyLanguage(params, k), None
    if isinstance(claim, KeyMixClaim):
        inner, st = claim_sigma(params, claim.inner, k)
        keys = OrProof(Schnorr(params, k), Schnorr(params, k))
        return OrProof(inner, keys), (st, (claim.y0, claim.y1))
    raise TypeError(claim)


# -- keys ---------------------------------------------------------------------

@dataclass(frozen=True)
class VerifierKeyPair:
    pk: tuple
    sk: tuple  # (s, b) with g^s = pk[b]

    @property
    def b(self):
        return self.sk[1]


def keygen(params, rng=None, *, s0=None, s1=None, b=None):
    """Two random preimages, a random bit b; keep s_b as the secret key."""
    s0 = params.random_scalar(rng) if s0 is None else s0
    s1 = params.random_scalar(rng) if s1 is None else s1
    b = rng.randrange(2) if b is None else b
    s = (s0, s1)
    return VerifierKeyPair((params.gexp(s0), params.gexp(s1)), (s[b], b))


def r_key(params, pk, s):
    return params.gexp(s) in pk


# -- per-stage proof systems --------------------------------------------------

def _co_statement(x, c):
    return (x, c.h, c.gbar, c.hbar)


def stage1_sigma(params, k):
    return OrProof(Schnorr(params, k), Schnorr(params, k))


def stage3_sigma(variant, params, k, claim, pk, c_w=None, c_sk=None):
    """Proof system and statement the prover runs in stage 3 (phase 3 for DV05)."""
    variant = Variant(variant)
    y0, y1 = pk
    if variant is Variant.DV05:
        return claim_sigma(params, claim, k)
    if variant in (Variant.FULL, Variant.NO_CSK):
        clause_a = CommitOpen(params, k)
        st_a = _co_statement(claim.x, c_w)
    else:
        clause_a, st_a = claim_sigma(params, claim, k)
    if variant is Variant.NO_CSK:
        clause_b = OrProof(Schnorr(params, k), Schnorr(params, k))
        st_b = (y0, y1)
    else:
        clause_b = OrProof(CommitOpen(params, k), CommitOpen(params, k))
        st_b = (_co_statement(y0, c_sk), _co_statement(y1, c_sk))
    return OrProof(clause_a, clause_b), (st_a, st_b)


def _check_claim_for_variant(params, variant, claim):
    if not claim_valid(params, claim):
        raise InvalidStatement("statement elements are not in the order-q subgroup")
    if variant in (Variant.FULL, Variant.NO_CSK) and not isinstance(claim, DlogClaim):
        raise InvalidStatement(f"variant {variant.value} proves discrete-log claims only")


def _commitment_or_none(params, t, required):
    if t is None:
        if required:
            raise ValueError("missing commitment")
        return None
    if required is False:
        raise ValueError("unexpected commitment")
    if not (isinstance(t, tuple) and len(t) == 3 and all(params.is_member(v) for v in t)):
        raise ValueError("malformed commitment")
    return ElGamalCommitment.from_tuple(t)


def parse_stage2(variant, params, payload):
    """(c_w, c_sk) from a Stage2Commitments payload; ValueError if the arity or elements are wrong."""
    if not (isinstance(payload, tuple) and len(payload) == 2):
        raise ValueError("stage-2 payload must be a pair")
    c_w = _commitment_or_none(params, payload[0], variant is not Variant.NO_CW)
    c_sk = _commitment_or_none(params, payload[1], variant is not Variant.NO_CSK)
    return c_w, c_sk


def dv05_opening_ok(params, k, basis, c_e, openings, e_hat_bits=None):
    """Check bitwise openings of c_e; return the opened string or None."""
    if not (isinstance(c_e, tuple) and isinstance(openings, tuple)
            and len(c_e) == k and len(openings) == k):
        return None
    e_hat = 0
    for i, (c, op) in enumerate(zip(c_e, openings)):
        if not (isinstance(op, tuple) and len(op) == 2):
            return None
        bit, s = op
        if bit not in (0, 1) or not isinstance(s, int) or not 0 <= s < params.q:
            return None
        if not tc_open(params, TrapdoorCommitment(c, basis), bit, s):
            return None
        e_hat |= bit << i
    return e_hat


class _Session:
    role = "?"

    def __init__(self, variant, params, claim, sid, rng, challenge_bits):
        self.variant = Variant(variant)
        self.params = params
        self.claim = claim
        self.sid = sid
        self.rng = rng
        self.k = challenge_width(params, challenge_bits)
        self.stage = None
        self.reason = None

    def _advance(self, stage):
        if self.stage is not None:
            assert stage.rank > self.stage.rank, f"{self.stage} -> {stage} is not forward"
        self.stage = stage

    def _expect(self, msg, *types):
        if self.stage.terminal:
            raise ProtocolViolation(f"session {self.sid} already {self.stage.value}")
        if msg.type not in types:
            raise ProtocolViolation(
                f"{self.role} in {self.stage.value} cannot take {msg.type.value}")

    def _out(self, mtype, payload):
        return WireMessage(self.sid, mtype, payload)

    def fail(self, stage, reason):
        self.reason = reason
        self.stage = stage

    @property
    def status(self):
        return self.stage.value if self.stage.terminal else "Open"


class VerifierSession(_Session):
    """Honest BPK verifier for one session. Holds the key pair; emits stage 1 first."""

    role = "verifier"

    def __init__(self, variant, params, keypair, claim, *, sid=0, rng=None,
                 challenge_bits=DEFAULT_CHALLENGE_BITS):
        super().__init__(variant, params, claim, sid, rng, challenge_bits)
        _check_claim_for_variant(params, self.variant, claim)
        self.keypair = keypair
        self.pk = keypair.pk
        self.stage1 = stage1_sigma(params, self.k)
        self.challenge_override = None
        self.s1_first = self.s1_challenge = self.s1_response = None
        self.c_w = self.c_sk = None
        self.c_e = None
        self.s3_first = self.s3_challenge = self.s3_response = None
        self.coin = None  # DV05: the verifier's q
        self.e_hat = None
        self._s1_state = None

    def start(self):
        s, b = self.keypair.sk
        self.s1_first, self._s1_state = self.stage1.first(self.pk, (b, s), self.rng)
        self._advance(Stage.AWAIT_STAGE1_CHALLENGE)
        return [self._out(MsgType.STAGE1_FIRST, self.s1_first)]

    def _draw_challenge(self):
        e = self.rng.randrange(1 << self.k)
        if self.challenge_override is not None:
            e = self.challenge_override
        return e

    def receive(self, msg):
        st = self.stage
        if st is Stage.AWAIT_STAGE1_CHALLENGE:
            self._expect(msg, MsgType.STAGE1_CHALLENGE)
            if not self.stage1.valid_challenge(msg.payload):
                raise ProtocolViolation("stage-1 challenge out of range")
            self.s1_challenge = msg.payload
            self.s1_response = self.stage1.respond(self._s1_state, msg.payload)
            self._advance(Stage.AWAIT_STAGE2)
            return [self._out(MsgType.STAGE1_RESPONSE, self.s1_response)]
        if st is Stage.AWAIT_STAGE2:
            if self.variant is Variant.DV05:
                self._expect(msg, MsgType.DV05_PHASE2)
                c_e = msg.payload
                if not (isinstance(c_e, tuple) and len(c_e) == self.k
                        and all(self.params.is_member(c) for c in c_e)):
                    self.fail(Stage.REJECTED, "phase-2 commitment malformed")
                    return []
                self.c_e = c_e
            else:
                self._expect(msg, MsgType.STAGE2_COMMITMENTS)
                try:
                    self.c_w, self.c_sk = parse_stage2(self.variant, self.params, msg.payload)
                except ValueError as exc:
                    self.fail(Stage.REJECTED, f"stage-2: {exc}")
                    return []
            self._advance(Stage.AWAIT_STAGE3_FIRST)
            return []
        if st is Stage.AWAIT_STAGE3_FIRST:
            self._expect(msg, MsgType.DV05_PHASE3A if self.variant is Variant.DV05
                         else MsgType.STAGE3_FIRST)
            self.s3_first = msg.payload
            e = self._draw_challenge()
            self._advance(Stage.AWAIT_STAGE3_RESPONSE)
            if self.variant is Variant.DV05:
                self.coin = e
                return [self._out(MsgType.DV05_PHASE3Q, e)]
            self.s3_challenge = e
            return [self._out(MsgType.STAGE3_CHALLENGE, e)]
        if st is Stage.AWAIT_STAGE3_RESPONSE:
            if self.variant is Variant.DV05:
                self._expect(msg, MsgType.DV05_PHASE3Z)
                if not (isinstance(msg.payload, tuple) and len(msg.payload) == 2):
                    self.fail(Stage.REJECTED, "phase-3 response malformed")
                    return []
                openings, z = msg.payload
                self.e_hat = dv05_opening_ok(self.params, self.k, self.pk[0], self.c_e, openings)
                if self.e_hat is None:
                    self.fail(Stage.REJECTED, "challenge commitment not opened correctly")
                    return []
                self.s3_challenge = self.e_hat ^ self.coin
                self.s3_response = z
            else:
                self._expect(msg, MsgType.STAGE3_RESPONSE)
                self.s3_response = msg.payload
            verdict, why = self.stage3_verdict()
            if verdict:
                self._advance(Stage.ACCEPTED)
            else:
                self.fail(Stage.REJECTED, why)
            return []
        raise ProtocolViolation(f"verifier session {self.sid} is {self.stage.value}")

    def stage3_spec(self):
        return stage3_sigma(self.variant, self.params, self.k, self.claim, self.pk,
                            self.c_w, self.c_sk)

    def stage3_verdict(self):
        spec, statement = self.stage3_spec()
        a, e, z = self.s3_first, self.s3_challenge, self.s3_response
        if spec.verify(statement, a, e, z):
            return True, None
        if isinstance(spec, OrProof) and self.variant is not Variant.DV05:
            bad = spec.failing_branches(statement, a, e, z)
            names = {0: "A", 1: "B"}
            return False, "stage-3 verification failed: " + ", ".join(
                f"clause {names[b]}" if b in names else b for b in bad)
        return False, "stage-3 verification failed"

    @property
    def transcript(self):
        if self.s3_response is None:
            return None
        return Transcript(self.s3_first, self.s3_challenge, self.s3_response)

    def summary(self):
        """JSON-ready view of everything this session saw and decided."""
        d = {
            "sid": self.sid,
            "claim": claim_to_dict(self.claim),
            "status": self.status,
            "stage": self.stage.value,
            "reason": self.reason,
            "c_w": codec.pack(self.c_w.as_tuple()) if self.c_w else None,
            "c_sk": codec.pack(self.c_sk.as_tuple()) if self.c_sk else None,
        }
        if self.s3_response is not None:
            spec, _ = self.stage3_spec()
            try:
                d["stage3"] = spec.describe(*self.transcript)
            except (TypeError, ValueError):
                d["stage3"] = None
        if self.variant is Variant.DV05:
            d["coin"] = codec.pack(self.coin)
            d["e_hat"] = codec.pack(self.e_hat)
        return d


class ProverSession(_Session):
    """Prover for one session.

    With `witness` it is the honest prover. With `key_witness=(j, s_j)` it
    commits the key preimage in c_sk and proves the key clause instead;
    this is how the zero-knowledge simulator and some test fixtures behave.
    With neither, it can only run stage 1 and raises NoWitness past it.
    """

    role = "prover"

    def __init__(self, variant, params, pk, claim, witness=None, *, key_witness=None,
                 sid=0, rng=None, challenge_bits=DEFAULT_CHALLENGE_BITS):
        super().__init__(variant, params, claim, sid, rng, challenge_bits)
        _check_claim_for_variant(params, self.variant, claim)
        if witness is not None and key_witness is not None:
            raise ValueError("give at most one of witness / key_witness")
        self.pk = tuple(pk)
        self.witness = witness
        self.key_witness = key_witness
        self.stage1 = stage1_sigma(params, self.k)
        self.s1_first = self.s1_challenge = None
        self.c_w = self.c_sk = None
        self.openings = None
        self.e_hat = None
        self._s3_state = None
        self._advance(Stage.AWAIT_STAGE1_FIRST)

    def receive(self, msg):
        st = self.stage
        if st is Stage.AWAIT_STAGE1_FIRST:
            self._expect(msg, MsgType.STAGE1_FIRST)
            self.s1_first = msg.payload
            self.s1_challenge = self.rng.randrange(1 << self.k)
            self._advance(Stage.AWAIT_STAGE1_RESPONSE)
            return [self._out(MsgType.STAGE1_CHALLENGE, self.s1_challenge)]
        if st is Stage.AWAIT_STAGE1_RESPONSE:
            self._expect(msg, MsgType.STAGE1_RESPONSE)
            if not self.stage1.verify(self.pk, self.s1_first, self.s1_challenge, msg.payload):
                self.fail(Stage.ABORTED, "stage-1 proof from verifier did not verify")
                return []
            if self.witness is None and self.key_witness is None:
                raise NoWitness("stage-1-only prover cannot continue")
            self._advance(Stage.AWAIT_STAGE3_CHALLENGE)
            if self.variant is Variant.DV05:
                return self._dv05_commit_and_first()
            return self._commit_and_first()
        if st is Stage.AWAIT_STAGE3_CHALLENGE:
            if self.variant is Variant.DV05:
                self._expect(msg, MsgType.DV05_PHASE3Q)
                e = self.e_hat ^ msg.payload
            else:
                self._expect(msg, MsgType.STAGE3_CHALLENGE)
                e = msg.payload
            spec, _ = self._spec
            if not spec.valid_challenge(e):
                raise ProtocolViolation("stage-3 challenge out of range")
            z = spec.respond(self._s3_state, e)
            self._advance(Stage.ACCEPTED)
            if self.variant is Variant.DV05:
                return [self._out(MsgType.DV05_PHASE3Z, (self.openings, z))]
            return [self._out(MsgType.STAGE3_RESPONSE, z)]
        raise ProtocolViolation(f"prover session {self.sid} is {self.stage.value}")

    def _commit_and_first(self):
        gp, v = self.params, self.variant
        u = gp.random_scalar(self.rng)
        key_mode = self.key_witness is not None
        wit_a = None
        if v is not Variant.NO_CW:
            committed = 0 if key_mode else self.witness
            self.c_w, op_w = eg_commit(gp, committed, self.rng, u=u)
            if not key_mode:
                wit_a = (self.witness, op_w.r)
        else:
            wit_a = self.witness
        if v is not Variant.NO_CSK:
            sk_value = self.key_witness[1] if key_mode else 0
            self.c_sk, op_sk = eg_commit(gp, sk_value, self.rng, u=u)
        if key_mode:
            j, s = self.key_witness
            wit = (1, (j, s if v is Variant.NO_CSK else (s, op_sk.r)))
        else:
            wit = (0, wit_a)
        self._spec = stage3_sigma(v, gp, self.k, self.claim, self.pk, self.c_w, self.c_sk)
        spec, statement = self._spec
        a, self._s3_state = spec.first(statement, wit, self.rng)
        payload = (self.c_w.as_tuple() if self.c_w else None,
                   self.c_sk.as_tuple() if self.c_sk else None)
        return [self._out(MsgType.STAGE2_COMMITMENTS, payload),
                self._out(MsgType.STAGE3_FIRST, a)]

    def _dv05_commit_and_first(self):
        gp = self.params
        self.e_hat = self.rng.randrange(1 << self.k)
        c_e, openings = [], []
        for i in range(self.k):
            bit = (self.e_hat >> i) & 1
            tc, s = tc_commit_bit(gp, self.pk[0], bit, self.rng)
            c_e.append(tc.c)
            openings.append((bit, s))
        self.openings = tuple(openings)
        self._spec = stage3_sigma(self.variant, gp, self.k, self.claim, self.pk)
        spec, statement = self._spec
        wit = self.witness if self.key_witness is None else (1, self.key_witness)
        a, self._s3_state = spec.first(statement, wit, self.rng)
        return [self._out(MsgType.DV05_PHASE2, tuple(c_e)),
                self._out(MsgType.DV05_PHASE3A, a)]


def verifier_new(variant, params, keypair, claim, **kw):
    """A verifier session plus its eagerly emitted first message."""
    v = VerifierSession(variant, params, keypair, claim, **kw)
    return v, v.start()


def prover_new(variant, params, pk, claim, witness, **kw):
    return ProverSession(variant, params, pk, claim, witness, **kw)


def run_pair(verifier, prover, first_messages):
    """Shuttle messages between one verifier and one prover until both go quiet.

    Returns the ordered list of messages exchanged.
    """
    trace = []
    pending = [("p", m) for m in first_messages]
    while pending:
        to, msg = pending.pop(0)
        trace.append(msg)
        target = prover if to == "p" else verifier
        if target.stage.terminal:
            continue
        for out in target.receive(msg):
            pending.append(("v" if to == "p" else "p", out))
    return trace


_PROVER_SENDS = {
    Variant.DV05: (MsgType.STAGE1_CHALLENGE, MsgType.DV05_PHASE2, MsgType.DV05_PHASE3A,
                   MsgType.DV05_PHASE3Z),
}
_DEFAULT_PROVER_SENDS = (MsgType.STAGE1_CHALLENGE, MsgType.STAGE2_COMMITMENTS,
                         MsgType.STAGE3_FIRST, MsgType.STAGE3_RESPONSE)
_VERIFIER_SENDS = (MsgType.STAGE1_FIRST, MsgType.STAGE1_RESPONSE, MsgType.STAGE3_CHALLENGE,
                   MsgType.DV05_PHASE3Q)


def replay_verdict(variant, params, pk, k, claim, messages):
    """Recompute a verifier's status ('Accepted', 'Rejected', 'Open') from a session's messages.

    Needs no secret key: the verifier's decision depends only on what the
    prover sent and on the verifier's stage-3 coin, both recorded.
    """
    variant = Variant(variant)
    if not claim_valid(params, claim):
        return "Rejected"
    if variant in (Variant.FULL, Variant.NO_CSK) and not isinstance(claim, DlogClaim):
        return "Rejected"
    expected = iter(_PROVER_SENDS.get(variant, _DEFAULT_PROVER_SENDS))
    c_w = c_sk = c_e = a = e = coin = None
    for msg in messages:
        t = msg.type
        if t in _VERIFIER_SENDS:
            if t is MsgType.STAGE3_CHALLENGE:
                e = msg.payload
            elif t is MsgType.DV05_PHASE3Q:
                coin = msg.payload
            continue
        if t is not next(expected, None):
            return "Rejected"
        if t is MsgType.STAGE1_CHALLENGE:
            if not (isinstance(msg.payload, int) and 0 <= msg.payload < 1 << k):
                return "Rejected"
        elif t is MsgType.STAGE2_COMMITMENTS:
            try:
                c_w, c_sk = parse_stage2(variant, params, msg.payload)
            except ValueError:
                return "Rejected"
        elif t is MsgType.DV05_PHASE2:
            c_e = msg.payload
            if not (isinstance(c_e, tuple) and len(c_e) == k
                    and all(params.is_member(c) for c in c_e)):
                return "Rejected"
        elif t in (MsgType.STAGE3_FIRST, MsgType.DV05_PHASE3A):
            a = msg.payload
        elif t is MsgType.STAGE3_RESPONSE:
            spec, st = stage3_sigma(variant, params, k, claim, pk, c_w, c_sk)
            return "Accepted" if spec.verify(st, a, e, msg.payload) else "Rejected"
        elif t is MsgType.DV05_PHASE3Z:
            if not (isinstance(msg.payload, tuple) and len(msg.payload) == 2):
                return "Rejected"
            openings, z = msg.payload
            e_hat = dv05_opening_ok(params, k, pk[0], c_e, openings)
            if e_hat is None or coin is None:
                return "Rejected"
            spec, st = stage3_sigma(variant, params, k, claim, pk)
            return "Accepted" if spec.verify(st, a, e_hat ^ coin, z) else "Rejected"
    return "Open"
