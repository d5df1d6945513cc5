"""Deterministic concurrent-execution harness for the bare public-key model.

One honest verifier (one registered key) faces an adversarial prover that
owns the schedule: it opens sessions, chooses statements, and decides which
message goes where and when. Every verifier reply is handed back to the
adversary immediately.

The loop is single-threaded and a pure function of (strategy, seed):
each verifier session draws from its own seeded tape and the adversary
from another. With ``snapshots=True`` the whole execution is frozen just
before each verifier stage-3 challenge is drawn; `resume` restarts a frozen
copy, optionally forcing a different challenge. The knowledge extractor
rewinds through this.
"""

import copy
import hashlib
import json
import pickle
import random
from collections import deque, namedtuple
from dataclasses import dataclass, field

from . import codec
from .commit import ElGamalCommitment
from .group import GroupParams
from .protocol import (
    CHALLENGE_TRIGGERS, InvalidStatement, MsgType, ProtocolViolation, Stage, Variant,
    VerifierSession, WireMessage, claim_from_dict, claim_to_dict, replay_verdict,
)
from .sigma import DEFAULT_CHALLENGE_BITS, challenge_width, parse_transcript


class CapExceeded(RuntimeError):
    pass


class UnknownLabel(KeyError):
    pass


# -- adversary actions ----------------------------------------------------------

@dataclass(frozen=True)
class OpenSession:
    claim: object


@dataclass(frozen=True)
class Send:
    msg: WireMessage


@dataclass(frozen=True)
class Halt:
    pass


@dataclass(frozen=True)
class Note:
    """Free-form annotation the adversary leaves in the run record."""
    data: dict


class PublicFile:
    """Registered verifier keys, by id."""

    def __init__(self):
        self._keys = {}

    def register(self, vid, pk):
        if vid in self._keys:
            raise ValueError(f"verifier id {vid!r} already registered")
        self._keys[vid] = tuple(pk)

    def __getitem__(self, vid):
        return self._keys[vid]

    def __iter__(self):
        return iter(self._keys)

    def to_dict(self):
        return {vid: codec.pack(pk) for vid, pk in self._keys.items()}


class Context:
    """What a strategy may see: public data, its own tape, and its own past traffic."""

    def __init__(self, execution):
        self._ex = execution

    @property
    def params(self):
        return self._ex.params

    @property
    def pk(self):
        return self._ex.pk

    @property
    def variant(self):
        return self._ex.variant

    @property
    def k(self):
        return self._ex.k

    @property
    def rng(self):
        return self._ex.adversary_rng

    @property
    def aux(self):
        return self._ex.aux

    @property
    def next_sid(self):
        """Sid the next processed OpenSession will receive (sessions are numbered 1, 2, ...)."""
        return self._ex.opened + sum(isinstance(a, OpenSession) for a in self._ex.actions) + 1


TraceEntry = namedtuple("TraceEntry", "direction msg")

SessionView = namedtuple(
    "SessionView", "sid claim status reason c_w c_sk transcript drawn_challenge")


@dataclass
class Snapshot:
    label: str
    sid: int
    position: int
    state: "Execution" = field(repr=False)


@dataclass
class RunRecord:
    params: GroupParams
    variant: Variant
    pk: tuple
    seed: object
    k: int
    aux: object
    sessions: list
    trace: list
    notes: list
    public_file: dict = field(default_factory=dict)
    snapshots: dict = field(default_factory=dict, repr=False, compare=False)

    def session(self, sid):
        for s in self.sessions:
            if s["sid"] == sid:
                return s
        raise KeyError(sid)

    def status(self, sid):
        return self.session(sid)["status"]

    def accepted(self):
        return [s["sid"] for s in self.sessions if s["status"] == "Accepted"]

    def messages(self, sid):
        return [e.msg for e in self.trace if e.msg.sid == sid]

    def view(self, sid):
        s = self.session(sid)
        c_w = ElGamalCommitment.from_tuple(codec.unpack(s["c_w"])) if s.get("c_w") else None
        c_sk = ElGamalCommitment.from_tuple(codec.unpack(s["c_sk"])) if s.get("c_sk") else None
        t = parse_transcript(s["stage3"]) if s.get("stage3") else None
        drawn = None
        if self.variant is Variant.DV05:
            drawn = codec.unpack(s.get("coin"))
        elif t is not None:
            drawn = t.challenge
        return SessionView(sid, claim_from_dict(s["claim"]), s["status"], s.get("reason"),
                           c_w, c_sk, t, drawn)

    def to_json(self):
        return {
            "params": self.params.to_dict(),
            "variant": self.variant.value,
            "pk": codec.pack(self.pk),
            "public_file": self.public_file,
            "seed": self.seed,
            "k": self.k,
            "aux": self.aux,
            "sessions": self.sessions,
            "trace": [dict(dir=e.direction, **e.msg.to_dict()) for e in self.trace],
            "notes": self.notes,
        }

    def dumps(self, **kw):
        return json.dumps(self.to_json(), sort_keys=True, **kw)

    @classmethod
    def from_json(cls, d):
        trace = [TraceEntry(e["dir"], WireMessage.from_dict(e)) for e in d["trace"]]
        return cls(GroupParams.from_dict(d["params"]), Variant(d["variant"]),
                   codec.unpack(d["pk"]), d["seed"], d["k"], d.get("aux"),
                   d["sessions"], trace, d.get("notes", []), d.get("public_file", {}))

    def reverify(self):
        """Recompute every session's status from the recorded messages alone."""
        out = {}
        for s in self.sessions:
            if s.get("reason") == "invalid-statement":
                out[s["sid"]] = "Rejected"
                continue
            out[s["sid"]] = replay_verdict(self.variant, self.params, self.pk, self.k,
                                           claim_from_dict(s["claim"]), self.messages(s["sid"]))
        return out


class Execution:
    """A single run in progress. Use `run()` for the whole thing or `step()` to single-step."""

    def __init__(self, strategy, *, params, variant, keypair, seed, session_cap=16,
                 challenge_bits=DEFAULT_CHALLENGE_BITS, aux=None, snapshots=False,
                 verifier_id="V"):
        if session_cap < 1:
            raise ValueError("session_cap must be at least 1")
        self.strategy = strategy
        self.params = params
        self.variant = Variant(variant)
        self.keypair = keypair
        self.pk = tuple(keypair.pk)
        self.seed = seed
        self.session_cap = session_cap
        self.challenge_bits = challenge_bits
        self.k = challenge_width(params, challenge_bits)
        self.aux = aux
        self.public_file = PublicFile()
        self.public_file.register(verifier_id, self.pk)
        self.adversary_rng = random.Random(f"{seed}/adversary")
        self.sessions = {}
        self.dead = {}
        self.opened = 0
        self.actions = deque()
        self.inbox = deque()
        self.trace = []
        self.notes = []
        self.started = False
        self.halted = False
        self._snapshots = {} if snapshots else None

    @property
    def ctx(self):
        return Context(self)

    def step(self):
        """Process one event. Returns False once the run is over."""
        if not self.started:
            self.started = True
            self.actions.extend(self.strategy.on_start(self.ctx) or [])
            return True
        if self.halted:
            return False
        if self.actions:
            self._maybe_snapshot(self.actions[0])
            self._apply(self.actions.popleft())
            return True
        if self.inbox:
            msg = self.inbox.popleft()
            self.actions.extend(self.strategy.on_message(msg, self.ctx) or [])
            return True
        return False

    def run(self):
        while self.step():
            pass
        return self.record()

    def _apply(self, act):
        if isinstance(act, Halt):
            self.halted = True
        elif isinstance(act, Note):
            self.notes.append(dict(act.data))
        elif isinstance(act, OpenSession):
            self._open(act.claim)
        elif isinstance(act, Send):
            self._deliver(act.msg)
        else:
            raise TypeError(f"unknown action {act!r}")

    def _open(self, claim):
        if self.opened >= self.session_cap:
            raise CapExceeded(f"more than {self.session_cap} sessions")
        self.opened += 1
        sid = self.opened
        rng = random.Random(f"{self.seed}/verifier/{sid}")
        try:
            v = VerifierSession(self.variant, self.params, self.keypair, claim, sid=sid, rng=rng,
                                challenge_bits=self.challenge_bits)
        except InvalidStatement:
            self.dead[sid] = {"sid": sid, "claim": claim_to_dict(claim), "status": "Rejected",
                              "stage": Stage.REJECTED.value, "reason": "invalid-statement",
                              "c_w": None, "c_sk": None}
            return
        self.sessions[sid] = v
        self._emit(v.start())

    def _deliver(self, msg):
        self.trace.append(TraceEntry("to-verifier", msg))
        v = self.sessions.get(msg.sid)
        if v is None or v.stage.terminal:
            return
        try:
            out = v.receive(msg)
        except ProtocolViolation as exc:
            v.fail(Stage.REJECTED, f"protocol-violation: {exc}")
            return
        self._emit(out)

    def _emit(self, msgs):
        for m in msgs:
            self.trace.append(TraceEntry("to-prover", m))
            self.inbox.append(m)

    def _maybe_snapshot(self, act):
        if self._snapshots is None or not isinstance(act, Send):
            return
        msg = act.msg
        v = self.sessions.get(msg.sid)
        if v is None or msg.type not in CHALLENGE_TRIGGERS or v.stage is not Stage.AWAIT_STAGE3_FIRST:
            return
        label = f"challenge:{msg.sid}"
        if label in self._snapshots:
            return
        sink, self._snapshots = self._snapshots, None
        try:
            frozen = copy.deepcopy(self)
        finally:
            self._snapshots = sink
        self._snapshots[label] = Snapshot(label, msg.sid, len(self.trace), frozen)

    def record(self):
        summaries = [v.summary() for v in self.sessions.values()] + list(self.dead.values())
        summaries.sort(key=lambda s: s["sid"])
        return RunRecord(self.params, self.variant, self.pk, self.seed, self.k, self.aux,
                         summaries, list(self.trace), list(self.notes),
                         self.public_file.to_dict(), dict(self._snapshots or {}))

    def session_digest(self, sid):
        """Stable hash of one verifier session's state, for isolation checks."""
        v = self.sessions[sid]
        return hashlib.sha256(pickle.dumps(v.__dict__, protocol=4)).hexdigest()


def run(strategy, **kw):
    return Execution(strategy, **kw).run()


def snapshot(execution, label):
    """Look up a labelled snapshot taken during `execution` (an Execution or RunRecord)."""
    snaps = execution.snapshots if isinstance(execution, RunRecord) else execution._snapshots or {}
    try:
        return snaps[label]
    except KeyError:
        raise UnknownLabel(label) from None


def resume(snap, challenge_override=None):
    """Continue a frozen execution to the end, optionally forcing the pending challenge."""
    ex = copy.deepcopy(snap.state)
    if challenge_override is not None:
        ex.sessions[snap.sid].challenge_override = challenge_override
    return ex.run()
