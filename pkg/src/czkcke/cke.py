"""Concurrent knowledge extraction experiment.

The key generator hands out two independent key preimages: the one the
verifier actually uses (sk = s_b) and the other one (sk' = s_{1-b}). The
proof-stage simulator is just the honest verifier with recorded tapes.
`extract_all` rewinds every accepting session at its stage-3 challenge and
applies special soundness; `kei_estimate` then measures how often the
extracted witnesses relate to sk versus sk'. A protocol with concurrent
knowledge extraction keeps those two frequencies equal.

`czk_simulate` is the zero-knowledge direction: it plays the prover against
a (possibly malicious) verifier without any witness, by rewinding stage 1
to learn a key preimage and then proving the key clause.
"""

import copy
import random
from collections import Counter, deque
from dataclasses import dataclass, field

from . import codec
from .commit import eg_break_hiding
from .group import DEMO
from .protocol import (
    DlogClaim, KeyMixClaim, MsgType, ProverSession, Variant, VerifierKeyPair, VerifierSession,
    WireMessage, replay_verdict, stage1_sigma, stage3_sigma,
)
from .runtime import Execution, resume
from .sigma import (
    DEFAULT_CHALLENGE_BITS, CommitOpen, ExtractionError, OrProof, Schnorr, Transcript,
    challenge_width,
)

REWIND_CAP = 128

CASE1, CASE2, CASE3, FAILED = "Case1", "Case2", "Case3", "Failed"


class CoverageFailure(RuntimeError):
    """Stage-1 key extraction ran out of rewinds while the verifier kept answering."""


@dataclass(frozen=True)
class CkeKeys:
    pk: tuple
    sk: int
    sk_prime: int
    b: int

    @property
    def keypair(self):
        return VerifierKeyPair(self.pk, (self.sk, self.b))


def s_key(params, rng=None, *, s0=None, s1=None, b=None):
    """Key pair plus the unused preimage. The two preimages are forced distinct."""
    s0 = params.random_scalar(rng) if s0 is None else s0
    if s1 is None:
        s1 = params.random_scalar(rng)
        while s1 == s0:
            s1 = params.random_scalar(rng)
    elif s1 == s0:
        raise ValueError("s0 and s1 must differ")
    b = rng.randrange(2) if b is None else b
    s = (s0, s1)
    return CkeKeys((params.gexp(s0), params.gexp(s1)), s[b], s[1 - b], b)


def s_proof(keys, strategy, seed, *, params, variant, challenge_bits=DEFAULT_CHALLENGE_BITS,
            aux=None, session_cap=16):
    """Honest verifier with key sk against `strategy`; snapshots on so the run can be rewound."""
    ex = Execution(strategy, params=params, variant=variant, keypair=keys.keypair, seed=seed,
                   session_cap=session_cap, challenge_bits=challenge_bits, aux=aux,
                   snapshots=True)
    return ex.run()


# -- extraction -----------------------------------------------------------------

@dataclass
class SessionExtraction:
    sid: int
    accepted: bool
    witness: object = None      # scalar w_i, or None for ⊥
    case: str = None
    rewinds: int = 0
    randomness: object = None   # c_sk opening randomness when the key clause was extracted
    clause: str = None          # which leaf relation the witness satisfies

    def to_json(self):
        return {
            "sid": self.sid,
            "accepted": self.accepted,
            "witness": codec.pack(self.witness),
            "case": self.case,
            "rewinds": self.rewinds,
            "randomness": codec.pack(self.randomness),
            "clause": self.clause,
        }


@dataclass
class ExtractionReport:
    sessions: list
    seed: object = None

    def witnesses(self):
        return [s.witness for s in self.sessions]

    def cases(self):
        return Counter(s.case for s in self.sessions if s.accepted)

    def to_json(self):
        return {"seed": self.seed, "sessions": [s.to_json() for s in self.sessions],
                "cases": dict(self.cases())}


def _leaf(spec, statement, wit):
    """Descend an OR witness to its leaf: (kind, leaf statement, leaf witness)."""
    while isinstance(spec, OrProof):
        b, wit = wit
        spec, statement = spec.branches[b], statement[b]
    if isinstance(spec, CommitOpen):
        return "commit-open", statement, wit
    if isinstance(spec, Schnorr):
        return "schnorr", statement, wit
    return spec.kind, statement, wit


def _statement_targets(claim):
    if isinstance(claim, DlogClaim):
        return {claim.x}
    if isinstance(claim, KeyMixClaim):
        return _statement_targets(claim.inner)
    return set()


def classify(params, keys, claim, spec, statement, wit):
    """Case label, scalar witness, c_sk randomness and leaf kind for an extracted OR witness."""
    kind, leaf_st, leaf_wit = _leaf(spec, statement, wit)
    if kind == "commit-open":
        w, r = leaf_wit
    else:
        w, r = leaf_wit, None
    y = params.gexp(w)
    if y in _statement_targets(claim):
        case = CASE3
    elif y == keys.pk[keys.b]:
        case = CASE2
    elif y == keys.pk[1 - keys.b]:
        case = CASE1
    else:
        return FAILED, w, r, kind
    # Only the c_sk clause carries an opening of a key; c_w's randomness is not reported.
    if case == CASE3 or kind != "commit-open" or leaf_st[0] not in keys.pk:
        r = None
    return case, w, r, kind


def _spec_for(record, view):
    return stage3_sigma(record.variant, record.params, record.k, view.claim, record.pk,
                        view.c_w, view.c_sk)


def extract_session(record, keys, sid, rewind_cap=REWIND_CAP, rng=None):
    view = record.view(sid)
    out = SessionExtraction(sid, view.status == "Accepted")
    if not out.accepted:
        return out
    snap = record.snapshots.get(f"challenge:{sid}")
    if snap is None:
        raise ValueError("record has no snapshot for this session; run with snapshots=True")
    rng = rng or random.Random(f"{record.seed}/extract/{sid}")
    spec, statement = _spec_for(record, view)
    t1 = view.transcript
    span = 1 << record.k
    while out.rewinds < rewind_cap:
        c = rng.randrange(span)
        if c == view.drawn_challenge:
            continue  # collisions are redrawn, not counted
        out.rewinds += 1
        v2 = resume(snap, c).view(sid)
        t2 = v2.transcript
        if v2.status != "Accepted" or t2 is None or t2.first != t1.first:
            continue
        try:
            wit = spec.extract(statement, t1, t2)
        except ExtractionError:
            continue
        if not spec.relation(statement, wit):
            continue
        out.case, out.witness, out.randomness, out.clause = classify(
            record.params, keys, view.claim, spec, statement, wit)
        if out.case == FAILED:
            out.witness = out.randomness = None
        return out
    out.case = FAILED
    return out


def extract_all(record, keys, rewind_cap=REWIND_CAP, seed=None):
    """Rewind each accepting session of a snapshot-enabled run; ⊥ (None) for the rest."""
    seed = record.seed if seed is None else seed
    sessions = [extract_session(record, keys, s["sid"], rewind_cap,
                                random.Random(f"{seed}/extract/{s['sid']}"))
                for s in record.sessions]
    return ExtractionReport(sessions, seed)


def break_csk(record, sid, budget=None):
    """Brute-force the value committed in session `sid`'s c_sk; None if not found within budget."""
    view = record.view(sid)
    if view.c_sk is None:
        raise ValueError(f"session {sid} has no c_sk")
    return eg_break_hiding(record.params, view.c_sk, budget)


# -- knowledge-extraction independence ---------------------------------------------

def rel_key_preimage(params, s, witnesses, record):
    y = params.gexp(s)
    return any(w is not None and params.gexp(w) == y for w in witnesses)


def rel_first_witness_equals(params, s, witnesses, record):
    first = next((w for w in witnesses if w is not None), None)
    return first is not None and first % params.q == s % params.q


RELATIONS = {
    "key-preimage": rel_key_preimage,
    "first-witness-equals": rel_first_witness_equals,
}


def _strategy_honest(params, keys, rng):
    from .attacks import HonestProver
    return HonestProver(count=1)


def _strategy_key_committing(params, keys, rng):
    from .attacks import KeyCommittingProver
    return KeyCommittingProver((keys.b, keys.sk))


def _attack(name):
    def factory(params, keys, rng):
        from .attacks import ATTACKS
        return ATTACKS[name]()
    return factory


# Factories take (params, keys, rng). Only the key-committing test fixture looks at keys.
STRATEGIES = {
    "honest": _strategy_honest,
    "key-committing": _strategy_key_committing,
    "attack-no-csk": _attack("no-csk"),
    "attack-no-cw": _attack("no-cw"),
    "attack-dv05": _attack("dv05"),
    "full-transplant": _attack("full-transplant"),
}


@dataclass
class KeiStats:
    trials: int
    p_sk: float
    p_sk_prime: float
    cases: Counter = field(default_factory=Counter)
    runs: list = field(default_factory=list, repr=False)

    @property
    def gap(self):
        return abs(self.p_sk - self.p_sk_prime)

    @property
    def tolerance(self):
        return 3 * (1 / self.trials) ** 0.5

    def to_json(self):
        return {"trials": self.trials, "p_sk": self.p_sk, "p_sk_prime": self.p_sk_prime,
                "gap": self.gap, "tolerance": self.tolerance, "cases": dict(self.cases)}


def kei_estimate(variant, strategy_factory, relation="key-preimage", trials=200, seed=0, *,
                 params=DEMO, challenge_bits=DEFAULT_CHALLENGE_BITS, rewind_cap=REWIND_CAP,
                 keep_runs=False):
    """Run `trials` independent experiments with fresh keys and compare R(sk) against R(sk')."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if isinstance(strategy_factory, str):
        strategy_factory = STRATEGIES[strategy_factory]
    rel = RELATIONS[relation] if isinstance(relation, str) else relation
    hits = hits_prime = 0
    cases = Counter()
    runs = []
    for t in range(trials):
        tseed = f"{seed}/trial/{t}"
        rng = random.Random(f"{tseed}/keys")
        keys = s_key(params, rng)
        strategy = strategy_factory(params, keys, rng)
        record = s_proof(keys, strategy, tseed, params=params, variant=variant,
                         challenge_bits=challenge_bits)
        report = extract_all(record, keys, rewind_cap)
        w = report.witnesses()
        hits += bool(rel(params, keys.sk, w, record))
        hits_prime += bool(rel(params, keys.sk_prime, w, record))
        cases.update(report.cases())
        if keep_runs:
            runs.append((keys, record, report))
    return KeiStats(trials, hits / trials, hits_prime / trials, cases, runs)


# -- zero-knowledge simulator ------------------------------------------------------------

class HonestVerifier:
    """Verifier side driven by the simulator: one honest VerifierSession per session id.

    Any object with open(sid, claim) / receive(msg) returning outgoing
    messages can stand in as a malicious verifier.
    """

    def __init__(self, variant, params, keypair, seed=0, challenge_bits=DEFAULT_CHALLENGE_BITS):
        self.variant = Variant(variant)
        self.params = params
        self.keypair = keypair
        self.seed = seed
        self.challenge_bits = challenge_bits
        self.sessions = {}

    def open(self, sid, claim):
        v = VerifierSession(self.variant, self.params, self.keypair, claim, sid=sid,
                            rng=random.Random(f"{self.seed}/verifier/{sid}"),
                            challenge_bits=self.challenge_bits)
        self.sessions[sid] = v
        return v.start()

    def receive(self, msg):
        v = self.sessions[msg.sid]
        if v.stage.terminal:
            return []
        return v.receive(msg)

    def status(self, sid):
        return self.sessions[sid].status


class AbortingVerifier(HonestVerifier):
    """Sends a broken stage-1 response, so every honest prover aborts."""

    def receive(self, msg):
        out = []
        for m in super().receive(msg):
            if m.type is MsgType.STAGE1_RESPONSE:
                e0, z0, e1, z1 = m.payload
                m = WireMessage(m.sid, m.type, (e0, (z0 + 1) % self.params.q, e1, z1))
            out.append(m)
        return out


@dataclass
class SimulatedView:
    variant: Variant
    params: object
    pk: tuple
    k: int
    claims: list
    trace: list
    statuses: dict
    phases: int
    key: object               # (j, s_j) once covered, else None
    rewinds: int
    prover_stages: dict

    def messages(self, sid):
        return [m for _, m in self.trace if m.sid == sid]

    def reverify(self):
        return {sid: replay_verdict(self.variant, self.params, self.pk, self.k, claim,
                                    self.messages(sid))
                for sid, claim in enumerate(self.claims, 1)}


def _extract_key(params, pk, k, snap, sid, t1, rng, rewind_cap):
    """Rewind a verifier copy to just before its stage-1 challenge and extract (j, s_j)."""
    stage1 = stage1_sigma(params, k)
    tries = 0
    while tries < rewind_cap:
        e2 = rng.randrange(1 << k)
        if e2 == t1.challenge:
            continue
        tries += 1
        twin = copy.deepcopy(snap)
        outs = twin.receive(WireMessage(sid, MsgType.STAGE1_CHALLENGE, e2))
        resp = next((m.payload for m in outs
                     if m.sid == sid and m.type is MsgType.STAGE1_RESPONSE), None)
        if resp is None or not stage1.verify(pk, t1.first, e2, resp):
            continue
        j, s = stage1.extract(pk, t1, Transcript(t1.first, e2, resp))
        if params.gexp(s) == pk[j]:
            return (j, s), tries
    return None, tries


def czk_simulate(params, pk, claims, verifier, *, variant=Variant.FULL, rewind_cap=REWIND_CAP,
                 seed=0, challenge_bits=DEFAULT_CHALLENGE_BITS, max_phases=8):
    """Produce the verifier's view of concurrent sessions on `claims` without any witness.

    Each phase runs every session from scratch against a fresh copy of the
    verifier. The first time a stage-1 proof verifies while no key is known,
    the phase stops, the verifier is rewound to just before that stage-1
    challenge and a key preimage is extracted. The next phase then commits
    that key in c_sk and proves the key clause, so it never gets stuck.
    """
    variant = Variant(variant)
    k = challenge_width(params, challenge_bits)
    stage1 = stage1_sigma(params, k)
    key = None
    rewinds = 0
    for phase in range(1, max_phases + 1):
        rng = random.Random(f"{seed}/czk/{phase}")
        vstar = copy.deepcopy(verifier)
        provers = {}
        pending = deque()
        trace = []
        s1_snaps = {}
        for sid, claim in enumerate(claims, 1):
            provers[sid] = ProverSession(variant, params, pk, claim, key_witness=key, sid=sid,
                                         rng=random.Random(rng.getrandbits(64)),
                                         challenge_bits=challenge_bits)
            for m in vstar.open(sid, claim):
                trace.append(("to-prover", m))
                pending.append(m)
        restart = False
        while pending:
            msg = pending.popleft()
            pr = provers[msg.sid]
            if pr.stage.terminal:
                continue
            if msg.type is MsgType.STAGE1_FIRST and key is None:
                s1_snaps[msg.sid] = copy.deepcopy(vstar)
            if (msg.type is MsgType.STAGE1_RESPONSE and key is None
                    and stage1.verify(pk, pr.s1_first, pr.s1_challenge, msg.payload)):
                t1 = Transcript(pr.s1_first, pr.s1_challenge, msg.payload)
                key, used = _extract_key(params, pk, k, s1_snaps[msg.sid], msg.sid, t1, rng,
                                         rewind_cap)
                rewinds += used
                if key is None:
                    raise CoverageFailure(f"no key extracted within {rewind_cap} rewinds")
                restart = True
                break
            for out in pr.receive(msg):
                trace.append(("to-verifier", out))
                for back in vstar.receive(out):
                    trace.append(("to-prover", back))
                    pending.append(back)
        if restart:
            continue
        statuses = {sid: vstar.status(sid) for sid in provers} if hasattr(vstar, "status") else {}
        return SimulatedView(variant, params, tuple(pk), k, list(claims), trace, statuses, phase,
                             key, rewinds, {sid: p.stage.value for sid, p in provers.items()})
    raise CoverageFailure("phase limit reached")
