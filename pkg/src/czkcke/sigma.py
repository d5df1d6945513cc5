"""Three-move public-coin proofs: Schnorr, commitment opening, OR-composition.

Every protocol object exposes the same surface:

    first(statement, witness, rng)        -> (first_message, prover_state)
    respond(prover_state, challenge)      -> response
    verify(statement, first, challenge, response) -> bool
    simulate(statement, challenge, rng)   -> (first_message, response)
    extract(statement, transcript, transcript) -> witness
    relation(statement, witness)          -> bool

Challenges are k-bit integers with 2**k < q. Randomness is drawn only via
``rng.randrange(n)``, and ``prover_coins`` / ``simulator_coins`` list the
ranges consumed, in order, so that every coin tape can be enumerated on a
small group (see `ScriptedRng`).
"""

import itertools
from collections import Counter, namedtuple

from . import codec

DEFAULT_CHALLENGE_BITS = 16

Transcript = namedtuple("Transcript", "first challenge response")


class SameChallenge(ValueError):
    """Two transcripts share their challenge, so nothing can be extracted."""


class ExtractionError(ValueError):
    pass


class NoWitness(ValueError):
    pass


def challenge_width(params, requested=DEFAULT_CHALLENGE_BITS):
    return max(1, min(requested, params.q.bit_length() - 1))


class ScriptedRng:
    """Serves a fixed sequence of coins, then falls back to another rng (if any)."""

    def __init__(self, values, fallback=None):
        self._values = list(values)
        self._pos = 0
        self.fallback = fallback

    def randrange(self, n):
        if self._pos < len(self._values):
            v = self._values[self._pos]
            self._pos += 1
            if not 0 <= v < n:
                raise ValueError(f"scripted coin {v} outside range({n})")
            return v
        if self.fallback is None:
            raise IndexError("scripted tape exhausted")
        return self.fallback.randrange(n)

    @property
    def consumed(self):
        return self._pos


def _int_in(v, lo, hi):
    return isinstance(v, int) and not isinstance(v, bool) and lo <= v < hi


def _pair(v):
    return isinstance(v, tuple) and len(v) == 2


class SigmaProtocol:
    kind = "sigma"

    def __init__(self, params, challenge_bits=DEFAULT_CHALLENGE_BITS):
        self.params = params
        self.k = challenge_width(params, challenge_bits)

    def valid_challenge(self, e):
        return _int_in(e, 0, 1 << self.k)

    def prove(self, statement, witness, challenge, rng):
        a, state = self.first(statement, witness, rng)
        return Transcript(a, challenge, self.respond(state, challenge))

    def check(self, statement, transcript):
        return self.verify(statement, *transcript)

    def describe(self, first, challenge, response):
        return {
            "type": self.kind,
            "first": codec.pack(first),
            "challenge": codec.pack(challenge),
            "response": codec.pack(response),
        }

    def _split_pair(self, t1, t2):
        if t1.first != t2.first:
            raise ExtractionError("transcripts do not share a first message")
        if t1.challenge == t2.challenge:
            raise SameChallenge("identical challenges")
        return self.params.sinv(t1.challenge - t2.challenge)


class Schnorr(SigmaProtocol):
    """Knowledge of w with g^w = x."""

    kind = "schnorr"

    def relation(self, x, w):
        return _int_in(w, 0, self.params.q) and self.params.gexp(w) == x

    def first(self, x, w, rng):
        t = rng.randrange(self.params.q)
        return self.params.gexp(t), (t, w)

    def respond(self, state, e):
        t, w = state
        return (t + e * w) % self.params.q

    def verify(self, x, a, e, z):
        gp = self.params
        if not (gp.is_member(x) and _int_in(a, 1, gp.p) and self.valid_challenge(e)
                and _int_in(z, 0, gp.q)):
            return False
        return gp.gexp(z) == gp.mul(a, gp.exp(x, e))

    def simulate(self, x, e, rng):
        gp = self.params
        z = rng.randrange(gp.q)
        return gp.mul(gp.gexp(z), gp.exp(x, -e)), z

    def extract(self, x, t1, t2):
        d = self._split_pair(t1, t2)
        return (t1.response - t2.response) * d % self.params.q

    def prover_coins(self, witness):
        return [self.params.q]

    def simulator_coins(self):
        return [self.params.q]


class CommitOpen(SigmaProtocol):
    """Knowledge of (w, r) with x = g^w, gbar = g^r and hbar = g^w h^r.

    Statement: (x, h, gbar, hbar). The first message carries three
    components built from two independent randomisers t_w, t_r:
    A = (g^t_w, g^t_r, g^t_w h^t_r).
    """

    # A two-component variant with a single randomiser t, a = (g^t, h^t), and
    # checks g^z0 = a0 x^e, g^z1 = a0 gbar^e, h^z1 = a1 (hbar/x)^e ties z0 and
    # z1 to the same a0, so its simulator cannot pick them independently.
    # The three-component form proves the same relation and keeps perfect
    # SHVZK and special soundness.

    kind = "commit-open"

    def relation(self, st, wit):
        gp = self.params
        x, h, gbar, hbar = st
        if not (_pair(wit) and _int_in(wit[0], 0, gp.q) and _int_in(wit[1], 0, gp.q)):
            return False
        w, r = wit
        return (gp.gexp(w) == x and gp.gexp(r) == gbar
                and gp.mul(gp.gexp(w), gp.exp(h, r)) == hbar)

    def first(self, st, wit, rng):
        gp = self.params
        h = st[1]
        tw = rng.randrange(gp.q)
        tr = rng.randrange(gp.q)
        a = (gp.gexp(tw), gp.gexp(tr), gp.mul(gp.gexp(tw), gp.exp(h, tr)))
        return a, (tw, tr, wit)

    def respond(self, state, e):
        tw, tr, (w, r) = state
        q = self.params.q
        return (tw + e * w) % q, (tr + e * r) % q

    def verify(self, st, a, e, z):
        gp = self.params
        if not (isinstance(st, tuple) and len(st) == 4 and all(gp.is_member(v) for v in st)):
            return False
        if not (isinstance(a, tuple) and len(a) == 3 and all(_int_in(v, 1, gp.p) for v in a)):
            return False
        if not (self.valid_challenge(e) and _pair(z)
                and _int_in(z[0], 0, gp.q) and _int_in(z[1], 0, gp.q)):
            return False
        x, h, gbar, hbar = st
        zw, zr = z
        return (gp.gexp(zw) == gp.mul(a[0], gp.exp(x, e))
                and gp.gexp(zr) == gp.mul(a[1], gp.exp(gbar, e))
                and gp.mul(gp.gexp(zw), gp.exp(h, zr)) == gp.mul(a[2], gp.exp(hbar, e)))

    def simulate(self, st, e, rng):
        gp = self.params
        x, h, gbar, hbar = st
        zw = rng.randrange(gp.q)
        zr = rng.randrange(gp.q)
        a = (
            gp.mul(gp.gexp(zw), gp.exp(x, -e)),
            gp.mul(gp.gexp(zr), gp.exp(gbar, -e)),
            gp.mul(gp.mul(gp.gexp(zw), gp.exp(h, zr)), gp.exp(hbar, -e)),
        )
        return a, (zw, zr)

    def extract(self, st, t1, t2):
        d = self._split_pair(t1, t2)
        q = self.params.q
        (zw, zr), (zw2, zr2) = t1.response, t2.response
        return (zw - zw2) * d % q, (zr - zr2) * d % q

    def prover_coins(self, witness):
        return [self.params.q, self.params.q]

    def simulator_coins(self):
        return [self.params.q, self.params.q]


class EmptyLanguage(SigmaProtocol):
    """A proof system for the empty language: accept iff the first message equals the challenge.

    No prover exists, the simulator just echoes the challenge, and two
    accepting transcripts with a common first message never have distinct
    challenges, so special soundness holds vacuously.
    """

    kind = "empty"

    def relation(self, st, wit):
        return False

    def first(self, st, wit, rng):
        raise NoWitness("the empty language has no witnesses")

    def respond(self, state, e):
        raise NoWitness("the empty language has no witnesses")

    def verify(self, st, a, e, z):
        return self.valid_challenge(e) and a == e and z == 0

    def simulate(self, st, e, rng):
        return e, 0

    def extract(self, st, t1, t2):
        self._split_pair(t1, t2)
        raise ExtractionError("the empty language has no witnesses")

    def prover_coins(self, witness):
        raise NoWitness("the empty language has no witnesses")

    def simulator_coins(self):
        return []


class OrProof(SigmaProtocol):
    """OR-composition of two protocols with equal challenge width.

    Statement (st0, st1); witness (b, w_b). Response (e0, z0, e1, z1) with
    e0 XOR e1 equal to the verifier's challenge.
    """

    kind = "or"

    def __init__(self, left, right):
        if left.k != right.k:
            raise ValueError(f"challenge widths differ: {left.k} vs {right.k}")
        if left.params != right.params:
            raise ValueError("branches live in different groups")
        self.params = left.params
        self.k = left.k
        self.branches = (left, right)

    def relation(self, st, wit):
        if not (_pair(wit) and wit[0] in (0, 1)):
            return False
        b, wb = wit
        return self.branches[b].relation(st[b], wb)

    def first(self, st, wit, rng):
        b, wb = wit
        o = 1 - b
        ab, state_b = self.branches[b].first(st[b], wb, rng)
        e_o = rng.randrange(1 << self.k)
        ao, zo = self.branches[o].simulate(st[o], e_o, rng)
        a = (ab, ao) if b == 0 else (ao, ab)
        return a, (b, state_b, e_o, zo)

    def respond(self, state, s):
        b, state_b, e_o, zo = state
        e_b = s ^ e_o
        zb = self.branches[b].respond(state_b, e_b)
        return (e_b, zb, e_o, zo) if b == 0 else (e_o, zo, e_b, zb)

    def verify(self, st, a, s, resp):
        if not (_pair(st) and _pair(a) and isinstance(resp, tuple) and len(resp) == 4):
            return False
        e0, z0, e1, z1 = resp
        if not (self.valid_challenge(s) and self.valid_challenge(e0) and self.valid_challenge(e1)):
            return False
        if e0 ^ e1 != s:
            return False
        left, right = self.branches
        return left.verify(st[0], a[0], e0, z0) and right.verify(st[1], a[1], e1, z1)

    def failing_branches(self, st, a, s, resp):
        """Which parts of an OR transcript fail: any of 'shape', 'xor', 0, 1."""
        if not (_pair(st) and _pair(a) and isinstance(resp, tuple) and len(resp) == 4):
            return ["shape"]
        e0, z0, e1, z1 = resp
        out = []
        if not (self.valid_challenge(e0) and self.valid_challenge(e1)) or e0 ^ e1 != s:
            out.append("xor")
        for i, (e, z) in enumerate(((e0, z0), (e1, z1))):
            if not self.branches[i].verify(st[i], a[i], e, z):
                out.append(i)
        return out

    def simulate(self, st, s, rng):
        e0 = rng.randrange(1 << self.k)
        e1 = s ^ e0
        a0, z0 = self.branches[0].simulate(st[0], e0, rng)
        a1, z1 = self.branches[1].simulate(st[1], e1, rng)
        return (a0, a1), (e0, z0, e1, z1)

    def extract(self, st, t1, t2):
        if t1.first != t2.first:
            raise ExtractionError("transcripts do not share a first message")
        if t1.challenge == t2.challenge:
            raise SameChallenge("identical challenges")
        r1, r2 = t1.response, t2.response
        for i in (0, 1):
            e, z = r1[2 * i], r1[2 * i + 1]
            e2, z2 = r2[2 * i], r2[2 * i + 1]
            if e != e2:
                inner = self.branches[i].extract(
                    st[i], Transcript(t1.first[i], e, z), Transcript(t2.first[i], e2, z2))
                return i, inner
        raise ExtractionError("no branch has differing challenges")

    def prover_coins(self, witness):
        b, wb = witness
        return (self.branches[b].prover_coins(wb) + [1 << self.k]
                + self.branches[1 - b].simulator_coins())

    def simulator_coins(self):
        return [1 << self.k] + self.branches[0].simulator_coins() + self.branches[1].simulator_coins()

    def describe(self, first, challenge, response):
        e0, z0, e1, z1 = response
        return {
            "type": "or",
            "challenge": codec.pack(challenge),
            "branches": [
                self.branches[0].describe(first[0], e0, z0),
                self.branches[1].describe(first[1], e1, z1),
            ],
        }


def parse_transcript(doc):
    """Inverse of `describe`: rebuild (first, challenge, response) from the nested record."""
    if doc["type"] == "or":
        (a0, e0, z0), (a1, e1, z1) = (parse_transcript(b) for b in doc["branches"])
        return Transcript((a0, a1), codec.unpack(doc["challenge"]), (e0, z0, e1, z1))
    return Transcript(codec.unpack(doc["first"]), codec.unpack(doc["challenge"]),
                      codec.unpack(doc["response"]))


def _coin_tapes(ranges):
    return itertools.product(*(range(n) for n in ranges))


def enumerate_real(spec, statement, witness, challenge):
    """Multiset of honest transcripts at a fixed challenge, over every prover coin tape."""
    out = Counter()
    for tape in _coin_tapes(spec.prover_coins(witness)):
        out[spec.prove(statement, witness, challenge, ScriptedRng(tape))] += 1
    return out


def enumerate_simulated(spec, statement, challenge):
    """Multiset of simulated transcripts at a fixed challenge, over every simulator coin tape."""
    out = Counter()
    for tape in _coin_tapes(spec.simulator_coins()):
        a, z = spec.simulate(statement, challenge, ScriptedRng(tape))
        out[Transcript(a, challenge, z)] += 1
    return out


def exhaustive_completeness(spec, statement, witness):
    """Check every independent coin factor of an honest run; returns (checked, failures).

    An OR transcript verifies iff the XOR split holds and each branch
    verifies on its own coordinates, so it suffices to enumerate the real
    branch over all its coins and challenges and the simulated branch over
    all its simulator coins and challenges, recursively.
    """
    checked = failures = 0
    if isinstance(spec, OrProof):
        b, wb = witness
        c, f = exhaustive_completeness(spec.branches[b], statement[b], wb)
        checked, failures = checked + c, failures + f
        c, f = exhaustive_simulation(spec.branches[1 - b], statement[1 - b])
        checked, failures = checked + c, failures + f
        for s in range(1 << spec.k):
            for e_o in range(1 << spec.k):
                checked += 1
                if not spec.valid_challenge(s ^ e_o):
                    failures += 1
        return checked, failures
    for tape in _coin_tapes(spec.prover_coins(witness)):
        a, state = spec.first(statement, witness, ScriptedRng(tape))
        for e in range(1 << spec.k):
            checked += 1
            if not spec.verify(statement, a, e, spec.respond(state, e)):
                failures += 1
    return checked, failures


def exhaustive_simulation(spec, statement):
    """Every simulator coin tape and challenge yields an accepting transcript."""
    checked = failures = 0
    if isinstance(spec, OrProof):
        for i in (0, 1):
            c, f = exhaustive_simulation(spec.branches[i], statement[i])
            checked, failures = checked + c, failures + f
        return checked, failures
    for tape in _coin_tapes(spec.simulator_coins()):
        for e in range(1 << spec.k):
            a, z = spec.simulate(statement, e, ScriptedRng(tape))
            checked += 1
            if not spec.verify(statement, a, e, z):
                failures += 1
    return checked, failures


def shvzk_exact(spec, statement, witness):
    """Per challenge: does the real transcript multiset equal the simulated one?"""
    return {e: enumerate_real(spec, statement, witness, e) == enumerate_simulated(spec, statement, e)
            for e in range(1 << spec.k)}


def wi_exact(spec, statement, wit0, wit1):
    """Per challenge: do two witnesses give the same transcript multiset?"""
    return {e: enumerate_real(spec, statement, wit0, e) == enumerate_real(spec, statement, wit1, e)
            for e in range(1 << spec.k)}
