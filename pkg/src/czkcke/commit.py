"""ElGamal commitments and a discrete-log trapdoor bit commitment."""

from dataclasses import dataclass

from .group import dlog_bruteforce


class BadTrapdoor(ValueError):
    pass


@dataclass(frozen=True)
class ElGamalCommitment:
    h: int
    gbar: int
    hbar: int

    def as_tuple(self):
        return (self.h, self.gbar, self.hbar)

    @classmethod
    def from_tuple(cls, t):
        h, gbar, hbar = t
        return cls(h, gbar, hbar)


@dataclass(frozen=True)
class Opening:
    v: int
    r: int
    u: int


def eg_commit(params, v, rng=None, *, u=None, r=None):
    """Commit to scalar v as (h = g^u, g^r, g^v h^r).

    Missing u and r are drawn from `rng` in that order; passing u lets two
    commitments share a basis h.
    """
    if u is None:
        u = params.random_scalar(rng)
    if r is None:
        r = params.random_scalar(rng)
    h = params.gexp(u)
    c = ElGamalCommitment(h, params.gexp(r), params.mul(params.gexp(v), params.exp(h, r)))
    return c, Opening(v % params.q, r, u)


def eg_verify(params, c, v, r):
    if not all(params.is_member(x) for x in c.as_tuple()):
        return False
    return (params.gexp(r) == c.gbar
            and params.mul(params.gexp(v), params.exp(c.h, r)) == c.hbar)


def eg_break_hiding(params, c, budget=None):
    """Recover the committed value by brute force: r from gbar, then v from hbar / h^r."""
    r = dlog_bruteforce(params, c.gbar, budget)
    if r is None:
        return None
    return dlog_bruteforce(params, params.mul(c.hbar, params.exp(c.h, -r)), budget)


@dataclass(frozen=True)
class TrapdoorCommitment:
    c: int
    basis: int


def tc_commit_bit(params, basis, m, rng=None, *, s=None):
    """c = g^m * basis^s. Returns the commitment and its randomiser s."""
    if m not in (0, 1):
        raise ValueError("can only commit to a bit")
    if s is None:
        s = params.random_scalar(rng)
    return TrapdoorCommitment(params.mul(params.gexp(m), params.exp(basis, s)), basis), s


def tc_open(params, tc, m, s):
    if m not in (0, 1) or not params.is_member(tc.c):
        return False
    return params.mul(params.gexp(m), params.exp(tc.basis, s)) == tc.c


def tc_equivocate(params, tc, m, s, trapdoor):
    """Given an opening (m, s) and s0 = dlog(basis), open the same c to 1 - m."""
    if params.gexp(trapdoor) != tc.basis or trapdoor % params.q == 0:
        raise BadTrapdoor("trapdoor is not a discrete log of the basis")
    # m + s0*s = m' + s0*s'  (mod q)
    flipped = 1 - m
    s2 = (m - flipped + trapdoor * s) * params.sinv(trapdoor) % params.q
    return flipped, s2
