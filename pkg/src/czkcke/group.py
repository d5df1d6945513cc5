"""Safe-prime groups and the arithmetic every protocol in this package runs on.

All group elements are plain Python ints in [1, p) belonging to the
order-q subgroup of Z_p^*, where p = 2q + 1. Scalars are ints in [0, q).
"""

import random
from dataclasses import dataclass

import gmpy2

from . import _kernels

MR_ROUNDS = 40
DEFAULT_SEARCH_BUDGET = 1_000_000


class SearchExhausted(RuntimeError):
    """No safe prime was found within the iteration budget."""


class NonInvertible(ZeroDivisionError):
    pass


def is_probable_prime(n):
    # 40 Miller-Rabin rounds: error below 4**-40 = 2**-80
    return n >= 2 and bool(gmpy2.is_prime(n, MR_ROUNDS))


def to_hex(n):
    return format(n, "x")


def from_hex(s):
    return int(s, 16)


@dataclass(frozen=True)
class GroupParams:
    """A safe-prime group (p, q, g) with p = 2q + 1 and g of order q."""

    p: int
    q: int
    g: int

    @property
    def bits(self):
        return self.p.bit_length()

    def validate(self):
        if self.p != 2 * self.q + 1:
            raise ValueError("p != 2q + 1")
        if not (is_probable_prime(self.p) and is_probable_prime(self.q)):
            raise ValueError("p and q must both be prime")
        if self.g in (0, 1) or pow(self.g, self.q, self.p) != 1:
            raise ValueError("g does not generate the order-q subgroup")
        return self

    # group side

    def is_member(self, x):
        return isinstance(x, int) and 1 <= x < self.p and pow(x, self.q, self.p) == 1

    def exp(self, base, e):
        return pow(base, e % self.q, self.p)

    def gexp(self, e):
        return pow(self.g, e % self.q, self.p)

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * pow(b, -1, self.p) % self.p

    # scalar side

    def sadd(self, a, b):
        return (a + b) % self.q

    def ssub(self, a, b):
        return (a - b) % self.q

    def smul(self, a, b):
        return a * b % self.q

    def sinv(self, a):
        if a % self.q == 0:
            raise NonInvertible("scalar 0 has no inverse mod q")
        return pow(a, -1, self.q)

    def random_scalar(self, rng):
        return rng.randrange(self.q)

    def random_element(self, rng):
        return self.gexp(rng.randrange(self.q))

    def to_dict(self):
        return {"p": to_hex(self.p), "q": to_hex(self.q), "g": to_hex(self.g)}

    @classmethod
    def from_dict(cls, d):
        return cls(from_hex(d["p"]), from_hex(d["q"]), from_hex(d["g"])).validate()


def generate_params(bits, seed=None, budget=DEFAULT_SEARCH_BUDGET):
    """Find a `bits`-bit safe prime p = 2q + 1 and a generator of its order-q subgroup.

    The search starts at a random q of the right size and walks upward
    (wrapping around the admissible range) for at most `budget` candidates.
    """
    if bits < 5:
        raise ValueError("bits must be at least 5")
    rng = random.Random(seed)
    lo, hi = 1 << (bits - 2), (1 << (bits - 1)) - 1
    span = hi - lo + 1
    start = rng.randrange(span)
    for i in range(min(budget, span)):
        q = lo + (start + i) % span
        if q % 2 == 0 and q != 2:
            continue
        if is_probable_prime(q) and is_probable_prime(2 * q + 1):
            p = 2 * q + 1
            while True:
                g = pow(rng.randrange(2, p), 2, p)
                if g != 1:
                    return GroupParams(p, q, g)
    raise SearchExhausted(f"no {bits}-bit safe prime within {budget} candidates")


def dlog_bruteforce(params, target, budget=None):
    """Smallest e < budget with g^e = target, trying exponents in order; None if absent."""
    if budget is None:
        budget = params.q
    budget = min(budget, params.q)
    if not params.is_member(target):
        return None
    if params.p < _kernels.SMALL_MODULUS_LIMIT:
        e = _kernels.dlog_scan(params.g, target, params.p, budget)
        return None if e < 0 else e
    acc = 1
    for e in range(budget):
        if acc == target:
            return e
        acc = acc * params.g % params.p
    return None


TOY = GroupParams(23, 11, 2)
# generate_params(21, seed=2009): q has 20 bits, so brute force over Z_q is cheap
DEMO = GroupParams(1_619_603, 809_801, 301_268)

PRESETS = {"toy": TOY, "demo": DEMO}
