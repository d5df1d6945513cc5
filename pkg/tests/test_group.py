import random

import pytest
from hypothesis import given, strategies as st

from czkcke.group import (
    DEMO, TOY, GroupParams, NonInvertible, SearchExhausted, dlog_bruteforce, from_hex,
    generate_params, is_probable_prime, to_hex,
)


def test_toy_preset_is_valid():
    TOY.validate()
    assert pow(2, 11, 23) == 1


def test_demo_preset_is_valid():
    DEMO.validate()
    assert DEMO.q.bit_length() == 20


@pytest.mark.parametrize("bits", [5, 8, 12, 16, 24])
def test_generate_params_shape(bits):
    gp = generate_params(bits, seed=7)
    assert gp.bits == bits
    assert gp.p == 2 * gp.q + 1
    assert is_probable_prime(gp.p) and is_probable_prime(gp.q)
    assert gp.g != 1 and pow(gp.g, gp.q, gp.p) == 1


def test_generate_params_five_bits_is_toy_group():
    gp = generate_params(5, seed=1)
    assert (gp.p, gp.q) == (23, 11)


def test_generate_params_deterministic():
    assert generate_params(16, seed=3) == generate_params(16, seed=3)


def test_generate_params_exhausted():
    with pytest.raises(SearchExhausted):
        generate_params(64, seed=0, budget=1)


def test_generate_params_too_small():
    with pytest.raises(ValueError):
        generate_params(3)


def test_membership():
    assert TOY.is_member(8)
    assert not TOY.is_member(5)
    assert TOY.is_member(1)
    assert not TOY.is_member(0)
    assert not TOY.is_member(23)


def test_arithmetic_examples():
    assert TOY.exp(2, 11) == 1
    assert TOY.exp(2, 7) == 13
    assert TOY.sinv(3) == 4
    with pytest.raises(NonInvertible):
        TOY.sinv(0)
    assert TOY.mul(TOY.inv(13), 13) == 1


def test_dlog_examples():
    assert dlog_bruteforce(TOY, 16) == 4
    assert dlog_bruteforce(TOY, 3) == 8
    assert dlog_bruteforce(TOY, 13, budget=3) is None
    assert dlog_bruteforce(TOY, 5) is None


def test_every_power_is_member_and_dlog_inverts():
    for e in range(TOY.q):
        x = TOY.gexp(e)
        assert TOY.is_member(x)
        assert dlog_bruteforce(TOY, x) == e


def test_dlog_on_demo_group():
    rng = random.Random(4)
    for _ in range(5):
        e = rng.randrange(DEMO.q)
        assert dlog_bruteforce(DEMO, DEMO.gexp(e)) == e


def test_dlog_large_modulus_falls_back_to_python():
    gp = generate_params(40, seed=1)
    assert dlog_bruteforce(gp, gp.gexp(1234)) == 1234


@given(st.integers(0, 10), st.integers(0, 10), st.integers(0, 10))
def test_exp_composes(e, a, b):
    x = TOY.gexp(e)
    assert TOY.exp(TOY.exp(x, a), b) == TOY.exp(x, a * b % TOY.q)


def test_hex_roundtrip():
    assert to_hex(255) == "ff"
    assert from_hex("ff") == 255
    assert GroupParams.from_dict(DEMO.to_dict()) == DEMO


def test_from_dict_rejects_invalid():
    with pytest.raises(ValueError):
        GroupParams.from_dict({"p": "19", "q": "9", "g": "2"})
