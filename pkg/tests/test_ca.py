import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rclab.errors import ConfigError
from rclab.tasks.ca import bits_to_state, ca_step, decode, encode, state_to_bits

RULES = (0, 4, 8, 32, 45, 54, 90, 110, 204)


def string_step(cells: str, rule: int) -> str:
    """Textbook lookup: the eight neighbourhoods 111..000 index the rule's binary digits."""
    table = {format(7 - k, "03b"): bit for k, bit in enumerate(format(rule, "08b"))}
    padded = "0" + cells + "0"
    return "".join(table[padded[i:i + 3]] for i in range(len(cells)))


@pytest.mark.parametrize("rule", RULES)
def test_exhaustive_against_table(rule):
    M = 8
    states = ["".join(s) for s in itertools.product("01", repeat=M)]
    got = ca_step(np.array([[int(c) for c in s] for s in states]), rule)
    expected = [string_step(s, rule) for s in states]
    assert ["".join(map(str, row)) for row in got] == expected


def test_rule_110_single_cell():
    cells = np.array([int(c) for c in "0000010000"])
    assert "".join(map(str, ca_step(cells, 110))) == "0000110000"


def test_rule_0_and_204():
    rng = np.random.default_rng(0)
    x = rng.integers(0, 2, (20, 10))
    np.testing.assert_array_equal(ca_step(x, 0), 0)
    np.testing.assert_array_equal(ca_step(x, 204), x)


@pytest.mark.parametrize("rule", [-1, 256, 1.5])
def test_invalid_rule(rule):
    with pytest.raises(ConfigError):
        ca_step(np.zeros(4), rule)


@given(st.integers(1, 20).flatmap(lambda M: st.tuples(st.just(M), st.integers(0, 2 ** M - 1))))
def test_bit_roundtrip(args):
    M, idx = args
    bits = state_to_bits(idx, M)
    assert int(bits_to_state(bits)) == idx
    assert bits[0] == (idx >> (M - 1)) & 1
    np.testing.assert_array_equal(decode(encode(bits)), bits)


def test_encoding_values():
    np.testing.assert_array_equal(encode([0, 1, 1]), [-1.0, 1.0, 1.0])
