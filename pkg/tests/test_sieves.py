"""Segmented sieve layer checked against per-value arithmetic."""

import random

import numpy as np
import pytest
import sympy

from phisigma.arith import euler_phi, is_prime, sigma
from phisigma.errors import CapacityError
from phisigma.sieves import (
    DEFAULT_SPAN_CAPACITY,
    iter_phi_blocks,
    iter_sigma_blocks,
    phi_table,
    primes_upto,
    sieve_range,
    sigma_table,
    spf_table,
)


def test_primes_upto_values():
    got = primes_upto(1000).tolist()
    assert got == list(sympy.sieve.primerange(2, 1001))


def test_primes_upto_tiny():
    assert primes_upto(1).size == 0
    assert primes_upto(2).tolist() == [2]


def test_sieve_range_matches_filter():
    rng = random.Random(11)
    for _ in range(20):
        lo = rng.randrange(0, 10 ** 7)
        hi = lo + rng.randrange(1, 5000)
        assert sieve_range(lo, hi) == [n for n in range(lo, hi + 1) if is_prime(n)]


def test_sieve_range_far_segment():
    lo = 10 ** 12
    hi = lo + 2000
    assert sieve_range(lo, hi) == [n for n in range(lo, hi + 1) if is_prime(n)]


def test_sieve_range_span_capacity():
    with pytest.raises(CapacityError):
        sieve_range(0, DEFAULT_SPAN_CAPACITY + 10)


def test_spf_table():
    spf = spf_table(10 ** 4)
    assert spf[0] == 0 and spf[1] == 0
    for n in range(2, 10 ** 4 + 1):
        assert spf[n] == min(sympy.factorint(n)) if n > 1 else 0
        if is_prime(n):
            assert spf[n] == n


def test_phi_table_matches_pointwise():
    table = phi_table(3000)
    for n in range(1, 3001):
        assert table[n] == euler_phi(n), n
    assert table[0] == 0


def test_sigma_table_matches_pointwise():
    table = sigma_table(3000)
    for n in range(1, 3001):
        assert table[n] == sigma(n), n
    assert table[0] == 0


def test_blocks_cover_range_in_order():
    seen = []
    for start, vals in iter_phi_blocks(5000, lo=1, block=512):
        seen.extend(range(start, start + len(vals)))
        for off in (0, len(vals) - 1):
            assert vals[off] == euler_phi(start + off)
    assert seen == list(range(1, 5001))


def test_sigma_blocks_interior_values():
    rng = random.Random(12)
    for start, vals in iter_sigma_blocks(20000, lo=7000, block=4096):
        for _ in range(20):
            off = rng.randrange(len(vals))
            assert vals[off] == sigma(start + off)


def test_blocks_near_zero_start():
    # A block whose range includes 0 and 1 must not loop or mislabel them.
    for start, vals in iter_sigma_blocks(64, lo=1, block=64):
        assert start == 1
        assert vals[0] == 1
    for start, vals in iter_phi_blocks(64, lo=1, block=64):
        assert vals[0] == 1
