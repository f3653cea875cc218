"""Preimage enumeration checked against batch sieve buckets."""

import random
from collections import defaultdict

import pytest

from phisigma.errors import CapacityError, DomainError
from phisigma.preimages import (
    minimal_m_with_multiplicity,
    multiplicity,
    multiplicity_table,
    phi_preimages,
    sigma_preimages,
)
from phisigma.sieves import iter_phi_blocks, iter_sigma_blocks


def _bucket_preimages(kind, m_bound, x_max):
    """Map m -> sorted preimage list by one scan over a dense table."""
    buckets = defaultdict(list)
    blocks = iter_phi_blocks(x_max) if kind == "phi" else iter_sigma_blocks(x_max)
    for start, vals in blocks:
        for off, v in enumerate(vals.tolist()):
            if 1 <= v <= m_bound:
                buckets[v].append(start + off)
    return buckets


def test_phi_worked_examples():
    assert phi_preimages(4).solutions == (5, 8, 10, 12)
    assert phi_preimages(1).solutions == (1, 2)
    assert phi_preimages(2).solutions == (3, 4, 6)
    assert phi_preimages(3).solutions == ()


def test_sigma_worked_examples():
    assert sigma_preimages(12).solutions == (6, 11)
    assert sigma_preimages(31).solutions == (16, 25)
    assert sigma_preimages(1).solutions == (1,)
    assert sigma_preimages(2).solutions == ()


def test_domain_errors():
    for bad in (0, -1, -12):
        with pytest.raises(DomainError):
            phi_preimages(bad)
        with pytest.raises(DomainError):
            sigma_preimages(bad)
        with pytest.raises(DomainError):
            multiplicity(bad, "phi")
    with pytest.raises(DomainError):
        multiplicity(10, "tau")


def test_phi_odd_arguments_empty():
    for m in range(3, 10 ** 4, 2):
        assert multiplicity(m, "phi") == 0


def test_phi_enumeration_against_bucket_scan():
    m_bound = 300
    buckets = _bucket_preimages("phi", m_bound, 2 * m_bound * m_bound)
    for m in range(1, m_bound + 1):
        got = phi_preimages(m)
        assert list(got.solutions) == buckets.get(m, []), m
        assert got.multiplicity == len(got.solutions)
        assert got.target == m and got.map_kind == "phi"


def test_sigma_enumeration_against_bucket_scan():
    m_bound = 5000
    buckets = _bucket_preimages("sigma", m_bound, m_bound)
    for m in range(1, m_bound + 1):
        got = sigma_preimages(m)
        assert list(got.solutions) == buckets.get(m, []), m


def test_solutions_sorted_distinct():
    rng = random.Random(21)
    for _ in range(60):
        m = rng.randrange(1, 40000)
        for fn in (phi_preimages, sigma_preimages):
            sols = fn(m).solutions
            assert list(sols) == sorted(set(sols)), (fn.__name__, m)


def test_multiplicity_table_first_rows():
    table = multiplicity_table("phi", 10)
    assert table.tolist() == [0, 2, 3, 0, 4, 0, 4, 0, 5, 0, 2]


def test_multiplicity_table_matches_per_value():
    for kind, bound in (("phi", 200), ("sigma", 1500)):
        table = multiplicity_table(kind, bound)
        for m in range(1, bound + 1):
            assert table[m] == multiplicity(m, kind), (kind, m)


def test_multiplicity_table_capacity_guard():
    with pytest.raises(CapacityError):
        multiplicity_table("phi", 10 ** 5)


def test_minimal_m_examples():
    rec = minimal_m_with_multiplicity(0, "phi", 100)
    assert rec.minimal_m == 3 and rec.k == 0 and rec.map_kind == "phi"
    assert minimal_m_with_multiplicity(1, "sigma", 100).minimal_m == 1
    assert minimal_m_with_multiplicity(2, "sigma", 100).minimal_m == 12
    assert minimal_m_with_multiplicity(3, "phi", 100).minimal_m == 2


def test_minimal_m_absent_reports_none():
    # No m <= 512 has exactly one totient preimage.
    rec = minimal_m_with_multiplicity(1, "phi", 512)
    assert rec.minimal_m is None
    assert rec.scan_bound == 512


def test_minimal_m_rejects_bad_arguments():
    with pytest.raises(DomainError):
        minimal_m_with_multiplicity(-1, "phi", 100)
    with pytest.raises(DomainError):
        minimal_m_with_multiplicity(2, "phi", 0)
