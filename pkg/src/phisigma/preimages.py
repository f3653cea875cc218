"""Complete preimage enumeration for phi and sigma, and multiplicity tables.

Per-target enumeration is a divisor-driven recursion over prime-power
blocks; whole-range multiplicity counting runs on the segmented batch
sieves instead.  Brute-force scan bounds used throughout: phi(x) >= sqrt(x/2)
caps phi-preimages of m at 2m**2, sigma(x) >= x caps sigma-preimages at m.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import arith
from .errors import CapacityError, DomainError
from .sieves import iter_phi_blocks, iter_sigma_blocks

SCAN_CAPACITY = 2 * 10 ** 8  # most x-values a single table request may visit

_KINDS = ("phi", "sigma")


def _check_kind(map_kind: str) -> None:
    if map_kind not in _KINDS:
        raise DomainError(f"map_kind must be one of {_KINDS}, got {map_kind!r}")


@dataclass(frozen=True)
class PreimageSet:
    """The complete, sorted solution set of phi(x)=target or sigma(x)=target."""

    target: int
    map_kind: str
    solutions: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.solutions)


@dataclass(frozen=True)
class MultiplicityRecord:
    """Smallest m <= scan_bound whose multiplicity equals k, if any."""

    k: int
    map_kind: str
    minimal_m: int | None
    scan_bound: int


def phi_preimages(m: int) -> PreimageSet:
    """All x with phi(x) == m.

    >>> phi_preimages(4).solutions
    (5, 8, 10, 12)
    """
    if m < 1:
        raise DomainError(f"target must be positive, got {m}")
    if m == 1:
        # x = 1 and x = 2 are the only solutions not built from prime blocks
        return PreimageSet(1, "phi", (1, 2))
    if m % 2:
        return PreimageSet(m, "phi", ())
    divs = arith.divisors(arith.factorize(m))
    found = sorted(_phi_blocks_rec(m, None, divs))
    return PreimageSet(m, "phi", tuple(found))


def _phi_blocks_rec(rem: int, ceiling: int | None, divs: list[int]):
    """Yield x with phi(x) == rem using primes strictly below ceiling.

    Blocks p**a are chosen with strictly decreasing p across recursion
    levels, so each solution appears exactly once.  divs holds the sorted
    divisors of rem.
    """
    if rem == 1:
        yield 1
    for d in divs:
        p = d + 1
        if ceiling is not None and p >= ceiling:
            break
        if not arith.is_prime(p):
            continue
        block_phi = d  # phi(p**a) for a = 1, then grows by factors of p
        block = p
        while rem % block_phi == 0:
            sub = rem // block_phi
            sub_divs = [e for e in divs if sub % e == 0]
            for tail in _phi_blocks_rec(sub, p, sub_divs):
                yield block * tail
            block_phi *= p
            block *= p


def sigma_preimages(m: int) -> PreimageSet:
    """All x with sigma(x) == m.

    >>> sigma_preimages(12).solutions
    (6, 11)
    """
    if m < 1:
        raise DomainError(f"target must be positive, got {m}")
    if m == 1:
        return PreimageSet(1, "sigma", (1,))
    divs = arith.divisors(arith.factorize(m))
    found = sorted(_sigma_blocks_rec(m, None, divs))
    return PreimageSet(m, "sigma", tuple(found))


def _sigma_blocks_rec(rem: int, ceiling: int | None, divs: list[int]):
    """Yield x with sigma(x) == rem using primes strictly below ceiling.

    A block contributes a divisor d = sigma(pi**b) of rem; representations
    are not unique (sigma(5**2) = sigma(2**4) = 31), so all of them are
    tried.  The smallest usable block value is sigma(2) = 3.
    """
    if rem == 1:
        yield 1
        return
    for d in divs:
        if d < 3:
            continue
        for pi, b in arith.prime_power_sigma_all(d):
            if ceiling is not None and pi >= ceiling:
                continue
            sub = rem // d
            sub_divs = [e for e in divs if sub % e == 0]
            for tail in _sigma_blocks_rec(sub, pi, sub_divs):
                yield pi ** b * tail


def multiplicity(m: int, map_kind: str) -> int:
    """A(m) for map_kind phi, B(m) for map_kind sigma."""
    _check_kind(map_kind)
    if map_kind == "phi":
        return phi_preimages(m).multiplicity
    return sigma_preimages(m).multiplicity


def multiplicity_table(map_kind: str, m_bound: int,
                       scan_capacity: int = SCAN_CAPACITY) -> np.ndarray:
    """counts[m] = multiplicity of m, for all 0 <= m <= m_bound, in one pass.

    The phi table must scan x <= 2*m_bound**2 and the sigma table x <= m_bound,
    so the phi variant hits the capacity ceiling much earlier.
    """
    _check_kind(map_kind)
    if m_bound < 1:
        raise DomainError(f"table bound must be positive, got {m_bound}")
    counts = np.zeros(m_bound + 1, dtype=np.int64)
    if map_kind == "phi":
        x_max = 2 * m_bound * m_bound
        blocks = iter_phi_blocks(x_max)
    else:
        x_max = m_bound
        blocks = iter_sigma_blocks(x_max)
    if x_max > scan_capacity:
        raise CapacityError(
            f"table for bound {m_bound} ({map_kind}) needs a scan to {x_max}, "
            f"over capacity {scan_capacity}")
    for _, vals in blocks:
        hits = vals[(vals >= 1) & (vals <= m_bound)]
        counts += np.bincount(hits, minlength=m_bound + 1)
    counts[0] = 0
    return counts


def minimal_m_with_multiplicity(k: int, map_kind: str, scan_bound: int,
                                scan_capacity: int = SCAN_CAPACITY) -> MultiplicityRecord:
    """Smallest m <= scan_bound with multiplicity exactly k, by batch scan.

    Grows the scanned prefix geometrically so small answers stay cheap; the
    recomputation overhead is bounded by a constant factor.
    """
    if k < 0:
        raise DomainError(f"multiplicity must be nonnegative, got {k}")
    _check_kind(map_kind)
    if scan_bound < 1:
        raise DomainError(f"scan bound must be positive, got {scan_bound}")
    bound = min(4096, scan_bound)
    while True:
        counts = multiplicity_table(map_kind, bound, scan_capacity)
        hits = np.flatnonzero(counts[1:] == k)
        if hits.size:
            return MultiplicityRecord(k, map_kind, int(hits[0]) + 1, scan_bound)
        if bound == scan_bound:
            return MultiplicityRecord(k, map_kind, None, scan_bound)
        bound = min(bound * 4, scan_bound)
