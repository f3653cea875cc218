"""Batch tables of primes, smallest prime factors, phi and sigma.

All heavy scans run on numpy arrays in fixed-size segments so memory stays
bounded regardless of the requested range.  Values fit int64 throughout:
tables are capped far below 2**62 and sigma(x) < 6x on the supported range.
"""

from __future__ import annotations

import math
from collections.abc import Iterator

import numpy as np

from .errors import CapacityError, DomainError

SEGMENT = 1 << 22
DEFAULT_SPAN_CAPACITY = 2 * 10 ** 8
MAX_SIEVE_POINT = 4 * 10 ** 16  # keeps base-prime sieves below the span cap


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as an int64 array."""
    if n < 0:
        raise DomainError(f"prime bound must be nonnegative, got {n}")
    if n > DEFAULT_SPAN_CAPACITY:
        raise CapacityError(f"dense prime table to {n} exceeds capacity {DEFAULT_SPAN_CAPACITY}")
    if n < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def sieve_range(lo: int, hi: int, span_capacity: int = DEFAULT_SPAN_CAPACITY) -> list[int]:
    """Primes in the closed interval [lo, hi], ascending.

    >>> sieve_range(10, 30)
    [11, 13, 17, 19, 23, 29]
    """
    if lo > hi:
        raise DomainError(f"empty range [{lo}, {hi}]")
    lo = max(lo, 2)
    if lo > hi:
        return []
    if hi > MAX_SIEVE_POINT:
        raise CapacityError(f"sieve endpoint {hi} exceeds {MAX_SIEVE_POINT}")
    if hi - lo + 1 > span_capacity:
        raise CapacityError(f"sieve span {hi - lo + 1} exceeds capacity {span_capacity}")
    base = primes_upto(math.isqrt(hi))
    out: list[int] = []
    for start in range(lo, hi + 1, SEGMENT):
        stop = min(start + SEGMENT, hi + 1)
        flags = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            first = max(p * p, (start + p - 1) // p * p)
            if first < stop:
                flags[first - start :: p] = False
        if start <= 1:
            flags[: 2 - start] = False
        out.extend((np.flatnonzero(flags) + start).tolist())
    return out


def spf_table(n: int) -> np.ndarray:
    """Smallest-prime-factor table: spf[x] for 0 <= x <= n, spf[0] = spf[1] = 0."""
    if n < 0:
        raise DomainError(f"table bound must be nonnegative, got {n}")
    if n > DEFAULT_SPAN_CAPACITY:
        raise CapacityError(f"spf table to {n} exceeds capacity {DEFAULT_SPAN_CAPACITY}")
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == 0:
            view = spf[p * p :: p]
            view[view == 0] = p
            spf[p] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    if n >= 1:
        spf[0] = spf[1] = 0
    return spf


def _phi_block(start: int, stop: int, base: np.ndarray) -> np.ndarray:
    """phi(x) for x in [start, stop); entries below 1 are set to 0."""
    phi = np.arange(start, stop, dtype=np.int64)
    rem = phi.copy()
    for p in base:
        p = int(p)
        if p * p >= stop:
            break
        first = (start + p - 1) // p * p
        if first >= stop:
            continue
        off = first - start
        view = phi[off::p]
        view -= view // p
        pe = p
        while pe < stop:
            fs = (start + pe - 1) // pe * pe
            if fs < stop:
                rem[fs - start :: pe] //= p
            pe *= p
    big = rem > 1
    phi[big] = phi[big] // rem[big] * (rem[big] - 1)
    for k in range(start, min(stop, 1)):
        phi[k - start] = 0
    return phi


def _sigma_block(start: int, stop: int, base: np.ndarray) -> np.ndarray:
    """sigma(x) for x in [start, stop); entries below 1 are set to 0."""
    n = stop - start
    sig = np.ones(n, dtype=np.int64)
    rem = np.arange(start, stop, dtype=np.int64)
    if start == 0:
        rem[0] = 1
        sig[0] = 0
    for p in base:
        p = int(p)
        if p * p >= stop:
            break
        # start the stride at p so the x = 0 entry is never divided
        first = max(p, (start + p - 1) // p * p)
        if first >= stop:
            continue
        idx = np.arange(first - start, n, p)
        rem[idx] //= p
        pe = np.full(idx.size, p, dtype=np.int64)
        fac = pe + 1
        active = np.flatnonzero(rem[idx] % p == 0)
        while active.size:
            sub = idx[active]
            rem[sub] //= p
            pe[active] *= p
            fac[active] += pe[active]
            active = active[rem[sub] % p == 0]
        sig[idx] *= fac
    big = rem > 1
    sig[big] *= rem[big] + 1
    if start == 0:
        sig[0] = 0
    return sig


def _iter_blocks(kind: str, lo: int, hi: int, block: int) -> Iterator[tuple[int, np.ndarray]]:
    if lo < 0 or hi < lo:
        raise DomainError(f"bad block range [{lo}, {hi}]")
    if hi > MAX_SIEVE_POINT:
        raise CapacityError(f"block scan endpoint {hi} exceeds {MAX_SIEVE_POINT}")
    base = primes_upto(math.isqrt(hi)) if hi >= 4 else np.empty(0, dtype=np.int64)
    fn = _phi_block if kind == "phi" else _sigma_block
    for start in range(lo, hi + 1, block):
        stop = min(start + block, hi + 1)
        yield start, fn(start, stop, base)


def iter_phi_blocks(hi: int, lo: int = 1, block: int = SEGMENT) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (start, values) blocks covering phi on [lo, hi]."""
    return _iter_blocks("phi", lo, hi, block)


def iter_sigma_blocks(hi: int, lo: int = 1, block: int = SEGMENT) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (start, values) blocks covering sigma on [lo, hi]."""
    return _iter_blocks("sigma", lo, hi, block)


def phi_table(n: int) -> np.ndarray:
    """Dense phi table for 0 <= x <= n (phi[0] = 0)."""
    if n > DEFAULT_SPAN_CAPACITY:
        raise CapacityError(f"dense phi table to {n} exceeds capacity {DEFAULT_SPAN_CAPACITY}")
    out = np.zeros(n + 1, dtype=np.int64)
    for start, vals in _iter_blocks("phi", 0, n, SEGMENT):
        out[start : start + vals.size] = vals
    return out


def sigma_table(n: int) -> np.ndarray:
    """Dense sigma table for 0 <= x <= n (sigma[0] = 0)."""
    if n > DEFAULT_SPAN_CAPACITY:
        raise CapacityError(f"dense sigma table to {n} exceeds capacity {DEFAULT_SPAN_CAPACITY}")
    out = np.zeros(n + 1, dtype=np.int64)
    for start, vals in _iter_blocks("sigma", 0, n, SEGMENT):
        out[start : start + vals.size] = vals
    return out
