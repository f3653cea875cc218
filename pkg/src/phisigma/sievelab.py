"""Desk-scale counting experiments: shifted almost primes, prime pairs,
pair-difference products, and ratio power sums with their Euler-product
constants.

Counts are exact; only the normalization ratios and the truncated constant
c(beta) are floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import arith
from .errors import CapacityError, DomainError
from .sieves import (DEFAULT_SPAN_CAPACITY, iter_phi_blocks, primes_upto,
                     sieve_range, spf_table)


@dataclass(frozen=True)
class AlmostPrimeCount:
    """Count of primes s in (x/2, x] with s = 2u + a, u having at least two
    distinct prime factors, all exceeding x**alpha."""

    x: int
    a: int
    alpha: Fraction
    count: int
    normalized_ratio: float  # count / (x / ln(x)**2)
    reference_constant: float | None


def count_shifted_almost_primes(x: int, alpha: Fraction, a: int) -> AlmostPrimeCount:
    """Exact count via a prime sieve on (x/2, x] and a smallest-factor table.

    The factor-size test is exact: p > x**(num/den) iff p**den > x**num.
    """
    if a not in (1, -1):
        raise DomainError(f"shift must be +1 or -1, got {a}")
    if x < 16:
        raise DomainError(f"need x >= 16, got {x}")
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if x > DEFAULT_SPAN_CAPACITY:
        raise CapacityError(f"x = {x} exceeds capacity {DEFAULT_SPAN_CAPACITY}")
    spf = spf_table((x + 1) // 2)
    num, den = alpha.numerator, alpha.denominator
    x_pow = x ** num
    count = 0
    for s in sieve_range(x // 2 + 1, x):
        u = (s - a) // 2
        v = u
        least = 0
        distinct = 0
        while v > 1:
            p = int(spf[v])
            if least == 0:
                least = p
            distinct += 1
            while v % p == 0:
                v //= p
        if distinct >= 2 and least ** den > x_pow:
            count += 1
    ratio = count / (x / math.log(x) ** 2)
    ref = lemma3_reference_constant(alpha) if alpha == Fraction(1, 8) else None
    return AlmostPrimeCount(x, a, alpha, count, ratio, ref)


def lemma3_reference_constant(alpha: Fraction = Fraction(1, 8)) -> float:
    """The lower-bound constant net of the pair-count upper bound 4.

    With 1/(2*alpha) = 4 the sieve function value is (1/2)*exp(gamma)*ln 3,
    so exp(-gamma)/alpha * f(1/(2*alpha)) - 4 collapses to 4*ln 3 - 4; the
    exp(gamma) factors cancel exactly, so they are not evaluated in floating
    point.
    """
    if Fraction(alpha) != Fraction(1, 8):
        raise DomainError(
            f"only alpha = 1/8 is supported (general sieve-function values are "
            f"out of scope), got {alpha}")
    return 0.5 / Fraction(1, 8) * math.log(3.0) - 4.0


def count_prime_pairs(k: int, x: int) -> int:
    """Number of primes p <= x - k with p + k also prime.

    >>> count_prime_pairs(2, 10)
    2
    """
    if k < 2 or k % 2:
        raise DomainError(f"pair gap must be an even integer >= 2, got {k}")
    if x <= k:
        raise DomainError(f"need x > k, got x={x}, k={k}")
    if x > DEFAULT_SPAN_CAPACITY:
        raise CapacityError(f"x = {x} exceeds capacity {DEFAULT_SPAN_CAPACITY}")
    flags = np.zeros(x + 1, dtype=bool)
    flags[primes_upto(x)] = True
    return int(np.count_nonzero(flags[: x - k + 1] & flags[k:]))


def l_value(primes) -> Fraction:
    """Product of |p_g - p_h| / phi(|p_g - p_h|) over unordered pairs, exact.

    >>> l_value((3, 5, 7))
    Fraction(8, 1)
    """
    ps = [int(p) for p in primes]
    if len(set(ps)) != len(ps):
        raise DomainError("entries must be distinct (a zero difference has no totient)")
    for p in ps:
        if not arith.is_prime(p):
            raise DomainError(f"entry {p} is not prime")
    out = Fraction(1)
    for g in range(len(ps)):
        for h in range(g + 1, len(ps)):
            diff = abs(ps[g] - ps[h])
            out *= Fraction(diff, arith.euler_phi(diff))
    return out


@dataclass(frozen=True)
class RatioSumReport:
    """Sum of (k/phi(k))**beta for k <= x against the truncated Euler product."""

    beta: float
    x: int
    sum: float
    c_beta: float
    prime_cutoff: int
    tail_factor_bound: float  # multiplying c_beta by this covers the tail


def ratio_power_sum(beta: float, x: int, prime_cutoff: int = 10 ** 5) -> RatioSumReport:
    """Compensated-sum the ratio powers by batch phi; compute the truncated
    product over primes <= prime_cutoff and a rigorous tail factor."""
    if beta <= 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if x < 1:
        raise DomainError(f"need x >= 1, got {x}")
    if prime_cutoff < 2:
        raise DomainError(f"prime cutoff must be at least 2, got {prime_cutoff}")
    if x > DEFAULT_SPAN_CAPACITY:
        raise CapacityError(f"x = {x} exceeds capacity {DEFAULT_SPAN_CAPACITY}")
    partials = []
    for start, vals in iter_phi_blocks(x):
        ks = np.arange(start, start + vals.size, dtype=np.float64)
        terms = (ks / vals.astype(np.float64)) ** beta
        partials.append(math.fsum(terms.tolist()))
    total = math.fsum(partials)
    c_beta = 1.0
    for p in primes_upto(prime_cutoff).tolist():
        g = (p / (p - 1.0)) ** beta - 1.0
        c_beta *= 1.0 + g / p
    # tail over p > P:  g(p) <= (beta/(p-1)) * e**(beta/(p-1)), so
    # sum g(p)/p <= beta * e**(beta/P) * sum 1/((p-1)p) <= beta * e**(beta/P) / P
    tail_log = beta * math.exp(beta / prime_cutoff) / prime_cutoff
    return RatioSumReport(
        beta=float(beta),
        x=x,
        sum=total,
        c_beta=c_beta,
        prime_cutoff=prime_cutoff,
        tail_factor_bound=math.exp(tail_log),
    )
