"""Exact integer arithmetic: primality, factorization, multiplicative functions.

Everything here is deterministic.  Primality testing uses Miller-Rabin with
witness sets that are proven complete below known thresholds; above the
largest threshold a Pocklington n-1 proof is constructed instead of
accepting a probabilistic answer.  Factorization uses trial division and
Brent's rho with a deterministic trial-division fallback.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError


def _small_sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [i for i in range(limit + 1) if flags[i]]


_SMALL_PRIMES = tuple(_small_sieve(1000))
_TRIAL_PRIMES = tuple(p for p in _SMALL_PRIMES if p < 100)

# Deterministic witness sets, each complete below its threshold.
_MR_TIERS = (
    (3_215_031_751, (2, 3, 5, 7)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (3_825_123_056_546_413_051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318_665_857_834_031_151_167_461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)),
    (3_317_044_064_679_887_385_961_981, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)
_MR_PROVEN_BOUND = _MR_TIERS[-1][0]


def _strong_probable_prime(n: int, base: int) -> bool:
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


@lru_cache(maxsize=1 << 16)
def is_prime(n: int) -> bool:
    """Decide primality of n deterministically.

    >>> [k for k in range(20) if is_prime(k)]
    [2, 3, 5, 7, 11, 13, 17, 19]
    """
    if n < 2:
        return False
    for p in _TRIAL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < 100 * 100:
        return True
    if n < _MR_PROVEN_BOUND:
        for bound, bases in _MR_TIERS:
            if n < bound:
                return all(_strong_probable_prime(n, b) for b in bases)
    if not (_strong_probable_prime(n, 2) and _strong_probable_prime(n, 3)):
        return False
    return _pocklington_certified(n)


def _pocklington_certified(n: int) -> bool:
    """Prove primality of n via a factored part of n-1.

    Requires a fully factored divisor F of n-1 with (F+1)^2 > n; then every
    prime divisor of n is 1 mod F, hence exceeds sqrt(n), hence n is prime.
    A Fermat failure along the way disproves primality outright.
    """
    m = n - 1
    found: list[int] = []  # distinct primes of m, in discovery order
    rem = m
    for p in _SMALL_PRIMES:
        if rem % p == 0:
            found.append(p)
            while rem % p == 0:
                rem //= p

    def factored_part() -> int:
        out = 1
        for q in found:
            t = m // q
            out *= q
            while t % q == 0:
                t //= q
                out *= q
        return out

    ffpart = factored_part()
    pending = [rem] if rem > 1 else []
    while (ffpart + 1) ** 2 <= n and pending:
        c = pending.pop()
        for q in found:
            while c % q == 0:
                c //= q
        if c == 1:
            continue
        if is_prime(c):
            found.append(c)
            ffpart = factored_part()
        else:
            d = _find_nontrivial_factor(c)
            pending.extend((d, c // d))
    if (ffpart + 1) ** 2 <= n:
        raise RuntimeError(f"could not assemble a large enough factored part for {n}")
    for q in found:
        for a in _SMALL_PRIMES:
            if pow(a, m, n) != 1:
                return False
            u = pow(a, m // q, n)
            if math.gcd(u - 1, n) == 1:
                break
        else:
            raise RuntimeError(f"no Pocklington witness found for {n} at prime {q}")
    return True


def _find_nontrivial_factor(n: int) -> int:
    """Return a nontrivial factor of composite n with no factor below 100."""
    for k in range(2, n.bit_length()):
        r = iroot(n, k)
        if r ** k == n:
            return r
    for c in range(1, 64):
        f = _brent_rho(n, c)
        if f is not None and 1 < f < n:
            return f
    # unconditional fallback; slow but deterministic
    d = 101
    while d * d <= n:
        if n % d == 0:
            return d
        d += 2
    raise RuntimeError(f"failed to factor composite {n}")


def _brent_rho(n: int, c: int, max_rounds: int = 1 << 19) -> int | None:
    y, r, q, g = 2, 1, 1, 1
    x = ys = y
    count = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(128, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += 128
        r <<= 1
        count += r
        if count > max_rounds:
            return None
    if g == n:
        g = 1
        for _ in range(1 << 16):
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if 1 < g < n else None


@dataclass(frozen=True)
class PrimeFactorization:
    """A value together with its factorization into prime powers.

    factors is a tuple of (prime, exponent) pairs with strictly increasing
    primes and positive exponents whose product reconstructs value.  The
    empty tuple is the factorization of 1.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.value < 1:
            raise DomainError(f"factorization requires a positive integer, got {self.value}")
        prod = 1
        prev = 1
        for p, e in self.factors:
            if e < 1 or p <= prev or not is_prime(p):
                raise DomainError(f"invalid factor list for {self.value}")
            prev = p
            prod *= p ** e
        if prod != self.value:
            raise DomainError(f"factor list of {self.value} multiplies to {prod}")

    @property
    def num_distinct_primes(self) -> int:
        return len(self.factors)

    @property
    def smallest_prime_factor(self) -> int:
        if not self.factors:
            raise DomainError("1 has no prime factor")
        return self.factors[0][0]

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(n: int) -> PrimeFactorization:
    """Factor a positive integer into prime powers.

    >>> factorize(360).factors
    ((2, 3), (3, 2), (5, 1))
    """
    if n < 1:
        raise DomainError(f"factorization requires a positive integer, got {n}")
    counts: dict[int, int] = {}
    rem = n
    for p in _SMALL_PRIMES:
        if p * p > rem:
            break
        while rem % p == 0:
            rem //= p
            counts[p] = counts.get(p, 0) + 1
    if rem > 1:
        stack = [rem]
        while stack:
            c = stack.pop()
            if is_prime(c):
                counts[c] = counts.get(c, 0) + 1
            else:
                d = _find_nontrivial_factor(c)
                stack.extend((d, c // d))
    return PrimeFactorization(n, tuple(sorted(counts.items())))


def euler_phi(f: PrimeFactorization | int) -> int:
    """Euler's totient from a factorization (or an integer, factored here).

    >>> euler_phi(36)
    12
    """
    if isinstance(f, int):
        f = factorize(f)
    out = 1
    for p, e in f.factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def sigma(f: PrimeFactorization | int) -> int:
    """Sum of all positive divisors from a factorization.

    >>> sigma(12)
    28
    """
    if isinstance(f, int):
        f = factorize(f)
    out = 1
    for p, e in f.factors:
        out *= (p ** (e + 1) - 1) // (p - 1)
    return out


def divisors(f: PrimeFactorization | int) -> list[int]:
    """All positive divisors in increasing order.

    >>> divisors(12)
    [1, 2, 3, 4, 6, 12]
    """
    if isinstance(f, int):
        f = factorize(f)
    out = [1]
    for p, e in f.factors:
        out = [d * p ** k for d in out for k in range(e + 1)]
    out.sort()
    return out


def iroot(n: int, k: int) -> int:
    """Integer k-th root: the largest x with x**k <= n."""
    if n < 0 or k < 1:
        raise DomainError(f"iroot needs n >= 0 and k >= 1, got {n}, {k}")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def sigma_prime_power(p: int, e: int) -> int:
    """sigma(p**e) = 1 + p + ... + p**e, without checking p for primality."""
    return (p ** (e + 1) - 1) // (p - 1)


def prime_power_sigma_solve(d: int, min_exponent: int = 2) -> tuple[int, int] | None:
    """Find a prime power pi**b with sigma(pi**b) == d and b >= min_exponent.

    Returns the representation with the smallest exponent, or None.  For
    b >= 2 the base is pinned down: pi**b < sigma(pi**b) < (pi+1)**b, so
    pi must equal iroot(d, b).
    """
    if d < 1:
        raise DomainError(f"sigma value must be positive, got {d}")
    if min_exponent < 2:
        raise DomainError(f"min_exponent must be at least 2, got {min_exponent}")
    b = min_exponent
    while (1 << (b + 1)) - 1 <= d:
        pi = iroot(d, b)
        if pi >= 2 and sigma_prime_power(pi, b) == d and is_prime(pi):
            return pi, b
        b += 1
    return None


@lru_cache(maxsize=1 << 16)
def prime_power_sigma_all(d: int) -> tuple[tuple[int, int], ...]:
    """All prime powers pi**b (b >= 1) with sigma(pi**b) == d.

    Representations need not be unique: sigma(5**2) == sigma(2**4) == 31.
    """
    if d < 1:
        raise DomainError(f"sigma value must be positive, got {d}")
    out: list[tuple[int, int]] = []
    if d >= 3 and is_prime(d - 1):
        out.append((d - 1, 1))
    b = 2
    while (1 << (b + 1)) - 1 <= d:
        pi = iroot(d, b)
        if pi >= 2 and sigma_prime_power(pi, b) == d and is_prime(pi):
            out.append((pi, b))
        b += 1
    return tuple(out)
