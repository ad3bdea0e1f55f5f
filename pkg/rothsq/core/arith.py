"""
rothsq Exact Arithmetic - Primes, Smoothness and the Modulus W

This module implements:
- Prime sieving and w-smoothness tests by trial division
- The W-trick modulus W = 8 * (product of odd primes <= w)
- Square roots of -b2 modulo W (per prime, glued by CRT) and sigma(b2)
- Divisor counts
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

from sympy import divisor_count as _sympy_divisor_count
from sympy import factorint, sieve
from sympy.ntheory import is_quad_residue, sqrt_mod
from sympy.ntheory.modular import crt

from .errors import ArithmeticOverflowError, require
from .settings import settings

# Configure logging
logger = logging.getLogger(__name__)


def primes_upto(w: int) -> List[int]:
    """Ascending list of all primes <= w"""
    require(w >= 0, "w", "must be non-negative")
    if w < 2:
        return []
    return [int(p) for p in sieve.primerange(2, w + 1)]


def prime_pi(w: int) -> int:
    return len(primes_upto(w))


def compute_W(w: int, int_bits: Optional[int] = None) -> int:
    """W := 8 * prod_{2 < p <= w} p"""
    require(w >= 2, "w", "smoothness cutoff must be at least 2")
    bits = int_bits if int_bits is not None else settings.int_bits
    W = 8 * math.prod(p for p in primes_upto(w) if p > 2)
    if W.bit_length() > bits:
        raise ArithmeticOverflowError(
            f"W for w={w} needs {W.bit_length()} bits, more than the configured {bits}"
        )
    return W


def default_w(X: int) -> int:
    """The cutoff max(3, floor(sqrt(log X))) used when none is supplied"""
    require(X >= 1, "X", "must be positive")
    return max(3, math.isqrt(int(math.log(X))))


@dataclass(frozen=True)
class SmoothnessContext:
    """The cutoff w together with its primes and modulus W"""
    w: int
    primes: Tuple[int, ...]
    W: int

    def __post_init__(self):
        require(self.w >= 2, "w", "smoothness cutoff must be at least 2")
        require(tuple(primes_upto(self.w)) == tuple(self.primes), "primes", "must be exactly the primes <= w")
        require(self.W == 8 * math.prod(p for p in self.primes if p > 2), "W", "must equal 8 * odd primes <= w")

    @classmethod
    def for_cutoff(cls, w: int) -> "SmoothnessContext":
        return _context(w)

    @property
    def pi(self) -> int:
        return len(self.primes)

    @property
    def sigma_nonzero(self) -> int:
        """The common nonzero value 2 * 2^pi(w) of sigma(b2)"""
        return 2 ** (self.pi + 1)

    def to_dict(self):
        return {"w": self.w, "primes": list(self.primes), "W": self.W}


@lru_cache(maxsize=64)
def _context(w: int) -> SmoothnessContext:
    return SmoothnessContext(w=w, primes=tuple(primes_upto(w)), W=compute_W(w))


def is_smooth(n: int, w: int) -> bool:
    """True iff every prime factor of n is <= w"""
    require(n >= 1, "n", "must be positive")
    return smooth_part(n, w) == n


def smooth_part(n: int, w: int) -> int:
    """Largest w-smooth divisor of n, by trial division"""
    require(n >= 1, "n", "must be positive")
    part = 1
    for p in primes_upto(w):
        while n % p == 0:
            n //= p
            part *= p
    return part


def smooth_numbers_upto(limit: int, w: int) -> List[int]:
    """All w-smooth integers in [1, limit]"""
    numbers = [1] if limit >= 1 else []
    for p in primes_upto(w):
        extended = []
        for m in numbers:
            m *= p
            while m <= limit:
                extended.append(m)
                m *= p
        numbers.extend(extended)
    return sorted(numbers)


def _prime_power_moduli(W: int) -> List[int]:
    return [p ** e for p, e in sorted(factorint(W).items())]


@lru_cache(maxsize=4096)
def _sqrt_residues(W: int, b2: int) -> Tuple[int, ...]:
    residues, modulus = [0], 1
    for m in _prime_power_moduli(W):
        roots = sqrt_mod(-b2 % m, m, all_roots=True) or []
        if not roots:
            return ()
        glued = []
        for x in residues:
            for r in roots:
                z, _ = crt([modulus, m], [x, int(r)])
                glued.append(int(z))
        residues, modulus = glued, modulus * m
    return tuple(sorted(z if z else W for z in residues))


def sqrt_residues(W: int, b2: int) -> List[int]:
    """Sorted z in [1, W] with z^2 + b2 = 0 mod W"""
    _check_b2(W, b2)
    return list(_sqrt_residues(W, b2))


def sigma_count(W: int, b2: int) -> int:
    """sigma(b2) := #{z in [W] : z^2 + b2 = 0 mod W}"""
    _check_b2(W, b2)
    return len(_sqrt_residues(W, b2))


def _check_b2(W: int, b2: int) -> None:
    require(W >= 1, "W", "must be positive")
    require(1 <= b2 <= W, "b2", f"must lie in [1, {W}]")
    require(math.gcd(b2, W) == 1, "b2", f"must be coprime to W={W}")


def admissible_b2(W: int) -> List[int]:
    """All b2 in [1, W] coprime to W with sigma(b2) > 0"""
    return [b2 for b2 in range(1, W + 1) if math.gcd(b2, W) == 1 and _sqrt_residues(W, b2)]


def is_square_residue(a: int, m: int) -> bool:
    """Whether a is a square modulo m, decided one prime power at a time"""
    require(m >= 1, "m", "must be positive")
    return all(is_quad_residue(a % q, q) for q in _prime_power_moduli(m))


def is_perfect_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def divisor_count(k: int) -> int:
    """Number of positive divisors of |k|"""
    require(k != 0, "k", "divisor count of 0 is undefined")
    return int(_sympy_divisor_count(abs(k)))
