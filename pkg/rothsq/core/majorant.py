"""
rothsq Majorants - Weighted Indicators of the Squares

This module implements:
- The plain majorant n = x^2 -> 2x on [X^2]
- The W-tricked majorant nu_b and its residue data b = (b1, b2)
- Lifting subsets of [X] through the W-trick
- Exhaustive selection of b maximising the weighted density of a lifted set
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Set, Tuple, Union

import numpy as np

from .arith import (
    SmoothnessContext,
    admissible_b2,
    is_smooth,
    sigma_count,
    smooth_numbers_upto,
    smooth_part,
    sqrt_residues,
)
from .errors import PreconditionError, require

# Configure logging
logger = logging.getLogger(__name__)

Number = Union[int, Fraction, float, complex]


@dataclass(frozen=True)
class WParams:
    """Residue data (X, w, W, b1, b2, sigma(b2), N_b) of the W-trick"""
    X: int
    ctx: SmoothnessContext
    b1: int
    b2: int
    sigma: int
    Nb: int

    @classmethod
    def build(cls, X: int, w: int, b1: int, b2: int) -> "WParams":
        """Validate the residue data and derive sigma and N_b"""
        require(X >= 1, "X", "must be positive")
        ctx = SmoothnessContext.for_cutoff(w)
        require(b1 >= 1, "b1", "must be positive")
        require(is_smooth(b1, w), "b1", f"must be {w}-smooth")
        require(b1 * b1 <= X, "b1", f"must satisfy b1^2 <= X = {X}")
        sigma = sigma_count(ctx.W, b2)
        require(sigma > 0, "b2", f"-b2 must be a square modulo W={ctx.W}")
        return cls(X=X, ctx=ctx, b1=b1, b2=b2, sigma=sigma, Nb=nb_of(X, b1, ctx.W))

    @classmethod
    def default(cls, X: int, w: int) -> "WParams":
        """b1 = 1, b2 = W - 1; always admissible since -(W-1) = 1 mod W"""
        return cls.build(X, w, 1, SmoothnessContext.for_cutoff(w).W - 1)

    @property
    def W(self) -> int:
        return self.ctx.W

    @property
    def w(self) -> int:
        return self.ctx.w

    @property
    def y_max(self) -> int:
        """Largest y with b1 * y <= X"""
        return self.X // self.b1

    def residues(self) -> List[int]:
        return sqrt_residues(self.W, self.b2)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "X": self.X,
            "w": self.w,
            "W": self.W,
            "b1": self.b1,
            "b2": self.b2,
            "sigma": self.sigma,
            "Nb": self.Nb,
        }


def nb_of(X: int, b1: int, W: int) -> int:
    """N_b := floor(X^2 / (b1^2 W)) + 1"""
    return X * X // (b1 * b1 * W) + 1


@dataclass(frozen=True)
class Majorant:
    """Non-negative weights numerators[n] * scale supported on [1, support_len]"""
    support_len: int
    numerators: Dict[int, int]
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        for n, x in self.numerators.items():
            if not 1 <= n <= self.support_len:
                raise PreconditionError("support", f"point {n} outside [1, {self.support_len}]")
            if x < 0:
                raise PreconditionError("weights", f"negative numerator at {n}")
        if self.scale < 0:
            raise PreconditionError("scale", "must be non-negative")

    def weight(self, n: int) -> Fraction:
        return self.numerators.get(n, 0) * self.scale

    def weights(self) -> Dict[int, Fraction]:
        return {n: x * self.scale for n, x in sorted(self.numerators.items())}

    def support(self) -> List[int]:
        return sorted(self.numerators)

    def total_mass(self) -> Fraction:
        return sum(self.numerators.values()) * self.scale

    def max_weight(self) -> Fraction:
        return max(self.numerators.values(), default=0) * self.scale

    def restrict(self, subset: Iterable[int]) -> "Majorant":
        """The product 1_subset * self"""
        keep = set(subset)
        return Majorant(
            self.support_len,
            {n: x for n, x in self.numerators.items() if n in keep},
            self.scale,
        )

    def dense(self) -> np.ndarray:
        """Float weights indexed by n (entry 0 unused)"""
        vector = np.zeros(self.support_len + 1)
        for n, x in self.numerators.items():
            vector[n] = x
        return vector * float(self.scale)

    def to_rows(self) -> List[Tuple[int, int, str]]:
        """CSV rows (n, numerator, scale)"""
        return [(n, x, str(self.scale)) for n, x in sorted(self.numerators.items())]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "support_len": self.support_len,
            "points": len(self.numerators),
            "scale": self.scale,
            "mass": self.total_mass(),
        }


FunctionLike = Union[Majorant, Mapping[int, Number], Iterable[int]]


def weights_of(f: FunctionLike) -> Dict[int, Number]:
    """Normalise a majorant, a mapping n -> weight, or a set (indicator) to a dict"""
    if isinstance(f, Majorant):
        return f.weights()
    if isinstance(f, Mapping):
        return {int(n): v for n, v in sorted(f.items()) if v != 0}
    return {int(n): 1 for n in sorted(set(f))}


def support_length(f: FunctionLike) -> int:
    if isinstance(f, Majorant):
        return f.support_len
    return max(weights_of(f), default=0)


def indicator(N: int, start: int = 1) -> Dict[int, int]:
    """1_[start, N]"""
    return {n: 1 for n in range(start, N + 1)}


def plain_majorant(X: int) -> Majorant:
    """nu(n) = 2 sqrt(n) if n = x^2 for some x in [X]"""
    require(X >= 1, "X", "must be positive")
    return Majorant(X * X, {x * x: x for x in range(1, X + 1)}, Fraction(2))


def _admissible_ys(p: WParams) -> List[int]:
    """y in [1, X/b1] with y^2 + b2 = 0 mod W, ascending"""
    ys = []
    for z in p.residues():
        ys.extend(range(z, p.y_max + 1, p.W))
    return sorted(ys)


def wtricked_majorant(p: WParams) -> Majorant:
    """nu_b(n) = 2 sqrt(Wn - b2) / sigma(b2) when b1^2 (Wn - b2) = x^2, x in [X]"""
    if p.sigma <= 0:
        raise PreconditionError("sigma", "sigma(b2) must be positive")
    numerators = {(y * y + p.b2) // p.W: y for y in _admissible_ys(p)}
    return Majorant(p.Nb, numerators, Fraction(2, p.sigma))


@dataclass(frozen=True)
class MassReport:
    """Total mass of nu_b against N_b"""
    mass: Fraction
    Nb: int
    error: Fraction
    constant: float

    def to_dict(self) -> Dict[str, Any]:
        return {"mass": self.mass, "Nb": self.Nb, "error": self.error, "constant": self.constant}


def mass_report(p: WParams, nu: Optional[Majorant] = None) -> MassReport:
    """mass = N_b + error with |error| = constant * sqrt(W N_b)"""
    nu = nu or wtricked_majorant(p)
    mass = nu.total_mass()
    error = mass - p.Nb
    return MassReport(mass, p.Nb, error, abs(float(error)) / math.sqrt(p.W * p.Nb))


def lift_set(A: Iterable[int], p: WParams) -> Set[int]:
    """A_b := {n : b1^2 (Wn - b2) = x^2 for some x in A}"""
    lifted = set()
    for x in A:
        require(1 <= x <= p.X, "A", f"element {x} outside [1, {p.X}]")
        if x % p.b1:
            continue
        y = x // p.b1
        if (y * y + p.b2) % p.W == 0:
            lifted.add((y * y + p.b2) // p.W)
    return lifted


def residue_class(x: int, ctx: SmoothnessContext) -> Tuple[int, int]:
    """The unique (b1, b2) with x^2 in b1^2 (W Z - b2)"""
    b1 = smooth_part(x, ctx.w)
    y = x // b1
    b2 = (-y * y) % ctx.W
    return b1, b2


@dataclass
class BSelection:
    """Outcome of the exhaustive search over b = (b1, b2)"""
    params: WParams
    statistic: Fraction
    normalized: float
    delta: float
    delta_sq_nb: float
    scanned: int
    table: Dict[Tuple[int, int], Fraction] = field(default_factory=dict, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "statistic": self.statistic,
            "normalized": self.normalized,
            "delta": self.delta,
            "delta_sq_nb": self.delta_sq_nb,
            "ratio_to_delta_sq_nb": float(self.statistic) / self.delta_sq_nb if self.delta_sq_nb else None,
            "scanned": self.scanned,
        }


def class_statistics(A: Iterable[int], X: int, ctx: SmoothnessContext) -> Dict[Tuple[int, int], Fraction]:
    """
    sum_n 1_{A_b}(n) nu_b(n) for every b that A meets

    Each x in A lies in exactly one progression b1^2 (W Z - b2), so one pass
    over A fills the whole table; pairs absent from it have statistic 0.
    """
    sums: Dict[Tuple[int, int], int] = defaultdict(int)
    for x in A:
        b1, b2 = residue_class(x, ctx)
        if b1 * b1 <= X:
            sums[(b1, b2)] += x // b1
    sigma = ctx.sigma_nonzero
    return {b: Fraction(2 * total, sigma) for b, total in sums.items()}


def select_b(A: Iterable[int], w: int, X: Optional[int] = None) -> BSelection:
    """
    Argmax over w-smooth b1 with b1^2 <= X and admissible b2 of
    sum_n 1_{A_b}(n) nu_b(n) / N_b, ties to the smallest (b1, b2)
    """
    A = sorted(set(A))
    require(len(A) >= 1, "A", "must be non-empty")
    X = X if X is not None else A[-1]
    require(1 <= A[0] and A[-1] <= X, "A", f"must lie in [1, {X}]")
    ctx = SmoothnessContext.for_cutoff(w)

    b1_values = smooth_numbers_upto(math.isqrt(X), w)
    b2_values = admissible_b2(ctx.W)
    assert b1_values and b2_values, f"no admissible (b1, b2) for w={w}"

    table = class_statistics(A, X, ctx)
    best: Optional[Tuple[Fraction, Tuple[int, int]]] = None
    for b in table:
        score = table[b] / nb_of(X, b[0], ctx.W)
        if best is None or score > best[0] or (score == best[0] and b < best[1]):
            best = (score, b)
    if best is None:
        # A avoids every searched progression; all statistics are zero
        best = (Fraction(0), (b1_values[0], b2_values[0]))

    b1, b2 = best[1]
    params = WParams.build(X, w, b1, b2)
    statistic = table.get((b1, b2), Fraction(0))
    delta = len(A) / X
    logger.info(f"select_b: b=({b1},{b2}) statistic/Nb={float(best[0]):.4f} delta={delta:.4f}")
    return BSelection(
        params=params,
        statistic=statistic,
        normalized=float(best[0]),
        delta=delta,
        delta_sq_nb=delta * delta * params.Nb,
        scanned=len(b1_values) * len(b2_values),
        table=table,
    )
