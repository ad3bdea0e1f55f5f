"""
rothsq Moments - L^p Norms of Fourier Transforms

This module implements:
- Exact even moments as additive-energy counts
- Riemann-sum moments for real exponents, with a derivative-based slack
- Restriction-constant sampling over functions dominated by the majorant
- The fourth-moment ratio and the large spectrum R_delta
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from .errors import require
from .majorant import FunctionLike, Majorant, WParams, support_length, weights_of, wtricked_majorant
from .settings import settings
from .workers import ordered_map

# Configure logging
logger = logging.getLogger(__name__)

SUBSET_DENSITIES = (0.25, 0.5, 1.0)
CANDIDATE_CONSTANTS = (1, 2, 4)


def _convolve(a: Dict[int, Any], b: Dict[int, Any]) -> Dict[int, Any]:
    out: Dict[int, Any] = defaultdict(int)
    for m, u in a.items():
        for n, v in b.items():
            out[m + n] += u * v
    return out


def _exact_numerators(f: FunctionLike):
    """(weights, scale) with integer weights where possible"""
    if isinstance(f, Majorant):
        return dict(f.numerators), f.scale
    return weights_of(f), 1


def moment_even(f: FunctionLike, k: int) -> Any:
    """
    int |f^|^(2k) = sum_v |r_k(v)|^2 where r_k is the k-fold self-convolution of f,
    i.e. the weighted count of x_1 + ... + x_k = y_1 + ... + y_k
    """
    require(k >= 1, "k", "must be positive")
    weights, scale = _exact_numerators(f)
    if not weights:
        return 0
    r = dict(weights)
    for _ in range(k - 1):
        r = _convolve(r, weights)
    if any(isinstance(v, complex) for v in r.values()):
        return math.fsum(abs(v) ** 2 for v in r.values())
    total = sum(v * v for v in r.values())
    value = total * Fraction(scale) ** (2 * k)
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    slack: float

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value, "slack": self.slack}


def _grid_magnitudes(vector: np.ndarray, M: int) -> np.ndarray:
    padded = np.zeros(M, dtype=complex)
    padded[:len(vector)] = vector
    return np.abs(np.fft.ifft(padded) * M)


def _dense_vector(f: FunctionLike) -> np.ndarray:
    if isinstance(f, Majorant):
        return f.dense()
    weights = weights_of(f)
    vector = np.zeros(max(weights, default=0) + 1, dtype=complex)
    for n, v in weights.items():
        vector[n] = complex(v)
    return vector


def moment_quadrature(f: FunctionLike, p: float, M: int) -> QuadratureResult:
    """(1/M) sum_t |f^(t/M)|^p"""
    require(p >= 1, "p", "must be at least 1")
    length = support_length(f)
    require(M >= 8 * length, "M", f"must be at least 8 * support length = {8 * length}")
    vector = _dense_vector(f)
    magnitudes = _grid_magnitudes(vector, M)
    value = math.fsum(magnitudes ** p) / M

    support = [n for n, v in weights_of(f).items() if v != 0]
    span = max(support) - min(support) if support else 0
    l1 = float(np.abs(vector).sum())
    if float(p).is_integer() and int(p) % 2 == 0 and M > (int(p) // 2) * span:
        slack = 0.0
    else:
        slack = math.pi * p * length * l1 ** p / M
    return QuadratureResult(value, slack)


@dataclass
class RestrictionReport:
    """max over sampled |phi| <= nu of int |phi^|^p / N^(p-1)"""
    p: float
    ratio: float
    N: int
    seed: int
    values: List[float] = field(default_factory=list)
    densities: List[float] = field(default_factory=list)

    @property
    def trials(self) -> int:
        return len(self.values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "ratio": self.ratio,
            "N": self.N,
            "seed": self.seed,
            "trials": self.trials,
            "values": self.values,
            "densities": self.densities,
        }


def _sample_phi(base: np.ndarray, trial: int, rng: np.random.Generator) -> tuple:
    if trial == 0:
        return base, 1.0
    density = SUBSET_DENSITIES[trial % len(SUBSET_DENSITIES)]
    signs = rng.choice(np.array([-1.0, 1.0]), size=base.shape)
    mask = rng.random(base.shape) < density
    return base * signs * mask, density


def restriction_trials(
    p_params: WParams,
    p: float,
    trials: int,
    seed: int,
    grid_factor: Optional[int] = None,
    threads: Optional[int] = None,
) -> RestrictionReport:
    """
    Sample phi = sign * mask * nu_b; trial 0 is nu_b itself.

    Each trial draws from its own spawned seed stream so the result does not
    depend on the worker count.
    """
    require(p > 4, "p", "must exceed 4")
    require(trials >= 1, "trials", "must be positive")
    grid_factor = grid_factor if grid_factor is not None else settings.grid_factor
    require(grid_factor >= 8, "grid_factor", "must be at least 8")
    base = wtricked_majorant(p_params).dense()
    N = p_params.Nb
    M = grid_factor * N
    streams = np.random.SeedSequence(seed).spawn(trials)

    def run(trial: int):
        phi, density = _sample_phi(base, trial, np.random.default_rng(streams[trial]))
        value = math.fsum(_grid_magnitudes(phi, M) ** p) / M
        return value / N ** (p - 1), density

    results = ordered_map(run, range(trials), threads)
    values = [v for v, _ in results]
    logger.info(f"restriction p={p} N={N}: max ratio {max(values):.4f} over {trials} trials")
    return RestrictionReport(
        p=p,
        ratio=max(values),
        N=N,
        seed=seed,
        values=values,
        densities=[d for _, d in results],
    )


def restriction_ratio(p_params: WParams, p: float, trials: int, seed: int, threads: Optional[int] = None) -> float:
    return restriction_trials(p_params, p, trials, seed, threads=threads).ratio


@dataclass
class FourthMomentReport:
    energy: Any
    N: int
    ratio: float
    curves: Dict[int, Optional[float]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "energy": self.energy,
            "N": self.N,
            "ratio": self.ratio,
            "curves": {str(c): v for c, v in self.curves.items()},
        }


def fourth_moment_ratio(target: Union[WParams, Majorant], N: Optional[int] = None) -> FourthMomentReport:
    """moment_even(nu, 2) / N^3 next to N^(C / log log N) for a few C"""
    nu = wtricked_majorant(target) if isinstance(target, WParams) else target
    N = N if N is not None else (target.Nb if isinstance(target, WParams) else nu.support_len)
    require(N >= 1, "N", "must be positive")
    energy = moment_even(nu, 2)
    loglog = math.log(math.log(N)) if N > math.e else 0.0
    curves = {c: (N ** (c / loglog) if loglog > 0 else None) for c in CANDIDATE_CONSTANTS}
    return FourthMomentReport(energy=energy, N=N, ratio=float(energy) / N ** 3, curves=curves)


def energy_lower_bound(f: FunctionLike) -> Fraction:
    """||f||_1^4 / #{x + y : x, y in supp f}, a floor for moment_even(f, 2)"""
    weights = weights_of(f)
    require(all(not isinstance(v, complex) and v >= 0 for v in weights.values()), "f", "weights must be non-negative")
    if not weights:
        return Fraction(0)
    support = list(weights)
    sums = {m + n for m in support for n in support}
    return Fraction(sum(Fraction(v) for v in weights.values())) ** 4 / len(sums)


@dataclass
class SpectrumReport:
    """Greedy 1/N-separated points of the large spectrum {|phi^| > delta N}"""
    delta: float
    N: int
    points: List[float]
    magnitudes: List[float]
    measure_estimate: float
    grid_factor: int

    @property
    def R(self) -> int:
        return len(self.points)

    def normalized(self, eps: Optional[float] = None) -> float:
        """measure_estimate * delta^(4 + eps) * N"""
        eps = eps if eps is not None else settings.spectrum_eps
        return self.measure_estimate * self.delta ** (4 + eps) * self.N

    def to_dict(self) -> Dict[str, Any]:
        return {
            "delta": self.delta,
            "N": self.N,
            "R": self.R,
            "points": self.points,
            "magnitudes": self.magnitudes,
            "measure_estimate": self.measure_estimate,
            "grid_factor": self.grid_factor,
            "normalized": self.normalized(),
        }


def large_spectrum(
    phi: FunctionLike,
    delta: float,
    N: int,
    grid_factor: Optional[int] = None,
    nu: Optional[FunctionLike] = None,
) -> SpectrumReport:
    """Greedy selection, largest |phi^| first, of grid points at mutual distance >= 1/N"""
    require(0 < delta < 1, "delta", "must lie in (0, 1)")
    require(N >= max(1, support_length(phi)), "N", "must cover the support of phi")
    if nu is not None:
        bound = weights_of(nu)
        for n, v in weights_of(phi).items():
            require(abs(v) <= bound.get(n, 0), "phi", f"|phi({n})| exceeds the majorant")
    grid_factor = grid_factor if grid_factor is not None else settings.grid_factor
    M = grid_factor * N
    magnitudes = _grid_magnitudes(_dense_vector(phi), M)

    candidates = np.nonzero(magnitudes > delta * N)[0]
    order = candidates[np.lexsort((candidates, -magnitudes[candidates]))]
    blocked = np.zeros(M, dtype=bool)
    chosen: List[int] = []
    for t in order.tolist():
        if blocked[t]:
            continue
        chosen.append(t)
        blocked[np.arange(t - grid_factor + 1, t + grid_factor) % M] = True

    return SpectrumReport(
        delta=delta,
        N=N,
        points=[t / M for t in chosen],
        magnitudes=[float(magnitudes[t]) for t in chosen],
        measure_estimate=2 * len(chosen) / N,
        grid_factor=grid_factor,
    )


def dyadic_moment_bound(reports: Sequence[SpectrumReport], p: float) -> float:
    """
    sum_j (2 delta_j N)^p meas(R_{delta_j}) + (delta_min N)^p for a ladder of
    thresholds delta_j, the dyadic estimate of int |phi^|^p
    """
    require(len(reports) >= 1, "reports", "need at least one level")
    ladder = sorted(reports, key=lambda r: r.delta)
    total = math.fsum((2 * r.delta * r.N) ** p * r.measure_estimate for r in ladder)
    return total + (ladder[0].delta * ladder[0].N) ** p


def spectrum_ladder(phi: FunctionLike, N: int, levels: int, grid_factor: Optional[int] = None) -> List[SpectrumReport]:
    """large_spectrum at delta = 1/2, 1/4, ..., 2^-levels"""
    require(levels >= 1, "levels", "must be positive")
    return [large_spectrum(phi, 2.0 ** -j, N, grid_factor) for j in range(1, levels + 1)]
