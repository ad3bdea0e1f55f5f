"""
rothsq Exponential Sums - Fourier Transforms on the Circle

This module implements:
- Point and grid evaluation of Fourier transforms of finitely supported weights
- The quadratic Gauss sums S_q(a, z) attached to the W-trick
- The oscillatory integral I(beta) and the major arc approximation
- Weyl-bound, minor arc and Fourier-decay diagnostics
- The major/minor arc decomposition of the circle
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .arith import is_smooth
from .errors import require
from .majorant import FunctionLike, Majorant, WParams, support_length, weights_of, wtricked_majorant
from .settings import settings
from .workers import ordered_map

# Configure logging
logger = logging.getLogger(__name__)

Real = Union[int, float, Fraction]
TWO_PI = 2.0 * math.pi


def _exact(alpha: Real) -> Fraction:
    # floats convert exactly, so n * alpha mod 1 is reduced without rounding
    return alpha if isinstance(alpha, Fraction) else Fraction(alpha)


def e(alpha: Real) -> complex:
    """e(alpha) := exp(2 pi i alpha), with alpha reduced mod 1 exactly"""
    frac = _exact(alpha)
    phase = (frac.numerator % frac.denominator) / frac.denominator
    return cmath.exp(1j * TWO_PI * phase)


def _fsum_complex(terms: np.ndarray) -> complex:
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def fourier_at(f: FunctionLike, alpha: Real) -> complex:
    """f^(alpha) := sum_n f(n) e(alpha n)"""
    weights = weights_of(f)
    if not weights:
        return 0j
    frac = _exact(alpha)
    num, den = frac.numerator, frac.denominator
    phases = np.array([(num * n % den) / den for n in weights])
    values = np.array([complex(v) for v in weights.values()])
    return _fsum_complex(values * np.exp(1j * TWO_PI * phases))


@dataclass
class FourierGrid:
    """values[t] = f^(t / M) for t in [0, M)"""
    M: int
    values: np.ndarray

    def at(self, t: int) -> complex:
        return complex(self.values[t % self.M])

    def parseval(self) -> float:
        """(1/M) sum_t |values[t]|^2"""
        return math.fsum(np.abs(self.values) ** 2) / self.M

    def alphas(self) -> np.ndarray:
        return np.arange(self.M) / self.M


def _dense(f: FunctionLike, M: int) -> np.ndarray:
    vector = np.zeros(M, dtype=complex)
    for n, v in weights_of(f).items():
        vector[n % M] += complex(v)
    return vector


def fourier_grid(f: FunctionLike, M: int) -> FourierGrid:
    """Exact DFT of the zero-padded weight vector at the M points t/M"""
    require(M >= max(1, support_length(f)), "M", f"must be at least the support length {support_length(f)}")
    # numpy's inverse transform carries the e(+tn/M) sign convention
    return FourierGrid(M, np.fft.ifft(_dense(f, M)) * M)


def _root_sum(k: np.ndarray, q: int, axis: int = -1) -> np.ndarray:
    """sum of e(k / q) along an axis, k integer residues"""
    angles = TWO_PI * (k % q) / q
    return np.cos(angles).sum(axis=axis) + 1j * np.sin(angles).sum(axis=axis)


def _check_z(z: int, p: WParams) -> None:
    require((z * z + p.b2) % p.W == 0, "z", f"z^2 + b2 must vanish modulo W={p.W}")


def gauss_sum(q: int, a: int, z: int, p: WParams) -> complex:
    """S_q(a, z) := sum_{r=1}^q e(a (W r^2 + 2 z r + (z^2 + b2)/W) / q)"""
    require(q >= 1, "q", "must be positive")
    _check_z(z, p)
    c = (z * z + p.b2) // p.W
    r = np.arange(1, q + 1, dtype=np.int64)
    base = ((p.W % q) * (r * r % q) + 2 * (z % q) * r + c % q) % q
    k = (a % q) * base % q
    angles = TWO_PI * k / q
    return complex(math.fsum(np.cos(angles)), math.fsum(np.sin(angles)))


def _gauss_block(q: int, a_values: Sequence[int], p: WParams) -> np.ndarray:
    """S_q(a, z) for every a in a_values (rows) and every admissible z (columns)"""
    zs = np.array(p.residues(), dtype=np.int64)
    cs = np.array([(int(z) * int(z) + p.b2) // p.W % q for z in zs], dtype=np.int64)
    r = np.arange(1, q + 1, dtype=np.int64)
    base = ((p.W % q) * (r * r % q))[None, :] + (2 * (zs % q))[:, None] * r[None, :] + cs[:, None]
    base %= q
    a = np.array(a_values, dtype=np.int64) % q
    k = (a[:, None, None] * base[None, :, :]) % q
    return _root_sum(k, q, axis=-1)


def smooth_vanishing_residual(q: int, a: int, p: WParams) -> float:
    """|sum_z q^-1 S_q(a, z)| over z^2 + b2 = 0 mod W"""
    return abs(sum(gauss_sum(q, a, z, p) for z in p.residues())) / q


def gauss_table(p: WParams, qmax: int, threads: Optional[int] = None) -> List[Dict[str, Any]]:
    """Rows (q, a, max|S_q|, 2 sqrt q, residual, smooth) for q <= qmax, (a, q) = 1"""
    require(qmax >= 1, "qmax", "must be positive")

    def rows_for(q: int) -> List[Dict[str, Any]]:
        a_values = [a for a in range(q) if math.gcd(a, q) == 1]
        block = _gauss_block(q, a_values, p)
        smooth = is_smooth(q, p.w)
        return [
            {
                "q": q,
                "a": a,
                "max_abs_S": float(np.abs(block[i]).max()),
                "bound": 2.0 * math.sqrt(q),
                "residual": float(abs(block[i].sum()) / q),
                "smooth": smooth,
            }
            for i, a in enumerate(a_values)
        ]

    return [row for rows in ordered_map(rows_for, range(1, qmax + 1), threads) for row in rows]


def integral_I(beta: Real, N: int) -> complex:
    """I(beta) := int_0^N e(beta t) dt"""
    if beta == 0:
        return complex(N)
    return (e(_exact(beta) * N) - 1) / (2j * math.pi * float(beta))


def major_arc_main(alpha: Real, q: int, a: int, p: WParams) -> complex:
    """(1 / sigma) sum_z q^-1 S_q(a, z) I(alpha - a/q)"""
    require(q >= 1, "q", "must be positive")
    require(math.gcd(a, q) == 1, "a", f"must be coprime to q={q}")
    beta = _exact(alpha) - Fraction(a, q)
    total = sum(gauss_sum(q, a, z, p) for z in p.residues())
    return total / q * integral_I(beta, p.Nb) / p.sigma


def _norm_q_alpha(alpha: Real, q: int, a: int) -> Fraction:
    distance = abs(q * _exact(alpha) - a)
    require(distance <= Fraction(1, 2), "a", "need ||q alpha|| = |q alpha - a|")
    return distance


def major_arc_error(alpha: Real, q: int, a: int, p: WParams, nu: Optional[Majorant] = None) -> float:
    """|nu^(alpha) - main term| / (sqrt(N W) (q + N ||q alpha||))"""
    distance = _norm_q_alpha(alpha, q, a)
    nu = nu or wtricked_majorant(p)
    error = abs(fourier_at(nu, alpha) - major_arc_main(alpha, q, a, p))
    return error / (math.sqrt(p.Nb * p.W) * (q + p.Nb * float(distance)))


def weyl_ratio(alpha: Real, q: int, a: int, p: WParams, nu: Optional[Majorant] = None) -> float:
    """|nu^(alpha)| over N sqrt(W log N) ((WN)^-1/2 + ||qa|| + q/N + min(1/q, 1/(||qa|| N)))^1/2"""
    require(p.b1 * p.W <= p.X, "b1", f"Weyl bound needs b1 W <= X (b1={p.b1}, W={p.W}, X={p.X})")
    require(q >= 1 and math.gcd(a, q) == 1, "a", f"must be coprime to q={q}")
    distance = float(_norm_q_alpha(alpha, q, a))
    nu = nu or wtricked_majorant(p)
    N, W = p.Nb, p.W
    tail = 1.0 / q if distance == 0 else min(1.0 / q, 1.0 / (distance * N))
    bracket = (W * N) ** -0.5 + distance + q / N + tail
    bound = N * math.sqrt(W * math.log(max(N, 2))) * math.sqrt(bracket)
    return abs(fourier_at(nu, alpha)) / bound


def minor_arc_bound(alpha: Real, p: WParams, tau: Optional[float] = None, nu: Optional[Majorant] = None) -> float:
    """|nu^(alpha)| / (N^(1 - tau/2) sqrt(W log N))"""
    tau = tau if tau is not None else settings.tau
    nu = nu or wtricked_majorant(p)
    N = p.Nb
    return abs(fourier_at(nu, alpha)) / (N ** (1 - tau / 2) * math.sqrt(p.W * math.log(max(N, 2))))


def dirichlet_approximation(alpha: Real, Q: int) -> Tuple[int, int]:
    """(a, q) with q <= Q, (a, q) = 1 and |q alpha - a| = ||q alpha||"""
    require(Q >= 1, "Q", "must be positive")
    best = _exact(alpha).limit_denominator(Q)
    return best.numerator, best.denominator


@dataclass
class DecayReport:
    """Grid estimate of ||nu^ - 1_[N]^||_inf / N"""
    sup_ratio: float
    bernstein_slack: float
    argmax_alpha: float
    grid_factor: int
    N: int
    mass: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sup_ratio": self.sup_ratio,
            "bernstein_slack": self.bernstein_slack,
            "argmax_alpha": self.argmax_alpha,
            "grid_factor": self.grid_factor,
            "N": self.N,
            "mass": self.mass,
        }


def decay_sup_of(nu: FunctionLike, N: int, grid_factor: Optional[int] = None) -> DecayReport:
    """
    max over t of |nu^(t/M) - 1_[N]^(t/M)| / N on M = grid_factor * N points

    The transform is a trigonometric polynomial of degree <= N, so between grid
    points it moves by at most 2 pi mass / grid_factor (reported, normalised by N).
    """
    grid_factor = grid_factor if grid_factor is not None else settings.grid_factor
    require(grid_factor >= 8, "grid_factor", "must be at least 8")
    require(N >= max(1, support_length(nu)), "N", "must cover the support")
    M = grid_factor * N
    vector = _dense(nu, M)
    vector[1:N + 1] -= 1.0
    grid = np.abs(np.fft.ifft(vector) * M)
    t = int(np.argmax(grid))
    mass = float(sum(complex(v).real for v in weights_of(nu).values()))
    return DecayReport(
        sup_ratio=float(grid[t]) / N,
        bernstein_slack=TWO_PI * mass / (grid_factor * N),
        argmax_alpha=t / M,
        grid_factor=grid_factor,
        N=N,
        mass=mass,
    )


def decay_sup(p: WParams, grid_factor: Optional[int] = None) -> DecayReport:
    """Fourier decay level of nu_b, estimated on the grid"""
    return decay_sup_of(wtricked_majorant(p), p.Nb, grid_factor)


@dataclass(frozen=True)
class Arc:
    """{alpha : |alpha - a/q| <= radius}"""
    q: int
    a: int
    radius: float

    @property
    def center(self) -> Fraction:
        return Fraction(self.a, self.q)

    def contains(self, alpha: Real) -> bool:
        return _circle_distance(_exact(alpha), self.center) <= self.radius


def _circle_distance(x: Fraction, y: Fraction) -> float:
    d = (x - y) % 1
    return float(min(d, 1 - d))


@dataclass
class ArcDecomposition:
    """Major arcs M(q, a) for 0 <= a < q <= N^tau, (a, q) = 1"""
    tau: float
    N: int
    arcs: List[Arc]

    @property
    def Q(self) -> int:
        return max((arc.q for arc in self.arcs), default=0)

    @property
    def radius(self) -> float:
        return self.N ** (-1 + self.tau)

    def locate(self, alpha: Real) -> Optional[Arc]:
        """The major arc containing alpha (smallest q first), or None on the minor arcs"""
        for arc in self.arcs:
            if arc.contains(alpha):
                return arc
        return None

    def total_measure_bound(self) -> float:
        """2 N^(-1+tau) * sum_{q <= N^tau} phi(q)"""
        return 2 * self.radius * len(self.arcs)

    def pairwise_disjoint(self) -> bool:
        centers = sorted(arc.center for arc in self.arcs)
        if len(centers) < 2:
            return True
        gaps = [float(b - a) for a, b in zip(centers, centers[1:])]
        gaps.append(float(1 - centers[-1] + centers[0]))
        return min(gaps) > 2 * self.radius

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tau": self.tau,
            "N": self.N,
            "Q": self.Q,
            "radius": self.radius,
            "arcs": [[arc.a, arc.q] for arc in self.arcs],
        }


def arcs(N: int, tau: Optional[float] = None) -> ArcDecomposition:
    """Complete list of major arcs; everything else is minor"""
    tau = tau if tau is not None else settings.tau
    require(0 < tau < 0.5, "tau", "must lie in (0, 1/2)")
    require(N >= 1, "N", "must be positive")
    Q = int(math.floor(N ** tau + 1e-9))
    radius = N ** (-1 + tau)
    found = [Arc(q, a, radius) for q in range(1, Q + 1) for a in range(q) if math.gcd(a, q) == 1]
    return ArcDecomposition(tau=tau, N=N, arcs=found)


@dataclass(frozen=True)
class ArcSample:
    q: int
    a: int
    alpha: float
    ratio: float


def major_arc_sweep(
    p: WParams,
    qmax: int,
    points: int = 50,
    radius: Optional[float] = None,
    threads: Optional[int] = None,
) -> List[ArcSample]:
    """major_arc_error at `points` frequencies across each arc a/q, q <= qmax"""
    require(points >= 1, "points", "must be positive")
    nu = wtricked_majorant(p)
    radius = radius if radius is not None else p.Nb ** (-1 + settings.tau)
    centers = [(q, a) for q in range(1, qmax + 1) for a in range(q) if math.gcd(a, q) == 1]
    offsets = [Fraction(x) for x in np.linspace(-radius, radius, points)]
    offsets = [o for o in offsets if abs(o) * qmax <= Fraction(1, 2)]

    def sweep(center: Tuple[int, int]) -> List[ArcSample]:
        q, a = center
        samples = []
        for offset in offsets:
            alpha = Fraction(a, q) + offset
            samples.append(ArcSample(q, a, float(alpha % 1), major_arc_error(alpha, q, a, p, nu)))
        return samples

    return [s for chunk in ordered_map(sweep, centers, threads) for s in chunk]
