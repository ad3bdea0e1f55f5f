"""
rothsq Counting - Weighted Solutions of c . x = 0

This module implements:
- Exact meet-in-the-middle counting of weighted solutions
- The same count through orthogonality on Z/M
- Enumeration of K-trivial solutions (square vector inside a union of subspaces)
- The telescoping identity and the configuration-control gap
- Non-diagonal solutions of the system c . x = 0, c . x^2 = 0
"""

import itertools
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Matrix, Rational

from .errors import PreconditionError, require
from .expsum import fourier_grid
from .majorant import FunctionLike, Majorant, WParams, support_length, weights_of
from .settings import settings
from .workers import ordered_map

# Configure logging
logger = logging.getLogger(__name__)

Exact = Union[int, Fraction]
Form = Tuple[Fraction, ...]


@dataclass(frozen=True)
class Equation:
    """c_1 y_1 + ... + c_s y_s = 0 with nonzero integer coefficients"""
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        require(len(self.coeffs) >= 2, "c", "need at least two coefficients")
        require(all(c != 0 for c in self.coeffs), "c", "coefficients must be nonzero")

    @property
    def s(self) -> int:
        return len(self.coeffs)

    @property
    def sum_zero(self) -> bool:
        return sum(self.coeffs) == 0

    @property
    def signs(self) -> Tuple[int, int]:
        """(number of positive, number of negative) coefficients"""
        positive = sum(1 for c in self.coeffs if c > 0)
        return positive, self.s - positive

    @property
    def is_admissible(self) -> bool:
        return self.s >= 3

    def linear(self, xs: Sequence[int]) -> int:
        return sum(c * x for c, x in zip(self.coeffs, xs))

    def quadratic(self, xs: Sequence[int]) -> int:
        return sum(c * x * x for c, x in zip(self.coeffs, xs))

    def to_dict(self) -> Dict[str, Any]:
        return {"c": list(self.coeffs), "s": self.s, "sum_zero": self.sum_zero}


def _rational(value: Fraction) -> Rational:
    return Rational(value.numerator, value.denominator)


def _fraction(value: Any) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def _matrix(rows: Iterable[Sequence[Fraction]]) -> Matrix:
    return Matrix([[_rational(Fraction(v)) for v in row] for row in rows])


def _integral(form: Sequence[Fraction]) -> Tuple[int, ...]:
    scale = math.lcm(*(Fraction(v).denominator for v in form))
    return tuple(int(Fraction(v) * scale) for v in form)


@dataclass(frozen=True)
class SubspaceFamily:
    """
    A finite union K of proper subspaces of the hyperplane c . y = 0.

    Member i is {y : c . y = 0 and d . y = 0 for every form d of the member}.
    """
    equation: Equation
    members: Tuple[Tuple[Form, ...], ...] = ()

    def __post_init__(self):
        s = self.equation.s
        members = tuple(tuple(tuple(Fraction(v) for v in d) for d in member) for member in self.members)
        object.__setattr__(self, "members", members)
        for i, member in enumerate(members):
            require(len(member) >= 1, "forms", f"member {i} has no forms")
            for d in member:
                require(len(d) == s, "forms", f"member {i} has a form of length {len(d)}, expected {s}")
            rank = _matrix([self.equation.coeffs, *member]).rank()
            require(rank >= 2, "forms", f"member {i} is proportional to c")

    @classmethod
    def from_forms(cls, equation: Equation, forms: Iterable[Sequence[Any]]) -> "SubspaceFamily":
        """One single-form member per form"""
        return cls(equation, tuple((tuple(d),) for d in forms))

    @classmethod
    def diagonal(cls, equation: Equation) -> "SubspaceFamily":
        """The diagonal line y_1 = ... = y_s"""
        s = equation.s
        forms = tuple(tuple(1 if j == i else -1 if j == i + 1 else 0 for j in range(s)) for i in range(s - 1))
        return cls(equation, (forms,))

    @classmethod
    def pairs_equal(cls, equation: Equation) -> "SubspaceFamily":
        """The subspaces y_i = y_j, i < j"""
        s = equation.s
        forms = [
            tuple(1 if k == i else -1 if k == j else 0 for k in range(s))
            for i, j in itertools.combinations(range(s), 2)
        ]
        return cls.from_forms(equation, forms)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def contains_diagonal(self) -> List[bool]:
        """Per member: whether (1, ..., 1) lies in it"""
        return [self.equation.sum_zero and all(sum(d) == 0 for d in member) for member in self.members]

    def contains(self, y: Sequence[int]) -> bool:
        if self.equation.linear(y) != 0:
            return False
        return any(all(sum(v * t for v, t in zip(d, y)) == 0 for d in member) for member in self.members)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "c": list(self.equation.coeffs),
            "members": [[[str(v) for v in d] for d in member] for member in self.members],
            "contains_diagonal": self.contains_diagonal,
        }


# ---------------------------------------------------------------------------
# Weighted counts
# ---------------------------------------------------------------------------

def _check_arity(fs: Sequence[FunctionLike], eq: Equation) -> List[Dict[int, Any]]:
    require(len(fs) == eq.s, "fs", f"need {eq.s} functions, got {len(fs)}")
    return [weights_of(f) for f in fs]


def _normalise(value: Any) -> Any:
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def _side(weights: Sequence[Dict[int, Any]], coeffs: Sequence[int]) -> Dict[int, Any]:
    """value of sum c_i x_i -> summed weight product over one block of coordinates"""
    acc: Dict[int, Any] = {0: 1}
    for w, c in zip(weights, coeffs):
        nxt: Dict[int, Any] = defaultdict(int)
        for v, a in acc.items():
            for n, b in w.items():
                nxt[v + c * n] += a * b
        acc = nxt
    return acc


def _split(sizes: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Partition coordinates so that prod |support| is balanced across the two blocks"""
    left: List[int] = []
    right: List[int] = []
    left_load = right_load = 1
    for i in sorted(range(len(sizes)), key=lambda i: (-sizes[i], i)):
        if left_load <= right_load:
            left.append(i)
            left_load *= max(sizes[i], 1)
        else:
            right.append(i)
            right_load *= max(sizes[i], 1)
    return sorted(left), sorted(right)


def count_brute(fs: Sequence[FunctionLike], eq: Equation) -> Any:
    """sum over c . x = 0 of prod_i f_i(x_i), exactly, by meet-in-the-middle"""
    weights = _check_arity(fs, eq)
    if any(not w for w in weights):
        return 0
    left, right = _split([len(w) for w in weights])
    lhs = _side([weights[i] for i in left], [eq.coeffs[i] for i in left])
    rhs = _side([weights[i] for i in right], [eq.coeffs[i] for i in right])
    total: Any = 0
    for v, a in lhs.items():
        b = rhs.get(-v)
        if b:
            total += a * b
    return _normalise(total)


def _value_range(weights: Sequence[Dict[int, Any]], eq: Equation) -> Tuple[int, int]:
    lo = hi = 0
    for w, c in zip(weights, eq.coeffs):
        ends = (c * min(w), c * max(w))
        lo += min(ends)
        hi += max(ends)
    return lo, hi


def admissible_modulus(fs: Sequence[FunctionLike], eq: Equation) -> int:
    """Least M such that no nonzero multiple of M is an attainable value of c . x"""
    weights = _check_arity(fs, eq)
    if any(not w for w in weights):
        return 1
    lo, hi = _value_range(weights, eq)
    return max(hi, -lo) + 1


def default_modulus(fs: Sequence[FunctionLike], eq: Equation) -> int:
    """Smallest power of two exceeding (sum |c_i|) N + 1"""
    N = max(support_length(f) for f in fs)
    bound = sum(abs(c) for c in eq.coeffs) * N + 1
    return 1 << bound.bit_length()


def _is_integral(value: Any) -> bool:
    if isinstance(value, (int, np.integer)):
        return True
    return isinstance(value, Fraction) and value.denominator == 1


def count_dft(fs: Sequence[FunctionLike], eq: Equation, M: Optional[int] = None) -> Any:
    """(1/M) sum_{t < M} prod_i f_i^(c_i t / M)"""
    weights = _check_arity(fs, eq)
    minimum = admissible_modulus(fs, eq)
    M = M if M is not None else default_modulus(fs, eq)
    if M < minimum:
        raise PreconditionError("M", f"modulus {M} is inadmissible; need M >= {minimum}")
    if any(not w for w in weights):
        return 0

    t = np.arange(M, dtype=np.int64)
    product = np.ones(M, dtype=complex)
    for w, c in zip(weights, eq.coeffs):
        vector = np.zeros(M, dtype=complex)
        for n, v in w.items():
            vector[n % M] += complex(v)
        grid = np.fft.ifft(vector) * M
        product *= grid[(c * t) % M]
    value = complex(math.fsum(product.real), math.fsum(product.imag)) / M

    values = [v for w in weights for v in w.values()]
    if all(_is_integral(v) for v in values):
        return int(round(value.real))
    if all(not isinstance(v, complex) for v in values):
        return value.real
    return value


@dataclass
class CountReport:
    """Weighted solution counts of one equation"""
    brute: Any
    dft: Any
    ktrivial: Any
    heuristic: int
    M: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "brute": self.brute,
            "dft": self.dft,
            "ktrivial": self.ktrivial,
            "heuristic": self.heuristic,
            "M": self.M,
        }


def count_report(f: FunctionLike, eq: Equation, K: Optional[SubspaceFamily] = None, M: Optional[int] = None) -> CountReport:
    """Counts of c . n = 0 weighted by f in every coordinate"""
    fs = [f] * eq.s
    M = M if M is not None else default_modulus(fs, eq)
    ktrivial = ktrivial_sum(f, K) if K is not None else None
    return CountReport(
        brute=count_brute(fs, eq),
        dft=count_dft(fs, eq, M),
        ktrivial=ktrivial,
        heuristic=support_length(f) ** (eq.s - 1),
        M=M,
    )


# ---------------------------------------------------------------------------
# K-trivial enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _MemberPlan:
    """Reduced row echelon form of [c; forms]: pivot coordinates as integer combinations of free ones"""
    free: Tuple[int, ...]
    pivots: Tuple[int, ...]
    scales: Tuple[int, ...]
    rows: Tuple[Tuple[int, ...], ...]
    forms: Tuple[Tuple[int, ...], ...]


def _plan(eq: Equation, member: Tuple[Form, ...]) -> _MemberPlan:
    reduced, pivots = _matrix([eq.coeffs, *member]).rref()
    free = tuple(j for j in range(eq.s) if j not in pivots)
    scales, rows = [], []
    for r, _ in enumerate(pivots):
        entries = [-_fraction(reduced[r, f]) for f in free]
        scale = math.lcm(*(e.denominator for e in entries)) if entries else 1
        scales.append(scale)
        rows.append(tuple(int(e * scale) for e in entries))
    return _MemberPlan(
        free=free,
        pivots=tuple(int(p) for p in pivots),
        scales=tuple(scales),
        rows=tuple(rows),
        forms=tuple(_integral(d) for d in member),
    )


def _feasible(plan: _MemberPlan, fixed: Dict[int, int], lo: int, hi: int, limit: int) -> bool:
    """Interval test: can every pivot still land in [1, limit]?"""
    for scale, row in zip(plan.scales, plan.rows):
        low = high = 0
        for f, coef in zip(plan.free, row):
            if f in fixed:
                low += coef * fixed[f]
                high += coef * fixed[f]
            else:
                low += min(coef * lo, coef * hi)
                high += max(coef * lo, coef * hi)
        if high < scale or low > scale * limit:
            return False
    return True


def _enumerate_member(
    plan: _MemberPlan,
    earlier: Sequence[_MemberPlan],
    points: np.ndarray,
    lookup: np.ndarray,
) -> int:
    """Sum of prod lookup[n_i] over n in the member (and in no earlier member), n_i in points"""
    if not plan.free or len(points) == 0:
        return 0
    s = len(plan.free) + len(plan.pivots)
    limit = len(lookup) - 1
    vectorised = plan.free[-2:]
    looped = plan.free[:-2]
    grids = np.meshgrid(*([points] * len(vectorised)), indexing="ij")
    columns = {f: g.ravel() for f, g in zip(vectorised, grids)}
    size = len(next(iter(columns.values())))
    lo, hi = int(points[0]), int(points[-1])

    total = 0
    for combo in itertools.product(points.tolist(), repeat=len(looped)):
        fixed = dict(zip(looped, combo))
        if not _feasible(plan, fixed, lo, hi, limit):
            continue
        mask = np.ones(size, dtype=bool)
        solved: Dict[int, np.ndarray] = {}
        for pivot, scale, row in zip(plan.pivots, plan.scales, plan.rows):
            num = np.zeros(size, dtype=np.int64)
            for f, coef in zip(plan.free, row):
                num += coef * (fixed[f] if f in fixed else columns[f])
            n = num // scale
            ok = (num % scale == 0) & (n >= 1) & (n <= limit)
            ok &= lookup[np.where(ok, n, 0)] != 0
            mask &= ok
            solved[pivot] = n
        hits = np.nonzero(mask)[0]
        if len(hits) == 0:
            continue

        tuples = np.empty((len(hits), s), dtype=np.int64)
        for j in range(s):
            if j in fixed:
                tuples[:, j] = fixed[j]
            elif j in columns:
                tuples[:, j] = columns[j][hits]
            else:
                tuples[:, j] = solved[j][hits]
        for other in earlier:
            inside = np.ones(len(tuples), dtype=bool)
            for form in other.forms:
                inside &= tuples @ np.array(form, dtype=np.int64) == 0
            tuples = tuples[~inside]
        weights = lookup[tuples]
        total += sum(math.prod(int(v) for v in row) for row in weights.tolist())
    return total


def _family_sum(K: SubspaceFamily, points: np.ndarray, lookup: np.ndarray, threads: Optional[int] = None) -> List[int]:
    plans = [_plan(K.equation, member) for member in K.members]
    return ordered_map(
        lambda i: _enumerate_member(plans[i], plans[:i], points, lookup),
        range(len(plans)),
        threads,
    )


def count_ktrivial(X: int, K: SubspaceFamily, threads: Optional[int] = None) -> int:
    """#{x in [1, X]^s : (x_1^2, ..., x_s^2) in K}"""
    require(X >= 1, "X", "must be positive")
    if len(K) == 0:
        return 0
    xs = np.arange(1, X + 1, dtype=np.int64)
    lookup = np.zeros(X * X + 1, dtype=np.int64)
    lookup[xs * xs] = 1
    per_member = _family_sum(K, xs * xs, lookup, threads)
    logger.info(f"count_ktrivial X={X}: {per_member}")
    return sum(per_member)


def _integer_weights(f: FunctionLike) -> Tuple[Dict[int, int], int]:
    """Integer numerators and a common denominator of real rational weights"""
    if isinstance(f, Majorant):
        return dict(f.numerators), 1
    weights = weights_of(f)
    fractions = {}
    for n, v in weights.items():
        if isinstance(v, complex):
            raise PreconditionError("f", "K-trivial sums need real weights")
        fractions[n] = Fraction(v)
    denominator = math.lcm(*(v.denominator for v in fractions.values())) if fractions else 1
    return {n: int(v * denominator) for n, v in fractions.items()}, denominator


def _signed_lookup(numerators: Dict[int, int]) -> Tuple[np.ndarray, np.ndarray]:
    points = np.array(sorted(n for n, v in numerators.items() if v != 0), dtype=np.int64)
    lookup = np.zeros(int(points[-1]) + 1 if len(points) else 1, dtype=np.int64)
    for n in points.tolist():
        lookup[n] = numerators[n]
    return points, lookup


def ktrivial_sum(f: FunctionLike, K: SubspaceFamily, threads: Optional[int] = None) -> Exact:
    """sum over n in K of prod_i f(n_i)"""
    if len(K) == 0:
        return 0
    numerators, denominator = _integer_weights(f)
    if not numerators:
        return 0
    points, lookup = _signed_lookup(numerators)
    total = sum(_family_sum(K, points, lookup, threads))
    scale = f.scale if isinstance(f, Majorant) else Fraction(1, denominator)
    return _normalise(total * scale ** K.equation.s)


@dataclass
class KTrivialReport:
    """Weighted K-trivial count against the 1/5-saving scale mass^s / N_b^(6/5)"""
    value: Exact
    mass: Exact
    Nb: int
    saving_scale: float
    ratio: float
    per_member: List[Exact] = field(default_factory=list)
    contains_diagonal: List[bool] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "mass": self.mass,
            "Nb": self.Nb,
            "saving_scale": self.saving_scale,
            "ratio": self.ratio,
            "per_member": self.per_member,
            "contains_diagonal": self.contains_diagonal,
        }


def ktrivial_weighted(nu: Majorant, p: WParams, K: SubspaceFamily, threads: Optional[int] = None) -> KTrivialReport:
    """
    sum_{n in K} prod nu(n_i) for a majorant on [N_b].

    Support points n are in bijection with y = sqrt(W n - b2), and the linear
    conditions on n pull back to affine conditions on y^2, so the enumeration runs
    directly over the support.
    """
    require(nu.support_len <= p.Nb, "nu", f"support exceeds N_b={p.Nb}")
    s = K.equation.s
    mass = _normalise(nu.total_mass())
    per_member: List[Exact] = []
    if len(K) and nu.numerators:
        points, lookup = _signed_lookup(nu.numerators)
        scale = nu.scale ** s
        per_member = [_normalise(v * scale) for v in _family_sum(K, points, lookup, threads)]
    value = _normalise(sum(per_member, Fraction(0)))
    saving_scale = float(mass) ** s / p.Nb ** 1.2
    return KTrivialReport(
        value=value,
        mass=mass,
        Nb=p.Nb,
        saving_scale=saving_scale,
        ratio=float(value) / saving_scale if saving_scale else 0.0,
        per_member=per_member,
        contains_diagonal=K.contains_diagonal,
    )


# ---------------------------------------------------------------------------
# Telescoping and configuration control
# ---------------------------------------------------------------------------

def telescope_check(f: FunctionLike, g: FunctionLike, tuples: Iterable[Sequence[int]]) -> bool:
    """
    prod f(x_i) - prod g(x_i) = sum_j (f(x_j) - g(x_j)) prod_{i<j} f(x_i) prod_{i>j} g(x_i)

    checked exactly at every tuple
    """
    fw, gw = weights_of(f), weights_of(g)
    for xs in tuples:
        fv = [fw.get(x, 0) for x in xs]
        gv = [gw.get(x, 0) for x in xs]
        lhs = math.prod(fv) - math.prod(gv)
        rhs = sum(
            (fv[j] - gv[j]) * math.prod(fv[:j]) * math.prod(gv[j + 1:])
            for j in range(len(xs))
        )
        if lhs != rhs:
            return False
    return True


class ConfigGap(NamedTuple):
    gap: float
    rhs: float


def config_gap(
    f: FunctionLike,
    g: FunctionLike,
    eq: Equation,
    p_exp: float,
    nu: FunctionLike,
    N: int,
    grid_factor: Optional[int] = None,
) -> ConfigGap:
    """
    (|count(f) - count(g)|, N^(s-1) (||f^ - g^||_inf / N)^(1 - {p_exp}))

    requires |f| <= nu pointwise and |g| <= 1 on [1, N]
    """
    s = eq.s
    require(s - 1 <= p_exp < s, "p", f"exponent must lie in [{s - 1}, {s})")
    fw, gw, bound = weights_of(f), weights_of(g), weights_of(nu)
    for n, v in fw.items():
        require(abs(v) <= bound.get(n, 0), "f", f"|f({n})| exceeds the majorant")
    for n, v in gw.items():
        require(1 <= n <= N and abs(v) <= 1, "g", f"g({n}) must satisfy |g| <= 1 on [1, {N}]")
    require(support_length(f) <= N, "f", f"support exceeds N={N}")

    gap = abs(count_brute([fw] * s, eq) - count_brute([gw] * s, eq))
    difference = dict(fw)
    for n, v in gw.items():
        difference[n] = difference.get(n, 0) - v
    grid_factor = grid_factor if grid_factor is not None else settings.grid_factor
    sup = float(np.abs(fourier_grid(difference, grid_factor * N).values).max()) if difference else 0.0
    fractional = p_exp - math.floor(p_exp)
    return ConfigGap(float(gap), N ** (s - 1) * (sup / N) ** (1 - fractional))


# ---------------------------------------------------------------------------
# The system c . x = 0, c . x^2 = 0
# ---------------------------------------------------------------------------

def system_direction(eq: Equation, H: int) -> Optional[Tuple[int, ...]]:
    """Lexicographically least non-diagonal x in [0, H]^s with c . x = c . x^2 = 0"""
    require(eq.sum_zero, "c", "the coefficients must sum to zero")
    require(H >= 0, "H", "must be non-negative")
    *head, last = eq.coeffs
    for prefix in itertools.product(range(H + 1), repeat=eq.s - 1):
        partial = sum(c * x for c, x in zip(head, prefix))
        if partial % last:
            continue
        x_last = -partial // last
        if not 0 <= x_last <= H:
            continue
        x = (*prefix, x_last)
        if len(set(x)) > 1 and eq.quadratic(x) == 0:
            return x
    return None


def progression_solution(eq: Equation, direction: Sequence[int], a: int, q: int) -> Tuple[int, ...]:
    """y = a + q x; solves c . y^2 = 0 whenever x solves the system"""
    require(eq.sum_zero, "c", "the coefficients must sum to zero")
    require(len(direction) == eq.s, "direction", f"must have length {eq.s}")
    require(
        eq.linear(direction) == 0 and eq.quadratic(direction) == 0,
        "direction",
        "must solve c . x = 0 and c . x^2 = 0",
    )
    y = tuple(a + q * x for x in direction)
    assert eq.quadratic(y) == 0
    return y
