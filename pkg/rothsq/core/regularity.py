"""
rothsq Regularity - Rado Numbers, Solution-Free Sets and the Transference Pipeline

This module implements:
- Enumeration of solutions of c . x^2 = 0 with pairwise-distinct entries
- Exact small Rado numbers by component-wise backtracking with forward checking
- Greedy maximal solution-free subsets of [1, X]
- The end-to-end transference statistic for a set A
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from .budget import SearchBudget
from .counting import CountReport, Equation, KTrivialReport, SubspaceFamily, count_report, ktrivial_weighted
from .errors import require
from .expsum import DecayReport, decay_sup
from .majorant import WParams, lift_set, select_b, wtricked_majorant
from .settings import settings

# Configure logging
logger = logging.getLogger(__name__)

Solution = Tuple[int, ...]


class RadoStatus(Enum):
    """Outcome of a Rado-number search"""
    REGULAR_AT_N = "regular_at_n"
    NO_WITNESS_UP_TO_N = "no_witness_up_to_n"
    EXHAUSTED_BUDGET = "exhausted_budget"


def _solutions_through(eq: Equation, x: int, pool: Sequence[int], first_only: bool = False) -> Iterator[Solution]:
    """Solutions with x in some coordinate and the other entries distinct members of pool (x excluded)"""
    pool = [a for a in pool if a != x]
    s = eq.s
    seen: Set[Solution] = set()
    for i, ci in enumerate(eq.coeffs):
        rest = [j for j in range(s) if j != i]
        left, right = rest[:len(rest) // 2], rest[len(rest) // 2:]
        table: Dict[int, List[Tuple[int, ...]]] = defaultdict(list)
        for xs in itertools.permutations(pool, len(left)):
            table[sum(eq.coeffs[j] * a * a for j, a in zip(left, xs))].append(xs)
        target = -ci * x * x
        for ys in itertools.permutations(pool, len(right)):
            needed = target - sum(eq.coeffs[j] * a * a for j, a in zip(right, ys))
            for xs in table.get(needed, ()):
                if not set(xs).isdisjoint(ys):
                    continue
                solution = [0] * s
                solution[i] = x
                for j, a in zip(left, xs):
                    solution[j] = a
                for j, a in zip(right, ys):
                    solution[j] = a
                found = tuple(solution)
                if found not in seen:
                    seen.add(found)
                    yield found
                    if first_only:
                        return


def distinct_solutions_with_max(eq: Equation, n: int, allowed: Optional[Iterable[int]] = None) -> List[Solution]:
    """Sorted solutions of c . x^2 = 0 with distinct entries in [1, n] and largest entry n"""
    require(n >= 1, "n", "must be positive")
    keep = set(allowed) if allowed is not None else None
    pool = [a for a in range(1, n) if keep is None or a in keep]
    return sorted(_solutions_through(eq, n, pool))


def distinct_solutions(eq: Equation, X: int) -> List[Solution]:
    """All distinct-entry solutions in [1, X], ordered by largest entry"""
    return [sol for n in range(1, X + 1) for sol in distinct_solutions_with_max(eq, n)]


def verify_witness(eq: Equation, witness: Sequence[int], n: int) -> bool:
    return (
        len(witness) == eq.s
        and len(set(witness)) == eq.s
        and all(1 <= x <= n for x in witness)
        and eq.quadratic(witness) == 0
    )


def count_distinct_solutions(eq: Equation, A: Iterable[int]) -> int:
    """Ordered distinct-entry solutions with every entry in A, by a two-block join"""
    elements = sorted(set(A))
    if eq.s < 2 or not elements:
        return 0
    c = eq.coeffs
    pairs: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    for a, b in itertools.permutations(elements, 2):
        pairs[c[0] * a * a + c[1] * b * b].append((a, b))
    total = 0
    for tail in itertools.product(elements, repeat=eq.s - 2):
        if len(set(tail)) < len(tail):
            continue
        value = sum(ci * a * a for ci, a in zip(c[2:], tail))
        for a, b in pairs.get(-value, ()):
            if a not in tail and b not in tail:
                total += 1
    return total


@dataclass
class ColoringResult:
    """Result of a Rado-number search"""
    equation: Equation
    r: int
    n: int
    status: RadoStatus
    witness: Optional[Solution] = None
    certificate: List[int] = field(default_factory=list)
    nodes: int = 0
    budget: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "equation": self.equation.to_dict(),
            "r": self.r,
            "n": self.n,
            "status": self.status.value,
            "witness": list(self.witness) if self.witness else None,
            "certificate": self.certificate,
            "certificate_length": len(self.certificate),
            "nodes": self.nodes,
            "budget": self.budget,
        }


class _BudgetTripped(Exception):
    pass


def _propagate(
    colour: int,
    colours: Dict[int, int],
    domain: Dict[int, int],
    edges: Sequence[Solution],
    trail: List[Tuple[int, int]],
) -> bool:
    """Remove `colour` from the top vertex of every edge whose other vertices now share it"""
    for edge in edges:
        if all(colours[u] == colour for u in edge[:-1]):
            top = edge[-1]
            if domain[top] >> colour & 1:
                domain[top] &= ~(1 << colour)
                trail.append((top, colour))
                if domain[top] == 0:
                    return False
    return True


def _colour_component(
    vertices: Iterable[int],
    by_second: Dict[int, List[Solution]],
    r: int,
    budget: SearchBudget,
) -> Optional[Dict[int, int]]:
    """
    A colouring of the vertices with no monochromatic edge, or None.

    Vertices are coloured in ascending order; edges are sorted tuples indexed by
    their second-largest vertex, so when that vertex is coloured the largest one
    loses any colour that would close a monochromatic edge. Colours are tried in
    first-use order, which fixes the colour of the least vertex.
    """
    order = sorted(vertices)
    m = len(order)
    full = (1 << r) - 1
    domain = {v: full for v in order}
    colours: Dict[int, int] = {}
    trail: List[List[Tuple[int, int]]] = [[] for _ in range(m)]
    next_colour = [0] * m
    used = [-1] * (m + 1)

    i = 0
    while 0 <= i < m:
        v = order[i]
        for top, c in trail[i]:
            domain[top] |= 1 << c
        trail[i].clear()
        colours.pop(v, None)

        limit = min(r, used[i] + 2)
        placed = False
        while next_colour[i] < limit:
            colour = next_colour[i]
            next_colour[i] += 1
            budget.record_node()
            if not budget.can_proceed():
                raise _BudgetTripped()
            if not domain[v] >> colour & 1:
                continue
            colours[v] = colour
            if _propagate(colour, colours, domain, by_second.get(v, ()), trail[i]):
                placed = True
                used[i + 1] = max(used[i], colour)
                break
            for top, c in trail[i]:
                domain[top] |= 1 << c
            trail[i].clear()
            del colours[v]

        if placed:
            i += 1
            if i < m:
                next_colour[i] = 0
        else:
            next_colour[i] = 0
            i -= 1
    return colours if i == m else None


def _monochromatic(edges: Iterable[Solution], colours: Dict[int, int]) -> bool:
    return any(len({colours[u] for u in edge}) == 1 for edge in edges)


def rado_number(eq: Equation, r: int, n_max: int, budget: Optional[SearchBudget] = None) -> ColoringResult:
    """
    Smallest n <= n_max such that every r-colouring of [1, n] has a monochromatic
    distinct-entry solution of c . x^2 = 0.

    The hypergraph of solution sets grows with n; only the connected component
    of n (in the networkx co-occurrence graph) can change, so each step first
    tries to extend the previous colouring and otherwise re-colours that component.
    """
    require(eq.sum_zero, "c", "the coefficients must sum to zero")
    require(r >= 1, "r", "must be positive")
    require(n_max >= 1, "n_max", "must be positive")
    budget = budget or SearchBudget()

    graph = nx.Graph()
    by_second: Dict[int, List[Solution]] = defaultdict(list)
    certificate: Dict[int, int] = {}

    def result(status: RadoStatus, n: int, witness: Optional[Solution] = None) -> ColoringResult:
        return ColoringResult(
            equation=eq,
            r=r,
            n=n,
            status=status,
            witness=witness,
            certificate=[certificate[v] for v in sorted(certificate)],
            nodes=budget.nodes,
            budget=budget.to_dict(),
        )

    for n in range(1, n_max + 1):
        solutions = distinct_solutions_with_max(eq, n)
        graph.add_node(n)
        edges = sorted({tuple(sorted(sol)) for sol in solutions})
        for edge in edges:
            graph.add_edges_from((edge[0], u) for u in edge[1:])
            by_second[edge[-2]].append(edge)

        extended = False
        for colour in range(r):
            certificate[n] = colour
            if not _monochromatic(edges, certificate):
                extended = True
                break
        if extended:
            continue
        del certificate[n]

        component = nx.node_connected_component(graph, n)
        try:
            colouring = _colour_component(component, by_second, r, budget)
        except _BudgetTripped:
            logger.warning(f"Rado search stopped at n={n}: {budget.reason} after {budget.nodes} nodes")
            return result(RadoStatus.EXHAUSTED_BUDGET, n)
        if colouring is None:
            logger.info(f"Rado number for c={eq.coeffs}, r={r}: {n}")
            return result(RadoStatus.REGULAR_AT_N, n, solutions[0])
        certificate.update(colouring)

    return result(RadoStatus.NO_WITNESS_UP_TO_N, n_max)


@dataclass
class GreedyResult:
    """Maximal distinct-solution-free subset of [1, X]"""
    elements: List[int]
    X: int
    density: float
    seed: int

    def to_dict(self) -> Dict[str, Any]:
        return {"elements": self.elements, "X": self.X, "density": self.density, "seed": self.seed}


def solution_free_greedy(eq: Equation, X: int, order_seed: int) -> GreedyResult:
    """Insert 1..X in a seeded random order, skipping any x that would complete a solution"""
    require(eq.sum_zero, "c", "the coefficients must sum to zero")
    require(X >= 1, "X", "must be positive")
    order = np.random.default_rng(order_seed).permutation(np.arange(1, X + 1)).tolist()
    chosen: List[int] = []
    for x in order:
        if next(_solutions_through(eq, x, chosen, first_only=True), None) is None:
            chosen.append(x)
    elements = sorted(chosen)
    return GreedyResult(elements=elements, X=X, density=len(elements) / X, seed=order_seed)


@dataclass
class TransferenceReport:
    """Every quantity of the transference pipeline for one set A"""
    params: WParams
    size: int
    delta: float
    statistic: Any
    delta_sq_nb: float
    check_constant: float
    lifted_size: int
    mass: Any
    max_weight: Any
    decay: DecayReport
    counts: CountReport
    ktrivial: KTrivialReport
    heuristic: int

    @property
    def passes_density_check(self) -> bool:
        return float(self.statistic) >= self.check_constant * self.delta_sq_nb

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "size": self.size,
            "delta": self.delta,
            "statistic": self.statistic,
            "delta_sq_nb": self.delta_sq_nb,
            "check_constant": self.check_constant,
            "passes_density_check": self.passes_density_check,
            "lifted_size": self.lifted_size,
            "mass": self.mass,
            "max_weight": self.max_weight,
            "decay": self.decay.to_dict(),
            "counts": self.counts.to_dict(),
            "ktrivial": self.ktrivial.to_dict(),
            "heuristic": self.heuristic,
        }


def transference_statistic(
    A: Iterable[int],
    w: int,
    X: int,
    eq: Equation,
    K: Optional[SubspaceFamily] = None,
    grid_factor: Optional[int] = None,
    threads: Optional[int] = None,
) -> TransferenceReport:
    """select_b, then nu_b, f = 1_{A_b} nu_b, decay, counts and the K-trivial part"""
    A = sorted(set(A))
    require(len(A) >= 1, "A", "must be non-empty")
    require(eq.is_admissible, "c", "need at least three coefficients")
    K = K if K is not None else SubspaceFamily.pairs_equal(eq)
    require(K.equation == eq, "forms", "family belongs to a different equation")

    selection = select_b(A, w, X)
    p = selection.params
    nu = wtricked_majorant(p)
    lifted = lift_set(A, p)
    f = nu.restrict(lifted)
    statistic = f.total_mass()
    logger.info(f"transference: |A|={len(A)} b=({p.b1},{p.b2}) |A_b|={len(lifted)} Nb={p.Nb}")

    return TransferenceReport(
        params=p,
        size=len(A),
        delta=selection.delta,
        statistic=statistic,
        delta_sq_nb=selection.delta_sq_nb,
        check_constant=settings.check_constant,
        lifted_size=len(lifted),
        mass=nu.total_mass(),
        max_weight=nu.max_weight(),
        decay=decay_sup(p, grid_factor),
        counts=count_report(f, eq),
        ktrivial=ktrivial_weighted(f, p, K, threads),
        heuristic=p.Nb ** (eq.s - 1),
    )
