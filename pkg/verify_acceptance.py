"""
Desk-scale acceptance run for rothsq.

Every check prints one status line and the run ends with a summary; the
process exits non-zero when any check fails.
"""

import itertools
import math
import statistics
import sys
import time

import numpy as np

from rothsq.core.arith import SmoothnessContext, compute_W, prime_pi, sigma_count
from rothsq.core.counting import Equation, SubspaceFamily, count_brute, count_dft, count_ktrivial, telescope_check
from rothsq.core.expsum import decay_sup, decay_sup_of, gauss_table, major_arc_sweep
from rothsq.core.majorant import WParams, indicator, plain_majorant, select_b, wtricked_majorant
from rothsq.core.moments import large_spectrum, moment_even, restriction_ratio
from rothsq.core.regularity import RadoStatus, rado_number

SEED = 20240601
QUINTIC = Equation((1, 1, 1, 1, -4))


def check_gauss_magnitude():
    p = WParams.default(1000, 5)
    rows = gauss_table(p, 500)
    worst = max(row["max_abs_S"] - row["bound"] for row in rows)
    print(f"   {len(rows)} (q, a) pairs, max |S| - 2 sqrt(q) = {worst:.3e}")
    return worst <= 1e-9


def check_smooth_vanishing():
    worst = 0.0
    for w in (3, 5):
        rows = gauss_table(WParams.default(1000, w), 200)
        smooth = [row["residual"] for row in rows if row["smooth"] and row["q"] >= 2]
        worst = max(worst, max(smooth))
    print(f"   max residual over smooth q = {worst:.3e}")
    return worst <= 1e-9


def check_sigma_structure():
    for w in (3, 5, 7):
        ctx = SmoothnessContext.for_cutoff(w)
        allowed = {0, 2 ** (prime_pi(w) + 1)}
        for b2 in range(1, ctx.W + 1):
            if math.gcd(b2, ctx.W) == 1 and sigma_count(ctx.W, b2) not in allowed:
                print(f"   w={w} b2={b2}: sigma outside {sorted(allowed)}")
                return False
    return True


def check_counting_oracles():
    rng = np.random.default_rng(SEED)
    for instance in range(50):
        s = int(rng.integers(3, 6))
        coeffs = tuple(int(c) * int(rng.choice([-1, 1])) for c in rng.integers(1, 6, s))
        N = int(rng.integers(1, 65))
        fs = [{n: int(v) for n, v in enumerate(rng.integers(-3, 4, N), start=1)} for _ in range(s)]
        eq = Equation(coeffs)
        brute, dft = count_brute(fs, eq), count_dft(fs, eq)
        if brute != dft:
            print(f"   instance {instance}: c={coeffs} N={N} brute={brute} dft={dft}")
            return False
    return True


def check_even_moment():
    for N in range(1, 257):
        if moment_even(indicator(N), 2) != (2 * N ** 3 + N) // 3:
            print(f"   closed form fails at N={N}")
            return False
    for N in range(1, 21):
        brute = sum(1 for x in itertools.product(range(N), repeat=4) if x[0] + x[1] == x[2] + x[3])
        if brute != moment_even(indicator(N), 2):
            print(f"   brute-force count disagrees at N={N}")
            return False
    return True


def check_decay_trend():
    scaled = []
    for w in (3, 5, 7):
        W = compute_W(w)
        X = math.isqrt(W << 18)
        report = decay_sup(WParams.default(X, w))
        scaled.append(report.sup_ratio * math.sqrt(w))
        print(f"   w={w} X={X} Nb={report.N}: sup_ratio={report.sup_ratio:.4f} (x sqrt(w) = {scaled[-1]:.4f})")
    plain = decay_sup_of(plain_majorant(50), 2500, 16).sup_ratio
    print(f"   plain majorant at X=50: sup_ratio={plain:.4f}")
    return max(scaled) / min(scaled) < 4 and plain >= 0.4


def check_major_arc_error():
    ratios = []
    for X in (100, 300, 1000):
        samples = major_arc_sweep(WParams.default(X, 3), qmax=10, points=50)
        ratios.extend(s.ratio for s in samples)
    spread = max(ratios) / statistics.median(ratios)
    print(f"   {len(ratios)} samples, fitted constant {max(ratios):.4f}, max/median = {spread:.2f}")
    return spread < 10


def check_ktrivial_growth():
    family = SubspaceFamily.pairs_equal(QUINTIC)
    xs = [50, 100, 200, 400]
    counts = [count_ktrivial(X, family) for X in xs]
    slope = float(np.polyfit(np.log(xs), np.log(counts), 1)[0])
    print(f"   counts {counts}, log-log slope {slope:.3f}")
    return slope <= 2.7


def check_restriction_stability():
    ratios = [restriction_ratio(WParams.default(X, 3), 5, 20, SEED) for X in (100, 200, 400)]
    print(f"   ratios {[round(r, 4) for r in ratios]}")
    return max(ratios) / min(ratios) <= 5


def check_large_spectrum():
    deltas, scales = (0.1, 0.2, 0.4), (100, 300, 1000)
    values = {delta: [] for delta in deltas}
    for X in scales:
        p = WParams.default(X, 3)
        nu = wtricked_majorant(p)
        for delta in deltas:
            values[delta].append(large_spectrum(nu, delta, p.Nb).normalized(0.5))
    fitted = max(max(row) for row in values.values())
    spread = max(max(row) / min(row) for row in values.values())
    print(f"   {len(deltas) * len(scales)} (delta, X) points, fitted constant {fitted:.4f}, spread across X = {spread:.2f}")
    return spread < 10


def check_density_statistic():
    ok = True
    for delta in (1, 0.5, 0.25):
        selection = select_b(range(1, int(delta * 400) + 1), 3, 400)
        passed = float(selection.statistic) >= 0.1 * selection.delta_sq_nb
        print(f"   delta={delta}: statistic/N_b = {selection.normalized:.4f} -> {'pass' if passed else 'fail'}")
        ok = ok and passed
    return ok


def _first_distinct_solution(eq, n_max):
    for n in range(1, n_max + 1):
        for rest in itertools.combinations(range(1, n), eq.s - 1):
            if any(eq.quadratic(xs) == 0 for xs in itertools.permutations(rest + (n,))):
                return n
    return None


def check_rado_exactness():
    result = rado_number(QUINTIC, 1, 1000)
    expected = _first_distinct_solution(QUINTIC, 1000)
    print(f"   search: {result.status.value} at n={result.n}; scan: {expected}")
    return result.status is RadoStatus.REGULAR_AT_N and result.n == expected


def check_telescoping():
    rng = np.random.default_rng(SEED)
    for _ in range(10):
        f = {n: int(v) for n, v in enumerate(rng.integers(-5, 6, 20), start=1)}
        g = {n: int(v) for n, v in enumerate(rng.integers(-5, 6, 20), start=1)}
        tuples = rng.integers(1, 21, size=(1000, 5)).tolist()
        if not telescope_check(f, g, tuples):
            return False
    return True


CHECKS = [
    ("Gauss-sum magnitude", check_gauss_magnitude),
    ("Smooth vanishing", check_smooth_vanishing),
    ("Sigma structure", check_sigma_structure),
    ("Counting oracle equivalence", check_counting_oracles),
    ("Even-moment closed form", check_even_moment),
    ("Fourier decay trend", check_decay_trend),
    ("Major-arc error", check_major_arc_error),
    ("K-trivial growth", check_ktrivial_growth),
    ("Restriction ratio stability", check_restriction_stability),
    ("Large-spectrum bound", check_large_spectrum),
    ("Density statistic", check_density_statistic),
    ("Rado r=1 exactness", check_rado_exactness),
    ("Telescoping identity", check_telescoping),
]


if __name__ == "__main__":
    print("🚀 Starting acceptance run\n")
    failures = 0
    for name, check in CHECKS:
        print(f"🔍 {name}...")
        started = time.monotonic()
        try:
            passed = check()
        except Exception as e:
            print(f"❌ {name} Error: {e}")
            failures += 1
            continue
        elapsed = time.monotonic() - started
        if passed:
            print(f"✅ {name} Passed ({elapsed:.1f}s)")
        else:
            print(f"❌ {name} Failed ({elapsed:.1f}s)")
            failures += 1
    print(f"\n{len(CHECKS) - failures}/{len(CHECKS)} checks passed")
    sys.exit(1 if failures else 0)
