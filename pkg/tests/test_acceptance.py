"""One test per primary acceptance criterion, zero tolerance, exact arithmetic.

Each test records a PASS/FAIL line (printed in the terminal summary) and then
asserts the same condition, so a failing criterion fails loudly.
"""

import itertools
import json
import math
import random
import time
from fractions import Fraction

from girylab import algebras as alg
from girylab import scvx, stdspace
from girylab.grid import grid_dists, grid_weights, random_dist, two_level_grid
from girylab.measure import CarrierDist, join
from girylab.serialize import amp_from_json, amp_to_json, dist_from_json, dist_to_json, tree_from_json, tree_to_json
from girylab.suites import SUITES, SuiteConfig, amplitude_cases, run_suite


def oracle_grid_count(support, max_den):
    """Count weight vectors on ``{0..support-1}`` with entries in the grid, by brute force."""
    values = [0] + list(grid_weights(max_den))
    return sum(1 for v in itertools.product(values, repeat=support) if sum(v) == 1)


def summary(report):
    return f"{report.cases} cases, {report.failure_count} failures, {report.wall_time:.2f}s"


def test_monad_laws(verdict):
    assert len(grid_dists(4, 4)) == oracle_grid_count(4, 4) == 51
    rep = run_suite("monad-laws", SuiteConfig(random_cases=1000))
    laws = {law["law"]: law for law in rep.laws}
    assoc = laws["join-assoc"]
    ok = rep.ok and rep.wall_time < 10 and assoc["cases"] >= 1000 and laws["join-unit-left"]["cases"] >= 51 + 1000
    verdict("monad-law suite", ok, summary(rep))
    assert ok


def test_eps_N_algebra(verdict):
    h = alg.builtin_algebra("eps_N")
    unit = alg.check_unit_law(h, range(21))
    assoc = None
    count = 0
    for Q in two_level_grid(grid_dists(4, 4), 4):
        count += 1
        assoc = alg.check_eps_N_equations(Q, assoc)
        alg.check_assoc_law(h, Q, assoc)
    # outer measures of size 1 or 2 over the 51 inner grid measures
    expected = 51 + math.comb(51, 2) * (oracle_grid_count(2, 4) - 2)
    ok = unit.ok and unit.cases == 21 and assoc.ok and count == expected
    verdict("eps_N algebra suite", ok, f"unit {unit.cases}, two-level {count}, failures {unit.failure_count + assoc.failure_count}")
    assert ok


def test_ns_equivalence(verdict):
    ok = True
    parts = []
    for n in range(1, 6):
        r = scvx.affine_iff_monotone(n)
        # oracle count: monotone maps by direct filtering
        direct = sum(all(f[i] <= f[i + 1] for i in range(n - 1)) for f in itertools.product(range(n), repeat=n))
        good = r.ok and r.detail["functions"] == n**n and r.detail["monotone"] == direct == math.comb(2 * n - 1, n)
        ok &= good
        parts.append(f"n={n}:{r.detail['monotone']}/{n**n}")
    verdict("monotone iff subset-min preserving", ok, ", ".join(parts))
    assert ok


def test_factorization_and_naturality(verdict):
    rep = run_suite("phi-commutes", SuiteConfig())
    laws = {law["law"]: law for law in rep.laws}
    commute = laws["phi-commutes"]
    expected = 126 * len(grid_dists(5, 4))
    ok = rep.ok and commute["maps"] == 126 and commute["cases"] == expected
    ok &= laws["factorization"]["cases"] == sum(math.comb(2 * n - 1, n) for n in range(1, 6))
    verdict("factorization m = phi . eps_N and naturality", ok, summary(rep))
    assert ok


def test_permutation_min(verdict):
    rep = run_suite("permutation-min", SuiteConfig())
    ok = rep.ok and rep.cases == math.factorial(4) * oracle_grid_count(4, 4)
    verdict("permutation identity", ok, summary(rep))
    assert ok


def test_builtin_algebras(verdict):
    rep = run_suite("algebra-laws", SuiteConfig())
    by = {(law["law"], law["subject"]): law for law in rep.laws}
    names = ["eps_n(3)", "eps_two_min", "eps_two_max", "eps_interval", "eps_rinf", "eps_coeq3"]
    ok = rep.ok
    for name in names:
        for law in ("unit", "assoc", "affine"):
            entry = by.get((law, name))
            ok &= entry is not None and entry["cases"] > 0 and entry["failures"] == 0
    conj = by[("swap-conjugation", "eps_two")]
    ok &= conj["cases"] == oracle_grid_count(2, 4) and conj["failures"] == 0
    verdict("built-in barycenter algebras", ok, summary(rep))
    assert ok


def test_divergence(verdict):
    p, r = scvx.divergent_instance()
    assert p.weight(0) == Fraction(1, 2) and r(0) == 2 and p.weight(3) == Fraction(1, 16) and r(3) == 16
    total = scvx.affine_sum(scvx.builtin_space("r_inf"), p, r)
    evaluates_inf = total is scvx.INF
    j_report = scvx.check_j_divergent()
    ok = evaluates_inf and j_report.ok
    verdict(
        "divergence semantics",
        ok,
        f"sum is {'inf' if evaluates_inf else total}; j(sum)={j_report.detail['lhs']}, sum of j(r_i)={j_report.detail['rhs']}",
    )
    assert evaluates_inf
    assert j_report.ok, "j is not affine on the divergent instance: j(inf)=0 but every r_i is finite"


def test_refinement(verdict):
    start = time.perf_counter()
    rep = run_suite("refinement", SuiteConfig())
    trees = next(law for law in rep.laws if law["law"] == "trees")
    elapsed = time.perf_counter() - start
    ok = rep.ok and trees["trees"] == 8 * 6 * 3 and elapsed < 30
    verdict("refinement suite", ok, summary(rep))
    assert ok


def test_amplitude(verdict):
    rep = run_suite("amplitude", SuiteConfig())
    laws = {law["law"] for law in rep.laws}
    ok = rep.ok and {"l2-normalization", "phase-invariance", "combine-factorization"} <= laws
    verdict("amplitude suite", ok, summary(rep))
    assert ok


def _stable(to, frm, x):
    text = json.dumps(to(x))
    back = frm(json.loads(text))
    return back == x and json.dumps(to(back)) == text


def test_cli_round_trip(verdict):
    rng = random.Random(0)
    dists = list(grid_dists(4)) + list(grid_dists(5)) + [random_dist(rng) for _ in range(1000)]
    for Q in itertools.islice(two_level_grid(grid_dists(3), 4), 200):
        dists.append(join(Q))
    amps = amplitude_cases()
    trees = [
        stdspace.random_tree(random.Random(seed), size, depth)
        for seed in range(3)
        for size in range(1, 9)
        for depth in range(1, 7)
    ]
    bad = [x for x in dists if not _stable(dist_to_json, dist_from_json, x)]
    bad += [x for x in amps if not _stable(amp_to_json, amp_from_json, x)]
    bad += [x for x in trees if not _stable(tree_to_json, tree_from_json, x)]
    ok = not bad
    verdict("serialize/parse round trip", ok, f"{len(dists)} distributions, {len(amps)} amplitude lists, {len(trees)} trees")
    assert not bad


def test_every_suite_is_registered():
    expected = {"monad-laws", "scvx-axioms", "algebra-laws", "ns-equivalence", "phi-commutes", "permutation-min", "refinement", "amplitude"}
    assert expected <= set(SUITES)
    assert CarrierDist.dirac(1).support == [1]
