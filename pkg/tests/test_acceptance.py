"""One test per acceptance criterion; each prints a PASS/FAIL line.

The lines are collected and repeated in the terminal summary, so
``pytest tests/test_acceptance.py`` shows them without ``-s``.
"""

import time
from fractions import Fraction as F

import order4_formulas
from conftest import ACCEPTANCE_LINES
from cumulantkit.cumulants import CumulantFunctional, cumulants_from_moments, mixed_cumulant
from cumulantkit.genfun import a_transform, format_laurent
from cumulantkit.independence import FLAVORS, UNIVERSAL
from cumulantkit.moments import MomentFunctional, random_functional, word_key, words
from cumulantkit.verify import (
    counts_checks,
    monotone_counterexample,
    trial_consistency,
    trial_dot_associativity,
    trial_extensivity,
    trial_flow,
    trial_free_relation,
    trial_mk3,
    trial_muraki,
    trial_ode,
    trial_seeds,
)

SEED = 20240


def record(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def run_checks(fn, seeds, *args):
    checks = [c for s in seeds for c in fn(s, *args)]
    bad = next((c for c in checks if not c.ok), None)
    return checks, bad


def summary(checks, bad, elapsed):
    if bad:
        return f"{bad.name}: {bad.detail}"
    return f"{len(checks)} checks, {elapsed:.1f}s"


def test_criterion_01_order4_golden():
    start = time.perf_counter()
    first = None
    total = 0
    for seed in trial_seeds(SEED, 25):
        phi = random_functional(4, 4, seed)
        K = cumulants_from_moments("monotone", phi, 4)
        for w in words(4, 4):
            total += 1
            if K.cumulant(w) != order4_formulas.monotone_cumulant(phi.moment, w) and first is None:
                first = f"seed {seed} word {word_key(w)}"
    elapsed = time.perf_counter() - start
    ok = first is None and elapsed < 5
    record(1, "monotone K1..K4 match the order-four formulas on 25 functionals, r=4", ok,
           first or f"{total} cumulants, {elapsed:.2f}s < 5s")


def test_criterion_02_counterexample():
    k3, closed = monotone_counterexample()
    fam = {1: random_functional(1, 3, 5), 2: random_functional(1, 3, 6)}
    X, Y = fam[1], fam[2]
    general = mixed_cumulant("monotone", fam, ((1, 1), (2, 1), (1, 1)))
    formula = F(1, 2) * (X.moment((1, 1)) * Y.moment((1,)) - X.moment((1,)) ** 2 * Y.moment((1,)))
    ok = k3 == closed == F(1, 2) and general == formula
    record(2, "K3^M(X,Y,X) = (phi(X^2)phi(Y) - phi(X)phi(Y)phi(X))/2", ok,
           f"K3 = {k3} for m(X)=1, m(X^2)=2, m(Y)=1; seeded case {general}")


def test_criterion_03_dual_path():
    start = time.perf_counter()
    checks, bad = run_checks(trial_consistency, trial_seeds(SEED, 25), 2, 5, FLAVORS)
    elapsed = time.perf_counter() - start
    record(3, "dot route = partition route, 4 flavors, r=2, length <= 5, 25 seeds",
           bad is None and elapsed < 180, summary(checks, bad, elapsed) + ", limit 180s")


def test_criterion_04_mixed_vanishing():
    start = time.perf_counter()
    checks, bad = run_checks(trial_mk3, trial_seeds(SEED, 10), 2, 5, UNIVERSAL + ("monotone",))
    k3, _ = monotone_counterexample()
    ok = bad is None and k3 == F(1, 2)
    record(4, "mixed cumulants vanish (tensor/free/boolean), monotone K3(X,Y,X) = 1/2", ok,
           summary(checks, bad, time.perf_counter() - start))


def test_criterion_05_extensivity():
    start = time.perf_counter()
    checks, bad = run_checks(trial_extensivity, trial_seeds(SEED, 3), 2, 4, FLAVORS)
    record(5, "K(N.X) = N K(X) for N in {2,3}, 4 flavors, length <= 4", bad is None,
           summary(checks, bad, time.perf_counter() - start))


def test_criterion_06_associativity():
    start = time.perf_counter()
    checks, bad = run_checks(trial_dot_associativity, trial_seeds(SEED, 3), 2, 4, FLAVORS)
    record(6, "N.(M.X) = (MN).X for (M,N) in {1,2}^2, 4 flavors, length <= 4", bad is None,
           summary(checks, bad, time.perf_counter() - start))


def test_criterion_07_muraki():
    start = time.perf_counter()
    checks, bad = run_checks(trial_muraki, trial_seeds(SEED, 10), 2, 6)
    elapsed = time.perf_counter() - start
    record(7, "M_(X+Y) = M_Y M_X(z M_Y) to degree 6, r=2, 10 seeds", bad is None and elapsed < 120,
           summary(checks, bad, elapsed) + ", limit 120s")


def test_criterion_08_flow_and_ode():
    start = time.perf_counter()
    seeds = trial_seeds(SEED, 10)
    checks, bad = run_checks(trial_flow, seeds, 2, 5)
    more, bad2 = run_checks(trial_ode, seeds, 2, 5)
    bad = bad or bad2
    record(8, "mu(t+s) = mu(t) o mu(s) and zero ODE residual, degree 5, r=2, 10 seeds", bad is None,
           summary(checks + more, bad, time.perf_counter() - start))


def test_criterion_09_free_relation():
    start = time.perf_counter()
    checks, bad = run_checks(trial_free_relation, trial_seeds(SEED, 10), 2, 5)
    phi = MomentFunctional(1, 2, {(1,): F(3), (1, 1): F(10)})
    closed = cumulants_from_moments("free", phi).cumulant((1, 1)) == 10 - 9
    record(9, "R-transform = free cumulants to length 5; r2 = m2 - m1^2", bad is None and closed,
           summary(checks, bad, time.perf_counter() - start))


def test_criterion_10_counts():
    start = time.perf_counter()
    checks = counts_checks(8, 6)
    bad = next((c for c in checks if not c.ok), None)
    record(10, "enumerations match brute force (n <= 8), monotone filter and indicators (n <= 6)",
           bad is None, summary(checks, bad, time.perf_counter() - start))


def test_criterion_11_arcsine():
    K = CumulantFunctional("monotone", 1, 6, {(1,) * n: F(int(n == 2)) for n in range(1, 7)})
    A = a_transform(K)
    record(11, "A-transform of k2=1, others 0", A == {-1: F(-1)}, f"A(z) = {format_laurent(A)}")
