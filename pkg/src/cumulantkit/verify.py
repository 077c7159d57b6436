"""Identity-verification suites behind ``cumulantkit verify``.

Each suite runs a list of trials (one per derived seed) and collects
exact-comparison checks into a :class:`VerifySuiteReport`.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import oracles
from .cumulants import (
    cumulant_dot,
    cumulants_dot,
    cumulants_from_moments,
    mixed_cumulant,
    recurrence_rhs,
)
from .exactalg import Poly, format_rational
from .genfun import (
    flow_check,
    moment_series,
    mu_compose,
    mu_vector,
    muraki_compose,
    ode_residual,
    r_transform,
)
from .independence import (
    FLAVORS,
    UNIVERSAL,
    dot_functional,
    dot_moment,
    phi_t,
    prop51_expansion,
    subset_expansion,
    sum_functional,
    sum_moment,
)
from .moments import MomentFunctional, random_functional, word_key, words
from .partitions import (
    enumerate_monotone_partitions,
    enumerate_partitions,
    highest_coefficient,
    is_crossing,
    is_interval,
)

SUITES = (
    "consistency",
    "mk3",
    "extensivity",
    "prop51",
    "recurrence",
    "muraki",
    "flow",
    "ode",
    "free-relation",
    "counts",
    "dot-associativity",
)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"


@dataclass
class VerifySuiteReport:
    suite: str
    parameters: dict
    checks: list[Check] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"

    @property
    def counterexample(self) -> str | None:
        for c in self.checks:
            if not c.ok:
                return f"{c.name}: {c.detail}"
        return None

    def to_json(self, with_time: bool = False) -> dict:
        d = {
            "suite": self.suite,
            "parameters": self.parameters,
            "status": self.status,
            "checks": [dict(asdict(c), status=c.status) for c in self.checks],
            "counterexample": self.counterexample,
        }
        if with_time:
            d["wall_time"] = round(self.wall_time, 3)
        return d

    def table(self) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.parameters.items())
        width = max([len(c.name) for c in self.checks] + [5])
        lines = [f"suite: {self.suite}  {params}", f"{'check'.ljust(width)}  status  detail"]
        for c in self.checks:
            lines.append(f"{c.name.ljust(width)}  {c.status.ljust(6)}  {c.detail}")
        passed = sum(c.ok for c in self.checks)
        lines.append(f"result: {self.status} ({passed}/{len(self.checks)} checks)")
        if self.counterexample:
            lines.append(f"first counterexample: {self.counterexample}")
        return "\n".join(lines)


def trial_seeds(seed: int, trials: int) -> list[int]:
    """Per-trial seeds drawn from one generator seeded with ``seed``."""
    rng = random.Random(seed)
    return [rng.randrange(2**31) for _ in range(trials)]


def _first_mismatch(pairs) -> str | None:
    for w, a, b in pairs:
        if a != b:
            return f"word {word_key(w)}: {a} != {b}"
    return None


def _check(name: str, mismatch: str | None, ok_detail: str = "") -> Check:
    return Check(name, mismatch is None, mismatch or ok_detail)


# ---------------------------------------------------------------------------
# per-trial bodies (top level so they can run in worker processes)


def trial_consistency(seed: int, r: int, order: int, flavors) -> list[Check]:
    phi = random_functional(r, order, seed)
    out = []
    for fl in flavors:
        a, b = cumulants_dot(fl, phi, order), cumulants_from_moments(fl, phi, order)
        out.append(_check(
            f"seed {seed} {fl} dot=partition",
            _first_mismatch((w, a.table[w], b.table[w]) for w in words(r, order)),
        ))
    return out


def _two_family(seed: int, r: int, order: int) -> dict:
    rng = random.Random(seed)
    return {1: random_functional(r, order, rng.randrange(2**31)), 2: random_functional(r, order, rng.randrange(2**31))}


def mixed_words(r: int, order: int, seed: int, samples: int = 8) -> list[tuple]:
    """Two-label words: every X/Y word (var 1 of each label) plus seeded r-variable samples."""
    out = []
    for n in range(2, order + 1):
        for labels in itertools.product((1, 2), repeat=n):
            if len(set(labels)) == 2:
                out.append(tuple((lab, 1) for lab in labels))
    rng = random.Random(seed)
    letters = [(lab, v) for lab in (1, 2) for v in range(1, r + 1)]
    while r > 1 and samples:
        n = rng.randint(2, order)
        lw = tuple(rng.choice(letters) for _ in range(n))
        if len({lab for lab, _ in lw}) == 2:
            out.append(lw)
            samples -= 1
    return out


def monotone_counterexample() -> tuple[Fraction, Fraction]:
    """K_3(X, Y, X) for monotone X < Y with m(X)=1, m(X^2)=2, m(Y)=1, and the closed form."""
    X = MomentFunctional(1, 3, {(1,): Fraction(1), (1, 1): Fraction(2), (1, 1, 1): Fraction(3)})
    Y = MomentFunctional(1, 3, {(1,): Fraction(1), (1, 1): Fraction(5), (1, 1, 1): Fraction(7)})
    fam = {1: X, 2: Y}
    k3 = mixed_cumulant("monotone", fam, ((1, 1), (2, 1), (1, 1)))
    closed = Fraction(1, 2) * (X.moment((1, 1)) * Y.moment((1,)) - X.moment((1,)) * Y.moment((1,)) * X.moment((1,)))
    return k3, closed


def trial_mk3(seed: int, r: int, order: int, flavors) -> list[Check]:
    fam = _two_family(seed, r, order)
    out = []
    for fl in flavors:
        if fl == "monotone":
            k3 = mixed_cumulant(fl, fam, ((1, 1), (2, 1), (1, 1)))
            X, Y = fam[1], fam[2]
            closed = Fraction(1, 2) * (X.moment((1, 1)) * Y.moment((1,)) - X.moment((1,)) ** 2 * Y.moment((1,)))
            ok = k3 == closed
            out.append(Check(f"seed {seed} monotone K3(X,Y,X) closed form", ok, f"{k3} vs {closed}"))
            continue
        bad = None
        for lw in mixed_words(r, order, seed):
            k = mixed_cumulant(fl, fam, lw)
            if k != 0:
                bad = f"word {lw}: cumulant {k}"
                break
        out.append(_check(f"seed {seed} {fl} mixed cumulants vanish", bad))
    return out


def trial_extensivity(seed: int, r: int, order: int, flavors) -> list[Check]:
    phi = random_functional(r, order, seed)
    out = []
    for fl in flavors:
        base = cumulants_dot(fl, phi, order)
        for N in (2, 3):
            psi = dot_functional(fl, phi, N, order)
            cache: dict = {}
            out.append(_check(
                f"seed {seed} {fl} K(N.X)=N K(X) N={N}",
                _first_mismatch(
                    (w, cumulant_dot(fl, psi, w, cache), N * base.table[w]) for w in words(r, order)
                ),
            ))
    return out


def trial_dot_associativity(seed: int, r: int, order: int, flavors) -> list[Check]:
    phi = random_functional(r, order, seed)
    out = []
    for fl in flavors:
        for M, N in itertools.product((1, 2), repeat=2):
            inner = dot_functional(fl, phi, M, order)
            out.append(_check(
                f"seed {seed} {fl} N.(M.X)=(MN).X M={M} N={N}",
                _first_mismatch(
                    (w, dot_moment(fl, inner, w, N), dot_moment(fl, phi, w, M * N)) for w in words(r, order)
                ),
            ))
    return out


def trial_prop51(seed: int, r: int, order: int) -> list[Check]:
    fam = _two_family(seed, r, order)
    cache: dict = {}
    out = [_check(
        f"seed {seed} subset expansion = monotone (X+Y) moments",
        _first_mismatch((w, prop51_expansion(fam, w), sum_moment("monotone", fam, w, cache)) for w in words(r, order)),
    )]
    phi = fam[1]
    pt = {w: phi_t("monotone", phi, w, "t") for w in words(r, order)}
    pt[()] = Poly.const(1, ("t",))
    ps = {w: p.subs(t=Poly.var("s")) for w, p in pt.items()}
    t_plus_s = Poly.var("t") + Poly.var("s")
    out.append(_check(
        f"seed {seed} phi_(t+s) semigroup",
        _first_mismatch(
            (w, pt[w].subs(t=t_plus_s), subset_expansion(pt.__getitem__, ps.__getitem__, w, one=Poly.const(1)))
            for w in words(r, order)
        ),
    ))
    return out


def trial_recurrence(seed: int, r: int, order: int) -> list[Check]:
    phi = random_functional(r, order, seed)
    K = cumulants_from_moments("monotone", phi, order)
    pt = {w: phi_t("monotone", phi, w, "t") for w in words(r, order)}
    pt[()] = Poly.const(1, ("t",))
    out = []
    for form in (1, 2):
        out.append(_check(
            f"seed {seed} d/dt phi_t recurrence form {form}",
            _first_mismatch(
                (w, pt[w].diff("t"), recurrence_rhs(K.cumulant, pt.__getitem__, w, form)) for w in words(r, order)
            ),
        ))
    return out


def trial_muraki(seed: int, r: int, degree: int) -> list[Check]:
    fam = _two_family(seed, r, degree)
    lhs = moment_series(sum_functional("monotone", fam, degree), degree)
    rhs = muraki_compose(moment_series(fam[1], degree), moment_series(fam[2], degree))
    w = lhs.difference(rhs)
    out = [Check(f"seed {seed} M_(X+Y) = M_Y M_X(z M_Y)", w is None, "" if w is None else f"word {word_key(w)}")]
    mus = mu_vector(lhs)
    composed = mu_compose(mu_vector(moment_series(fam[1], degree)), mu_vector(moment_series(fam[2], degree)))
    bad = next((f"component {i + 1}" for i, (a, b) in enumerate(zip(mus, composed)) if a != b), None)
    out.append(_check(f"seed {seed} mu_(X+Y) = mu_X o mu_Y", bad))
    return out


def trial_flow(seed: int, r: int, degree: int) -> list[Check]:
    rep = flow_check(random_functional(r, degree, seed), degree)
    detail = "" if rep.ok else f"component {rep.first_difference[0]}, word {word_key(rep.first_difference[1])}"
    return [Check(f"seed {seed} mu(t+s) = mu(t) o mu(s)", rep.ok, detail)]


def trial_ode(seed: int, r: int, degree: int) -> list[Check]:
    res = ode_residual(random_functional(r, degree, seed), degree)
    detail = "" if res.is_zero() else f"nonzero residual at {word_key(min(res.coeffs, key=lambda w: (len(w), w)))}"
    return [Check(f"seed {seed} dM/dt = M K(z M)", res.is_zero(), detail)]


def trial_free_relation(seed: int, r: int, degree: int) -> list[Check]:
    phi = random_functional(r, degree, seed)
    R = r_transform(phi, degree)
    KF = cumulants_from_moments("free", phi, degree)
    out = [_check(
        f"seed {seed} R-transform = free cumulants",
        _first_mismatch((w, R[w], KF.table[w]) for w in words(r, degree)),
    )]
    if degree >= 2:
        out.append(_check(
            f"seed {seed} r_2 = m_2 - m_1^2",
            _first_mismatch(
                ((i, j), R[(i, j)], phi.moment((i, j)) - phi.moment((i,)) * phi.moment((j,)))
                for i in range(1, r + 1) for j in range(1, r + 1)
            ),
        ))
    return out


def counts_checks(n: int, monotone_n: int = 6) -> list[Check]:
    out = []
    for k in range(1, n + 1):
        brute = oracles.brute_set_partitions(k)
        for kind, keep in (
            ("all", lambda p: True),
            ("noncrossing", lambda p: not oracles.brute_crossing(p)),
            ("interval", oracles.brute_interval),
        ):
            got = {oracles.canonical(p.blocks) for p in enumerate_partitions(k, kind)}
            want = {p for p in brute if keep(p)}
            ok = got == want and len(enumerate_partitions(k, kind)) == len(want)
            out.append(Check(f"n={k} {kind}", ok, f"{len(got)} vs brute {len(want)}"))
        if k <= monotone_n:
            got = [op.sequence for op in enumerate_monotone_partitions(k)]
            want = oracles.brute_monotone_partitions(k)
            out.append(Check(f"n={k} monotone", set(got) == want and len(got) == len(want),
                             f"{len(got)} vs brute {len(want)}"))
            bad = [
                (fl, str(p))
                for p in enumerate_partitions(k, "all")
                for fl, member in (("tensor", True), ("free", not is_crossing(p)), ("boolean", is_interval(p)))
                if highest_coefficient(fl, p) != (1 if member else 0)
            ]
            out.append(Check(f"n={k} highest coefficients", not bad, str(bad[0]) if bad else ""))
    return out


# ---------------------------------------------------------------------------


def _run_trials(fn, seeds, args, threads: int) -> list[Check]:
    if threads > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(fn, seeds, *[[a] * len(seeds) for a in args]))
    else:
        results = [fn(s, *args) for s in seeds]
    return [c for chunk in results for c in chunk]


def run_suite(
    suite: str,
    *,
    r: int = 2,
    degree: int | None = None,
    seed: int = 42,
    trials: int = 3,
    flavor: str | None = None,
    n: int = 8,
    threads: int = 1,
) -> VerifySuiteReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    start = time.perf_counter()
    if suite == "counts":
        report = VerifySuiteReport(suite, {"n": n}, counts_checks(n, min(n, 6)))
        report.wall_time = time.perf_counter() - start
        return report
    default_degree = {"muraki": 6, "flow": 5, "ode": 5, "free-relation": 5}.get(suite, 4)
    degree = default_degree if degree is None else degree
    if flavor is None:
        flavors = FLAVORS if suite != "mk3" else UNIVERSAL
    else:
        flavors = (flavor,)
    seeds = trial_seeds(seed, trials)
    params = {"r": r, "degree": degree, "seed": seed, "trials": trials}
    if suite in ("consistency", "mk3", "extensivity", "dot-associativity"):
        params["flavors"] = ",".join(flavors)
    fn, args = {
        "consistency": (trial_consistency, (r, degree, flavors)),
        "mk3": (trial_mk3, (r, degree, flavors)),
        "extensivity": (trial_extensivity, (r, degree, flavors)),
        "dot-associativity": (trial_dot_associativity, (r, degree, flavors)),
        "prop51": (trial_prop51, (r, degree)),
        "recurrence": (trial_recurrence, (r, degree)),
        "muraki": (trial_muraki, (r, degree)),
        "flow": (trial_flow, (r, degree)),
        "ode": (trial_ode, (r, degree)),
        "free-relation": (trial_free_relation, (r, degree)),
    }[suite]
    checks = _run_trials(fn, seeds, args, threads)
    if suite == "mk3" and "monotone" in flavors:
        k3, closed = monotone_counterexample()
        ok = k3 == closed == Fraction(1, 2)
        checks.append(Check(
            "monotone K3(X,Y,X) != 0 (m(X)=1, m(X^2)=2, m(Y)=1)", ok,
            f"K3 = {format_rational(k3)}, closed form {format_rational(closed)}",
        ))
    report = VerifySuiteReport(suite, params, checks)
    report.wall_time = time.perf_counter() - start
    return report
