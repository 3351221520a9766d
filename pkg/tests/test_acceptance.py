"""Exit criteria. Each test records one PASS/FAIL line in the terminal summary."""

import time

import numpy as np

from noisy_indicators import (
    EvaluatedSolution,
    SolutionSet,
    UtilityModel,
    analytic_r2_linear_2d,
    igd,
    igd_plus,
    igd_plus_distance,
    n_igd,
    n_igd_plus,
    n_r2,
    r2,
    sample_weights,
    selection_errors,
)
from noisy_indicators.cli import main
from noisy_indicators.diagnostics import mean_regret
from noisy_indicators.experiment import ExperimentConfig, run_noise_sweep
from noisy_indicators.igd import euclidean_distances, igd_plus_distances
from noisy_indicators.utility import default_ideal_point

from .conftest import random_front, random_solution_set, record_acceptance

LIN = UtilityModel.linear()


def check(number, name, ok, detail=""):
    record_acceptance(number, name, bool(ok), detail)
    assert ok, f"criterion {number} ({name}) failed: {detail}"


def test_1_noise_free_collapse():
    g = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        D = int(g.integers(2, 4))
        S = random_solution_set(g, D=D, eta=0)
        A = random_front(g, int(g.integers(1, 30)), D)
        W = sample_weights(D, 100, int(g.integers(1 << 31)))
        cheb = UtilityModel.chebycheff(default_ideal_point(S.true_values, A.targets))
        worst = max(
            worst,
            abs(n_r2(S, W, LIN).value - r2(S.true_values, W, LIN).value),
            abs(n_r2(S, W, cheb).value - r2(S.true_values, W, cheb).value),
            abs(n_igd_plus(S, A).value - igd_plus(S.true_values, A).value),
        )
    elapsed = time.perf_counter() - start
    check(1, "noise-free collapse nR2=R2, nIGD+=IGD+", worst <= 1e-12 and elapsed < 10,
          f"max |diff| {worst:.2e}, {elapsed:.1f}s")


def test_2_noise_sweep_trends():
    start = time.perf_counter()
    report = run_noise_sweep(ExperimentConfig())
    elapsed = time.perf_counter() - start

    def strictly(col, sign):
        v = report.column(col)
        return all(sign * (b - a) > 0 for a, b in zip(v, v[1:]))

    falling = all(strictly(c, -1) for c in ("R2", "R2c", "IGD+"))
    rising = all(strictly(c, +1) for c in ("nR2", "nR2c", "nIGD+"))
    summary = "; ".join(f"{c}: " + " ".join(f"{x:.4f}" for x in report.column(c))
                        for c in ("R2", "nR2", "R2c", "nR2c", "IGD+", "nIGD+"))
    check(2, "noise-sweep trends (classical fall, selection-aware rise)", falling and rising and elapsed < 60,
          f"{elapsed:.1f}s; {summary}")


def test_3_pessimism_bounds():
    g = np.random.default_rng(3)
    violations = 0
    for _ in range(1000):
        D = int(g.integers(2, 4))
        S = random_solution_set(g, D=D, eta=float(g.uniform(0.01, 0.5)))
        A = random_front(g, int(g.integers(1, 30)), D)
        W = sample_weights(D, 100, int(g.integers(1 << 31)))
        violations += n_r2(S, W, LIN).value < r2(S.true_values, W, LIN).value
        violations += n_igd(S, A).value < igd(S.true_values, A).value
    check(3, "pessimism bounds nR2>=R2(true), nIGD>=IGD(true)", violations == 0, f"{violations} violations")


def test_4_analytic_vs_monte_carlo():
    g = np.random.default_rng(4)
    start = time.perf_counter()
    failures = []
    for k in range(100):
        pts = g.uniform(0, 1, (int(g.integers(1, 13)), 2))
        mc = r2(pts, sample_weights(2, 1_000_000, k), LIN)
        gap = abs(analytic_r2_linear_2d(pts) - mc.value)
        if gap > max(3 * mc.standard_error, 1e-3):
            failures.append((k, gap))
    elapsed = time.perf_counter() - start
    check(4, "analytic R2 vs Monte Carlo (m=1e6)", not failures and elapsed < 120,
          f"{len(failures)} outside tolerance, {elapsed:.1f}s")


def test_5_igd_plus_distance():
    g = np.random.default_rng(5)
    a = g.normal(size=(10_000, 3))
    t = g.normal(size=(10_000, 3))
    dplus = np.array([igd_plus_distances(a[i : i + 1], t[i : i + 1])[0, 0] for i in range(10_000)])
    deucl = np.array([euclidean_distances(a[i : i + 1], t[i : i + 1])[0, 0] for i in range(10_000)])
    bounded = bool(np.all(dplus <= deucl))
    dominating = a - g.uniform(0, 1, a.shape) * (g.uniform(size=a.shape) < 0.7)
    zero = all(igd_plus_distance(a[i], dominating[i]) == 0.0 for i in range(10_000))
    hand = igd_plus_distance((1, 1), (0, 0)) == 0.0 and igd_plus_distance((0, 0), (1, 1)) == np.sqrt(2)
    check(5, "IGD+ distance: zero when dominating, <= Euclidean, hand cases", bounded and zero and hand)


def test_6_regret_identity():
    g = np.random.default_rng(6)
    worst = 0.0
    for _ in range(500):
        S = random_solution_set(g, eta=float(g.uniform(0.01, 0.5)))
        W = sample_weights(2, 200, int(g.integers(1 << 31)))
        gap = n_r2(S, W, LIN).value - r2(S.true_values, W, LIN).value
        worst = max(worst, abs(mean_regret(selection_errors(S, W, LIN), len(W)) - gap))
    check(6, "mean selection regret = nR2 - R2(true)", worst <= 1e-12, f"max |diff| {worst:.2e}")


def test_7_igd_plus_weak_pareto_compliance():
    g = np.random.default_rng(7)
    violations = 0
    for _ in range(500):
        D = int(g.integers(2, 4))
        A = random_front(g, int(g.integers(1, 30)), D)
        B = g.uniform(0, 1, (int(g.integers(1, 12)), D))
        better = B - g.uniform(0, 0.3, B.shape) * (g.uniform(size=B.shape) < 0.7)
        better[g.integers(len(B))] -= 0.01  # at least one strict improvement
        violations += igd_plus(better, A).value > igd_plus(B, A).value
    check(7, "IGD+ weakly Pareto compliant on dominating pairs", violations == 0, f"{violations} violations")


def test_8_dominated_solution_irrelevance():
    g = np.random.default_rng(8)
    changed = 0
    for _ in range(500):
        S = random_solution_set(g, eta=0.2)
        W = sample_weights(2, 300, int(g.integers(1 << 31)))
        before = n_r2(S, W, LIN)
        k = int(g.integers(len(S)))
        step = g.uniform(0, 0.5, 2) * (g.uniform(size=2) < 0.7)
        step[g.integers(2)] += 1e-3
        extra = EvaluatedSolution("extra", g.uniform(-1, 1, 2), S.estimated_values[k] + step)
        after = n_r2(S.append(extra), W, LIN)
        changed += not (np.array_equal(before.selected, after.selected) and before.value == after.value)
    check(8, "appending an estimate-dominated solution never changes selections", changed == 0,
          f"{changed} sets changed")


def test_9_sweep_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    codes = [main(["sweep", "--seed", "11", "--out", str(p)]) for p in (a, b)]
    capsys.readouterr()
    check(9, "identical seeds give byte-identical sweep CSVs",
          codes == [0, 0] and a.read_bytes() == b.read_bytes() and a.stat().st_size > 0)
