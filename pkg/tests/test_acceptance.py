"""End-to-end acceptance checks for the reliability toolkit.

Each test exercises one externally meaningful behavior at its stated
tolerance and prints a single summary line with the measured margin, so a
verbose run reads as one pass/fail line per behavior. Random model sets use
frozen seeds; the Monte Carlo check also guards determinism and runtime.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from oracles import (
    enumerated_mds_overhead_table,
    exact_generator_stationary_distribution,
)
from mttdl.allocation import node_steady_state
from mttdl.cli import cmd_allocate, cmd_pyramid, cmd_sweep
from mttdl.markov_core import (
    FailureModel,
    InitialDistribution,
    mttdl_closed_form,
    mttdl_linear_solve,
    mttdl_recursive_step,
    mttdl_upper_bound,
    mttdl_with_initial_distribution,
    transient_block_determinant,
    transient_block_determinant_lower_bound,
)
from mttdl.montecarlo import SimConfig, simulate_mttdl
from mttdl.overhead import AccessPattern, avg_read_overhead

PUBLISHED_MDS_18_12_OVERHEADS = (1.0, 1.61, 2.22, 2.83, 3.44, 4.06, 4.67)


def random_general_model(rng, parity, *, with_errors):
    """One frozen-seed random model with rates spanning six decades."""
    total = parity + 1 + int(rng.integers(0, 30))
    lam = tuple(10.0 ** rng.uniform(-6.0, 0.0, parity + 1))
    mu = tuple(10.0 ** rng.uniform(-6.0, 0.0, parity))
    gam = tuple(10.0 ** rng.uniform(-6.0, 0.0, parity)) if with_errors else None
    return FailureModel(total, total - parity, lam, mu, gam)


def test_acceptance_01_mds_18_12_read_overhead_table():
    started = time.perf_counter()
    pattern = AccessPattern.mds(18, 12)
    worst = 0.0
    for failures, published in enumerate(PUBLISHED_MDS_18_12_OVERHEADS):
        got = avg_read_overhead(pattern, failures)
        worst = max(worst, abs(got - published))
        assert abs(got - published) <= 0.005, (failures, got, published)
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"took {elapsed:.3f} s"
    print(
        f"PASS read-overhead table (18,12): worst |delta| {worst:.2e} <= 5e-3, "
        f"{elapsed * 1e3:.1f} ms"
    )


def test_acceptance_02_exact_methods_agree_without_error_rates():
    started = time.perf_counter()
    rng = np.random.default_rng(20260815)
    worst_closed = worst_recursion = 0.0
    for index in range(200):
        parity = int(rng.integers(1, 7))
        model = random_general_model(rng, parity, with_errors=False)
        closed = mttdl_closed_form(model).hours
        linear = mttdl_linear_solve(model).hours
        deviation = abs(closed - linear) / linear
        worst_closed = max(worst_closed, deviation)
        assert deviation <= 1e-6, (index, model)

        total = model.total_disks
        previous = FailureModel(
            total, total - 1, model.failure_rates[:2], model.repair_rates[:1]
        )
        estimate = mttdl_closed_form(previous)
        for data in range(total - 2, model.data_disks - 1, -1):
            step_parity = total - data
            nxt = FailureModel(
                total,
                data,
                model.failure_rates[: step_parity + 1],
                model.repair_rates[:step_parity],
            )
            estimate = mttdl_recursive_step(estimate, nxt, previous_model=previous)
            previous = nxt
        deviation = abs(estimate.hours - closed) / closed
        worst_recursion = max(worst_recursion, deviation)
        assert deviation <= 1e-9, (index, model)
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"took {elapsed:.3f} s"
    print(
        f"PASS 200 zero-error models: closed-vs-linear {worst_closed:.2e} <= 1e-6, "
        f"recursion-vs-closed {worst_recursion:.2e} <= 1e-9, {elapsed:.2f} s"
    )


def test_acceptance_03_upper_bound_exactness_and_determinant_gap():
    rng = np.random.default_rng(30303)
    worst_equality = worst_gap = 0.0
    low_parity = exactly_three = 0
    for index in range(200):
        parity = int(rng.integers(1, 6))
        model = random_general_model(rng, parity, with_errors=True)
        upper = mttdl_upper_bound(model).hours
        linear = mttdl_linear_solve(model).hours
        assert upper >= linear * (1.0 - 1e-12), (index, upper, linear)
        if parity <= 2:
            low_parity += 1
            deviation = abs(upper - linear) / linear
            worst_equality = max(worst_equality, deviation)
            assert deviation <= 1e-9, (index, model)
        if parity == 3:
            exactly_three += 1
            lam, mu, gam = model.failure_rates, model.repair_rates, model.error_rates
            spare = model.total_disks - 3
            exact = transient_block_determinant(model)
            bounded = transient_block_determinant_lower_bound(model)
            predicted = gam[2] * gam[0] * mu[0] * (3.0 * mu[2] + lam[3] * spare)
            residual = abs((exact - bounded) - predicted)
            worst_gap = max(worst_gap, residual / exact)
            assert residual <= 1e-12 * exact, (index, model)
    assert low_parity and exactly_three
    print(
        f"PASS 200 error-rate models: bound >= solver everywhere, low-parity "
        f"equality {worst_equality:.2e} <= 1e-9 ({low_parity} models), "
        f"determinant gap residual {worst_gap:.2e} <= 1e-12 "
        f"({exactly_three} models)"
    )


def test_acceptance_04_monte_carlo_within_three_sigma_and_reproducible():
    started = time.perf_counter()
    rng = np.random.default_rng(424242)
    worst_sigma = 0.0
    for index in range(20):
        parity = 1 + index % 4
        total = parity + 1 + int(rng.integers(1, 6))
        lam = tuple(10.0 ** rng.uniform(-1.3, -0.7, parity + 1))
        mu = tuple(10.0 ** rng.uniform(-0.7, 0.0, parity))
        gam = (
            tuple(10.0 ** rng.uniform(-2.5, -1.5, parity))
            if index % 5 == 4
            else None
        )
        model = FailureModel(total, total - parity, lam, mu, gam)
        config = SimConfig(trials=100_000, seed=1000 + index)
        result = simulate_mttdl(model, config)
        linear = mttdl_linear_solve(model).hours
        sigma = abs(result.mean_hours - linear) / result.stderr_hours
        worst_sigma = max(worst_sigma, sigma)
        assert sigma <= 3.0, (index, model, result.mean_hours, linear)
        replay = simulate_mttdl(model, config)
        assert replay.mean_hours == result.mean_hours
        assert replay.stderr_hours == result.stderr_hours
        assert replay.trials_completed == result.trials_completed
        assert replay.trials_truncated == result.trials_truncated
    elapsed = time.perf_counter() - started
    assert elapsed < 120.0, f"took {elapsed:.3f} s"
    print(
        f"PASS 20 simulated models x 100k trials, run twice: worst "
        f"|z| {worst_sigma:.3f} <= 3, bit-identical replays, {elapsed:.1f} s"
    )


def test_acceptance_05_overhead_formula_matches_enumeration():
    worst = 0.0
    cases = 0
    for total in range(2, 17):
        for data in range(1, total):
            table = enumerated_mds_overhead_table(total, data)
            pattern = AccessPattern.mds(total, data)
            for failures in range(0, total - data + 1):
                got = avg_read_overhead(pattern, failures)
                deviation = abs(got - table[failures]) / table[failures]
                worst = max(worst, deviation)
                cases += 1
                assert deviation <= 1e-9, (total, data, failures)
    print(
        f"PASS overhead formula vs enumeration: {cases} layouts/failure counts, "
        f"worst rel {worst:.2e} <= 1e-9"
    )


def test_acceptance_06_code_family_comparison_magnitude_and_ordering():
    _, rows = cmd_pyramid({})
    hours = {(row[0], row[1]): row[3] for row in rows}
    rates = sorted({row[1] for row in rows}, reverse=True)
    assert len(rates) == 3 and rates[0] == 1.0 / 200_000.0

    mds = "Generic MDS (18,12)"
    basic = "Basic Pyramid (18,12)"
    general = "Generalized Pyramid (18,12)"
    local_only = "Generalized Pyramid without global redundancy (18,12)"
    anchor = hours[(mds, rates[0])]
    assert abs(anchor / 2.2e15 - 1.0) <= 0.30, anchor
    for rate in rates:
        b, g = hours[(basic, rate)], hours[(general, rate)]
        assert abs(b - g) <= 1e-6 * g, (rate, b, g)
        assert min(b, g) > hours[(mds, rate)], rate
        assert hours[(mds, rate)] > hours[(local_only, rate)], rate
    print(
        f"PASS code comparison: MDS at 1/200000 per hour = {anchor:.3e} "
        f"(within 30% of 2.2e15); pyramid ~= generalized > MDS > local-only "
        f"at all {len(rates)} rates"
    )


def test_acceptance_07_parity_returns_diminish_under_growth():
    model_cfg = {
        "data_disks": 200,
        "failure_rates": {"base_rate": 4e-6, "growth_factor": 20.0},
        "repair_rates": {"nominal": 4.0},
    }
    sweep = {"variable": "parity_disks", "values": list(range(1, 11))}
    _, rows = cmd_sweep({"model": model_cfg, "sweep": sweep})
    exp_high = [row[4] for row in rows if row[2] >= 5]
    assert len(exp_high) == 6
    for ratio in exp_high:
        assert ratio < 1.01, rows

    capped_cfg = dict(
        model_cfg,
        failure_rates={"base_rate": 4e-6, "growth_factor": 20.0, "max_rate": 1e-1},
    )
    _, capped_rows = cmd_sweep({"model": capped_cfg, "sweep": sweep})
    capped_high = [row[4] for row in capped_rows if row[2] >= 5]
    for ratio in capped_high:
        assert 1.0 < ratio < 1.5, capped_rows
    print(
        f"PASS parity returns under growth: uncapped ratios "
        f"{min(exp_high):.4f}..{max(exp_high):.4f} < 1.01; rate-capped ratios "
        f"{min(capped_high):.4f}..{max(capped_high):.4f} in (1, 1.5)"
    )


def test_acceptance_08_vertical_beats_horizontal_until_growth_flips():
    config = {
        "allocation": {
            "node_count": 200,
            "weibull_shape": 0.9,
            "base_rate": 4e-6,
            "max_rate": 3e-2,
            "nominal_repair_rate": 4.0,
            "parity_levels": [6, 8],
            "growth_factors": [float(r) for r in range(1, 16)],
        }
    }
    _, rows = cmd_allocate(config)
    hours = {(row[0], row[1], row[2]): row[3] for row in rows}
    for factor in range(1, 9):
        vertical = hours[("vertical", float(factor), 6)]
        horizontal = hours[("horizontal", float(factor), 8)]
        assert vertical > horizontal, (factor, vertical, horizontal)
    flips = [
        factor
        for factor in range(1, 16)
        if hours[("horizontal", float(factor), 8)]
        > hours[("vertical", float(factor), 8)]
    ]
    assert flips, "horizontal never overtook vertical at equal parity"
    print(
        f"PASS allocation comparison: vertical(6 parity) > horizontal(8 parity) "
        f"for growth 1..8; horizontal overtakes at equal parity from growth "
        f"{min(flips)}"
    )


def test_acceptance_09_pool_steady_state_matches_exact_generator_solve():
    rng = np.random.default_rng(909)
    worst = 0.0
    cases = 0
    for node_count in range(1, 9):
        for _ in range(25):
            lam = tuple(10.0 ** rng.uniform(-3.0, 1.0, node_count))
            mu = tuple(10.0 ** rng.uniform(-3.0, 1.0, node_count))
            state = node_steady_state(node_count, lam, mu)
            probabilities = state.state_probabilities
            assert abs(sum(probabilities) - 1.0) <= 1e-9
            reference = exact_generator_stationary_distribution(lam, mu)
            for got, want in zip(probabilities, reference):
                deviation = abs(got - float(want)) / float(want)
                worst = max(worst, deviation)
                assert deviation <= 1e-6, (node_count, lam, mu)
            cases += 1
    print(
        f"PASS pool steady state vs exact rational solve: {cases} pools up to "
        f"8 nodes, worst per-entry rel {worst:.2e} <= 1e-6"
    )


def test_acceptance_10_point_mass_start_reduces_to_plain_mttdl():
    rng = np.random.default_rng(1010)
    worst = 0.0
    for _ in range(50):
        parity = int(rng.integers(1, 6))
        with_errors = bool(rng.integers(0, 2))
        model = random_general_model(rng, parity, with_errors=with_errors)
        fresh = InitialDistribution((1.0,) + (0.0,) * (parity + 1))
        hours = mttdl_with_initial_distribution(model, fresh).hours
        if with_errors:
            reference = mttdl_linear_solve(model).hours
        else:
            reference = mttdl_closed_form(model).hours
        deviation = abs(hours - reference) / reference
        worst = max(worst, deviation)
        assert deviation <= 1e-12, model

        absorbed = InitialDistribution((0.0,) * (parity + 1) + (1.0,))
        assert mttdl_with_initial_distribution(model, absorbed).hours == 0.0
    print(
        f"PASS point-mass starts: fresh start rel deviation {worst:.1e} <= 1e-12 "
        f"over 50 models; certain-loss start gives 0 hours"
    )
