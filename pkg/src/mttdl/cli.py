"""Command-line interface for the mttdl package.

Six sub-commands read a JSON configuration file and write either a JSON
report (``analyze``, ``simulate``) or a CSV table (``sweep``, ``overhead``,
``pyramid``, ``allocate``). Output is deterministic: rerunning the same
command on the same configuration produces byte-identical output, CSV is
emitted with LF line endings and minimal quoting, and floating-point cells
carry 17 significant digits.

Configuration errors are reported with the path of the offending field,
for example ``model.failure_rates[2]``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Mapping, Sequence

from .allocation import AllocationScenario, Policy, system_mttdl
from .errors import MttdlError
from .growth import GrowthSpec, RepairSpec, build_failure_rates, repair_rate
from .hard_error import apply_hard_error
from .markov_core import (
    FailureModel,
    Method,
    MttdlEstimate,
    mttdl_closed_form,
    mttdl_linear_solve,
    mttdl_recursive_step,
    mttdl_upper_bound,
)
from .montecarlo import SimConfig, available_backends, default_backend, simulate_mttdl
from .overhead import (
    AccessPattern,
    CodeProfile,
    asymptotic_overhead,
    avg_read_overhead,
    builtin_profile,
    load_code_profile,
)

__all__ = ["ConfigError", "main"]

_DEFAULT_PYRAMID_FAILURE_RATES = (1.0 / 200_000.0, 1.0 / 500_000.0, 1.0 / 1_200_000.0)
_SWEEP_VARIABLES = (
    "growth_factor",
    "parity_disks",
    "data_disks",
    "device_error_probability",
)


class ConfigError(MttdlError):
    """A configuration file is missing, malformed or inconsistent."""


# ---------------------------------------------------------------------------
# config access helpers
# ---------------------------------------------------------------------------


def _require(cfg: Mapping, key: str, path: str) -> Any:
    if not isinstance(cfg, Mapping):
        raise ConfigError(f"{path} must be an object")
    if key not in cfg:
        raise ConfigError(f"missing required field {path}.{key}")
    return cfg[key]


def _as_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path} must be a number, got {type(value).__name__}")
    if not math.isfinite(float(value)):
        raise ConfigError(f"{path} must be finite, got {value}")
    return float(value)


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path} must be an integer, got {type(value).__name__}")
    return value


def _as_number_list(value: Any, path: str) -> list[float]:
    if not isinstance(value, list):
        raise ConfigError(f"{path} must be an array, got {type(value).__name__}")
    return [_as_number(v, f"{path}[{idx}]") for idx, v in enumerate(value)]


def _as_str(value: Any, path: str, choices: Sequence[str] | None = None) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"{path} must be a string, got {type(value).__name__}")
    if choices is not None and value not in choices:
        raise ConfigError(f"{path} must be one of {', '.join(choices)}; got {value!r}")
    return value


def _wrap_value_error(path: str, exc: Exception) -> ConfigError:
    return ConfigError(f"invalid values under {path}: {exc}")


# ---------------------------------------------------------------------------
# model construction from config blocks
# ---------------------------------------------------------------------------


def _growth_spec(cfg: Mapping, path: str) -> GrowthSpec:
    base = _as_number(_require(cfg, "base_rate", path), f"{path}.base_rate")
    factor = _as_number(_require(cfg, "growth_factor", path), f"{path}.growth_factor")
    max_rate = math.inf
    if "max_rate" in cfg and cfg["max_rate"] is not None:
        max_rate = _as_number(cfg["max_rate"], f"{path}.max_rate")
    try:
        return GrowthSpec(base_rate=base, growth_factor=factor, max_rate=max_rate)
    except ValueError as exc:
        raise _wrap_value_error(path, exc) from exc


def _failure_rates(spec: Any, parity: int, path: str) -> tuple[float, ...]:
    if isinstance(spec, list):
        rates = _as_number_list(spec, path)
        if len(rates) != parity + 1:
            raise ConfigError(
                f"{path} must have parity_disks + 1 = {parity + 1} entries, "
                f"got {len(rates)}"
            )
        return tuple(rates)
    if isinstance(spec, Mapping):
        return build_failure_rates(_growth_spec(spec, path), parity)
    raise ConfigError(f"{path} must be an array of rates or a growth object")


def _repair_rates(spec: Any, parity: int, path: str) -> tuple[float, ...]:
    if isinstance(spec, list):
        rates = _as_number_list(spec, path)
        if len(rates) != parity:
            raise ConfigError(
                f"{path} must have parity_disks = {parity} entries, got {len(rates)}"
            )
        return tuple(rates)
    if isinstance(spec, Mapping):
        nominal = _as_number(_require(spec, "nominal", path), f"{path}.nominal")
        convention = "aggregate"
        if "convention" in spec:
            convention = _as_str(
                spec["convention"],
                f"{path}.convention",
                choices=("aggregate", "per_disk"),
            )
        if convention == "aggregate":
            return tuple(nominal / (j + 1) for j in range(parity))
        return (nominal,) * parity
    raise ConfigError(
        f"{path} must be an array of rates or an object with "
        "'nominal' and optional 'convention'"
    )


def _model_sizes(cfg: Mapping, path: str) -> tuple[int, int]:
    data = _as_int(_require(cfg, "data_disks", path), f"{path}.data_disks")
    if "parity_disks" in cfg and "total_disks" in cfg:
        raise ConfigError(f"give {path}.parity_disks or {path}.total_disks, not both")
    if "parity_disks" in cfg:
        parity = _as_int(cfg["parity_disks"], f"{path}.parity_disks")
    elif "total_disks" in cfg:
        parity = _as_int(cfg["total_disks"], f"{path}.total_disks") - data
    else:
        raise ConfigError(f"{path} needs parity_disks or total_disks")
    if parity < 1:
        raise ConfigError(f"{path} must describe at least one parity disk")
    return data, parity


def _build_model(cfg: Any, path: str = "model") -> FailureModel:
    if not isinstance(cfg, Mapping):
        raise ConfigError(f"{path} must be an object")
    data, parity = _model_sizes(cfg, path)
    failure = _failure_rates(
        _require(cfg, "failure_rates", path), parity, f"{path}.failure_rates"
    )
    repair = _repair_rates(
        _require(cfg, "repair_rates", path), parity, f"{path}.repair_rates"
    )
    errors: tuple[float, ...] | None = None
    if "error_rates" in cfg and cfg["error_rates"] is not None:
        listed = _as_number_list(cfg["error_rates"], f"{path}.error_rates")
        if len(listed) != parity:
            raise ConfigError(
                f"{path}.error_rates must have parity_disks = {parity} entries, "
                f"got {len(listed)}"
            )
        errors = tuple(listed)
    try:
        return FailureModel(
            total_disks=data + parity,
            data_disks=data,
            failure_rates=failure,
            repair_rates=repair,
            error_rates=errors,
        )
    except ValueError as exc:
        raise _wrap_value_error(path, exc) from exc


def _model_echo(model: FailureModel) -> dict:
    return {
        "total_disks": model.total_disks,
        "data_disks": model.data_disks,
        "parity_disks": model.parity_disks,
        "failure_rates": list(model.failure_rates),
        "repair_rates": list(model.repair_rates),
        "error_rates": list(model.error_rates),
    }


def _sim_config(cfg: Any, path: str, seed_override: int | None) -> tuple[SimConfig, str]:
    if not isinstance(cfg, Mapping):
        raise ConfigError(f"{path} must be an object")
    trials = _as_int(_require(cfg, "trials", path), f"{path}.trials")
    seed = _as_int(_require(cfg, "seed", path), f"{path}.seed")
    if seed_override is not None:
        seed = seed_override
    max_events = 1_000_000_000
    if "max_events_per_trial" in cfg:
        max_events = _as_int(
            cfg["max_events_per_trial"], f"{path}.max_events_per_trial"
        )
    backend = default_backend()
    if "backend" in cfg:
        backend = _as_str(cfg["backend"], f"{path}.backend", choices=("compiled", "python"))
        if backend not in available_backends():
            raise ConfigError(
                f"{path}.backend requests {backend!r} but only "
                f"{', '.join(available_backends())} is available"
            )
    try:
        return SimConfig(trials=trials, seed=seed, max_events_per_trial=max_events), backend
    except ValueError as exc:
        raise _wrap_value_error(path, exc) from exc


# ---------------------------------------------------------------------------
# sub-command implementations (config in, plain data out)
# ---------------------------------------------------------------------------


def _recursion_chain_hours(model: FailureModel) -> float:
    """Grow the parity recursion from one parity disk up to the model."""
    n = model.total_disks
    previous = FailureModel(
        total_disks=n,
        data_disks=n - 1,
        failure_rates=model.failure_rates[:2],
        repair_rates=model.repair_rates[:1],
    )
    estimate = mttdl_closed_form(previous)
    for data in range(n - 2, model.data_disks - 1, -1):
        parity = n - data
        nxt = FailureModel(
            total_disks=n,
            data_disks=data,
            failure_rates=model.failure_rates[: parity + 1],
            repair_rates=model.repair_rates[:parity],
        )
        estimate = mttdl_recursive_step(estimate, nxt, previous_model=previous)
        previous = nxt
    return estimate.hours


def _best_exact_hours(model: FailureModel) -> float:
    """Exact MTTDL: closed form when error rates allow it, else the solver."""
    if any(g != 0.0 for g in model.error_rates):
        return mttdl_linear_solve(model).hours
    return mttdl_closed_form(model).hours


def cmd_analyze(config: Mapping, seed_override: int | None = None) -> dict:
    """MTTDL of one model by every applicable method, with deviations."""
    model = _build_model(_require(config, "model", "config"))
    linear = mttdl_linear_solve(model).hours
    estimates: dict[str, Any] = {Method.LINEAR_SOLVE.value: linear}
    if all(g == 0.0 for g in model.error_rates):
        estimates[Method.CLOSED_FORM.value] = mttdl_closed_form(model).hours
        estimates[Method.RECURSION.value] = _recursion_chain_hours(model)
    estimates[Method.UPPER_BOUND.value] = mttdl_upper_bound(model).hours

    report: dict[str, Any] = {"model": _model_echo(model)}
    if "simulation" in config:
        sim_config, backend = _sim_config(
            config["simulation"], "simulation", seed_override
        )
        result = simulate_mttdl(model, sim_config, backend=backend)
        estimate = result.as_estimate()
        estimates[Method.MONTE_CARLO.value] = estimate.hours
        report["simulation"] = {
            "backend": backend,
            "trials": sim_config.trials,
            "seed": sim_config.seed,
            "max_events_per_trial": sim_config.max_events_per_trial,
            "mean_hours": result.mean_hours,
            "stderr_hours": result.stderr_hours,
            "ci_halfwidth_hours": estimate.ci_halfwidth,
            "trials_completed": result.trials_completed,
            "trials_truncated": result.trials_truncated,
        }

    deviations = {
        name: value / linear - 1.0
        for name, value in estimates.items()
        if name != Method.LINEAR_SOLVE.value
    }
    report["estimates"] = estimates
    report["relative_deviation_from_linear_solve"] = deviations
    return report


def cmd_simulate(config: Mapping, seed_override: int | None = None) -> dict:
    """Monte Carlo MTTDL of one model."""
    model = _build_model(_require(config, "model", "config"))
    sim_config, backend = _sim_config(
        _require(config, "simulation", "config"), "simulation", seed_override
    )
    result = simulate_mttdl(model, sim_config, backend=backend)
    estimate = result.as_estimate() if result.trials_completed else None
    return {
        "model": _model_echo(model),
        "simulation": {
            "backend": backend,
            "trials": sim_config.trials,
            "seed": sim_config.seed,
            "max_events_per_trial": sim_config.max_events_per_trial,
        },
        "result": {
            "mean_hours": result.mean_hours,
            "stderr_hours": result.stderr_hours,
            "ci_halfwidth_hours": (
                estimate.ci_halfwidth if estimate is not None else 0.0
            ),
            "trials_completed": result.trials_completed,
            "trials_truncated": result.trials_truncated,
        },
    }


def _sweep_model(
    model_cfg: Mapping,
    variable: str,
    value: float,
    parity: int,
) -> FailureModel:
    """Build the model for one sweep grid point."""
    data = _as_int(
        _require(model_cfg, "data_disks", "model"), "model.data_disks"
    )
    if variable == "data_disks":
        data = int(value)
    failure_spec = _require(model_cfg, "failure_rates", "model")
    if variable == "growth_factor":
        if not isinstance(failure_spec, Mapping):
            raise ConfigError(
                "model.failure_rates must be a growth object when sweeping "
                "growth_factor"
            )
        failure_spec = dict(failure_spec)
        failure_spec["growth_factor"] = value
    failure = _failure_rates(failure_spec, parity, "model.failure_rates")
    repair = _repair_rates(
        _require(model_cfg, "repair_rates", "model"), parity, "model.repair_rates"
    )
    try:
        model = FailureModel(
            total_disks=data + parity,
            data_disks=data,
            failure_rates=failure,
            repair_rates=repair,
        )
    except ValueError as exc:
        raise _wrap_value_error("model", exc) from exc
    if variable == "device_error_probability":
        model = apply_hard_error(model, value)
    return model


def cmd_sweep(config: Mapping) -> tuple[list[str], list[list]]:
    """MTTDL over a swept variable, at one or more parity levels.

    Within each swept value, rows advance through the parity levels and the
    last column tracks the MTTDL ratio against the previous parity level
    (against the previous swept value when parity itself is swept).
    """
    sweep = _require(config, "sweep", "config")
    variable = _as_str(
        _require(sweep, "variable", "sweep"), "sweep.variable", choices=_SWEEP_VARIABLES
    )
    values = _require(sweep, "values", "sweep")
    if not isinstance(values, list) or not values:
        raise ConfigError("sweep.values must be a non-empty array")
    model_cfg = _require(config, "model", "config")
    if not isinstance(model_cfg, Mapping):
        raise ConfigError("model must be an object")

    if variable == "parity_disks":
        if "parity_levels" in sweep:
            raise ConfigError(
                "sweep.parity_levels is not allowed when sweeping parity_disks"
            )
        grid: list[tuple[float, int]] = []
        for idx, v in enumerate(values):
            parity = _as_int(v, f"sweep.values[{idx}]")
            if parity < 1:
                raise ConfigError(f"sweep.values[{idx}] must be >= 1")
            grid.append((float(parity), parity))
        group_size = len(grid)
    else:
        levels_cfg = sweep.get("parity_levels")
        if levels_cfg is None:
            raise ConfigError("sweep.parity_levels is required for this variable")
        if not isinstance(levels_cfg, list) or not levels_cfg:
            raise ConfigError("sweep.parity_levels must be a non-empty array")
        levels = [
            _as_int(v, f"sweep.parity_levels[{idx}]")
            for idx, v in enumerate(levels_cfg)
        ]
        for idx, parity in enumerate(levels):
            if parity < 1:
                raise ConfigError(f"sweep.parity_levels[{idx}] must be >= 1")
        numeric = [
            _as_number(v, f"sweep.values[{idx}]") for idx, v in enumerate(values)
        ]
        if variable == "data_disks":
            for idx, v in enumerate(values):
                _as_int(v, f"sweep.values[{idx}]")
        grid = [(v, parity) for v in numeric for parity in levels]
        group_size = len(levels)

    header = ["variable", "value", "parity_disks", "mttdl_hours", "ratio_to_previous"]
    rows: list[list] = []
    previous_hours: float | None = None
    for idx, (value, parity) in enumerate(grid):
        model = _sweep_model(model_cfg, variable, value, parity)
        hours = _best_exact_hours(model)
        first_of_group = idx % group_size == 0 if group_size else True
        if variable == "parity_disks":
            first_of_group = idx == 0
        ratio: float | str = "" if first_of_group else hours / previous_hours
        rows.append([variable, value, parity, hours, ratio])
        previous_hours = hours
    return header, rows


def cmd_overhead(config: Mapping) -> tuple[list[str], list[list]]:
    """Exact and asymptotic average read overhead of one code layout."""
    block = _require(config, "overhead", "config")
    if not isinstance(block, Mapping):
        raise ConfigError("overhead must be an object")
    total = _as_int(_require(block, "total_disks", "overhead"), "overhead.total_disks")
    data = _as_int(_require(block, "data_disks", "overhead"), "overhead.data_disks")
    if "recovery_set_sizes" in block:
        sizes_cfg = block["recovery_set_sizes"]
        if not isinstance(sizes_cfg, list):
            raise ConfigError("overhead.recovery_set_sizes must be an array")
        sizes = tuple(
            _as_int(v, f"overhead.recovery_set_sizes[{idx}]")
            for idx, v in enumerate(sizes_cfg)
        )
    else:
        sizes = (data,) * max(data, 0)
    try:
        pattern = AccessPattern(
            total_disks=total, data_disks=data, recovery_set_sizes=sizes
        )
    except ValueError as exc:
        raise _wrap_value_error("overhead", exc) from exc

    header = ["failures", "avg_read_overhead", "asymptotic_overhead"]
    rows = [
        [failures, avg_read_overhead(pattern, failures), asymptotic_overhead(pattern, failures)]
        for failures in range(total - data + 1)
    ]
    return header, rows


def _profile_from_config(entry: Any, path: str) -> CodeProfile:
    if isinstance(entry, str):
        try:
            return builtin_profile(entry)
        except MttdlError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    if isinstance(entry, Mapping):
        try:
            return load_code_profile(entry)
        except MttdlError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path} must be a builtin profile name or a profile object")


def _pyramid_mttdl_hours(
    profile: CodeProfile,
    baseline: CodeProfile,
    failure_rate: float,
    nominal_repair_rate: float,
    bandwidth_factor: float,
    device_error_probability: float,
) -> tuple[int, float]:
    """MTTDL of one profile at one base failure rate.

    The chain is truncated at the largest failure count the code survives
    with certainty; the state one short of that boundary carries the
    rebuild hard-error split, scaled by the average number of device reads
    a single-disk rebuild performs under the code (derived from its
    single-failure read overhead). The baseline code keeps the nominal
    repair rate as an aggregate (whole-state) rate; other codes get
    per-disk repair rates from the read-overhead ratio, boosted by the
    rebuild bandwidth factor.
    """
    n = profile.total_disks
    tolerated = profile.full_recoverability_limit
    if tolerated < 1:
        raise ConfigError(
            f"profile {profile.name!r} cannot tolerate even one failure"
        )
    data_effective = n - tolerated
    if profile.read_overhead == baseline.read_overhead:
        repair = tuple(nominal_repair_rate / (j + 1) for j in range(tolerated))
    else:
        spec = RepairSpec(
            nominal_rate=nominal_repair_rate,
            bandwidth_factor=bandwidth_factor,
            overhead_baseline=baseline.read_overhead,
            overhead_code=profile.read_overhead,
        )
        repair = tuple(repair_rate(spec, j) for j in range(tolerated))
    model = FailureModel(
        total_disks=n,
        data_disks=data_effective,
        failure_rates=(failure_rate,) * (tolerated + 1),
        repair_rates=repair,
    )
    devices_read = n * profile.read_overhead[1] - (n - 1)
    degraded = apply_hard_error(
        model, device_error_probability, devices_read=devices_read
    )
    return tolerated, mttdl_linear_solve(degraded).hours


def cmd_pyramid(config: Mapping) -> tuple[list[str], list[list]]:
    """Compare erasure-code profiles' MTTDL across base failure rates."""
    block = config.get("pyramid", {})
    if not isinstance(block, Mapping):
        raise ConfigError("pyramid must be an object")
    baseline = _profile_from_config(
        block.get("baseline_profile", "generic-mds"), "pyramid.baseline_profile"
    )
    profile_entries = block.get(
        "profiles",
        [
            "generic-mds",
            "basic-pyramid",
            "generalized-pyramid",
            "generalized-pyramid-no-global",
        ],
    )
    if not isinstance(profile_entries, list) or not profile_entries:
        raise ConfigError("pyramid.profiles must be a non-empty array")
    profiles = [
        _profile_from_config(entry, f"pyramid.profiles[{idx}]")
        for idx, entry in enumerate(profile_entries)
    ]
    nominal = _as_number(
        block.get("nominal_repair_rate", 1.0 / 168.0), "pyramid.nominal_repair_rate"
    )
    bandwidth = _as_number(
        block.get("bandwidth_factor", 20.0), "pyramid.bandwidth_factor"
    )
    device_probability = _as_number(
        block.get("device_error_probability", 1.0e-3),
        "pyramid.device_error_probability",
    )
    rates = block.get("base_failure_rates", list(_DEFAULT_PYRAMID_FAILURE_RATES))
    rate_values = _as_number_list(rates, "pyramid.base_failure_rates")
    if not rate_values:
        raise ConfigError("pyramid.base_failure_rates must be non-empty")

    header = ["code", "base_failure_rate", "tolerated_failures", "mttdl_hours"]
    rows: list[list] = []
    for profile in profiles:
        for rate in rate_values:
            tolerated, hours = _pyramid_mttdl_hours(
                profile, baseline, rate, nominal, bandwidth, device_probability
            )
            rows.append([profile.name, rate, tolerated, hours])
    return header, rows


def cmd_allocate(config: Mapping) -> tuple[list[str], list[list]]:
    """System MTTDL of placement policies over growth factors and parity."""
    block = _require(config, "allocation", "config")
    if not isinstance(block, Mapping):
        raise ConfigError("allocation must be an object")
    node_count = _as_int(
        _require(block, "node_count", "allocation"), "allocation.node_count"
    )
    shape = _as_number(
        _require(block, "weibull_shape", "allocation"), "allocation.weibull_shape"
    )
    base_rate = _as_number(
        _require(block, "base_rate", "allocation"), "allocation.base_rate"
    )
    max_rate = math.inf
    if "max_rate" in block and block["max_rate"] is not None:
        max_rate = _as_number(block["max_rate"], "allocation.max_rate")
    nominal = _as_number(
        _require(block, "nominal_repair_rate", "allocation"),
        "allocation.nominal_repair_rate",
    )
    convention = "aggregate"
    if "repair_convention" in block:
        convention = _as_str(
            block["repair_convention"],
            "allocation.repair_convention",
            choices=("aggregate", "per_disk"),
        )
    policies_cfg = block.get("policies", ["horizontal", "vertical"])
    if not isinstance(policies_cfg, list) or not policies_cfg:
        raise ConfigError("allocation.policies must be a non-empty array")
    policies = [
        Policy(
            _as_str(
                v,
                f"allocation.policies[{idx}]",
                choices=("horizontal", "vertical"),
            )
        )
        for idx, v in enumerate(policies_cfg)
    ]
    levels_cfg = _require(block, "parity_levels", "allocation")
    if not isinstance(levels_cfg, list) or not levels_cfg:
        raise ConfigError("allocation.parity_levels must be a non-empty array")
    levels = [
        _as_int(v, f"allocation.parity_levels[{idx}]")
        for idx, v in enumerate(levels_cfg)
    ]
    growth_cfg = _require(block, "growth_factors", "allocation")
    growth_values = _as_number_list(growth_cfg, "allocation.growth_factors")
    if not growth_values:
        raise ConfigError("allocation.growth_factors must be non-empty")

    header = [
        "policy",
        "growth_factor",
        "parity_disks",
        "system_mttdl_hours",
    ]
    rows: list[list] = []
    for policy in policies:
        for factor in growth_values:
            growth = GrowthSpec(
                base_rate=base_rate, growth_factor=factor, max_rate=max_rate
            )
            for parity in levels:
                if parity < 1 or parity >= node_count:
                    raise ConfigError(
                        "allocation.parity_levels entries must lie in "
                        f"[1, node_count - 1], got {parity}"
                    )
                if convention == "aggregate":
                    repair = tuple(nominal / (j + 1) for j in range(parity))
                else:
                    repair = (nominal,) * parity
                try:
                    model = FailureModel(
                        total_disks=node_count,
                        data_disks=node_count - parity,
                        failure_rates=build_failure_rates(growth, parity),
                        repair_rates=repair,
                    )
                    scenario = AllocationScenario(
                        node_count=node_count,
                        policy=policy,
                        weibull_shape=shape,
                        epg_model=model,
                        growth=growth,
                    )
                except ValueError as exc:
                    raise _wrap_value_error("allocation", exc) from exc
                estimate = system_mttdl(scenario)
                rows.append([policy.value, factor, parity, estimate.hours])
    return header, rows


# ---------------------------------------------------------------------------
# output plumbing and entry point
# ---------------------------------------------------------------------------


def _format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _render_csv(header: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(cell) for cell in row])
    return buffer.getvalue()


def _render_json(report: Mapping) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _write_output(text: str, out_path: str) -> None:
    if out_path == "-":
        sys.stdout.write(text)
        return
    with open(out_path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _load_config(path: str) -> Mapping:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            config = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError("config root must be a JSON object")
    return config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mttdl",
        description=(
            "Reliability analysis of erasure-protected disk arrays: MTTDL by "
            "closed form, linear solve, parity recursion, upper bound and "
            "Monte Carlo, plus read-overhead and placement comparisons."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = (
        ("analyze", "MTTDL of one model by every applicable method (JSON)", True),
        ("sweep", "MTTDL over a swept variable and parity levels (CSV)", False),
        ("overhead", "average reconstruction read overhead of a layout (CSV)", False),
        ("pyramid", "MTTDL comparison of erasure-code profiles (CSV)", False),
        ("allocate", "system MTTDL of placement policies (CSV)", False),
        ("simulate", "Monte Carlo MTTDL of one model (JSON)", True),
    )
    for name, help_text, takes_seed in specs:
        command = sub.add_parser(name, help=help_text)
        command.add_argument(
            "--config", required=True, help="path to the JSON configuration file"
        )
        command.add_argument(
            "--out",
            default="-",
            help="output path; '-' (the default) writes to standard output",
        )
        if takes_seed:
            command.add_argument(
                "--seed",
                type=int,
                default=None,
                help="override the Monte Carlo seed from the configuration",
            )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns a process exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        if args.command == "analyze":
            text = _render_json(cmd_analyze(config, seed_override=args.seed))
        elif args.command == "simulate":
            text = _render_json(cmd_simulate(config, seed_override=args.seed))
        elif args.command == "sweep":
            text = _render_csv(*cmd_sweep(config))
        elif args.command == "overhead":
            text = _render_csv(*cmd_overhead(config))
        elif args.command == "pyramid":
            text = _render_csv(*cmd_pyramid(config))
        else:
            text = _render_csv(*cmd_allocate(config))
        _write_output(text, args.out)
    except MttdlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
