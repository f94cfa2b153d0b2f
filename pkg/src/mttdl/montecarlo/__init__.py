"""Monte Carlo estimation of mean time to data loss.

Each trial walks the reliability chain from the all-operational state to
data loss, drawing exponential holding times and jump destinations from a
deterministic counter-based random stream keyed by ``(seed, trial index)``.
Repeating a configuration therefore reproduces results bit for bit, on
either backend: a compiled kernel is used when the extension built, with a
pure-Python twin as fallback (see :func:`default_backend`). Trials are
independent, so the work could be split across workers and the per-trial
times merged in trial order without changing the result; the shipped driver
runs them sequentially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..markov_core import FailureModel, Method, MttdlEstimate

try:  # pragma: no cover - exercised only when the extension is absent
    from . import _kernel as _compiled
except ImportError:  # pragma: no cover
    _compiled = None
from . import _reference

__all__ = [
    "SimConfig",
    "SimResult",
    "simulate_mttdl",
    "available_backends",
    "default_backend",
]

_SEED_LIMIT = 2**64


@dataclass(frozen=True)
class SimConfig:
    """Simulation controls.

    Attributes:
        trials: number of independent trials, ``>= 1``.
        seed: 64-bit base seed; together with the trial index it fixes every
            random draw.
        max_events_per_trial: transition budget per trial; a trial that is
            not absorbed within the budget is abandoned and excluded from
            the mean. Defaults to one billion.
    """

    trials: int
    seed: int
    max_events_per_trial: int = 1_000_000_000

    def __post_init__(self) -> None:
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ValueError(f"trials must be an integer >= 1, got {self.trials}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < _SEED_LIMIT:
            raise ValueError(f"seed must be an integer in [0, 2**64), got {self.seed}")
        if (
            not isinstance(self.max_events_per_trial, int)
            or self.max_events_per_trial < 1
        ):
            raise ValueError(
                f"max_events_per_trial must be an integer >= 1, got "
                f"{self.max_events_per_trial}"
            )


@dataclass(frozen=True)
class SimResult:
    """Outcome of a simulation run.

    Attributes:
        mean_hours: sample mean absorption time over completed trials (zero
            when no trial completed).
        stderr_hours: standard error of the mean (zero when fewer than two
            trials completed).
        trials_completed: trials absorbed within the event budget.
        trials_truncated: trials abandoned at the event budget.
    """

    mean_hours: float
    stderr_hours: float
    trials_completed: int
    trials_truncated: int

    def as_estimate(self) -> MttdlEstimate:
        """Wrap the result as an estimate with a 95% confidence half-width."""
        return MttdlEstimate(
            hours=self.mean_hours,
            method=Method.MONTE_CARLO,
            ci_halfwidth=1.96 * self.stderr_hours,
        )


def available_backends() -> tuple[str, ...]:
    """Names of the trial-loop backends importable in this installation."""
    if _compiled is not None:
        return ("compiled", "python")
    return ("python",)


def default_backend() -> str:
    """Backend used when none is requested: compiled when built."""
    return "compiled" if _compiled is not None else "python"


def simulate_mttdl(
    model: FailureModel, config: SimConfig, backend: str | None = None
) -> SimResult:
    """Estimate the MTTDL by simulating chain absorption.

    Args:
        model: chain parameters.
        config: trial count, seed and event budget.
        backend: ``"compiled"``, ``"python"`` or ``None`` for the default.
            Both backends produce bit-identical results.

    Returns:
        The :class:`SimResult`; rerunning the same model and config returns
        the same bytes.

    Raises:
        ValueError: if an unknown or unavailable backend is requested.
    """
    chosen = backend if backend is not None else default_backend()
    if chosen not in available_backends():
        raise ValueError(
            f"backend must be one of {available_backends()}, got {chosen!r}"
        )
    if chosen == "compiled":
        runner = _compiled.run_trials
        lam = np.ascontiguousarray(model.failure_rates, dtype=np.float64)
        mu = np.ascontiguousarray(model.repair_rates, dtype=np.float64)
        gam = np.ascontiguousarray(model.error_rates, dtype=np.float64)
    else:
        runner = _reference.run_trials
        lam = model.failure_rates
        mu = model.repair_rates
        gam = model.error_rates
    total_time, total_sq, completed, truncated = runner(
        model.total_disks,
        model.parity_disks,
        lam,
        mu,
        gam,
        config.trials,
        config.seed,
        config.max_events_per_trial,
    )

    if completed == 0:
        mean = 0.0
        stderr = 0.0
    else:
        mean = total_time / completed
        if completed == 1:
            stderr = 0.0
        else:
            scaled = completed * mean
            correction = scaled * mean
            spread = total_sq - correction
            variance = spread / (completed - 1)
            if variance < 0.0:
                variance = 0.0
            stderr = math.sqrt(variance / completed)
    return SimResult(
        mean_hours=mean,
        stderr_hours=stderr,
        trials_completed=int(completed),
        trials_truncated=int(truncated),
    )
