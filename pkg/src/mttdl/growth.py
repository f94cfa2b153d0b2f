"""State-dependent failure-rate growth and repair-rate derivation.

Disk failure rates tend to climb while a group is degraded: load
concentrates on survivors and rebuild traffic stresses them further. This
module models that climb as a saturating (logistic-style) geometric growth
in the number of already-failed disks, and derives per-state repair rates
from the relative read cost of reconstruction under different erasure
codes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError

__all__ = [
    "GrowthSpec",
    "logistic_failure_rate",
    "build_failure_rates",
    "RepairSpec",
    "repair_rate",
]


@dataclass(frozen=True)
class GrowthSpec:
    """Saturating growth law for per-disk failure rates.

    The rate after ``i`` failures is ``base_rate`` multiplied by
    ``(1 + growth_factor) ** i``, smoothly capped so it can never exceed
    ``max_rate``:

    ``rate(i) = base_rate * g / (1 + (g - 1) * base_rate / max_rate)``
    with ``g = (1 + growth_factor) ** i``.

    Attributes:
        base_rate: healthy-state per-disk failure rate in 1/hour, positive.
        growth_factor: per-failure relative increase, ``>= 0`` (0 keeps the
            rate constant).
        max_rate: saturation ceiling in 1/hour, ``>= base_rate``; ``inf``
            recovers pure geometric growth.
    """

    base_rate: float
    growth_factor: float
    max_rate: float = math.inf

    def __post_init__(self) -> None:
        object.__setattr__(self, "base_rate", float(self.base_rate))
        object.__setattr__(self, "growth_factor", float(self.growth_factor))
        object.__setattr__(self, "max_rate", float(self.max_rate))
        if not math.isfinite(self.base_rate) or self.base_rate <= 0.0:
            raise ValueError(f"base_rate must be finite and > 0, got {self.base_rate}")
        if not math.isfinite(self.growth_factor) or self.growth_factor < 0.0:
            raise ValueError(
                f"growth_factor must be finite and >= 0, got {self.growth_factor}"
            )
        if math.isnan(self.max_rate) or self.max_rate < self.base_rate:
            raise ValueError(
                f"max_rate must be >= base_rate ({self.base_rate}), got {self.max_rate}"
            )


def logistic_failure_rate(spec: GrowthSpec, failures: int) -> float:
    """Per-disk failure rate once ``failures`` disks are already failed.

    Args:
        spec: growth law.
        failures: number of failed disks, ``>= 0``.

    Returns:
        The saturated rate; strictly increasing in ``failures`` while below
        ``max_rate`` (for a positive growth factor) and never above it.

    Raises:
        ValueError: if ``failures`` is negative.
    """
    if failures < 0:
        raise ValueError(f"failures must be >= 0, got {failures}")
    log_step = math.log1p(spec.growth_factor)
    geometric = math.exp(failures * log_step)
    if math.isinf(spec.max_rate):
        return spec.base_rate * geometric
    capped = spec.base_rate * geometric / (
        1.0 + (geometric - 1.0) * (spec.base_rate / spec.max_rate)
    )
    # The law stays below max_rate exactly, but near saturation a final
    # rounding can overshoot by one ulp; clamp so the bound is unconditional.
    return min(capped, spec.max_rate)


def build_failure_rates(spec: GrowthSpec, parity_disks: int) -> tuple[float, ...]:
    """Failure-rate vector for a group with ``parity_disks`` parity disks.

    Args:
        spec: growth law.
        parity_disks: number of parity disks, ``>= 1``.

    Returns:
        ``parity_disks + 1`` rates, entry ``i`` for the state with ``i``
        failed disks; strictly increasing when ``growth_factor > 0``.

    Raises:
        ValueError: if ``parity_disks < 1``.
    """
    if parity_disks < 1:
        raise ValueError(f"parity_disks must be >= 1, got {parity_disks}")
    return tuple(
        logistic_failure_rate(spec, failures) for failures in range(parity_disks + 1)
    )


@dataclass(frozen=True)
class RepairSpec:
    """Derives per-state repair rates from reconstruction read cost.

    Rebuilding after ``j + 1`` failures must read, per lost block,
    ``read_overhead`` surviving blocks; a code that reads less rebuilds
    faster. The repair rate for the state with ``j + 1`` failures is

    ``nominal_rate * bandwidth_factor *
    log((j + 1) * overhead_baseline[j + 1]) /
    log((j + 1) * overhead_code[j + 1])``

    normalized so a code with the baseline's overhead table repairs at
    exactly ``nominal_rate * bandwidth_factor``.

    Attributes:
        nominal_rate: reference repair rate in 1/hour, positive.
        bandwidth_factor: rebuild-bandwidth multiplier, positive.
        overhead_baseline: average read-overhead table of the baseline
            (maximum-distance-separable) code, indexed by failure count
            starting at zero; entries ``>= 1``.
        overhead_code: same-length table for the code under study.
    """

    nominal_rate: float
    bandwidth_factor: float
    overhead_baseline: tuple[float, ...]
    overhead_code: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nominal_rate", float(self.nominal_rate))
        object.__setattr__(self, "bandwidth_factor", float(self.bandwidth_factor))
        object.__setattr__(
            self, "overhead_baseline", tuple(float(v) for v in self.overhead_baseline)
        )
        object.__setattr__(
            self, "overhead_code", tuple(float(v) for v in self.overhead_code)
        )
        if not math.isfinite(self.nominal_rate) or self.nominal_rate <= 0.0:
            raise ValueError(f"nominal_rate must be > 0, got {self.nominal_rate}")
        if not math.isfinite(self.bandwidth_factor) or self.bandwidth_factor <= 0.0:
            raise ValueError(
                f"bandwidth_factor must be > 0, got {self.bandwidth_factor}"
            )
        if len(self.overhead_code) != len(self.overhead_baseline):
            raise ValueError(
                "overhead_code and overhead_baseline must have the same length"
            )
        if not self.overhead_baseline:
            raise ValueError("overhead tables must not be empty")
        for name, table in (
            ("overhead_baseline", self.overhead_baseline),
            ("overhead_code", self.overhead_code),
        ):
            for idx, v in enumerate(table):
                if not math.isfinite(v) or v < 1.0:
                    raise ValueError(f"{name}[{idx}] must be >= 1, got {v}")


def repair_rate(spec: RepairSpec, failures_repaired: int) -> float:
    """Per-disk repair rate for the state with ``failures_repaired + 1``
    failed disks.

    When the code's scaled overhead equals the baseline's the ratio is taken
    as exactly one (avoiding a 0/0 at a single-failure overhead of 1), so a
    baseline code yields ``nominal_rate * bandwidth_factor`` in every state.

    Args:
        spec: repair-rate derivation parameters.
        failures_repaired: index of the repair-rate vector entry being
            derived, ``0 <= failures_repaired <= len(table) - 2``.

    Returns:
        The repair rate in 1/hour; above ``nominal_rate * bandwidth_factor``
        whenever the code reads less than the baseline.

    Raises:
        IndexError: if ``failures_repaired + 1`` is outside the tables.
        DomainError: if a logarithm argument is ``<= 1`` (scaled overhead
            too small to define a rate ratio).
    """
    idx = failures_repaired + 1
    if not 1 <= idx < len(spec.overhead_baseline):
        raise IndexError(
            f"failures_repaired must lie in [0, {len(spec.overhead_baseline) - 2}], "
            f"got {failures_repaired}"
        )
    scaled_baseline = idx * spec.overhead_baseline[idx]
    scaled_code = idx * spec.overhead_code[idx]
    reference = spec.nominal_rate * spec.bandwidth_factor
    if scaled_code == scaled_baseline:
        return reference
    if scaled_baseline <= 1.0 or scaled_code <= 1.0:
        raise DomainError(
            f"scaled overheads must exceed 1 to define a rate ratio, got "
            f"baseline {scaled_baseline}, code {scaled_code}"
        )
    return reference * math.log(scaled_baseline) / math.log(scaled_code)
