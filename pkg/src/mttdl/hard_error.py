"""Unrecoverable read errors during rebuild.

A rebuild that encounters an unrecoverable sector while the group is already
at its last tolerable failure count loses data even though no further disk
has died. This module converts a device's uncorrectable-error specification
into that event's probability and folds it into a :class:`FailureModel` as a
direct data-loss rate out of the critical state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ErrorRateAlreadySetError
from .markov_core import FailureModel

__all__ = [
    "UcerSpec",
    "device_error_probability",
    "rebuild_error_probability",
    "apply_hard_error",
]


@dataclass(frozen=True)
class UcerSpec:
    """Uncorrectable-read-error characteristics of one device.

    Attributes:
        error_rate: probability that a single unit (sector or byte,
            whichever the capacity is counted in) reads back wrong, in
            ``[0, 1]``.
        capacity: device capacity in those units, ``>= 1``.
    """

    error_rate: float
    capacity: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "error_rate", float(self.error_rate))
        object.__setattr__(self, "capacity", float(self.capacity))
        if not 0.0 <= self.error_rate <= 1.0:
            raise ValueError(f"error_rate must lie in [0, 1], got {self.error_rate}")
        if not self.capacity >= 1.0:
            raise ValueError(f"capacity must be >= 1, got {self.capacity}")


def device_error_probability(spec: UcerSpec) -> float:
    """Probability that a full read of one device hits at least one
    uncorrectable error.

    Computed as ``1 - (1 - error_rate) ** capacity`` through ``log1p`` and
    ``expm1`` so tiny rates do not cancel to zero.

    Args:
        spec: device characteristics.

    Returns:
        The probability in ``[0, 1]``.
    """
    if spec.error_rate >= 1.0:
        return 1.0
    return -math.expm1(spec.capacity * math.log1p(-spec.error_rate))


def rebuild_error_probability(device_probability: float, devices_read: float) -> float:
    """Probability that reading ``devices_read`` devices in full hits at
    least one uncorrectable error.

    ``1 - (1 - device_probability) ** devices_read`` evaluated stably; a
    fractional ``devices_read`` expresses an average read amount.

    Args:
        device_probability: per-device full-read error probability in
            ``[0, 1]`` (see :func:`device_error_probability`).
        devices_read: number of devices read during the rebuild, ``>= 0``.

    Returns:
        The probability in ``[0, 1]``.

    Raises:
        ValueError: if an argument is out of range.
    """
    if not 0.0 <= device_probability <= 1.0:
        raise ValueError(
            f"device_probability must lie in [0, 1], got {device_probability}"
        )
    if devices_read < 0.0:
        raise ValueError(f"devices_read must be >= 0, got {devices_read}")
    if device_probability >= 1.0:
        return 1.0 if devices_read > 0.0 else 0.0
    return -math.expm1(devices_read * math.log1p(-device_probability))


def apply_hard_error(
    model: FailureModel,
    device_probability: float,
    devices_read: float | None = None,
) -> FailureModel:
    """Fold rebuild read errors into the critical state of a model.

    In the state with ``parity_disks - 1`` disks failed, the next disk
    failure triggers a rebuild that reads ``devices_read`` devices (the
    data-disk count by default); with probability ``P`` that rebuild hits an
    uncorrectable error and data is lost outright. The critical state's
    failure events therefore split: its per-disk failure rate is scaled by
    ``1 - P`` and the remainder becomes a direct data-loss rate, keeping the
    state's total exit rate unchanged.

    Args:
        model: model with all error rates zero.
        device_probability: per-device full-read error probability.
        devices_read: devices read by the critical rebuild; defaults to
            ``model.data_disks``.

    Returns:
        A new model, identical except for the critical state's split rates.

    Raises:
        ErrorRateAlreadySetError: if the model already has a positive error
            rate.
        ValueError: if a probability argument is out of range.
    """
    if any(g != 0.0 for g in model.error_rates):
        raise ErrorRateAlreadySetError(
            "apply_hard_error requires a model with all error_rates zero"
        )
    reads = float(model.data_disks) if devices_read is None else float(devices_read)
    error_probability = rebuild_error_probability(device_probability, reads)
    survive_probability = 1.0 - error_probability

    p = model.parity_disks
    critical = p - 1
    old_rate = model.failure_rates[critical]
    new_failure_rates = list(model.failure_rates)
    new_failure_rates[critical] = old_rate * survive_probability
    new_error_rates = list(model.error_rates)
    disks_alive = model.total_disks - critical
    new_error_rates[critical] = disks_alive * old_rate * error_probability

    return FailureModel(
        total_disks=model.total_disks,
        data_disks=model.data_disks,
        failure_rates=tuple(new_failure_rates),
        repair_rates=model.repair_rates,
        error_rates=tuple(new_error_rates),
    )
