"""Average reconstruction read overhead of erasure codes.

When ``j`` of a group's ``n`` disks are unreadable, a degraded read of one
data block costs one block if that block survived, or — if it was lost —
one block from each member of its recovery set. Averaging the per-data-disk
cost over all equally likely ``j``-subsets of failed disks gives the code's
average read overhead, the quantity that drives the repair-rate derivation
in :mod:`mttdl.growth`.

Codes whose recovery sets are not known block-by-block (published designs,
for example) are handled through :class:`CodeProfile`, a table of
recoverability fractions and read overheads per failure count; profiles for
one published (18, 12) code family comparison ship with the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import MalformedProfileError

__all__ = [
    "AccessPattern",
    "avg_read_overhead",
    "asymptotic_overhead",
    "CodeProfile",
    "load_code_profile",
    "builtin_profile",
    "BUILTIN_PROFILE_NAMES",
]


@dataclass(frozen=True)
class AccessPattern:
    """Recovery-set sizes of one erasure code layout.

    Attributes:
        total_disks: disks in the group.
        data_disks: data disks, ``1 <= data_disks < total_disks``.
        recovery_set_sizes: for each data block, the number of other blocks
            read to reconstruct it, each in ``[1, total_disks - 1]``. A
            maximum-distance-separable code reads ``data_disks`` blocks for
            every data block.
    """

    total_disks: int
    data_disks: int
    recovery_set_sizes: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.total_disks, int) or not isinstance(self.data_disks, int):
            raise ValueError("total_disks and data_disks must be integers")
        if self.data_disks < 1 or self.total_disks <= self.data_disks:
            raise ValueError(
                f"need 1 <= data_disks < total_disks, got {self.data_disks}, "
                f"{self.total_disks}"
            )
        sizes = tuple(int(v) for v in self.recovery_set_sizes)
        object.__setattr__(self, "recovery_set_sizes", sizes)
        if len(sizes) != self.data_disks:
            raise ValueError(
                f"recovery_set_sizes needs {self.data_disks} entries, got {len(sizes)}"
            )
        for idx, size in enumerate(sizes):
            if not 1 <= size <= self.total_disks - 1:
                raise ValueError(
                    f"recovery_set_sizes[{idx}] must lie in "
                    f"[1, {self.total_disks - 1}], got {size}"
                )

    @classmethod
    def mds(cls, total_disks: int, data_disks: int) -> "AccessPattern":
        """Pattern of a maximum-distance-separable code: every data block is
        rebuilt from ``data_disks`` surviving blocks."""
        return cls(total_disks, data_disks, (data_disks,) * data_disks)

    @property
    def mean_recovery_set_size(self) -> float:
        """Average recovery-set size over the data blocks."""
        return sum(self.recovery_set_sizes) / self.data_disks


def avg_read_overhead(pattern: AccessPattern, failures: int) -> float:
    """Exact average read overhead with ``failures`` disks unreadable.

    Averaged over all equally likely failed subsets and all data blocks: a
    surviving data block costs one read, a failed one costs its recovery-set
    size. By symmetry only the mean recovery-set size matters, giving

    ``sum(i <= failures) (i * mean_size + m - i) * C(m, i)
    * C(n - m, failures - i) / (m * C(n, failures))``

    with ``n = total_disks`` and ``m = data_disks``.

    Args:
        pattern: code layout.
        failures: number of unreadable disks,
            ``0 <= failures <= total_disks - data_disks``.

    Returns:
        The average number of blocks read per data-block read, ``>= 1``.

    Raises:
        IndexError: if ``failures`` is out of range.
    """
    n = pattern.total_disks
    m = pattern.data_disks
    if not 0 <= failures <= n - m:
        raise IndexError(f"failures must lie in [0, {n - m}], got {failures}")
    mean_size = pattern.mean_recovery_set_size
    weighted = 0.0
    for lost_data in range(failures + 1):
        combos = math.comb(m, lost_data) * math.comb(n - m, failures - lost_data)
        if combos:
            weighted += (lost_data * mean_size + m - lost_data) * combos
    return weighted / (m * math.comb(n, failures))


def asymptotic_overhead(pattern: AccessPattern, failures: int) -> float:
    """Large-group approximation of :func:`avg_read_overhead`.

    ``1 + (mean_size - 1) * failures / total_disks``, exact in the limit of
    many disks at fixed failure fraction.

    Args:
        pattern: code layout.
        failures: number of unreadable disks, ``>= 0``.

    Returns:
        The approximate overhead.

    Raises:
        ValueError: if ``failures`` is negative.
    """
    if failures < 0:
        raise ValueError(f"failures must be >= 0, got {failures}")
    return 1.0 + (pattern.mean_recovery_set_size - 1.0) * failures / pattern.total_disks


@dataclass(frozen=True)
class CodeProfile:
    """Published reliability/read-cost table of an erasure code.

    Attributes:
        name: display name.
        total_disks: disks in the group.
        data_disks: data disks.
        recoverability: per failure count ``0 .. total_disks - data_disks``,
            the fraction of failed subsets the code survives, in ``[0, 1]``
            with the zero-failure entry exactly 1.
        read_overhead: average read overhead per failure count, entries
            ``>= 1`` with the zero-failure entry exactly 1.
    """

    name: str
    total_disks: int
    data_disks: int
    recoverability: tuple[float, ...]
    read_overhead: tuple[float, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise MalformedProfileError("profile name must be a non-empty string")
        if not isinstance(self.total_disks, int) or not isinstance(self.data_disks, int):
            raise MalformedProfileError("total_disks and data_disks must be integers")
        if self.data_disks < 1 or self.total_disks <= self.data_disks:
            raise MalformedProfileError(
                f"need 1 <= data_disks < total_disks, got {self.data_disks}, "
                f"{self.total_disks}"
            )
        expected = self.total_disks - self.data_disks + 1
        rec = tuple(float(v) for v in self.recoverability)
        ovh = tuple(float(v) for v in self.read_overhead)
        object.__setattr__(self, "recoverability", rec)
        object.__setattr__(self, "read_overhead", ovh)
        if len(rec) != expected:
            raise MalformedProfileError(
                f"recoverability needs {expected} entries, got {len(rec)}"
            )
        if len(ovh) != expected:
            raise MalformedProfileError(
                f"read_overhead needs {expected} entries, got {len(ovh)}"
            )
        for idx, v in enumerate(rec):
            if not 0.0 <= v <= 1.0:
                raise MalformedProfileError(
                    f"recoverability[{idx}] must lie in [0, 1], got {v}"
                )
        if rec[0] != 1.0:
            raise MalformedProfileError(
                f"recoverability[0] must be 1, got {rec[0]}"
            )
        for idx, v in enumerate(ovh):
            if not math.isfinite(v) or v < 1.0:
                raise MalformedProfileError(
                    f"read_overhead[{idx}] must be >= 1, got {v}"
                )
        if ovh[0] != 1.0:
            raise MalformedProfileError(f"read_overhead[0] must be 1, got {ovh[0]}")

    @property
    def full_recoverability_limit(self) -> int:
        """Largest failure count through which every entry so far survives
        all failed subsets (recoverability exactly 1)."""
        limit = 0
        for idx, v in enumerate(self.recoverability):
            if v == 1.0:
                limit = idx
            else:
                break
        return limit


def load_code_profile(source: Mapping) -> CodeProfile:
    """Build a :class:`CodeProfile` from a parsed JSON-style mapping.

    The mapping needs keys ``name``, ``total_disks``, ``data_disks``,
    ``recoverability`` (fractions in ``[0, 1]``) and ``read_overhead``.

    Args:
        source: the mapping.

    Returns:
        The validated profile.

    Raises:
        MalformedProfileError: on missing keys, wrong types or invariant
            violations.
    """
    required = ("name", "total_disks", "data_disks", "recoverability", "read_overhead")
    missing = [key for key in required if key not in source]
    if missing:
        raise MalformedProfileError(f"profile is missing keys: {', '.join(missing)}")
    try:
        return CodeProfile(
            name=source["name"],
            total_disks=source["total_disks"],
            data_disks=source["data_disks"],
            recoverability=tuple(source["recoverability"]),
            read_overhead=tuple(source["read_overhead"]),
        )
    except MalformedProfileError:
        raise
    except (TypeError, ValueError) as exc:
        raise MalformedProfileError(f"profile fields are malformed: {exc}") from exc


_BUILTIN_PROFILES = {
    "generic-mds": CodeProfile(
        name="Generic MDS (18,12)",
        total_disks=18,
        data_disks=12,
        recoverability=(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0),
        read_overhead=(1.0, 1.61, 2.22, 2.83, 3.44, 4.06, 4.67),
    ),
    "basic-pyramid": CodeProfile(
        name="Basic Pyramid (18,12)",
        total_disks=18,
        data_disks=12,
        recoverability=(1.0, 1.0, 1.0, 1.0, 1.0, 0.9412, 0.5932),
        read_overhead=(1.0, 1.28, 1.56, 1.99, 2.59, 3.29, 3.83),
    ),
    "generalized-pyramid": CodeProfile(
        name="Generalized Pyramid (18,12)",
        total_disks=18,
        data_disks=12,
        recoverability=(1.0, 1.0, 1.0, 1.0, 1.0, 0.9419, 0.7644),
        read_overhead=(1.0, 1.28, 1.56, 1.99, 2.59, 3.29, 4.12),
    ),
    "generalized-pyramid-no-global": CodeProfile(
        name="Generalized Pyramid without global redundancy (18,12)",
        total_disks=18,
        data_disks=12,
        recoverability=(1.0, 1.0, 1.0, 1.0, 0.9794, 0.8857, 0.6563),
        read_overhead=(1.0, 1.28, 1.56, 1.87, 2.32, 2.93, 3.85),
    ),
}

BUILTIN_PROFILE_NAMES: tuple[str, ...] = tuple(_BUILTIN_PROFILES)


def builtin_profile(name: str) -> CodeProfile:
    """Return one of the profiles shipped with the package.

    Args:
        name: one of :data:`BUILTIN_PROFILE_NAMES`.

    Returns:
        The profile.

    Raises:
        MalformedProfileError: if the name is unknown.
    """
    try:
        return _BUILTIN_PROFILES[name]
    except KeyError:
        raise MalformedProfileError(
            f"unknown builtin profile {name!r}; available: "
            f"{', '.join(BUILTIN_PROFILE_NAMES)}"
        ) from None
