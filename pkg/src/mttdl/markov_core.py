"""Absorbing Markov chain core for erasure-protected disk groups.

A protection group holds ``total_disks = data_disks + parity_disks`` disks
and survives up to ``parity_disks`` concurrent disk failures. The chain
state is the number of failed disks ``i`` (``0 <= i <= parity_disks``); one
further failure out of the last operational state, or a direct data-loss
transition out of any earlier state, absorbs the chain in the data-loss
state. A repair completes all outstanding rebuilds at once and returns the
group to the all-operational state.

Transition rates may vary with the number of disks already down: entry ``i``
of ``failure_rates`` is the per-disk failure rate while ``i`` disks are
failed, so the state's total failure rate is ``(total_disks - i) *
failure_rates[i]``. Entry ``i - 1`` of ``repair_rates`` is the per-disk
repair rate out of the ``i``-failures state (total repair rate ``i *
repair_rates[i - 1]``), and entry ``i`` of ``error_rates`` is the state's
direct data-loss rate.

The module computes the mean time to data loss (MTTDL, in hours) from the
all-operational state by four routes:

* :func:`mttdl_closed_form` - exact closed form, requires all error rates
  zero;
* :func:`mttdl_linear_solve` - dense solve of the transient generator
  block, valid for any rates;
* :func:`mttdl_recursive_step` - extends a known MTTDL to one more parity
  disk at fixed group size;
* :func:`mttdl_upper_bound` - closed-form upper bound valid for any error
  rates, tight when ``parity_disks <= 2`` or all error rates are zero.

:func:`mttdl_with_initial_distribution` averages sub-group MTTDLs over a
distribution of already-failed disks at time zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Sequence

import mpmath
import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    InvalidDistributionError,
    NonzeroErrorRateError,
    SingularMatrixError,
    UnknownCorrectionTermError,
)

__all__ = [
    "Method",
    "FailureModel",
    "TransitionMatrix",
    "MttdlEstimate",
    "InitialDistribution",
    "kahan_sum",
    "build_transition_matrix",
    "mttdl_linear_solve",
    "masked_rate_factors",
    "mttdl_closed_form",
    "transient_block_determinant",
    "transient_block_determinant_lower_bound",
    "mttdl_upper_bound",
    "mttdl_recursive_step",
    "mttdl_with_initial_distribution",
]

# Condition number (1-norm) above which the direct solve at rate offset zero
# is replaced by Richardson extrapolation from two small positive offsets.
_CONDITION_LIMIT = 1e12
_FALLBACK_PRECISION_DIGITS = 50

# Absolute tolerance on the sum of an initial state distribution.
_DISTRIBUTION_TOLERANCE = 1e-12


class Method(str, Enum):
    """Identifies how an :class:`MttdlEstimate` was produced."""

    CLOSED_FORM = "closed_form"
    LINEAR_SOLVE = "linear_solve"
    RECURSION = "recursion"
    UPPER_BOUND = "upper_bound"
    MONTE_CARLO = "monte_carlo"


def kahan_sum(values: Iterable[float]) -> float:
    """Sum floats with compensated (Kahan) accumulation.

    Args:
        values: finite floats to add.

    Returns:
        The compensated sum, typically accurate to one rounding of the exact
        result even for long, cancelling sequences.
    """
    total = 0.0
    carry = 0.0
    for value in values:
        adjusted = value - carry
        fresh = total + adjusted
        carry = (fresh - total) - adjusted
        total = fresh
    return total


def _rate_tuple(values: Sequence[float], name: str, length: int) -> tuple[float, ...]:
    """Coerce a rate sequence to a tuple of validated floats."""
    out = tuple(float(v) for v in values)
    if len(out) != length:
        raise ValueError(f"{name} must have {length} entries, got {len(out)}")
    for idx, v in enumerate(out):
        if not math.isfinite(v) or v < 0.0:
            raise ValueError(f"{name}[{idx}] must be finite and >= 0, got {v}")
    return out


@dataclass(frozen=True)
class FailureModel:
    """Immutable parameters of one protection group's reliability chain.

    Attributes:
        total_disks: disks in the group (data plus parity), at least 2.
        data_disks: data disks; ``1 <= data_disks < total_disks``.
        failure_rates: per-disk failure rates in 1/hour, entry ``i`` active
            while ``i`` disks are failed; ``parity_disks + 1`` entries. The
            last entry must be positive; an earlier entry may be zero only
            when the matching ``error_rates`` entry is positive, so the
            data-loss state stays reachable from every operational state.
        repair_rates: per-disk repair rates in 1/hour, entry ``i - 1``
            governing the ``i``-failures state; ``parity_disks`` entries,
            zeros allowed.
        error_rates: direct data-loss rates in 1/hour out of states
            ``0 .. parity_disks - 1``; ``parity_disks`` entries, zeros
            allowed. Defaults to all zeros.
    """

    total_disks: int
    data_disks: int
    failure_rates: tuple[float, ...]
    repair_rates: tuple[float, ...]
    error_rates: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.total_disks, int) or not isinstance(self.data_disks, int):
            raise ValueError("total_disks and data_disks must be integers")
        if self.data_disks < 1:
            raise ValueError(f"data_disks must be >= 1, got {self.data_disks}")
        if self.total_disks <= self.data_disks:
            raise ValueError(
                f"total_disks ({self.total_disks}) must exceed data_disks "
                f"({self.data_disks})"
            )
        parity = self.total_disks - self.data_disks
        object.__setattr__(
            self,
            "failure_rates",
            _rate_tuple(self.failure_rates, "failure_rates", parity + 1),
        )
        object.__setattr__(
            self,
            "repair_rates",
            _rate_tuple(self.repair_rates, "repair_rates", parity),
        )
        errors = self.error_rates if self.error_rates is not None else (0.0,) * parity
        object.__setattr__(
            self, "error_rates", _rate_tuple(errors, "error_rates", parity)
        )
        if self.failure_rates[parity] <= 0.0:
            raise ValueError("failure_rates for the last operational state must be positive")
        for i in range(parity):
            if self.failure_rates[i] == 0.0 and self.error_rates[i] == 0.0:
                raise ValueError(
                    f"failure_rates[{i}] may be zero only when error_rates[{i}] "
                    "is positive (the data-loss state must stay reachable)"
                )

    @property
    def parity_disks(self) -> int:
        """Number of parity disks (tolerated concurrent failures)."""
        return self.total_disks - self.data_disks


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Rate-offset-shifted generator of the chain, in dense form.

    ``entries`` is the ``(parity_disks + 2)`` square matrix whose leading
    ``parity_disks + 1`` rows/columns describe the operational states ordered
    from zero failures upward, and whose last row/column is the absorbing
    data-loss state. Every column sums to ``offset`` (to zero when
    ``offset == 0``), the sign convention placing total exit rates on the
    diagonal and negated arrival rates off it.

    Attributes:
        offset: the scalar added to every diagonal entry (a resolvent shift).
        entries: read-only square ndarray of shape ``(parity_disks + 2,) * 2``.
    """

    offset: float
    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"entries must be square, got shape {entries.shape}")
        entries = entries.copy()
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "offset", float(self.offset))


@dataclass(frozen=True)
class MttdlEstimate:
    """A mean-time-to-data-loss figure with its computation method.

    Attributes:
        hours: the estimate, finite and non-negative.
        method: how it was computed.
        ci_halfwidth: half-width of the 95% confidence interval in hours;
            present exactly when ``method`` is ``Method.MONTE_CARLO``.
    """

    hours: float
    method: Method
    ci_halfwidth: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "hours", float(self.hours))
        if not math.isfinite(self.hours) or self.hours < 0.0:
            raise ValueError(f"hours must be finite and >= 0, got {self.hours}")
        if not isinstance(self.method, Method):
            raise ValueError(f"method must be a Method member, got {self.method!r}")
        if self.method is Method.MONTE_CARLO:
            if self.ci_halfwidth is None:
                raise ValueError("Monte Carlo estimates must carry ci_halfwidth")
            object.__setattr__(self, "ci_halfwidth", float(self.ci_halfwidth))
            if not math.isfinite(self.ci_halfwidth) or self.ci_halfwidth < 0.0:
                raise ValueError("ci_halfwidth must be finite and >= 0")
        elif self.ci_halfwidth is not None:
            raise ValueError("ci_halfwidth is only valid for Monte Carlo estimates")


@dataclass(frozen=True)
class InitialDistribution:
    """Probability distribution over the chain's states at time zero.

    Entries are ordered from the all-operational state down to the last
    operational state, followed by the data-loss state: index ``idx`` (for
    ``idx <= parity_disks``) is the probability that ``idx`` disks are
    already failed, and the final entry is the probability that data is
    already lost.

    Attributes:
        probabilities: the distribution; entries in ``[0, 1]`` summing to
            one within ``1e-12``.
    """

    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        probs = tuple(float(v) for v in self.probabilities)
        object.__setattr__(self, "probabilities", probs)
        if len(probs) < 2:
            raise ValueError("probabilities needs at least two entries")
        for idx, v in enumerate(probs):
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"probabilities[{idx}] must lie in [0, 1], got {v}")
        total = kahan_sum(probs)
        if abs(total - 1.0) > _DISTRIBUTION_TOLERANCE:
            raise ValueError(f"probabilities must sum to 1 within 1e-12, got {total!r}")


def build_transition_matrix(model: FailureModel, offset: float = 0.0) -> TransitionMatrix:
    """Assemble the dense shifted generator of the reliability chain.

    Row/column ``i`` (``i <= parity_disks``) is the state with ``i`` failed
    disks; the last row/column is the absorbing data-loss state. Diagonal
    entries hold ``offset`` plus the state's total exit rate, off-diagonal
    entries the negated rate of the arrival into that row's state, so each
    column sums to exactly ``offset``.

    Args:
        model: chain parameters.
        offset: scalar added to the diagonal (use 0 for steady-state work).

    Returns:
        The assembled :class:`TransitionMatrix`.
    """
    n = model.total_disks
    p = model.parity_disks
    lam = model.failure_rates
    mu = model.repair_rates
    gam = model.error_rates
    size = p + 2
    a = np.zeros((size, size), dtype=float)

    a[0, 0] = offset + n * lam[0] + gam[0]
    for j in range(1, p + 1):
        a[0, j] = -(j * mu[j - 1])
    for i in range(1, p + 1):
        direct_loss = gam[i] if i < p else 0.0
        a[i, i] = offset + (n - i) * lam[i] + i * mu[i - 1] + direct_loss
        a[i, i - 1] = -((n - i + 1) * lam[i - 1])
    for j in range(p):
        a[p + 1, j] = -gam[j]
    a[p + 1, p] = -(model.data_disks * lam[p])
    a[p + 1, p + 1] = offset

    return TransitionMatrix(offset=offset, entries=a)


def _transient_solve_total(model: FailureModel, offset: float) -> float:
    """Solve the transient block at one offset and sum the solution vector."""
    p = model.parity_disks
    block = build_transition_matrix(model, offset).entries[: p + 1, : p + 1]
    rhs = np.zeros(p + 1)
    rhs[0] = 1.0
    try:
        solution = scipy.linalg.solve(block, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"transient block solve failed: {exc}") from exc
    if not np.all(np.isfinite(solution)):
        raise SingularMatrixError("transient block solve produced non-finite values")
    return float(np.sum(solution))


def _transient_solve_total_exact(model: FailureModel) -> float:
    """High-precision solve of the transient block, for ill-conditioned rates.

    Chains whose per-visit loss probabilities span many orders of magnitude
    produce transient blocks whose condition number exceeds what a double
    precision factorization can absorb; the expected absorption time can
    also exceed ``1/eps`` hours, in which case residual-based corrections
    computed in doubles are pure rounding noise. Worse, at condition numbers
    beyond ``1/eps`` even the one-ulp rounding of each *matrix entry* during
    a double-precision build perturbs the answer arbitrarily, so the block
    is rebuilt here in multiprecision arithmetic straight from the rates.
    The block is tiny, so the extra cost is milliseconds.
    """
    p = model.parity_disks
    n = model.total_disks
    with mpmath.workdps(_FALLBACK_PRECISION_DIGITS):
        lam = [mpmath.mpf(rate) for rate in model.failure_rates]
        mu = [mpmath.mpf(rate) for rate in model.repair_rates]
        gam = [mpmath.mpf(rate) for rate in model.error_rates]
        block = mpmath.zeros(p + 1)
        block[0, 0] = n * lam[0] + (gam[0] if p > 0 else 0)
        for j in range(1, p + 1):
            block[0, j] = -(j * mu[j - 1])
        for i in range(1, p + 1):
            direct_loss = gam[i] if i < p else 0
            block[i, i] = (n - i) * lam[i] + i * mu[i - 1] + direct_loss
            block[i, i - 1] = -((n - i + 1) * lam[i - 1])
        rhs = mpmath.matrix([1] + [0] * p)
        try:
            solution = mpmath.lu_solve(block, rhs)
        except ZeroDivisionError as exc:
            raise SingularMatrixError("transient block is singular") from exc
        return float(mpmath.fsum(solution))


def mttdl_linear_solve(model: FailureModel) -> MttdlEstimate:
    """Compute the MTTDL by solving the transient generator block.

    The expected absorption time from the all-operational state is the sum
    of the solution of ``block @ x = e0``, where ``block`` is the leading
    ``parity_disks + 1`` square sub-matrix of the generator and ``e0`` the
    first unit vector. Valid for any (possibly positive) error rates.

    If the block's 1-norm condition number exceeds ``1e12`` (or is not
    finite), the double-precision factorization can no longer be trusted and
    the block is re-solved with a fixed 50-digit multiprecision LU
    factorization, which is exact to double rounding at any conditioning the
    rate model can produce.

    Args:
        model: chain parameters.

    Returns:
        The estimate tagged ``Method.LINEAR_SOLVE``.

    Raises:
        SingularMatrixError: if the block is singular or the solve yields
            non-finite values (degenerate rate combinations).
    """
    p = model.parity_disks
    block = build_transition_matrix(model, 0.0).entries[: p + 1, : p + 1]
    condition = np.linalg.cond(block, 1)
    if math.isfinite(condition) and condition <= _CONDITION_LIMIT:
        hours = _transient_solve_total(model, 0.0)
    else:
        hours = _transient_solve_total_exact(model)
    if not math.isfinite(hours) or hours < 0.0:
        raise SingularMatrixError(f"linear solve produced invalid MTTDL {hours!r}")
    return MttdlEstimate(hours=hours, method=Method.LINEAR_SOLVE)


def masked_rate_factors(model: FailureModel, mask_start: int) -> tuple[float, ...]:
    """Per-state rate factors used by the closed-form MTTDL numerator.

    Entry ``j`` (for ``j = 0 .. parity_disks - 1``) is the state's total
    failure rate ``failure_rates[j] * (total_disks - j)``; for ``j >=
    mask_start`` the state's total repair rate and direct data-loss rate are
    added on top. The closed form sums, over ``mask_start``, products of all
    entries but one.

    Args:
        model: chain parameters.
        mask_start: first index receiving the repair/error addition;
            ``0 <= mask_start <= parity_disks - 1``.

    Returns:
        ``parity_disks`` factors.

    Raises:
        IndexError: if ``mask_start`` is out of range.
    """
    p = model.parity_disks
    if not 0 <= mask_start <= p - 1:
        raise IndexError(f"mask_start must lie in [0, {p - 1}], got {mask_start}")
    n = model.total_disks
    out = []
    for j in range(p):
        factor = model.failure_rates[j] * (n - j)
        if j >= mask_start:
            if j > 0:
                factor += j * model.repair_rates[j - 1]
            factor += model.error_rates[j]
        out.append(factor)
    return tuple(out)


def _extended_masked_rate_factors(model: FailureModel, mask_start: int) -> tuple[float, ...]:
    """Like :func:`masked_rate_factors` but extended through the last
    operational state, whose direct data-loss rate is taken as zero."""
    p = model.parity_disks
    n = model.total_disks
    out = []
    for j in range(p + 1):
        factor = model.failure_rates[j] * (n - j)
        if j >= mask_start:
            if j > 0:
                factor += j * model.repair_rates[j - 1]
            if j < p:
                factor += model.error_rates[j]
        out.append(factor)
    return tuple(out)


def mttdl_closed_form(model: FailureModel) -> MttdlEstimate:
    """Evaluate the exact closed-form MTTDL (all error rates must be zero).

    The value is assembled from products of :func:`masked_rate_factors`
    entries: with ``p = parity_disks`` and ``m = data_disks``,

    ``hours = (p * repair_rates[p-1] + m * failure_rates[p]) / D * S
    + 1 / (m * failure_rates[p])``

    where ``D`` is the product of all state total failure rates and ``S``
    sums, over each mask position, the product of the other ``p - 1``
    factors. The sum over mask positions uses compensated accumulation.

    Args:
        model: chain parameters with all ``error_rates`` zero.

    Returns:
        The estimate tagged ``Method.CLOSED_FORM``.

    Raises:
        NonzeroErrorRateError: if any error rate is positive.
    """
    if any(g != 0.0 for g in model.error_rates):
        raise NonzeroErrorRateError("closed form requires all error_rates to be zero")
    p = model.parity_disks
    m = model.data_disks
    lam = model.failure_rates

    denominator = 1.0
    for i in range(p + 1):
        denominator *= lam[i] * (m + i)

    terms = []
    for mask_start in range(p):
        factors = masked_rate_factors(model, mask_start)
        product = 1.0
        for j, factor in enumerate(factors):
            if j != mask_start:
                product *= factor
        terms.append(product)
    numerator_sum = kahan_sum(terms)

    last_state_exit = p * model.repair_rates[p - 1] + m * lam[p]
    hours = last_state_exit / denominator * numerator_sum + 1.0 / (m * lam[p])
    return MttdlEstimate(hours=hours, method=Method.CLOSED_FORM)


def _determinant_recursion(
    model: FailureModel, correction_for: Callable[[int], float]
) -> float:
    """Evaluate the transient-block determinant by forward recurrence.

    ``correction_for(t)`` supplies the correction term entering at step
    ``t`` (``1 <= t <= parity_disks``); it is multiplied by
    ``error_rates[t - 1]``, so its value is irrelevant when that rate is
    zero.
    """
    n = model.total_disks
    p = model.parity_disks
    lam = model.failure_rates
    mu = model.repair_rates
    gam = model.error_rates

    determinant = n * lam[0]
    plain_product = n * lam[0]
    mixed_product = 1.0
    for t in range(1, p + 1):
        step_factor = t * mu[t - 1] + lam[t] * (n - t)
        loss_rate = gam[t - 1]
        corr = correction_for(t) if loss_rate > 0.0 else 0.0
        bracket = (determinant - plain_product) + loss_rate * (mixed_product + corr)
        plain_product = plain_product * (lam[t] * (n - t))
        determinant = plain_product + step_factor * bracket
        mixed_product = mixed_product * (loss_rate + lam[t - 1] * (n - t + 1))
    return determinant


def transient_block_determinant(
    model: FailureModel, correction_terms: Sequence[float] | None = None
) -> float:
    """Determinant of the transient generator block, by forward recurrence.

    Equals ``det`` of the leading ``parity_disks + 1`` square sub-matrix of
    :func:`build_transition_matrix` at offset zero, and is the denominator
    of the exact MTTDL expression. With all error rates zero it reduces
    exactly to the product of state total failure rates.

    Each recurrence step ``t`` with a positive ``error_rates[t - 1]`` needs
    a scalar correction term. The terms for steps 1 and 2 are zero and the
    step-3 term is ``error_rates[0] * repair_rates[0]``; no closed form is
    known for later steps, so those must be supplied.

    Args:
        model: chain parameters.
        correction_terms: optional override, one value per step
            ``1 .. parity_disks``. When omitted, the known defaults are used.

    Returns:
        The determinant (positive for valid models).

    Raises:
        UnknownCorrectionTermError: if a step beyond 3 has a positive error
            rate and no caller-supplied term.
        ValueError: if ``correction_terms`` has the wrong length.
    """
    p = model.parity_disks
    if correction_terms is not None:
        supplied = tuple(float(v) for v in correction_terms)
        if len(supplied) != p:
            raise ValueError(
                f"correction_terms must have {p} entries, got {len(supplied)}"
            )
        return _determinant_recursion(model, lambda t: supplied[t - 1])

    def default_correction(t: int) -> float:
        if t <= 2:
            return 0.0
        if t == 3:
            return model.error_rates[0] * model.repair_rates[0]
        raise UnknownCorrectionTermError(
            f"no known correction term for step {t}; pass correction_terms"
        )

    return _determinant_recursion(model, default_correction)


def transient_block_determinant_lower_bound(model: FailureModel) -> float:
    """Lower bound of :func:`transient_block_determinant` for any rates.

    Runs the same recurrence with every correction term forced to zero.
    Since the dropped terms are non-negative, the result never exceeds the
    true determinant, and matches it exactly when ``parity_disks <= 2`` or
    all error rates are zero.

    Args:
        model: chain parameters.

    Returns:
        The bounded determinant.
    """
    return _determinant_recursion(model, lambda t: 0.0)


def mttdl_upper_bound(model: FailureModel) -> MttdlEstimate:
    """Closed-form MTTDL upper bound valid for any error rates.

    Divides the exact closed-form numerator (products of the extended
    masked rate factors, summed over mask positions with compensated
    accumulation) by :func:`transient_block_determinant_lower_bound`. The
    result is never below :func:`mttdl_linear_solve` and coincides with it
    when ``parity_disks <= 2`` or all error rates are zero.

    Args:
        model: chain parameters.

    Returns:
        The estimate tagged ``Method.UPPER_BOUND``.
    """
    p = model.parity_disks
    terms = []
    for mask_start in range(p + 1):
        factors = _extended_masked_rate_factors(model, mask_start)
        product = 1.0
        for j, factor in enumerate(factors):
            if j != mask_start:
                product *= factor
        terms.append(product)
    numerator = kahan_sum(terms)
    hours = numerator / transient_block_determinant_lower_bound(model)
    return MttdlEstimate(hours=hours, method=Method.UPPER_BOUND)


def mttdl_recursive_step(
    current: MttdlEstimate,
    model_next: FailureModel,
    *,
    previous_model: FailureModel | None = None,
) -> MttdlEstimate:
    """Extend an MTTDL to a group with one more parity disk, same size.

    Given the MTTDL of a group and the model of the group obtained by
    re-labelling one data disk as parity (same ``total_disks``, one fewer
    data disk, all error rates zero), the new MTTDL is

    ``hours' = hours * (1 + gain / rate) + 1 / rate``

    with ``rate = failure_rates[p'] * data_disks'`` (the new last state's
    total failure rate) and ``gain = p' * repair_rates[p' - 1]`` (its total
    repair rate), where primes denote ``model_next`` quantities.

    Args:
        current: MTTDL of the narrower-parity group.
        model_next: target group with one more parity disk.
        previous_model: optional model that produced ``current``; when
            given, group size and rate prefixes are cross-checked.

    Returns:
        The estimate tagged ``Method.RECURSION``.

    Raises:
        NonzeroErrorRateError: if ``model_next`` has a positive error rate.
        DimensionMismatchError: if ``previous_model`` is supplied and is not
            the same-size group with exactly one more data disk and matching
            rate prefixes.
    """
    if any(g != 0.0 for g in model_next.error_rates):
        raise NonzeroErrorRateError("the parity recursion requires zero error_rates")
    p_next = model_next.parity_disks
    if previous_model is not None:
        if (
            previous_model.total_disks != model_next.total_disks
            or previous_model.data_disks != model_next.data_disks + 1
        ):
            raise DimensionMismatchError(
                "previous_model must describe the same group size with exactly "
                "one more data disk"
            )
        if (
            previous_model.failure_rates != model_next.failure_rates[:p_next]
            or previous_model.repair_rates != model_next.repair_rates[: p_next - 1]
        ):
            raise DimensionMismatchError(
                "previous_model rate vectors must be prefixes of model_next's"
            )
    rate = model_next.failure_rates[p_next] * model_next.data_disks
    gain = p_next * model_next.repair_rates[p_next - 1]
    hours = current.hours * (1.0 + gain / rate) + 1.0 / rate
    return MttdlEstimate(hours=hours, method=Method.RECURSION)


def _sub_group_mttdl(model: FailureModel, parity: int) -> MttdlEstimate:
    """MTTDL of the fresh sub-group keeping ``parity`` parity disks.

    The sub-group keeps the same data disks, truncates the group to
    ``data_disks + parity`` disks, and inherits the rate prefixes. With zero
    parity the group dies at its first failure.
    """
    m = model.data_disks
    if parity == 0:
        rate = m * model.failure_rates[0]
        if rate <= 0.0:
            raise SingularMatrixError(
                "zero-parity sub-group has no positive failure rate"
            )
        return MttdlEstimate(hours=1.0 / rate, method=Method.CLOSED_FORM)
    sub = FailureModel(
        total_disks=m + parity,
        data_disks=m,
        failure_rates=model.failure_rates[: parity + 1],
        repair_rates=model.repair_rates[:parity],
        error_rates=model.error_rates[:parity],
    )
    if any(g != 0.0 for g in sub.error_rates):
        return mttdl_linear_solve(sub)
    return mttdl_closed_form(sub)


def mttdl_with_initial_distribution(
    model: FailureModel, initial: InitialDistribution
) -> MttdlEstimate:
    """Average MTTDL over a distribution of disks already failed at start.

    A group starting with ``k`` disks already failed behaves like the fresh
    sub-group that keeps only ``parity_disks - k`` parity disks, so the
    result is the probability-weighted sum of sub-group MTTDLs; mass on the
    final (data-loss) entry contributes zero hours. Sub-groups whose error
    rates are all zero use the closed form, the rest the linear solver.

    Args:
        model: chain parameters of the full group.
        initial: distribution with ``parity_disks + 2`` entries, ordered
            from zero disks failed upward, data-loss entry last.

    Returns:
        The weighted estimate, tagged ``Method.LINEAR_SOLVE`` when any
        sub-group needed the linear solver and ``Method.CLOSED_FORM``
        otherwise.

    Raises:
        InvalidDistributionError: if the distribution length does not match
            the model.
    """
    p = model.parity_disks
    probs = initial.probabilities
    if len(probs) != p + 2:
        raise InvalidDistributionError(
            f"distribution needs {p + 2} entries for this model, got {len(probs)}"
        )
    terms = []
    used_linear_solver = False
    for already_failed in range(p + 1):
        weight = probs[already_failed]
        if weight == 0.0:
            continue
        sub_estimate = _sub_group_mttdl(model, p - already_failed)
        if sub_estimate.method is Method.LINEAR_SOLVE:
            used_linear_solver = True
        terms.append(weight * sub_estimate.hours)
    hours = kahan_sum(terms)
    method = Method.LINEAR_SOLVE if used_linear_solver else Method.CLOSED_FORM
    return MttdlEstimate(hours=hours, method=method)
