"""Distributed placement of erasure-protected groups across storage nodes.

Two ways of spreading ``z`` storage nodes' worth of data are compared. Under
*horizontal* placement each protection group lives inside one node, the
system fails when its weakest node fails, and (modelling node lifetimes as
Weibull with shape ``k``) the system MTTDL is the per-node MTTDL divided by
``z ** (1 / k)``. Under *vertical* placement each group stripes one disk
across every node, so a group sees the pool's aggregate failure behaviour:
a birth-death chain over the number of concurrently failed nodes yields the
pool's steady state, from which an average failure rate and a distribution
of already-failed disks per group are derived; the group MTTDL is then the
weighted sub-group average, and the same ``z ** (1 / k)`` weakest-of-many
division gives the system figure.

The point of the comparison: when failure rates climb steeply while
degraded, vertical placement lets independent nodes absorb the degradation
instead of concentrating it inside one group — up to the growth level where
the pool itself saturates with failed nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import PolicyMismatchError, RateVectorMismatchError
from .growth import GrowthSpec, logistic_failure_rate
from .markov_core import (
    FailureModel,
    InitialDistribution,
    Method,
    MttdlEstimate,
    kahan_sum,
    mttdl_closed_form,
    mttdl_linear_solve,
    mttdl_with_initial_distribution,
)

__all__ = [
    "Policy",
    "AllocationScenario",
    "NodeSteadyState",
    "weibull_scale_for_mean",
    "horizontal_system_mttdl",
    "node_steady_state",
    "average_failure_rate",
    "vertical_epg_mttdl",
    "system_mttdl",
]

_PROBABILITY_TOLERANCE = 1e-9


class Policy(str, Enum):
    """How protection groups are laid out across nodes."""

    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


@dataclass(frozen=True)
class AllocationScenario:
    """A placement comparison case.

    Attributes:
        node_count: storage nodes in the pool, ``>= 1``.
        policy: placement policy under study.
        weibull_shape: shape of the node-lifetime Weibull law, ``> 0``
            (1 recovers the exponential).
        epg_model: reliability model of one protection group.
        growth: failure-rate growth law shared by the group and, under
            vertical placement, the node pool.
    """

    node_count: int
    policy: Policy
    weibull_shape: float
    epg_model: FailureModel
    growth: GrowthSpec

    def __post_init__(self) -> None:
        if not isinstance(self.node_count, int) or self.node_count < 1:
            raise ValueError(f"node_count must be an integer >= 1, got {self.node_count}")
        if not isinstance(self.policy, Policy):
            raise ValueError(f"policy must be a Policy member, got {self.policy!r}")
        object.__setattr__(self, "weibull_shape", float(self.weibull_shape))
        if not math.isfinite(self.weibull_shape) or self.weibull_shape <= 0.0:
            raise ValueError(
                f"weibull_shape must be finite and > 0, got {self.weibull_shape}"
            )
        if not isinstance(self.epg_model, FailureModel):
            raise ValueError("epg_model must be a FailureModel")
        if not isinstance(self.growth, GrowthSpec):
            raise ValueError("growth must be a GrowthSpec")
        if (
            self.policy is Policy.VERTICAL
            and self.node_count != self.epg_model.total_disks
        ):
            raise ValueError(
                "vertical placement stripes one disk per node, so node_count "
                f"({self.node_count}) must equal the group's total_disks "
                f"({self.epg_model.total_disks})"
            )


@dataclass(frozen=True)
class NodeSteadyState:
    """Steady state of the node pool's failure birth-death chain.

    Attributes:
        state_probabilities: probability of ``j`` nodes being down, ordered
            ``j = 0 .. node_count``; sums to one within ``1e-9``.
        operational_fractions: per down-count ``j``, the probability-mass
            share of still-operational nodes, ``(z - j) / z *
            state_probabilities[j]``; the last entry is zero.
        failure_fraction: complementary share of down nodes, so the
            fractions plus this value sum to one within ``1e-9``.
    """

    state_probabilities: tuple[float, ...]
    operational_fractions: tuple[float, ...]
    failure_fraction: float

    def __post_init__(self) -> None:
        pi = tuple(float(v) for v in self.state_probabilities)
        theta = tuple(float(v) for v in self.operational_fractions)
        object.__setattr__(self, "state_probabilities", pi)
        object.__setattr__(self, "operational_fractions", theta)
        object.__setattr__(self, "failure_fraction", float(self.failure_fraction))
        if len(theta) != len(pi):
            raise ValueError("operational_fractions must match state_probabilities")
        if abs(kahan_sum(pi) - 1.0) > _PROBABILITY_TOLERANCE:
            raise ValueError("state_probabilities must sum to 1 within 1e-9")
        if (
            abs(kahan_sum(theta) + self.failure_fraction - 1.0)
            > _PROBABILITY_TOLERANCE
        ):
            raise ValueError(
                "operational_fractions plus failure_fraction must sum to 1 within 1e-9"
            )

    @property
    def node_count(self) -> int:
        return len(self.state_probabilities) - 1


def weibull_scale_for_mean(mean_hours: float, shape: float) -> float:
    """Scale parameter of the Weibull law with the given mean and shape.

    ``mean = scale * gamma(1 + 1 / shape)``, inverted with the standard
    library's gamma (relative error well below ``1e-12``).

    Args:
        mean_hours: desired mean, ``> 0``.
        shape: Weibull shape, ``> 0``.

    Returns:
        The scale in hours.
    """
    if not mean_hours > 0.0:
        raise ValueError(f"mean_hours must be > 0, got {mean_hours}")
    if not shape > 0.0:
        raise ValueError(f"shape must be > 0, got {shape}")
    return mean_hours / math.gamma(1.0 + 1.0 / shape)


def horizontal_system_mttdl(
    epg_mttdl_hours: float, node_count: int, weibull_shape: float
) -> float:
    """System MTTDL when every group lives inside a single node.

    The system survives until the first of ``node_count`` independent
    Weibull lifetimes ends; the minimum of Weibulls is Weibull with the
    scale shrunk by ``node_count ** (1 / shape)``, and the mean shrinks by
    the same factor:

    ``epg_mttdl_hours / node_count ** (1 / weibull_shape)``.

    Args:
        epg_mttdl_hours: MTTDL of one group (one node), ``>= 0``.
        node_count: pool size, ``>= 1``.
        weibull_shape: node-lifetime shape, ``> 0``.

    Returns:
        The system MTTDL in hours.
    """
    if epg_mttdl_hours < 0.0:
        raise ValueError(f"epg_mttdl_hours must be >= 0, got {epg_mttdl_hours}")
    if not isinstance(node_count, int) or node_count < 1:
        raise ValueError(f"node_count must be an integer >= 1, got {node_count}")
    if not weibull_shape > 0.0:
        raise ValueError(f"weibull_shape must be > 0, got {weibull_shape}")
    return epg_mttdl_hours / node_count ** (1.0 / weibull_shape)


def node_steady_state(
    node_count: int,
    failure_rates: Sequence[float],
    repair_rates: Sequence[float],
) -> NodeSteadyState:
    """Steady state of the pool's failed-node birth-death chain.

    With ``j`` nodes down, one more node fails at rate ``(node_count - j) *
    failure_rates[j]`` and one repair completes at rate ``repair_rates[j-1]``
    (nodes are restored one at a time). Detailed balance gives the product
    form

    ``prob(j) = prod(f < j) [(node_count - f) * failure_rates[f] /
    repair_rates[f]] / normalizer``;

    products and the normalizer are evaluated in log space so pools of
    hundreds of nodes cannot overflow.

    Args:
        node_count: pool size, ``>= 1``.
        failure_rates: per-node failure rate when ``j`` nodes are down,
            ``node_count`` positive entries.
        repair_rates: repair completion rate when ``j + 1`` nodes are down,
            ``node_count`` positive entries.

    Returns:
        The :class:`NodeSteadyState`.

    Raises:
        RateVectorMismatchError: if a rate vector does not have exactly
            ``node_count`` entries.
        ValueError: if any rate is not positive.
    """
    if not isinstance(node_count, int) or node_count < 1:
        raise ValueError(f"node_count must be an integer >= 1, got {node_count}")
    lam = tuple(float(v) for v in failure_rates)
    mu = tuple(float(v) for v in repair_rates)
    if len(lam) != node_count:
        raise RateVectorMismatchError(
            f"failure_rates needs {node_count} entries, got {len(lam)}"
        )
    if len(mu) != node_count:
        raise RateVectorMismatchError(
            f"repair_rates needs {node_count} entries, got {len(mu)}"
        )
    for name, rates in (("failure_rates", lam), ("repair_rates", mu)):
        for idx, v in enumerate(rates):
            if not math.isfinite(v) or v <= 0.0:
                raise ValueError(f"{name}[{idx}] must be finite and > 0, got {v}")

    log_weights = np.empty(node_count + 1)
    log_weights[0] = 0.0
    acc = 0.0
    for j in range(node_count):
        acc += math.log((node_count - j) * lam[j]) - math.log(mu[j])
        log_weights[j + 1] = acc
    log_norm = float(logsumexp(log_weights))
    pi = np.exp(log_weights - log_norm)

    down_counts = np.arange(node_count + 1)
    theta = (node_count - down_counts) / node_count * pi
    failure_fraction = float(np.sum(down_counts / node_count * pi))
    return NodeSteadyState(
        state_probabilities=tuple(float(v) for v in pi),
        operational_fractions=tuple(float(v) for v in theta),
        failure_fraction=failure_fraction,
    )


def average_failure_rate(
    state: NodeSteadyState, failure_rates: Sequence[float]
) -> float:
    """Steady-state average per-node failure rate seen by a striped group.

    Weights each down-count's failure rate by the matching operational
    fraction: ``sum(j < node_count) failure_rates[j] *
    operational_fractions[j]``.

    Args:
        state: pool steady state.
        failure_rates: the same per-node rates the steady state was built
            from, ``node_count`` entries.

    Returns:
        The averaged rate in 1/hour.

    Raises:
        RateVectorMismatchError: if the rate vector length does not match.
    """
    z = state.node_count
    lam = tuple(float(v) for v in failure_rates)
    if len(lam) != z:
        raise RateVectorMismatchError(f"failure_rates needs {z} entries, got {len(lam)}")
    return float(np.dot(lam, state.operational_fractions[:z]))


def _node_rate_vectors(
    scenario: AllocationScenario,
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Failure/repair rate vectors of the node chain for a scenario.

    Node failure rates follow the scenario's growth law in the number of
    down nodes; the repair rate is the group model's first repair-rate entry
    in every state (one facility restores one node at a time).
    """
    z = scenario.node_count
    lam = tuple(logistic_failure_rate(scenario.growth, j) for j in range(z))
    mu = (scenario.epg_model.repair_rates[0],) * z
    return lam, mu


def vertical_epg_mttdl(scenario: AllocationScenario) -> float:
    """MTTDL of one vertically striped protection group.

    The pool steady state (see :func:`node_steady_state`) yields the
    average per-disk failure rate and the probability ``rho`` that the node
    under any given disk is down. A group of ``total_disks`` disks then
    starts with a binomial number of disks already failed; counts beyond
    ``parity_disks`` mean data already lost. The group MTTDL is the
    binomially weighted sub-group average, computed on the flattened model
    that uses the average failure rate in every state together with the
    group's own repair rates.

    Args:
        scenario: placement case with ``policy == Policy.VERTICAL``.

    Returns:
        The group MTTDL in hours.

    Raises:
        PolicyMismatchError: if the scenario is not vertical.
    """
    if scenario.policy is not Policy.VERTICAL:
        raise PolicyMismatchError(
            f"vertical_epg_mttdl needs a vertical scenario, got {scenario.policy}"
        )
    model = scenario.epg_model
    node_lam, node_mu = _node_rate_vectors(scenario)
    state = node_steady_state(scenario.node_count, node_lam, node_mu)
    averaged_rate = average_failure_rate(state, node_lam)
    rho = state.failure_fraction

    p = model.parity_disks
    n = model.total_disks
    averaged_model = FailureModel(
        total_disks=n,
        data_disks=model.data_disks,
        failure_rates=(averaged_rate,) * (p + 1),
        repair_rates=model.repair_rates,
        error_rates=(0.0,) * p,
    )
    weights = [
        math.comb(n, down) * rho**down * (1.0 - rho) ** (n - down)
        for down in range(p + 1)
    ]
    already_lost = 1.0 - kahan_sum(weights)
    if already_lost < 0.0:
        already_lost = 0.0
    initial = InitialDistribution(probabilities=(*weights, already_lost))
    return mttdl_with_initial_distribution(averaged_model, initial).hours


def system_mttdl(scenario: AllocationScenario) -> MttdlEstimate:
    """System MTTDL of a placement scenario.

    Horizontal scenarios evaluate the group model directly (closed form
    when its error rates are zero, linear solve otherwise); vertical
    scenarios use :func:`vertical_epg_mttdl`. Either way the per-group
    figure is divided by ``node_count ** (1 / weibull_shape)`` for the
    weakest-of-many system effect.

    Args:
        scenario: placement case.

    Returns:
        The system estimate; its method tag reflects the per-group
        computation.
    """
    if scenario.policy is Policy.HORIZONTAL:
        model = scenario.epg_model
        if any(g != 0.0 for g in model.error_rates):
            per_group = mttdl_linear_solve(model)
        else:
            per_group = mttdl_closed_form(model)
        hours = per_group.hours
        method = per_group.method
    else:
        hours = vertical_epg_mttdl(scenario)
        method = Method.CLOSED_FORM
    system_hours = horizontal_system_mttdl(
        hours, scenario.node_count, scenario.weibull_shape
    )
    return MttdlEstimate(hours=system_hours, method=method)
