"""Pure-Python Monte Carlo trial loop.

This is the reference implementation of the simulation kernel. The compiled
extension in ``_kernel.pyx`` is a line-for-line twin; both draw the same
deterministic per-trial random stream and accumulate in the same order, so
their outputs are bit-identical. Keep any change mirrored in both files.

The random stream is a split-mix construction: trial ``t`` seeds its own
64-bit counter state from ``mix(seed ^ mix(t * WEYL + GOLDEN))``, and each
draw advances the counter by ``GOLDEN`` and finalizes it with the same
avalanche mix. A draw maps to the half-open unit interval via the top 53
bits plus one, giving a uniform value in ``(0, 1]`` so its logarithm is
always finite.
"""

from __future__ import annotations

from math import log

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_WEYL = 0xD1B54A32D192ED03
_INV53 = 1.0 / 9007199254740992.0


def _mix(z: int) -> int:
    """64-bit avalanche finalizer."""
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z


def run_trials(n, p, lam, mu, gam, trials, seed, max_events):
    """Run absorption trials of the reliability chain.

    Args:
        n: total disks.
        p: parity disks.
        lam: per-disk failure rates, ``p + 1`` floats.
        mu: per-disk repair rates, ``p`` floats.
        gam: direct data-loss rates, ``p`` floats.
        trials: number of independent trials.
        seed: 64-bit base seed.
        max_events: per-trial transition budget; trials exceeding it are
            abandoned and excluded from the time accumulators.

    Returns:
        ``(total_hours, total_squared_hours, completed, truncated)`` where
        the first two sum absorption times (and their squares) over
        completed trials in trial order.
    """
    total_time = 0.0
    total_sq = 0.0
    completed = 0
    truncated = 0
    for t in range(trials):
        stream = _mix((seed ^ _mix((t * _WEYL + _GOLDEN) & _MASK)) & _MASK)
        elapsed = 0.0
        state = 0
        events = 0
        lost = False
        while True:
            fail = (n - state) * lam[state]
            if state > 0:
                rep = state * mu[state - 1]
            else:
                rep = 0.0
            if state < p:
                direct = gam[state]
            else:
                direct = 0.0
            total = (fail + rep) + direct

            stream = (stream + _GOLDEN) & _MASK
            z = _mix(stream)
            u1 = ((z >> 11) + 1) * _INV53
            elapsed += -log(u1) / total

            stream = (stream + _GOLDEN) & _MASK
            z = _mix(stream)
            u2 = ((z >> 11) + 1) * _INV53
            r = u2 * total

            events += 1
            if r < fail:
                if state == p:
                    lost = True
                else:
                    state += 1
            elif r < fail + rep:
                state = 0
            elif direct > 0.0:
                lost = True
            elif rep > 0.0:
                state = 0
            else:
                if state == p:
                    lost = True
                else:
                    state += 1

            if lost:
                sq = elapsed * elapsed
                total_time += elapsed
                total_sq += sq
                completed += 1
                break
            if events >= max_events:
                truncated += 1
                break
    return total_time, total_sq, completed, truncated
