# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Monte Carlo trial loop.

Line-for-line twin of ``mttdl.montecarlo._reference``; see that module for
the stream construction. Both backends must stay bit-identical: keep edits
mirrored, and avoid fused multiply-add patterns (sums of products go through
explicit temporaries so the C compiler cannot contract them).
"""

from libc.math cimport log
from libc.stdint cimport int64_t, uint64_t

cdef double _INV53 = 1.0 / 9007199254740992.0
cdef uint64_t _GOLDEN = 0x9E3779B97F4A7C15
cdef uint64_t _WEYL = 0xD1B54A32D192ED03


cdef inline uint64_t _mix(uint64_t z) nogil:
    z ^= z >> 30
    z = z * <uint64_t>0xBF58476D1CE4E5B9
    z ^= z >> 27
    z = z * <uint64_t>0x94D049BB133111EB
    z ^= z >> 31
    return z


def run_trials(int n, int p, double[::1] lam, double[::1] mu, double[::1] gam,
               int64_t trials, uint64_t seed, int64_t max_events):
    """Run absorption trials; see the reference twin for the contract."""
    cdef double total_time = 0.0
    cdef double total_sq = 0.0
    cdef int64_t completed = 0
    cdef int64_t truncated = 0
    cdef int64_t t, events
    cdef uint64_t stream, z
    cdef int state
    cdef bint lost
    cdef double fail, rep, direct, total, u1, u2, r, elapsed, sq

    with nogil:
        for t in range(trials):
            stream = _mix(seed ^ _mix(<uint64_t>t * _WEYL + _GOLDEN))
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

                stream = stream + _GOLDEN
                z = _mix(stream)
                u1 = ((z >> 11) + 1) * _INV53
                elapsed += -log(u1) / total

                stream = stream + _GOLDEN
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
