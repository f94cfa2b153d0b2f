"""Tests for average reconstruction read overhead and code profiles."""

from __future__ import annotations

import math

import pytest

from oracles import enumerated_read_overhead
from mttdl.errors import MalformedProfileError
from mttdl.overhead import (
    BUILTIN_PROFILE_NAMES,
    AccessPattern,
    CodeProfile,
    asymptotic_overhead,
    avg_read_overhead,
    builtin_profile,
    load_code_profile,
)


class TestAccessPattern:
    def test_mds_constructor(self):
        pattern = AccessPattern.mds(18, 12)
        assert pattern.recovery_set_sizes == (12,) * 12
        assert pattern.mean_recovery_set_size == 12.0

    def test_mean_of_heterogeneous_sizes(self):
        pattern = AccessPattern(8, 5, (1, 2, 3, 4, 5))
        assert pattern.mean_recovery_set_size == 3.0

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError, match="recovery_set_sizes"):
            AccessPattern(8, 5, (1, 2, 3))

    def test_rejects_out_of_range_sizes(self):
        with pytest.raises(ValueError, match=r"\[1, 7\]"):
            AccessPattern(8, 5, (1, 2, 3, 4, 8))
        with pytest.raises(ValueError, match=r"\[1, 7\]"):
            AccessPattern(8, 5, (0, 2, 3, 4, 5))

    def test_rejects_bad_disk_counts(self):
        with pytest.raises(ValueError, match="integers"):
            AccessPattern(8.0, 5, (1,) * 5)
        with pytest.raises(ValueError, match="data_disks"):
            AccessPattern(5, 5, (1,) * 5)


class TestAvgReadOverhead:
    def test_single_failure_mds_example(self):
        got = avg_read_overhead(AccessPattern.mds(18, 12), 1)
        assert math.isclose(got, 29.0 / 18.0, rel_tol=1e-14)

    def test_zero_failures_cost_one(self):
        assert avg_read_overhead(AccessPattern.mds(18, 12), 0) == 1.0
        assert avg_read_overhead(AccessPattern(8, 5, (1, 2, 3, 4, 5)), 0) == 1.0

    def test_matches_exhaustive_enumeration_mds(self):
        for total, data in ((6, 4), (9, 5), (12, 8)):
            pattern = AccessPattern.mds(total, data)
            for failures in range(total - data + 1):
                expected = enumerated_read_overhead(
                    total, pattern.recovery_set_sizes, failures
                )
                got = avg_read_overhead(pattern, failures)
                assert math.isclose(got, expected, rel_tol=1e-12)

    def test_matches_exhaustive_enumeration_heterogeneous(self):
        pattern = AccessPattern(8, 5, (1, 2, 3, 4, 5))
        for failures in range(4):
            expected = enumerated_read_overhead(8, (1, 2, 3, 4, 5), failures)
            assert math.isclose(
                avg_read_overhead(pattern, failures), expected, rel_tol=1e-12
            )

    def test_equals_asymptotic_form_at_any_size(self):
        # The subset average is linear in the number of lost data blocks, so
        # it collapses to the closed asymptotic expression exactly.
        for pattern in (
            AccessPattern.mds(18, 12),
            AccessPattern.mds(180, 120),
            AccessPattern(8, 5, (1, 2, 3, 4, 5)),
        ):
            for failures in range(pattern.total_disks - pattern.data_disks + 1):
                exact = avg_read_overhead(pattern, failures)
                closed = asymptotic_overhead(pattern, failures)
                assert math.isclose(exact, closed, rel_tol=1e-12)

    def test_published_mds_table(self):
        pattern = AccessPattern.mds(18, 12)
        published = builtin_profile("generic-mds").read_overhead
        for failures, expected in enumerate(published):
            assert abs(avg_read_overhead(pattern, failures) - expected) <= 0.005

    def test_out_of_range_failures(self):
        pattern = AccessPattern.mds(18, 12)
        with pytest.raises(IndexError, match=r"\[0, 6\]"):
            avg_read_overhead(pattern, 7)
        with pytest.raises(IndexError, match=r"\[0, 6\]"):
            avg_read_overhead(pattern, -1)


class TestAsymptoticOverhead:
    def test_closed_expression(self):
        pattern = AccessPattern.mds(18, 12)
        assert asymptotic_overhead(pattern, 3) == 1.0 + 11.0 * 3.0 / 18.0

    def test_rejects_negative_failures(self):
        with pytest.raises(ValueError, match="failures"):
            asymptotic_overhead(AccessPattern.mds(18, 12), -1)


def profile_fields(**overrides):
    fields = dict(
        name="toy",
        total_disks=6,
        data_disks=4,
        recoverability=(1.0, 1.0, 0.8),
        read_overhead=(1.0, 1.3, 1.9),
    )
    fields.update(overrides)
    return fields


class TestCodeProfile:
    def test_full_recoverability_limit(self):
        profile = CodeProfile(**profile_fields())
        assert profile.full_recoverability_limit == 1

    def test_limit_stops_at_first_gap(self):
        profile = CodeProfile(
            **profile_fields(
                total_disks=8,
                recoverability=(1.0, 1.0, 0.9, 1.0, 0.5),
                read_overhead=(1.0, 1.2, 1.4, 1.6, 1.8),
            )
        )
        assert profile.full_recoverability_limit == 1

    def test_rejects_empty_name(self):
        with pytest.raises(MalformedProfileError, match="name"):
            CodeProfile(**profile_fields(name=""))

    def test_rejects_wrong_table_lengths(self):
        with pytest.raises(MalformedProfileError, match="recoverability needs 3"):
            CodeProfile(**profile_fields(recoverability=(1.0, 1.0)))
        with pytest.raises(MalformedProfileError, match="read_overhead needs 3"):
            CodeProfile(**profile_fields(read_overhead=(1.0, 1.3)))

    def test_rejects_bad_leading_entries(self):
        with pytest.raises(MalformedProfileError, match=r"recoverability\[0\]"):
            CodeProfile(**profile_fields(recoverability=(0.9, 0.9, 0.8)))
        with pytest.raises(MalformedProfileError, match=r"read_overhead\[0\]"):
            CodeProfile(**profile_fields(read_overhead=(1.1, 1.3, 1.9)))

    def test_rejects_out_of_range_entries(self):
        with pytest.raises(MalformedProfileError, match=r"recoverability\[2\]"):
            CodeProfile(**profile_fields(recoverability=(1.0, 1.0, 1.2)))
        with pytest.raises(MalformedProfileError, match=r"read_overhead\[1\]"):
            CodeProfile(**profile_fields(read_overhead=(1.0, 0.9, 1.9)))


class TestLoadCodeProfile:
    def test_round_trip(self):
        profile = load_code_profile(profile_fields())
        assert profile.name == "toy"
        assert profile.recoverability == (1.0, 1.0, 0.8)

    def test_missing_keys_are_listed(self):
        source = profile_fields()
        del source["recoverability"]
        del source["name"]
        with pytest.raises(MalformedProfileError, match="name, recoverability"):
            load_code_profile(source)

    def test_malformed_field_types(self):
        with pytest.raises(MalformedProfileError, match="malformed"):
            load_code_profile(profile_fields(read_overhead=(1.0, "x", 1.9)))


class TestBuiltinProfiles:
    def test_names(self):
        assert BUILTIN_PROFILE_NAMES == (
            "generic-mds",
            "basic-pyramid",
            "generalized-pyramid",
            "generalized-pyramid-no-global",
        )

    def test_all_validate_and_share_geometry(self):
        for name in BUILTIN_PROFILE_NAMES:
            profile = builtin_profile(name)
            assert profile.total_disks == 18
            assert profile.data_disks == 12
            assert len(profile.read_overhead) == 7

    def test_full_recoverability_limits(self):
        limits = {
            "generic-mds": 6,
            "basic-pyramid": 4,
            "generalized-pyramid": 4,
            "generalized-pyramid-no-global": 3,
        }
        for name, expected in limits.items():
            assert builtin_profile(name).full_recoverability_limit == expected

    def test_unknown_name(self):
        with pytest.raises(MalformedProfileError, match="unknown builtin"):
            builtin_profile("no-such-profile")
