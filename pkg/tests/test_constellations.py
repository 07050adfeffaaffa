import math

import numpy as np
import pytest

from cpamac import (
    Constellation,
    by_name,
    is_uniquely_decodable,
    load_constellation,
    make_8qam,
    make_psk,
    make_qam,
    rotate,
    sum_constellation,
)
from cpamac.constellations import average_power


def as_set(points, tol=1e-9):
    return {complex(round(p.real / tol) * tol, round(p.imag / tol) * tol) for p in points}


class TestGenerators:
    def test_bpsk_is_antipodal(self):
        c = make_psk(2)
        assert as_set(c.points) == {1 + 0j, -1 + 0j}

    def test_qpsk_convention(self):
        c = make_psk(4)
        s = 1 / math.sqrt(2)
        expected = [complex(a, b) for a in (s, -s) for b in (s, -s)]
        assert as_set(c.points) == as_set(expected)

    def test_8psk_on_unit_circle(self):
        c = make_psk(8)
        assert np.allclose(np.abs(c.points), 1.0)
        assert average_power(c) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("M", [2, 4, 8, 16, 32])
    def test_psk_unit_power(self, M):
        assert average_power(make_psk(M)) == pytest.approx(1.0, rel=1e-9)

    def test_psk_rejects_small_order(self):
        with pytest.raises(ValueError):
            make_psk(1)

    def test_16qam_inphase_levels(self):
        c = make_qam(16)
        # in-phase values are exactly (1/sqrt(10)) * {-3, -1, 1, 3}
        expected = np.array([-3.0, -1.0, 1.0, 3.0]) / math.sqrt(10.0)
        assert np.allclose(np.unique(c.points.real), expected, atol=1e-12)
        assert average_power(c) == pytest.approx(1.0, rel=1e-12)

    def test_4qam_equals_qpsk_as_set(self):
        assert as_set(make_qam(4).points) == as_set(make_psk(4).points)

    @pytest.mark.parametrize("M", [5, 8, 12])
    def test_qam_rejects_non_square(self, M):
        with pytest.raises(ValueError):
            make_qam(M)

    def test_8qam_shape_and_scale(self):
        c = make_8qam()
        assert c.size == 8
        assert average_power(c) == pytest.approx(1.0, rel=1e-12)
        # oracle: mean of |a+ib|^2 over the 4x2 grid by direct summation
        mean_power = sum(a * a + b * b for a in (-3, -1, 1, 3) for b in (-1, 1)) / 8
        assert mean_power == 6
        assert np.allclose(sorted(np.unique(c.points.real)),
                           np.array([-3, -1, 1, 3]) / math.sqrt(6.0))

    def test_constellation_requires_two_distinct_points(self):
        with pytest.raises(ValueError):
            Constellation(np.array([1 + 0j]))
        with pytest.raises(ValueError):
            Constellation(np.array([1 + 0j, 1 + 0j, -1 + 0j]))

    def test_by_name_roundtrip(self):
        for name in ("bpsk", "qpsk", "8psk", "16psk", "8qam", "16qam"):
            assert by_name(name).label == name
        with pytest.raises(ValueError):
            by_name("64apsk")


class TestRotate:
    def test_identity(self, qpsk):
        assert np.allclose(rotate(qpsk, 0.0).points, qpsk.points)

    def test_qpsk_quarter_turn_is_same_set(self, qpsk):
        assert as_set(rotate(qpsk, math.pi / 2).points) == as_set(qpsk.points)

    def test_inverse(self, psk8):
        back = rotate(rotate(psk8, 0.7), -0.7)
        assert np.allclose(back.points, psk8.points, atol=1e-12)

    def test_preserves_pairwise_distances(self, qam16):
        r = rotate(qam16, 1.1)
        d0 = np.abs(qam16.points[:, None] - qam16.points[None, :])
        d1 = np.abs(r.points[:, None] - r.points[None, :])
        assert np.allclose(d0, d1, atol=1e-12)


class TestSumConstellation:
    def test_cardinality_with_duplicates(self, qpsk):
        sc = sum_constellation(qpsk, qpsk, 1.0, 1.0)
        assert sc.size == 16  # duplicates retained

    def test_degenerate_scale_copies(self, qpsk):
        sc = sum_constellation(qpsk, qpsk, 1.0, 0.0)
        pts = sc.points.reshape(4, 4)
        for k1 in range(4):
            assert np.allclose(pts[k1], qpsk.points[k1])

    def test_row_major_indexing(self, qpsk, psk8):
        sc = sum_constellation(qpsk, psk8, 2.0, 0.5)
        assert sc.point(1, 3) == pytest.approx(2.0 * qpsk.points[1] + 0.5 * psk8.points[3])

    def test_unequal_scales_distinct(self, qpsk):
        sc = sum_constellation(qpsk, qpsk, 2.0, 1.0)
        # brute-force pairwise distinctness over all 16 points
        pts = sc.points
        for i in range(16):
            for j in range(i + 1, 16):
                assert abs(pts[i] - pts[j]) > 1e-9


class TestUniquelyDecodable:
    def test_equal_scales_collide(self, qpsk):
        assert not is_uniquely_decodable(qpsk, qpsk, 1.0, 1.0)

    def test_cpa_scales_are_ud(self, qpsk):
        a1, a2 = math.sqrt(1.6), math.sqrt(0.4)
        assert is_uniquely_decodable(qpsk, qpsk, a1, a2)
        # oracle: brute force over all 120 unordered point pairs
        pts = (a1 * qpsk.points[:, None] + a2 * qpsk.points[None, :]).ravel()
        seen = 0
        for i in range(16):
            for j in range(i + 1, 16):
                seen += 1
                assert abs(pts[i] - pts[j]) > 1e-9 * np.abs(pts).max()
        assert seen == 120

    def test_zero_scale_never_ud(self, qpsk, psk8):
        assert not is_uniquely_decodable(qpsk, psk8, 1.0, 0.0)

    def test_swap_symmetry(self, qpsk, psk8):
        for a1, a2 in [(1.3, 0.7), (1.0, 1.0), (2.0, 0.0)]:
            assert is_uniquely_decodable(qpsk, psk8, a1, a2) == is_uniquely_decodable(psk8, qpsk, a2, a1)

    def test_common_scale_invariance(self, qpsk):
        for c in (2.0, 0.25, 1024.0):
            assert is_uniquely_decodable(qpsk, qpsk, math.sqrt(1.6), math.sqrt(0.4)) == \
                is_uniquely_decodable(qpsk, qpsk, c * math.sqrt(1.6), c * math.sqrt(0.4))

    def test_common_rotation_invariance(self, qpsk, psk8):
        for phi in (0.3, 1.2):
            assert is_uniquely_decodable(qpsk, psk8, 1.2, 0.8) == \
                is_uniquely_decodable(rotate(qpsk, phi), rotate(psk8, phi), 1.2, 0.8)

    def test_tol_must_be_positive(self, qpsk):
        with pytest.raises(ValueError):
            is_uniquely_decodable(qpsk, qpsk, 1.0, 0.5, tol=0.0)


class TestLoadConstellation:
    def test_basic(self, tmp_path):
        f = tmp_path / "c.txt"
        f.write_text("1 0\n-1 0\n")
        c = load_constellation(f)
        assert as_set(c.points) == {1 + 0j, -1 + 0j}
        assert c.label == "c"

    def test_comments_and_blanks(self, tmp_path):
        f = tmp_path / "c.txt"
        f.write_text("# header\n\n1 0  # one\n-1 0\n")
        assert load_constellation(f).size == 2

    def test_normalization(self, tmp_path):
        f = tmp_path / "c.txt"
        f.write_text("3 0\n-3 0\n")
        c = load_constellation(f)
        assert as_set(c.points) == {1 + 0j, -1 + 0j}

    def test_no_normalize_keeps_power(self, tmp_path):
        f = tmp_path / "c.txt"
        f.write_text("3 0\n-3 0\n")
        c = load_constellation(f, normalize=False)
        assert average_power(c) == pytest.approx(9.0)

    def test_parse_error_names_line(self, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("1 0\noops\n")
        with pytest.raises(ValueError, match="bad.txt:2"):
            load_constellation(f)

    def test_wrong_field_count_names_line(self, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("1 0\n2 0 0\n")
        with pytest.raises(ValueError, match="bad.txt:2"):
            load_constellation(f)

    def test_duplicate_points_rejected(self, tmp_path):
        f = tmp_path / "dup.txt"
        f.write_text("1 0\n1 0\n-1 0\n")
        with pytest.raises(ValueError, match="distinct"):
            load_constellation(f)

    def test_too_few_points(self, tmp_path):
        f = tmp_path / "one.txt"
        f.write_text("1 0\n")
        with pytest.raises(ValueError, match="at least 2"):
            load_constellation(f)
