"""Coherent-state construction, overlaps, expectations, occupation, quantization."""

import cmath
import math

import numpy as np
import pytest

from mobiuscs.errors import DomainError, PrecisionError
from mobiuscs.states import (
    FockVector,
    StateLabel,
    bargmann_coeff,
    build_cs,
    default_j_max,
    distribution,
    evolve,
    expect_j,
    expect_u,
    fiducial,
    gaussian_distribution,
    level_grid,
    norm2,
    overlap,
    quantization_scan,
    temporal_fidelity,
)

RNG = np.random.default_rng(314159)

# frozen from the direct-summation oracles (sum over |j| <= 12)
FIDUCIAL_AMPLITUDE_SUM = 2.5066282880429056   # sum_j exp(-j^2/2), j in Z
FIDUCIAL_NORM2_INT = 1.772637204826652        # sum_j exp(-j^2),  j in Z
FIDUCIAL_NORM2_HALF = 1.7722704969843799      # sum_j exp(-j^2),  j in Z + 1/2


def label_for_center(center, phi, r, s=0.0):
    """Back-solve l so the Gaussian center comes out at ``center`` exactly."""
    l = center - r * math.sin(0.5 * phi) + math.log(1.0 + r * math.cos(0.5 * phi))
    return StateLabel(l=l, phi=phi, r=r, s=s)


class TestBuildCS:
    def test_fiducial_center_coefficient(self):
        v = fiducial()
        assert v.c[v.j.size // 2] == 1.0  # j = 0 term of the unit label

    def test_fiducial_amplitude_sum(self):
        v = fiducial(j_max=12)
        assert np.sum(v.c).real == pytest.approx(FIDUCIAL_AMPLITUDE_SUM, abs=1e-14)
        assert abs(np.sum(v.c).real - math.sqrt(2 * math.pi)) < 2e-8

    def test_fiducial_norms_both_sectors(self):
        assert fiducial(j_max=12, s=0.0).norm2() == pytest.approx(FIDUCIAL_NORM2_INT, abs=1e-14)
        assert fiducial(j_max=12, s=0.5).norm2() == pytest.approx(FIDUCIAL_NORM2_HALF, abs=1e-14)

    def test_half_sector_coefficient_value(self):
        lab = StateLabel(l=0.0, phi=math.pi, r=0.5, s=0.5)
        v = build_cs(lab)
        idx = np.nonzero(v.j == 0.5)[0][0]
        expected = cmath.exp(0.5 * 0.5 - 1j * math.pi / 2) * math.exp(-0.125)
        assert abs(v.c[idx] - expected) < 1e-15

    def test_coefficients_match_bargmann_conjugate(self):
        lab = StateLabel(l=0.2, phi=1.7, r=0.4, s=0.0)
        v = build_cs(lab)
        for idx in (0, v.j.size // 2, v.j.size - 1):
            assert abs(np.conj(v.c[idx]) - bargmann_coeff(lab, float(v.j[idx]))) < 1e-14

    def test_insufficient_cutoff_raises(self):
        lab = StateLabel(l=3.0, phi=0.0, r=0.5)
        with pytest.raises(PrecisionError):
            build_cs(lab, j_max=3)

    def test_label_validation(self):
        with pytest.raises(DomainError):
            StateLabel(l=0.0, phi=0.0, r=1.2)
        with pytest.raises(DomainError):
            StateLabel(l=0.0, phi=0.0, r=0.5, s=0.3)
        with pytest.raises(DomainError):
            StateLabel(l=math.inf, phi=0.0, r=0.5)


class TestOverlap:
    def test_self_overlap_at_zero_center(self):
        a = label_for_center(0.0, 1.3, 0.5)
        assert overlap(a, a, method="direct").real == pytest.approx(
            FIDUCIAL_NORM2_INT, abs=1e-13)

    def test_hermitian_symmetry(self):
        a = StateLabel(l=0.2, phi=2.0, r=0.5)
        b = StateLabel(l=-0.4, phi=0.7, r=0.5)
        assert abs(overlap(a, b) - np.conj(overlap(b, a))) < 1e-14

    def test_dual_path_example(self):
        a = StateLabel(l=0.0, phi=math.pi, r=0.5)
        b = StateLabel(l=0.0, phi=0.0, r=0.5)
        d = overlap(a, b, method="direct")
        t = overlap(a, b, method="theta")
        assert abs(d - t) <= 1e-12

    def test_dual_path_random_both_sectors(self):
        for _ in range(40):
            s = float(RNG.integers(0, 2)) * 0.5
            a = label_for_center(RNG.uniform(-2, 2), RNG.uniform(0, 4 * math.pi), 0.5, s)
            b = label_for_center(RNG.uniform(-2, 2), RNG.uniform(0, 4 * math.pi), 0.5, s)
            d = overlap(a, b, method="direct")
            t = overlap(a, b, method="theta")
            assert abs(d - t) <= 1e-12 * max(1.0, abs(t))

    def test_mismatched_sectors_rejected(self):
        a = StateLabel(l=0.0, phi=0.0, r=0.5, s=0.0)
        b = StateLabel(l=0.0, phi=0.0, r=0.5, s=0.5)
        with pytest.raises(DomainError):
            overlap(a, b)


class TestNorm:
    def test_three_routes_agree(self):
        for s in (0.0, 0.5):
            for center in np.linspace(-1.5, 1.5, 7):
                lab = label_for_center(center, 0.9, 0.5, s)
                d = norm2(lab, method="direct")
                t = norm2(lab, method="theta")
                m = norm2(lab, method="modular")
                assert d == pytest.approx(t, rel=1e-12)
                assert d == pytest.approx(m, rel=1e-12)

    def test_depends_only_on_center(self):
        a = label_for_center(0.37, 0.5, 0.5)
        b = label_for_center(0.37, 2.9, 0.5)
        assert norm2(a) == pytest.approx(norm2(b), abs=1e-14)

    def test_positive(self):
        assert norm2(StateLabel(l=-1.0, phi=2.2, r=0.8)) > 0.0


class TestExpectJ:
    def test_half_integer_center_is_exact(self):
        lab = StateLabel(l=0.0, phi=math.pi, r=0.5, s=0.5)  # center = 1/2
        assert abs(expect_j(lab, method="ratio") - 0.5) < 1e-12
        assert abs(expect_j(lab, method="theta") - 0.5) < 1e-13
        assert abs(expect_j(lab, method="series") - 0.5) < 1e-13

    def test_zero_center(self):
        lab = label_for_center(0.0, 1.0, 0.5)
        assert abs(expect_j(lab, method="ratio")) < 1e-15

    def test_triple_path_and_correction_scale(self):
        lab = label_for_center(0.3, 1.0, 0.5)
        v1 = expect_j(lab, method="ratio")
        v2 = expect_j(lab, method="theta")
        v3 = expect_j(lab, method="series")
        assert max(abs(v1 - v2), abs(v1 - v3), abs(v2 - v3)) <= 1e-10
        q = math.exp(-math.pi**2)
        assert abs(v1 - 0.3) <= 2 * math.pi * q / (1 - q) ** 2  # <= ~3.3e-4

    def test_triple_path_grid(self):
        for s in (0.0, 0.5):
            for l in np.linspace(-1.0, 1.0, 20):
                for phi in np.linspace(0.0, 4 * math.pi, 20, endpoint=False):
                    lab = StateLabel(l=l, phi=phi, r=0.5, s=s)
                    v1 = expect_j(lab, method="ratio")
                    v2 = expect_j(lab, method="theta")
                    v3 = expect_j(lab, method="series")
                    assert max(abs(v1 - v2), abs(v1 - v3)) <= 1e-10

    def test_correction_vanishes_on_half_lattice(self):
        # sin(2*pi*l') kills the correction at every half-integer center
        for s in (0.0, 0.5):
            for center in (-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5):
                lab = label_for_center(center, 1.7, 0.5, s)
                for method in ("ratio", "theta", "series"):
                    assert abs(expect_j(lab, method=method) - center) <= 1e-13


class TestExpectU:
    def test_zero_center_value(self):
        # e^{-1/4} * Theta2(0|i/pi)/Theta3(0|i/pi), both from summation oracles
        lab = label_for_center(0.0, 0.8, 0.5)
        expected_mod = math.exp(-0.25) * FIDUCIAL_NORM2_HALF / FIDUCIAL_NORM2_INT
        got = expect_u(lab, method="theta")
        assert abs(got) == pytest.approx(expected_mod, abs=1e-13)
        assert cmath.phase(got) == pytest.approx(0.8, abs=1e-13)

    def test_relative_average_has_unit_modulus(self):
        lab = label_for_center(0.0, 2.1, 0.5)
        ref = StateLabel(l=0.0, phi=0.0, r=0.0)
        ratio = expect_u(lab) / expect_u(ref)
        assert abs(ratio) == pytest.approx(1.0, abs=1e-12)

    def test_shift_contraction_matches_closed_form(self):
        for s in (0.0, 0.5):
            for center in np.linspace(-1.0, 1.0, 9):
                lab = label_for_center(center, 1.9, 0.5, s)
                d = expect_u(lab, method="direct")
                t = expect_u(lab, method="theta")
                assert abs(d - t) <= 1e-12

    def test_modulus_bounded_by_one(self):
        for _ in range(30):
            lab = StateLabel(l=float(RNG.uniform(-2, 2)),
                             phi=float(RNG.uniform(0, 4 * math.pi)),
                             r=float(RNG.uniform(0, 0.95)),
                             s=float(RNG.integers(0, 2)) * 0.5)
            assert abs(expect_u(lab)) <= 1.0 + 1e-12

    def test_operator_action_route(self):
        # raising the vector and contracting reproduces the closed form
        lab = StateLabel(l=0.2, phi=1.3, r=0.5, s=0.5)
        v = build_cs(lab)
        raised = v.shift_up()
        value = v.inner(raised) / v.norm2()
        assert abs(value - expect_u(lab, method="theta")) <= 1e-12


class TestDistribution:
    def test_reference_value(self):
        lab = label_for_center(0.0, 1.0, 0.5)
        assert distribution(lab, 0.0) == pytest.approx(1.0 / FIDUCIAL_NORM2_INT, abs=1e-14)

    def test_normalization(self):
        for s in (0.0, 0.5):
            lab = label_for_center(0.8, 2.0, 0.5, s)
            levels = level_grid(default_j_max(lab.center), s)
            total = sum(distribution(lab, float(j)) for j in levels)
            assert abs(total - 1.0) <= 1e-12

    def test_gaussian_sup_norm(self):
        for center in np.linspace(0.0, 1.0, 11):
            lab = label_for_center(center, math.pi, 0.5)
            levels = level_grid(default_j_max(center), 0.0)
            sup = max(abs(distribution(lab, float(j)) - gaussian_distribution(float(j), center))
                      for j in levels)
            assert sup <= 1.1e-4

    def test_off_lattice_level_rejected(self):
        lab = StateLabel(l=0.0, phi=0.0, r=0.5, s=0.0)
        with pytest.raises(DomainError):
            distribution(lab, 0.25)


class TestQuantizationScan:
    def test_border_roots_half_sector(self):
        roots = quantization_scan(0.5, 0.0, s=0.5)
        assert roots == pytest.approx([math.pi, 3 * math.pi])
        values = [expect_j(StateLabel(l=0.0, phi=p, r=0.5, s=0.5), method="ratio")
                  for p in roots]
        assert values[0] == pytest.approx(0.5, abs=1e-12)
        assert values[1] == pytest.approx(-0.5, abs=1e-12)

    def test_quarter_width_example(self):
        roots = quantization_scan(0.25, 0.25, s=0.5)
        assert math.pi in [pytest.approx(p) for p in roots]
        lab = StateLabel(l=0.25, phi=math.pi, r=0.25, s=0.5)
        assert lab.center == pytest.approx(0.5, abs=1e-15)
        assert expect_j(lab, method="ratio") == pytest.approx(0.5, abs=1e-12)

    def test_degenerate_width_all_angles(self):
        roots = quantization_scan(0.0, 0.5, s=0.5, n_grid=64)
        assert len(roots) == 64
        assert quantization_scan(0.0, 0.3, s=0.5, n_grid=64) == []

    def test_realized_values_on_sector_lattices(self):
        realized_half = set()
        for base in (-1.0, -0.5, 0.0, 0.5, 1.0):
            for phi in quantization_scan(0.5, base - 0.5, s=0.5):
                lab = StateLabel(l=base - 0.5, phi=phi, r=0.5, s=0.5)
                val = expect_j(lab, method="ratio")
                assert abs(val - 0.5 - round(val - 0.5)) <= 1e-12
                realized_half.add(round(val + 0.5) - 0.5)
        assert len(realized_half) >= 2  # a genuine half-odd lattice, not one point

        for base in (-1.0, 0.0, 1.0):
            for phi in quantization_scan(0.5, base - 0.5, s=0.0):
                lab = StateLabel(l=base - 0.5, phi=phi, r=0.5, s=0.0)
                val = expect_j(lab, method="ratio")
                assert abs(val - round(val)) <= 1e-12


class TestEvolution:
    def test_zero_time_is_identity(self):
        v = build_cs(StateLabel(l=0.3, phi=1.0, r=0.5))
        w = evolve(v, 0.0, 0.5)
        assert np.array_equal(v.c, w.c)

    def test_norm_preserved(self):
        v = build_cs(StateLabel(l=0.3, phi=1.0, r=0.5, s=0.5))
        for t in (0.7, 13.9, 150.0):
            w = evolve(v, t, 0.5, L0=0.4)
            assert w.norm2() == pytest.approx(v.norm2(), abs=1e-14)

    def test_fidelity_diagnostic(self):
        lab = StateLabel(l=0.0, phi=math.pi, r=0.5, s=0.5)
        assert temporal_fidelity(lab, 0.0) == pytest.approx(1.0, abs=1e-14)
        assert temporal_fidelity(lab, 2.0) < 1.0  # quadratic spectrum disperses


class TestBargmann:
    def test_unit_label(self):
        lab = StateLabel(l=0.0, phi=0.0, r=0.0)
        assert bargmann_coeff(lab, 0.0) == 1.0

    def test_distribution_consistency(self):
        lab = StateLabel(l=0.1, phi=2.7, r=0.5, s=0.5)
        for j in (-0.5, 0.5, 1.5):
            p = abs(bargmann_coeff(lab, j)) ** 2 / norm2(lab)
            assert p == pytest.approx(distribution(lab, j), rel=1e-12)


class TestContinuity:
    def test_lipschitz_on_grid(self):
        # normalized-vector distance against label distance; C recorded below
        C = 6.0
        base = StateLabel(l=0.2, phi=1.0, r=0.5)
        v0 = build_cs(base, j_max=12)
        v0n = v0.c / v0.norm()
        for dl, dphi in ((1e-3, 0.0), (0.0, 1e-3), (1e-4, -1e-4), (-2e-3, 1e-3)):
            lab = StateLabel(l=0.2 + dl, phi=1.0 + dphi, r=0.5)
            v1 = build_cs(lab, j_max=12)
            dist = np.linalg.norm(v1.c / v1.norm() - v0n)
            assert dist <= C * (abs(dl) + abs(dphi))
