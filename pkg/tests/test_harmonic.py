import numpy as np
import pytest
from scipy.integrate import quad

from maxlight.harmonic import (BranchCutError, GraphPatch, StepBoundaryData,
                               arg_branch, disk_to_halfplane, eval_patch,
                               harmonic_measure, holo_derivative,
                               mobius_to_disk, plus_arg, principal_arg)


def poisson_measure_quadrature(zeta: complex, sigma: float, tau: float) -> float:
    """Independent oracle: quadrature of the half-plane Poisson kernel."""
    xi, eta = zeta.real, zeta.imag

    def kernel(s):
        return eta / ((xi - s) ** 2 + eta ** 2) / np.pi

    val, _ = quad(kernel, sigma, tau, limit=200)
    return val


# ---------------------------------------------------------------- branches

def test_arg_branch_examples():
    assert principal_arg(1.0) == 0.0
    assert plus_arg(-1.0) == pytest.approx(np.pi)
    assert plus_arg(-1j) == pytest.approx(3 * np.pi / 2)
    assert principal_arg(1j) == pytest.approx(np.pi / 2)
    assert plus_arg(-1j) - principal_arg(1j) == pytest.approx(np.pi)
    assert arg_branch(1j, "plus") == pytest.approx(np.pi / 2)


def test_plus_arg_shift_identity():
    # Arg+(-z) = Arg(z) + pi off the principal cut
    rng = np.random.default_rng(5)
    z = rng.normal(size=40) + 1j * rng.normal(size=40)
    z = z[(z.imag != 0) | (z.real > 0)]
    np.testing.assert_allclose(plus_arg(-z), principal_arg(z) + np.pi, rtol=1e-14)


def test_branch_cut_errors():
    with pytest.raises(BranchCutError):
        principal_arg(-2.0)
    with pytest.raises(BranchCutError):
        principal_arg(0.0)
    with pytest.raises(BranchCutError):
        plus_arg(2.0)
    with pytest.raises(BranchCutError):
        plus_arg(0.0)
    # values on the other branch's cut are fine
    assert principal_arg(2.0) == 0.0
    assert plus_arg(-2.0) == pytest.approx(np.pi)


def test_arg_ranges():
    rng = np.random.default_rng(6)
    z = rng.normal(size=100) + 1j * rng.normal(size=100)
    z = z[(z.imag != 0)]
    a = principal_arg(z)
    assert np.all((a > -np.pi) & (a < np.pi))
    b = plus_arg(z)
    assert np.all((b > 0) & (b < 2 * np.pi))


# ---------------------------------------------------------- harmonic measure

def test_harmonic_measure_symmetry():
    assert harmonic_measure(1j, -1.0, 1.0) == pytest.approx(0.5, abs=1e-15)


def test_harmonic_measure_quarter():
    # (1/pi)(Arg(1-i) - Arg(-i)) = (1/pi)(-pi/4 + pi/2) = 1/4
    assert harmonic_measure(1j, 0.0, 1.0) == pytest.approx(0.25, abs=1e-15)
    assert poisson_measure_quadrature(1j, 0.0, 1.0) == pytest.approx(0.25, abs=1e-9)


def test_harmonic_measure_matches_quadrature():
    rng = np.random.default_rng(7)
    for _ in range(10):
        zeta = complex(rng.normal(), rng.uniform(0.2, 2.0))
        sigma = rng.uniform(-3, 0)
        tau = sigma + rng.uniform(0.5, 3)
        assert harmonic_measure(zeta, sigma, tau) == pytest.approx(
            poisson_measure_quadrature(zeta, sigma, tau), abs=1e-9)


def test_harmonic_measure_boundary_limit():
    assert harmonic_measure(0.3 + 1e-8j, 0.0, 1.0) == pytest.approx(1.0, abs=1e-6)


def test_harmonic_measure_errors():
    with pytest.raises(ValueError, match="empty interval"):
        harmonic_measure(1j, 1.0, 1.0)
    with pytest.raises(ValueError, match="outside domain"):
        harmonic_measure(1.0 - 0.5j, 0.0, 1.0)


def test_harmonic_measure_additivity():
    zeta = 0.7 + 1.3j
    total = harmonic_measure(zeta, -2.0, 3.0)
    split = harmonic_measure(zeta, -2.0, 0.5) + harmonic_measure(zeta, 0.5, 3.0)
    assert split == pytest.approx(total, abs=1e-12)


# ------------------------------------------------------------- step data

def _toy_patch():
    values = np.array([[1.0, 0.0, 0.5], [0.0, 2.0, -1.0], [0.0, 0.0, 0.0]])
    return GraphPatch(StepBoundaryData(jumps=np.array([-1.5, 0.0, 2.0]),
                                       values=values))


def test_step_data_validation():
    with pytest.raises(ValueError, match="increasing"):
        StepBoundaryData(np.array([0.0, 0.0]), np.array([[1, 0, 0], [0, 1, 0]]))
    with pytest.raises(ValueError, match="zero jump"):
        StepBoundaryData(np.array([0.0, 1.0, 2.0]),
                         np.array([[1, 0, 0], [1, 0, 0], [0, 1, 0]]))


def test_step_data_closure():
    # cyclic jumps always sum to zero
    patch = _toy_patch()
    np.testing.assert_allclose(patch.data.deltas().sum(axis=0), 0.0, atol=1e-15)


def test_measures_sum_to_one_and_constant_data():
    patch = _toy_patch()
    rng = np.random.default_rng(8)
    zeta = rng.normal(size=20) + 1j * rng.uniform(0.1, 3.0, 20)
    measures = patch.arc_measures(zeta)
    np.testing.assert_allclose(measures.sum(axis=-1), 1.0, atol=1e-12)
    # hence the integral of constant data is that constant
    v = np.array([0.3, -1.2, 2.5])
    np.testing.assert_allclose(measures @ np.tile(v, (3, 1)), np.tile(v, (20, 1)),
                               atol=1e-12)


def test_two_arc_data_against_quadrature():
    a = np.array([1.0, 0.0, 0.5])
    b = np.array([0.0, 2.0, -1.0])
    patch = _toy_patch()
    sigma, mid, tau = patch.jumps
    x = eval_patch(patch, 1j)
    expected = (a * poisson_measure_quadrature(1j, sigma, mid)
                + b * poisson_measure_quadrature(1j, mid, tau))
    np.testing.assert_allclose(x, expected, atol=1e-9)


def test_square_symmetric_data_mean_value():
    # equally spaced circle jumps transported to the line; the disk center
    # (zeta = i) sees all four arcs with equal measure
    theta = 2 * np.pi * (np.arange(4) + 0.5) / 4
    jumps = -1.0 / np.tan(theta / 2)
    values = np.array([[1, 0, 0], [0, 1, 0], [-1, 0, 1], [0, -1, -2]], dtype=float)
    patch = GraphPatch(StepBoundaryData(np.sort(jumps), values))
    np.testing.assert_allclose(eval_patch(patch, 1j), values.mean(axis=0), atol=1e-14)


def test_boundary_recovery_long_arc():
    # error < 1e-6 at height 1e-4 over the midpoint needs an arc much longer
    # than the value gap; the decay itself is first order in the distance
    patch = GraphPatch(StepBoundaryData(
        np.array([-100.0, 100.0]),
        np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])))
    x = eval_patch(patch, 0.0 + 1e-4j)
    np.testing.assert_allclose(x, [1.0, 0.0, 0.0], atol=1e-6)


def test_boundary_recovery_first_order_rate(square_patch):
    s = square_patch.jumps
    mid = (s[1] + s[2]) / 2
    target = square_patch.values[1]
    heights = np.array([1e-2, 1e-3, 1e-4])
    errs = [np.abs(eval_patch(square_patch, mid + 1j * h) - target).max()
            for h in heights]
    slopes = np.diff(np.log(errs)) / np.diff(np.log(heights))
    np.testing.assert_allclose(slopes, 1.0, atol=0.05)


def test_harmonicity_discrete_laplacian(square_patch):
    z0 = 0.4 + 1.2j
    sups = []
    steps = [1e-2, 5e-3, 2.5e-3]
    for h in steps:
        lap = (eval_patch(square_patch, z0 + h) + eval_patch(square_patch, z0 - h)
               + eval_patch(square_patch, z0 + 1j * h)
               + eval_patch(square_patch, z0 - 1j * h)
               - 4 * eval_patch(square_patch, z0)) / h ** 2
        sups.append(np.abs(lap).max())
    slope = np.polyfit(np.log(steps), np.log(sups), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.3)


def test_eval_refuses_near_jump(square_patch):
    s0 = square_patch.jumps[0]
    with pytest.raises(ValueError, match="refused"):
        eval_patch(square_patch, s0 + 1e-13 + 1e-13j)
    with pytest.raises(ValueError, match="outside domain"):
        eval_patch(square_patch, 1.0 - 1j)


# ------------------------------------------------------ holomorphic pieces

def test_holo_derivative_decay():
    patch = _toy_patch()
    # sum of jumps is zero, so phi = O(|zeta|^-2) at infinity
    radii = np.array([1e2, 1e3, 1e4])
    mags = np.array([np.abs(holo_derivative(patch, r * (1 + 1j))).max()
                     for r in radii])
    slope = np.polyfit(np.log(radii), np.log(mags), 1)[0]
    assert slope == pytest.approx(-2.0, abs=0.05)


def test_holo_derivative_pole():
    patch = _toy_patch()
    with pytest.raises(ValueError, match="pole"):
        holo_derivative(patch, patch.jumps[1])


def test_holo_derivative_matches_finite_difference(square_patch):
    rng = np.random.default_rng(9)
    h = 1e-6
    for _ in range(5):
        z = complex(rng.normal(), rng.uniform(0.5, 2.0))
        fd = (square_patch.holomorphic_completion(z + h)
              - square_patch.holomorphic_completion(z - h)) / (2 * h)
        phi = holo_derivative(square_patch, z)
        np.testing.assert_allclose(fd, phi, rtol=1e-6)


def test_completion_imaginary_part_is_the_map(square_patch):
    rng = np.random.default_rng(10)
    z = rng.normal(size=15) + 1j * rng.uniform(0.1, 2.0, 15)
    np.testing.assert_allclose(square_patch.holomorphic_completion(z).imag,
                               eval_patch(square_patch, z), atol=1e-13)


# --------------------------------------------------------------- Moebius

def test_mobius_examples():
    assert mobius_to_disk(1j) == 0.0
    assert mobius_to_disk(0.0) == -1.0
    with pytest.raises(ValueError, match="pole"):
        mobius_to_disk(-1j)
    with pytest.raises(ValueError, match="pole"):
        disk_to_halfplane(1.0)


def test_mobius_round_trip():
    rng = np.random.default_rng(11)
    z = rng.normal(size=50) + 1j * rng.uniform(0.01, 10.0, 50)
    w = mobius_to_disk(z)
    assert np.all(np.abs(w) < 1.0)
    np.testing.assert_allclose(disk_to_halfplane(w), z, rtol=1e-12, atol=1e-12)
