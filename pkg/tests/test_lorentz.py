import numpy as np
import pytest

from maxlight.lorentz import (CausalCharacter, PeriodLattice, PointSymmetry,
                              causal_character, compose_symmetries, minkowski,
                              reflect)


def test_minkowski_examples():
    assert minkowski([1, 0, 0], [1, 0, 0]) == 1.0
    assert minkowski([1, 0, 1], [1, 0, 1]) == 0.0
    # direct expansion: 0 + 0 - (1 * -1) = 1
    assert minkowski([1, 0, 1], [0, 1, -1]) == 1.0


def test_minkowski_bilinear_symmetric():
    rng = np.random.default_rng(1)
    for _ in range(50):
        u, v, w = rng.normal(size=(3, 3))
        a, b = rng.normal(size=2)
        assert minkowski(u, v) == pytest.approx(minkowski(v, u), rel=1e-14)
        assert minkowski(a * u + b * v, w) == pytest.approx(
            a * minkowski(u, w) + b * minkowski(v, w), rel=1e-12, abs=1e-12)


def test_causal_character_examples():
    assert causal_character([1, 0, 1]) is CausalCharacter.LIGHTLIKE
    assert causal_character([0, 0, 1]) is CausalCharacter.TIMELIKE
    assert causal_character([3, 4, 5]) is CausalCharacter.LIGHTLIKE  # 9+16-25
    assert causal_character([1, 0, 0]) is CausalCharacter.SPACELIKE


def test_causal_character_zero_vector():
    with pytest.raises(ValueError, match="degenerate vector"):
        causal_character([0.0, 0.0, 0.0])


def test_causal_character_scaling_invariance():
    rng = np.random.default_rng(2)
    vectors = list(rng.normal(size=(20, 3)))
    # exact lightlike vectors stay lightlike under scaling as well
    for _ in range(10):
        x, y = rng.normal(size=2)
        vectors.append(np.array([x, y, np.hypot(x, y)]))
    for v in vectors:
        base = causal_character(v)
        for lam in (1e-3, 0.1, 1.0, 10.0, 1e3, -1e-3, -1e3):
            assert causal_character(lam * v) is base


def test_reflect_examples():
    a = np.array([1.0, 2.0, 3.0])
    b = np.array([-1.0, 0.5, 2.0])
    mid = PointSymmetry((a + b) / 2)
    np.testing.assert_allclose(reflect(a, mid), b, atol=1e-15)
    c = PointSymmetry([0.3, -0.7, 1.1])
    np.testing.assert_allclose(reflect(c.center, c), c.center)
    np.testing.assert_allclose(reflect([0, 0, 0], PointSymmetry([1, 2, 3])), [2, 4, 6])


def test_reflect_involution():
    rng = np.random.default_rng(3)
    for _ in range(30):
        p = rng.normal(size=3) * rng.choice([1e-2, 1.0, 1e3])
        s = PointSymmetry(rng.normal(size=3))
        back = reflect(reflect(p, s), s)
        np.testing.assert_allclose(back, p, rtol=1e-14, atol=1e-14)


def test_compose_symmetries():
    s = PointSymmetry([0.4, 0.5, 0.6])
    np.testing.assert_allclose(compose_symmetries(s, s), [0, 0, 0])
    s1 = PointSymmetry([0, 0, 0])
    s2 = PointSymmetry([1, 0, 1])
    np.testing.assert_allclose(compose_symmetries(s1, s2), [2, 0, 2])


def test_compose_symmetries_is_the_composition():
    rng = np.random.default_rng(4)
    for _ in range(20):
        s1 = PointSymmetry(rng.normal(size=3))
        s2 = PointSymmetry(rng.normal(size=3))
        p = rng.normal(size=3)
        composed = s2.apply(s1.apply(p))
        np.testing.assert_allclose(composed, p + compose_symmetries(s1, s2),
                                   rtol=1e-13, atol=1e-13)
        # antisymmetric under swapping
        np.testing.assert_allclose(compose_symmetries(s2, s1),
                                   -compose_symmetries(s1, s2))


def test_period_lattice_validation():
    PeriodLattice([[1, 0, 0], [0, 1, 0]])
    with pytest.raises(ValueError, match="dependent"):
        PeriodLattice([[1, 0, 0], [2, 0, 0]])
    lat = PeriodLattice([[2, 0, 0], [0, 2, 0], [1, 0, 1]])
    np.testing.assert_allclose(lat.lightlike_generator(), [1, 0, 1])
    with pytest.raises(ValueError, match="lightlike"):
        PeriodLattice([[2, 0, 0], [0, 2, 0], [0, 0, 1]])
    with pytest.raises(ValueError, match="lightlike"):
        PeriodLattice([[1, 0, 1], [0, 2, 0], [1, 0, -1]])
