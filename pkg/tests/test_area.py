import numpy as np
import pytest

from grasstri import (
    FillingLeavesChart,
    NotRegular,
    act,
    classify_pair,
    cocycle_defect,
    geodesic,
    mod4pi_ambiguity_demo,
    normalize_area,
    path_integral_rho,
    psi,
    random_unitary,
    sphere_area,
    surface_integral,
    triangle_area,
)
from grasstri.area import AreaResult, Triangle
from grasstri.chart import SpaceParams
from grasstri.errors import GeometryError
from grasstri.kernel import arg_k_tilde, k_tilde
from grasstri.verify import draw_configuration
from oracles import random_complex, solid_angle

Z0, ONE, IM = np.zeros((1, 1)), np.ones((1, 1)), 1j * np.ones((1, 1))


def test_area_examples():
    z, w = np.array([[0.2 + 0.1j]]), np.array([[-0.5j]])
    assert triangle_area(z, z, w) == 0
    assert np.isclose(triangle_area(Z0, ONE, IM), np.pi / 2)
    assert np.isclose(psi(Z0, ONE, IM), np.exp(0.25j * np.pi))
    res = AreaResult(triangle_area(Z0, ONE, IM))
    assert abs(abs(res.psi) - 1) < 1e-12


def test_refuses_irregular_triangle():
    with pytest.raises(NotRegular) as info:
        triangle_area(ONE, -2 * ONE, Z0)
    assert info.value.index == (0, 1)
    with pytest.raises(NotRegular):
        Triangle.build(ONE, -ONE, Z0)


def test_cp1_matches_solid_angle(rng):
    checked = 0
    while checked < 50:
        z = random_complex(rng, 3)
        try:
            area = triangle_area(*(np.array([[v]]) for v in z))
        except NotRegular:
            continue
        assert abs(normalize_area(area - solid_angle(*z))) < 1e-10
        checked += 1


def test_diagonal_triangle_is_sum_of_factor_areas(rng):
    checked = 0
    while checked < 20:
        a, b, c = (random_complex(rng, 2) for _ in range(3))
        try:
            area = triangle_area(np.diag(a), np.diag(b), np.diag(c))
        except NotRegular:
            continue
        factors = sum(solid_angle(a[j], b[j], c[j]) for j in range(2))
        assert abs(normalize_area(area - factors)) < 1e-9
        checked += 1


def test_rank_two_area_beyond_principal_range():
    w = np.exp(0.9j * np.pi / 2) * 3
    verts = [np.zeros((2, 2)), 3 * np.eye(2), np.diag([w, w])]
    area = triangle_area(*verts)
    factor = solid_angle(0, 3, w)
    assert np.isclose(area, 2 * factor, atol=1e-10)
    assert np.isclose(surface_integral(*verts, grid=128), area, atol=1e-5)


def test_permutations(space, rng):
    points, _ = draw_configuration(space, rng, count=3)
    a, b, c = points
    base = triangle_area(a, b, c)
    for perm in ((b, c, a), (c, a, b)):
        assert abs(triangle_area(*perm) - base) < 1e-10
    for perm in ((b, a, c), (a, c, b), (c, b, a)):
        assert abs(triangle_area(*perm) + base) < 1e-10
        assert abs(psi(*perm) - np.conj(psi(a, b, c))) < 1e-10


def test_normalize_area():
    assert normalize_area(2 * np.pi) == pytest.approx(2 * np.pi)
    assert normalize_area(-2 * np.pi) == pytest.approx(2 * np.pi)
    assert normalize_area(4.5 * np.pi) == pytest.approx(0.5 * np.pi)


def test_path_integral_examples():
    seg = geodesic(Z0, np.array([[0.7 - 2j]]))
    assert abs(path_integral_rho(seg)) < 1e-14
    seg = geodesic(ONE, IM)
    assert abs(path_integral_rho(seg) - np.pi) < 1e-10
    assert abs(path_integral_rho(geodesic(IM, ONE)) + np.pi) < 1e-8


def test_path_integral_identity(space, rng):
    checked = 0
    while checked < 10:
        Z, W = (random_complex(rng, (space.k, space.m)) for _ in range(2))
        if not classify_pair(Z, W).regular:
            continue
        value = path_integral_rho(geodesic(Z, W), nodes=128)
        assert abs(0.5 * value + arg_k_tilde(Z, W)) < 1e-6
        assert abs(np.exp(-1j * value) - k_tilde(Z, W) / k_tilde(W, Z)) < 1e-6
        checked += 1


def test_surface_examples():
    z, w = np.array([[0.2 + 0.1j]]), np.array([[-0.5j]])
    assert abs(surface_integral(z, z, w)) < 1e-10
    assert abs(surface_integral(Z0, ONE, IM, grid=128) - np.pi / 2) < 1e-5


def test_surface_refuses_enclosing_triangle():
    omega = np.exp(2j * np.pi / 3)
    verts = [np.array([[3 * omega**j]]) for j in range(3)]
    assert triangle_area(*verts) > 2 * np.pi
    with pytest.raises(FillingLeavesChart):
        surface_integral(*verts)


def test_stokes_and_oracle(space, rng):
    points, _ = draw_configuration(space, rng, count=3)
    surface = surface_integral(*points, grid=128)
    boundary = sum(
        path_integral_rho(geodesic(a, b), nodes=256)
        for a, b in ((points[0], points[1]), (points[1], points[2]), (points[2], points[0]))
    )
    assert abs(surface - 0.5 * boundary) < 1e-5
    assert abs(surface - triangle_area(*points)) < 1e-5


@pytest.mark.parametrize("k, m", [(1, 1), (2, 2), (3, 1)])
def test_sphere_area(k, m):
    assert abs(sphere_area(256, SpaceParams(k, m)) - 4 * np.pi) < 1e-4
    assert abs(sphere_area(128, SpaceParams(k, m)) - sphere_area(256, SpaceParams(k, m))) < 1e-3


def test_cocycle_examples(rng):
    a, b = np.array([[0.1]]), np.array([[0.5j]])
    assert cocycle_defect(a, a, b, -b) == 0
    assert cocycle_defect(Z0, ONE, IM, -0.3 * ONE) <= 1e-9
    points, _ = draw_configuration(SpaceParams(2, 2), rng, count=4)
    assert cocycle_defect(*points) <= 1e-8


def test_cocycle_reports_failing_triple():
    with pytest.raises(NotRegular) as info:
        cocycle_defect(ONE, -2 * ONE, Z0, IM)
    assert info.value.index is not None


def test_mod4pi_demo():
    direct, alternative = mod4pi_ambiguity_demo(Z0, ONE, IM)
    assert abs(direct - np.pi / 2) < 1e-5
    assert abs(alternative - (np.pi / 2 - 4 * np.pi)) < 1e-4
    turns = (direct - alternative) / (4 * np.pi)
    assert abs(turns - round(turns)) < 1e-5
    assert abs(np.exp(0.5j * direct) - np.exp(0.5j * alternative)) < 1e-8


def test_unitary_invariance(space, rng):
    checked = 0
    while checked < 5:
        points, _ = draw_configuration(space, rng, count=3, grid=None)
        g = random_unitary(space.n, rng)
        try:
            moved = [act(g, z) for z in points]
            after = triangle_area(*moved)
        except GeometryError:
            continue
        before = triangle_area(*points)
        assert abs(np.exp(0.5j * after) - np.exp(0.5j * before)) < 1e-8
        checked += 1


def test_unitary_invariance_of_raw_value_when_fillings_stay_in_chart(space, rng):
    checked = refused = 0
    while checked < 5:
        points = [0.3 * random_complex(rng, (space.k, space.m)) for _ in range(3)]
        g = random_unitary(space.n, rng)
        try:
            moved = [act(g, z) for z in points]
            after = triangle_area(*moved)
        except GeometryError:
            continue
        before = triangle_area(*points)
        try:
            surface_integral(*moved, grid=16)
        except FillingLeavesChart:
            # the moved filling crosses the cut locus of the origin: equal modulo 4 pi only
            turns = (after - before) / (4 * np.pi)
            assert abs(turns - round(turns)) < 1e-8
            refused += 1
            continue
        assert abs(after - before) < 1e-8
        checked += 1
