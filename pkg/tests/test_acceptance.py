"""Acceptance suite: one printed pass/fail line per criterion, at the stated tolerances."""

import itertools
import time

import numpy as np
import pytest

from grasstri import (
    SpaceParams,
    act,
    arg_k_tilde,
    classify_pair,
    cocycle_defect,
    covariance_defect,
    geodesic,
    geodesic_from_origin,
    h_kernel,
    k_c,
    kahler_form,
    metric,
    mod4pi_ambiguity_demo,
    path_integral_rho,
    psi,
    random_point,
    random_unitary,
    rho,
    sphere_area,
    surface_integral,
    triangle_area,
)
from grasstri.errors import GeometryError
from grasstri.verify import draw_configuration
from oracles import cp1_regular, fd_form, fd_metric, fd_rho

CP1, GR13, GR24 = SpaceParams(1, 1), SpaceParams(1, 2), SpaceParams(2, 2)
THREE = (CP1, GR13, GR24)


@pytest.fixture
def report(capsys):
    def _report(number, title, worst, tol, elapsed, limit):
        ok = worst <= tol and elapsed < limit
        line = (f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title}: "
                f"worst {worst:.3e} (tol {tol:.0e}), {elapsed:.2f} s (limit {limit:g} s)")
        with capsys.disabled():
            print("\n" + line)
        assert worst <= tol, line
        assert elapsed < limit, line
    return _report


@pytest.mark.parametrize("space", [CP1, GR24], ids=["CP1", "Gr2C4"])
def test_01_sphere_area(report, space):
    start = time.perf_counter()
    value = sphere_area(256, space)
    report(1, f"sphere area {space.k},{space.m}", abs(value - 4 * np.pi), 1e-4,
           time.perf_counter() - start, 5)


def test_02_cp1_kernel_exactness(report):
    start = time.perf_counter()
    radius = np.linspace(0, 3, 50)
    zs = radius * np.exp(2j * np.pi * 7 * radius / 3)
    ws = radius[::-1] * np.exp(-2j * np.pi * 5 * radius / 3)
    worst = 0.0
    for z, w in itertools.product(zs, ws):
        closed = 1 + z * np.conj(w)
        for value, ref in ((h_kernel([[z]], [[w]]), closed), (k_c([[z]], [[w]]), closed * closed)):
            worst = max(worst, abs(value - ref) / max(1.0, abs(ref)))
    report(2, "CP1 kernel closed form (relative to max(1, |value|))", worst, 1e-14, time.perf_counter() - start, 1)


def test_03_formula_vs_surface_quadrature(report):
    start = time.perf_counter()
    worst = 0.0
    for s, space in enumerate(THREE):
        rng = np.random.default_rng([3, s])
        for _ in range(100):
            points, _ = draw_configuration(space, rng, count=3)
            worst = max(worst, abs(triangle_area(*points) - surface_integral(*points, grid=128)))
    report(3, "formula vs surface integral, 300 triangles", worst, 1e-5,
           time.perf_counter() - start, 300)


def test_04_path_integral_identity(report):
    start = time.perf_counter()
    worst, count = 0.0, 0
    rng = np.random.default_rng(4)
    while count < 200:
        space = THREE[count % 3]
        Z, W = random_point(space, rng), random_point(space, rng)
        if not classify_pair(Z, W).regular:
            continue
        value = path_integral_rho(geodesic(Z, W), nodes=64)
        worst = max(worst, abs(0.5 * value + arg_k_tilde(Z, W)))
        count += 1
    report(4, "half path integral of rho vs -arg, 200 pairs", worst, 1e-6,
           time.perf_counter() - start, 60)


def test_05_rho_vanishes_on_radial_geodesics(report):
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    t = np.linspace(0, 1, 1000)
    worst = 0.0
    for i in range(50):
        seg = geodesic_from_origin(random_point(THREE[i % 3], rng, scale=2.0))
        worst = max(worst, float(np.max(np.abs(rho(seg.eval(t), seg.velocity(t))))))
    report(5, "rho on radial geodesics", worst, 1e-10, time.perf_counter() - start, 10)


def test_06_covariance(report):
    start = time.perf_counter()
    rng = np.random.default_rng(6)
    worst, count = 0.0, 0
    while count < 500:
        space = THREE[count % 3]
        g = random_unitary(space.n, rng)
        Z, W = random_point(space, rng), random_point(space, rng)
        try:
            act(g, Z), act(g, W)
        except GeometryError:
            continue
        worst = max(worst, covariance_defect(g, Z, W))
        count += 1
    report(6, "kernel covariance, 500 samples", worst, 1e-9, time.perf_counter() - start, 30)


def test_07_cocycle_and_antisymmetry(report):
    start = time.perf_counter()
    cocycle = antisym = 0.0
    for i in range(100):
        rng = np.random.default_rng([7, i])
        points, _ = draw_configuration(THREE[i % 3], rng, count=4, grid=None)
        cocycle = max(cocycle, cocycle_defect(*points))
        a, b, c = points[:3]
        base = np.conj(psi(a, b, c))
        for odd in ((b, a, c), (a, c, b), (c, b, a)):
            antisym = max(antisym, abs(psi(*odd) - base))
    elapsed = time.perf_counter() - start
    report(7, "cocycle defect, 100 quadruples", cocycle, 1e-8, elapsed, 120)
    report(7, "odd permutation conjugates psi", antisym, 1e-10, elapsed, 120)


def test_08_mod_4pi_ambiguity(report):
    start = time.perf_counter()
    o, one, i = (np.array([[z]], dtype=complex) for z in (0, 1, 1j))
    direct, alternative = mod4pi_ambiguity_demo(o, one, i)
    turns = (direct - alternative) / (4 * np.pi)
    report(8, "filling difference in units of 4 pi", abs(turns - round(turns)), 1e-5,
           time.perf_counter() - start, 10)


def test_09_cut_locus_predicate(report):
    start = time.perf_counter()
    axis = np.linspace(-3, 3, 100)
    disagreements = 0
    for z, w in itertools.product(axis, axis):
        if abs(1 + z * w) < 1e-6:
            continue
        disagreements += classify_pair([[z]], [[w]]).regular != cp1_regular(z, w)
    report(9, "CP1 classification vs closed form, disagreements", disagreements, 0,
           time.perf_counter() - start, 30)


def test_10_metric_form_consistency(report):
    start = time.perf_counter()
    fd = compat = 0.0
    for s, space in enumerate(THREE):
        rng = np.random.default_rng([10, s])
        for _ in range(100):
            Z, X, Y = (random_point(space, rng) for _ in range(3))
            fd = max(fd, abs(kahler_form(Z, X, Y) - fd_form(Z, X, Y)),
                     abs(metric(Z, X, Y) - fd_metric(Z, X, Y)), abs(rho(Z, X) - fd_rho(Z, X)))
            compat = max(compat, abs(kahler_form(Z, X, Y) - metric(Z, 1j * X, Y)))
    elapsed = time.perf_counter() - start
    report(10, "closed forms vs potential finite differences", fd, 1e-5, elapsed, 30)
    report(10, "omega(X, Y) = g(iX, Y)", compat, 1e-10, elapsed, 30)
