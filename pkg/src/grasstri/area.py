"""Symplectic area of geodesic triangles and the quadrature checks around it."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .chart import SINGULAR_RTOL, SpaceParams, act_many, action_margin, as_chart_point, ctranspose
from .errors import CutLocusError, FillingLeavesChart, NotRegular
from .geodesics import (
    DEFAULT_SAMPLES,
    GeodesicSegment,
    classify_pair,
    golden_min,
    segment_between,
    transport_to_origin,
)
from .kernel import arg_k_tilde, kahler_form, rho

# Filling samples whose transported principal angle exceeds pi/2 minus this are refused.
FILLING_ANGLE_TOL = 1e-4
FD_STEP = 1e-5


@dataclass(frozen=True)
class AreaResult:
    formula_value: float
    oracle_value: float | None = None
    residual: float | None = None

    @property
    def psi(self) -> complex:
        return complex(np.exp(0.5j * self.formula_value))


@dataclass(frozen=True)
class Triangle:
    vertices: tuple
    segments: tuple

    @classmethod
    def build(cls, z0, z1, z2, samples=DEFAULT_SAMPLES):
        vertices = tuple(as_chart_point(z) for z in (z0, z1, z2))
        check_regular(vertices, samples)
        segments = tuple(segment_between(vertices[i], vertices[(i + 1) % 3]) for i in range(3))
        return cls(vertices, segments)


def check_regular(vertices, samples=DEFAULT_SAMPLES):
    """Raise NotRegular naming the first edge that is not Regular."""
    for i in range(3):
        a, b = vertices[i], vertices[(i + 1) % 3]
        cls = classify_pair(a, b, samples)
        if not cls.regular:
            raise NotRegular(
                f"pair (p{i},p{(i + 1) % 3}): {cls.tag}", pair_class=cls, index=(i, (i + 1) % 3)
            )


def triangle_area(z0, z1, z2, samples=DEFAULT_SAMPLES) -> float:
    """Area of the triangle ``z0 -> z1 -> z2`` from kernel arguments alone."""
    vertices = [as_chart_point(z) for z in (z0, z1, z2)]
    check_regular(vertices, samples)
    # fsum makes the value independent of the order of the edges
    return -math.fsum(arg_k_tilde(vertices[i], vertices[(i + 1) % 3]) for i in range(3))


def psi(z0, z1, z2, samples=DEFAULT_SAMPLES) -> complex:
    return complex(np.exp(0.5j * triangle_area(z0, z1, z2, samples)))


def normalize_area(value: float) -> float:
    """Representative of ``value`` modulo ``4 pi`` in ``(-2 pi, 2 pi]``."""
    r = np.mod(value + 2 * np.pi, 4 * np.pi) - 2 * np.pi
    return float(2 * np.pi if r == -2 * np.pi else r)


def _gauss(nodes, a=0.0, b=1.0):
    x, w = leggauss(nodes)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def _closest_approach(segment: GeodesicSegment, samples=257):
    ts = np.linspace(0.0, 1.0, samples)
    cosines = segment.min_cosine(ts)
    i = int(np.argmin(cosines))
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, samples - 1)]
    return golden_min(lambda t: float(segment.min_cosine(t)), lo, hi, xtol=1e-10)


def _sinh_gauss(nodes, center, width):
    """Gauss-Legendre on [0, 1] after ``t = center + width * sinh(u)``.

    Integrates a Lorentzian bump of the given width at ``center`` as smoothly as
    plain Gauss-Legendre integrates a flat function. Wide bumps get plain nodes.
    """
    if not width < 0.25:
        return _gauss(nodes)
    u, wu = _gauss(nodes, np.arcsinh(-center / width), np.arcsinh((1.0 - center) / width))
    return center + width * np.sinh(u), wu * width * np.cosh(u)


def stretched_nodes(segment: GeodesicSegment, nodes):
    """Gauss-Legendre nodes on [0, 1], clustered where the segment nears the cut locus.

    Close to the cut locus of the origin ``rho`` looks like the angular form
    around a pole: a Lorentzian bump in ``t`` of width about ``2 * cos / length``
    with ``cos`` the smallest principal-angle cosine to the origin.
    """
    if segment.length == 0:
        return _gauss(nodes)
    t_star, cosine = _closest_approach(segment)
    return _sinh_gauss(nodes, t_star, 2.0 * cosine / segment.length)


def path_integral_rho(segment: GeodesicSegment, nodes=64) -> float:
    """Gauss-Legendre integral of ``rho`` along ``segment`` (see :func:`stretched_nodes`)."""
    t, w = stretched_nodes(segment, nodes)
    vals = rho(segment.eval(t), segment.velocity(t))
    return float(np.dot(w, vals))


class _Cone:
    """Filling ``(s, t) -> segment(z0, edge(t)).eval(s)``, evaluated in batches.

    Everything is computed in the frame transported by ``u = transport_to_origin(z0)``,
    where the cone is ``(s, t) -> P_t diag(tan(s theta_t)) Q_t*`` and stays bounded.
    The Kähler form is U-invariant, so the integrand may be evaluated there; chart
    coordinates near the cut locus of the origin are never formed.
    """

    def __init__(self, z0, edge: GeodesicSegment):
        self.z0 = z0
        self.edge = edge
        self.u = transport_to_origin(z0)
        self.u_inv = ctranspose(self.u)
        # edge-local coordinates -> z0-local coordinates
        self.to_local = self.u @ edge._inverse
        self.k = z0.shape[0]

    def local_data(self, ts):
        """SVD of the transported far endpoints for each ``t`` in ``ts``."""
        edge_local = self.edge.local(ts)
        margins = action_margin(self.to_local, edge_local)
        if np.any(margins < SINGULAR_RTOL):
            raise FillingLeavesChart("far edge meets the cut locus of z0")
        Wp = act_many(self.to_local, edge_local)
        U, sig, Vh = np.linalg.svd(Wp, full_matrices=False)
        theta = np.arctan(sig)
        if theta.max() > np.pi / 2 - FILLING_ANGLE_TOL:
            raise FillingLeavesChart(
                f"filling reaches principal angle {theta.max():.6f} from z0"
            )
        return U, theta, Vh

    @staticmethod
    def _compose(U, values, Vh):
        # U: (T, k, r), values: (T, S, r), Vh: (T, r, m) -> (T, S, k, m)
        return np.einsum("tkr,tsr,trm->tskm", U, values, Vh)

    def local(self, ts, ss):
        U, theta, Vh = self.local_data(ts)
        return self._compose(U, np.tan(ss[None, :, None] * theta[:, None, :]), Vh)

    def local_and_s_velocity(self, ts, ss):
        U, theta, Vh = self.local_data(ts)
        arg = ss[None, :, None] * theta[:, None, :]
        g = self._compose(U, np.tan(arg), Vh)
        gdot = self._compose(U, theta[:, None, :] / np.cos(arg) ** 2, Vh)
        return g, gdot

    def sharpest(self, samples=257):
        """``(t*, width)``: where the far edge comes closest to the cut locus of z0.

        Near there the cone swings around quickly; the integrand in ``t`` is a
        bump of width about ``2 * (pi/2 - theta_max) / edge length``.
        """
        if self.edge.length == 0:
            return 0.5, np.inf

        def gap(t):
            _, theta, _ = self.local_data(np.atleast_1d(t))
            return np.pi / 2 - theta.max(axis=-1)

        ts = np.linspace(0.0, 1.0, samples)
        gaps = gap(ts)
        i = int(np.argmin(gaps))
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, samples - 1)]
        t_star, g = golden_min(lambda t: float(gap(t)[0]), lo, hi, xtol=1e-10)
        return t_star, 2.0 * g / self.edge.length

    def margins(self, local):
        """Chart margins (with respect to the origin) of cone points given locally."""
        return action_margin(self.u_inv, local)


def _winding(values) -> float:
    steps = np.angle(values[1:] / values[:-1])
    return float(steps.sum() / (2 * np.pi))


def _check_filling(cone: _Cone, margins, boundary_samples=512):
    if margins.min() < SINGULAR_RTOL:
        raise FillingLeavesChart(f"filling margin {margins.min():.3e} below threshold")
    # Points of the cut locus of the origin inside the filling are zeros of the
    # action denominator; their signed count is the winding of det along the boundary.
    s = np.linspace(0.0, 1.0, boundary_samples)
    k = cone.k
    C = cone.u_inv[k:, :k]
    D = cone.u_inv[k:, k:]

    def dets(ts, ss):
        return np.linalg.det(C @ cone.local(ts, ss) + D)

    bottom = dets(np.array([0.0]), s)[0]
    far = dets(s, np.array([1.0]))[:, 0]
    top = dets(np.array([1.0]), s)[0][::-1]
    loop = np.concatenate([bottom, far, top, [bottom[0]]])
    if abs(_winding(loop)) > 0.5:
        raise FillingLeavesChart("the filling surrounds a point of the cut locus of the origin")


def surface_integral(z0, z1, z2, grid=128, samples=DEFAULT_SAMPLES, check=True) -> float:
    """Integral of the Kähler form over the geodesic cone from ``z0`` over ``z1 -> z2``.

    Tensor Gauss-Legendre in ``(s, t)``, with the ``t`` nodes clustered where the
    far edge passes close to the cut locus of ``z0``. ``d/ds`` is exact; ``d/dt``
    is a central difference combined over steps ``h`` and ``h/2`` by Richardson
    extrapolation.
    """
    vertices = [as_chart_point(z) for z in (z0, z1, z2)]
    if check:
        check_regular(vertices, samples)
    z0 = vertices[0]
    try:
        edge = segment_between(vertices[1], vertices[2])
    except CutLocusError as exc:
        raise NotRegular(str(exc), index=(1, 2)) from exc
    cone = _Cone(z0, edge)
    t, wt = _sinh_gauss(grid, *cone.sharpest())
    s, ws = _gauss(grid)
    P, dS = cone.local_and_s_velocity(t, s)
    if check:
        _check_filling(cone, cone.margins(P))

    def integral(h):
        dT = (cone.local(t + h, s) - cone.local(t - h, s)) / (2 * h)
        vals = kahler_form(P, dS, dT)
        return float(wt @ vals @ ws)

    coarse = integral(FD_STEP)
    fine = integral(FD_STEP / 2)
    return (4 * fine - coarse) / 3


def sphere_area(grid=256, space: SpaceParams | None = None) -> float:
    """Integral of the Kähler form over the sphere ``Z = z E_11``.

    Parametrized by ``z = tan(s/2) exp(i phi)``, ``s in [0, pi]``, ``phi in [0, 2 pi]``.
    """
    space = space or SpaceParams(1, 1)
    s, ws = _gauss(grid, 0.0, np.pi)
    phi, wphi = _gauss(grid, 0.0, 2 * np.pi)
    S, PHI = np.meshgrid(s, phi, indexing="ij")
    z = np.tan(S / 2) * np.exp(1j * PHI)
    dz_ds = 0.5 / np.cos(S / 2) ** 2 * np.exp(1j * PHI)
    dz_dphi = 1j * z

    def lift(values):
        out = np.zeros(values.shape + (space.k, space.m), dtype=complex)
        out[..., 0, 0] = values
        return out

    vals = kahler_form(lift(z), lift(dz_ds), lift(dz_dphi))
    return float(ws @ vals @ wphi)


def cocycle_defect(p0, p1, p2, p3, samples=DEFAULT_SAMPLES) -> float:
    """``|Psi(012) Psi(123)^-1 Psi(230) Psi(301)^-1 - 1|``."""
    pts = [as_chart_point(p) for p in (p0, p1, p2, p3)]
    triples = [(0, 1, 2), (1, 2, 3), (2, 3, 0), (3, 0, 1)]
    values = []
    for i, (a, b, c) in enumerate(triples):
        try:
            values.append(triangle_area(pts[a], pts[b], pts[c], samples))
        except NotRegular as exc:
            raise NotRegular(f"triple {i} {triples[i]}: {exc}", pair_class=exc.pair_class,
                             index=i) from exc
    phase = 0.5 * math.fsum([values[0], -values[1], values[2], -values[3]])
    return float(abs(np.exp(1j * phase) - 1))


def mod4pi_ambiguity_demo(z0, z1, z2, grid=128, tol=1e-4):
    """Area of the cone filling, and of the same filling with one sphere removed.

    Both bound the same triangle; their difference is a multiple of ``4 pi``.
    """
    space = SpaceParams.of(as_chart_point(z0))
    direct = surface_integral(z0, z1, z2, grid=grid)
    alternative = direct - sphere_area(max(grid, 64), space)
    turns = (direct - alternative) / (4 * np.pi)
    if abs(turns - round(turns)) > tol:
        raise ArithmeticError(f"fillings differ by {turns} spheres")
    return direct, alternative
