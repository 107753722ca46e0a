"""Minimizing geodesics in the chart, principal angles and pair classification.

Every geodesic is handled in a transported frame: ``u = transport_to_origin(Z)``
moves the start point to the origin, where the minimizing geodesic to a chart
point ``W' = P diag(tan theta) Q*`` is ``t -> P diag(tan(t theta)) Q*``. Points
on the original segment are recovered with ``u^{-1} = u*``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chart import (
    SINGULAR_RTOL,
    act,
    act_many,
    as_chart_point,
    blocks,
    action_margin,
    ctranspose,
)
from .errors import CutLocusError, NotRegular, UndefinedAction

# Transported endpoints closer than this to a principal angle of pi/2 are
# treated as cut points.
CUT_ANGLE_TOL = 1e-6
DEFAULT_SAMPLES = 256

REGULAR = "Regular"
CUT_LOCUS = "CutLocus"
LEAVES_CHART = "LeavesChart"


def _inv_sqrt_psd(M):
    w, V = np.linalg.eigh(M)
    return (V / np.sqrt(w)) @ ctranspose(V)


@dataclass(frozen=True)
class PolysphereDecomposition:
    """``Z = left @ diag(sigma) @ right*`` with ``theta = arctan(sigma)``."""

    left: np.ndarray
    right: np.ndarray
    sigma: np.ndarray
    theta: np.ndarray

    def middle(self, values):
        k, m = self.left.shape[0], self.right.shape[0]
        D = np.zeros(np.shape(values)[:-1] + (k, m), dtype=complex)
        r = len(self.sigma)
        idx = np.arange(r)
        D[..., idx, idx] = values
        return D

    def compose(self, values):
        return self.left @ self.middle(values) @ ctranspose(self.right)


def _fix_phase(col):
    nz = np.flatnonzero(np.abs(col) > 1e-12)
    if len(nz) == 0:
        return 1.0
    c = col[nz[0]]
    return np.conj(c) / abs(c)


def polysphere_decompose(Z) -> PolysphereDecomposition:
    """Singular value decomposition in the gauge used throughout.

    Singular values descend; the first non-negligible entry of every left
    singular vector is made real positive (the paired right vector takes the
    same phase so the product is unchanged).
    """
    Z = as_chart_point(Z)
    k, m = Z.shape
    r = min(k, m)
    P, s, Vh = np.linalg.svd(Z, full_matrices=True)
    Q = ctranspose(Vh)
    P = P.astype(complex)
    Q = Q.astype(complex)
    for j in range(r):
        c = _fix_phase(P[:, j])
        P[:, j] *= c
        Q[:, j] *= c
    for j in range(r, k):
        P[:, j] *= _fix_phase(P[:, j])
    for j in range(r, m):
        Q[:, j] *= _fix_phase(Q[:, j])
    return PolysphereDecomposition(left=P, right=Q, sigma=s, theta=np.arctan(s))


def transport_to_origin(Z) -> np.ndarray:
    """Element of U(k+m) sending ``Z`` to the origin, defined on the whole chart."""
    Z = as_chart_point(Z)
    k, m = Z.shape
    Zh = ctranspose(Z)
    Ak = _inv_sqrt_psd(np.eye(k) + Z @ Zh)
    Dm = _inv_sqrt_psd(np.eye(m) + Zh @ Z)
    return np.block([[Ak, -Ak @ Z], [Dm @ Zh, Dm]])


class GeodesicSegment:
    """Segment ``t in [0, 1] -> eval(t)`` from ``start`` to ``end``.

    ``transport`` sends ``start`` to the origin and ``decomposition`` is the
    polysphere data of the transported endpoint.
    """

    def __init__(self, start, end, transport, decomposition):
        self.start = start
        self.end = end
        self.transport = transport
        self.decomposition = decomposition
        self._inverse = ctranspose(transport)

    @property
    def theta(self):
        return self.decomposition.theta

    @property
    def length(self):
        return float(2.0 * np.linalg.norm(self.theta))

    def local(self, t):
        """The transported curve (through the origin) at ``t``."""
        t = np.asarray(t, dtype=float)
        return self.decomposition.compose(np.tan(t[..., None] * self.theta))

    def local_velocity(self, t):
        t = np.asarray(t, dtype=float)
        th = self.theta
        return self.decomposition.compose(th / np.cos(t[..., None] * th) ** 2)

    def margins(self, t):
        """Chart margin of ``eval(t)`` (zero where the segment leaves the chart)."""
        return action_margin(self._inverse, self.local(t))

    def min_cosine(self, t):
        """Smallest cosine of the principal angles between ``eval(t)`` and the origin."""
        g = self.local(t)
        k, m = g.shape[-2:]
        _, _, C, D = blocks(self._inverse, k)
        lower = C @ g + D
        gram = np.eye(m) + ctranspose(g) @ g
        w, V = np.linalg.eigh(gram)
        inv_sqrt = (V / np.sqrt(w)[..., None, :]) @ ctranspose(V)
        return np.linalg.svd(lower @ inv_sqrt, compute_uv=False)[..., -1]

    def eval(self, t):
        return act_many(self._inverse, self.local(t))

    def velocity(self, t):
        k = self.start.shape[0]
        A, _, C, D = blocks(self._inverse, k)
        g = self.local(t)
        M = C @ g + D
        X = (A - self.eval(t) @ C) @ self.local_velocity(t)
        return ctranspose(np.linalg.solve(ctranspose(M), ctranspose(X)))

    def __repr__(self):
        return f"GeodesicSegment(theta={np.round(self.theta, 6).tolist()})"


def geodesic_from_origin(W) -> GeodesicSegment:
    """``t -> P diag(tan(t theta)) Q*`` for ``W = P diag(tan theta) Q*``."""
    W = as_chart_point(W)
    k, m = W.shape
    return GeodesicSegment(np.zeros_like(W), W, np.eye(k + m, dtype=complex),
                           polysphere_decompose(W))


def segment_between(Z, W, cut_tol=CUT_ANGLE_TOL) -> GeodesicSegment:
    """Segment from ``Z`` to ``W`` through the transported frame, unclassified.

    Raises CutLocusError when ``W`` is (numerically) a cut point of ``Z``; does
    not check that the segment stays inside the chart.
    """
    Z = as_chart_point(Z)
    W = as_chart_point(W)
    if Z.shape != W.shape:
        raise ValueError(f"shape mismatch {Z.shape} vs {W.shape}")
    u = transport_to_origin(Z)
    try:
        Wp = act(u, W)
    except UndefinedAction as exc:
        raise CutLocusError(f"endpoint is in the cut locus of the start: {exc}") from exc
    dec = polysphere_decompose(Wp)
    if len(dec.theta) and dec.theta.max() > np.pi / 2 - cut_tol:
        raise CutLocusError(f"principal angle {dec.theta.max():.12f} too close to pi/2")
    return GeodesicSegment(Z, W, u, dec)


@dataclass(frozen=True)
class PairClass:
    tag: str
    max_angle: float
    min_det: float

    @property
    def regular(self) -> bool:
        return self.tag == REGULAR


_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_min(f, lo, hi, xtol=1e-15, maxiter=200):
    """Golden-section search for the minimum of ``f`` on ``[lo, hi]``.

    Returns ``(x, f(x))`` for the best point seen.
    """
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    best = min((fc, c), (fd, d))
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
            best = min(best, (fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
            best = min(best, (fd, d))
    return best[1], best[0]


def _min_margin(seg: GeodesicSegment, samples: int) -> float:
    ts = np.linspace(0.0, 1.0, samples)
    margins = seg.margins(ts)
    best = float(margins.min())
    if samples < 2:
        return best
    # The margin is a product of cosines of angles that move at most at half
    # the geodesic speed, so it is Lipschitz in t with constant rank * length / 2.
    # Only sampled local minima below two steps' worth of that can hide a zero.
    lip = len(seg.theta) * seg.length / 2.0
    cutoff = 2.0 * lip * (ts[1] - ts[0])
    padded = np.concatenate([[np.inf], margins, [np.inf]])
    local = (margins <= padded[:-2]) & (margins <= padded[2:]) & (margins < cutoff)
    for i in np.flatnonzero(local):
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, samples - 1)]
        _, val = golden_min(lambda t: float(seg.margins(t)), lo, hi)
        best = min(best, val)
    return best


def classify_pair(Z, W, samples=DEFAULT_SAMPLES) -> PairClass:
    """Classify ``(Z, W)`` as Regular, CutLocus or LeavesChart.

    Regular means a unique minimizing segment that stays in the chart. The
    chart condition is checked by sampling the denominator of ``u^{-1}`` along
    the transported geodesic, refined around its smallest value.
    """
    Z = as_chart_point(Z)
    W = as_chart_point(W)
    u = transport_to_origin(Z)
    try:
        Wp = act(u, W)
    except UndefinedAction:
        return PairClass(CUT_LOCUS, np.pi / 2, 0.0)
    dec = polysphere_decompose(Wp)
    max_angle = float(dec.theta.max()) if len(dec.theta) else 0.0
    if max_angle > np.pi / 2 - CUT_ANGLE_TOL:
        return PairClass(CUT_LOCUS, max_angle, 0.0)
    seg = GeodesicSegment(Z, W, u, dec)
    min_det = _min_margin(seg, samples)
    if min_det < SINGULAR_RTOL:
        return PairClass(LEAVES_CHART, max_angle, min_det)
    return PairClass(REGULAR, max_angle, min_det)


def geodesic(Z, W, samples=DEFAULT_SAMPLES) -> GeodesicSegment:
    """The minimizing segment from ``Z`` to ``W``; raises NotRegular otherwise."""
    cls = classify_pair(Z, W, samples)
    if not cls.regular:
        raise NotRegular(f"pair is {cls.tag}", pair_class=cls)
    return segment_between(Z, W)


def distance(Z, W) -> float:
    """Riemannian distance ``sqrt(sum (2 theta_j)^2)`` from the transported angles."""
    return segment_between(Z, W, cut_tol=0.0).length
