"""Canonical kernel and the Kähler data derived from it.

Normalization: the Kähler form is ``i dd-bar`` of ``log det(I + ZZ*)^2``, which
makes every embedded Riemann sphere a unit round sphere (area ``4 pi``,
curvature 1). With ``A = (I + ZZ*)^{-1}`` and ``B = (I + Z*Z)^{-1}``::

    form(X, Y)   = -4 Im tr(A X B Y*)
    metric(X, Y) =  4 Re tr(A X B Y*)
    rho(X)       =  4 Im tr(A X Z*)          (d rho = 2 form)

All of these broadcast over leading axes of their arguments.
"""

from __future__ import annotations

import numpy as np

from .chart import SpaceParams, act, ctranspose, denominator
from .errors import ArgUndefined, GeometryError

# How close to the negative real axis h may come before the argument is refused.
CUT_RTOL = 1e-14


def h_kernel(Z, W):
    """``det(I_k + Z W*)``: holomorphic in ``Z``, antiholomorphic in ``W``."""
    Z = np.asarray(Z, dtype=complex)
    W = np.asarray(W, dtype=complex)
    k = Z.shape[-2]
    return np.linalg.det(np.eye(k) + Z @ ctranspose(W))


def k_c(Z, W):
    """Canonical kernel ``h^p`` with ``p = k + m`` the genus."""
    return _int_power(h_kernel(Z, W), SpaceParams.of(Z).genus)


def k_tilde(Z, W):
    """Curvature-normalized kernel ``h^2``."""
    return _int_power(h_kernel(Z, W), 2)


def _int_power(h, p):
    # repeated products: complex ``**`` may go through exp/log and lose ulps
    out = h
    for _ in range(p - 1):
        out = out * h
    return out


def on_branch_cut(h) -> bool:
    h = complex(h)
    return h == 0 or (h.real < 0 and abs(h.imag) <= CUT_RTOL * abs(h))


def arg_k_tilde(Z, W, max_depth=40):
    """Continuous argument of ``h(Z, W)^2``, zero on the diagonal.

    In rank one this is ``2 Arg h`` with the principal branch. In higher rank
    the factors of ``h`` can carry a total phase beyond ``pi``, so the
    principal value is lifted to the right sheet by following ``h(Z, .)`` along
    the minimizing geodesic from ``Z`` to ``W``.
    """
    h = complex(h_kernel(Z, W))
    if on_branch_cut(h):
        raise ArgUndefined(f"h(Z, W) = {h} lies on (-inf, 0]")
    principal = float(np.angle(h))
    if SpaceParams.of(Z).rank == 1:
        return 2.0 * principal
    tracked = _tracked_arg_h(Z, W, max_depth=max_depth)
    turns = round((tracked - principal) / (2 * np.pi))
    return 2.0 * (principal + 2 * np.pi * turns)


def _tracked_arg_h(Z, W, samples=33, max_depth=40):
    from .geodesics import segment_between

    try:
        seg = segment_between(Z, W)
    except GeometryError as exc:
        raise ArgUndefined(f"no minimizing segment to track along: {exc}") from exc

    Z = np.asarray(Z, dtype=complex)

    def h_at(ts):
        return h_kernel(Z, seg.eval(np.asarray(ts, dtype=float)))

    ts = np.linspace(0.0, 1.0, samples)
    hs = h_at(ts)
    stack = [(ts[i], ts[i + 1], hs[i], hs[i + 1], 0) for i in range(samples - 1)][::-1]
    total = 0.0
    while stack:
        t0, t1, h0, h1, depth = stack.pop()
        if not (np.isfinite(h0) and np.isfinite(h1)) or h0 == 0 or h1 == 0:
            raise ArgUndefined("kernel vanishes or blows up along the segment")
        step = np.angle(h1 / h0)
        if abs(step) < np.pi / 4:
            total += step
            continue
        if depth >= max_depth:
            raise ArgUndefined("argument could not be tracked along the segment")
        tm = 0.5 * (t0 + t1)
        hm = complex(h_at([tm])[0])
        stack.append((tm, t1, hm, h1, depth + 1))
        stack.append((t0, tm, h0, hm, depth + 1))
    return total


def potential(Z):
    """Kähler potential ``log h(Z, Z)^2 = 2 log det(I + ZZ*)``."""
    Z = np.asarray(Z, dtype=complex)
    k = Z.shape[-2]
    _, logdet = np.linalg.slogdet(np.eye(k) + Z @ ctranspose(Z))
    return 2.0 * logdet


def _hermitian_pairing(Z, X, Y):
    Z = np.asarray(Z, dtype=complex)
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    k, m = Z.shape[-2:]
    Zh = ctranspose(Z)
    left = np.linalg.solve(np.eye(k) + Z @ Zh, X)
    right = np.linalg.solve(np.eye(m) + Zh @ Z, ctranspose(Y))
    return np.trace(left @ right, axis1=-2, axis2=-1)


def kahler_form(Z, X, Y):
    return -4.0 * np.imag(_hermitian_pairing(Z, X, Y))


def metric(Z, X, Y):
    return 4.0 * np.real(_hermitian_pairing(Z, X, Y))


def rho(Z, X):
    """The 1-form ``d_C log k~`` with ``d_C = -i(del - delbar)``."""
    Z = np.asarray(Z, dtype=complex)
    X = np.asarray(X, dtype=complex)
    k = Z.shape[-2]
    M = np.linalg.solve(np.eye(k) + Z @ ctranspose(Z), X @ ctranspose(Z))
    return 4.0 * np.imag(np.trace(M, axis1=-2, axis2=-1))


def covariance_defect(g, Z, W) -> float:
    """Residual of ``k~(gZ, gW) mu(g,Z)^2 conj(mu(g,W))^2 = k~(Z, W)``."""
    gZ, gW = act(g, Z), act(g, W)
    lhs = k_tilde(gZ, gW) * denominator(g, Z) ** 2 * np.conj(denominator(g, W)) ** 2
    return float(abs(lhs - k_tilde(Z, W)))
