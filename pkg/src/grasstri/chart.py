"""Matrix model of Gr(m, C^n) and its Harish-Chandra chart.

A chart point is a complex ``k x m`` matrix ``Z``; it stands for the column
span of the ``n x m`` frame ``[Z; I_m]`` (n = k + m). The origin is ``Z = 0``.
A unitary ``g`` in U(n), split into blocks ``[[A, B], [C, D]]`` with ``A`` of
size ``k x k``, acts by ``Z -> (AZ + B)(CZ + D)^{-1}`` wherever the denominator
is invertible.

All functions broadcast over leading axes of ``Z`` where it makes sense.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from .errors import OutsideBigCell, UndefinedAction

# Chart margins below this count as zero.
SINGULAR_RTOL = 1e-9


def ctranspose(x):
    return np.conj(np.swapaxes(x, -1, -2))


@dataclass(frozen=True)
class SpaceParams:
    """Dimensions of ``Gr(m, C^{k+m})``.

    ``rank`` and ``genus`` follow from ``k`` and ``m``; the genus is also
    rebuilt from the root multiplicities ``a = 2``, ``b = |m - k|`` as a
    consistency check.
    """

    k: int
    m: int
    n: int = field(init=False)
    rank: int = field(init=False)
    genus: int = field(init=False)

    def __post_init__(self):
        if int(self.k) != self.k or int(self.m) != self.m or self.k < 1 or self.m < 1:
            raise ValueError(f"k and m must be positive integers, got k={self.k}, m={self.m}")
        r = min(self.k, self.m)
        a, b = 2, abs(self.m - self.k)
        p = (r - 1) * a + b + 2
        assert p == self.k + self.m
        object.__setattr__(self, "n", self.k + self.m)
        object.__setattr__(self, "rank", r)
        object.__setattr__(self, "genus", p)

    @classmethod
    def of(cls, Z) -> "SpaceParams":
        Z = np.asarray(Z)
        return cls(Z.shape[-2], Z.shape[-1])

    def origin(self):
        return np.zeros((self.k, self.m), dtype=complex)


def as_chart_point(Z, space: SpaceParams | None = None) -> np.ndarray:
    """Validate and convert to a complex ``k x m`` array."""
    Z = np.array(Z, dtype=complex)
    if Z.ndim == 0:
        Z = Z.reshape(1, 1)
    if Z.ndim != 2:
        raise ValueError(f"chart point must be a matrix, got shape {Z.shape}")
    if space is not None and Z.shape != (space.k, space.m):
        raise ValueError(f"expected shape {(space.k, space.m)}, got {Z.shape}")
    if not np.all(np.isfinite(Z)):
        raise ValueError("chart point has non-finite entries")
    return Z


def frame_margin(F):
    """``|det F2| / sqrt(det F*F)`` for a frame ``[F1; F2]``.

    This is the product of the cosines of the principal angles between the
    spanned subspace and the origin, so it lies in [0, 1] and vanishes exactly
    on the cut locus of the origin. Broadcasts over leading axes.
    """
    F = np.asarray(F)
    m = F.shape[-1]
    gram = np.real(np.linalg.det(ctranspose(F) @ F))
    return np.abs(np.linalg.det(F[..., -m:, :])) / np.sqrt(gram)


def action_margin(g, Z):
    """Chart margin of ``g . Z``: ``|det(CZ + D)| / sqrt(det(I + Z*Z))`` for unitary ``g``."""
    Z = np.asarray(Z)
    m = Z.shape[-1]
    gram = np.real(np.linalg.det(np.eye(m) + ctranspose(Z) @ Z))
    return np.abs(np.linalg.det(denominator_matrix(g, Z))) / np.sqrt(gram)


def blocks(g, k):
    g = np.asarray(g)
    return g[..., :k, :k], g[..., :k, k:], g[..., k:, :k], g[..., k:, k:]


def embed(Z) -> np.ndarray:
    """Orthonormal frame (``n x m``) of the subspace with chart coordinate ``Z``."""
    Z = as_chart_point(Z)
    m = Z.shape[1]
    F, _ = np.linalg.qr(np.vstack([Z, np.eye(m)]))
    return F


def projector(F) -> np.ndarray:
    F = np.asarray(F)
    return F @ ctranspose(F)


def is_frame(F, tol=1e-12) -> bool:
    F = np.asarray(F)
    m = F.shape[1]
    return bool(np.linalg.norm(ctranspose(F) @ F - np.eye(m)) <= tol)


def same_point(F, G, tol=1e-10) -> bool:
    """Whether two frames span the same subspace (projector comparison)."""
    return bool(np.linalg.norm(projector(F) - projector(G)) <= tol)


def chart_inverse(F) -> np.ndarray:
    """Chart coordinate of the span of ``F``.

    Raises OutsideBigCell when the lower ``m x m`` block is singular, i.e. the
    subspace lies in the cut locus of the origin.
    """
    F = np.asarray(F, dtype=complex)
    n, m = F.shape
    k = n - m
    F1, F2 = F[:k], F[k:]
    margin = float(frame_margin(F))
    if margin < SINGULAR_RTOL:
        raise OutsideBigCell(f"frame lies outside the big cell (margin {margin:.3e})")
    return np.linalg.solve(F2.T, F1.T).T


def denominator_matrix(g, Z):
    k = np.shape(Z)[-2]
    _, _, C, D = blocks(g, k)
    return C @ Z + D


def denominator(g, Z) -> complex:
    """``det(CZ + D)``: zero exactly when ``act(g, Z)`` is undefined."""
    Z = as_chart_point(Z)
    return complex(np.linalg.det(denominator_matrix(g, Z)))


def act_many(g, Z):
    """Fractional action on a stack of chart points, no singularity checks."""
    k = Z.shape[-2]
    A, B, C, D = blocks(g, k)
    num = A @ Z + B
    den = C @ Z + D
    return ctranspose(np.linalg.solve(ctranspose(den), ctranspose(num)))


def act(g, Z) -> np.ndarray:
    """``(AZ + B)(CZ + D)^{-1}``; raises UndefinedAction at a pole."""
    Z = as_chart_point(Z)
    g = np.asarray(g, dtype=complex)
    if g.shape != (sum(Z.shape),) * 2:
        raise ValueError(f"group element shape {g.shape} does not match point shape {Z.shape}")
    margin = float(action_margin(g, Z))
    if margin < SINGULAR_RTOL:
        raise UndefinedAction(f"action undefined: chart margin {margin:.3e}")
    den = denominator_matrix(g, Z)
    k = Z.shape[0]
    A, B, _, _ = blocks(g, k)
    return np.linalg.solve(den.T, (A @ Z + B).T).T


def is_unitary(g, tol=1e-12) -> bool:
    g = np.asarray(g)
    return bool(np.linalg.norm(ctranspose(g) @ g - np.eye(g.shape[0])) <= tol)


def random_unitary(n, rng=None) -> np.ndarray:
    """Haar-distributed element of U(n)."""
    if n == 1:
        rng = np.random.default_rng(rng)
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return unitary_group.rvs(n, random_state=rng)


def random_point(space: SpaceParams, rng=None, scale=1.0) -> np.ndarray:
    """Chart point with i.i.d. standard complex normal entries times ``scale``."""
    rng = np.random.default_rng(rng)
    shape = (space.k, space.m)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def block_diag_unitary(u, v) -> np.ndarray:
    """The isotropy element ``diag(u, v)``, acting by ``Z -> u Z v^*``."""
    u, v = np.asarray(u), np.asarray(v)
    k, m = u.shape[0], v.shape[0]
    g = np.zeros((k + m, k + m), dtype=complex)
    g[:k, :k] = u
    g[k:, k:] = v
    return g
