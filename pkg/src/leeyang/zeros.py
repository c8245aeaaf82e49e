"""Locating the complex zeros of the partition polynomial.

Simultaneous (Aberth-Ehrlich) iteration on the max-normalized coefficients,
Newton polishing, then multiplicity-aware cluster refinement: a cluster of m
numerically-split copies of a multiple root is replaced by the Newton root of
the (m-1)-th derivative, which is simple there and recovers full precision.
"""

import math
from dataclasses import dataclass, field

import numpy as np

_EPS = np.finfo(float).eps
_GOLDEN_FRAC = 0.3819660112501051
_CLUSTER_LINK_TOL = 0.05

_P = np.polynomial.polynomial


class RootConvergenceError(RuntimeError):
    """Raised when the simultaneous iteration fails to converge."""


@dataclass(frozen=True)
class ZeroSet:
    """All roots of the partition polynomial, with multiplicity bookkeeping."""

    roots: np.ndarray = field(repr=False)
    angles: np.ndarray = field(repr=False)
    clusters: list  # (representative angle, multiplicity)
    circle_deviation: float
    max_residual: float


def _aberth(c, max_sweeps=200):
    deg = len(c) - 1
    dc = _P.polyder(c)
    scale = np.abs(c).sum()
    z = (1 + 1e-3) * np.exp(2j * np.pi * (np.arange(deg) + _GOLDEN_FRAC) / deg)
    converged = False
    for _ in range(max_sweeps):
        p = _P.polyval(z, c)
        if np.max(np.abs(p)) < 100 * _EPS * scale:
            converged = True
            break
        dp = _P.polyval(z, dc)
        w = p / np.where(dp == 0, 1e-300, dp)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repulsion = (1.0 / diff).sum(axis=1)
        denom = 1.0 - w * repulsion
        step = w / np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        z = z - step
        if np.max(np.abs(step)) < 1e-14 * (1 + np.max(np.abs(z))):
            converged = True
            break
    worst = float(np.max(np.abs(_P.polyval(z, c))))
    if not converged and worst > 1e-8 * scale:
        raise RootConvergenceError(
            f"root iteration stalled after {max_sweeps} sweeps, worst residual {worst:g}"
        )
    # Newton polish; the step cap keeps clustered iterates from jumping away
    for _ in range(3):
        p = _P.polyval(z, c)
        dp = _P.polyval(z, dc)
        step = np.where(np.abs(dp) > 0, p / np.where(dp == 0, 1, dp), 0)
        step = np.where(np.abs(step) > 1e-2, 0, step)
        z = z - step
    return z


def _components(z, indices, tol):
    """Single-linkage components of the points z[indices] at distance tol."""
    remaining = list(indices)
    comps = []
    while remaining:
        stack = [remaining.pop()]
        comp = []
        while stack:
            i = stack.pop()
            comp.append(i)
            linked = [j for j in remaining if abs(z[i] - z[j]) < tol]
            for j in linked:
                remaining.remove(j)
            stack.extend(linked)
        comps.append(sorted(comp))
    return comps


def _refine_cluster(c, z, members):
    """Newton on the (m-1)-th derivative; validate against the expected spread.

    Returns (accepted, refined_root).  The expected spread of a numerical
    multiplicity-m root is (eps * sum|c| / |local leading coeff|)^(1/m); a far
    larger observed spread means the component is a genuine near-degenerate
    group, not one multiple root.
    """
    m = len(members)
    if m == 1:
        return True, z[members[0]]
    d = c
    for _ in range(m - 1):
        d = _P.polyder(d)
    dd = _P.polyder(d)
    zc = z[members].mean()
    for _ in range(100):
        val = _P.polyval(zc, d)
        dval = _P.polyval(zc, dd)
        if dval == 0:
            break
        step = val / dval
        zc = zc - step
        if abs(step) < 1e-15 * (1 + abs(zc)):
            break
    lead = _P.polyval(zc, _P.polyder(d)) / math.factorial(m)
    if lead == 0 or not np.isfinite(lead):
        return False, zc
    r_pred = (_EPS * np.abs(c).sum() / abs(lead)) ** (1.0 / m)
    spread = np.max(np.abs(z[members] - zc))
    if spread >= max(100 * r_pred, 1e-6):
        return False, zc
    # At a genuine m-fold root every lower derivative vanishes at zc up to
    # evaluation noise; a near-degenerate group of simple roots does not.
    dk = c
    for _ in range(m - 1):
        if abs(_P.polyval(zc, dk)) > 1e6 * _EPS * np.abs(dk).sum():
            return False, zc
        dk = _P.polyder(dk)
    return True, zc


def _cluster_and_refine(c, z):
    final = z.copy()
    clusters = []
    multiple = np.zeros(len(z), bool)

    def handle(indices, tol):
        for comp in _components(z, indices, tol):
            ok, zc = _refine_cluster(c, z, comp)
            if ok or len(comp) == 1 or tol / 5 < 1e-12:
                final[comp] = zc if ok else z[comp]
                if ok:
                    clusters.append((zc, len(comp)))
                    multiple[comp] = len(comp) > 1
                else:
                    clusters.extend((z[i], 1) for i in comp)
            else:
                handle(comp, tol / 5)

    handle(list(range(len(z))), _CLUSTER_LINK_TOL)
    # merge bookkeeping clusters that refined onto the same point
    merged = []
    for zc, m in sorted(clusters, key=lambda t: np.angle(t[0])):
        if merged and abs(merged[-1][0] - zc) < 1e-9:
            merged[-1][1] += m
        else:
            merged.append([zc, m])
    return final, [(float(np.angle(zc)), m) for zc, m in merged], multiple


def _polish_extended(c, z, multiple):
    """Newton polish of the simple roots in extended precision.

    Near-degenerate simple roots are conditioning-limited to ~1e-7 in double
    precision; a few clongdouble Newton steps recover two to three digits.
    Accepted multiple-root copies are left alone (Newton is unstable there).
    """
    cl = c.astype(np.clongdouble)
    dcl = _P.polyder(cl)
    zl = z.astype(np.clongdouble)
    free = ~multiple
    for _ in range(4):
        p = _P.polyval(zl[free], cl)
        dp = _P.polyval(zl[free], dcl)
        step = np.where(dp != 0, p / np.where(dp == 0, 1, dp), 0)
        zl[free] = zl[free] - np.where(np.abs(step) > 1e-2, 0, step)
    return zl


def _symmetrize(zl):
    """Enforce exact closure under conjugation (the coefficients are real).

    Pairs each root with its conjugate partner by optimal assignment and
    averages the two estimates; self-paired roots become exactly real.
    """
    from scipy.optimize import linear_sum_assignment

    dist = np.abs(zl[:, None] - np.conj(zl)[None, :]).astype(float)
    rows, cols = linear_sum_assignment(dist)
    perm = np.empty(len(zl), int)
    perm[rows] = cols
    if not np.array_equal(perm[perm], np.arange(len(zl))):
        return zl  # no consistent pairing; leave the roots as found
    return (zl + np.conj(zl[perm])) / 2


def find_zeros(poly) -> ZeroSet:
    """All 2Ns roots of sum_n p_n z^n, clustered by multiplicity."""
    if poly.two_ns < 1:
        raise ValueError("polynomial degree must be at least 1")
    c = poly.coeffs()
    raw = _aberth(c)
    refined, clusters, multiple = _cluster_and_refine(c, raw)
    roots = np.asarray(_symmetrize(_polish_extended(c, refined, multiple)), complex)
    angles = np.angle(roots)
    angles[angles == -np.pi] = np.pi
    order = np.argsort(angles, kind="stable")
    roots = roots[order]
    angles = angles[order]
    residuals = np.abs(_P.polyval(roots, c))
    return ZeroSet(
        roots=roots,
        angles=angles,
        clusters=clusters,
        circle_deviation=float(np.max(np.abs(np.abs(roots) - 1.0))),
        max_residual=float(residuals.max()),
    )


def circle_deviation(zeros: ZeroSet) -> float:
    """Max over roots of | |z_n| - 1 |, the quantitative circle-theorem check."""
    if len(zeros.roots) == 0:
        raise ValueError("empty zero set")
    return float(np.max(np.abs(np.abs(zeros.roots) - 1.0)))


def predicted_zero_times(zeros: ZeroSet, lam: float, delta: int):
    """Times t_n = ((-theta_n) mod 2pi) / (lam * delta), sorted ascending."""
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    if not isinstance(delta, int) or delta < 1:
        raise ValueError(f"delta must be a positive integer, got {delta!r}")
    times = np.mod(-zeros.angles, 2 * np.pi) / (lam * delta)
    return np.sort(times)
