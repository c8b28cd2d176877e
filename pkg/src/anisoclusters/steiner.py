"""Weighted Fermat points and admissible boundary-direction triples.

A triple junction with arcs leaving a point O along three directions is
stationary exactly when a combination of gauge gradients along those
directions vanishes. For a symmetric gauge the combination is the plain sum
of gradients; with asymmetry each arc contributes its two one-sided weights
according to which sectors around the junction are white.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gauge import TangentGauge
from .geometry import TWO_PI, angle_of, cross2, unit_dir, wrap_angle


@dataclass
class FermatResult:
    point: np.ndarray
    value: float
    iterations: int
    gradient_norm: float
    degenerate_vertex: int | None = None
    collinear: bool = False


@dataclass
class AdmissibleTriple:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    angle_b: float  # euclidean angle from a to b, radians in (0, pi]
    angle_c: float
    residual: float
    iterations: int

    def points(self):
        return np.array([self.a, self.b, self.c])


def _term_value_grad(gauge, x, p, mode):
    """Value and d/dp of one Fermat term for terminal x."""
    if mode == "out":
        v = gauge.value(x - p)
        g = -gauge.grad(x - p)
    elif mode == "in":
        v = gauge.value(p - x)
        g = gauge.grad(p - x)
    elif mode == "sym":
        v = 0.5 * (gauge.value(x - p) + gauge.value(p - x))
        g = 0.5 * (gauge.grad(p - x) - gauge.grad(x - p))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return float(v), g


def fermat_point(gauge, a, b, c, modes=("out", "out", "out"), tol=1e-10, max_iter=5000):
    """Minimize the three-terminal anisotropic junction objective.

    gauge weighs oriented segments (a tangent gauge); modes pick each
    terminal's orientation: 'out' costs gauge(X - P), 'in' costs
    gauge(P - X), 'sym' averages both. Descent with backtracking from the
    centroid; stops when the gradient norm drops below tol * scale or no
    strictly decreasing step remains. A minimizer within 1e-8 * scale of a
    terminal is snapped to it and flagged as degenerate.
    """
    pts = np.array([a, b, c], dtype=float)
    scale = max(np.linalg.norm(pts[i] - pts[j]) for i in range(3) for j in range(i + 1, 3))
    if scale <= 0 or min(
        np.linalg.norm(pts[i] - pts[j]) for i in range(3) for j in range(i + 1, 3)
    ) < 1e-12:
        raise ValueError("terminals must be pairwise distinct")
    area2 = abs(float(cross2(pts[1] - pts[0], pts[2] - pts[0])))
    collinear = area2 < 1e-12 * scale * scale

    def objective(p):
        val = 0.0
        grad = np.zeros(2)
        for x, mode in zip(pts, modes):
            v, g = _term_value_grad(gauge, x, p, mode)
            val += v
            grad += g
        return val, grad

    p = pts.mean(axis=0)
    fval, grad = objective(p)
    step = 0.25 * scale
    it = 0
    for it in range(1, max_iter + 1):
        gn = float(np.linalg.norm(grad))
        if gn <= tol * scale:
            break
        d = -grad / gn
        t = step
        moved = False
        while t > 1e-16 * scale:
            cand = p + t * d
            fc, gc = objective(cand)
            if fc < fval - 1e-4 * t * gn:
                p, fval, grad = cand, fc, gc
                step = min(2.0 * t, 0.25 * scale)
                moved = True
                break
            t *= 0.5
        if not moved:
            break
    gn = float(np.linalg.norm(grad))
    degenerate = None
    d2term = np.linalg.norm(pts - p, axis=1)
    k = int(np.argmin(d2term))
    if d2term[k] <= 1e-8 * scale:
        p = pts[k].copy()
        fval = objective(p)[0]
        degenerate = k
    return FermatResult(point=p, value=fval, iterations=it, gradient_norm=gn,
                        degenerate_vertex=degenerate, collinear=collinear)


def fermat_modes_for_colors(colors):
    """Terminal modes matching a junction's sector colors.

    colors[i] labels the sector swept clockwise from direction i to
    direction i+1 (cyclic). All colored: every terminal is two-sided. One
    white sector: the two arcs bounding it carry full one-sided weights.
    """
    colors = list(colors)
    whites = [i for i, c in enumerate(colors) if c == 0]
    if len(whites) == 0:
        return ("sym", "sym", "sym"), 0
    if len(whites) > 1:
        raise ValueError("at most one white sector around a triple junction")
    w = whites[0]
    modes = ["sym", "sym", "sym"]
    modes[w] = "out"
    modes[(w + 1) % 3] = "in"
    return tuple(modes), w


def junction_residual(density, origin, directions, colors):
    """Stationarity residual of a triple junction at a point.

    density: a Density (its normal gauge is frozen at origin) or a plain
    normal-based Gauge. directions: three outgoing arc vectors ordered
    clockwise. colors[i] is the label of the sector swept clockwise from
    directions[i] to directions[i+1]; label 0 is white and at most one
    sector may be white. Zero residual is the first-order stationarity
    condition for the junction.
    """
    normal_gauge = density.gauge_at(origin) if hasattr(density, "gauge_at") else density
    dirs = np.asarray(directions, dtype=float)
    if dirs.shape != (3, 2):
        raise ValueError("need exactly three directions")
    if np.any(np.linalg.norm(dirs, axis=1) < 1e-300):
        raise ValueError("directions must be nonzero")
    hh = TangentGauge(normal_gauge)
    th = angle_of(dirs)
    cw_gaps = wrap_angle(th - np.roll(th, -1))
    if not np.isclose(cw_gaps.sum(), TWO_PI, atol=1e-9):
        raise ValueError("directions must be ordered clockwise")
    colors = list(colors)
    if len(colors) != 3:
        raise ValueError("need exactly three sector colors")
    whites = [i for i, c in enumerate(colors) if c == 0]
    if len(whites) > 1:
        raise ValueError("at most one white sector around a triple junction")
    if whites:
        w = whites[0]
        dirs = np.roll(dirs, -w, axis=0)
        g = hh.grad(dirs)
        gm = hh.grad(-dirs)
        return g[0] - gm[1] + 0.5 * (g[2] - gm[2])
    g = hh.grad(dirs)
    gm = hh.grad(-dirs)
    return 0.5 * (g - gm).sum(axis=0)


def admissible_pairs(gauge, a, resolution=720, tol=1e-9, max_newton=60):
    """All boundary pairs {B, C} forming a stationary triple with A.

    Scans the (phi_B, phi_C) torus at the given resolution for cells where
    both components of grad(A) + grad(B) + grad(C) change sign, refines each
    candidate with damped Newton on finite-difference Jacobians, keeps roots
    with residual below tol, and deduplicates unordered pairs. Requires a
    smooth gauge; kinked gauges have no usable gradient field.
    """
    if not gauge.smooth:
        raise ValueError("kinked gauge: admissible pairs need a C1 gauge")
    a = np.asarray(a, dtype=float)
    va = float(gauge.value(a))
    if va <= 0:
        raise ValueError("reference point must be nonzero")
    a = a / va
    g0 = gauge.grad(a)
    phi_a = float(angle_of(a))

    n = int(resolution)
    phis = np.arange(n) * (TWO_PI / n)
    G = gauge.grad(unit_dir(phis))  # (n, 2)

    F1 = g0[0] + G[:, 0][:, None] + G[:, 0][None, :]
    F2 = g0[1] + G[:, 1][:, None] + G[:, 1][None, :]

    def cellknot(F):
        c00 = F
        c10 = np.roll(F, -1, axis=0)
        c01 = np.roll(F, -1, axis=1)
        c11 = np.roll(np.roll(F, -1, axis=0), -1, axis=1)
        mn = np.minimum(np.minimum(c00, c10), np.minimum(c01, c11))
        mx = np.maximum(np.maximum(c00, c10), np.maximum(c01, c11))
        return (mn <= 0) & (mx >= 0)

    cells = np.argwhere(cellknot(F1) & cellknot(F2))

    def residual(phi):
        return g0 + gauge.grad(unit_dir(phi[0])) + gauge.grad(unit_dir(phi[1]))

    h_cell = TWO_PI / n
    roots = []
    for i, j in cells:
        phi = np.array([phis[i] + 0.5 * h_cell, phis[j] + 0.5 * h_cell])
        r = residual(phi)
        ok = False
        for it in range(1, max_newton + 1):
            rn = np.linalg.norm(r)
            if rn < tol:
                ok = True
                break
            eps = 1e-7
            J = np.empty((2, 2))
            for k in range(2):
                dp = np.zeros(2)
                dp[k] = eps
                J[:, k] = (residual(phi + dp) - residual(phi - dp)) / (2 * eps)
            try:
                delta = np.linalg.solve(J, -r)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(delta)):
                break
            lam = 1.0
            while lam > 1e-6:
                cand = phi + lam * delta
                rc = residual(cand)
                if np.linalg.norm(rc) < rn:
                    phi, r = cand, rc
                    break
                lam *= 0.5
            else:
                break
        if not ok:
            continue
        phi = wrap_angle(phi)
        # reject triples with coincident directions
        sep = [
            min(wrap_angle(phi[0] - phi_a), wrap_angle(phi_a - phi[0])),
            min(wrap_angle(phi[1] - phi_a), wrap_angle(phi_a - phi[1])),
            min(wrap_angle(phi[0] - phi[1]), wrap_angle(phi[1] - phi[0])),
        ]
        if min(sep) < 1e-6:
            continue
        roots.append((phi, float(np.linalg.norm(residual(phi))), it))

    # deduplicate unordered pairs on the torus
    uniq = []
    merge_tol = 0.75 * h_cell
    for phi, res, its in sorted(roots, key=lambda t: (t[0][0], t[0][1])):
        cands = [phi, phi[::-1]]
        dup = False
        for u, _, _ in uniq:
            for c in cands:
                d = np.minimum(wrap_angle(c - u), wrap_angle(u - c))
                if np.all(d < merge_tol):
                    dup = True
                    break
            if dup:
                break
        if not dup:
            uniq.append((phi, res, its))

    out = []
    for phi, res, its in uniq:
        b = gauge.boundary_point(phi[0])
        c = gauge.boundary_point(phi[1])
        ab = _point_angle(a, b)
        ac = _point_angle(a, c)
        if ab > ac:  # report the smaller-angle partner first, deterministically
            b, c = c, b
            ab, ac = ac, ab
        out.append(
            AdmissibleTriple(a=a.copy(), b=b, c=c, angle_b=ab, angle_c=ac, residual=res, iterations=its)
        )
    out.sort(key=lambda t: (t.angle_b, t.angle_c))
    return out


def _point_angle(u, v):
    cosang = float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))
    return float(np.arccos(np.clip(cosang, -1.0, 1.0)))
