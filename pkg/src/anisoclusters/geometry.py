"""Low-level planar geometry helpers shared by the other modules.

Everything works on numpy arrays with points in the last axis of size 2 and
vectorizes over leading axes where it matters (segment batches).
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


def rotate_cw(v):
    """Rotate plane vectors 90 degrees clockwise: (x, y) -> (y, -x)."""
    v = np.asarray(v, dtype=float)
    out = np.empty_like(v)
    out[..., 0] = v[..., 1]
    out[..., 1] = -v[..., 0]
    return out


def rotate_ccw(v):
    """Rotate plane vectors 90 degrees counterclockwise: (x, y) -> (-y, x)."""
    v = np.asarray(v, dtype=float)
    out = np.empty_like(v)
    out[..., 0] = -v[..., 1]
    out[..., 1] = v[..., 0]
    return out


def rotation_matrix(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def unit_dir(theta):
    """Unit vector(s) at polar angle theta; theta may be an array."""
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def wrap_angle(theta):
    """Wrap angles into [0, 2*pi)."""
    return np.mod(theta, TWO_PI)


def angle_of(v):
    v = np.asarray(v, dtype=float)
    return np.arctan2(v[..., 1], v[..., 0])


def angle_between(u, v):
    """Unsigned angle in [0, pi] between two vectors."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    dot = (u * v).sum(axis=-1)
    cross = u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
    return np.arctan2(np.abs(cross), dot)


def ccw_gap(a, b):
    """Counterclockwise angular gap from angle a to angle b, in (0, 2*pi]."""
    d = wrap_angle(b - a)
    return np.where(d == 0.0, TWO_PI, d)


def cross2(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def polyline_vectors(pts):
    pts = np.asarray(pts, dtype=float)
    return pts[1:] - pts[:-1]


def euclid_length(pts):
    return float(np.linalg.norm(polyline_vectors(pts), axis=-1).sum())


def shoelace_terms(pts):
    """Sum of cross(p_k, p_{k+1})/2 along an open polyline.

    Accumulated over the closed cycles of a chamber boundary this is the
    enclosed signed area.
    """
    pts = np.asarray(pts, dtype=float)
    return 0.5 * float(cross2(pts[:-1], pts[1:]).sum())


def polygon_area(pts):
    """Signed area of a closed polygon given without the repeated endpoint."""
    pts = np.asarray(pts, dtype=float)
    return 0.5 * float(cross2(pts, np.roll(pts, -1, axis=0)).sum())


def point_in_polygon(p, poly, include_boundary=True, eps=1e-12):
    """Even-odd test for a single point against polygon vertices (no repeat)."""
    p = np.asarray(p, dtype=float)
    poly = np.asarray(poly, dtype=float)
    a = poly
    b = np.roll(poly, -1, axis=0)
    # boundary check: distance from p to each segment
    ab = b - a
    t = np.clip(((p - a) * ab).sum(-1) / np.maximum((ab * ab).sum(-1), 1e-300), 0.0, 1.0)
    foot = a + t[:, None] * ab
    d = np.linalg.norm(foot - p, axis=-1)
    if d.min() <= eps:
        return bool(include_boundary)
    # ray cast along +x
    cond = (a[:, 1] > p[1]) != (b[:, 1] > p[1])
    with np.errstate(divide="ignore", invalid="ignore"):
        xin = a[:, 0] + (p[1] - a[:, 1]) / (b[:, 1] - a[:, 1]) * (b[:, 0] - a[:, 0])
    hits = cond & (xin > p[0])
    return bool(hits.sum() % 2 == 1)


def segment_point_distance(p, a, b):
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    denom = np.maximum((ab * ab).sum(-1), 1e-300)
    t = np.clip(((p - a) * ab).sum(-1) / denom, 0.0, 1.0)
    foot = a + t[..., None] * ab
    return np.linalg.norm(foot - p, axis=-1)


def segments_properly_cross(p1, q1, p2, q2, eps=0.0):
    """Vectorized proper-crossing test for segment batches.

    True where open segments intersect at a single interior point. Shared
    endpoints and touching do not count. All inputs broadcast to (..., 2).
    """
    p1 = np.asarray(p1, float)
    q1 = np.asarray(q1, float)
    p2 = np.asarray(p2, float)
    q2 = np.asarray(q2, float)
    d1 = q1 - p1
    d2 = q2 - p2
    denom = cross2(d1, d2)
    rp = p2 - p1
    t = cross2(rp, d2)
    u = cross2(rp, d1)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = t / denom
        u = u / denom
    ok = np.abs(denom) > 1e-300
    return ok & (t > eps) & (t < 1 - eps) & (u > eps) & (u < 1 - eps)


def polyline_self_intersects(pts, eps=1e-12):
    pts = np.asarray(pts, float)
    n = len(pts) - 1
    if n < 2:
        return False
    a = pts[:-1]
    b = pts[1:]
    i, j = np.triu_indices(n, k=2)
    if len(i) == 0:
        return False
    hit = segments_properly_cross(a[i], b[i], a[j], b[j])
    return bool(hit.any())


def clip_segment_to_disk(p, q, center, radius, eps=1e-12):
    """Parameter interval [t0, t1] of segment p+t(q-p) inside a closed disk.

    Returns None when the intersection is empty or a tangency shorter than
    eps in parameter length.
    """
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    c = np.asarray(center, float)
    d = q - p
    f = p - c
    a = float(d @ d)
    if a < 1e-300:
        return (0.0, 1.0) if float(f @ f) <= radius * radius else None
    b = 2.0 * float(f @ d)
    cc = float(f @ f) - radius * radius
    disc = b * b - 4 * a * cc
    if disc < 0.0:
        return None
    sq = np.sqrt(disc)
    t0 = (-b - sq) / (2 * a)
    t1 = (-b + sq) / (2 * a)
    t0 = max(t0, 0.0)
    t1 = min(t1, 1.0)
    if t1 - t0 <= eps:
        return None
    return (t0, t1)


# Symmetric triangle quadrature rules on the reference triangle, given as
# (barycentric coordinates, weights summing to 1). Exact degrees: 1, 2, 5.
_TRI_RULES = {
    1: (np.array([[1 / 3, 1 / 3, 1 / 3]]), np.array([1.0])),
    2: (
        np.array([[2 / 3, 1 / 6, 1 / 6], [1 / 6, 2 / 3, 1 / 6], [1 / 6, 1 / 6, 2 / 3]]),
        np.array([1 / 3, 1 / 3, 1 / 3]),
    ),
    5: (
        np.array(
            [
                [1 / 3, 1 / 3, 1 / 3],
                [0.059715871789770, 0.470142064105115, 0.470142064105115],
                [0.470142064105115, 0.059715871789770, 0.470142064105115],
                [0.470142064105115, 0.470142064105115, 0.059715871789770],
                [0.797426985353087, 0.101286507323456, 0.101286507323456],
                [0.101286507323456, 0.797426985353087, 0.101286507323456],
                [0.101286507323456, 0.101286507323456, 0.797426985353087],
            ]
        ),
        np.array(
            [
                0.225,
                0.132394152788506,
                0.132394152788506,
                0.132394152788506,
                0.125939180544827,
                0.125939180544827,
                0.125939180544827,
            ]
        ),
    ),
}


def triangle_rule(order):
    """Barycentric points and weights for a fixed-order symmetric rule."""
    if order not in _TRI_RULES:
        raise ValueError(f"no triangle rule of order {order}; choose from {sorted(_TRI_RULES)}")
    return _TRI_RULES[order]


def fan_triangle_quadrature(p, q, func, order=5, apex=(0.0, 0.0)):
    """Integral of func over signed fan triangles (apex, p_i, q_i), summed.

    p, q: (S, 2) segment endpoint batches. The signed areas make the sum equal
    the integral over the region the segments enclose, for any apex.
    """
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    apex = np.asarray(apex, float)
    bary, w = triangle_rule(order)
    areas = 0.5 * cross2(p - apex, q - apex)  # (S,)
    # quadrature points: (S, K, 2)
    pts = (
        bary[None, :, 0, None] * apex[None, None, :]
        + bary[None, :, 1, None] * p[:, None, :]
        + bary[None, :, 2, None] * q[:, None, :]
    )
    vals = func(pts.reshape(-1, 2)).reshape(pts.shape[0], pts.shape[1])
    return float((areas * (vals * w[None, :]).sum(axis=1)).sum())


def fit_endpoint_tangent(pts, k=4):
    """Unit tangent at pts[0], pointing along the polyline.

    Fits an algebraic (Kasa) circle through the first k points and takes the
    circle tangent at the projection of pts[0]; falls back to a least-squares
    line direction when the points are nearly straight. Exact for points
    sampled from a circle or a line, which is what converged interfaces are.
    """
    pts = np.asarray(pts, float)
    k = min(k, len(pts))
    if k < 2:
        raise ValueError("need at least two points")
    P = pts[:k]
    chord = P[-1] - P[0]
    if k == 2:
        return chord / np.linalg.norm(chord)
    ctr = P.mean(axis=0)
    Q = P - ctr
    # line fit direction (principal axis)
    cov = Q.T @ Q
    evals, evecs = np.linalg.eigh(cov)
    line_dir = evecs[:, -1]
    if line_dir @ chord < 0:
        line_dir = -line_dir
    resid = np.abs(cross2(Q, line_dir)).max()
    scale = np.linalg.norm(chord) + 1e-300
    if resid <= 1e-9 * scale:
        return line_dir
    # Kasa fit: minimize |(x-a)^2 - r^2| linearized
    A = np.column_stack([2 * Q[:, 0], 2 * Q[:, 1], np.ones(k)])
    b = (Q ** 2).sum(axis=1)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    cx, cy = sol[0], sol[1]
    center = ctr + np.array([cx, cy])
    radial = P[0] - center
    nr = np.linalg.norm(radial)
    if nr < 1e-12 * scale:
        return line_dir
    tang = rotate_ccw(radial / nr)
    if tang @ chord < 0:
        tang = -tang
    return tang


def hausdorff_to_segments(points, seg_a, seg_b):
    """max over points of distance to the union of segments (a_i, b_i)."""
    points = np.asarray(points, float)
    seg_a = np.asarray(seg_a, float)
    seg_b = np.asarray(seg_b, float)
    d = np.empty(len(points))
    for n, pt in enumerate(points):
        d[n] = segment_point_distance(pt, seg_a, seg_b).min()
    return float(d.max())
