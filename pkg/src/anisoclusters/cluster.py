"""Planar clusters: labeled polyline subdivisions and their measures.

A cluster partitions a region into m colored chambers (labels 1..m) plus the
white exterior (label 0). Geometry is a shared vertex array and a list of
polyline edges, each carrying the chamber label seen on the left and on the
right of the direction of travel.

Perimeter convention: a segment bounding white on one side carries the full
gauge weight evaluated at the colored side's outward normal (the clockwise
rotation of the travel direction when white is on the right); a segment
between two distinct colored chambers carries the mean of the two oriented
weights; a segment with equal labels on both sides carries nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    cross2,
    fan_triangle_quadrature,
    clip_segment_to_disk,
    rotate_cw,
    segments_properly_cross,
    triangle_rule,
)


@dataclass
class Edge:
    vertices: list
    left: int
    right: int
    tags: dict = field(default_factory=dict)


class Cluster:
    def __init__(self, vertices, edges, n_chambers):
        self.vertices = np.array(vertices, dtype=float)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 2:
            raise ValueError("vertices must be (V, 2)")
        self.edges = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        self.m = int(n_chambers)

    def copy(self):
        return Cluster(
            self.vertices.copy(),
            [Edge(list(e.vertices), e.left, e.right, dict(e.tags)) for e in self.edges],
            self.m,
        )

    def edge_points(self, e):
        return self.vertices[np.asarray(e.vertices, dtype=int)]

    def segment_index_arrays(self):
        """Flat segment arrays: start index, end index, left, right, edge id."""
        i0, i1, left, right, eid = [], [], [], [], []
        for k, e in enumerate(self.edges):
            idx = np.asarray(e.vertices, dtype=int)
            i0.append(idx[:-1])
            i1.append(idx[1:])
            n = len(idx) - 1
            left.append(np.full(n, e.left, dtype=int))
            right.append(np.full(n, e.right, dtype=int))
            eid.append(np.full(n, k, dtype=int))
        cat = lambda parts: np.concatenate(parts) if parts else np.empty(0, dtype=int)
        return cat(i0), cat(i1), cat(left), cat(right), cat(eid)

    def segment_arrays(self):
        i0, i1, left, right, eid = self.segment_index_arrays()
        return self.vertices[i0], self.vertices[i1], left, right, eid

    def vertex_degrees(self):
        deg = np.zeros(len(self.vertices), dtype=int)
        for e in self.edges:
            deg[e.vertices[0]] += 1
            deg[e.vertices[-1]] += 1
        return deg

    def spec(self):
        out = []
        for e in self.edges:
            d = {"vertices": [int(i) for i in e.vertices], "left": e.left, "right": e.right}
            if e.tags:
                d["tags"] = dict(e.tags)
            out.append(d)
        return {
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "edges": out,
            "chambers": self.m,
        }

    @classmethod
    def from_spec(cls, spec):
        edges = [
            Edge(list(e["vertices"]), int(e["left"]), int(e["right"]), dict(e.get("tags", {})))
            for e in spec["edges"]
        ]
        return cls(np.asarray(spec["vertices"], dtype=float), edges, int(spec["chambers"]))


def segment_weights(density, mid, vec, left, right):
    """Perimeter weight of each segment under the orientation convention."""
    mid = np.asarray(mid, dtype=float)
    vec = np.asarray(vec, dtype=float)
    left = np.asarray(left)
    right = np.asarray(right)
    normal = rotate_cw(vec)
    h_fwd = density.h_at(mid, normal)
    h_rev = density.h_at(mid, -normal)
    w = np.where(
        left == right,
        0.0,
        np.where(right == 0, h_fwd, np.where(left == 0, h_rev, 0.5 * (h_fwd + h_rev))),
    )
    return w


def _subdivide(p, q, left, right, eid, subdiv):
    if subdiv <= 1:
        return p, q, left, right, eid
    t = np.linspace(0.0, 1.0, subdiv + 1)
    pp = p[:, None, :] + t[None, :-1, None] * (q - p)[:, None, :]
    qq = p[:, None, :] + t[None, 1:, None] * (q - p)[:, None, :]
    rep = lambda a: np.repeat(a, subdiv, axis=0)
    return pp.reshape(-1, 2), qq.reshape(-1, 2), rep(left), rep(right), rep(eid)


def weighted_perimeter(cluster, density, subdiv=1):
    """Cluster perimeter; each interface counted once from each side."""
    return float(perimeter_breakdown(cluster, density, subdiv=subdiv).sum())


def perimeter_breakdown(cluster, density, subdiv=1):
    """Per-edge perimeter contributions, aligned with cluster.edges."""
    p, q, left, right, eid = cluster.segment_arrays()
    p, q, left, right, eid = _subdivide(p, q, left, right, eid, subdiv)
    if len(p) == 0:
        return np.zeros(len(cluster.edges))
    w = segment_weights(density, 0.5 * (p + q), q - p, left, right)
    out = np.zeros(len(cluster.edges))
    np.add.at(out, eid, w)
    return out


def relative_perimeter(cluster, density, center, radius, eps=1e-12):
    """Perimeter contribution inside a closed disk; exact segment clipping."""
    p, q, left, right, _ = cluster.segment_arrays()
    total = 0.0
    for k in range(len(p)):
        if left[k] == right[k]:
            continue
        span = clip_segment_to_disk(p[k], q[k], center, radius, eps=eps)
        if span is None:
            continue
        t0, t1 = span
        a = p[k] + t0 * (q[k] - p[k])
        b = p[k] + t1 * (q[k] - p[k])
        w = segment_weights(density, 0.5 * (a + b), b - a, left[k : k + 1], right[k : k + 1])
        total += float(w[0])
    return total


def weighted_volume(cluster, density, order=5):
    """Weighted chamber volumes as a vector indexed by chamber label - 1.

    Signed fan triangles from the origin with a fixed-order symmetric rule;
    exact for polynomial g up to the rule degree, in particular constant g.
    """
    p, q, left, right, _ = cluster.segment_arrays()
    vols = np.zeros(cluster.m)
    if len(p) == 0:
        return vols
    bary, wts = triangle_rule(order)
    areas = 0.5 * cross2(p, q)
    pts = bary[None, :, 1, None] * p[:, None, :] + bary[None, :, 2, None] * q[:, None, :]
    gv = density.g_at(pts.reshape(-1, 2)).reshape(len(p), -1)
    seg_int = areas * (gv * wts[None, :]).sum(axis=1)
    sel_l = left > 0
    np.add.at(vols, left[sel_l] - 1, seg_int[sel_l])
    sel_r = right > 0
    np.add.at(vols, right[sel_r] - 1, -seg_int[sel_r])
    return vols


def chamber_perimeter(cluster, density, label):
    """Perimeter of a single chamber as a standalone set."""
    p, q, left, right, _ = cluster.segment_arrays()
    total = 0.0
    sel = left == label
    if sel.any():
        v = q[sel] - p[sel]
        total += float(density.h_at(0.5 * (p[sel] + q[sel]), rotate_cw(v)).sum())
    sel = right == label
    if sel.any():
        v = p[sel] - q[sel]
        total += float(density.h_at(0.5 * (p[sel] + q[sel]), rotate_cw(v)).sum())
    return total


def union_perimeter(cluster, density):
    """Perimeter of the union of all colored chambers."""
    p, q, left, right, _ = cluster.segment_arrays()
    total = 0.0
    sel = right == 0
    if sel.any():
        v = q[sel] - p[sel]
        total += float(density.h_at(0.5 * (p[sel] + q[sel]), rotate_cw(v)).sum())
    sel = left == 0
    if sel.any():
        v = p[sel] - q[sel]
        total += float(density.h_at(0.5 * (p[sel] + q[sel]), rotate_cw(v)).sum())
    return total


def validate(cluster, check_crossings=True):
    """Structural checks; returns a list of human-readable violations."""
    problems = []
    nv = len(cluster.vertices)
    for k, e in enumerate(cluster.edges):
        if len(e.vertices) < 2:
            problems.append(f"edge {k}: needs at least two vertices")
            continue
        idx = np.asarray(e.vertices, dtype=int)
        if idx.min() < 0 or idx.max() >= nv:
            problems.append(f"edge {k}: vertex index out of range")
            continue
        if np.any(idx[1:] == idx[:-1]):
            problems.append(f"edge {k}: repeated consecutive vertex")
        if not (0 <= e.left <= cluster.m and 0 <= e.right <= cluster.m):
            problems.append(f"edge {k}: label out of range 0..{cluster.m}")
        if e.left == e.right:
            problems.append(f"edge {k}: equal labels on both sides")
    if problems:
        return problems

    problems.extend(_wedge_violations(cluster))

    vols = weighted_volume_plain(cluster)
    for i, a in enumerate(vols, start=1):
        if not a > 0:
            problems.append(f"chamber {i}: nonpositive area {a:.6g}")

    if check_crossings:
        problems.extend(_crossing_violations(cluster))
    return problems


def weighted_volume_plain(cluster):
    """Unweighted chamber areas (g = 1)."""
    p, q, left, right, _ = cluster.segment_arrays()
    vols = np.zeros(cluster.m)
    seg = 0.5 * cross2(p, q)
    sel = left > 0
    np.add.at(vols, left[sel] - 1, seg[sel])
    sel = right > 0
    np.add.at(vols, right[sel] - 1, -seg[sel])
    return vols


def _wedge_violations(cluster):
    """Angular label consistency around every vertex.

    For each vertex, incident edge ends are sorted by direction; the label
    counterclockwise of one direction must match the label clockwise of the
    next. Mismatches mean the edges do not tile a neighborhood consistently.
    """
    problems = []
    incident = {}
    for k, e in enumerate(cluster.edges):
        idx = e.vertices
        pts = cluster.vertices[np.asarray(idx, dtype=int)]
        d0 = pts[1] - pts[0]
        dn = pts[-2] - pts[-1]
        # at the start vertex the wedge CCW of the outgoing direction is e.left
        incident.setdefault(idx[0], []).append((np.arctan2(d0[1], d0[0]), e.left, e.right, k))
        # at the end vertex the roles swap
        incident.setdefault(idx[-1], []).append((np.arctan2(dn[1], dn[0]), e.right, e.left, k))
    for v, ends in incident.items():
        if len(ends) < 2:
            continue
        ends = sorted(ends)
        for a, b in zip(ends, ends[1:] + ends[:1]):
            # wedge between direction a and the next direction b (ccw):
            # label ccw of a must equal label cw of b
            if a[1] != b[2]:
                problems.append(
                    f"vertex {v}: wedge between edges {a[3]} and {b[3]} sees labels {a[1]} vs {b[2]}"
                )
    return problems


def _crossing_violations(cluster, cap=20):
    problems = []
    i0, i1, _, _, eid = cluster.segment_index_arrays()
    p = cluster.vertices[i0]
    q = cluster.vertices[i1]
    n = len(p)
    if n < 2:
        return problems
    a, b = np.triu_indices(n, k=1)
    share = (i0[a] == i0[b]) | (i0[a] == i1[b]) | (i1[a] == i0[b]) | (i1[a] == i1[b])
    hit = segments_properly_cross(p[a], q[a], p[b], q[b]) & ~share
    for ia, ib in zip(a[hit][:cap], b[hit][:cap]):
        problems.append(f"segments of edges {eid[ia]} and {eid[ib]} cross")
    return problems


def growth_estimate(density, radii, centers_per_radius=8, rng=None):
    """Fit |B(x, r)| <= C_vol * r^eta from sampled ball volumes.

    Least squares of log(max volume) against log(r) gives the exponent; the
    constant is then raised until it covers every sampled ball.
    """
    radii = np.asarray(radii, dtype=float)
    if len(radii) < 3:
        raise ValueError("need at least three radii for a growth fit")
    rng = np.random.default_rng(0) if rng is None else rng
    from .density import ball_volume

    worst = np.zeros(len(radii))
    all_vols = []
    for k, r in enumerate(radii):
        centers = _ball_centers(density.domain, r, centers_per_radius, rng)
        vols = np.array([ball_volume(density, c, r) for c in centers])
        worst[k] = vols.max()
        all_vols.append(vols)
    A = np.column_stack([np.ones(len(radii)), np.log(radii)])
    coef, *_ = np.linalg.lstsq(A, np.log(worst), rcond=None)
    eta = float(coef[1])
    c_vol = max(
        float((vols / r**eta).max()) for r, vols in zip(radii, all_vols)
    )
    return c_vol, eta


def _ball_centers(domain, r, n, rng, max_tries=200):
    out = []
    for _ in range(max_tries):
        if len(out) >= n:
            break
        pts = domain.sample(rng, n)
        probes = pts[:, None, :] + r * np.array(
            [[1, 0], [-1, 0], [0, 1], [0, -1], [0.7071, 0.7071], [-0.7071, 0.7071], [0.7071, -0.7071], [-0.7071, -0.7071]]
        )[None, :, :]
        ok = domain.contains(probes.reshape(-1, 2)).reshape(len(pts), -1).all(axis=1)
        out.extend(pts[ok])
    if not out:
        raise ValueError(f"domain admits no ball of radius {r}")
    return np.asarray(out[:n])


def isoperimetric_check(polygon, density, c_vol, eta):
    """Perimeter >= (h_min / C_vol^(1/eta)) * volume^(1/eta) for one chamber.

    polygon: (n, 2) counterclockwise vertices of a single colored chamber.
    Returns (ok, slack) with slack = lhs - rhs.
    """
    polygon = np.asarray(polygon, dtype=float)
    p = polygon
    q = np.roll(polygon, -1, axis=0)
    v = q - p
    lhs = float(density.h_at(0.5 * (p + q), rotate_cw(v)).sum())
    vol = fan_triangle_quadrature(p, q, density.g_at, order=5)
    rhs = density.h_min / c_vol ** (1.0 / eta) * vol ** (1.0 / eta)
    slack = lhs - rhs
    return slack >= 0, slack
