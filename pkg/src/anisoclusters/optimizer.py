"""Constrained perimeter minimization over polygonal clusters, plus the
junction and regularity diagnostics applied to the results.

The solver keeps the cluster topology fixed and moves vertices. Chamber
volumes are enforced with an augmented Lagrangian (penalty doubling,
multiplier update per outer iteration); the inner loop is descent on
finite-difference shape gradients with a Barzilai-Borwein trial step and
Armijo backtracking. A step that makes two boundary segments cross is
rejected and retried at half length. Vertices interior to a straight run of
wall edges slide along the wall line, wall corners stay put, everything else
moves freely with two degrees of freedom. Between outer iterations each
non-wall edge is resampled to a uniform target segment length; edge
endpoints, and with them every junction, survive resampling.

Wall edges carry constant perimeter (their geometry never changes as a set),
so the optimization objective counts non-wall interfaces only, normalized by
the initial interface perimeter. Volume errors are relative to the targets.
Both normalizations make the iterates exactly invariant under a common
scaling of g, h and the targets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cluster import (
    perimeter_breakdown,
    segment_weights,
    validate,
    weighted_perimeter,
    weighted_volume,
)
from .geometry import (
    angle_between,
    angle_of,
    clip_segment_to_disk,
    cross2,
    fit_endpoint_tangent,
    segments_properly_cross,
    triangle_rule,
    wrap_angle,
)
from .steiner import junction_residual


@dataclass
class SolveOptions:
    max_outer: int = 30
    max_inner: int = 200
    vol_tol: float = 1e-6
    grad_tol: float = 1e-5
    resample_len: float | None = None
    multi_start: int = 1
    seed: int = 0
    fd_scale: float = 1e-6
    penalty0: float = 10.0
    jitter: float = 0.05


@dataclass
class OptimizationProblem:
    cluster: object
    density: object
    targets: object
    options: SolveOptions = field(default_factory=SolveOptions)

    def __post_init__(self):
        self.targets = np.asarray(self.targets, dtype=float).ravel()
        if len(self.targets) != self.cluster.m:
            raise ValueError(
                f"need {self.cluster.m} target volumes, got {len(self.targets)}"
            )
        if np.any(self.targets <= 0):
            raise ValueError("target volumes must be strictly positive")
        problems = validate(self.cluster)
        if problems:
            raise ValueError("invalid initial cluster:\n" + "\n".join(problems))
        vols = weighted_volume(self.cluster, self.density)
        ratio = np.maximum(vols / self.targets, self.targets / np.maximum(vols, 1e-300))
        if np.any(ratio > 10.0 * (1 + 1e-12)):
            raise ValueError(
                f"initial volumes {vols} not within a factor 10 of targets {self.targets}"
            )


@dataclass
class SolveReport:
    cluster: object
    success: bool
    perimeter: float
    interface_perimeter: float
    volumes: np.ndarray
    volume_errors: np.ndarray
    perimeter_trace: list
    volume_error_trace: list
    outer_iterations: int
    inner_iterations: int
    crossing_rejections: int
    start_index: int
    flags: list
    junctions: list = field(default_factory=list)
    starts: list = field(default_factory=list)

    def spec(self):
        return {
            "success": bool(self.success),
            "perimeter": float(self.perimeter),
            "interface_perimeter": float(self.interface_perimeter),
            "volumes": [float(v) for v in self.volumes],
            "volume_errors": [float(v) for v in self.volume_errors],
            "perimeter_trace": [float(v) for v in self.perimeter_trace],
            "volume_error_trace": [float(v) for v in self.volume_error_trace],
            "outer_iterations": int(self.outer_iterations),
            "inner_iterations": int(self.inner_iterations),
            "crossing_rejections": int(self.crossing_rejections),
            "start_index": int(self.start_index),
            "flags": list(self.flags),
            "junctions": list(self.junctions),
            "starts": list(self.starts),
            "cluster": self.cluster.spec(),
        }


def interface_perimeter(cluster, density):
    """Weighted perimeter of the non-wall edges only."""
    br = perimeter_breakdown(cluster, density)
    keep = [k for k, e in enumerate(cluster.edges) if not e.tags.get("wall")]
    return float(br[keep].sum()) if keep else 0.0


def _wall_edge_mask(cluster):
    if not cluster.edges:
        return np.zeros(0, dtype=bool)
    return np.array([bool(e.tags.get("wall")) for e in cluster.edges])


def _default_resample_len(cluster):
    p, q, _, _, eid = cluster.segment_arrays()
    if len(p) == 0:
        raise ValueError("cluster has no segments")
    lens = np.linalg.norm(q - p, axis=1)
    sel = ~_wall_edge_mask(cluster)[eid]
    use = lens[sel] if sel.any() else lens
    return float(use.mean())


class _Dofs:
    """Map between movable vertex coordinates and a flat parameter vector.

    Free vertices carry two axis-aligned degrees of freedom. A vertex whose
    incident wall segments are all parallel slides along that line with one
    degree of freedom; wall corners and vertices of edges tagged "fixed"
    carry none.
    """

    def __init__(self, cluster, fd_scale, char_len):
        V = cluster.vertices
        nv = len(V)
        i0, i1, _, _, eid = cluster.segment_index_arrays()
        wall_seg = _wall_edge_mask(cluster)[eid] if len(eid) else np.zeros(0, bool)
        incident = [[] for _ in range(nv)]
        for s in range(len(i0)):
            incident[i0[s]].append(s)
            incident[i1[s]].append(s)
        seglen = (
            np.linalg.norm(V[i1] - V[i0], axis=1) if len(i0) else np.zeros(0)
        )
        fixed = np.zeros(nv, dtype=bool)
        for e in cluster.edges:
            if e.tags.get("fixed"):
                fixed[np.asarray(e.vertices, dtype=int)] = True

        vert, uvec, local, wall_nbs = [], [], [], []
        for v in range(nv):
            if not incident[v] or fixed[v]:
                continue
            loc = max(float(np.mean(seglen[incident[v]])), 1e-9 * char_len)
            wsegs = [s for s in incident[v] if wall_seg[s]]
            if wsegs:
                nbs, dirs = [], []
                for s in wsegs:
                    o = i1[s] if i0[s] == v else i0[s]
                    d = V[o] - V[v]
                    nd = np.linalg.norm(d)
                    if nd < 1e-300:
                        continue
                    nbs.append(int(o))
                    dirs.append(d / nd)
                if not dirs:
                    continue
                u = dirs[0]
                if any(abs(cross2(u, d)) > 1e-9 for d in dirs[1:]):
                    continue  # wall corner: pinned
                vert.append(v)
                uvec.append(u)
                local.append(loc)
                wall_nbs.append((len(vert) - 1, nbs))
            else:
                vert.append(v)
                uvec.append(np.array([1.0, 0.0]))
                local.append(loc)
                vert.append(v)
                uvec.append(np.array([0.0, 1.0]))
                local.append(loc)

        self.n = len(vert)
        self.vert = np.asarray(vert, dtype=int)
        self.uvec = np.asarray(uvec, dtype=float).reshape(self.n, 2)
        self.local_len = np.asarray(local, dtype=float)
        self.h_fd = fd_scale * self.local_len
        self.wall_nbs = wall_nbs

        # finite-difference stencil: one entry per (segment, endpoint, dof)
        dofs_of = [[] for _ in range(nv)]
        for j, v in enumerate(self.vert):
            dofs_of[v].append(j)
        es, eslot, edof = [], [], []
        for s in range(len(i0)):
            for slot, v in ((0, i0[s]), (1, i1[s])):
                for j in dofs_of[v]:
                    es.append(s)
                    eslot.append(slot)
                    edof.append(j)
        self.ent_seg = np.asarray(es, dtype=int)
        self.ent_slot = np.asarray(eslot, dtype=int)
        self.ent_dof = np.asarray(edof, dtype=int)

    def step_caps(self, V):
        """Per-dof displacement bound: a fraction of the local edge length,
        and for sliding vertices also of the distance to wall neighbors."""
        caps = 0.45 * self.local_len.copy()
        for j, nbs in self.wall_nbs:
            if nbs:
                d = min(float(np.linalg.norm(V[n] - V[self.vert[j]])) for n in nbs)
                caps[j] = min(caps[j], 0.4 * d)
        return caps


def _apply_step(V, dofs, d):
    out = V.copy()
    np.add.at(out, dofs.vert, dofs.uvec * d[:, None])
    return out


def _crossing_pairs(i0, i1):
    n = len(i0)
    if n < 2:
        return np.empty(0, dtype=int), np.empty(0, dtype=int)
    a, b = np.triu_indices(n, k=1)
    share = (i0[a] == i0[b]) | (i0[a] == i1[b]) | (i1[a] == i0[b]) | (i1[a] == i1[b])
    return a[~share], b[~share]


class _Evaluator:
    """Objective, volumes and finite-difference gradient on flat segment
    arrays; quadrature matches weighted_volume so the reported constraint
    errors are exactly the ones being minimized."""

    def __init__(self, cluster, density, targets, order=5):
        self.density = density
        self.targets = np.asarray(targets, dtype=float)
        i0, i1, left, right, eid = cluster.segment_index_arrays()
        self.i0, self.i1 = i0, i1
        self.left, self.right = left, right
        wall = _wall_edge_mask(cluster)
        self.seg_wall = wall[eid] if len(eid) else np.zeros(0, bool)
        self.active = (~self.seg_wall) & (left != right)
        self.bary, self.wts = triangle_rule(order)
        self.pair_a, self.pair_b = _crossing_pairs(i0, i1)

    def perimeter(self, V):
        sel = self.active
        if not sel.any():
            return 0.0
        P, Q = V[self.i0[sel]], V[self.i1[sel]]
        w = segment_weights(
            self.density, 0.5 * (P + Q), Q - P, self.left[sel], self.right[sel]
        )
        return float(w.sum())

    def _vol_terms(self, P, Q):
        areas = 0.5 * cross2(P, Q)
        pts = (
            self.bary[None, :, 1, None] * P[:, None, :]
            + self.bary[None, :, 2, None] * Q[:, None, :]
        )
        gv = self.density.g_at(pts.reshape(-1, 2)).reshape(len(P), -1)
        return areas * (gv * self.wts[None, :]).sum(axis=1)

    def volumes(self, V):
        vols = np.zeros(len(self.targets))
        if len(self.i0) == 0:
            return vols
        t = self._vol_terms(V[self.i0], V[self.i1])
        sel = self.left > 0
        np.add.at(vols, self.left[sel] - 1, t[sel])
        sel = self.right > 0
        np.add.at(vols, self.right[sel] - 1, -t[sel])
        return vols

    def objective(self, V, lam, mu, P0):
        P = self.perimeter(V)
        e = (self.volumes(V) - self.targets) / self.targets
        f = P / P0 + float((lam * e).sum()) + 0.5 * mu * float((e * e).sum())
        return f, P, e

    def gradient(self, V, lam, mu, e, P0, dofs):
        g = np.zeros(dofs.n)
        if dofs.n == 0 or len(self.i0) == 0 or len(dofs.ent_seg) == 0:
            return g
        seg, slot, dof = dofs.ent_seg, dofs.ent_slot, dofs.ent_dof
        P, Q = V[self.i0[seg]], V[self.i1[seg]]
        h = dofs.h_fd[dof]
        disp = dofs.uvec[dof] * h[:, None]
        on0 = (slot == 0)[:, None]
        Pp = np.where(on0, P + disp, P)
        Qp = np.where(on0, Q, Q + disp)
        Pm = np.where(on0, P - disp, P)
        Qm = np.where(on0, Q, Q - disp)

        dval = np.zeros(len(seg))
        act = self.active[seg]
        if act.any():
            sl, sr = self.left[seg], self.right[seg]
            wp = segment_weights(self.density, 0.5 * (Pp + Qp), Qp - Pp, sl, sr)
            wm = segment_weights(self.density, 0.5 * (Pm + Qm), Qm - Pm, sl, sr)
            dval = np.where(act, (wp - wm) / P0, 0.0)

        c = (lam + mu * e) / self.targets
        a = np.where(self.left > 0, c[self.left - 1], 0.0) - np.where(
            self.right > 0, c[self.right - 1], 0.0
        )
        dval = dval + a[seg] * (self._vol_terms(Pp, Qp) - self._vol_terms(Pm, Qm))
        np.add.at(g, dof, dval / (2.0 * h))
        return g

    def has_crossing(self, V):
        if len(self.pair_a) == 0:
            return False
        pa, pb = self.pair_a, self.pair_b
        hit = segments_properly_cross(
            V[self.i0[pa]], V[self.i1[pa]], V[self.i0[pb]], V[self.i1[pb]]
        )
        return bool(hit.any())


@dataclass
class _InnerStats:
    iterations: int
    converged: bool
    stalled: bool
    trace: list
    rejections: int


def _descend(V, dofs, ev, lam, mu, P0, opts, char_len):
    f, Pint, e = ev.objective(V, lam, mu, P0)
    trace = [Pint]
    if dofs.n == 0:
        return V, _InnerStats(0, True, False, trace, 0)
    g = ev.gradient(V, lam, mu, e, P0, dofs)
    g_prev = None
    d_prev = None
    t = None
    rejections = 0
    converged = False
    stalled = False
    it = 0
    # non-monotone acceptance window: Barzilai-Borwein steps on this badly
    # conditioned problem must be allowed transient objective increases
    recent = [f]
    for it in range(1, opts.max_inner + 1):
        gn = float(np.max(np.abs(g)))
        if gn * char_len <= opts.grad_tol:
            converged = True
            break
        if g_prev is not None and d_prev is not None:
            y = g - g_prev
            sy = float(d_prev @ y)
            t = float(d_prev @ d_prev) / sy if sy > 1e-300 else 2.0 * t
        if t is None or not np.isfinite(t) or t <= 0:
            t = 0.05 * char_len / gn
        caps = dofs.step_caps(V)
        accepted = False
        tt = t
        f_ref = max(recent)
        for _ in range(60):
            d = np.clip(-tt * g, -caps, caps)
            gd = float(g @ d)
            if gd >= 0.0:
                break
            Vt = _apply_step(V, dofs, d)
            ft, Pt, et = ev.objective(Vt, lam, mu, P0)
            if ft <= f_ref + 1e-4 * gd:
                if ev.has_crossing(Vt):
                    rejections += 1
                    tt *= 0.5
                    continue
                V, f, Pint, e = Vt, ft, Pt, et
                d_prev = d
                accepted = True
                break
            tt *= 0.5
        if not accepted:
            stalled = True
            break
        recent.append(f)
        if len(recent) > 8:
            recent.pop(0)
        trace.append(Pint)
        g_prev = g
        g = ev.gradient(V, lam, mu, e, P0, dofs)
        t = tt
    return V, _InnerStats(it, converged, stalled, trace, rejections)


def resample_cluster(cluster, target_len):
    """Re-interpolate non-wall edges to segments of roughly target_len.

    Edge endpoints keep their identity, so junction combinatorics are
    untouched; wall edges are copied verbatim. Interior vertices are placed
    at even arclength along the old polyline, which can only shorten it.
    """
    keep = []
    seen = set()
    for e in cluster.edges:
        ids = [e.vertices[0], e.vertices[-1]] if not e.tags.get("wall") else list(e.vertices)
        for v in ids:
            if v not in seen:
                seen.add(v)
                keep.append(v)
    old2new = {old: k for k, old in enumerate(keep)}
    verts = [cluster.vertices[v] for v in keep]
    edges = []
    for e in cluster.edges:
        if e.tags.get("wall"):
            edges.append(
                type(e)([old2new[v] for v in e.vertices], e.left, e.right, dict(e.tags))
            )
            continue
        pts = cluster.edge_points(e)
        seg = np.linalg.norm(pts[1:] - pts[:-1], axis=1)
        L = float(seg.sum())
        closed = e.vertices[0] == e.vertices[-1]
        n_new = max(3 if closed else 1, int(round(L / target_len))) if L > 0 else 1
        ids = [old2new[e.vertices[0]]]
        if n_new > 1 and L > 0:
            s = np.concatenate([[0.0], np.cumsum(seg)])
            s_new = np.linspace(0.0, L, n_new + 1)[1:-1]
            xs = np.interp(s_new, s, pts[:, 0])
            ys = np.interp(s_new, s, pts[:, 1])
            start = len(verts)
            verts.extend(np.column_stack([xs, ys]))
            ids.extend(range(start, start + n_new - 1))
        ids.append(old2new[e.vertices[-1]])
        edges.append(type(e)(ids, e.left, e.right, dict(e.tags)))
    return type(cluster)(np.asarray(verts), edges, cluster.m)


def _solve_single(cluster, density, targets, opts, start_index):
    rs_len = opts.resample_len if opts.resample_len else _default_resample_len(cluster)
    lam = np.zeros(len(targets))
    mu = float(opts.penalty0)
    flags = []
    trace = []
    verr_trace = []
    inner_total = 0
    rejections = 0
    prev_emax = np.inf
    prev_stall_P = None
    converged = False
    cl = cluster
    ev = None
    outer = 0
    for outer in range(1, opts.max_outer + 1):
        if outer > 1:
            cl = resample_cluster(cl, rs_len)
        dofs = _Dofs(cl, opts.fd_scale, rs_len)
        ev = _Evaluator(cl, density, targets)
        P0 = ev.perimeter(cl.vertices)
        if P0 <= 0:
            raise ValueError("cluster has no interface perimeter to minimize")
        V, st = _descend(cl.vertices.copy(), dofs, ev, lam, mu, P0, opts, rs_len)
        cl.vertices = V
        vols = ev.volumes(V)
        e = (vols - targets) / targets
        emax = float(np.max(np.abs(e)))
        Pint = ev.perimeter(V)
        trace.extend(st.trace)
        verr_trace.append(emax)
        inner_total += st.iterations
        rejections += st.rejections
        if emax <= opts.vol_tol and st.converged:
            converged = True
            break
        if emax <= opts.vol_tol:
            # kinked gauges leave no usable gradient at the optimum (descent
            # creeps along flat directions forever), and fine meshes hit the
            # finite-difference noise floor before grad_tol; accept once a
            # second full pass confirms the perimeter is frozen to 1e-6
            if prev_stall_P is not None and abs(Pint - prev_stall_P) <= 1e-6 * (1 + Pint):
                converged = True
                flags.append("inner_stall_at_tolerance")
                break
            prev_stall_P = Pint
        else:
            prev_stall_P = None
        lam = lam + mu * e
        if emax > 0.25 * prev_emax:
            mu = min(2.0 * mu, 1e8)
        prev_emax = max(emax, 1e-300)
    if not converged:
        flags.append("max_outer_reached")
    vols = ev.volumes(cl.vertices)
    errors = (vols - targets) / targets
    emax = float(np.max(np.abs(errors)))
    success = converged and emax <= opts.vol_tol
    if not success and "non_convergence" not in flags:
        flags.append("non_convergence")
    return SolveReport(
        cluster=cl,
        success=success,
        perimeter=weighted_perimeter(cl, density),
        interface_perimeter=interface_perimeter(cl, density),
        volumes=vols,
        volume_errors=errors,
        perimeter_trace=trace,
        volume_error_trace=verr_trace,
        outer_iterations=outer,
        inner_iterations=inner_total,
        crossing_rejections=rejections,
        start_index=start_index,
        flags=flags,
    )


def _perturb_start(cluster, opts, k, rs_len):
    rng = np.random.default_rng([int(opts.seed), int(k)])
    cl = cluster.copy()
    dofs = _Dofs(cl, opts.fd_scale, rs_len)
    if dofs.n == 0:
        return cl
    i0, i1, _, _, _ = cl.segment_index_arrays()
    pa, pb = _crossing_pairs(i0, i1)
    caps = dofs.step_caps(cl.vertices)
    for trial in range(20):
        amp = opts.jitter * (0.5**trial)
        d = rng.normal(0.0, amp, dofs.n) * dofs.local_len
        d = np.clip(d, -caps, caps)
        Vt = _apply_step(cl.vertices, dofs, d)
        crossed = len(pa) > 0 and bool(
            segments_properly_cross(Vt[i0[pa]], Vt[i1[pa]], Vt[i0[pb]], Vt[i1[pb]]).any()
        )
        if not crossed:
            cl.vertices = Vt
            return cl
    return cluster.copy()


def minimize(problem):
    """Minimize weighted perimeter at fixed chamber volumes.

    Runs multi_start independent solves (start 0 unperturbed, the rest with
    jittered movable vertices), each fully deterministic given the seed, and
    returns the report of the best start: successful runs first, then lowest
    weighted perimeter, ties broken by start index. The chosen report also
    carries the junction diagnostics of its final cluster.
    """
    opts = problem.options
    targets = np.asarray(problem.targets, dtype=float)
    rs_len = opts.resample_len if opts.resample_len else _default_resample_len(problem.cluster)
    runs = []
    for k in range(max(1, int(opts.multi_start))):
        cl = problem.cluster.copy()
        if k > 0:
            cl = _perturb_start(cl, opts, k, rs_len)
        runs.append(_solve_single(cl, problem.density, targets, opts, k))
    champ = runs[0]
    for r in runs[1:]:
        if r.success != champ.success:
            if r.success:
                champ = r
        elif r.perimeter < champ.perimeter:
            champ = r
    champ.starts = [
        {
            "start": r.start_index,
            "perimeter": float(r.perimeter),
            "success": bool(r.success),
            "max_volume_error": float(np.max(np.abs(r.volume_errors))),
        }
        for r in runs
    ]
    diag = steiner_diagnose(champ.cluster, problem.density)
    champ.junctions = [j.spec() for j in diag.junctions]
    return champ


def _arm_table(cluster):
    """Incident edge ends per vertex with outgoing-oriented labels."""
    arms = {}
    for k, e in enumerate(cluster.edges):
        idx = e.vertices
        pts = cluster.vertices[np.asarray(idx, dtype=int)]
        arms.setdefault(idx[0], []).append(
            {"edge": k, "forward": True, "chord": pts[1] - pts[0], "left": e.left, "right": e.right}
        )
        arms.setdefault(idx[-1], []).append(
            {"edge": k, "forward": False, "chord": pts[-2] - pts[-1], "left": e.right, "right": e.left}
        )
    return arms


@dataclass
class JunctionInfo:
    vertex: int
    point: np.ndarray
    n_arms: int
    arms: list
    sector_colors: list
    non_triple: bool

    def spec(self):
        return {
            "vertex": int(self.vertex),
            "point": [float(self.point[0]), float(self.point[1])],
            "n_arms": int(self.n_arms),
            "sector_colors": [int(c) for c in self.sector_colors],
            "non_triple": bool(self.non_triple),
        }


def detect_junctions(cluster, radius=0.0):
    """Vertices where three or more distinct chamber labels meet.

    Arms are reported in clockwise order with unit chord directions;
    sector_colors[i] is the label swept clockwise from arm i to arm i+1.
    Junctions with other than three arms are flagged non_triple. A positive
    radius merges nearby candidates, keeping the one with the most arms.
    """
    out = []
    for v, lst in sorted(_arm_table(cluster).items()):
        if len(lst) < 3:
            continue
        labels = {a["left"] for a in lst} | {a["right"] for a in lst}
        if len(labels) < 3:
            continue
        ang = [float(angle_of(a["chord"])) for a in lst]
        order = sorted(range(len(lst)), key=lambda i: (-ang[i], i))
        arms = []
        for i in order:
            a = dict(lst[i])
            nc = float(np.linalg.norm(a["chord"]))
            a["dir"] = a["chord"] / nc if nc > 0 else np.asarray(a["chord"], float)
            a["angle"] = ang[i]
            arms.append(a)
        colors = [a["right"] for a in arms]
        out.append(
            JunctionInfo(
                vertex=int(v),
                point=cluster.vertices[v].copy(),
                n_arms=len(arms),
                arms=arms,
                sector_colors=colors,
                non_triple=len(arms) != 3,
            )
        )
    if radius and radius > 0 and len(out) > 1:
        merged, used = [], [False] * len(out)
        for i in range(len(out)):
            if used[i]:
                continue
            grp = [i]
            for j in range(i + 1, len(out)):
                if not used[j] and np.linalg.norm(out[i].point - out[j].point) <= radius:
                    used[j] = True
                    grp.append(j)
            rep = max(grp, key=lambda g: (out[g].n_arms, -out[g].vertex))
            merged.append(out[rep])
        out = merged
    return out


@dataclass
class JunctionDiagnostic:
    vertex: int
    point: np.ndarray
    n_arms: int
    non_triple: bool
    sector_colors: list
    angles_deg: list
    tangents: np.ndarray
    residual: np.ndarray | None
    residual_norm: float | None
    flags: list

    def spec(self):
        return {
            "vertex": int(self.vertex),
            "point": [float(self.point[0]), float(self.point[1])],
            "n_arms": int(self.n_arms),
            "non_triple": bool(self.non_triple),
            "sector_colors": [int(c) for c in self.sector_colors],
            "angles_deg": [float(a) for a in self.angles_deg],
            "tangents": [[float(x), float(y)] for x, y in self.tangents],
            "residual": None if self.residual is None else [float(v) for v in self.residual],
            "residual_norm": None if self.residual_norm is None else float(self.residual_norm),
            "flags": list(self.flags),
        }


@dataclass
class DiagnoseReport:
    junctions: list
    arc_turning: list
    max_turning: float
    flags: list

    def spec(self):
        return {
            "junctions": [j.spec() for j in self.junctions],
            "arc_turning": [float(a) for a in self.arc_turning],
            "max_turning": float(self.max_turning),
            "flags": list(self.flags),
        }


def steiner_diagnose(cluster, density, fit_points=5, merge_radius=0.0):
    """Junction stationarity residuals and arc smoothness statistics.

    Tangents at each junction come from a circle fit through the first
    fit_points polyline points of every arm, which is exact when converged
    interfaces are circular arcs or straight lines. Four-way junctions are
    reported but their residual is skipped. Arc smoothness is the largest
    turning angle between adjacent segments of each edge, in radians.
    """
    junctions = []
    flags = []
    for info in detect_junctions(cluster, radius=merge_radius):
        jflags = []
        tangents = []
        for a in info.arms:
            e = cluster.edges[a["edge"]]
            pts = cluster.edge_points(e)
            if not a["forward"]:
                pts = pts[::-1]
            tangents.append(fit_endpoint_tangent(pts, k=min(fit_points, len(pts))))
        tangents = np.asarray(tangents)
        ang = angle_of(tangents)
        order = np.argsort(-ang, kind="stable")
        tangents = tangents[order]
        arms = [info.arms[i] for i in order]
        colors = [a["right"] for a in arms]
        gaps = wrap_angle(ang[order] - np.roll(ang[order], -1))
        angles_deg = [float(np.degrees(x)) for x in gaps]
        residual = None
        rnorm = None
        if info.non_triple:
            jflags.append("non-triple junction: residual skipped")
        else:
            try:
                residual = junction_residual(density, info.point, tangents, colors)
                rnorm = float(np.linalg.norm(residual))
            except ValueError as err:
                jflags.append(f"residual unavailable: {err}")
        junctions.append(
            JunctionDiagnostic(
                vertex=info.vertex,
                point=info.point,
                n_arms=info.n_arms,
                non_triple=info.non_triple,
                sector_colors=colors,
                angles_deg=angles_deg,
                tangents=tangents,
                residual=residual,
                residual_norm=rnorm,
                flags=jflags,
            )
        )
        flags.extend(jflags)
    arc_turning = []
    for e in cluster.edges:
        pts = cluster.edge_points(e)
        vec = pts[1:] - pts[:-1]
        if len(vec) < 2:
            arc_turning.append(0.0)
        else:
            arc_turning.append(float(angle_between(vec[:-1], vec[1:]).max()))
    return DiagnoseReport(
        junctions=junctions,
        arc_turning=arc_turning,
        max_turning=max(arc_turning, default=0.0),
        flags=flags,
    )


@dataclass
class BallBoundReport:
    ratios: np.ndarray
    worst_ratio: float
    bound: float
    ok: bool

    def spec(self):
        return {
            "ratios": [float(r) for r in self.ratios],
            "worst_ratio": float(self.worst_ratio),
            "bound": float(self.bound),
            "ok": bool(self.ok),
        }


def ball_bound_check(cluster, density, centers, radii):
    """Euclidean boundary length inside sampled balls against 7 h_max/h_min.

    For each ball, sums the Euclidean length of boundary segments clipped to
    the ball and divides by the radius; the check passes when the worst
    ratio stays below the bound.
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    radii = np.asarray(radii, dtype=float).ravel()
    if len(radii) == 1:
        radii = np.full(len(centers), radii[0])
    if len(radii) != len(centers):
        raise ValueError("need one radius per center")
    p, q, left, right, _ = cluster.segment_arrays()
    sel = left != right
    p, q = p[sel], q[sel]
    lens = np.linalg.norm(q - p, axis=1)
    ratios = []
    for c, r in zip(centers, radii):
        if r <= 0:
            raise ValueError("ball radii must be positive")
        total = 0.0
        for k in range(len(p)):
            span = clip_segment_to_disk(p[k], q[k], c, r)
            if span is not None:
                total += (span[1] - span[0]) * lens[k]
        ratios.append(total / r)
    ratios = np.asarray(ratios)
    worst = float(ratios.max()) if len(ratios) else 0.0
    bound = 7.0 * density.h_max / density.h_min
    return BallBoundReport(ratios=ratios, worst_ratio=worst, bound=float(bound), ok=bool(worst < bound))
