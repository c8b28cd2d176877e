"""Convex gauges on the plane and the weight functions they induce.

A gauge is a convex, positively 1-homogeneous function that is positive away
from the origin. Its unit ball {v : value(v) <= 1} is a convex body containing
the origin in its interior; asymmetric balls give asymmetric gauges.

Two derived weights show up throughout:

* ``TangentGauge(h)`` evaluates h on the 90-degree clockwise rotation of its
  argument. If a curve is traversed with a chamber on its left, the rotated
  tangent is that chamber's outward normal, so this is the cost per unit of
  oriented tangent vector.
* ``SymmetrizedGauge(g)`` averages g(v) and g(-v); applied to a tangent gauge
  it is the weight of an interface counted once from each side.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from .geometry import (
    TWO_PI,
    angle_between,
    cross2,
    rotate_ccw,
    rotate_cw,
    rotation_matrix,
    unit_dir,
    wrap_angle,
)


class Gauge:
    """Base class: positively 1-homogeneous convex plane gauge."""

    kind = "abstract"
    #: True when the gauge is C^1 away from the origin.
    smooth = True
    #: True when value(v) == value(-v) holds exactly by construction.
    symmetric = False

    def value(self, v):
        raise NotImplementedError

    def grad(self, v):
        """A (sub)gradient at each v; 0-homogeneous away from the origin."""
        raise NotImplementedError

    def grad_is_smooth(self, v):
        """Boolean mask, False where grad returned a non-unique subgradient."""
        v = np.asarray(v, dtype=float)
        out = np.ones(v.shape[:-1], dtype=bool)
        return out & (np.linalg.norm(v, axis=-1) > 0)

    def boundary_point(self, theta):
        """Point of the unit ball boundary in direction theta."""
        u = unit_dir(theta)
        return u / self.value(u)[..., None]

    def params(self):
        return {}

    def spec(self):
        d = {"kind": self.kind}
        d.update(self.params())
        return d

    def __call__(self, v):
        return self.value(v)

    def __repr__(self):
        ps = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"{type(self).__name__}({ps})"


class EuclideanGauge(Gauge):
    kind = "euclidean"
    symmetric = True

    def value(self, v):
        v = np.asarray(v, dtype=float)
        return np.linalg.norm(v, axis=-1)

    def grad(self, v):
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = v / n[..., None]
        return np.where(n[..., None] > 0, g, 0.0)


class LpGauge(Gauge):
    """Gauge with unit ball {|x|^p + |y|^p <= 1}; p = inf gives max(|x|, |y|)."""

    symmetric = True

    def __init__(self, p):
        if p != np.inf and not p >= 1:
            raise ValueError("p must be >= 1 or inf")
        self.p = float(p)
        self.smooth = p not in (1.0, np.inf)

    @property
    def kind(self):
        return "lp"

    def params(self):
        return {"p": self.p if np.isfinite(self.p) else "inf"}

    def value(self, v):
        v = np.abs(np.asarray(v, dtype=float))
        if np.isinf(self.p):
            return v.max(axis=-1)
        m = v.max(axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = v / m[..., None]
        r = np.where(m[..., None] > 0, r, 0.0)
        return m * (r[..., 0] ** self.p + r[..., 1] ** self.p) ** (1.0 / self.p)

    def grad(self, v):
        v = np.asarray(v, dtype=float)
        a = np.abs(v)
        s = np.sign(v)
        if np.isinf(self.p):
            # subgradient: the max coordinate wins; split evenly on ties
            is_max = a >= a.max(axis=-1)[..., None] - 0.0
            tie = a[..., 0] == a[..., 1]
            g = np.where(is_max, s, 0.0)
            g = np.where(tie[..., None], 0.5 * g, g)
            return g
        if self.p == 1.0:
            return s
        val = self.value(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = a / val[..., None]
        r = np.where(val[..., None] > 0, r, 0.0)
        return r ** (self.p - 1.0) * s

    def grad_is_smooth(self, v):
        v = np.asarray(v, dtype=float)
        ok = np.linalg.norm(v, axis=-1) > 0
        if np.isinf(self.p):
            return ok & (np.abs(np.abs(v[..., 0]) - np.abs(v[..., 1])) > 0)
        if self.p == 1.0:
            return ok & (np.abs(v) > 0).all(axis=-1)
        return ok


class EllipseGauge(Gauge):
    """sqrt(v . Q v) for symmetric positive definite Q."""

    kind = "ellipse"
    symmetric = True

    def __init__(self, matrix):
        q = np.asarray(matrix, dtype=float)
        if q.shape != (2, 2) or abs(q[0, 1] - q[1, 0]) > 1e-14:
            raise ValueError("matrix must be symmetric 2x2")
        if np.linalg.eigvalsh(q).min() <= 0:
            raise ValueError("matrix must be positive definite")
        self.q = 0.5 * (q + q.T)

    def params(self):
        return {"matrix": self.q.tolist()}

    def value(self, v):
        v = np.asarray(v, dtype=float)
        qv = v @ self.q.T
        return np.sqrt(np.maximum((v * qv).sum(axis=-1), 0.0))

    def grad(self, v):
        v = np.asarray(v, dtype=float)
        s = self.value(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = (v @ self.q.T) / s[..., None]
        return np.where(s[..., None] > 0, g, 0.0)


def _circle_gauge_value(v, centers, radius):
    """Minkowski functional of a circle |x - c| = radius, vectorized.

    centers broadcasts against v; requires |c| < radius so the origin is
    interior. Solves lam^2 (R^2-|c|^2) + 2 lam (v.c) - |v|^2 = 0.
    """
    v = np.asarray(v, dtype=float)
    c = np.asarray(centers, dtype=float)
    a = radius * radius - (c * c).sum(axis=-1)
    vc = (v * c).sum(axis=-1)
    vv = (v * v).sum(axis=-1)
    return (-vc + np.sqrt(vc * vc + a * vv)) / a


def _circle_gauge_grad(v, centers, radius):
    v = np.asarray(v, dtype=float)
    c = np.asarray(centers, dtype=float)
    lam = _circle_gauge_value(v, centers, radius)
    w = v - lam[..., None] * c
    denom = (c * w).sum(axis=-1) + lam * radius * radius
    with np.errstate(divide="ignore", invalid="ignore"):
        g = w / denom[..., None]
    return np.where(lam[..., None] > 0, g, 0.0)


class ShiftedDiskGauge(Gauge):
    """Gauge whose unit ball is an off-center disk; asymmetric when shifted."""

    kind = "shifted-disk"

    def __init__(self, center, radius=1.0):
        center = np.asarray(center, dtype=float)
        if center.shape != (2,):
            raise ValueError("center must be a plane point")
        if not radius > np.linalg.norm(center):
            raise ValueError("origin must be interior: |center| < radius")
        self.center = center
        self.radius = float(radius)
        self.symmetric = bool(np.all(center == 0.0))

    def params(self):
        return {"center": self.center.tolist(), "radius": self.radius}

    def value(self, v):
        return _circle_gauge_value(v, self.center, self.radius)

    def grad(self, v):
        return _circle_gauge_grad(v, self.center, self.radius)


class SmoothedL1Gauge(Gauge):
    """Four-arc ball through the corners (+-1, +-1), arc curvature kappa.

    The straight sides of the square ball are replaced by outward-bulging
    circular arcs of radius 1/kappa, keeping the four corners. The result is
    strictly convex and uniformly round but still kinked at the corners.
    Requires 0 < kappa < 1/sqrt(2); beyond that the corner angles invert.
    """

    kind = "smoothed-l1"
    smooth = False
    symmetric = True

    def __init__(self, kappa):
        if not 0.0 < kappa < 1.0 / np.sqrt(2.0):
            raise ValueError("kappa must lie in (0, 1/sqrt(2))")
        self.kappa = float(kappa)
        r = 1.0 / kappa
        s = np.sqrt(r * r - 1.0)  # center offset so the arc passes through both corners
        # arc centers for directions around 0, 90, 180, 270 degrees
        self.centers = np.array([[1 - s, 0], [0, 1 - s], [s - 1, 0], [0, s - 1]])
        self.arc_radius = r

    def params(self):
        return {"kappa": self.kappa}

    def _sector(self, v):
        theta = np.arctan2(v[..., 1], v[..., 0])
        return np.mod(np.floor((theta + np.pi / 4) / (np.pi / 2)).astype(int), 4)

    def value(self, v):
        v = np.asarray(v, dtype=float)
        c = self.centers[self._sector(v)]
        return _circle_gauge_value(v, c, self.arc_radius)

    def grad(self, v):
        v = np.asarray(v, dtype=float)
        smoothmask = self.grad_is_smooth(v)
        c = self.centers[self._sector(v)]
        g = _circle_gauge_grad(v, c, self.arc_radius)
        if np.all(smoothmask):
            return g
        # corner directions: average the two one-sided gradients (a valid
        # subgradient of the max of the two supporting circle gauges)
        c2 = self.centers[np.mod(self._sector(v) + 1, 4)]
        g2 = _circle_gauge_grad(v, c2, self.arc_radius)
        mid = 0.5 * (g + g2)
        return np.where(smoothmask[..., None], g, mid)

    def grad_is_smooth(self, v):
        v = np.asarray(v, dtype=float)
        ok = np.linalg.norm(v, axis=-1) > 0
        return ok & (np.abs(np.abs(v[..., 0]) - np.abs(v[..., 1])) > 1e-12 * np.abs(v).max(axis=-1))


class TabulatedGauge(Gauge):
    """Gauge interpolated from samples on the unit circle.

    ``values[k]`` is the gauge at angle 2*pi*k/n; a periodic cubic spline
    interpolates the angular profile and supplies analytic derivatives.
    """

    kind = "tabulated"

    def __init__(self, values):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or len(values) < 8:
            raise ValueError("need a 1d profile with at least 8 samples")
        if not np.all(values > 0):
            raise ValueError("profile must be positive")
        self.values = values
        n = len(values)
        theta = np.linspace(0.0, TWO_PI, n + 1)
        self._spline = CubicSpline(theta, np.append(values, values[0]), bc_type="periodic")
        self._dspline = self._spline.derivative()
        self.symmetric = bool(n % 2 == 0 and np.allclose(values, np.roll(values, n // 2)))
        # convexity of the interpolated ball: its boundary, traversed
        # counterclockwise, must never turn clockwise
        tt = np.arange(1024) * (TWO_PI / 1024)
        pts = unit_dir(tt) / self._spline(tt)[:, None]
        e = np.roll(pts, -1, axis=0) - pts
        turn = cross2(e, np.roll(e, -1, axis=0))
        if turn.min() < -1e-12 * (e * e).sum(axis=-1).max():
            raise ValueError("profile is not the boundary of a convex ball")

    def params(self):
        return {"values": self.values.tolist()}

    def _profile(self, v):
        theta = wrap_angle(np.arctan2(v[..., 1], v[..., 0]))
        return self._spline(theta), self._dspline(theta), theta

    def value(self, v):
        v = np.asarray(v, dtype=float)
        r = np.linalg.norm(v, axis=-1)
        rho, _, _ = self._profile(v)
        return r * rho

    def grad(self, v):
        v = np.asarray(v, dtype=float)
        r = np.linalg.norm(v, axis=-1)
        rho, drho, theta = self._profile(v)
        ct, st = np.cos(theta), np.sin(theta)
        g = np.stack([rho * ct - drho * st, rho * st + drho * ct], axis=-1)
        return np.where(r[..., None] > 0, g, 0.0)


class TangentGauge(Gauge):
    """base gauge evaluated on the clockwise rotation of the argument."""

    def __init__(self, base):
        self.base = base
        self.smooth = base.smooth
        self.symmetric = base.symmetric

    @property
    def kind(self):
        return f"tangent({self.base.kind})"

    def params(self):
        return {"base": self.base.spec()}

    def value(self, v):
        return self.base.value(rotate_cw(v))

    def grad(self, v):
        return rotate_ccw(self.base.grad(rotate_cw(v)))

    def grad_is_smooth(self, v):
        return self.base.grad_is_smooth(rotate_cw(v))


class SymmetrizedGauge(Gauge):
    """(base(v) + base(-v)) / 2; always a symmetric gauge."""

    symmetric = True

    def __init__(self, base):
        self.base = base
        self.smooth = base.smooth

    @property
    def kind(self):
        return f"symmetrized({self.base.kind})"

    def params(self):
        return {"base": self.base.spec()}

    def value(self, v):
        v = np.asarray(v, dtype=float)
        return 0.5 * (self.base.value(v) + self.base.value(-v))

    def grad(self, v):
        v = np.asarray(v, dtype=float)
        return 0.5 * (self.base.grad(v) - self.base.grad(-v))

    def grad_is_smooth(self, v):
        v = np.asarray(v, dtype=float)
        return self.base.grad_is_smooth(v) & self.base.grad_is_smooth(-v)


class RotatedGauge(Gauge):
    """base gauge with its unit ball rotated by a fixed angle."""

    def __init__(self, base, angle):
        self.base = base
        self.angle = float(angle)
        self.smooth = base.smooth
        self.symmetric = base.symmetric
        self._rot = rotation_matrix(self.angle)

    @property
    def kind(self):
        return f"rotated({self.base.kind})"

    def params(self):
        return {"base": self.base.spec(), "angle": self.angle}

    def value(self, v):
        v = np.asarray(v, dtype=float)
        return self.base.value(v @ self._rot)  # v @ R == R^T v == rotate by -angle

    def grad(self, v):
        v = np.asarray(v, dtype=float)
        return self.base.grad(v @ self._rot) @ self._rot.T

    def grad_is_smooth(self, v):
        v = np.asarray(v, dtype=float)
        return self.base.grad_is_smooth(v @ self._rot)


def tangent_gauge(h):
    """Weight per unit oriented tangent for a normal-based gauge h."""
    return TangentGauge(h)


def interface_gauge(h):
    """Two-sided interface weight for a normal-based gauge h."""
    return SymmetrizedGauge(TangentGauge(h))


_GAUGE_KINDS = {}


def gauge_from_spec(spec):
    """Build a gauge from its serialized form (kind tag plus parameters)."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("gauge spec must be a mapping with a 'kind' entry")
    kind = spec["kind"]
    extra = {k: v for k, v in spec.items() if k != "kind"}
    if kind == "euclidean":
        _expect_keys(extra, set(), kind)
        return EuclideanGauge()
    if kind == "lp":
        _expect_keys(extra, {"p"}, kind)
        p = extra["p"]
        return LpGauge(np.inf if p == "inf" else float(p))
    if kind == "ellipse":
        _expect_keys(extra, {"matrix"}, kind)
        return EllipseGauge(extra["matrix"])
    if kind == "smoothed-l1":
        _expect_keys(extra, {"kappa"}, kind)
        return SmoothedL1Gauge(float(extra["kappa"]))
    if kind == "shifted-disk":
        _expect_keys(extra, {"center", "radius"}, kind)
        return ShiftedDiskGauge(extra["center"], float(extra["radius"]))
    if kind == "tabulated":
        _expect_keys(extra, {"values"}, kind)
        return TabulatedGauge(extra["values"])
    raise ValueError(f"unknown gauge kind {kind!r}")


def _expect_keys(extra, wanted, kind):
    got = set(extra)
    if got != wanted:
        unknown = sorted(got - wanted)
        missing = sorted(wanted - got)
        parts = []
        if unknown:
            parts.append(f"unknown keys {unknown}")
        if missing:
            parts.append(f"missing keys {missing}")
        raise ValueError(f"gauge kind {kind!r}: " + ", ".join(parts))


def unit_ball_boundary(gauge, n=256):
    """n points of {value == 1}, counterclockwise, starting at angle 0."""
    theta = np.arange(n) * (TWO_PI / n)
    return gauge.boundary_point(theta)


def strict_convexity_margin(gauge, n_dirs=256):
    """min over direction pairs of the midpoint convexity gap / angle^2.

    Zero (to machine precision) exactly when the sampled ball has a flat
    facet; bounded away from zero for strictly convex balls.
    """
    u = unit_dir(np.arange(n_dirs) * (TWO_PI / n_dirs))
    h = gauge.value(u)
    i, j = np.triu_indices(n_dirs, k=1)
    mid = 0.5 * (u[i] + u[j])
    gap = 0.5 * (h[i] + h[j]) - gauge.value(mid)
    ang = angle_between(u[i], u[j])
    keep = ang > 1e-9
    return float((gap[keep] / ang[keep] ** 2).min())


def roundedness_constant(gauge, n_dirs=128, n_w=16):
    """Largest c with (h(v+w)+h(v-w))/2 >= h(v) + c |w|^2 on a sample grid.

    v runs over unit directions and w over perpendicular vectors with
    |w| <= 1. For the euclidean gauge this converges to sqrt(2) - 1.
    """
    u = unit_dir(np.arange(n_dirs) * (TWO_PI / n_dirs))
    perp = rotate_ccw(u)
    t = np.linspace(1.0 / n_w, 1.0, n_w)
    w = t[:, None, None] * perp[None, :, :]  # (n_w, n_dirs, 2)
    v = u[None, :, :]
    gap = 0.5 * (gauge.value(v + w) + gauge.value(v - w)) - gauge.value(v)
    return float((gap / t[:, None] ** 2).min())


def path_length(gauge, pts, reverse=False):
    """Anisotropic length of a polyline: sum of gauge(segment vectors)."""
    pts = np.asarray(pts, dtype=float)
    if reverse:
        pts = pts[::-1]
    return float(gauge.value(pts[1:] - pts[:-1]).sum())


def dini_partial_sum(phi, ratio, n_terms):
    """Partial sum of phi(ratio^-n), n = 0 .. n_terms."""
    if not ratio > 1:
        raise ValueError("ratio must exceed 1")
    return float(sum(phi(ratio ** (-n)) for n in range(n_terms + 1)))
