"""Pairs of densities on a planar domain: volume weight g and normal gauge h.

The gauge may vary with position (a callable from a point to a Gauge); most
workloads use a single frozen gauge, for which every consumer takes a fast
fully-vectorized path.
"""

from __future__ import annotations

import numpy as np

from .gauge import Gauge
from .geometry import unit_dir


class Rect:
    """Axis-aligned rectangular domain."""

    def __init__(self, xmin, xmax, ymin, ymax):
        if not (xmax > xmin and ymax > ymin):
            raise ValueError("empty rectangle")
        self.xmin, self.xmax, self.ymin, self.ymax = map(float, (xmin, xmax, ymin, ymax))

    def contains(self, pts):
        pts = np.asarray(pts, dtype=float)
        return (
            (pts[..., 0] >= self.xmin)
            & (pts[..., 0] <= self.xmax)
            & (pts[..., 1] >= self.ymin)
            & (pts[..., 1] <= self.ymax)
        )

    def diameter(self):
        return float(np.hypot(self.xmax - self.xmin, self.ymax - self.ymin))

    def sample(self, rng, n):
        x = rng.uniform(self.xmin, self.xmax, n)
        y = rng.uniform(self.ymin, self.ymax, n)
        return np.column_stack([x, y])

    def spec(self):
        return {"shape": "rect", "x": [self.xmin, self.xmax], "y": [self.ymin, self.ymax]}


class DiskDomain:
    def __init__(self, center, radius):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def contains(self, pts):
        pts = np.asarray(pts, dtype=float)
        return np.linalg.norm(pts - self.center, axis=-1) <= self.radius

    def diameter(self):
        return 2.0 * self.radius

    def sample(self, rng, n):
        r = self.radius * np.sqrt(rng.uniform(0.0, 1.0, n))
        t = rng.uniform(0.0, 2 * np.pi, n)
        return self.center + r[:, None] * unit_dir(t)

    def spec(self):
        return {"shape": "disk", "center": self.center.tolist(), "radius": self.radius}


class Density:
    """Volume density g and normal gauge field h on a domain.

    h_min and h_max bound the gauge over the domain and the unit circle of
    directions; they feed the isoperimetric and boundary-length diagnostics.
    """

    def __init__(self, gauge, g=1.0, domain=None, h_min=None, h_max=None):
        self.domain = domain if domain is not None else Rect(-1e6, 1e6, -1e6, 1e6)
        if isinstance(gauge, Gauge):
            self._gauge = gauge
            self.uniform_gauge = True
        elif callable(gauge):
            self._gauge = gauge
            self.uniform_gauge = False
        else:
            raise ValueError("gauge must be a Gauge or a callable point -> Gauge")
        if isinstance(g, (int, float)):
            gval = float(g)
            if not gval > 0:
                raise ValueError("constant g must be positive")
            self._g = None
            self._g_const = gval
        elif callable(g):
            self._g = g
            self._g_const = None
        else:
            raise ValueError("g must be a positive number or a callable")
        if h_min is None or h_max is None:
            lo, hi = self._probe_gauge_range()
            h_min = lo if h_min is None else h_min
            h_max = hi if h_max is None else h_max
        self.h_min = float(h_min)
        self.h_max = float(h_max)
        if not 0 < self.h_min <= self.h_max:
            raise ValueError("need 0 < h_min <= h_max")

    @classmethod
    def constant(cls, gauge, g=1.0, domain=None):
        return cls(gauge, g=g, domain=domain)

    def _probe_gauge_range(self, n_dirs=64, n_pts=32):
        u = unit_dir(np.arange(n_dirs) * (2 * np.pi / n_dirs))
        if self.uniform_gauge:
            vals = self._gauge.value(u)
            return float(vals.min()), float(vals.max())
        rng = np.random.default_rng(0)
        pts = self.domain.sample(rng, n_pts)
        lo, hi = np.inf, -np.inf
        for x in pts:
            vals = self._gauge(x).value(u)
            lo = min(lo, float(vals.min()))
            hi = max(hi, float(vals.max()))
        return lo, hi

    def gauge_at(self, x):
        if self.uniform_gauge:
            return self._gauge
        return self._gauge(np.asarray(x, dtype=float))

    def g_at(self, pts):
        pts = np.asarray(pts, dtype=float)
        if self._g_const is not None:
            return np.full(pts.shape[:-1], self._g_const)
        return np.asarray(self._g(pts), dtype=float)

    def h_at(self, pts, v):
        """Gauge values h(x, v) for matched batches of points and vectors."""
        pts = np.asarray(pts, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.uniform_gauge:
            return self._gauge.value(v)
        flat_p = pts.reshape(-1, 2)
        flat_v = v.reshape(-1, 2)
        out = np.empty(len(flat_p))
        for k in range(len(flat_p)):
            out[k] = self._gauge(flat_p[k]).value(flat_v[k])
        return out.reshape(pts.shape[:-1])

    def scaled(self, factor):
        """Density with both g and h multiplied by a positive constant."""
        if not factor > 0:
            raise ValueError("factor must be positive")
        base_gauge = self._gauge
        if self.uniform_gauge:
            gauge = _ScaledGauge(base_gauge, factor)
        else:
            gauge = lambda x: _ScaledGauge(base_gauge(x), factor)
        if self._g_const is not None:
            g = self._g_const * factor
        else:
            inner = self._g
            g = lambda pts: factor * np.asarray(inner(pts), dtype=float)
        return Density(gauge, g=g, domain=self.domain, h_min=self.h_min * factor, h_max=self.h_max * factor)


class _ScaledGauge(Gauge):
    def __init__(self, base, factor):
        self.base = base
        self.factor = float(factor)
        self.smooth = base.smooth
        self.symmetric = base.symmetric

    @property
    def kind(self):
        return f"scaled({self.base.kind})"

    def params(self):
        return {"base": self.base.spec(), "factor": self.factor}

    def value(self, v):
        return self.factor * self.base.value(v)

    def grad(self, v):
        return self.factor * self.base.grad(v)

    def grad_is_smooth(self, v):
        return self.base.grad_is_smooth(v)


def validate_density(density, n_pts=64, n_dirs=32, rng=None):
    """Sampled sanity checks; returns a list of violation strings."""
    rng = np.random.default_rng(0) if rng is None else rng
    problems = []
    pts = density.domain.sample(rng, n_pts)
    u = unit_dir(rng.uniform(0, 2 * np.pi, n_dirs))
    for x in pts:
        gauge = density.gauge_at(x)
        vals = gauge.value(u)
        if not np.all(np.isfinite(vals)):
            problems.append(f"gauge not finite at {x.tolist()}")
            break
        if vals.min() < density.h_min - 1e-9 or vals.max() > density.h_max + 1e-9:
            problems.append(
                f"gauge range [{vals.min():.6g}, {vals.max():.6g}] at {x.tolist()} "
                f"escapes stored bounds [{density.h_min:.6g}, {density.h_max:.6g}]"
            )
            break
    gv = density.g_at(pts)
    if not np.all(np.isfinite(gv)) or np.any(gv < 0):
        problems.append("volume density g must be finite and nonnegative")
    return problems


def estimate_modulus(density, t, n_samples=4000, n_dirs=16, rng=None):
    """Monte Carlo lower estimate of the spatial modulus of continuity.

    sup over |y - x| <= t, both in the domain, and unit directions v of
    |h(x, v) - h(y, v)|. t is clamped to the domain diameter.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    t = min(float(t), density.domain.diameter())
    if t < 0:
        raise ValueError("t must be nonnegative")
    best = 0.0
    u = unit_dir(np.arange(n_dirs) * (2 * np.pi / n_dirs))
    xs = density.domain.sample(rng, n_samples)
    step = t * np.sqrt(rng.uniform(0.0, 1.0, n_samples))
    ys = xs + step[:, None] * unit_dir(rng.uniform(0, 2 * np.pi, n_samples))
    inside = density.domain.contains(ys)
    for x, y, ok in zip(xs, ys, inside):
        if not ok:
            continue
        hx = density.gauge_at(x).value(u)
        hy = density.gauge_at(y).value(u)
        best = max(best, float(np.abs(hx - hy).max()))
    return best


def ball_volume(density, center, radius, n_r=48, n_t=96):
    """Weighted volume of a disk via tensor Gauss-Legendre in polar form."""
    center = np.asarray(center, dtype=float)
    xr, wr = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * radius * (xr + 1.0)
    wr = 0.5 * radius * wr
    theta = (np.arange(n_t) + 0.5) * (2 * np.pi / n_t)
    wt = 2 * np.pi / n_t
    pts = center + r[:, None, None] * unit_dir(theta)[None, :, :]
    gv = density.g_at(pts.reshape(-1, 2)).reshape(n_r, n_t)
    return float(((gv.sum(axis=1) * wt) * wr * r).sum())
