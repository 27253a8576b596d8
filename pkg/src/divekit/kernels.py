"""Hot numeric kernels with numba-accelerated and pure numpy/scipy paths.

Three inner loops dominate pipeline runtime: per-frame window smoothing,
the consensus-loop hypothesis scan, and connected-component labeling of
masks. Each has a numba ``@njit`` implementation and a vectorized
numpy/scipy fallback. The backend is chosen at import time:

* numba is used when importable (the default),
* ``DIVEKIT_NUMBA=0`` (or ``false``/``off``/``no``) forces the fallback.

Both paths implement the same arithmetic; ``benchmarks/bench_kernels.py``
compares them. Every kernel is deterministic: randomness (consensus
sampling) happens in the caller, which passes precomputed index arrays.
"""

from __future__ import annotations

import os

import numpy as np
import scipy.ndimage

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def _env_wants_numba() -> bool:
    flag = os.environ.get("DIVEKIT_NUMBA", "").strip().lower()
    return flag not in ("0", "false", "off", "no")


USE_NUMBA = HAS_NUMBA and _env_wants_numba()

_CONNECT8 = np.ones((3, 3), dtype=bool)


# ---------------------------------------------------------------------------
# Window smoothing: weighted sum over frame offsets, renormalized over the
# part of the kernel that falls inside the signal at each boundary.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _hann_smooth_jit(values, weights):
    n = values.shape[0]
    half = (weights.shape[0] - 1) // 2
    out = np.empty(n, np.float64)
    for t in range(n):
        lo = -half if t >= half else -t
        hi = half if t + half < n else n - 1 - t
        acc = 0.0
        wsum = 0.0
        for k in range(lo, hi + 1):
            w = weights[k + half]
            acc += values[t + k] * w
            wsum += w
        out[t] = acc / wsum
    return out


def hann_smooth_numpy(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Fallback path: two same-mode convolutions (weights are symmetric,
    so numpy's kernel flip is a no-op)."""
    num = np.convolve(values, weights, mode="same")
    den = np.convolve(np.ones_like(values), weights, mode="same")
    return num / den


def hann_smooth_numba(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    return _hann_smooth_jit(
        np.ascontiguousarray(values, dtype=np.float64),
        np.ascontiguousarray(weights, dtype=np.float64),
    )


def hann_smooth(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    if USE_NUMBA:
        return hann_smooth_numba(values, weights)
    return hann_smooth_numpy(values, weights)


# ---------------------------------------------------------------------------
# Consensus hypothesis scan. For each precomputed minimal sample (3 candidate
# indices at distinct frames) fit the motion model in closed form:
#   x = a0 + a1 t      least squares line through the 3 points
#   y = b0 + b1 x + b2 x^2   exact quadratic through the 3 (x, y) points
# then score it against every candidate. Cost is the truncated quadratic
# sum(min(d^2, tau^2)) when `msac` is set, else (n - inlier count).
# Samples with x-spread below `spread_floor` or coincident x values are
# skipped (cost = inf). The quadratic is expanded from a centered basis to
# keep the arithmetic well conditioned.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _msac_scan_jit(t, x, y, samples, tau, spread_floor, msac):
    iters = samples.shape[0]
    n = t.shape[0]
    tau2 = tau * tau
    costs = np.full(iters, np.inf, np.float64)
    inlier_counts = np.zeros(iters, np.int64)
    params = np.zeros((iters, 5), np.float64)
    for it in range(iters):
        i0 = samples[it, 0]
        if i0 < 0:
            continue
        i1 = samples[it, 1]
        i2 = samples[it, 2]
        t0, t1, t2 = t[i0], t[i1], t[i2]
        x0, x1, x2 = x[i0], x[i1], x[i2]
        y0, y1, y2 = y[i0], y[i1], y[i2]

        xmin = min(x0, min(x1, x2))
        xmax = max(x0, max(x1, x2))
        if xmax - xmin < spread_floor:
            continue

        mt = (t0 + t1 + t2) / 3.0
        mx = (x0 + x1 + x2) / 3.0
        dt0, dt1, dt2 = t0 - mt, t1 - mt, t2 - mt
        den_t = dt0 * dt0 + dt1 * dt1 + dt2 * dt2
        if den_t <= 0.0:
            continue
        a1 = (dt0 * (x0 - mx) + dt1 * (x1 - mx) + dt2 * (x2 - mx)) / den_t
        a0 = mx - a1 * mt

        u0, u1, u2 = x0 - mx, x1 - mx, x2 - mx
        d01, d02, d12 = u0 - u1, u0 - u2, u1 - u2
        if abs(d01) < 1e-9 or abs(d02) < 1e-9 or abs(d12) < 1e-9:
            continue
        l0 = y0 / (d01 * d02)
        l1 = y1 / (-d01 * d12)
        l2 = y2 / (d02 * d12)
        c2 = l0 + l1 + l2
        c1 = -(l0 * (u1 + u2) + l1 * (u0 + u2) + l2 * (u0 + u1))
        c0 = l0 * u1 * u2 + l1 * u0 * u2 + l2 * u0 * u1
        b2 = c2
        b1 = c1 - 2.0 * c2 * mx
        b0 = c0 - c1 * mx + c2 * mx * mx

        cost = 0.0
        inliers = 0
        for j in range(n):
            xm = a0 + a1 * t[j]
            ym = b0 + (b1 + b2 * xm) * xm
            dx = x[j] - xm
            dy = y[j] - ym
            d2 = dx * dx + dy * dy
            if d2 <= tau2:
                inliers += 1
                if msac:
                    cost += d2
            elif msac:
                cost += tau2
        if not msac:
            cost = float(n - inliers)
        costs[it] = cost
        inlier_counts[it] = inliers
        params[it, 0] = a0
        params[it, 1] = a1
        params[it, 2] = b0
        params[it, 3] = b1
        params[it, 4] = b2
    return costs, inlier_counts, params


def msac_scan_numpy(t, x, y, samples, tau, spread_floor, msac=True):
    """Fallback path: the hypothesis loop vectorized across iterations."""
    iters = samples.shape[0]
    costs = np.full(iters, np.inf)
    inlier_counts = np.zeros(iters, dtype=np.int64)
    params = np.zeros((iters, 5))
    ok = samples[:, 0] >= 0
    if not ok.any():
        return costs, inlier_counts, params

    idx = samples[ok]
    ts, xs, ys = t[idx], x[idx], y[idx]

    spread = xs.max(axis=1) - xs.min(axis=1)
    valid = spread >= spread_floor

    mt = ts.mean(axis=1)
    mx = xs.mean(axis=1)
    dts = ts - mt[:, None]
    den_t = (dts * dts).sum(axis=1)
    valid &= den_t > 0.0
    den_t[~valid] = 1.0
    a1 = (dts * (xs - mx[:, None])).sum(axis=1) / den_t
    a0 = mx - a1 * mt

    us = xs - mx[:, None]
    d01 = us[:, 0] - us[:, 1]
    d02 = us[:, 0] - us[:, 2]
    d12 = us[:, 1] - us[:, 2]
    valid &= (np.abs(d01) >= 1e-9) & (np.abs(d02) >= 1e-9) & (np.abs(d12) >= 1e-9)
    safe = np.where(valid, 1.0, np.nan)
    l0 = ys[:, 0] / (d01 * d02) * safe
    l1 = ys[:, 1] / (-d01 * d12) * safe
    l2 = ys[:, 2] / (d02 * d12) * safe
    c2 = l0 + l1 + l2
    c1 = -(l0 * (us[:, 1] + us[:, 2]) + l1 * (us[:, 0] + us[:, 2]) + l2 * (us[:, 0] + us[:, 1]))
    c0 = l0 * us[:, 1] * us[:, 2] + l1 * us[:, 0] * us[:, 2] + l2 * us[:, 0] * us[:, 1]
    b2 = c2
    b1 = c1 - 2.0 * c2 * mx
    b0 = c0 - c1 * mx + c2 * mx * mx

    with np.errstate(invalid="ignore"):
        xm = a0[:, None] + a1[:, None] * t[None, :]
        ym = b0[:, None] + (b1[:, None] + b2[:, None] * xm) * xm
        d2 = (x[None, :] - xm) ** 2 + (y[None, :] - ym) ** 2
        tau2 = tau * tau
        inl = d2 <= tau2
        if msac:
            cost = np.where(inl, d2, tau2).sum(axis=1)
        else:
            cost = (t.shape[0] - inl.sum(axis=1)).astype(np.float64)

    cost[~valid] = np.inf
    counts = np.where(valid, inl.sum(axis=1), 0)
    block = np.stack([a0, a1, b0, b1, b2], axis=1)
    block[~valid] = 0.0

    costs[ok] = cost
    inlier_counts[ok] = counts
    params[ok] = block
    return costs, inlier_counts, params


def msac_scan_numba(t, x, y, samples, tau, spread_floor, msac=True):
    return _msac_scan_jit(
        np.ascontiguousarray(t, dtype=np.float64),
        np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(y, dtype=np.float64),
        np.ascontiguousarray(samples, dtype=np.int64),
        float(tau),
        float(spread_floor),
        bool(msac),
    )


def msac_scan(t, x, y, samples, tau, spread_floor, msac=True):
    if USE_NUMBA:
        return msac_scan_numba(t, x, y, samples, tau, spread_floor, msac)
    return msac_scan_numpy(t, x, y, samples, tau, spread_floor, msac)


# ---------------------------------------------------------------------------
# 8-connectivity component labeling. The numba path is a stack-based flood
# fill that numbers components in raster order of their first pixel, which
# matches scipy.ndimage.label, so both backends produce identical labelings.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _label_components_jit(binary):
    h, w = binary.shape
    labels = np.zeros((h, w), np.int32)
    stack = np.empty(h * w, np.int64)
    current = 0
    for r0 in range(h):
        for c0 in range(w):
            if binary[r0, c0] == 0 or labels[r0, c0] != 0:
                continue
            current += 1
            top = 0
            stack[top] = r0 * w + c0
            top += 1
            labels[r0, c0] = current
            while top > 0:
                top -= 1
                pos = stack[top]
                r = pos // w
                c = pos % w
                for dr in range(-1, 2):
                    rr = r + dr
                    if rr < 0 or rr >= h:
                        continue
                    for dc in range(-1, 2):
                        cc = c + dc
                        if cc < 0 or cc >= w:
                            continue
                        if binary[rr, cc] != 0 and labels[rr, cc] == 0:
                            labels[rr, cc] = current
                            stack[top] = rr * w + cc
                            top += 1
    return labels, current


def label_components_numpy(binary: np.ndarray):
    labels, count = scipy.ndimage.label(binary, structure=_CONNECT8)
    return labels.astype(np.int32, copy=False), int(count)


def label_components_numba(binary: np.ndarray):
    labels, count = _label_components_jit(
        np.ascontiguousarray(binary, dtype=np.uint8)
    )
    return labels, int(count)


def label_components(binary: np.ndarray):
    """Label 8-connected foreground components of a boolean/0-1 grid.

    Returns (labels, count) where labels is int32 with 0 for background and
    1..count for components.
    """
    if USE_NUMBA:
        return label_components_numba(binary)
    return label_components_numpy(binary)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
