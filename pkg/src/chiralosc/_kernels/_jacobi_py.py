"""Pure-Python (numpy) cyclic Jacobi sweeps; same algorithm as the compiled kernel."""

import math

import numpy as np


def _offdiag_norm(a):
    upper = np.triu(a, 1)
    return math.sqrt(2.0 * float(np.sum(upper * upper)))


def jacobi_sweeps(a, v, target, max_sweeps):
    """Run cyclic sweeps in place until the off-diagonal norm <= target.

    Returns ``(sweeps_used, final_offdiag_norm)``.
    """
    n = a.shape[0]
    sweep = 0
    off = _offdiag_norm(a)
    while off > target and sweep < max_sweeps:
        for p in range(n - 1):
            for q in np.flatnonzero(a[p, p + 1:]) + p + 1:
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = float(a[q, q] - a[p, p]) / (2.0 * float(apq))
                if theta >= 0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp = a[:, p].copy()
                cq = a[:, q]
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp = a[p].copy()
                rq = a[q]
                a[p] = c * rp - s * rq
                a[q] = s * rp + c * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        sweep += 1
        off = _offdiag_norm(a)
    return sweep, off
