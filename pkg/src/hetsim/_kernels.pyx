# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled propagation kernels.

Mirror of ``_kernels_py.py``: same arithmetic in the same order, so both
backends return bit-identical values. Keep the two files in sync when
touching either. Built without FMA contraction (see setup.py).
"""

from libc.math cimport log10, sqrt

import numpy as np

BACKEND = "compiled"


cdef inline double _orient(double ax, double ay, double bx, double by,
                           double cx, double cy) nogil:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


cdef inline double _dmin(double a, double b) nogil:
    return a if a < b else b


cdef inline double _dmax(double a, double b) nogil:
    return a if a > b else b


cdef inline bint _on_segment(double ax, double ay, double bx, double by,
                             double px, double py) nogil:
    return (_dmin(ax, bx) <= px <= _dmax(ax, bx)
            and _dmin(ay, by) <= py <= _dmax(ay, by))


cdef bint _segments_cross(double ax, double ay, double bx, double by,
                          double cx, double cy, double dx, double dy) nogil:
    cdef double o1 = _orient(ax, ay, bx, by, cx, cy)
    cdef double o2 = _orient(ax, ay, bx, by, dx, dy)
    cdef double o3 = _orient(cx, cy, dx, dy, ax, ay)
    cdef double o4 = _orient(cx, cy, dx, dy, bx, by)
    if ((o1 > 0.0) != (o2 > 0.0)) and ((o3 > 0.0) != (o4 > 0.0)) \
            and o1 != 0.0 and o2 != 0.0 and o3 != 0.0 and o4 != 0.0:
        return True
    if o1 == 0.0 and _on_segment(ax, ay, bx, by, cx, cy):
        return True
    if o2 == 0.0 and _on_segment(ax, ay, bx, by, dx, dy):
        return True
    if o3 == 0.0 and _on_segment(cx, cy, dx, dy, ax, ay):
        return True
    if o4 == 0.0 and _on_segment(cx, cy, dx, dy, bx, by):
        return True
    return False


cdef bint _point_in_convex(double px, double py,
                           double[::1] vx, double[::1] vy,
                           Py_ssize_t lo, Py_ssize_t hi) nogil:
    cdef bint pos = False
    cdef bint neg = False
    cdef Py_ssize_t n = hi - lo
    cdef Py_ssize_t i, j
    cdef double cross
    for i in range(n):
        j = lo + (i + 1) % n
        cross = _orient(vx[lo + i], vy[lo + i], vx[j], vy[j], px, py)
        if cross > 0.0:
            pos = True
        elif cross < 0.0:
            neg = True
        if pos and neg:
            return False
    return True


cdef double _obstruction_db(double ax, double ay, double px, double py,
                            double[::1] vx, double[::1] vy,
                            long long[::1] offsets,
                            unsigned char[::1] closed,
                            double[::1] loss) nogil:
    cdef double total = 0.0
    cdef Py_ssize_t k, lo, hi, i, j, n, last
    cdef bint hit
    for k in range(loss.shape[0]):
        lo = offsets[k]
        hi = offsets[k + 1]
        hit = False
        n = hi - lo
        last = n if closed[k] else n - 1
        for i in range(last):
            j = lo + (i + 1) % n
            if _segments_cross(ax, ay, px, py,
                               vx[lo + i], vy[lo + i], vx[j], vy[j]):
                hit = True
                break
        if not hit and closed[k]:
            if _point_in_convex(ax, ay, vx, vy, lo, hi) \
                    or _point_in_convex(px, py, vx, vy, lo, hi):
                hit = True
        if hit:
            total += loss[k]
    return total


def rss_profile(double tx_power, double ref_loss, double exponent,
                double ap_x, double ap_y, xs, ys, obstacles=None):
    """Mean received signal strength (dBm) at each point.

    Log-distance path loss clamped at a 1 m reference distance, minus the
    penetration loss of every obstacle whose geometry intersects the
    line-of-sight segment.
    """
    cdef double[::1] cxs = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] cys = np.ascontiguousarray(ys, dtype=np.float64)
    out = np.empty(cxs.shape[0], dtype=np.float64)
    cdef double[::1] cout = out

    cdef bint have_obs = False
    cdef double[::1] vx, vy, loss
    cdef long long[::1] offsets
    cdef unsigned char[::1] closed
    if obstacles is not None and len(obstacles[4]) > 0:
        vx = np.ascontiguousarray(obstacles[0], dtype=np.float64)
        vy = np.ascontiguousarray(obstacles[1], dtype=np.float64)
        offsets = np.ascontiguousarray(obstacles[2], dtype=np.int64)
        closed = np.ascontiguousarray(obstacles[3], dtype=np.uint8)
        loss = np.ascontiguousarray(obstacles[4], dtype=np.float64)
        have_obs = True

    cdef double factor = 10.0 * exponent
    cdef double base = tx_power - ref_loss
    cdef double dx, dy, d, rss
    cdef Py_ssize_t i
    with nogil:
        for i in range(cxs.shape[0]):
            dx = cxs[i] - ap_x
            dy = cys[i] - ap_y
            d = sqrt(dx * dx + dy * dy)
            if d < 1.0:
                d = 1.0
            rss = base - factor * log10(d)
            if have_obs:
                rss -= _obstruction_db(ap_x, ap_y, cxs[i], cys[i],
                                       vx, vy, offsets, closed, loss)
            cout[i] = rss
    return out
