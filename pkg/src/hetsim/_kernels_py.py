"""Pure-Python propagation kernels.

Mirror of the compiled extension in ``_kernels.pyx``: same arithmetic in the
same order, so both backends return bit-identical values. Keep the two files
in sync when touching either.
"""

import math

import numpy as np

BACKEND = "python"


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _on_segment(ax, ay, bx, by, px, py):
    return (min(ax, bx) <= px <= max(ax, bx)
            and min(ay, by) <= py <= max(ay, by))


def _segments_cross(ax, ay, bx, by, cx, cy, dx, dy):
    o1 = _orient(ax, ay, bx, by, cx, cy)
    o2 = _orient(ax, ay, bx, by, dx, dy)
    o3 = _orient(cx, cy, dx, dy, ax, ay)
    o4 = _orient(cx, cy, dx, dy, bx, by)
    if ((o1 > 0.0) != (o2 > 0.0)) and ((o3 > 0.0) != (o4 > 0.0)) \
            and o1 != 0.0 and o2 != 0.0 and o3 != 0.0 and o4 != 0.0:
        return True
    # collinear / endpoint-touching cases
    if o1 == 0.0 and _on_segment(ax, ay, bx, by, cx, cy):
        return True
    if o2 == 0.0 and _on_segment(ax, ay, bx, by, dx, dy):
        return True
    if o3 == 0.0 and _on_segment(cx, cy, dx, dy, ax, ay):
        return True
    if o4 == 0.0 and _on_segment(cx, cy, dx, dy, bx, by):
        return True
    return False


def _point_in_convex(px, py, vx, vy, lo, hi):
    pos = False
    neg = False
    n = hi - lo
    for i in range(n):
        x1 = vx[lo + i]
        y1 = vy[lo + i]
        x2 = vx[lo + (i + 1) % n]
        y2 = vy[lo + (i + 1) % n]
        cross = _orient(x1, y1, x2, y2, px, py)
        if cross > 0.0:
            pos = True
        elif cross < 0.0:
            neg = True
        if pos and neg:
            return False
    return True


def _obstruction_db(ax, ay, px, py, vx, vy, offsets, closed, loss):
    total = 0.0
    for k in range(len(loss)):
        lo = offsets[k]
        hi = offsets[k + 1]
        hit = False
        n = hi - lo
        last = n if closed[k] else n - 1
        for i in range(last):
            x1 = vx[lo + i]
            y1 = vy[lo + i]
            j = lo + (i + 1) % n
            x2 = vx[j]
            y2 = vy[j]
            if _segments_cross(ax, ay, px, py, x1, y1, x2, y2):
                hit = True
                break
        if not hit and closed[k]:
            # the path may lie entirely inside a polygon obstacle
            if _point_in_convex(ax, ay, vx, vy, lo, hi) \
                    or _point_in_convex(px, py, vx, vy, lo, hi):
                hit = True
        if hit:
            total += loss[k]
    return total


def rss_profile(tx_power, ref_loss, exponent, ap_x, ap_y, xs, ys,
                obstacles=None):
    """Mean received signal strength (dBm) at each point.

    Log-distance path loss clamped at a 1 m reference distance, minus the
    penetration loss of every obstacle whose geometry intersects the
    line-of-sight segment.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    out = np.empty(len(xs), dtype=np.float64)
    if obstacles is not None:
        vx, vy, offsets, closed, loss = obstacles
        if len(loss) == 0:
            obstacles = None
    factor = 10.0 * exponent
    base = tx_power - ref_loss
    for i in range(len(xs)):
        dx = xs[i] - ap_x
        dy = ys[i] - ap_y
        d = math.sqrt(dx * dx + dy * dy)
        if d < 1.0:
            d = 1.0
        rss = base - factor * math.log10(d)
        if obstacles is not None:
            rss -= _obstruction_db(ap_x, ap_y, xs[i], ys[i],
                                   vx, vy, offsets, closed, loss)
        out[i] = rss
    return out
