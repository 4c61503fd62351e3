"""Geographic world model: routes, access points, obstacles, signal strength.

All operations are pure functions of their inputs; shadowing comes from an
explicit seeded field so runs are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels

Point = tuple[float, float]


@dataclass(frozen=True)
class Technology:
    """One radio access technology and its configuration defaults."""

    name: str
    tx_power_dbm: float
    path_loss_exp: float
    ref_loss_db: float
    sensitivity_dbm: float
    capacity_users: int
    capacity_bw_kbps: float
    base_latency_ms: float
    scan_window_ms: tuple[float, float] = (200.0, 400.0)


WLAN = Technology("WLAN", 20.0, 3.5, 40.0, -85.0, 32, 2000.0, 5.0)
UMTS = Technology("UMTS", 43.0, 3.0, 34.0, -110.0, 85, 384.0, 60.0)
WIMAX = Technology("WIMAX", 43.0, 2.8, 34.0, -100.0, 60, 1000.0, 50.0)

TECHNOLOGIES: dict[str, Technology] = {t.name: t for t in (WLAN, UMTS, WIMAX)}


def register_technology(tech: Technology) -> None:
    """Add a technology kind (the set is extensible)."""
    TECHNOLOGIES[tech.name] = tech


@dataclass(frozen=True)
class AccessPoint:
    """One radio attachment point."""

    id: str
    tech: Technology
    position: Point
    tx_power_dbm: float
    path_loss_exp: float
    ref_loss_db: float
    sensitivity_dbm: float
    capacity_users: int
    capacity_bw_kbps: float
    base_latency_ms: float
    provider: str = "default"

    def __post_init__(self):
        if not self.id:
            raise ValueError("access point id must be non-empty")
        if not 1.5 <= self.path_loss_exp <= 6.0:
            raise ValueError(
                f"ap {self.id}: path_loss_exp must be in [1.5, 6], "
                f"got {self.path_loss_exp}")
        if self.tx_power_dbm <= self.sensitivity_dbm + self.ref_loss_db:
            raise ValueError(
                f"ap {self.id}: tx_power must exceed sensitivity + ref_loss "
                "(coverage would be empty)")
        if self.capacity_users < 1:
            raise ValueError(f"ap {self.id}: capacity_users must be >= 1")
        if self.capacity_bw_kbps <= 0:
            raise ValueError(f"ap {self.id}: capacity_bw must be > 0")


def make_access_point(ap_id: str, tech_name: str, position: Point,
                      provider: str = "default", **overrides) -> AccessPoint:
    """Build an AccessPoint, filling unset radio parameters from its
    technology's defaults."""
    tech = TECHNOLOGIES[tech_name]
    params = dict(
        tx_power_dbm=tech.tx_power_dbm,
        path_loss_exp=tech.path_loss_exp,
        ref_loss_db=tech.ref_loss_db,
        sensitivity_dbm=tech.sensitivity_dbm,
        capacity_users=tech.capacity_users,
        capacity_bw_kbps=tech.capacity_bw_kbps,
        base_latency_ms=tech.base_latency_ms,
    )
    unknown = set(overrides) - set(params)
    if unknown:
        raise ValueError(f"unknown access point parameters: {sorted(unknown)}")
    params.update(overrides)
    return AccessPoint(id=ap_id, tech=tech, position=position,
                       provider=provider, **params)


@dataclass(frozen=True)
class Obstacle:
    """A line segment or convex polygon that attenuates the signal path."""

    points: tuple[Point, ...]
    penetration_loss_db: float
    closed: bool = False  # True: convex polygon, False: open polyline

    def __post_init__(self):
        if self.penetration_loss_db < 0:
            raise ValueError("obstacle penetration_loss must be >= 0")
        n = len(self.points)
        if self.closed and n < 3:
            raise ValueError("polygon obstacle needs >= 3 vertices")
        if not self.closed and n < 2:
            raise ValueError("segment obstacle needs >= 2 vertices")
        for (x1, y1), (x2, y2) in zip(self.points, self.points[1:]):
            if x1 == x2 and y1 == y2:
                raise ValueError("obstacle has coincident consecutive points")
        if self.closed and not _is_convex(self.points):
            raise ValueError("polygon obstacle must be convex")


def _is_convex(points: tuple[Point, ...]) -> bool:
    n = len(points)
    pos = neg = False
    for i in range(n):
        ax, ay = points[i]
        bx, by = points[(i + 1) % n]
        cx, cy = points[(i + 2) % n]
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if cross > 0:
            pos = True
        elif cross < 0:
            neg = True
        if pos and neg:
            return False
    return True


def pack_obstacles(obstacles: list[Obstacle] | tuple[Obstacle, ...]):
    """Flatten obstacles into the array form the kernels consume."""
    if not obstacles:
        return None
    vx: list[float] = []
    vy: list[float] = []
    offsets = [0]
    closed = []
    loss = []
    for obs in obstacles:
        for x, y in obs.points:
            vx.append(float(x))
            vy.append(float(y))
        offsets.append(len(vx))
        closed.append(1 if obs.closed else 0)
        loss.append(float(obs.penetration_loss_db))
    return (np.asarray(vx), np.asarray(vy),
            np.asarray(offsets, dtype=np.int64),
            np.asarray(closed, dtype=np.uint8),
            np.asarray(loss))


@dataclass(frozen=True)
class Route:
    """Piecewise-linear path traversed at constant speed."""

    waypoints: tuple[Point, ...]
    speed_mps: float
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise ValueError("route needs at least 2 waypoints")
        if self.speed_mps <= 0:
            raise ValueError("route speed must be > 0")
        pts = np.asarray(self.waypoints, dtype=np.float64)
        seg = np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))
        if np.any(seg == 0.0):
            raise ValueError("consecutive route waypoints must be distinct")
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        object.__setattr__(self, "_cum", cum)

    @property
    def length_m(self) -> float:
        return float(self._cum[-1])

    @property
    def duration_s(self) -> float:
        return self.length_m / self.speed_mps

    def points_at(self, arclengths) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized positions for an array of arclengths (clamped to
        [0, L])."""
        s = np.clip(np.asarray(arclengths, dtype=np.float64), 0.0,
                    self.length_m)
        pts = np.asarray(self.waypoints, dtype=np.float64)
        xs = np.interp(s, self._cum, pts[:, 0])
        ys = np.interp(s, self._cum, pts[:, 1])
        return xs, ys


@dataclass(frozen=True)
class RssSample:
    """One received-signal-strength measurement."""

    ap_id: str
    time_s: float
    s_m: float
    rss_dbm: float


def position_at(route: Route, t_s: float) -> Point:
    """Terminal position after travelling for ``t_s`` seconds."""
    if t_s < 0 or t_s > route.duration_s * (1 + 1e-12) + 1e-9:
        raise ValueError(
            f"t={t_s} outside route traversal [0, {route.duration_s}]")
    s = min(route.speed_mps * t_s, route.length_m)
    xs, ys = route.points_at([s])
    return (float(xs[0]), float(ys[0]))


def rss_at(ap: AccessPoint, point: Point,
           obstacles: list[Obstacle] | None = None,
           shadow_db: float = 0.0) -> float:
    """Received signal strength at a point in dBm.

    ``shadow_db`` is an externally drawn shadowing value (0 when shadowing
    is disabled); the mean path-loss part is fully deterministic.
    """
    packed = pack_obstacles(obstacles) if obstacles else None
    out = kernels.rss_profile(
        ap.tx_power_dbm, ap.ref_loss_db, ap.path_loss_exp,
        ap.position[0], ap.position[1],
        np.asarray([point[0]]), np.asarray([point[1]]), packed)
    return float(out[0]) - shadow_db


def rss_along(ap: AccessPoint, xs: np.ndarray, ys: np.ndarray,
              packed_obstacles=None) -> np.ndarray:
    """Deterministic mean RSS profile over arrays of positions."""
    return kernels.rss_profile(
        ap.tx_power_dbm, ap.ref_loss_db, ap.path_loss_exp,
        ap.position[0], ap.position[1], xs, ys, packed_obstacles)


def in_coverage(ap: AccessPoint, point: Point,
                obstacles: list[Obstacle] | None = None) -> bool:
    """Coverage is defined on the deterministic mean RSS, never on shadowed
    draws."""
    return rss_at(ap, point, obstacles) >= ap.sensitivity_dbm


class ShadowingField:
    """Seeded log-normal shadowing along the route arclength.

    One independent Gaussian field per access point, drawn on a grid with
    spacing equal to the correlation length and linearly interpolated, so
    nearby positions see correlated shadowing. Identical seeds reproduce
    identical draws.
    """

    STREAM = 0x5AD0

    def __init__(self, seed: int, ap_ids: list[str], length_m: float,
                 sigma_db: float, corr_m: float = 20.0):
        if corr_m <= 0:
            raise ValueError("shadowing correlation length must be > 0")
        self.sigma_db = float(sigma_db)
        self.corr_m = float(corr_m)
        n = max(2, int(np.ceil(length_m / corr_m)) + 1)
        self._grid = np.linspace(0.0, max(length_m, corr_m), n)
        self._values: dict[str, np.ndarray] = {}
        for idx, ap_id in enumerate(sorted(ap_ids)):
            rng = np.random.Generator(np.random.PCG64(
                np.random.SeedSequence((int(seed) & (2**64 - 1),
                                        self.STREAM, idx))))
            self._values[ap_id] = rng.normal(0.0, self.sigma_db, size=n)

    def draw(self, ap_id: str, s_m: float) -> float:
        if self.sigma_db == 0.0:
            return 0.0
        return float(np.interp(s_m, self._grid, self._values[ap_id]))

    def draws(self, ap_id: str, s_m: np.ndarray) -> np.ndarray:
        if self.sigma_db == 0.0:
            return np.zeros(len(s_m))
        return np.interp(s_m, self._grid, self._values[ap_id])
