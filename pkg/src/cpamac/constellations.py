"""Finite complex constellations: generators, transforms, and decodability.

All generators emit unit-average-power point sets, i.e. (1/N) * sum |x|^2 = 1.
Points are ordered; downstream index conventions (sum constellations, ML
demapping) rely on that ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Constellation",
    "SumConstellation",
    "make_psk",
    "make_qam",
    "make_8qam",
    "rotate",
    "sum_constellation",
    "is_uniquely_decodable",
    "load_constellation",
    "average_power",
    "by_name",
]

#: relative tolerance for "points coincide" checks, against the largest magnitude
DISTINCT_TOL = 1e-9


def _as_points(s) -> np.ndarray:
    """Accept a Constellation or any complex array-like."""
    if isinstance(s, Constellation):
        return s.points
    return np.asarray(s, dtype=np.complex128)


def average_power(points) -> float:
    pts = _as_points(points)
    return float(np.mean(np.abs(pts) ** 2))


def _min_pairwise_distance(points: np.ndarray) -> float:
    d = np.abs(points[:, None] - points[None, :])
    n = d.shape[0]
    d[np.arange(n), np.arange(n)] = np.inf
    return float(d.min())


@dataclass(frozen=True)
class Constellation:
    """Ordered list of complex points with a text label.

    Points must be finite, at least two, and pairwise distinct (relative
    tolerance 1e-9 against the largest magnitude).  Generators additionally
    guarantee unit average power; `load_constellation(..., normalize=False)`
    is the one escape hatch that can carry other powers.
    """

    points: np.ndarray
    label: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("constellation needs at least 2 points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("constellation points must be finite")
        scale = float(np.abs(pts).max())
        if scale == 0.0 or _min_pairwise_distance(pts) <= DISTINCT_TOL * scale:
            raise ValueError("constellation points must be pairwise distinct")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return int(self.points.size)


@dataclass(frozen=True)
class SumConstellation:
    """All pairwise sums a1*x1 + a2*x2, row-major over (k1, k2).

    Coincident sums are retained as duplicate entries; uniqueness is exactly
    the decodability predicate, not an invariant of this container.
    """

    points: np.ndarray
    scales: tuple[float, float]
    n1: int
    n2: int

    def point(self, k1: int, k2: int) -> complex:
        return complex(self.points[k1 * self.n2 + k2])

    @property
    def size(self) -> int:
        return int(self.points.size)


def make_psk(M: int) -> Constellation:
    """M-ary PSK on the unit circle.

    Phase convention: offset pi/M for M = 4 (so QPSK is {(+-1 +-i)/sqrt(2)}),
    no offset otherwise.  The reported metrics are invariant to a common
    rotation; the convention only pins CSV output bit-for-bit.
    """
    if not isinstance(M, (int, np.integer)) or M < 2:
        raise ValueError(f"PSK order must be an integer >= 2, got {M!r}")
    phi0 = np.pi / M if M == 4 else 0.0
    k = np.arange(M)
    label = {2: "bpsk", 4: "qpsk"}.get(int(M), f"{M}psk")
    return Constellation(np.exp(1j * (2 * np.pi * k / M + phi0)), label=label)


def make_qam(M: int) -> Constellation:
    """Square M-QAM on the odd-integer grid, scaled to unit average power.

    Points are ordered row-major over (in-phase level, quadrature level) with
    levels ascending; the separable demapper relies on this ordering.  For
    M = 16 the scale is exactly 1/sqrt(10).
    """
    if not isinstance(M, (int, np.integer)) or M < 4:
        raise ValueError(f"QAM order must be a perfect square >= 4, got {M!r}")
    m = int(round(np.sqrt(M)))
    if m * m != M:
        raise ValueError(f"QAM order must be a perfect square, got {M}")
    levels = np.arange(-(m - 1), m, 2).astype(float)
    pts = (levels[:, None] + 1j * levels[None, :]).ravel()
    scale = np.sqrt(np.mean(np.abs(pts) ** 2))
    return Constellation(pts / scale, label=f"{M}qam")


def make_8qam() -> Constellation:
    """Rectangular 8-QAM: 4 x 2 odd-integer grid, scale exactly 1/sqrt(6)."""
    re = np.array([-3.0, -1.0, 1.0, 3.0])
    im = np.array([-1.0, 1.0])
    pts = (re[:, None] + 1j * im[None, :]).ravel()
    return Constellation(pts / np.sqrt(6.0), label="8qam")


def rotate(s: Constellation, theta: float) -> Constellation:
    """Rotate every point by e^{i*theta}; preserves power and distances."""
    pts = _as_points(s) * np.exp(1j * theta)
    label = s.label if isinstance(s, Constellation) else ""
    return Constellation(pts, label=label)


def sum_constellation(s1, s2, a1: float, a2: float) -> SumConstellation:
    """Sum constellation of two scaled user constellations.

    Entry (k1, k2) is a1*x1(k1) + a2*x2(k2); ordering is row-major in
    (k1, k2).  Scales may be zero (degenerate); negatives are rejected.
    """
    p1 = _as_points(s1)
    p2 = _as_points(s2)
    if not (np.isfinite(a1) and np.isfinite(a2)) or a1 < 0 or a2 < 0:
        raise ValueError("scale factors must be finite and >= 0")
    pts = (a1 * p1[:, None] + a2 * p2[None, :]).ravel()
    return SumConstellation(points=pts, scales=(float(a1), float(a2)), n1=p1.size, n2=p2.size)


def is_uniquely_decodable(s1, s2, a1: float, a2: float, tol: float = DISTINCT_TOL) -> bool:
    """True iff the map (x1, x2) -> a1*x1 + a2*x2 is one-to-one.

    Points count as coincident when their distance is at most
    tol * max |sum point|.
    """
    if not tol > 0:
        raise ValueError("tol must be > 0")
    pts = sum_constellation(s1, s2, a1, a2).points
    scale = float(np.abs(pts).max())
    if scale == 0.0:
        return False
    return _min_pairwise_distance(pts) > tol * scale


def by_name(name: str) -> Constellation:
    """Builtin constellation by CLI name: bpsk, qpsk, 8psk, 16psk, 8qam, 16qam."""
    key = name.strip().lower()
    builders = {
        "bpsk": lambda: make_psk(2),
        "qpsk": lambda: make_psk(4),
        "8psk": lambda: make_psk(8),
        "16psk": lambda: make_psk(16),
        "8qam": make_8qam,
        "16qam": lambda: make_qam(16),
    }
    if key not in builders:
        raise ValueError(f"unknown constellation {name!r}; expected one of {sorted(builders)}")
    return builders[key]()


def load_constellation(path, normalize: bool = True, label: str | None = None) -> Constellation:
    """Read a constellation from text: one `re im` pair per line.

    `#` starts a comment, blank lines are ignored.  Points are scaled to unit
    average power unless normalize=False.  Parse failures raise ValueError
    naming the offending line.
    """
    path = Path(path)
    pts = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 2:
                raise ValueError(f"{path.name}:{lineno}: expected `<re> <im>`, got {raw.strip()!r}")
            try:
                re_part, im_part = float(fields[0]), float(fields[1])
            except ValueError:
                raise ValueError(f"{path.name}:{lineno}: could not parse numbers in {raw.strip()!r}") from None
            if not (np.isfinite(re_part) and np.isfinite(im_part)):
                raise ValueError(f"{path.name}:{lineno}: non-finite point")
            pts.append(complex(re_part, im_part))
    if len(pts) < 2:
        raise ValueError(f"{path.name}: needs at least 2 points, got {len(pts)}")
    arr = np.asarray(pts, dtype=np.complex128)
    if normalize:
        power = np.mean(np.abs(arr) ** 2)
        if power <= 0:
            raise ValueError(f"{path.name}: zero-power constellation cannot be normalized")
        arr = arr / np.sqrt(power)
    return Constellation(arr, label=label if label is not None else path.stem)
