"""Integer lattice geometry for spherical harmonic-analysis sweeps.

Everything here is exact: norms are compared as integer squared norms, and
the one genuinely real-valued quantity (the squared distance of a lattice
point from an axis line) is handled as an integer fraction.  No float enters
any membership decision.

The partition machinery slices the integer shells between two concentric
spheres of radii k and k+1 around a center n into bins indexed by squared
distance from the axis through n and the origin.  Bin q collects shell
offsets p in [0, 2k] whose sphere |m - n|^2 = k^2 + p meets the annular
cylinder at orthogonal distance d with floor(d^2) = q.  Bins live at
q = 0 .. 2k-1; anything with d^2 >= 2k is outside every bin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateCenterError,
    DimensionError,
    ParameterError,
    PreconditionError,
    RangeError,
    ResourceError,
)

# Hard cap on scanned cube points so a bad lambda cannot swallow the machine.
POINT_BUDGET = 60_000_000

_SHELL_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _check_dimension(N: int) -> int:
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise DimensionError(f"dimension must be a positive integer, got {N!r}")
    return int(N)


def _point(x, N: int | None = None) -> tuple[int, ...]:
    """Coerce to a tuple of Python ints, rejecting non-integer coordinates."""
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise ParameterError(f"expected a single lattice point, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        as_int = np.round(arr).astype(np.int64)
        if not np.array_equal(as_int, arr):
            raise ParameterError(f"lattice point has non-integer coordinates: {x!r}")
        arr = as_int
    if N is not None and arr.shape[0] != N:
        raise DimensionError(f"expected {N} coordinates, got {arr.shape[0]}")
    return tuple(int(c) for c in arr)


def _lexsorted(pts: np.ndarray) -> np.ndarray:
    if pts.shape[0] <= 1:
        return pts
    keys = tuple(pts[:, i] for i in range(pts.shape[1] - 1, -1, -1))
    return pts[np.lexsort(keys)]


def _cube(N: int, radius: int) -> np.ndarray:
    count = (2 * radius + 1) ** N
    if count > POINT_BUDGET:
        raise ResourceError(
            f"cube scan of {count} points exceeds the budget of {POINT_BUDGET}"
        )
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * N), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def enumerate_ball(lam: float, N: int) -> np.ndarray:
    """All lattice points with |n|^2 strictly below lam, lexicographically sorted.

    Returns an int64 array of shape (count, N).  The strict inequality means
    enumerate_ball(j, N) for integer j excludes the shell |n|^2 = j.
    """
    N = _check_dimension(N)
    if not math.isfinite(lam):
        raise RangeError(f"radius bound must be finite, got {lam!r}")
    if lam <= 0:
        return np.empty((0, N), dtype=np.int64)
    # largest representable squared norm under the strict bound
    jmax = math.ceil(lam) - 1
    radius = math.isqrt(jmax)
    pts = _cube(N, radius)
    norms = np.einsum("ij,ij->i", pts, pts)
    return _lexsorted(pts[norms <= jmax])


def sphere_shell(j: int, N: int) -> np.ndarray:
    """Lattice points with |n|^2 = j exactly, lexicographically sorted.

    Many j have no representation (already in two dimensions, e.g. j = 7);
    the returned array is then empty.
    """
    N = _check_dimension(N)
    if not isinstance(j, (int, np.integer)) or j < 0:
        raise RangeError(f"shell index must be a non-negative integer, got {j!r}")
    j = int(j)
    key = (N, j)
    cached = _SHELL_CACHE.get(key)
    if cached is not None:
        return cached
    pts = _cube(N, math.isqrt(j))
    norms = np.einsum("ij,ij->i", pts, pts)
    shell = _lexsorted(pts[norms == j])
    shell.setflags(write=False)
    _SHELL_CACHE[key] = shell
    return shell


@dataclass(frozen=True)
class ShellTable:
    """Shells 0..max_norm_sq in one dimension-N scan, indexed by squared norm."""

    dimension: int
    max_norm_sq: int
    shells: tuple[np.ndarray, ...]

    def shell(self, j: int) -> np.ndarray:
        if not 0 <= j <= self.max_norm_sq:
            raise RangeError(f"shell {j} outside table range [0, {self.max_norm_sq}]")
        return self.shells[j]

    def counts(self) -> np.ndarray:
        return np.array([s.shape[0] for s in self.shells], dtype=np.int64)

    def ball_count(self, lam: float) -> int:
        """Number of points with |n|^2 < lam, for lam <= max_norm_sq + 1."""
        if lam > self.max_norm_sq + 1:
            raise RangeError("table too small for the requested ball")
        jmax = min(self.max_norm_sq, math.ceil(lam) - 1)
        return int(sum(self.shells[j].shape[0] for j in range(jmax + 1)))


def build_shell_table(N: int, max_norm_sq: int) -> ShellTable:
    """Scan one cube and group points by squared norm; cheaper than per-shell scans."""
    N = _check_dimension(N)
    if max_norm_sq < 0:
        raise RangeError(f"max_norm_sq must be >= 0, got {max_norm_sq}")
    pts = _cube(N, math.isqrt(max_norm_sq))
    norms = np.einsum("ij,ij->i", pts, pts)
    keep = norms <= max_norm_sq
    pts, norms = pts[keep], norms[keep]
    order = np.argsort(norms, kind="stable")
    pts, norms = pts[order], norms[order]
    bounds = np.searchsorted(norms, np.arange(max_norm_sq + 2))
    shells = []
    for j in range(max_norm_sq + 1):
        shell = _lexsorted(pts[bounds[j] : bounds[j + 1]])
        shell.setflags(write=False)
        shells.append(shell)
    return ShellTable(dimension=N, max_norm_sq=max_norm_sq, shells=tuple(shells))


def shifted_shell(n, k: int, p: int) -> np.ndarray:
    """Points m with |m - n|^2 = k^2 + p for a ring offset p in [0, 2k]."""
    center = _point(n)
    if k < 1:
        raise RangeError(f"inner radius k must be >= 1, got {k}")
    if not 0 <= p <= 2 * k:
        raise RangeError(f"offset p must lie in [0, {2 * k}], got {p}")
    base = sphere_shell(k * k + p, len(center))
    return base + np.asarray(center, dtype=np.int64)


def region_index(m, n, k: int) -> int | None:
    """Cylinder-bin index of a ring point m around center n, or None.

    The bin index is floor(d^2) where d is the orthogonal distance of m from
    the line through the origin and n.  The tangent-plane base point of the
    bins sits on that line, so it drops out of the orthogonal component and
    d^2 = (|v|^2 |n|^2 - <v, n>^2) / |n|^2 with v = m - n, an exact integer
    fraction.  Ring membership k^2 <= |v|^2 < (k+1)^2 is a precondition.
    Returns None when d^2 >= 2k (beyond the outermost bin).
    """
    if k < 1:
        raise RangeError(f"inner radius k must be >= 1, got {k}")
    center = _point(n)
    pt = _point(m, len(center))
    nn = sum(c * c for c in center)
    if nn == 0:
        raise DegenerateCenterError("center must be nonzero to define an axis")
    v = tuple(a - b for a, b in zip(pt, center))
    vv = sum(c * c for c in v)
    if not k * k <= vv < (k + 1) * (k + 1):
        raise PreconditionError(
            f"point {pt} is not in the ring [{k}, {k + 1}) around {center}: |v|^2 = {vv}"
        )
    sv = sum(a * b for a, b in zip(v, center))
    num = vv * nn - sv * sv
    if num >= 2 * k * nn:
        return None
    return num // nn


def cardinality_bound(q: int, N: int) -> int:
    """Documented ceiling on the number of offsets one bin may carry."""
    return max(1, (2 ** N) * math.isqrt(q + 1))


@dataclass
class PartitionQ:
    """Assignment of every ring offset p in [0, 2k] to one cylinder bin.

    sets[q] lists the offsets assigned to bin q (q = 0 .. 2k-1); tags records
    how each offset got there: 'geometric' (only one bin has solutions),
    'canonical-dedup' (several bins had solutions, smallest q wins), or
    'fill' (no bin has solutions; placed to keep the partition total).
    """

    center: tuple[int, ...]
    k: int
    sets: list[list[int]]
    tags: dict[int, str] = field(default_factory=dict)
    degenerate: bool = False

    def bin_of(self, p: int) -> int:
        for q, ps in enumerate(self.sets):
            if p in ps:
                return q
        raise RangeError(f"offset {p} not in partition")

    def offsets(self) -> list[int]:
        return sorted(p for ps in self.sets for p in ps)


def _region_indices_bulk(vs: np.ndarray, center: np.ndarray, k: int) -> np.ndarray:
    """Bin indices for ring offsets vs (rows m - n); -1 marks out-of-bins."""
    nn = int(center @ center)
    sv = vs @ center
    vv = np.einsum("ij,ij->i", vs, vs)
    num = vv * nn - sv * sv
    q = num // nn
    q[num >= 2 * k * nn] = -1
    return q


def build_partition(n, k: int, table: ShellTable | None = None) -> PartitionQ:
    """Partition the ring offsets p in [0, 2k] into the 2k cylinder bins.

    Offsets whose shell has a solution in some bin go to the smallest such
    bin that still has head room under cardinality_bound; an offset with a
    single candidate bin always goes there.  (Plain smallest-bin assignment
    can stack more multi-bin offsets onto a low bin than the documented
    ceiling allows; the head-room rule keeps the ceiling exact while staying
    deterministic.)  Offsets with no solution anywhere are parked, then
    handed out one per still-empty bin in increasing q; a rare surplus (at
    most one when every geometric bin is a singleton) lands in the highest
    bin with head room so the result is always a full partition.
    """
    center = _point(n)
    if k < 1:
        raise RangeError(f"inner radius k must be >= 1, got {k}")
    N = len(center)
    offsets = list(range(2 * k + 1))
    if all(c == 0 for c in center):
        sets: list[list[int]] = [list(offsets)] + [[] for _ in range(2 * k - 1)]
        return PartitionQ(
            center=center,
            k=k,
            sets=sets,
            tags={p: "fill" for p in offsets},
            degenerate=True,
        )

    center_arr = np.asarray(center, dtype=np.int64)
    sets = [[] for _ in range(2 * k)]
    tags: dict[int, str] = {}
    pool: list[int] = []
    for p in offsets:
        j = k * k + p
        shell = table.shell(j) if table is not None else sphere_shell(j, N)
        if shell.shape[0] == 0:
            pool.append(p)
            continue
        qs = _region_indices_bulk(shell, center_arr, k)
        qs = qs[qs >= 0]
        if qs.size == 0:
            pool.append(p)
            continue
        distinct = np.unique(qs)
        q = int(distinct[0])
        for option in distinct:
            if len(sets[option]) < cardinality_bound(int(option), N):
                q = int(option)
                break
        sets[q].append(p)
        tags[p] = "geometric" if distinct.size == 1 else "canonical-dedup"

    for q in range(2 * k):
        if not pool:
            break
        if not sets[q]:
            p = pool.pop(0)
            sets[q].append(p)
            tags[p] = "fill"
    # surplus offsets with no solutions anywhere and no empty bin left
    for p in pool:
        for q in range(2 * k - 1, -1, -1):
            if len(sets[q]) < cardinality_bound(q, N):
                sets[q].append(p)
                sets[q].sort()
                tags[p] = "fill"
                break
        else:
            raise PreconditionError("no bin with head room; cannot complete partition")
    return PartitionQ(center=center, k=k, sets=sets, tags=tags)


def _clears_min_norm(mm: int, nn: int, k: int, q: int) -> bool:
    # Exact test of |m| >= lower(q, k, |n|) in the three center regimes,
    # with sqrt(nn) eliminated by squaring the negative branch.
    kp1 = k + 1
    if nn >= kp1 * kp1:
        L = mm - q - nn - kp1 * kp1
        return L >= 0 or L * L <= 4 * kp1 * kp1 * nn
    if nn > k * k:
        return mm >= q
    L = 4 * mm - q - nn - k * k
    return L >= 0 or L * L <= 4 * k * k * nn


@dataclass(frozen=True)
class MinNormReport:
    center: tuple[int, ...]
    k: int
    checked: int
    violations: tuple[tuple[int, int, tuple[int, ...]], ...]  # (q, p, m)
    applicable: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations


def min_norm_check(partition: PartitionQ, table: ShellTable | None = None) -> MinNormReport:
    """Verify the distance-from-origin floor for every solution in its bin.

    For each assigned offset p and each shell point m whose bin is exactly q,
    check |m| against the three-regime lower bound driven by (|n|, k, q).
    Offsets parked by the fill rule have no solutions in their bin, so they
    are vacuously fine and only contribute zero checks.
    """
    if partition.degenerate:
        return MinNormReport(partition.center, partition.k, 0, (), applicable=False)
    center = np.asarray(partition.center, dtype=np.int64)
    nn = int(center @ center)
    k = partition.k
    checked = 0
    violations: list[tuple[int, int, tuple[int, ...]]] = []
    N = len(partition.center)
    for q, ps in enumerate(partition.sets):
        for p in ps:
            j = k * k + p
            shell = table.shell(j) if table is not None else sphere_shell(j, N)
            if shell.shape[0] == 0:
                continue
            pts = shell + center
            qs = _region_indices_bulk(shell, center, k)
            hits = pts[qs == q]
            if hits.shape[0] == 0:
                continue
            mm = np.einsum("ij,ij->i", hits, hits)
            for val, m in zip(mm, hits):
                checked += 1
                if not _clears_min_norm(int(val), nn, k, q):
                    violations.append((q, p, tuple(int(c) for c in m)))
    return MinNormReport(partition.center, k, checked, tuple(violations))


def canonical_center(n) -> tuple[int, ...]:
    """Orbit representative under coordinate sign flips and permutations.

    Every quantity in this package that depends on a center n through norms
    and lattice shells is invariant under signed permutations of n, so sweeps
    may enumerate canonical centers only.
    """
    return tuple(sorted(abs(int(c)) for c in _point(n)))


def canonical_centers(N: int, max_norm: int) -> list[tuple[int, ...]]:
    """All canonical representatives with 0 < |n| <= max_norm."""
    N = _check_dimension(N)
    pts = _cube(N, max_norm)
    norms = np.einsum("ij,ij->i", pts, pts)
    keep = (norms > 0) & (norms <= max_norm * max_norm)
    pts = pts[keep]
    reps = {canonical_center(p) for p in pts}
    return sorted(reps)


def signed_permutations(n) -> list[tuple[int, ...]]:
    """The full orbit of n under coordinate permutations and sign flips."""
    from itertools import permutations, product

    center = _point(n)
    orbit = set()
    for perm in permutations(center):
        nonzero = [i for i, c in enumerate(perm) if c != 0]
        for signs in product((1, -1), repeat=len(nonzero)):
            pt = list(perm)
            for i, s in zip(nonzero, signs):
                pt[i] *= s
            orbit.add(tuple(pt))
    return sorted(orbit)
