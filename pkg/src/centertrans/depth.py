"""Exact Tukey (half-space) depth for weighted atomic measures.

Point depth is exact in dimensions 1-3 and a certified upper bound
beyond; the planar case drives everything else (regions, depth of a
measure, the transversal search) and is built on integer sign tests:
atom offsets are rescaled to integer vectors, so every orientation
predicate is decided exactly and depth values come out as rationals
over the common weight denominator.

The superlevel region {x : depth(x) >= tau} in the plane is cut out by
halfplanes normal to atom differences (plus the coordinate axes, which
keep degenerate clouds bounded): between consecutive such normals the
projection order of the atoms is constant, so the supporting threshold
rotates through an atom and the intermediate constraints are implied by
the two bounding ones.  The depth of a measure is then the largest
achievable mass level with a nonempty region, found by binary search
over the finite level set.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import polygon
from .cloud import WeightedPointCloud, _as_fraction
from .errors import DomainError, InternalConsistencyError
from .serialize import frac_str

UPPER = "upper"
LOWER = "lower"


def thresholds(n):
    """(Rado bound, improved bound) for marginals of dimension n."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    rado = Fraction(1, n + 1)
    return rado, rado + Fraction(1, 3 * (n + 1) ** 3)


@dataclass(frozen=True)
class DepthValue:
    value: Fraction
    witness_direction: tuple = None
    exact: bool = True

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise DomainError("depth %s outside [0, 1]" % (self.value,))


@dataclass(frozen=True)
class DepthRegion:
    """Convex superlevel set in the plane, in canonical vertex form."""

    vertices: tuple
    tau: Fraction = None

    @property
    def dim(self):
        return 2

    @property
    def kind(self):
        k = len(self.vertices)
        if k == 0:
            return "empty"
        if k == 1:
            return "point"
        if k == 2:
            return "segment"
        return "polygon"

    def is_empty(self):
        return not self.vertices

    def locate(self, point):
        return polygon.locate_point(self.vertices, tuple(_as_fraction(c) for c in point))

    def contains(self, point):
        return self.locate(point) != "outside"

    def centroid(self):
        return polygon.centroid(self.vertices)

    def area(self):
        return abs(polygon.area2(self.vertices)) / 2

    def to_dict(self):
        d = {
            "kind": self.kind,
            "vertices": [[frac_str(x), frac_str(y)] for x, y in self.vertices],
        }
        if self.tau is not None:
            d["tau"] = frac_str(self.tau)
        return d


def halfspace_mass(cloud, v, a, side=UPPER):
    """Exact weight of the closed half-space {<x, v> >= a} (or <=)."""
    v = tuple(_as_fraction(c) for c in v)
    if len(v) != cloud.dim:
        raise DomainError("direction dimension mismatch")
    if all(c == 0 for c in v):
        raise DomainError("direction must be nonzero")
    if side not in (UPPER, LOWER):
        raise DomainError("side must be 'upper' or 'lower'")
    a = _as_fraction(a)
    total = Fraction(0)
    for p, w in cloud.atoms:
        s = sum(pc * vc for pc, vc in zip(p, v))
        if (side == UPPER and s >= a) or (side == LOWER and s <= a):
            total += w
    return total


def _int_offsets(cloud, x):
    """Integer rescalings of p - x plus the weight mass sitting at x.

    Returns (at_x_weight, [(u, w_int), ...], D) where u is a nonzero
    integer vector positively proportional to p - x.
    """
    xs = tuple(_as_fraction(c) for c in x)
    if len(xs) != cloud.dim:
        raise DomainError("point dimension mismatch")
    c_scale, ipts = cloud.int_points
    d_den, ws = cloud.int_weights
    s = math.lcm(c_scale, *(c.denominator for c in xs))
    m = s // c_scale
    sx = [int(c * s) for c in xs]
    at_x = 0
    offsets = []
    for pt, w in zip(ipts, ws):
        u = tuple(m * pc - xc for pc, xc in zip(pt, sx))
        if all(c == 0 for c in u):
            at_x += w
        else:
            offsets.append((u, w))
    return at_x, offsets, d_den


def _primitive(vec):
    g = math.gcd(*(abs(c) for c in vec))
    return tuple(c // g for c in vec)


def _canonical_line(vec):
    """Primitive representative of the line through +-vec."""
    p = _primitive(vec)
    for c in p:
        if c > 0:
            return p
        if c < 0:
            return tuple(-x for x in p)
    return p


def _depth_1d(cloud, x):
    x0 = _as_fraction(x[0])
    upper = Fraction(0)
    lower = Fraction(0)
    for (p,), w in cloud.atoms:
        if p >= x0:
            upper += w
        if p <= x0:
            lower += w
    if upper <= lower:
        return DepthValue(upper, (Fraction(1),))
    return DepthValue(lower, (Fraction(-1),))


def _depth_2d(cloud, x):
    at_x, offsets, d_den = _int_offsets(cloud, x)
    if not offsets:
        return DepthValue(Fraction(1), None)
    lines = {_canonical_line(u) for u, _ in offsets}
    best = None
    for u in lines:
        ux, uy = u
        s_left = s_right = b_plus = b_minus = 0
        for (lx, ly), w in offsets:
            cr = ux * ly - uy * lx
            if cr > 0:
                s_left += w
            elif cr < 0:
                s_right += w
            elif ux * lx + uy * ly > 0:
                b_plus += w
            else:
                b_minus += w
        val = at_x + min(s_left, s_right) + min(b_plus, b_minus)
        if best is None or val < best[0]:
            best = (val, u, s_left <= s_right, b_plus <= b_minus)
    val, u, left_side, plus_side = best
    ux, uy = u
    # witness = K * (side normal) + sigma * u; K dominates every nonzero
    # cross product (integers, so |cross| >= 1) and sigma settles atoms on
    # the line itself
    k_big = 1 + max(abs(ux * lx + uy * ly) for (lx, ly), _ in offsets)
    v0 = (-uy, ux) if left_side else (uy, -ux)
    sigma = 1 if plus_side else -1
    witness = (
        Fraction(k_big * v0[0] + sigma * ux),
        Fraction(k_big * v0[1] + sigma * uy),
    )
    return DepthValue(Fraction(val, d_den), witness)


def _cross3(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _depth_3d(cloud, x):
    at_x, offsets, d_den = _int_offsets(cloud, x)
    if not offsets:
        return DepthValue(Fraction(1), None)
    us = [u for u, _ in offsets]
    best = None
    found_pair = False
    for j, k in combinations(range(len(us)), 2):
        v0 = _cross3(us[j], us[k])
        if v0 == (0, 0, 0):
            continue
        found_pair = True
        a_dir = _cross3(us[k], v0)
        b_dir = _cross3(v0, us[j])
        for s in (1, -1):
            for t in (1, -1):
                w_dir = tuple(s * a + t * b for a, b in zip(a_dir, b_dir))
                z_dir = _cross3(v0, w_dir)
                base = at_x
                zz_plus = zz_minus = 0
                for u, wt in offsets:
                    d0 = _dot(u, v0)
                    if d0 > 0:
                        base += wt
                    elif d0 == 0:
                        d1 = _dot(u, w_dir)
                        if d1 > 0:
                            base += wt
                        elif d1 == 0:
                            # u is orthogonal to v0 and w, hence parallel to z
                            if _dot(u, z_dir) > 0:
                                zz_plus += wt
                            else:
                                zz_minus += wt
                for sigma, extra in ((1, zz_plus), (-1, zz_minus)):
                    val = base + extra
                    if best is None or val < best[0]:
                        best = (val, v0, w_dir, z_dir, sigma)
    if not found_pair:
        # all offsets on one line through x: one-dimensional split
        u = us[0]
        for sgn in (1, -1):
            val = at_x + sum(wt for uu, wt in offsets if sgn * _dot(uu, u) > 0)
            if best is None or val < best[0]:
                best = (val, None, None, None, sgn)
        val, _, _, _, sgn = best
        witness = tuple(Fraction(sgn * c) for c in u)
        return DepthValue(Fraction(val, d_den), witness)
    val, v0, w_dir, z_dir, sigma = best
    m_big = 1 + max(abs(_dot(u, w_dir)) for u in us) + max(abs(_dot(u, z_dir)) for u in us)
    witness = tuple(
        Fraction(m_big * m_big * a + m_big * b + sigma * c)
        for a, b, c in zip(v0, w_dir, z_dir)
    )
    return DepthValue(Fraction(val, d_den), witness)


def _nullspace_direction(rows, dim):
    """Integer normal to the span of (dim-1) integer vectors, or None."""
    mat = [[Fraction(c) for c in r] for r in rows]
    n_rows = len(mat)
    piv_cols = []
    r = 0
    for col in range(dim):
        piv = None
        for i in range(r, n_rows):
            if mat[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(n_rows):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        piv_cols.append(col)
        r += 1
        if r == n_rows:
            break
    if r != dim - 1:
        return None
    free = next(c for c in range(dim) if c not in piv_cols)
    vec = [Fraction(0)] * dim
    vec[free] = Fraction(1)
    for i, col in enumerate(piv_cols):
        vec[col] = -mat[i][free]
    den = math.lcm(*(v.denominator for v in vec))
    return _primitive(tuple(int(v * den) for v in vec))


def _depth_upper_bound(cloud, x, samples=512, subset_cap=2000, seed=0):
    """Certified upper bound for dim > 3: min mass over candidate normals."""
    at_x, offsets, d_den = _int_offsets(cloud, x)
    if not offsets:
        return DepthValue(Fraction(1), None, exact=False)
    dim = cloud.dim
    us = [u for u, _ in offsets]
    candidates = []
    if math.comb(len(us), dim - 1) > subset_cap:
        rng = np.random.default_rng(seed)
        seen = set()
        while len(seen) < subset_cap:
            pick = tuple(sorted(rng.choice(len(us), size=dim - 1, replace=False)))
            seen.add(pick)
        subsets = sorted(seen)
    else:
        subsets = list(combinations(range(len(us)), dim - 1))
    for subset in subsets:
        v = _nullspace_direction([us[i] for i in subset], dim)
        if v is not None:
            candidates.append(v)
            candidates.append(tuple(-c for c in v))
    rng = np.random.default_rng(seed + 1)
    for row in rng.standard_normal((samples, dim)):
        f = [Fraction(float(c)) for c in row]
        den = math.lcm(*(c.denominator for c in f))
        v = tuple(int(c * den) for c in f)
        if any(v):
            candidates.append(v)
    best = None
    for v in candidates:
        val = at_x + sum(wt for u, wt in offsets if _dot(u, v) >= 0)
        if best is None or val < best[0]:
            best = (val, v)
    val, v = best
    return DepthValue(Fraction(val, d_den), tuple(Fraction(c) for c in v), exact=False)


def tukey_depth(cloud, x):
    """Exact infimum mass over closed half-spaces containing x (dim <= 3).

    In dimension > 3 the result is a certified upper bound with
    exact=False.  The witness direction, when present, achieves the
    reported value exactly: halfspace_mass(cloud, witness, <x, witness>)
    equals DepthValue.value.
    """
    x = tuple(_as_fraction(c) for c in x)
    if len(x) != cloud.dim:
        raise DomainError("point dimension mismatch")
    if cloud.dim == 1:
        return _depth_1d(cloud, x)
    if cloud.dim == 2:
        return _depth_2d(cloud, x)
    if cloud.dim == 3:
        return _depth_3d(cloud, x)
    return _depth_upper_bound(cloud, x)


class _DirectionTable:
    """Per-cloud data for planar region queries.

    For every direction normal to an atom difference (both orientations,
    plus the coordinate axes) the atom projections are pre-sorted with
    cumulative integer weights, so superlevel thresholds at any level are
    binary searches.
    """

    def __init__(self, cloud):
        if cloud.dim != 2:
            raise DomainError("direction table requires a planar cloud")
        self.cloud = cloud
        self.coord_scale, ipts = cloud.int_points
        self.weight_den, ws = cloud.int_weights
        dirs = set()
        for (a, b) in combinations(sorted(set(ipts)), 2):
            d = (a[0] - b[0], a[1] - b[1])
            n = _primitive((-d[1], d[0]))
            dirs.add(n)
            dirs.add((-n[0], -n[1]))
        dirs.update([(1, 0), (-1, 0), (0, 1), (0, -1)])
        self.directions = sorted(dirs)
        self.proj_vals = []
        self.cum_weights = []
        levels = set()
        for v in self.directions:
            acc = {}
            for pt, w in zip(ipts, ws):
                key = v[0] * pt[0] + v[1] * pt[1]
                acc[key] = acc.get(key, 0) + w
            vals = sorted(acc, reverse=True)
            cums = []
            run = 0
            for val in vals:
                run += acc[val]
                cums.append(run)
            self.proj_vals.append(vals)
            self.cum_weights.append(cums)
            levels.update(cums)
        self.levels = sorted(levels)

    def threshold(self, idx, level_num, level_den):
        """Largest projection s with mass{<y,v> >= s} >= level."""
        # smallest integer target with cum >= level * weight_den
        target = -((-level_num * self.weight_den) // level_den)
        cums = self.cum_weights[idx]
        lo, hi = 0, len(cums) - 1
        if cums[hi] < target:
            return None
        while lo < hi:
            mid = (lo + hi) // 2
            if cums[mid] >= target:
                hi = mid
            else:
                lo = mid + 1
        return self.proj_vals[idx][lo]

    def halfplanes(self, tau):
        tau = _as_fraction(tau)
        out = []
        for i, v in enumerate(self.directions):
            s = self.threshold(i, tau.numerator, tau.denominator)
            if s is None:
                return None  # level above the total mass: empty region
            out.append((v[0], v[1], Fraction(s, self.coord_scale)))
        return out

    def start_box(self):
        c = self.coord_scale
        _, ipts = self.cloud.int_points
        xs = [p[0] for p in ipts]
        ys = [p[1] for p in ipts]
        lo_x = Fraction(min(xs), c) - 1
        hi_x = Fraction(max(xs), c) + 1
        lo_y = Fraction(min(ys), c) - 1
        hi_y = Fraction(max(ys), c) + 1
        return ((lo_x, lo_y), (hi_x, lo_y), (hi_x, hi_y), (lo_x, hi_y))


def _direction_table(cloud):
    table = getattr(cloud, "_direction_table", None)
    if table is None:
        table = _DirectionTable(cloud)
        cloud._direction_table = table
    return table


def _region_vertices(cloud, tau, canonical=True):
    table = _direction_table(cloud)
    planes = table.halfplanes(tau)
    if planes is None:
        return ()
    return polygon.clip_many(table.start_box(), planes, canonical=canonical)


def depth_region(cloud, tau):
    """Exact convex region {x : tukey_depth(cloud, x) >= tau} in the plane."""
    if cloud.dim != 2:
        raise DomainError("depth_region requires a planar cloud")
    tau = _as_fraction(tau)
    if not 0 < tau <= 1:
        raise DomainError("tau must lie in (0, 1]")
    return DepthRegion(_region_vertices(cloud, tau), tau=tau)


def _max_depth_2d(cloud):
    table = _direction_table(cloud)
    levels = table.levels
    d_den = table.weight_den

    def feasible(level_int):
        return bool(_region_vertices(cloud, Fraction(level_int, d_den), canonical=False))

    lo, hi = 0, len(levels) - 1
    if feasible(levels[hi]):
        lo = hi
    else:
        # invariant: feasible(levels[lo]), not feasible(levels[hi])
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if feasible(levels[mid]):
                lo = mid
            else:
                hi = mid
    tau = Fraction(levels[lo], d_den)
    region = depth_region(cloud, tau)
    if region.is_empty():
        raise InternalConsistencyError("achieved depth level has empty region")
    return DepthValue(tau, None), region.centroid()


def _depth_1d_measure(cloud):
    mass = {}
    for (p,), w in cloud.atoms:
        mass[p] = mass.get(p, Fraction(0)) + w
    vals = sorted(mass)
    prefix = {}
    run = Fraction(0)
    for v in vals:
        run += mass[v]
        prefix[v] = run
    suffix = {}
    run = Fraction(0)
    for v in reversed(vals):
        run += mass[v]
        suffix[v] = run
    # the maximum of min(mass <= x, mass >= x) is attained at an atom
    best = max(min(prefix[v], suffix[v]) for v in vals)
    lo = min(v for v in vals if prefix[v] >= best)
    hi = max(v for v in vals if suffix[v] >= best)
    return DepthValue(best, None), ((lo + hi) / 2,)


def depth_of_measure(cloud, allow_approximate=False, seed=0):
    """(max point depth, a maximizing point); exact for dim <= 2.

    Higher dimensions use seeded heuristic ascent and must be requested
    explicitly via allow_approximate.
    """
    if cloud.dim == 1:
        return _depth_1d_measure(cloud)
    if cloud.dim == 2:
        return _max_depth_2d(cloud)
    if not allow_approximate:
        raise DomainError(
            "exact depth of a measure is only available in dimensions 1 and 2"
        )
    return _ascent_depth(cloud, seed)


def _ascent_depth(cloud, seed, steps=200):
    dim = cloud.dim
    pts = cloud.points()
    ws = cloud.weights()
    x = [sum(p[i] * w for p, w in zip(pts, ws)) for i in range(dim)]
    cur = tukey_depth(cloud, x)
    spread = max(
        float(max(p[i] for p in pts) - min(p[i] for p in pts)) for i in range(dim)
    )
    radius = spread / 2 if spread else 1.0
    rng = np.random.default_rng(seed)
    for _ in range(steps):
        delta = rng.standard_normal(dim)
        cand = [
            xi + Fraction(float(d * radius)).limit_denominator(10 ** 9)
            for xi, d in zip(x, delta)
        ]
        val = tukey_depth(cloud, cand)
        if val.value > cur.value:
            x, cur = cand, val
        else:
            radius *= 0.9
    return DepthValue(cur.value, cur.witness_direction, exact=False), tuple(x)


def depth_of_measure_by_candidates(cloud):
    """Planar depth of a measure by direct candidate enumeration.

    Evaluates the exact depth at every atom and every intersection point
    of lines through atom pairs (the depth is piecewise constant on that
    arrangement and upper semicontinuous, so the maximum is attained
    there).  Quartic in the atom count; used to cross-validate the level
    search on small clouds.
    """
    if cloud.dim != 2:
        raise DomainError("candidate enumeration requires a planar cloud")
    pts = sorted(set(cloud.points()))
    candidates = set(pts)
    lines = []
    for a, b in combinations(pts, 2):
        d = (b[0] - a[0], b[1] - a[1])
        # line as (nx, ny, c): nx*x + ny*y = c
        lines.append((-d[1], d[0], -d[1] * a[0] + d[0] * a[1]))
    for (n1x, n1y, c1), (n2x, n2y, c2) in combinations(lines, 2):
        det = n1x * n2y - n1y * n2x
        if det == 0:
            continue
        candidates.add(((c1 * n2y - c2 * n1y) / det, (n1x * c2 - n2x * c1) / det))
    best_val = None
    best_pt = None
    for cand in sorted(candidates):
        val = tukey_depth(cloud, cand).value
        if best_val is None or val > best_val:
            best_val, best_pt = val, cand
    return DepthValue(best_val, None), best_pt


def marginal(cloud, frame, digits=None):
    """Pushforward of the cloud onto the frame's coordinate system.

    Frame rows are quantized to rationals (default 12 decimal digits;
    exact rational rows pass through unchanged), coordinates are computed
    exactly, and coincident images merge with summed weights.
    """
    if frame.ambient != cloud.dim:
        raise DomainError(
            "frame ambient %d does not match cloud dim %d" % (frame.ambient, cloud.dim)
        )
    rows = frame.quantized_rows() if digits is None else frame.quantized_rows(digits)
    merged = {}
    for p, w in cloud.atoms:
        y = tuple(sum(rc * pc for rc, pc in zip(row, p)) for row in rows)
        merged[y] = merged.get(y, Fraction(0)) + w
    atoms = [(y, merged[y]) for y in sorted(merged)]
    return WeightedPointCloud(frame.n, atoms)
