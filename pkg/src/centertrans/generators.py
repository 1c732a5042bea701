"""Deterministic instance generators.

All families quantize coordinates to exact rationals and produce weights
that sum to one exactly, so generated files feed the exact machinery
directly and identical seeds reproduce identical instances byte for
byte.
"""

import math
from fractions import Fraction

import numpy as np

from .cloud import WeightedPointCloud
from .errors import DomainError

FAMILIES = (
    "uniform-ball",
    "gaussian-quantized",
    "simplex-atoms",
    "coplanar",
    "adversarial-three-cluster",
)

# exact rational rotations used to scramble embedded instances
_PYTHAGOREAN = (
    (Fraction(3, 5), Fraction(4, 5)),
    (Fraction(5, 13), Fraction(12, 13)),
    (Fraction(8, 17), Fraction(15, 17)),
    (Fraction(7, 25), Fraction(24, 25)),
)


def _quantize(x, denominator):
    return Fraction(round(float(x) * denominator), denominator)


def _weights(rng, count, mode):
    if mode == "equal":
        return [Fraction(1, count)] * count
    if mode == "random":
        raw = [int(v) for v in rng.integers(1, 10, size=count)]
        total = sum(raw)
        return [Fraction(v, total) for v in raw]
    raise DomainError("unknown weight mode %r" % (mode,))


def _rational_rotation(rng, dim, sweeps=2):
    """Exact orthogonal matrix from random Pythagorean Givens rotations."""
    q = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    for _ in range(sweeps * dim):
        i, j = rng.choice(dim, size=2, replace=False)
        c, s = _PYTHAGOREAN[int(rng.integers(len(_PYTHAGOREAN)))]
        if rng.integers(2):
            s = -s
        for row in q:
            a, b = row[i], row[j]
            row[i] = c * a - s * b
            row[j] = s * a + c * b
    return q


def _embed(points2, ambient, rng, rotate):
    """Map planar rational points into R^ambient, optionally scrambled by
    an exact rational rotation (the support stays exactly coplanar)."""
    pts = [tuple(p) + (Fraction(0),) * (ambient - 2) for p in points2]
    if not rotate:
        return pts
    q = _rational_rotation(rng, ambient)
    return [
        tuple(sum(q[r][c] * p[c] for c in range(ambient)) for r in range(ambient))
        for p in pts
    ]


def generate_cloud(
    family,
    seed=0,
    atoms=12,
    dim=2,
    ambient=None,
    denominator=10000,
    weight_mode="equal",
    spread=0.05,
    rotate=True,
):
    """One deterministic instance of the named family."""
    if family not in FAMILIES:
        raise DomainError("unknown family %r (choose from %s)" % (family, ", ".join(FAMILIES)))
    rng = np.random.default_rng(seed)
    if family == "simplex-atoms":
        n = dim
        pts = [tuple(Fraction(0) for _ in range(n))]
        for i in range(n):
            e = [Fraction(0)] * n
            e[i] = Fraction(1)
            pts.append(tuple(e))
        w = Fraction(1, n + 1)
        return WeightedPointCloud(n, [(p, w) for p in pts])
    if family == "uniform-ball":
        pts = []
        while len(pts) < atoms:
            cand = rng.uniform(-1.0, 1.0, size=dim)
            if float(np.dot(cand, cand)) <= 1.0:
                pts.append(tuple(_quantize(c, denominator) for c in cand))
        ws = _weights(rng, atoms, weight_mode)
        return WeightedPointCloud(dim, list(zip(pts, ws)))
    if family == "gaussian-quantized":
        sample = rng.standard_normal((atoms, dim))
        pts = [tuple(_quantize(c, denominator) for c in row) for row in sample]
        ws = _weights(rng, atoms, weight_mode)
        return WeightedPointCloud(dim, list(zip(pts, ws)))
    if family == "coplanar":
        ambient = ambient or max(3, dim)
        if ambient < 2:
            raise DomainError("coplanar needs ambient >= 2")
        sample = rng.standard_normal((atoms, 2))
        pts2 = [tuple(_quantize(c, denominator) for c in row) for row in sample]
        pts = _embed(pts2, ambient, rng, rotate)
        ws = _weights(rng, atoms, weight_mode)
        return WeightedPointCloud(ambient, list(zip(pts, ws)))
    # adversarial-three-cluster: three tight clusters, total weight 1/3 each
    per = max(1, atoms // 3)
    centers = [
        (math.cos(math.pi / 2), math.sin(math.pi / 2)),
        (math.cos(math.pi * 7 / 6), math.sin(math.pi * 7 / 6)),
        (math.cos(math.pi * 11 / 6), math.sin(math.pi * 11 / 6)),
    ]
    pts2 = []
    for cx, cy in centers:
        jitter = rng.standard_normal((per, 2)) * spread
        for jx, jy in jitter:
            pts2.append(
                (_quantize(cx + jx, denominator), _quantize(cy + jy, denominator))
            )
    w = Fraction(1, 3 * per)
    target_dim = ambient or dim
    if target_dim > 2:
        pts = _embed(pts2, target_dim, rng, rotate)
    else:
        pts = pts2
    return WeightedPointCloud(target_dim, [(p, w) for p in pts])


def centerline_suite(count=20, master_seed=20250809):
    """Seeded clouds in R^3 (<= 20 atoms) for the m=1, n=2 verification."""
    seeds = np.random.SeedSequence(master_seed).spawn(count)
    clouds = []
    for i, seq in enumerate(seeds):
        rng = np.random.default_rng(seq)
        sub = int(rng.integers(0, 10 ** 9))
        k = int(rng.integers(12, 21))
        if i % 5 == 4:
            clouds.append(
                generate_cloud(
                    "uniform-ball", seed=sub, atoms=k, dim=3, weight_mode="random"
                )
            )
        else:
            clouds.append(
                generate_cloud("gaussian-quantized", seed=sub, atoms=k, dim=3)
            )
    return clouds


def maintheorem_suite(count=10, master_seed=20250810):
    """Seeded two-cloud instances in R^7 (<= 12 atoms) for m=2, n=2."""
    seeds = np.random.SeedSequence(master_seed).spawn(count)
    instances = []
    for seq in seeds:
        rng = np.random.default_rng(seq)
        s1 = int(rng.integers(0, 10 ** 9))
        s2 = int(rng.integers(0, 10 ** 9))
        k = int(rng.integers(9, 12))
        c1 = generate_cloud("gaussian-quantized", seed=s1, atoms=k, dim=7)
        c2 = generate_cloud("gaussian-quantized", seed=s2, atoms=k, dim=7)
        instances.append((c1, c2))
    return instances
