from fractions import Fraction

import numpy as np
import pytest

from centertrans.cloud import OrthoFrame, WeightedPointCloud, apply_affine
from centertrans.depth import (
    depth_of_measure,
    depth_of_measure_by_candidates,
    depth_region,
    halfspace_mass,
    marginal,
    thresholds,
    tukey_depth,
)
from centertrans.errors import DomainError

F = Fraction


def cloud_1d(values, weights=None):
    values = list(values)
    if weights is None:
        weights = [F(1, len(values))] * len(values)
    return WeightedPointCloud(1, [((F(v),), w) for v, w in zip(values, weights)])


def triangle_cloud():
    pts = [(0, 0), (1, 0), (0, 1)]
    return WeightedPointCloud(2, [(tuple(map(F, p)), F(1, 3)) for p in pts])


def random_cloud(rng, n_atoms, dim=2, coord_scale=100):
    pts = rng.integers(-coord_scale, coord_scale + 1, size=(n_atoms, dim))
    raw = rng.integers(1, 10, size=n_atoms)
    total = int(raw.sum())
    atoms = [
        (tuple(F(int(c), coord_scale) for c in p), F(int(w), total))
        for p, w in zip(pts, raw)
    ]
    return WeightedPointCloud(dim, atoms)


def test_halfspace_mass_examples():
    c = cloud_1d([0, 1, 2])
    assert halfspace_mass(c, (1,), 1, "upper") == F(2, 3)
    assert halfspace_mass(c, (1,), -100, "upper") == 1
    t = triangle_cloud()
    assert halfspace_mass(t, (1, 0), 1, "upper") == F(1, 3)
    assert halfspace_mass(t, (1, 0), 0, "lower") == F(2, 3)


def test_halfspace_mass_errors():
    with pytest.raises(DomainError):
        halfspace_mass(triangle_cloud(), (0, 0), 0)
    with pytest.raises(DomainError):
        halfspace_mass(triangle_cloud(), (1,), 0)


def test_tukey_depth_1d():
    c = cloud_1d([0, 1, 2])
    assert tukey_depth(c, (F(1),)).value == F(2, 3)
    assert tukey_depth(c, (F(0),)).value == F(1, 3)
    assert tukey_depth(c, (F(5),)).value == 0
    assert tukey_depth(c, (F(1, 2),)).value == F(1, 3)


def test_tukey_depth_triangle():
    t = triangle_cloud()
    assert tukey_depth(t, (F(1, 3), F(1, 3))).value == F(1, 3)
    assert tukey_depth(t, (F(0), F(0))).value == F(1, 3)
    assert tukey_depth(t, (F(2), F(2))).value == 0
    assert tukey_depth(t, (F(-1, 100), F(1, 2))).value == 0


def test_depth_at_atom_bounded_by_weight():
    rng = np.random.default_rng(5)
    for _ in range(10):
        c = random_cloud(rng, 8)
        for p, w in c.atoms:
            assert tukey_depth(c, p).value >= w


def test_witness_achieves_depth():
    rng = np.random.default_rng(17)
    for _ in range(10):
        c = random_cloud(rng, 9)
        probe = c.atoms[0][0]
        dv = tukey_depth(c, probe)
        assert dv.witness_direction is not None
        level = sum(w * v for w, v in zip(probe, dv.witness_direction))
        assert halfspace_mass(c, dv.witness_direction, level, "upper") == dv.value


def test_oracle_dominance_sampled_directions():
    rng = np.random.default_rng(23)
    c = random_cloud(rng, 10)
    probes = [c.atoms[i][0] for i in range(3)]
    dirs = rng.standard_normal((1000, 2))
    pts = np.array([[float(x) for x in p] for p in c.points()])
    ws = np.array([float(w) for w in c.weights()])
    for probe in probes:
        exact = tukey_depth(c, probe).value
        rel = pts - np.array([float(x) for x in probe])
        dots = dirs @ rel.T
        masses = (ws * (dots >= -1e-12)).sum(axis=1)
        assert float(exact) <= masses.min() + 1e-9


def test_affine_invariance():
    rng = np.random.default_rng(4)
    c = random_cloud(rng, 8)
    mat = [[F(3, 5), F(-4, 5)], [F(4, 5), F(3, 5)]]  # rational rotation
    shift = (F(7, 3), F(-2))
    tc = apply_affine(c, mat, shift)
    for i in range(4):
        x = c.atoms[i][0]
        tx = tuple(
            sum(mat[r][j] * x[j] for j in range(2)) + shift[r] for r in range(2)
        )
        assert tukey_depth(c, x).value == tukey_depth(tc, tx).value
    # a shear too (not an isometry)
    mat = [[F(1), F(2)], [F(0), F(1)]]
    tc = apply_affine(c, mat)
    x = c.atoms[0][0]
    tx = (x[0] + 2 * x[1], x[1])
    assert tukey_depth(c, x).value == tukey_depth(tc, tx).value


def test_depth_3d_exact():
    # unit tetrahedron, equal weights: center has depth 1/4, vertex 1/4
    pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    c = WeightedPointCloud(3, [(tuple(map(F, p)), F(1, 4)) for p in pts])
    center = (F(1, 4), F(1, 4), F(1, 4))
    assert tukey_depth(c, center).value == F(1, 4)
    assert tukey_depth(c, (F(0), F(0), F(0))).value == F(1, 4)
    assert tukey_depth(c, (F(2), F(2), F(2))).value == 0
    # witness achieves the value
    dv = tukey_depth(c, center)
    level = sum(w * v for w, v in zip(center, dv.witness_direction))
    assert halfspace_mass(c, dv.witness_direction, level) == dv.value


def test_depth_3d_collinear_cloud():
    pts = [(0, 0, 0), (1, 1, 1), (2, 2, 2)]
    c = WeightedPointCloud(3, [(tuple(map(F, p)), F(1, 3)) for p in pts])
    assert tukey_depth(c, (F(1), F(1), F(1))).value == F(2, 3)
    assert tukey_depth(c, (F(0), F(0), F(0))).value == F(1, 3)


def test_depth_dim4_upper_bound():
    pts = [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    c = WeightedPointCloud(4, [(tuple(map(F, p)), F(1, 5)) for p in pts])
    dv = tukey_depth(c, (F(0), F(0), F(0), F(0)))
    assert not dv.exact
    assert dv.value >= F(1, 5)  # true depth is 1/5; bound cannot go below
    assert dv.value <= F(2, 5)


def test_depth_of_measure_1d():
    dv, pt = depth_of_measure(cloud_1d([0, 1, 2]))
    assert dv.value == F(2, 3) and pt == (1,)
    dv, pt = depth_of_measure(cloud_1d([0, 1], [F(1, 2), F(1, 2)]))
    assert dv.value == F(1, 2) and pt == (F(1, 2),)


def test_depth_of_measure_triangle():
    dv, pt = depth_of_measure(triangle_cloud())
    assert dv.value == F(1, 3)
    assert tukey_depth(triangle_cloud(), pt).value == F(1, 3)


def test_depth_of_measure_matches_candidate_enumeration():
    rng = np.random.default_rng(31)
    for _ in range(8):
        c = random_cloud(rng, int(rng.integers(3, 7)), coord_scale=10)
        fast, pt = depth_of_measure(c)
        slow, _ = depth_of_measure_by_candidates(c)
        assert fast.value == slow.value
        assert tukey_depth(c, pt).value == fast.value


def test_rado_bound_2d():
    rng = np.random.default_rng(8)
    for _ in range(15):
        c = random_cloud(rng, int(rng.integers(4, 12)))
        dv, _ = depth_of_measure(c)
        assert dv.value >= F(1, 3)


def test_depth_of_measure_requires_flag_beyond_2d():
    pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    c = WeightedPointCloud(3, [(tuple(map(F, p)), F(1, 4)) for p in pts])
    with pytest.raises(DomainError):
        depth_of_measure(c)
    dv, _ = depth_of_measure(c, allow_approximate=True)
    assert not dv.exact and 0 < dv.value <= 1


def test_depth_region_triangle():
    t = triangle_cloud()
    region = depth_region(t, F(1, 3))
    assert region.kind == "polygon"
    assert set(region.vertices) == {(F(0), F(0)), (F(1), F(0)), (F(0), F(1))}
    assert depth_region(t, F(28, 81)).is_empty()


def test_depth_region_single_atom():
    c = WeightedPointCloud(2, [((F(1, 2), F(3, 4)), F(1))])
    region = depth_region(c, 1)
    assert region.kind == "point"
    assert region.vertices == ((F(1, 2), F(3, 4)),)


def test_depth_region_collinear_cloud():
    pts = [(0, 0), (1, 1), (2, 2)]
    c = WeightedPointCloud(2, [(tuple(map(F, p)), F(1, 3)) for p in pts])
    region = depth_region(c, F(2, 3))
    assert region.kind == "point" and region.vertices == ((F(1), F(1)),)
    region = depth_region(c, F(1, 3))
    assert region.kind == "segment"
    assert region.vertices == ((F(0), F(0)), (F(2), F(2)))


def test_region_pointwise_consistency():
    rng = np.random.default_rng(12)
    c = random_cloud(rng, 9, coord_scale=20)
    for tau in (F(1, 3), F(2, 5), F(1, 2)):
        region = depth_region(c, tau)
        count = 0
        for gx in range(-22, 23, 2):
            for gy in range(-22, 23, 2):
                probe = (F(gx, 20), F(gy, 20))
                loc = region.locate(probe)
                if loc == "boundary":
                    continue
                count += 1
                inside = tukey_depth(c, probe).value >= tau
                assert inside == (loc == "inside"), (tau, probe)
        assert count > 400


def test_region_monotone_nesting():
    rng = np.random.default_rng(14)
    c = random_cloud(rng, 8)
    r_small = depth_region(c, F(1, 4))
    r_big = depth_region(c, F(2, 5))
    for v in r_big.vertices:
        assert r_small.contains(v)


def test_marginal_examples():
    pts3 = [(1, 2, 3), (4, 5, 6)]
    c = WeightedPointCloud(3, [(tuple(map(F, p)), F(1, 2)) for p in pts3])
    axes = OrthoFrame([(1, 0, 0), (0, 1, 0)])
    m = marginal(c, axes)
    assert m.dim == 2
    assert set(m.atoms) == {((F(1), F(2)), F(1, 2)), ((F(4), F(5)), F(1, 2))}
    # identity frame: isometric copy
    eye = OrthoFrame([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert set(marginal(c, eye).atoms) == set(c.atoms)
    # merge rule
    c2 = WeightedPointCloud(
        3, [((F(0), F(0), F(1)), F(1, 2)), ((F(0), F(0), F(-1)), F(1, 2))]
    )
    m2 = marginal(c2, axes)
    assert m2.atoms == (((F(0), F(0)), F(1)),)


def test_marginal_mass_and_tower():
    rng = np.random.default_rng(3)
    c = random_cloud(rng, 7, dim=4)
    f1 = OrthoFrame([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)])
    f2 = OrthoFrame([(1, 0, 0), (0, 0, 1)])
    m1 = marginal(c, f1)
    assert sum(m1.weights()) == 1
    nested = marginal(m1, f2)
    direct = marginal(c, OrthoFrame([(1, 0, 0, 0), (0, 0, 1, 0)]))
    assert set(nested.atoms) == set(direct.atoms)


def test_marginal_dimension_mismatch():
    with pytest.raises(DomainError):
        marginal(triangle_cloud(), OrthoFrame([(1, 0, 0)]))


def test_thresholds():
    assert thresholds(2) == (F(1, 3), F(28, 81))
    assert thresholds(3) == (F(1, 4), F(49, 192))
    assert thresholds(1) == (F(1, 2), F(13, 24))


def test_cloud_validation():
    with pytest.raises(DomainError):
        WeightedPointCloud(2, [((F(0), F(0)), F(1, 2))])  # weights sum != 1
    with pytest.raises(DomainError):
        WeightedPointCloud(2, [((F(0),), F(1))])  # dim mismatch
    with pytest.raises(DomainError):
        WeightedPointCloud(2, [])


def test_cloud_serialization_roundtrip():
    t = triangle_cloud()
    assert WeightedPointCloud.from_dict(t.to_dict()) == t
    assert WeightedPointCloud.from_tsv(t.to_tsv()) == t
    decimal_tsv = "x1\tweight\n0.25\t0.5\n0.75\t0.5\n"
    c = WeightedPointCloud.from_tsv(decimal_tsv)
    assert c.atoms[0] == ((F(1, 4),), F(1, 2))
