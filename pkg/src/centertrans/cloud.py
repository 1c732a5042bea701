"""Weighted atomic measures and orthonormal frames.

A cloud is a finite list of atoms with exact positive rational weights
summing to one.  All depth computations downstream are exact, which
relies on the invariants enforced here.  Frames carry real-valued rows;
they are quantized to rationals (12 decimal digits by default) at the
moment a marginal is formed, so numerically produced subspaces still
feed exact arithmetic.
"""

import math
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .serialize import frac_str, parse_frac

FRAME_QUANTIZE_DIGITS = 12


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_frac(x)
    return Fraction(x)


class WeightedPointCloud:
    """Atomic probability measure with exact rational data.

    Treated as immutable after construction; all operations return new
    clouds.  Integer rescalings of the weights and coordinates are cached
    lazily because the exact depth routines work on integers.
    """

    def __init__(self, dim, atoms):
        dim = int(dim)
        if dim < 1:
            raise DomainError("dim must be >= 1")
        packed = []
        for point, weight in atoms:
            p = tuple(_as_fraction(c) for c in point)
            w = _as_fraction(weight)
            if len(p) != dim:
                raise DomainError("atom %r has dimension %d, expected %d" % (p, len(p), dim))
            if w <= 0:
                raise DomainError("weights must be positive, got %s" % (w,))
            packed.append((p, w))
        if not packed:
            raise DomainError("cloud needs at least one atom")
        total = sum(w for _, w in packed)
        if total != 1:
            raise DomainError("weights must sum to 1 exactly, got %s" % (total,))
        self.dim = dim
        self.atoms = tuple(packed)
        self._int_weights = None
        self._int_points = None

    def __len__(self):
        return len(self.atoms)

    def __eq__(self, other):
        return (
            isinstance(other, WeightedPointCloud)
            and self.dim == other.dim
            and self.atoms == other.atoms
        )

    def __repr__(self):
        return "WeightedPointCloud(dim=%d, atoms=%d)" % (self.dim, len(self.atoms))

    @property
    def int_weights(self):
        """(D, weights) with integer weights over the common denominator D."""
        if self._int_weights is None:
            d = math.lcm(*(w.denominator for _, w in self.atoms))
            ws = tuple(int(w * d) for _, w in self.atoms)
            self._int_weights = (d, ws)
        return self._int_weights

    @property
    def int_points(self):
        """(C, points) with integer coordinates scaled by the common C."""
        if self._int_points is None:
            c = math.lcm(*(x.denominator for p, _ in self.atoms for x in p))
            pts = tuple(tuple(int(x * c) for x in p) for p, _ in self.atoms)
            self._int_points = (c, pts)
        return self._int_points

    def points(self):
        return [p for p, _ in self.atoms]

    def weights(self):
        return [w for _, w in self.atoms]

    def to_dict(self):
        return {
            "dim": self.dim,
            "atoms": [
                {"x": [frac_str(c) for c in p], "w": frac_str(w)}
                for p, w in self.atoms
            ],
        }

    @classmethod
    def from_dict(cls, data):
        atoms = [
            (tuple(parse_frac(c) for c in atom["x"]), parse_frac(atom["w"]))
            for atom in data["atoms"]
        ]
        return cls(int(data["dim"]), atoms)

    def to_tsv(self):
        header = "\t".join(["x%d" % (i + 1) for i in range(self.dim)] + ["weight"])
        lines = [header]
        for p, w in self.atoms:
            lines.append("\t".join([frac_str(c) for c in p] + [frac_str(w)]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text, max_denominator=None, normalize=False):
        """Parse the tabular format; decimal entries convert exactly."""
        rows = [line.split("\t") for line in text.strip().splitlines()]
        if len(rows) < 2:
            raise DomainError("tabular cloud needs a header and at least one atom")
        header = rows[0]
        if header[-1] != "weight" or len(header) < 2:
            raise DomainError("tabular header must be x1..xd,weight")
        dim = len(header) - 1
        atoms = []
        for row in rows[1:]:
            if len(row) != dim + 1:
                raise DomainError("tabular row %r has wrong arity" % (row,))
            point = tuple(parse_frac(c, max_denominator) for c in row[:dim])
            atoms.append((point, parse_frac(row[dim], max_denominator)))
        if normalize:
            total = sum(w for _, w in atoms)
            if total <= 0:
                raise DomainError("cannot normalize nonpositive total weight")
            atoms = [(p, w / total) for p, w in atoms]
        return cls(dim, atoms)


def apply_affine(cloud, matrix=None, shift=None):
    """New cloud with atoms p -> M p + b (exact rational arithmetic)."""
    d = cloud.dim
    if matrix is None:
        rows = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    else:
        rows = [[_as_fraction(x) for x in row] for row in matrix]
    out_dim = len(rows)
    b = [Fraction(0)] * out_dim if shift is None else [_as_fraction(x) for x in shift]
    atoms = []
    for p, w in cloud.atoms:
        q = tuple(sum(rows[i][j] * p[j] for j in range(d)) + b[i] for i in range(out_dim))
        atoms.append((q, w))
    return WeightedPointCloud(out_dim, atoms)


def quantize_entry(value, digits=FRAME_QUANTIZE_DIGITS):
    """Exact rational for a frame entry; floats round at 10^-digits."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    scale = 10 ** digits
    return Fraction(round(float(value) * scale), scale)


class OrthoFrame:
    """n orthonormal rows spanning an n-dimensional subspace of R^N."""

    def __init__(self, rows, tolerance=1e-9):
        rows = tuple(tuple(r) for r in rows)
        if not rows:
            raise DomainError("frame needs at least one row")
        ambient = len(rows[0])
        if any(len(r) != ambient for r in rows):
            raise DomainError("frame rows must share one length")
        if len(rows) > ambient:
            raise DomainError("more rows than ambient dimension")
        tolerance = float(tolerance)
        if tolerance < 0:
            raise DomainError("tolerance must be >= 0")
        g = np.array([[float(x) for x in r] for r in rows], dtype=float)
        gram = g @ g.T
        defect = float(np.max(np.abs(gram - np.eye(len(rows)))))
        if defect > max(tolerance, 1e-15):
            raise DomainError(
                "rows are not orthonormal: Gram defect %.3e > tolerance %.3e"
                % (defect, tolerance)
            )
        self.rows = rows
        self.ambient = ambient
        self.tolerance = tolerance
        self.gram_defect = defect

    @property
    def n(self):
        return len(self.rows)

    def quantized_rows(self, digits=FRAME_QUANTIZE_DIGITS):
        return tuple(tuple(quantize_entry(x, digits) for x in r) for r in self.rows)

    def as_array(self):
        return np.array([[float(x) for x in r] for r in self.rows], dtype=float)

    def projector(self):
        """Basis-free N x N projector onto the subspace."""
        g = self.as_array()
        return g.T @ g

    def to_dict(self):
        return {
            "ambient": self.ambient,
            "rows": [[float(x) for x in r] for r in self.rows],
            "tolerance": self.tolerance,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data["rows"], tolerance=data.get("tolerance", 1e-9))
