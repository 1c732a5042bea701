"""Canonical associated point of a measure and the depth classification.

A measure is "insufficient" when its maximal point depth falls strictly
below the improved bound 1/(n+1) + 1/(3(n+1)^3).  The associated point
c is the barycenter of the superlevel region: at the improved bound in
the sufficient case, at the achieved maximum in the insufficient case.
For atomic measures the deepest point is generally a region rather than
a point, so the region centroid is an explicit convention of this
artifact (reports carry the label); it coincides with the deepest point
whenever that point is unique.  Equality with the bound routes to the
sufficient branch, where the region is achieved and full rank.
"""

from dataclasses import dataclass
from fractions import Fraction

from .cloud import _as_fraction
from .depth import (
    DepthRegion,
    depth_of_measure,
    depth_region,
    thresholds,
)
from .errors import DomainError, InternalConsistencyError
from .serialize import frac_str

SUFFICIENT = "sufficient"
INSUFFICIENT = "insufficient"
C_CONVENTION = "region-centroid"


@dataclass(frozen=True)
class CenterReport:
    depth_of_measure: Fraction
    threshold: Fraction
    classification: str
    c: tuple
    region: DepthRegion = None
    convention: str = C_CONVENTION

    def to_dict(self):
        return {
            "depth_of_measure": frac_str(self.depth_of_measure),
            "threshold": frac_str(self.threshold),
            "classification": self.classification,
            "c": [frac_str(x) for x in self.c],
            "region": self.region.to_dict() if self.region is not None else None,
            "convention": self.convention,
        }


def _check_exact_dim(cloud, n):
    if cloud.dim != int(n):
        raise DomainError("cloud dim %d does not match n=%s" % (cloud.dim, n))
    if cloud.dim > 2:
        raise DomainError("exact classification is available for n <= 2 only")


def classify(cloud, n):
    """'insufficient' iff max depth < improved bound, by exact comparison."""
    _check_exact_dim(cloud, n)
    dm, _ = depth_of_measure(cloud)
    improved = thresholds(n)[1]
    return INSUFFICIENT if dm.value < improved else SUFFICIENT


def _interval_1d(cloud, level):
    """Superlevel interval {x : depth >= level} on the line."""
    mass = {}
    for (p,), w in cloud.atoms:
        mass[p] = mass.get(p, Fraction(0)) + w
    vals = sorted(mass)
    run = Fraction(0)
    prefix = {}
    for v in vals:
        run += mass[v]
        prefix[v] = run
    run = Fraction(0)
    suffix = {}
    for v in reversed(vals):
        run += mass[v]
        suffix[v] = run
    lo_candidates = [v for v in vals if prefix[v] >= level]
    hi_candidates = [v for v in vals if suffix[v] >= level]
    if not lo_candidates or not hi_candidates:
        return None
    lo, hi = min(lo_candidates), max(hi_candidates)
    if lo > hi:
        return None
    return lo, hi


def center_point(cloud, n):
    """Associated point c of the measure, with its region and classification."""
    _check_exact_dim(cloud, n)
    dm, _ = depth_of_measure(cloud)
    improved = thresholds(n)[1]
    if dm.value < improved:
        classification = INSUFFICIENT
        level = dm.value
    else:
        classification = SUFFICIENT
        level = improved
    if cloud.dim == 2:
        region = depth_region(cloud, level)
        if region.is_empty():
            raise InternalConsistencyError(
                "superlevel region empty at an achieved level %s" % (level,)
            )
        c = region.centroid()
    else:
        interval = _interval_1d(cloud, level)
        if interval is None:
            raise InternalConsistencyError(
                "superlevel interval empty at an achieved level %s" % (level,)
            )
        lo, hi = interval
        c = ((lo + hi) / 2,)
        region = None
    return CenterReport(
        depth_of_measure=dm.value,
        threshold=improved,
        classification=classification,
        c=tuple(_as_fraction(x) for x in c),
        region=region,
    )
