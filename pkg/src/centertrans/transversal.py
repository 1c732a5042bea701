"""Search for subspaces whose marginals all reach the improved depth bound.

The inner problem (best common depth level of several planar marginals)
is solved exactly: depth levels form a finite set of rationals, the
superlevel regions are exact polygons, and the largest level whose
regions intersect is found by binary search with exact emptiness
certificates.  The outer problem (which subspace) is random-restart hill
climbing with plane-rotation moves; a move is accepted only when the
exact objective strictly increases.

Determinism contract: every restart draws its randomness from a child of
the master seed, and the merged result is the first restart index that
reaches the target (else the best (objective, -index)).  That rule does
not depend on scheduling, so reports are identical for any worker count
(CENTERTRANS_THREADS).
"""

import math
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import polygon
from .centers import center_point
from .cloud import OrthoFrame, _as_fraction
from .depth import _direction_table, _region_vertices, marginal, thresholds, tukey_depth
from .errors import DomainError
from .schubert import min_dimension
from .serialize import frac_str

ENV_THREADS = "CENTERTRANS_THREADS"


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 60
    local_steps: int = 40
    initial_angle: float = 0.6
    decay: float = 0.7
    master_seed: int = 0
    target: Fraction = None

    def __post_init__(self):
        if self.restarts < 1 or self.local_steps < 0:
            raise DomainError("restarts must be >= 1 and local_steps >= 0")
        if not 0 < self.decay < 1:
            raise DomainError("decay must lie in (0, 1)")
        if not 0 < self.initial_angle <= math.pi:
            raise DomainError("initial angle must lie in (0, pi]")

    def to_dict(self):
        return {
            "restarts": self.restarts,
            "local_steps": self.local_steps,
            "initial_angle": self.initial_angle,
            "decay": self.decay,
            "master_seed": self.master_seed,
            "target": None if self.target is None else frac_str(self.target),
        }


@dataclass(frozen=True)
class TransversalReport:
    frame: OrthoFrame
    n: int
    objective: Fraction
    per_measure_depths: tuple
    witness_point: tuple
    c_points: tuple
    c_spread: float
    success: bool
    target: Fraction
    failing_measures: tuple
    exact: bool = True
    restart_index: int = None
    config: SearchConfig = None
    # (index, objective as float, success) for restarts up to the selected
    # one; trimming there keeps the report scheduling-invariant
    trajectory: tuple = ()

    def to_dict(self):
        return {
            "n": self.n,
            "frame_rows": [[float(x) for x in r] for r in self.frame.rows],
            "projector": [[float(x) for x in row] for row in self.frame.projector()],
            "objective": frac_str(self.objective),
            "per_measure_depths": [frac_str(v) for v in self.per_measure_depths],
            "witness_point": [frac_str(x) for x in self.witness_point],
            "c_points": [[frac_str(x) for x in c] for c in self.c_points],
            "c_spread": self.c_spread,
            "success": self.success,
            "target": frac_str(self.target),
            "failing_measures": list(self.failing_measures),
            "exact": self.exact,
            "restart_index": self.restart_index,
            "config": None if self.config is None else self.config.to_dict(),
            "trajectory": [list(row) for row in self.trajectory],
        }


def random_frame(ambient, n, seed):
    """Seeded orthonormal frame: QR of a Gaussian sample, signs fixed."""
    if not 1 <= n <= ambient:
        raise DomainError("need 1 <= n <= ambient")
    rng = np.random.default_rng(seed)
    return OrthoFrame(_orthonormalize(rng.standard_normal((n, ambient))))


def _orthonormalize(g):
    q, r = np.linalg.qr(g.T)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return tuple(tuple(col) for col in (q * signs).T)


def _common_level(marginals):
    """Largest exact level whose superlevel regions all intersect.

    Returns (level, witness) where the witness is the centroid of the
    intersection; (0, fallback point) when even the lowest level fails.
    """
    levels = sorted(
        {
            Fraction(lv, _direction_table(m).weight_den)
            for m in marginals
            for lv in _direction_table(m).levels
        }
    )

    def intersection_at(tau):
        inter = None
        for m in marginals:
            verts = _region_vertices(m, tau)
            if not verts:
                return None
            inter = verts if inter is None else polygon.intersect(inter, verts)
            if not inter:
                return None
        return inter

    best = intersection_at(levels[0])
    if best is None:
        first = marginals[0]
        mean = tuple(
            sum(p[i] * w for p, w in first.atoms) for i in range(first.dim)
        )
        return Fraction(0), mean
    lo, hi = 0, len(levels) - 1
    top = intersection_at(levels[hi])
    if top is not None:
        return levels[hi], polygon.centroid(top)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        inter = intersection_at(levels[mid])
        if inter is not None:
            lo, best = mid, inter
        else:
            hi = mid
    return levels[lo], polygon.centroid(best)


def _objective_parts(frame, clouds, n):
    marginals = [marginal(c, frame) for c in clouds]
    if n == 2:
        _, witness = _common_level(marginals)
        exact = True
    else:
        witness, exact = _approx_witness(marginals), False
    per = tuple(tukey_depth(m, witness).value for m in marginals)
    return min(per), witness, per, marginals, exact


def _approx_witness(marginals, steps=60, seed=0):
    """Heuristic common point for n >= 3 marginals (flagged approximate)."""
    dim = marginals[0].dim
    mean = [
        sum(sum(p[i] * w for p, w in m.atoms) for m in marginals) / len(marginals)
        for i in range(dim)
    ]
    x = [_as_fraction(v) for v in mean]
    score = min(tukey_depth(m, x).value for m in marginals)
    rng = np.random.default_rng(seed)
    radius = 1.0
    for _ in range(steps):
        delta = rng.standard_normal(dim)
        cand = [
            xi + Fraction(float(d * radius)).limit_denominator(10 ** 6)
            for xi, d in zip(x, delta)
        ]
        val = min(tukey_depth(m, cand).value for m in marginals)
        if val > score:
            x, score = cand, val
        else:
            radius *= 0.85
    return tuple(x)


def objective(frame, clouds, n):
    """(exact max-min level's witness value, witness point) for the frame.

    The returned value is the minimum over measures of the exact depth at
    the witness, so it can only meet or exceed the feasibility level that
    produced the witness.
    """
    _check_clouds(frame, clouds)
    value, witness, _, _, _ = _objective_parts(frame, clouds, n)
    return value, witness


def _check_clouds(frame, clouds):
    if not clouds:
        raise DomainError("need at least one cloud")
    dims = {c.dim for c in clouds}
    if len(dims) != 1:
        raise DomainError("clouds must share one ambient dimension")
    if frame is not None and frame.ambient != clouds[0].dim:
        raise DomainError("frame ambient does not match the clouds")


def verify(frame, clouds, n, target=None, restart_index=None, config=None,
           trajectory=()):
    """Exact re-evaluation of a frame: depths, c-points, consensus spread."""
    _check_clouds(frame, clouds)
    if target is None:
        target = thresholds(n)[1]
    target = _as_fraction(target)
    value, witness, per, marginals, exact = _objective_parts(frame, clouds, n)
    if n <= 2:
        c_points = tuple(center_point(m, n).c for m in marginals)
    else:
        c_points = ()
    spread = 0.0
    for i in range(len(c_points)):
        for j in range(i + 1, len(c_points)):
            d = math.sqrt(
                sum(float(a - b) ** 2 for a, b in zip(c_points[i], c_points[j]))
            )
            spread = max(spread, d)
    failing = tuple(i for i, v in enumerate(per) if v < target)
    return TransversalReport(
        frame=frame,
        n=n,
        objective=value,
        per_measure_depths=per,
        witness_point=tuple(witness),
        c_points=c_points,
        c_spread=spread,
        success=not failing,
        target=target,
        failing_measures=failing,
        exact=exact,
        restart_index=restart_index,
        config=config,
        trajectory=tuple(trajectory),
    )


@dataclass
class _RestartResult:
    index: int
    objective: Fraction
    frame: OrthoFrame
    success: bool


def _run_restart(index, seed, clouds, n, target, config):
    rng = np.random.default_rng(seed)
    ambient = clouds[0].dim
    rows = _orthonormalize(rng.standard_normal((n, ambient)))
    frame = OrthoFrame(rows)
    best_val, _, _, _, _ = _objective_parts(frame, clouds, n)
    angle = config.initial_angle
    step = 0
    while step < config.local_steps and best_val < target:
        step += 1
        arr = frame.as_array()
        row = int(rng.integers(n))
        d = rng.standard_normal(ambient)
        d -= arr.T @ (arr @ d)
        nrm = float(np.linalg.norm(d))
        if nrm < 1e-9:
            continue
        d /= nrm
        new = arr.copy()
        new[row] = math.cos(angle) * arr[row] + math.sin(angle) * d
        new[row] /= np.linalg.norm(new[row])
        cand = OrthoFrame(tuple(tuple(r) for r in new))
        val, _, _, _, _ = _objective_parts(cand, clouds, n)
        if val > best_val:
            frame, best_val = cand, val
            angle = config.initial_angle
        else:
            angle *= config.decay
    return _RestartResult(index, best_val, frame, best_val >= target)


def _worker_count():
    raw = os.environ.get(ENV_THREADS, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def search(clouds, n, config=None):
    """Random-restart hill climbing over frames; exact acceptance tests.

    Restarts run in index-ordered chunks sized by the worker count; the
    selected result is the first restart index reaching the target, or
    the best (objective, -index) otherwise, so the report is independent
    of the chunking.
    """
    _check_clouds(None, clouds)
    if config is None:
        config = SearchConfig()
    n = int(n)
    target = config.target if config.target is not None else thresholds(n)[1]
    target = _as_fraction(target)
    ambient = clouds[0].dim
    needed = min_dimension(len(clouds), n) if n >= 2 else None
    if needed is not None and ambient < needed:
        warnings.warn(
            "ambient dimension %d is below the guaranteed bound %d for m=%d, n=%d"
            % (ambient, needed, len(clouds), n),
            stacklevel=2,
        )
    seeds = np.random.SeedSequence(config.master_seed).spawn(config.restarts)
    workers = _worker_count()
    best = None
    chosen = None
    completed = []
    idx = 0
    while idx < config.restarts and chosen is None:
        chunk = list(range(idx, min(idx + workers, config.restarts)))
        if workers == 1 or len(chunk) == 1:
            results = [
                _run_restart(i, seeds[i], clouds, n, target, config) for i in chunk
            ]
        else:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(
                    pool.map(
                        lambda i: _run_restart(i, seeds[i], clouds, n, target, config),
                        chunk,
                    )
                )
        completed.extend(results)
        for res in results:
            if best is None or (res.objective, -res.index) > (
                best.objective,
                -best.index,
            ):
                best = res
            if res.success:
                chosen = res
                break
        idx += len(chunk)
    final = chosen if chosen is not None else best
    # on early exit, restarts past the chosen index may or may not have run
    # depending on chunking; drop them so the report is scheduling-invariant
    trajectory = tuple(
        (res.index, float(res.objective), res.success)
        for res in sorted(completed, key=lambda r: r.index)
        if chosen is None or res.index <= chosen.index
    )
    return verify(
        final.frame,
        clouds,
        n,
        target=target,
        restart_index=final.index,
        config=config,
        trajectory=trajectory,
    )
