"""Blocking sets for the bad lines of a multiset, and the repair procedure.

A point has *large index* when at least q+1 - (d/(q+1) + 2d^2/(q+1)^3) bad
lines pass through it (d = number of bad lines).  Repair walks the
large-index points in canonical order; at each one it finds the residue r
shared by most bad lines through it and adds weight (k - r) mod p there,
which turns all of those lines into k-secants at once.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .multiset import (
    SecantSpectrum,
    WeightedMultiset,
    index_thresholds,
    lemma_delta_bound,
    secant_spectrum,
)


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def large_index_points(m: WeightedMultiset, k: int, spec: SecantSpectrum | None = None) -> list[int]:
    spec = spec or secant_spectrum(m, k)
    if spec.delta == 0:
        return []
    th = index_thresholds(m.plane.q, spec.delta)
    return [i for i, s in enumerate(spec.indices.tolist()) if s >= th.large_bound]


def blocking_hypothesis(q: int, delta: int) -> bool:
    """q > 17 and delta < sqrt(q/2) (q+1), compared exactly."""
    return q > 17 and 2 * delta * delta < q * (q + 1) ** 2


@dataclass
class BlockingSetReport:
    S: list[int]
    delta: int
    target_size: int
    blocks_all: bool
    per_point_index: dict[int, int]
    hypothesis_ok: bool
    size_ok: bool
    unblocked: list[int] = field(default_factory=list)


def blocking_set(m: WeightedMultiset, k: int) -> BlockingSetReport:
    plane = m.plane
    spec = secant_spectrum(m, k)
    S = large_index_points(m, k, spec)
    chosen = set(S)
    unblocked = [l for l in spec.bad_lines() if not chosen.intersection(plane.line_points[l].tolist())]
    target = ceil_div(spec.delta, plane.q + 1)
    return BlockingSetReport(
        S=S,
        delta=spec.delta,
        target_size=target,
        blocks_all=not unblocked,
        per_point_index={i: int(spec.indices[i]) for i in S},
        hypothesis_ok=blocking_hypothesis(plane.q, spec.delta),
        size_ok=len(S) == target,
        unblocked=unblocked,
    )


@dataclass(frozen=True)
class Majority:
    """Most frequent bad residue through a point; falsy when absent."""

    residue: int | None
    count: int
    threshold: Fraction
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.residue is not None


def property_most(m: WeightedMultiset, k: int, point: int, spec: SecantSpectrum | None = None) -> Majority:
    plane = m.plane
    spec = spec or secant_spectrum(m, k)
    threshold = Fraction(2 * spec.delta, plane.q + 1) + 5
    through = plane.point_lines[point]
    bad = [int(spec.residues[l]) for l in through if spec.residues[l] != k]
    if 2 * len(bad) <= plane.q:
        return Majority(None, 0, threshold, f"only {len(bad)} bad lines through the point, need > q/2")
    tally = Counter(bad)
    r, count = min(tally.items(), key=lambda kv: (-kv[1], kv[0]))
    if count <= threshold:
        return Majority(None, count, threshold, f"best residue {r} on {count} lines, need > {threshold}")
    return Majority(r, count, threshold)


def theorem_regime(q: int, p: int, h: int, delta: int) -> bool:
    """The q/h-dependent delta bound under which the majority property is automatic:
    q > 27 and h > 2 with delta < (floor(sqrt q)+1)(q+1-floor(sqrt q)), or
    q > 27 and h = 2 with delta < (p-1)(p-4)(p^2+1)/(2p-1)."""
    if q <= 27:
        return False
    if h > 2:
        return delta < lemma_delta_bound(q)
    if h == 2:
        return delta * (2 * p - 1) < (p - 1) * (p - 4) * (p * p + 1)
    return False


@dataclass
class RepairStep:
    point: int
    added: int
    k_i: int
    lines_repaired: int
    delta_after: int


@dataclass
class RepairReport:
    M_prime: WeightedMultiset
    steps: list[RepairStep]
    delta0: int
    final_delta: int
    changed_points: int
    target: int
    hypothesis_ok: bool
    status: str = "ok"
    failure: str | None = None
    verdicts: dict = field(default_factory=dict)

    @property
    def succeeded(self) -> bool:
        return self.status == "ok"


def repair(m: WeightedMultiset, k: int) -> RepairReport:
    """Make m a k mod p multiset by weighted additions at large-index points.

    ``hypothesis_ok`` records q > 17, delta < (floor(sqrt q)+1)(q+1-floor(sqrt q))
    and the majority property at every initial large-index point; under it
    the result is a k mod p multiset differing from m in exactly
    ceil(delta/(q+1)) points.  The procedure runs regardless.
    """
    plane = m.plane
    q, p = plane.q, plane.p
    spec = secant_spectrum(m, k)
    delta0 = spec.delta
    target = ceil_div(delta0, q + 1)
    guard = target + 2
    initial = large_index_points(m, k, spec)
    majority_ok = all(property_most(m, k, P, spec) for P in initial)
    hypothesis_ok = q > 17 and delta0 < lemma_delta_bound(q) and majority_ok
    progress_floor = q + 1 - 2 * (Fraction(delta0, q + 1) + 2)

    verdicts = {
        "majority_property": majority_ok,
        "theorem_regime": theorem_regime(q, p, plane.field.h, delta0),
        "large_set_invariant": True,
        "monotone_progress": True,
    }
    steps: list[RepairStep] = []
    pending = list(initial)
    current, status, failure = m, "ok", None
    while True:
        large = large_index_points(current, k, spec)
        if large != pending:
            verdicts["large_set_invariant"] = False
        if not large:
            break
        if len(steps) >= guard:
            status, failure = "guard", f"more than {guard} steps"
            break
        P = large[0]
        maj = property_most(current, k, P, spec)
        if not maj:
            status, failure = "no_majority", f"point {P}: {maj.reason}"
            break
        added = (k - maj.residue) % p
        before = spec.delta
        current = current.add(P, added)
        spec = secant_spectrum(current, k)
        if before - spec.delta < progress_floor:
            verdicts["monotone_progress"] = False
        steps.append(RepairStep(P, added, maj.residue, maj.count, spec.delta))
        pending = [x for x in large if x != P]

    changed = m.changed_points(current)
    verdicts["final_kmodp"] = spec.delta == 0
    verdicts["exact_count"] = changed == target
    return RepairReport(
        M_prime=current,
        steps=steps,
        delta0=delta0,
        final_delta=spec.delta,
        changed_points=changed,
        target=target,
        hypothesis_ok=hypothesis_ok,
        status=status,
        failure=failure,
        verdicts=verdicts,
    )


def notthatmany_bound(q: int) -> int:
    r = math.isqrt(q)
    return r * q - q + 2 * r + 1


@dataclass(frozen=True)
class NotThatManyCheck:
    delta: int
    bound: int
    hypothesis_ok: bool
    holds: bool


def notthatmany_bound_check(m: WeightedMultiset, k: int) -> NotThatManyCheck:
    """If every index is < q - floor(sqrt q) and delta is below the lemma
    bound, then delta <= floor(sqrt q) q - q + 2 floor(sqrt q) + 1."""
    q = m.plane.q
    spec = secant_spectrum(m, k)
    r = math.isqrt(q)
    hyp = q > 17 and spec.delta < lemma_delta_bound(q) and int(spec.indices.max()) < q - r
    bound = notthatmany_bound(q)
    return NotThatManyCheck(spec.delta, bound, hyp, (not hyp) or spec.delta <= bound)
