"""Small-weight codewords of C1(2, p): constructions and classification.

The De Boeck-Vandendriessche (DBV) codeword of PG(2, p), p odd, lives on
the three concurrent lines

    m: X0 = 0,   m': X1 = 0,   m'': X0 = X1      (all through (0,0,1))

with value a at (0,1,a), b at (1,0,b) and -c at (1,1,c).  It has weight
3p-3, lies in the dual code and is not a combination of m, m', m''.  The
``literal`` variant puts +c at (1,1,c) instead; its line sums are not
constant, so it is not a codeword at all.
"""

from __future__ import annotations

import itertools
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .code import Codeword, LineCode, combination, decompose, incidence_vector, line_code, supported_subspace
from .field import create_field
from .plane import Collineation, Plane, PlaneError, build_plane

VARIANTS = ("canonical", "literal")


def prime_plane(p: int) -> Plane:
    return build_plane(create_field(p))


@lru_cache(maxsize=None)
def dbv_lines(plane: Plane) -> tuple[int, int, int]:
    """Indices of m, m', m''."""
    return plane.index((1, 0, 0)), plane.index((0, 1, 0)), plane.index((1, plane.field.neg(1), 0))


@lru_cache(maxsize=None)
def dbv_base(p: int, variant: str = "canonical") -> Codeword:
    if p == 2:
        raise ValueError("the DBV codeword needs an odd prime")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    plane = prime_plane(p)
    sign = -1 if variant == "canonical" else 1
    v = np.zeros(plane.n, dtype=np.int64)
    for t in range(p):
        v[plane.index((0, 1, t))] = t
        v[plane.index((1, 0, t))] = t
        v[plane.index((1, 1, t))] = sign * t
    return Codeword(plane, v)


@dataclass(frozen=True)
class DbvParams:
    p: int
    gamma: int
    lambdas: tuple[int, int, int] = (0, 0, 0)
    pi: Collineation | None = None
    variant: str = "canonical"

    def __post_init__(self):
        if self.gamma % self.p == 0:
            raise ValueError("gamma must be nonzero mod p")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if len(self.lambdas) != 3:
            raise ValueError("three lambdas expected")

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "gamma": self.gamma % self.p,
            "lambdas": [x % self.p for x in self.lambdas],
            "pi": [list(r) for r in self.pi.matrix] if self.pi else None,
            "variant": self.variant,
        }


def dbv_general(params: DbvParams) -> Codeword:
    """pi applied to gamma*c + lam v_m + lam' v_m' + lam'' v_m''."""
    base = dbv_base(params.p, params.variant)
    plane = base.plane
    d = base.scale(params.gamma) + combination(plane, dict(zip(dbv_lines(plane), params.lambdas)))
    if params.pi is None:
        return d
    return Codeword(plane, params.pi.apply_vector(d.values))


def random_dbv_params(p: int, rng: np.random.Generator) -> DbvParams:
    plane = prime_plane(p)
    return DbvParams(
        p,
        int(rng.integers(1, p)),
        tuple(int(x) for x in rng.integers(0, p, size=3)),
        Collineation.random(plane, rng),
    )


# ---------- support covers ----------

@lru_cache(maxsize=8)
def _line_masks(plane: Plane) -> list[int]:
    masks = []
    for row in plane.line_points:
        m = 0
        for i in row.tolist():
            m |= 1 << i
        masks.append(m)
    return masks


def _mask(c: Codeword) -> int:
    bits = np.packbits((c.values != 0).astype(np.uint8), bitorder="little")
    return int.from_bytes(bits.tobytes(), "little")


def minimum_covers(c: Codeword, m: int) -> list[tuple[int, ...]]:
    """All covers of supp(c) with the fewest lines, if that is at most m.

    Depth-first branch and bound.  With d lines left and more than d
    uncovered points, two of the d+1 lowest uncovered points share a cover
    line, so only their C(d+1, 2) joins are branched on; with at most d
    points left every line through the lowest one is tried.  A branch is
    cut once the uncovered points exceed (q+1) times the lines left.
    """
    plane = c.plane
    masks = _line_masks(plane)
    join = _join_lookup(plane)
    q1 = plane.q + 1
    through = plane.point_lines
    found: set[tuple[int, ...]] = set()

    def rec(rem: int, chosen: tuple[int, ...], depth: int) -> None:
        if rem == 0:
            found.add(tuple(sorted(chosen)))
            return
        count = rem.bit_count()
        if depth == 0 or count > depth * q1:
            return
        if count <= depth:
            pt = (rem & -rem).bit_length() - 1
            cands = through[pt].tolist()
        else:
            low, r = [], rem
            for _ in range(depth + 1):
                bit = r & -r
                low.append(bit.bit_length() - 1)
                r ^= bit
            cands = list(dict.fromkeys(join(a, b) for a, b in itertools.combinations(low, 2)))
        for l in cands:
            rec(rem & ~masks[l], chosen + (l,), depth - 1)

    target = _mask(c)
    for size in range(m + 1):
        rec(target, (), size)
        if found:
            return sorted(found)
    return []


@lru_cache(maxsize=8)
def _join_lookup(plane: Plane):
    if plane.n > 2000:
        return plane.join
    table = np.full((plane.n, plane.n), -1, dtype=np.int64)
    for l, row in enumerate(plane.line_points):
        table[np.ix_(row, row)] = l
    tab = table.tolist()
    return lambda a, b: tab[a][b]


def cover_support(c: Codeword, m: int) -> tuple[int, ...] | None:
    """A smallest set of at most m lines covering supp(c), else None."""
    if m > 4:
        raise ValueError("cover search is limited to 4 lines")
    covers = minimum_covers(c, m)
    return covers[0] if covers else None


def cover_hypothesis(q: int, w: int) -> bool:
    """q > 17 and w < sqrt(q/2) (q+1), compared exactly."""
    return q > 17 and 2 * w * w < q * (q + 1) ** 2


def check_cover(c: Codeword, cover: Sequence[int]) -> dict:
    """Tightness of a cover: its size against ceil(w/(q+1)) and the support
    count on each line against q+1 - (w/(q+1) + 2w^2/(q+1)^3)."""
    plane = c.plane
    q1 = plane.q + 1
    w = c.weight
    supp = set(c.support)
    floor_ = q1 - (Fraction(w, q1) + Fraction(2 * w * w, q1**3))
    per_line = {int(l): sum(1 for i in plane.line_points[l].tolist() if i in supp) for l in cover}
    covered = supp <= {i for l in cover for i in plane.line_points[l].tolist()}
    return {
        "hypothesis": cover_hypothesis(plane.q, w),
        "covers": covered,
        "size_ok": len(cover) == -(-w // q1),
        "per_line": per_line,
        "line_floor": floor_,
        "lines_ok": all(v >= floor_ for v in per_line.values()),
    }


# ---------- classification ----------

@dataclass
class Classification:
    """``verdict`` is "lines", "dbv" or "unclassified"."""

    verdict: str
    lines: tuple[int, ...] = ()
    coefficients: dict[int, int] | None = None
    dbv: DbvParams | None = None
    reason: str | None = None
    certificate: Codeword | None = None
    certificate_ok: bool = False
    regime_flags: dict = field(default_factory=dict)

    def to_json(self, plane: Plane) -> dict:
        out = {
            "verdict": {"lines": "LinesCombo", "dbv": "DbvType", "unclassified": "Unclassified"}[self.verdict],
            "lines": [list(plane.coords(l)) for l in self.lines],
            "certificate_ok": self.certificate_ok,
            "regime_flags": self.regime_flags,
        }
        if self.coefficients is not None:
            out["coefficients"] = [self.coefficients[l] for l in self.lines]
        if self.dbv is not None:
            out["dbv_params"] = self.dbv.to_json()
        if self.reason:
            out["reason"] = self.reason
        return out


class NotACodeword(ValueError):
    pass


def regime_flags(c: Codeword) -> dict:
    plane = c.plane
    p, w = plane.p, c.weight
    return {
        "q_prime": plane.field.h == 1,
        "p_gt_17": p > 17,
        "weight_in_range": 2 * p + 1 < w <= 3 * p + 1,
    }


def _lines_verdict(c: Codeword, lines: tuple[int, ...], coeffs: dict[int, int], flags: dict) -> Classification:
    cert = combination(c.plane, coeffs)
    return Classification("lines", lines, coeffs, certificate=cert, certificate_ok=cert == c, regime_flags=flags)


@lru_cache(maxsize=None)
def _base_support(p: int) -> tuple[np.ndarray, np.ndarray]:
    base = dbv_base(p)
    supp = np.flatnonzero(base.values)
    return supp, base.values[supp]


def _dbv_match(c: Codeword, shifted: Codeword, cover: tuple[int, ...], P: int, flags: dict) -> Classification | None:
    plane = c.plane
    p = plane.p
    vals = shifted.values
    off = {l: [int(i) for i in plane.line_points[l] if i != P] for l in cover}
    supp, bvals = _base_support(p)
    inv = linalg.inverse_table(p)
    for lm, lm2, lm3 in itertools.permutations(cover):
        z1 = next(i for i in off[lm] if vals[i] == 0)
        z3 = next(i for i in off[lm2] if vals[i] == 0)
        u = next(i for i in off[lm3] if vals[i] == p - 1)
        try:
            frame = Collineation.from_frame(plane, [P, z1, z3, u])
        except PlaneError:
            continue
        # both words have weight 3p-3, so agreeing on the image of the
        # base support is enough
        img = vals[frame.map_points(supp)]
        gamma = int(img[0] * inv[bvals[0]] % p)
        if gamma == 0 or not np.array_equal(img, bvals * gamma % p):
            continue
        rest = c - Codeword(plane, frame.apply_vector(dbv_base(p).values * gamma))
        lam = decompose(rest, (lm, lm2, lm3))
        if lam is None:
            continue
        params = DbvParams(p, gamma, (lam[lm], lam[lm2], lam[lm3]), frame)
        cert = dbv_general(params)
        return Classification(
            "dbv", (lm, lm2, lm3), dbv=params, certificate=cert, certificate_ok=cert == c, regime_flags=flags
        )
    return None


def classify(c: Codeword, code: LineCode | None = None) -> Classification:
    """Sort a codeword into a combination of <= 3 lines, the DBV family, or neither.

    For each minimum cover of the support by at most three lines: shift c
    into the dual code along the first cover line; if the lines are
    concurrent and the shifted word takes pairwise distinct values on each
    line away from the common point, normalize the frame and match it
    against gamma times the DBV word; otherwise solve for line
    coefficients.
    """
    plane = c.plane
    p = plane.p
    code = code or line_code(plane)
    if code.is_codeword(c) is None:
        raise NotACodeword("input is not in the code of lines")
    flags = regime_flags(c)
    if c.weight == 0:
        return _lines_verdict(c, (), {}, flags)
    covers = minimum_covers(c, 3)
    if not covers:
        return Classification("unclassified", reason="support needs more than 3 lines", regime_flags=flags)
    reasons = []
    for cover in covers:
        if len(cover) == 3:
            l1, l2, l3 = cover
            P = plane.meet(l1, l2)
            if plane.incident(P, l3):
                lam = -c.line_sum(l1) % p
                shifted = c + incidence_vector(plane, l1).scale(lam)
                distinct = shifted.values[P] == 0 and all(
                    len(set(shifted.values[[i for i in plane.line_points[l] if i != P]].tolist())) == plane.q
                    for l in cover
                )
                if distinct:
                    found = _dbv_match(c, shifted, cover, P, flags)
                    if found is not None:
                        return found
                    reasons.append(f"cover {cover}: frame normalization found no DBV match")
                    continue
        coeffs = decompose(c, cover)
        if coeffs is not None:
            return _lines_verdict(c, cover, coeffs, flags)
        reasons.append(f"cover {cover}: not a combination of the cover lines")
    return Classification("unclassified", reason="; ".join(reasons), regime_flags=flags)


# ---------- weight gaps ----------

@dataclass(frozen=True)
class GapInterval:
    q: int
    k: int
    lower: Fraction
    upper: Fraction
    regime_ok: bool

    def excludes(self, w: int) -> bool:
        return self.lower < w < self.upper


def gap_interval(q: int, k: int) -> GapInterval:
    """Open interval (kq+1, (k+1)q - 3k^2/2 - 5k/2 - 1) free of codeword weights
    when 0 < k+1 < sqrt(q/2) and q > 17."""
    lower = Fraction(k * q + 1)
    upper = Fraction((k + 1) * q) - Fraction(3 * k * k, 2) - Fraction(5 * k, 2) - 1
    regime = q > 17 and k + 1 > 0 and 2 * (k + 1) ** 2 < q
    return GapInterval(q, k, lower, upper, regime)


def weight_gap(q: int, k: int, w: int) -> bool:
    return gap_interval(q, k).excludes(w)


# ---------- census ----------

class CensusGuard(RuntimeError):
    pass


MAX_ENUM_DIM = 8


def _census_chunk(args) -> dict[bytes, int]:
    p, max_weight, triples = args
    plane = prime_plane(p)
    code = line_code(plane)
    inv = linalg.inverse_table(p)
    out: dict[bytes, int] = {}
    for tri in triples:
        pts = np.unique(plane.line_points[list(tri)].ravel())
        sub = supported_subspace(code, pts.tolist())
        if sub.dimension > MAX_ENUM_DIM:
            raise CensusGuard(f"subspace of dimension {sub.dimension} on lines {tri}")
        if sub.dimension == 0:
            continue
        words = linalg.span_vectors(sub.basis, p, projective=True)
        w = np.count_nonzero(words, axis=1)
        words = words[(w > 0) & (w <= max_weight)]
        if not len(words):
            continue
        lead = words[np.arange(len(words)), (words != 0).argmax(axis=1)]
        words = words * inv[lead][:, None] % p
        wts = np.count_nonzero(words, axis=1)
        for row, wt in zip(words.astype(np.uint8), wts):
            out[row.tobytes()] = int(wt)
    return out


def _classify_chunk(args) -> list[tuple[int, str, bool, bytes]]:
    p, keys = args
    plane = prime_plane(p)
    code = line_code(plane)
    res = []
    for key in keys:
        c = Codeword(plane, np.frombuffer(key, dtype=np.uint8).astype(np.int64))
        cl = classify(c, code)
        ok = cl.verdict == "unclassified" or cl.certificate_ok
        res.append((c.weight, cl.verdict, ok, key))
    return res


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("PGLAB_THREADS", "1")))
    except ValueError:
        return 1


def _chunks(seq: list, n: int) -> Iterator[list]:
    size = max(1, -(-len(seq) // n))
    for i in range(0, len(seq), size):
        yield seq[i : i + size]


def triple_support_census(p: int, max_weight: int | None = None, workers: int | None = None) -> dict:
    """Enumerate codewords supported on the union of three lines, classify them.

    Codewords are deduplicated across triples and up to scalars (first
    nonzero entry scaled to 1).  The tally is keyed by (weight, verdict);
    each entry keeps the canonically smallest codeword as its example.
    Only certificate validity is checked here.
    """
    if p > 7:
        raise CensusGuard("exhaustive census is limited to p <= 7")
    plane = prime_plane(p)
    line_code(plane)
    max_weight = 3 * p + 1 if max_weight is None else max_weight
    workers = workers or _workers()
    triples = list(itertools.combinations(range(plane.n), 3))
    nchunks = max(1, workers * 4)
    jobs = [(p, max_weight, chunk) for chunk in _chunks(triples, nchunks)]
    words: dict[bytes, int] = {}
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            for part in ex.map(_census_chunk, jobs):
                words.update(part)
    else:
        for job in jobs:
            words.update(_census_chunk(job))
    keys = sorted(words)
    cjobs = [(p, chunk) for chunk in _chunks(keys, nchunks)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = [r for part in ex.map(_classify_chunk, cjobs) for r in part]
    else:
        results = [r for job in cjobs for r in _classify_chunk(job)]

    tally: dict[tuple[int, str], list] = defaultdict(lambda: [0, 0, None])
    for wt, verdict, ok, key in results:
        entry = tally[(wt, verdict)]
        entry[0] += 1
        entry[1] += not ok
        if entry[2] is None:
            entry[2] = key
    names = {"lines": "LinesCombo", "dbv": "DbvType", "unclassified": "Unclassified"}
    entries = []
    for (wt, verdict), (count, bad, key) in sorted(tally.items()):
        ex = np.frombuffer(key, dtype=np.uint8)
        sparse = [list(plane.coords(int(i))) + [int(ex[i])] for i in np.flatnonzero(ex)]
        entries.append(
            {"weight": wt, "verdict": names[verdict], "count": count, "certificate_failures": bad, "example": sparse}
        )
    return {
        "p": p,
        "max_weight": max_weight,
        "triples": len(triples),
        "codewords": len(keys),
        "certificate_failures": sum(e["certificate_failures"] for e in entries),
        "entries": entries,
    }
