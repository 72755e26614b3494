"""Random instance generators shared by the CLI verify suites and the tests."""

from __future__ import annotations

import numpy as np

from .multiset import WeightedMultiset
from .plane import Plane


def seed_streams(seed: int, n: int) -> list[np.random.Generator]:
    """n independent generators split from one 64-bit seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def random_kmodp(plane: Plane, k: int, rng: np.random.Generator, n_lines: int = 4) -> WeightedMultiset:
    """A random k mod p multiset: a combination of random lines with
    coefficient sum k (the last coefficient absorbs the difference)."""
    p = plane.p
    lines = rng.choice(plane.n, size=n_lines, replace=False)
    coeffs = [int(c) for c in rng.integers(0, p, size=n_lines)]
    coeffs[-1] = (k - sum(coeffs[:-1])) % p
    return WeightedMultiset.from_lines(plane, dict(zip((int(l) for l in lines), coeffs)))


def plant(m: WeightedMultiset, eps: int, rng: np.random.Generator) -> tuple[WeightedMultiset, dict[int, int]]:
    """Change the weight of eps distinct random points by nonzero residues."""
    plane = m.plane
    pts = [int(i) for i in rng.choice(plane.n, size=eps, replace=False)]
    shifts = {P: int(rng.integers(1, plane.p)) for P in pts}
    w = m.weights.copy()
    for P, t in shifts.items():
        w[P] += t
    return WeightedMultiset(plane, w), shifts


def random_multiset(plane: Plane, rng: np.random.Generator, density: float = 0.2) -> WeightedMultiset:
    w = rng.integers(0, plane.p, size=plane.n) * (rng.random(plane.n) < density)
    return WeightedMultiset(plane, w)


def random_instance(plane: Plane, rng: np.random.Generator) -> tuple[WeightedMultiset, int, int]:
    """(M, k, ideal line) with the ideal line a k-secant of M.

    Mixes sparse random multisets with perturbed k mod p multisets; k is
    read off a random line so the secant condition holds by construction.
    """
    kind = int(rng.integers(0, 3))
    if kind == 0:
        m = random_multiset(plane, rng, float(rng.uniform(0.02, 0.5)))
    else:
        base = random_kmodp(plane, int(rng.integers(0, plane.p)), rng, int(rng.integers(1, 6)))
        m, _ = plant(base, int(rng.integers(1, 2 + 4 * kind)), rng)
    line = int(rng.integers(0, plane.n))
    k = int(m.weights[plane.line_points[line]].sum() % plane.p)
    return m, k, line
