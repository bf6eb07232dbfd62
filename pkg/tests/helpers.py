"""Shared helpers for the perturbation suites."""

import random

from coloc.exact import Matrix


def perturb(M: Matrix, rng: random.Random) -> Matrix:
    """Add a random nonzero integer to one random entry."""
    i, j = rng.randrange(M.rows), rng.randrange(M.cols)
    delta = rng.choice([-3, -2, -1, 1, 2, 3])
    return M.with_entry(i, j, M[i, j] + M.field(delta))


def perturbations(M: Matrix, n: int = 100, seed: int = 0):
    rng = random.Random(seed)
    return [perturb(M, rng) for _ in range(n)]
