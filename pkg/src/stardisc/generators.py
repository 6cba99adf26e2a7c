"""Point-set constructions used as subset-selection inputs.

Seven kinds: the deterministic low-discrepancy families Sobol', Halton,
reverse-scrambled Halton, Faure, and the 2-d Fibonacci golden-ratio lattice,
plus two random constructions, plain uniform sampling and an improved Latin
hypercube (best-of-k candidates by maximin distance).

Deterministic kinds are bit-reproducible across runs; random kinds are
bit-reproducible for a fixed seed (PCG64 stream, documented and portable).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import PointSet

__all__ = [
    "GeneratorSpec",
    "GENERATOR_KINDS",
    "generate",
    "radical_inverse",
    "fibonacci_set",
    "halton_set",
    "reverse_halton_set",
    "faure_set",
    "sobol_set",
    "uniform_set",
    "ilhs_set",
]

GENERATOR_KINDS = ("sobol", "halton", "revhalton", "faure", "fibonacci", "uniform", "ilhs")

_RANDOM_KINDS = ("uniform", "ilhs")

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


class InvalidSpecError(ValueError):
    """Generator specification violates a kind-specific constraint."""


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    dim: int
    count: int
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise InvalidSpecError(f"unknown generator kind {self.kind!r}")
        if self.dim < 1:
            raise InvalidSpecError("dimension must be >= 1")
        if self.count < 1:
            raise InvalidSpecError("count must be >= 1")
        if self.kind == "fibonacci" and self.dim != 2:
            raise InvalidSpecError("fibonacci lattice is defined only for dim = 2")
        if self.kind in _RANDOM_KINDS:
            if self.seed is None:
                raise InvalidSpecError(f"{self.kind} requires a seed")
        elif self.seed is not None:
            raise InvalidSpecError(f"{self.kind} is deterministic and takes no seed")


def generate(spec: GeneratorSpec) -> PointSet:
    """Produce the point set described by ``spec``."""
    n, d = spec.count, spec.dim
    if spec.kind == "fibonacci":
        return fibonacci_set(n)
    if spec.kind == "halton":
        return halton_set(n, d)
    if spec.kind == "revhalton":
        return reverse_halton_set(n, d)
    if spec.kind == "faure":
        return faure_set(n, d)
    if spec.kind == "sobol":
        return sobol_set(n, d)
    if spec.kind == "uniform":
        return uniform_set(n, d, spec.seed)
    if spec.kind == "ilhs":
        return ilhs_set(n, d, spec.seed, candidates=spec.extra.get("candidates", 10))
    raise InvalidSpecError(spec.kind)


# ---------------------------------------------------------------------------
# digit machinery

def radical_inverse(i: int, base: int, permutation=None) -> float:
    """Mirror the base-``base`` digits of ``i`` across the radix point.

    ``permutation`` optionally remaps each digit (a sequence of length
    ``base``); the identity gives the van der Corput / Halton coordinate.
    """
    if base < 2:
        raise ValueError("base must be >= 2")
    x = 0.0
    scale = 1.0 / base
    while i > 0:
        i, digit = divmod(i, base)
        if permutation is not None:
            digit = permutation[digit]
        x += digit * scale
        scale /= base
    return x


def _primes(count: int) -> list[int]:
    out = []
    cand = 2
    while len(out) < count:
        if all(cand % p for p in out if p * p <= cand):
            out.append(cand)
        cand += 1
    return out


def _smallest_prime_geq(d: int) -> int:
    cand = max(2, d)
    while True:
        if all(cand % k for k in range(2, int(math.isqrt(cand)) + 1)):
            return cand
        cand += 1


def halton_set(n: int, d: int) -> PointSet:
    """First n Halton points (index starting at 1) in the first d prime bases."""
    bases = _primes(d)
    pts = np.empty((n, d))
    for j, b in enumerate(bases):
        pts[:, j] = [radical_inverse(i, b) for i in range(1, n + 1)]
    return PointSet(pts, label=f"halton d={d} n={n}")


def reverse_halton_set(n: int, d: int) -> PointSet:
    """Halton with the per-base digit reversal sigma(0)=0, sigma(k)=b-k."""
    bases = _primes(d)
    pts = np.empty((n, d))
    for j, b in enumerate(bases):
        perm = [0] + [b - k for k in range(1, b)]
        pts[:, j] = [radical_inverse(i, b, perm) for i in range(1, n + 1)]
    return PointSet(pts, label=f"revhalton d={d} n={n}")


def faure_set(n: int, d: int) -> PointSet:
    """Faure sequence in the smallest prime base b >= d, index starting at 1.

    Coordinate j applies the j-th power of the upper-triangular Pascal matrix
    to the base-b digit vector (mod b) before mirroring.
    """
    b = _smallest_prime_geq(d)
    ndigits = 1
    while b ** ndigits <= n:
        ndigits += 1
    # binomials mod b, C[l][k] for l >= k
    C = [[math.comb(l, k) % b for k in range(ndigits)] for l in range(ndigits)]
    pts = np.empty((n, d))
    for i in range(1, n + 1):
        digits = []
        v = i
        while v > 0:
            v, r = divmod(v, b)
            digits.append(r)
        digits += [0] * (ndigits - len(digits))
        for j in range(d):
            x = 0.0
            scale = 1.0 / b
            for k in range(ndigits):
                c = 0
                for l in range(k, ndigits):
                    c += C[l][k] * pow(j, l - k, b) * digits[l]
                x += (c % b) * scale
                scale /= b
            pts[i - 1, j] = x
    return PointSet(pts, label=f"faure d={d} n={n}")


# Joe-Kuo direction-number parameters (degree s, coefficients a, initial m)
# for dimensions 2 and 3; dimension 1 is the van der Corput sequence.
_SOBOL_PARAMS = {
    2: (1, 0, [1]),
    3: (2, 1, [1, 3]),
}


def sobol_set(n: int, d: int) -> PointSet:
    """Sobol' points via the base-2 Gray-code construction, skipping index 0."""
    if d > 3:
        raise InvalidSpecError("sobol generator is provided for d <= 3 only")
    nbits = max(1, (n + 1).bit_length())
    # direction integers v[j][k], scaled by 2^nbits
    v = np.zeros((d, nbits), dtype=np.uint64)
    for k in range(nbits):
        v[0, k] = 1 << (nbits - 1 - k)
    for j in range(1, d):
        s, a, m_init = _SOBOL_PARAMS[j + 1]
        m = list(m_init)
        for k in range(len(m), nbits):
            new = m[k - s] ^ (m[k - s] << s)
            for t in range(1, s):
                if (a >> (s - 1 - t)) & 1:
                    new ^= m[k - t] << t
            m.append(new)
        for k in range(nbits):
            v[j, k] = m[k] << (nbits - 1 - k)
    pts = np.empty((n, d))
    x = np.zeros(d, dtype=np.uint64)
    for i in range(1, n + 1):
        # flip the direction for the lowest zero bit of i-1 (Gray code step)
        c = 0
        val = i - 1
        while val & 1:
            val >>= 1
            c += 1
        x ^= v[:, c]
        pts[i - 1] = x / float(1 << nbits)
    return PointSet(pts, label=f"sobol d={d} n={n}")


def fibonacci_set(n: int) -> PointSet:
    """Golden-ratio lattice p_i = ({(i-1)/phi}, i/n), i = 1..n.

    The golden-ratio coordinate starts at 0 (zero-based multiples of 1/phi);
    this phase reproduces the published discrepancy values of the lattice,
    e.g. 0.0930 for n = 20.  The second coordinate depends on n, so this is
    a fixed n-point lattice, not a prefix of an infinite sequence.
    """
    if n < 1:
        raise InvalidSpecError("n must be >= 1")
    i = np.arange(1, n + 1, dtype=np.float64)
    x = np.mod((i - 1.0) / GOLDEN_RATIO, 1.0)
    y = i / n
    return PointSet(np.column_stack([x, y]), label=f"fibonacci n={n}")


def uniform_set(n: int, d: int, seed: int) -> PointSet:
    """n i.i.d. uniform points from a seeded PCG64 stream."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return PointSet(rng.random((n, d)), label=f"uniform d={d} n={n} seed={seed}")


def ilhs_set(n: int, d: int, seed: int, candidates: int = 10) -> PointSet:
    """Improved Latin hypercube: grow the set one point at a time.

    Each step samples ``candidates`` points from axis cells not yet used and
    keeps the one maximizing the minimum Euclidean distance to the points
    placed so far.  Every axis ends up with exactly one point per cell
    [(k-1)/n, k/n), the Latin property.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    free = [list(range(n)) for _ in range(d)]
    placed = np.empty((n, d))
    for step in range(n):
        best_pt = None
        best_cells = None
        best_score = -1.0
        for _ in range(max(1, candidates)):
            cells = [free[j][rng.integers(len(free[j]))] for j in range(d)]
            u = rng.random(d)
            pt = (np.array(cells) + u) / n
            if step == 0:
                score = 0.0
            else:
                diff = placed[:step] - pt
                score = float(np.min(np.einsum("ij,ij->i", diff, diff)))
            if score > best_score:
                best_score = score
                best_pt = pt
                best_cells = cells
            if step == 0:
                break
        placed[step] = best_pt
        for j in range(d):
            free[j].remove(best_cells[j])
    return PointSet(placed, label=f"ilhs d={d} n={n} seed={seed}")
