"""Seeded instance generators.

Randomness comes from xoshiro256** seeded through splitmix64, written out
below so the same ``GenSpec`` yields bit-identical instances on any platform
and in any language:

* ``splitmix64``: ``state += 0x9E3779B97F4A7C15``; ``z = state``;
  ``z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9``; ``z = (z ^ (z >> 27)) * 0x94D049BB133111EB``;
  return ``z ^ (z >> 31)`` (all arithmetic mod 2**64). Four calls fill the
  xoshiro state.
* ``xoshiro256**`` output: ``rotl(s1 * 5, 7) * 9``, then the standard update.
* ``uniform()``: ``(next >> 11) * 2**-53``, a double in ``[0, 1)``.
* ``below(m)``: ``(next * m) >> 64``.

Draw order: ``euclidean`` draws ``x0, y0, x1, y1, ...``; ``random`` and
``onetwo`` draw one value per pair ``(u, v)``, ``u < v``, in row-major order.
The terminal shuffle (Fisher-Yates, ``i`` from ``n-1`` down to 1, swap with
``below(i + 1)``) comes last; terminals are the first ``k`` shuffled ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SpecInvalid
from .graph import Instance, MetricGraph, WeightedRawGraph, metric_closure

MASK64 = (1 << 64) - 1
KINDS = ("euclidean", "random", "onetwo")


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256:
    def __init__(self, seed: int):
        sm = seed & MASK64
        state = []
        for _ in range(4):
            sm = (sm + 0x9E3779B97F4A7C15) & MASK64
            z = sm
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
            state.append(z ^ (z >> 31))
        self.s = state

    def next(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform(self) -> float:
        return (self.next() >> 11) * 2.0 ** -53

    def below(self, m: int) -> int:
        return (self.next() * m) >> 64


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    k: int
    seed: int

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise SpecInvalid(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.n < 3:
            raise SpecInvalid(f"n must be at least 3, got {self.n}")
        if not 1 <= self.k <= self.n - 2:
            raise SpecInvalid(f"k must lie in 1..n-2 = 1..{self.n - 2}, got {self.k}")
        if not 0 <= self.seed <= MASK64:
            raise SpecInvalid("seed must be an unsigned 64-bit integer")

    @property
    def name(self) -> str:
        return f"{self.kind}-n{self.n}-k{self.k}-s{self.seed}"


def generate(spec: GenSpec) -> Instance:
    spec.validate()
    rng = Xoshiro256(spec.seed)
    n = spec.n
    if spec.kind == "euclidean":
        pts = [(rng.uniform(), rng.uniform()) for _ in range(n)]
        w = np.zeros((n, n))
        for u in range(n):
            for v in range(u + 1, n):
                dx = pts[u][0] - pts[v][0]
                dy = pts[u][1] - pts[v][1]
                w[u, v] = w[v, u] = math.sqrt(dx * dx + dy * dy)
        g = MetricGraph(w)
    else:
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if spec.kind == "random":
                    x = 1.0 + rng.uniform()
                else:
                    x = 1.0 if rng.next() >> 63 == 0 else 2.0
                edges.append((u, v, x))
        g = metric_closure(WeightedRawGraph(n, tuple(edges)))

    order = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        order[i], order[j] = order[j], order[i]
    return Instance(g, frozenset(order[:spec.k]), spec.name)
