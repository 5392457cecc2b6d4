"""Seeded, splittable randomness.

Every stochastic routine in the package takes a RandomStream; nothing ever
touches global RNG state.  Streams are identified by (seed, stream_id):
equal pairs replay identical variate sequences, distinct stream_ids give
independent-quality streams (numpy SeedSequence spawn keys).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class RandomStream:
    seed: int
    stream_id: int = 0
    _gen: np.random.Generator = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._gen is None:
            ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
            object.__setattr__(self, "_gen", np.random.Generator(np.random.PCG64(ss)))

    @property
    def gen(self) -> np.random.Generator:
        return self._gen

    def stream(self, stream_id: int) -> "RandomStream":
        """Independent stream with the same seed and a new id."""
        return RandomStream(self.seed, stream_id)

    # convenience passthroughs used all over the package -------------------

    def random(self, size=None):
        return self._gen.random(size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._gen.uniform(low, high, size)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size=size)

    def exponential(self, scale=1.0, size=None):
        return self._gen.exponential(scale, size)

    def beta(self, a, b, size=None):
        return self._gen.beta(a, b, size)

    def gamma(self, shape, scale=1.0, size=None):
        return self._gen.gamma(shape, scale, size)

    def dirichlet(self, alpha, size=None):
        return self._gen.dirichlet(alpha, size)

    def shuffle(self, x):
        self._gen.shuffle(x)

    def choice(self, a, size=None, p=None):
        return self._gen.choice(a, size=size, p=p)
