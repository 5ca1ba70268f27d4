"""Sample plans for randomized zero testing."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_BOX = ((0.5, 2.0), (0.5, 2.0))


@dataclass(frozen=True)
class SamplePlan:
    """Where and how many points to draw.

    ``box`` is ``((x_lo, x_hi), (y_lo, y_hi))``.  ``mode`` is "auto", "float"
    or "exact"; auto picks exact rational arithmetic when every expression
    under test is rational and small enough.
    """

    box: tuple = DEFAULT_BOX
    points: int = 25
    seed: int = 0
    eps_sing: float = 1e-8
    mode: str = "auto"
    redraw_factor: int = 10
    exact_node_limit: int = 6000

    def __post_init__(self):
        (xl, xh), (yl, yh) = self.box
        if not (xl < xh and yl < yh):
            raise ValueError(f"empty sample box {self.box}")
        if self.points < 1:
            raise ValueError("need at least one sample point")
        if self.mode not in ("auto", "float", "exact"):
            raise ValueError(f"unknown evaluation mode {self.mode!r}")
        object.__setattr__(self, "box", ((float(xl), float(xh)), (float(yl), float(yh))))

    def rng(self):
        return np.random.default_rng(self.seed)

    def draw(self, rng, n, exact=False):
        """``n`` points uniform in the box as (xs, ys).

        Exact draws are dyadic rationals with denominator 2^20 so that the
        evaluation stays exact and cheap.
        """
        (xl, xh), (yl, yh) = self.box
        xs = rng.uniform(xl, xh, n)
        ys = rng.uniform(yl, yh, n)
        if not exact:
            return xs, ys
        scale = 1 << 20
        fx = np.empty(n, dtype=object)
        fy = np.empty(n, dtype=object)
        fx[:] = [Fraction(round(v * scale), scale) for v in xs]
        fy[:] = [Fraction(round(v * scale), scale) for v in ys]
        return fx, fy

    def with_(self, **changes):
        data = {f: getattr(self, f) for f in self.__dataclass_fields__}
        data.update(changes)
        return SamplePlan(**data)
