"""Position encodings: affine linear scale with invert, padded band scale."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateDomain


@dataclass(frozen=True)
class LinearScale:
    """scale(x) = r0 + (x - d0) * (r1 - r0) / (d1 - d0); no clamping."""

    d0: float
    d1: float
    r0: float = 0.0
    r1: float = 1.0

    def __post_init__(self) -> None:
        if self.d0 == self.d1:
            raise DegenerateDomain(f"degenerate domain [{self.d0}, {self.d1}]")

    def __call__(self, x: float) -> float:
        return self.r0 + (x - self.d0) * (self.r1 - self.r0) / (self.d1 - self.d0)

    def invert(self, y: float) -> float:
        return self.d0 + (y - self.r0) * (self.d1 - self.d0) / (self.r1 - self.r0)


@dataclass(frozen=True)
class Band:
    offset: float
    width: float


def band_scale(categories: list[str], range_width: float = 1.0, padding: float = 0.0) -> dict[str, Band]:
    """Equal-width padded bands in category order.

    step = W/n, band width = step*(1-p), offset_i = i*step + step*p/2.
    """
    if not categories:
        raise DegenerateDomain("band scale needs at least one category")
    if not 0.0 <= padding < 1.0:
        raise ValueError("padding must be in [0, 1)")
    n = len(categories)
    step = range_width / n
    width = step * (1.0 - padding)
    pad = step * padding / 2.0
    return {cat: Band(offset=i * step + pad, width=width) for i, cat in enumerate(categories)}
