"""Fragment values: the per-node unit of storage, tagged with its codec."""

from __future__ import annotations

from dataclasses import dataclass

CODEC_TAGS = ("rbt", "rbt-sys", "mbr-psrs", "mbr-vdm", "shah")


@dataclass(frozen=True)
class Fragment:
    codec: str
    node: int  # 1-based node index
    symbols: tuple[int, ...]

    def __post_init__(self):
        if self.codec not in CODEC_TAGS:
            raise ValueError(f"unknown codec tag {self.codec!r}")
        if self.node < 1:
            raise ValueError(f"node index {self.node} must be >= 1")
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
