"""Field-size feasibility report across code families."""

from __future__ import annotations

from dataclasses import dataclass

from ..gf import Field


@dataclass(frozen=True)
class SchemeBound:
    scheme: str
    bound: str
    limit: int
    satisfied: bool


def field_size_report(field: Field, n: int, k: int, d: int) -> list[SchemeBound]:
    """Which code constructions fit (n, k, d) over the given field.

    The Cauchy-systematic row covers the classic explicit systematic
    product-matrix construction, whose Cauchy block needs n-k+d distinct
    symbols; it is reported only, not implemented as a codec.
    """
    q = field.q
    pairs = n * (n - 1) // 2
    rows = [
        SchemeBound("rbt", "n <= q+1", q + 1, n <= q + 1),
        SchemeBound("shah", "C(n,2) <= q+1", q + 1, pairs <= q + 1),
        SchemeBound("mbr-psrs", "n <= q", q, n <= q),
        SchemeBound("mbr-vandermonde", "n <= q", q, n <= q),
        SchemeBound("cauchy-systematic", "n <= q+k-d", q + k - d, n <= q + k - d),
        SchemeBound("psrs-genpoly", "n <= q-1", q - 1, n <= q - 1),
    ]
    return rows
