"""Universal expansion of g^(k)/g over powers of lower log-derivatives.

For every holomorphic g (not identically zero) there are integer
constants, independent of g, with

    g^(k)/g = (g'/g)^(k-1) + sum over l = 2..k, j_1 + ... + j_l = k of
              c[k; l; j_1..j_l] * prod_mu g^(j_mu)/g.

The constants are derived by formal rewriting: in the symbols
u_j = g^(j)/g one has u_j' = u_{j+1} - u_1 u_j, so iterating the rewrite
on u_1 expresses (g'/g)^(k-1) as an integer polynomial in the u_j whose
only degree-one monomial is u_k; moving everything else across the
equality sign yields the table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .errors import ContractError
from .rational import POLE, RationalFunction, derivative_ratio_at, log_derivative_at

__all__ = [
    "ExpansionTable",
    "check_identity",
    "correction_term",
    "expansion_coefficients",
]

MAX_ORDER = 12

Monomial = tuple[int, ...]  # sorted parts j_1 <= ... <= j_l, each >= 1


@dataclass(frozen=True)
class ExpansionTable:
    """Correction coefficients for one derivative order k.

    ``terms`` holds (l, parts, coefficient) triples with the parts sorted
    ascending and summing to k; the table is empty for k = 1.
    """

    k: int
    terms: tuple[tuple[int, Monomial, int], ...]

    def __post_init__(self):
        for l, parts, _ in self.terms:
            if l != len(parts) or not 2 <= l <= self.k:
                raise ValueError(f"malformed term {parts} for k = {self.k}")
            if sum(parts) != self.k or any(j < 1 for j in parts):
                raise ValueError(f"parts {parts} do not compose k = {self.k}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "k": self.k,
                "terms": [
                    {"l": l, "parts": list(parts), "coefficient": c}
                    for l, parts, c in self.terms
                ],
            },
            indent=2,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "ExpansionTable":
        data = json.loads(text)
        return cls(
            k=data["k"],
            terms=tuple(
                (t["l"], tuple(t["parts"]), t["coefficient"]) for t in data["terms"]
            ),
        )


def _rewrite_derivative(poly: dict[Monomial, int]) -> dict[Monomial, int]:
    """One formal d/dz step using u_j' = u_{j+1} - u_1 u_j."""
    out: dict[Monomial, int] = {}
    for mono, coeff in poly.items():
        l = len(mono)
        for idx in range(l):
            up = tuple(sorted(mono[:idx] + (mono[idx] + 1,) + mono[idx + 1:]))
            out[up] = out.get(up, 0) + coeff
        down = tuple(sorted((1,) + mono))
        out[down] = out.get(down, 0) - l * coeff
    return {m: c for m, c in out.items() if c}


@lru_cache(maxsize=None)
def expansion_coefficients(k: int) -> ExpansionTable:
    """The coefficient table for order k (cached; k capped at MAX_ORDER)."""
    if not 1 <= k <= MAX_ORDER:
        raise ValueError(f"k must be in 1..{MAX_ORDER}")
    poly: dict[Monomial, int] = {(1,): 1}
    for _ in range(k - 1):
        poly = _rewrite_derivative(poly)
    # poly now encodes (g'/g)^(k-1); its single degree-one monomial is u_k
    assert poly.get((k,), 0) == 1
    terms = []
    for mono, coeff in poly.items():
        if len(mono) == 1:
            continue
        terms.append((len(mono), mono, -coeff))
    terms.sort(key=lambda t: (t[0], t[1]))
    return ExpansionTable(k=k, terms=tuple(terms))


def correction_term(g: RationalFunction, k: int, z: complex):
    """Table-driven value of the correction sum at z; POLE where g(z) = 0."""
    table = expansion_coefficients(k)
    gz = g(z)
    if gz is POLE:
        raise ValueError("z is a pole of g")
    if gz == 0:
        return POLE
    if not table.terms:
        return 0j
    max_j = max(max(parts) for _, parts, _ in table.terms)
    u = {j: derivative_ratio_at(g, j, z) for j in range(1, max_j + 1)}
    total = 0j
    for _, parts, coeff in table.terms:
        prod = complex(coeff)
        for j in parts:
            prod *= u[j]
        total += prod
    return total


def check_identity(g: RationalFunction, k: int, z: complex, tol: float) -> float:
    """Scaled residual of the expansion identity at z.

    Both sides are evaluated through exact rational calculus (the factored
    form of g).  The residual is |LHS - RHS| divided by the magnitude of
    the largest quantity entering the identity, max(1, |LHS|, |head|,
    |correction|): near a zero of g the head and the correction cancel
    almost completely, so the final values understate the scale of the
    computation by many orders.  Must not exceed ``tol`` (ContractError
    otherwise).
    """
    gz = g(z)
    if gz is POLE or gz == 0:
        raise ValueError("z must be neither a zero nor a pole of g")
    lhs = derivative_ratio_at(g, k, z)
    head = log_derivative_at(g, k, z)
    corr = correction_term(g, k, z)
    rhs = head + corr
    scale = max(1.0, abs(lhs), abs(head), abs(corr))
    residual = abs(lhs - rhs) / scale
    if residual > tol:
        raise ContractError(
            f"expansion identity residual {residual:.3g} exceeds tol {tol:g} at z = {z:.6g}",
            value=residual, bound=tol,
        )
    return residual
