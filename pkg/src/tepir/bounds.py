"""Exact-rational evaluation of the download-rate and secrecy-rate bounds.

Everything here is computed with ``fractions.Fraction``; floating point only
appears when rows are rendered for CSV output.  The T = N cases are evaluated
through their algebraically simplified limit forms so that no expression ever
hits 0/0.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from fractions import Fraction
from typing import Iterable, Optional

from .params import InvalidParameters, column_budget


def _validate(n: int, k: int, t: int, e: int):
    if n < 1 or k < 1:
        raise InvalidParameters(f"need N >= 1 and K >= 1, got N={n} K={k}")
    if not 0 <= e <= t <= n:
        raise InvalidParameters(f"need 0 <= E <= T <= N, got N={n} T={t} E={e}")


def capacity_e_ge_t(n: int, e: int, rho_available: Fraction) -> Fraction:
    """Capacity when the eavesdropper is at least as strong as the collusion:
    1 - E/N given shared randomness of at least E/(N-E) per file symbol, else 0.
    """
    if e < 0 or n < 1:
        raise InvalidParameters(f"need N >= 1 and E >= 0, got N={n} E={e}")
    if e == 0:
        return Fraction(1)
    if e >= n:
        raise InvalidParameters(f"E={e} wipes out all N={n} databases")
    if Fraction(rho_available) >= Fraction(e, n - e):
        return 1 - Fraction(e, n)
    return Fraction(0)


def outer_bound(n: int, k: int, t: int, e: int) -> Fraction:
    """Converse bound on the download rate for E <= T."""
    _validate(n, k, t, e)
    if t == n:
        return Fraction(n - e, n * k)
    x = Fraction(t, n)
    return (1 - x) * (1 - Fraction(e, n) * x ** (k - 1)) / (1 - x ** k)


def inner_bound(n: int, k: int, t: int, e: int) -> Fraction:
    """Rate achieved by the scheme for E <= T."""
    _validate(n, k, t, e)
    if t == n:
        return Fraction(n - e, n * k)
    x = Fraction(t, n)
    return (1 - x) / (1 - x ** k) - Fraction(e, k * n)


def secrecy_bounds(n: int, k: int, t: int, e: int) -> tuple[Fraction, Fraction]:
    """(converse lower bound, amount used by the scheme) for the ratio of
    shared randomness to file size.  Undefined at E = T = N where the file
    length collapses to zero."""
    _validate(n, k, t, e)
    if e == 0:
        return Fraction(0), Fraction(0)
    if t == n:
        if e == n:
            raise InvalidParameters("E = T = N has zero capacity and no finite secrecy rate")
        both = Fraction(k * e, n - e)
        return both, both
    x = Fraction(t, n)
    en = Fraction(e, n)
    lower = en * (1 - x ** k) / ((1 - x) * (1 - en * x ** (k - 1)))
    j = column_budget(n, k, t)
    achieved = Fraction(k * e * j, k * n ** k - e * j)
    return lower, achieved


@dataclass(frozen=True)
class BoundReport:
    """Every bound evaluated at one parameter point, as reduced rationals."""

    n: int
    k: int
    t: int
    e: int
    capacity_e_ge_t: Optional[Fraction]
    outer: Fraction
    inner: Fraction
    gap: Fraction
    secrecy_lower: Optional[Fraction]
    secrecy_achieved: Optional[Fraction]

    def as_dict(self) -> dict:
        def show(v):
            return None if v is None else str(v)

        return {
            "params": {"n": self.n, "k": self.k, "t": self.t, "e": self.e},
            "capacity_e_ge_t": show(self.capacity_e_ge_t),
            "outer_bound": show(self.outer),
            "inner_bound": show(self.inner),
            "gap": show(self.gap),
            "secrecy_lower_bound": show(self.secrecy_lower),
            "achieved_secrecy": show(self.secrecy_achieved),
        }


def bound_report(n: int, k: int, t: int, e: int) -> BoundReport:
    outer = outer_bound(n, k, t, e)
    inner = inner_bound(n, k, t, e)
    try:
        lower, achieved = secrecy_bounds(n, k, t, e)
    except InvalidParameters:
        lower = achieved = None
    capacity = (1 - Fraction(e, n)) if e >= t and e < n else None
    return BoundReport(n=n, k=k, t=t, e=e, capacity_e_ge_t=capacity,
                       outer=outer, inner=inner, gap=outer - inner,
                       secrecy_lower=lower, secrecy_achieved=achieved)


@dataclass(frozen=True)
class SweepRow:
    x: Fraction
    outer: Fraction
    inner: Fraction
    gap: Fraction
    secrecy_lower: Optional[Fraction]
    secrecy_achieved: Optional[Fraction]


def sweep(n: int, k: int, fixed: str, fixed_value: int,
          values: Iterable[int]) -> list[SweepRow]:
    """Evaluate the bounds along one axis.

    fixed = "e" varies T over ``values`` (x = T/N); fixed = "t" varies E
    (x = E/N).  Points outside 0 <= E <= T <= N are rejected.
    """
    if fixed not in ("t", "e"):
        raise InvalidParameters("fixed must be 't' or 'e'")
    rows = []
    for v in values:
        t, e = (fixed_value, v) if fixed == "t" else (v, fixed_value)
        report = bound_report(n, k, t, e)
        rows.append(SweepRow(x=Fraction(v, n), outer=report.outer,
                             inner=report.inner, gap=report.gap,
                             secrecy_lower=report.secrecy_lower,
                             secrecy_achieved=report.secrecy_achieved))
    return rows


def fraction_to_decimal(value: Fraction, digits: int = 12) -> str:
    """Correctly rounded fixed-point rendering of an exact rational."""
    with localcontext() as ctx:
        ctx.prec = 60
        d = Decimal(value.numerator) / Decimal(value.denominator)
        q = d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
        text = f"{q:f}"
        if "." not in text:
            text += "." + "0" * digits
        return text


FIGURE_FAMILIES = {
    1: {"n": 10, "e": 3, "x_name": "t_over_n"},
    2: {"n": 10, "t": 7, "x_name": "e_over_n"},
}


def figure_rows(fig: int, k: int) -> tuple[list[str], list[list[str]]]:
    """CSV header and rows backing the bound-vs-adversary-strength plots.

    Figure 1 sweeps T from E to N at N=10, E=3; figure 2 sweeps E from 0 to T
    at N=10, T=7.  Values are 12-digit decimal expansions of exact rationals.
    """
    if fig not in FIGURE_FAMILIES:
        raise InvalidParameters(f"unknown figure {fig}")
    fam = FIGURE_FAMILIES[fig]
    n = fam["n"]
    if fig == 1:
        rows = sweep(n, k, "e", fam["e"], range(fam["e"], n + 1))
        header = ["t_over_n", "outer", "inner", "gap"]
    else:
        rows = sweep(n, k, "t", fam["t"], range(0, fam["t"] + 1))
        header = ["e_over_n", "outer", "inner", "gap"]
    rendered = [[fraction_to_decimal(r.x), fraction_to_decimal(r.outer),
                 fraction_to_decimal(r.inner), fraction_to_decimal(r.gap)]
                for r in rows]
    return header, rendered
