"""Upper bounds on partial (m-)ovoids and nonexistence tests for m-ovoids.

Every value is an exact integer; logarithmic thresholds are decided by
comparing integer powers.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .geometry import PolarSpaceParams, polar_params

__all__ = [
    "partial_ovoid_bound_cases",
    "partial_ovoid_bound",
    "ramsey_upper",
    "partial_movoid_ramsey_bound",
    "ramsey_threshold_holds",
    "spectral_threshold_holds",
    "known_no_2ovoid",
    "movoid_nonexistence",
    "Verdict",
    "spectral_2ovoid_bound",
    "spectral_2ovoid_closed_form",
    "SpectralBound",
    "srg_params",
    "srg_multiplicities",
    "movoid_size",
    "BoundEntry",
    "BoundReport",
    "bound_report",
    "bounds_grid",
    "report_rows_csv",
]

_QUADRICS = ("quadric", "elliptic", "parabolic", "hyperbolic")
_HERMITIANS = ("hermitian", "hermitian-odd", "hermitian-even")


def _kind(family: str) -> str:
    if family in ("symplectic", "W"):
        return "symplectic"
    if family in _QUADRICS or family in ("Q", "Q-", "Q+"):
        return "quadric"
    if family in _HERMITIANS or family in ("H-odd", "H-even"):
        return "hermitian"
    raise ValueError(f"unknown family {family!r}")


def _C(n: int, k: int) -> int:
    """Binomial coefficient, zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def partial_ovoid_bound_cases(family: str, n: int, p: int, h: int) -> dict[str, int]:
    """Every applicable p-rank bound on a partial ovoid, keyed by case.

    n is the vector space dimension; the field has p^h elements, or p^(2h)
    for Hermitian spaces. Refinements that depend on an integer u appear as
    "d:u=..." / "b:u=..." entries.
    """
    kind = _kind(family)
    if n < 4:
        raise ValueError("the p-rank bounds need n >= 4")
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    if h < 1:
        raise ValueError("h must be positive")
    out: dict[str, int] = {}
    if kind == "symplectic":
        if n % 2:
            raise ValueError("symplectic spaces live in even dimension")
        out["symplectic"] = _C(p + n - 1, p - 1) ** h + 1
    elif kind == "quadric":
        if p == 2:
            out["a" if n % 2 == 0 else "b"] = (n if n % 2 == 0 else n - 1) ** h + 1
        else:
            base = _C(n + p - 2, p - 1) - _C(n + p - 4, p - 3)
            out["c"] = base**h + 1
            for u in range(1, (n + p - 5) // p + 1):
                if (u + 1 - n) % 2 == 0 and n - 3 <= u * p <= n + p - 5:
                    val = base - _C(u * p + 2, n - 1) + _C(u * p, n - 1)
                    out[f"d:u={u}"] = val**h + 1
    else:
        base = _C(n + p - 2, p - 1) ** 2 - _C(n + p - 3, p - 2) ** 2
        out["a"] = base**h + 1
        for u in range(1, (n + p - 4) // p + 1):
            if n - 2 <= u * p <= n + p - 4:
                val = base - _C(u * p + 1, n - 1) ** 2 + _C(u * p, n - 1) ** 2
                out[f"b:u={u}"] = val**h + 1
    return out


def partial_ovoid_bound(family: str, n: int, p: int, h: int) -> int:
    """Smallest applicable p-rank bound on the size of a partial ovoid."""
    return min(partial_ovoid_bound_cases(family, n, p, h).values())


def _base_case_bound(family: str, n: int, p: int, h: int) -> int:
    """The unrefined bound: symplectic formula, the odd-p quadric formula
    (used for every p), and the first Hermitian formula."""
    kind = _kind(family)
    if kind == "symplectic":
        return _C(p + n - 1, p - 1) ** h + 1
    if kind == "quadric":
        return (_C(n + p - 2, p - 1) - _C(n + p - 4, p - 3)) ** h + 1
    return (_C(n + p - 2, p - 1) ** 2 - _C(n + p - 3, p - 2) ** 2) ** h + 1


def _space_bound(space: PolarSpaceParams, n: int | None = None) -> int:
    return partial_ovoid_bound(space.family, space.n if n is None else n, space.p, space.h)


def ramsey_upper(s: int, t: int) -> int:
    """Binomial upper bound C(s+t-2, s-1) on R(s, t)."""
    if s < 1 or t < 1:
        raise ValueError("need s, t >= 1")
    return comb(s + t - 2, s - 1)


def partial_movoid_ramsey_bound(space: PolarSpaceParams, m: int) -> int:
    """Largest size a partial m-ovoid can have: R(m+1, k+1) - 1 with k the partial ovoid bound."""
    if m < 1:
        raise ValueError("m must be positive")
    k = _space_bound(space)
    return ramsey_upper(m + 1, k + 1) - 1


def movoid_size(space: PolarSpaceParams, m: int) -> int:
    """Size m (q^(r+e-1) + 1) of an m-ovoid."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return m * space.ovoid_number


# ---------------------------------------------------------------------------
# Nonexistence thresholds
# ---------------------------------------------------------------------------


def ramsey_threshold_holds(r: int, p: int, m: int) -> bool:
    """r >= (m + log_p((2m)^2)) (p - 1) + 1, decided exactly.

    Equivalent to p^(r - 1 - m(p-1)) >= (2m)^(2(p-1)) with a non-negative exponent.
    """
    a = r - 1 - m * (p - 1)
    return a >= 0 and p**a >= (2 * m) ** (2 * (p - 1))


def spectral_threshold_holds(r: int, p: int) -> bool:
    """r >= (1 + log_p 7) p + 1 for p >= 5, and r >= 6 for p in {2, 3}."""
    if p in (2, 3):
        return r >= 6
    b = r - 1 - p
    return b >= 0 and p**b >= 7**p


def known_no_2ovoid(space: PolarSpaceParams) -> bool:
    """Spaces on the classical list without 2-ovoids."""
    fam, r, q = space.family, space.rank, space.q
    if fam == "symplectic":
        return r > 2 and q % 2 == 1
    if fam in ("elliptic", "hermitian-odd"):
        return r > 2
    if fam == "parabolic":
        return r > 4
    return False


@dataclass
class Verdict:
    nonexistent: bool
    triggers: list[str] = field(default_factory=list)

    @property
    def reason(self) -> str | None:
        return self.triggers[0] if self.triggers else None

    def __bool__(self):
        return self.nonexistent


def movoid_nonexistence(space: PolarSpaceParams, m: int) -> Verdict:
    """Which nonexistence criteria rule out an m-ovoid (m >= 2)."""
    if m < 2:
        raise ValueError("nonexistence criteria need m >= 2")
    triggers = []
    if m == 2 and known_no_2ovoid(space):
        triggers.append("known-2-ovoid-list")
    if m == 2 and spectral_threshold_holds(space.rank, space.p):
        triggers.append("spectral-threshold")
    if ramsey_threshold_holds(space.rank, space.p, m):
        triggers.append("ramsey-threshold")
    return Verdict(bool(triggers), triggers)


# ---------------------------------------------------------------------------
# Spectral bound on partial 2-ovoids
# ---------------------------------------------------------------------------


def srg_params(space: PolarSpaceParams) -> tuple[int, int, int, int]:
    """(v, k, e+, e-) of the collinearity graph."""
    r, q = space.rank, space.q
    if r < 2:
        raise ValueError("collinearity graphs need rank >= 2")
    v = space.sigma(r) * space.theta(r)
    k = q * space.theta(r - 1) * space.sigma(r - 1)
    return v, k, q ** (r - 1) - 1, -space.sigma(r - 1)


def srg_multiplicities(space: PolarSpaceParams) -> tuple[Fraction, Fraction]:
    """Multiplicities (f+, f-) of e+ and e-, from trace 0 and v - 1 = f+ + f-."""
    v, k, ep, em = srg_params(space)
    fp = Fraction(-k - (v - 1) * em, ep - em)
    return fp, (v - 1) - fp


@dataclass(frozen=True)
class SpectralBound:
    generic: int
    closed_form: int
    refined: int
    via_srg: Fraction

    @property
    def agree(self) -> bool:
        return self.generic == self.closed_form


def spectral_2ovoid_closed_form(space: PolarSpaceParams) -> int:
    """Closed-form partial 2-ovoid bound by family."""
    r, p, h, n, fam = space.rank, space.p, space.h, space.n, space.family
    if fam == "symplectic":
        q = space.q
        return q**r + q + 1 + q * _C(p + 2 * r - 3, p - 1) ** h
    if fam in ("elliptic", "parabolic", "hyperbolic"):
        q = space.q
        eps = {"elliptic": -1, "parabolic": 0, "hyperbolic": 1}[fam]
        bracket = _C(n + p - 4, p - 1) - _C(n + p - 6, p - 3)
        return q ** (r - eps) + q + 1 + q * bracket**h
    s = p**h  # field order is s^2
    bracket = _C(n + p - 4, p - 1) ** 2 - _C(n + p - 5, p - 2) ** 2
    lead = s ** (2 * r + 1) if fam == "hermitian-odd" else s ** (2 * r - 1)
    return lead + s * s + 1 + s * s * bracket**h


def spectral_2ovoid_bound(space: PolarSpaceParams) -> SpectralBound:
    """q b(n-2, q) + sigma_r, three ways.

    ``generic`` uses the unrefined p-rank bound for b, ``closed_form`` the
    per-family formula. ``via_srg`` is the eigenvalue bound v (b - e-)/(k - e-)
    in exact rationals before rounding sigma_r/sigma_(r-1) up to q, so it never
    exceeds ``generic``. ``refined`` substitutes the smallest applicable b.
    """
    if space.rank < 3:
        raise ValueError("the spectral bound needs rank >= 3")
    q, r = space.q, space.rank
    b = _base_case_bound(space.family, space.n - 2, space.p, space.h)
    generic = q * b + space.sigma(r)
    v, k, _, em = srg_params(space)
    via_srg = Fraction(v * (b - em), k - em)
    refined = q * _space_bound(space, space.n - 2) + space.sigma(r)
    return SpectralBound(generic, spectral_2ovoid_closed_form(space), refined, via_srg)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundEntry:
    name: str
    value: int
    tag: str
    applies: bool = True  # bounds partial m-ovoids of the report's m


@dataclass
class BoundReport:
    space: PolarSpaceParams
    m: int
    entries: list[BoundEntry]
    verdict: Verdict | None

    @property
    def best(self) -> BoundEntry | None:
        upper = [e for e in self.entries if e.tag != "size" and e.applies]
        return min(upper, key=lambda e: e.value) if upper else None

    def value(self, name: str) -> int | None:
        return next((e.value for e in self.entries if e.name == name), None)

    def verdict_text(self) -> str:
        if self.verdict is None:
            return "n/a"
        return ("nonexistent:" + "+".join(self.verdict.triggers)) if self.verdict else "open"

    def to_dict(self) -> dict:
        best = self.best
        return {
            "space": self.space.to_dict(),
            "label": self.space.label(),
            "m": self.m,
            "entries": [
                {"name": e.name, "value": e.value, "tag": e.tag, "applies": e.applies,
                 "best": e is best}
                for e in self.entries
            ],
            "verdict": None if self.verdict is None else {
                "nonexistent": self.verdict.nonexistent,
                "triggers": self.verdict.triggers,
            },
        }

    def to_table(self) -> str:
        best = self.best
        lines = [f"{self.space.label()}  (family={self.space.family}, r={self.space.rank}, "
                 f"q={self.space.q}, m={self.m})"]
        width = max(len(e.name) for e in self.entries)
        for e in self.entries:
            mark = "*" if e is best else " "
            note = "" if e.applies else "  (partial ovoids only)"
            lines.append(f" {mark} {e.name:<{width}}  {e.value:>12}  [{e.tag}]{note}")
        lines.append(f"   verdict: {self.verdict_text()}")
        return "\n".join(lines) + "\n"


def bound_report(space: PolarSpaceParams, m: int) -> BoundReport:
    """All bounds that apply to partial m-ovoids of ``space``, plus the m-ovoid verdict."""
    entries = [BoundEntry("movoid-size", movoid_size(space, m), "size")]
    if space.n >= 4:
        entries.append(BoundEntry("partial-ovoid", _space_bound(space), "p-rank", applies=m == 1))
        if m >= 1:
            entries.append(BoundEntry("ramsey", partial_movoid_ramsey_bound(space, m), "ramsey"))
    if m == 2 and space.rank >= 3:
        sb = spectral_2ovoid_bound(space)
        entries.append(BoundEntry("spectral", sb.generic, "spectral"))
        entries.append(BoundEntry("spectral-closed-form", sb.closed_form, "spectral-closed-form"))
        entries.append(BoundEntry("spectral-refined", sb.refined, "refined"))
    verdict = movoid_nonexistence(space, m) if m >= 2 else None
    return BoundReport(space, m, entries, verdict)


def bounds_grid(family: str, ranks, qs, m: int) -> list[BoundReport]:
    """Reports for every valid (r, q) in the grid; invalid combinations are skipped."""
    out = []
    for r in ranks:
        for q in qs:
            try:
                space = polar_params(family, r, q)
            except ValueError:
                continue
            out.append(bound_report(space, m))
    return out


CSV_COLUMNS = ["family", "r", "q", "m", "bound-name", "value", "verdict",
               "movoid-size", "partial-ovoid", "ramsey", "spectral",
               "spectral-closed-form", "spectral-refined"]


def report_rows_csv(reports) -> str:
    """One CSV row per space: the best bound and verdict, then every value."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in reports:
        best = rep.best
        row = [rep.space.family, rep.space.rank, rep.space.q, rep.m,
               best.name if best else "", best.value if best else "", rep.verdict_text()]
        row += ["" if rep.value(c) is None else rep.value(c) for c in CSV_COLUMNS[7:]]
        w.writerow(row)
    return buf.getvalue()
