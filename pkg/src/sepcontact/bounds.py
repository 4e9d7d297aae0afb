"""Closed-form contact-number bounds with exact floors.

Every bound below has the shape ``floor(d*n - y)`` with ``y`` a positive
algebraic number whose power ``y^k`` is rational, so ``ceil(y)`` and hence
the floor are decided with integer arithmetic only. The floating-point
route (:func:`guarded_floor`) is kept for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .errors import DomainError

GUARD = 1e-9
THM3_CONSTANT = (673, 500)  # 1.346 as an exact fraction

# quantity labels: c bounds all totally separable packings, c_Z lattice ones
C = "c"
C_Z = "c_Z"


def guarded_floor(x: float) -> int:
    """Floor with a 1e-9 guard band absorbing rounding below an integer."""
    return math.floor(x + GUARD)


def ceil_root(num: int, den: int, k: int) -> int:
    """Smallest integer ``m >= 0`` with ``m**k * den >= num``, i.e. ``ceil((num/den)^(1/k))``."""
    if num <= 0:
        return 0
    m = max(0, int(math.exp((math.log(num) - math.log(den)) / k)) - 2)
    while m ** k * den >= num and m > 0:
        m -= 1
    while m ** k * den < num:
        m += 1
    return m


def harborth_ts(n: int) -> int:
    """``floor(2n - 2 sqrt(n))``: the maximum contact number of n unit disks, totally separable."""
    if n < 2:
        raise DomainError("harborth_ts needs n >= 2")
    return 2 * n - ceil_root(4 * n, 1, 2)


def thm1_bound(n: int, d: int) -> int:
    """``floor(dn - d n^((d-1)/d))``, an upper bound on c_Z(n, d)."""
    if n < 2 or d < 2:
        raise DomainError("thm1_bound needs n >= 2 and d >= 2")
    # d * n^((d-1)/d) = (d^d n^(d-1))^(1/d)
    return d * n - ceil_root(d ** d * n ** (d - 1), 1, d)


def thm1_bound_float(n: int, d: int) -> int:
    return guarded_floor(d * n - d * n ** ((d - 1) / d))


def thm2_bound(n: int, d: int) -> int:
    """``floor(dn - n^((d-1)/d) / (2 d^((d-1)/2)))`` for d >= 4; bounds c(n, d)."""
    if n < 2:
        raise DomainError("thm2_bound needs n >= 2")
    if d < 4:
        raise DomainError("thm2_bound is only stated for d >= 4")
    # y^(2d) = n^(2(d-1)) / (4^d d^(d(d-1)))
    return d * n - ceil_root(n ** (2 * (d - 1)), 4 ** d * d ** (d * (d - 1)), 2 * d)


def thm2_bound_float(n: int, d: int) -> int:
    return guarded_floor(d * n - n ** ((d - 1) / d) / (2 * d ** ((d - 1) / 2)))


def thm3_bound(n: int) -> int:
    """``floor(3n - 1.346 n^(2/3))``; c(n, 3) is *strictly* below this value."""
    if n < 2:
        raise DomainError("thm3_bound needs n >= 2")
    p, q = THM3_CONSTANT
    # (p/q n^(2/3))^3 = p^3 n^2 / q^3
    return 3 * n - ceil_root(p ** 3 * n * n, q ** 3, 3)


def thm3_bound_float(n: int) -> int:
    return guarded_floor(3 * n - 1.346 * n ** (2.0 / 3.0))


def appendix_chain_check(n: int, c: int) -> bool:
    """True iff ``c <= 2n - 2 sqrt(n)``, the admissible root branch of
    ``c^2 - 4nc + 4n^2 - 4n >= 0`` below ``2n``."""
    if n < 2 or not 0 <= c < 2 * n:
        raise DomainError("need n >= 2 and 0 <= c < 2n")
    gap = 2 * n - c
    return gap * gap >= 4 * n


@dataclass(frozen=True)
class BoundEntry:
    name: str
    quantity: str
    value: int
    strict: bool = False


@dataclass(frozen=True)
class BoundReport:
    n: int
    d: int
    trivial_dn: int
    thm1_lattice: int
    harborth: int | None = None
    thm2: int | None = None
    thm3: int | None = None
    asymptotic3_mainterm: float | None = None
    flags: dict = field(default_factory=dict)

    def entries(self) -> list[BoundEntry]:
        out = [BoundEntry("trivial", C, self.trivial_dn),
               BoundEntry("thm1", C_Z, self.thm1_lattice)]
        if self.harborth is not None:
            out.append(BoundEntry("harborth", C, self.harborth))
        if self.thm2 is not None:
            out.append(BoundEntry("thm2", C, self.thm2))
        if self.thm3 is not None:
            out.append(BoundEntry("thm3", C, self.thm3, strict=True))
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["entries"] = [asdict(e) for e in self.entries()]
        return d


def bound_report(n: int, d: int) -> BoundReport:
    """Every bound that applies at ``(n, d)``, each labelled with the quantity it bounds."""
    if n < 2 or d < 2:
        raise DomainError("bound_report needs n >= 2 and d >= 2")
    trivial = d * n
    t1 = thm1_bound(n, d)
    harb = harborth_ts(n) if d == 2 else None
    t2 = thm2_bound(n, d) if d >= 4 else None
    t3 = thm3_bound(n) if d == 3 else None
    main = 3 * n - 3 * n ** (2.0 / 3.0) if d == 3 else None
    applicable = [b for b, v in (("harborth", harb), ("thm2", t2), ("thm3", t3)) if v is not None]
    flags = {
        "applicable": ["trivial", "thm1"] + applicable,
        "thm1_le_trivial": t1 <= trivial,
        "all_le_trivial": all(v <= trivial for v in (t1, harb, t2, t3) if v is not None),
    }
    if harb is not None:
        flags["harborth_eq_thm1"] = harb == t1
    if t3 is not None:
        flags["thm3_strict"] = True
    if not flags["all_le_trivial"]:
        raise AssertionError(f"a bound exceeds dn at (n={n}, d={d})")
    return BoundReport(n, d, trivial, t1, harb, t2, t3, main, flags)
