"""Height-1-adjacent congruence checks in a mod-3 Morava E-theory model.

The working ring is F9[[u1]][u^{+-1}] truncated at a u1-precision of at most
6, with F9 = F3[w], w^2 = w + 1 (so w generates the units and w^4 = -1).
The images are v1 -> u1 u^-2 and v2 -> u^-8, and the discriminant-style
series is Delta = (1 - z u1^2 + u1^4) z u^-12 for an eighth-root square z.
The choice of eighth root is not pinned down: the verifier tries every odd
power of w and records which one makes the congruences hold.

Requests at height >= 2 are answered with an insufficient-precision report
rather than an attempt: the u1-adic data available here simply does not
determine those rings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

F9 = Tuple[int, int]  # a + b*w with w^2 = w + 1
MAX_PRECISION = 6


def f9_add(x: F9, y: F9) -> F9:
    return ((x[0] + y[0]) % 3, (x[1] + y[1]) % 3)


def f9_mul(x: F9, y: F9) -> F9:
    # (a + bw)(c + dw) = ac + (ad + bc)w + bd w^2, w^2 = w + 1
    a, b = x
    c, d = y
    return ((a * c + b * d) % 3, (a * d + b * c + b * d) % 3)


def f9_neg(x: F9) -> F9:
    return ((-x[0]) % 3, (-x[1]) % 3)


def f9_pow(x: F9, n: int) -> F9:
    out: F9 = (1, 0)
    base = x
    while n:
        if n & 1:
            out = f9_mul(out, base)
        base = f9_mul(base, base)
        n >>= 1
    return out


W: F9 = (0, 1)

Series = Dict[Tuple[int, int], F9]  # (u1 exponent, u exponent) -> coefficient


def s_add(a: Series, b: Series, K: int) -> Series:
    out = dict(a)
    for k, c in b.items():
        v = f9_add(out.get(k, (0, 0)), c)
        if v == (0, 0):
            out.pop(k, None)
        else:
            out[k] = v
    return {k: c for k, c in out.items() if k[0] < K and c != (0, 0)}


def s_mul(a: Series, b: Series, K: int) -> Series:
    out: Series = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            i = i1 + i2
            if i >= K:
                continue
            k = (i, j1 + j2)
            v = f9_add(out.get(k, (0, 0)), f9_mul(c1, c2))
            if v == (0, 0):
                out.pop(k, None)
            else:
                out[k] = v
    return out


def s_pow(a: Series, n: int, K: int) -> Series:
    out: Series = {(0, 0): (1, 0)}
    base = a
    while n:
        if n & 1:
            out = s_mul(out, base, K)
        base = s_mul(base, base, K)
        n >>= 1
    return out


def s_neg(a: Series) -> Series:
    return {k: f9_neg(c) for k, c in a.items()}


def v1_image(K: int) -> Series:
    return {(1, -2): (1, 0)}


def v2_image() -> Series:
    return {(0, -8): (1, 0)}


def delta_series(z: F9, K: int) -> Series:
    """(1 - z u1^2 + u1^4) * z * u^-12 at u1-precision K."""
    body: Series = {(0, 0): (1, 0)}
    if K > 2:
        body[(2, 0)] = f9_neg(z)
    if K > 4:
        body[(4, 0)] = (1, 0)
    return s_mul(body, {(0, -12): z}, K)


@dataclass
class CongruenceCheck:
    name: str
    precision: int
    ok: bool


@dataclass
class EtheoryReport:
    height: int
    ok: bool
    unit_exponent: Optional[int]  # the odd power of w whose square was used
    checks: List[CongruenceCheck] = field(default_factory=list)
    message: str = ""


def _run_checks(z: F9, K: int) -> List[CongruenceCheck]:
    v1 = v1_image(K)
    v2 = v2_image()
    checks = []

    # v2^9 + Delta^6 = 0 at full precision
    d6 = delta_series(z, 6)
    lhs = s_add(s_pow(v2, 9, 6), s_pow(d6, 6, 6), 6)
    checks.append(CongruenceCheck("v2^9 = -Delta^6 mod (3, u1^6)", 6, not lhs))

    # v2^6 = Delta^4 - v1^2 v2 Delta^3 at u1-precision 3
    d3 = delta_series(z, 3)
    rhs = s_add(
        s_pow(d3, 4, 3),
        s_neg(s_mul(s_mul(s_pow(v1, 2, 3), v2, 3), s_pow(d3, 3, 3), 3)),
        3,
    )
    diff = s_add(s_pow(v2, 6, 3), s_neg(rhs), 3)
    checks.append(CongruenceCheck("v2^6 = Delta^4 - v1^2 v2 Delta^3 mod (3, u1^3)", 3, not diff))

    # v2^3 = -Delta^2 - v1^2 v2 Delta at full precision
    rhs3 = s_add(
        s_neg(s_pow(d6, 2, 6)),
        s_neg(s_mul(s_mul(s_pow(v1, 2, 6), v2, 6), d6, 6)),
        6,
    )
    diff3 = s_add(s_pow(v2, 3, 6), s_neg(rhs3), 6)
    checks.append(CongruenceCheck("v2^3 = -Delta^2 - v1^2 v2 Delta mod (3, u1^6)", 6, not diff3))
    return checks


def verify(height: int = 1, precision: int = MAX_PRECISION) -> EtheoryReport:
    """Run the congruence battery, or refuse above the supported height."""
    if height >= 2:
        return EtheoryReport(
            height=height,
            ok=False,
            unit_exponent=None,
            message=(
                "insufficient precision: the u1-adic expansion available "
                f"here (u1-precision {MAX_PRECISION}) does not determine "
                f"height {height}"
            ),
        )
    if precision > MAX_PRECISION:
        raise ValueError(f"u1-precision capped at {MAX_PRECISION}")
    last: List[CongruenceCheck] = []
    for e in (1, 3, 5, 7):
        z = f9_pow(W, 2 * e)  # the square of the chosen eighth root
        checks = _run_checks(z, precision)
        if all(c.ok for c in checks):
            return EtheoryReport(height=1, ok=True, unit_exponent=e, checks=checks)
        last = checks
    return EtheoryReport(
        height=1,
        ok=False,
        unit_exponent=None,
        checks=last,
        message="no eighth-root choice satisfies the congruences",
    )
