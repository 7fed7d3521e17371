"""Comodule presentations of the coefficient ring and its cyclic quotients.

Three shapes are supported: the full coefficient ring, its reduction mod 3,
and the quotients by (3, v1^m).  Quotienting by 3 forces the working modulus
down to 3 regardless of the ambient 3^N; quotienting by v1^m truncates the
v1-exponent of every monomial below m.  Each presentation knows its coaction
(the right unit, reduced), and can certify that the ideal it quotients by is
invariant, which is what makes the quotient a comodule at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from .hopfalg import El, StructureMaps, Vexp, ZERO_V, vdeg


@dataclass(frozen=True)
class SESDescriptor:
    """One short exact sequence of comodules, recorded by its maps.

    ``kind == "mod3"``:  0 -> M --3--> M --i--> M/3 -> 0, degree shift 0 on i
    and -1 on the stem for the connecting map.
    ``kind == "v1"``:  0 -> M/(3,v1^m) --v1^k--> M/(3,v1^{m+k}) --i--> M/(3,v1^k) -> 0
    with the middle map multiplication by v1^k of internal degree 4k.
    """

    kind: str
    m: int = 0
    k: int = 0

    @property
    def connecting_stem_shift(self) -> int:
        return -1 if self.kind == "mod3" else -(4 * self.k + 1)


class ComodulePresentation:
    """A cyclic comodule over the truncated Hopf algebroid.

    ``ideal`` is one of ``"0"`` (the coefficient ring itself), ``"3"``, or
    ``"3,v1^m"`` with ``m >= 1``.
    """

    def __init__(self, maps: StructureMaps, ideal: str = "0", m: int = 0):
        self.maps = maps
        if ideal not in ("0", "3", "3,v1^m"):
            raise ValueError(f"unsupported ideal {ideal!r}")
        if ideal == "3,v1^m" and m < 1:
            raise ValueError("v1-power quotient needs m >= 1")
        self.ideal = ideal
        self.m = m if ideal == "3,v1^m" else 0
        self.N = 1 if ideal != "0" else maps.N
        self.q = 3 ** self.N

    @property
    def label(self) -> str:
        if self.ideal == "0":
            return "S"
        if self.ideal == "3":
            return "S/3"
        return f"S/(3,v1^{self.m})"

    def monomial_ok(self, vexp: Vexp) -> bool:
        if self.ideal == "3,v1^m" and vexp[0] >= self.m:
            return False
        return True

    def reduce(self, el: El) -> El:
        """Reduce coefficients mod the ideal and the working modulus."""
        out = El(el.arity, self.N)
        for (vexp, slots), c in el.terms.items():
            if not self.monomial_ok(vexp):
                continue
            out.add_term((vexp, slots), c)
        return out

    def coaction(self, vexp: Vexp) -> El:
        """psi(v^vexp): the right unit applied to a module monomial, reduced."""
        if not self.monomial_ok(vexp):
            raise ValueError(f"monomial {vexp} is zero in {self.label}")
        return self.reduce(self.maps.eta_pow(vexp))

    def reduced_coaction(self, vexp: Vexp) -> El:
        """Coaction with the t-free part removed (the counit component)."""
        psi = self.coaction(vexp)
        out = El(1, self.N)
        for (v, (t,)), c in psi.terms.items():
            if any(t):
                out.add_term((v, (t,)), c)
        return out

    def monomials(self, degree: int) -> Iterator[Vexp]:
        """Module monomial basis in one internal degree, in generator order."""
        degs = [4, 16, 52][: self.maps.k]

        def rec(i: int, rem: int, acc: List[int]) -> Iterator[Vexp]:
            if i == len(degs):
                if rem == 0:
                    v = tuple(acc) + (0,) * (3 - len(acc))
                    if self.monomial_ok(v):  # type: ignore[arg-type]
                        yield v  # type: ignore[misc]
                return
            for e in range(rem // degs[i] + 1):
                yield from rec(i + 1, rem - e * degs[i], acc + [e])

        yield from rec(0, degree, [])

    def invariance_check(self) -> Tuple[bool, str]:
        """Certify that the quotient ideal is a subcomodule.

        For (3) this is automatic (the coaction is additive); for v1^m the
        content is that psi(v1^m) reduces to zero mod (3, v1^m).
        """
        if self.ideal == "0":
            return True, "no ideal"
        if self.ideal == "3":
            return True, "principal ideal (3); coaction commutes with 3"
        residue = self.reduce(self.maps.eta_pow((self.m, 0, 0)))
        if residue:
            return False, f"psi(v1^{self.m}) has nonzero residue mod (3, v1^{self.m})"
        return True, f"psi(v1^{self.m}) = 0 mod (3, v1^{self.m})"

    def ses_to_quotient(self, other: "ComodulePresentation") -> SESDescriptor:
        """The short exact sequence linking self to a further quotient."""
        if self.ideal == "0" and other.ideal == "3":
            return SESDescriptor(kind="mod3")
        if self.ideal in ("3", "3,v1^m") and other.ideal == "3,v1^m":
            m_self = self.m if self.ideal == "3,v1^m" else None
            if m_self is None or m_self > other.m:
                k = other.m
                return SESDescriptor(kind="v1", m=m_self or 0, k=k)
        raise ValueError(f"no supported SES from {self.label} to {other.label}")


def presentation_for_label(maps: StructureMaps, label: str) -> ComodulePresentation:
    """Parse a target label like ``S``, ``S/3``, ``S/(3,v1^8)``."""
    label = label.strip()
    if label == "S":
        return ComodulePresentation(maps, "0")
    if label == "S/3":
        return ComodulePresentation(maps, "3")
    if label.startswith("S/(3,v1^") and label.endswith(")"):
        m = int(label[len("S/(3,v1^") : -1])
        return ComodulePresentation(maps, "3,v1^m", m)
    raise ValueError(f"unrecognized target label {label!r}")
