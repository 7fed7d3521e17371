"""Truncated Hopf algebroid structure maps at p = 3.

The coefficient ring is a polynomial ring on Hazewinkel generators v_i of
degree 2*3^i - 2, the operations ring adds generators t_i of the same
degrees.  The right unit and the coproduct are derived from scratch by the
logarithm recursion

    3 * m_n = sum_{0 <= i < n} m_i * v_{n-i}^{3^i}        (m_0 = 1)

carried out exactly over Q and then reduced mod 3^N; a non-integral
coefficient after substitution is a hard error, not something to round.

Elements are stored in a normal form with all polynomial-ring coefficients
collected in the leftmost position; a coefficient created inside a tensor
slot is migrated left through the right unit,

    gamma (x) a*delta  =  gamma * eta_R(a) (x) delta,

recursively until it reaches the front.  That normal form is what the cobar
differential is written against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

DEGREES = (4, 16, 52)  # |v_{i+1}| = |t_{i+1}| = 2*3^(i+1) - 2
MAX_GENS = 3
CONVENTION = "3*m_n = sum_{0<=i<n} m_i v_{n-i}^{3^i}; Hazewinkel generators"

Vexp = Tuple[int, int, int]
Texp = Tuple[int, int, int]
Key = Tuple[Vexp, Tuple[Texp, ...]]

ZERO_V: Vexp = (0, 0, 0)


def gen_count(T: int) -> int:
    """Number of generator pairs (v_i, t_i) present at truncation T."""
    return sum(1 for d in DEGREES if d < T)


def vdeg(vexp: Vexp) -> int:
    return sum(e * d for e, d in zip(vexp, DEGREES))


def key_degree(key: Key) -> int:
    vexp, slots = key
    return vdeg(vexp) + sum(vdeg(t) for t in slots)


def _addv(a: Vexp, b: Vexp) -> Vexp:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


class El:
    """Graded element with coefficients mod 3^N in left-collected normal form.

    ``arity`` counts tensor slots; arity 0 is a plain coefficient-ring
    element, arity 1 lives in the operations ring, arity f in its f-fold
    tensor power.  Empty slots (exponent zero) are legal here; the cobar
    layer projects them away.
    """

    __slots__ = ("terms", "arity", "N")

    def __init__(self, arity: int, N: int, terms: Optional[Dict[Key, int]] = None):
        self.arity = arity
        self.N = N
        self.terms = terms or {}

    @property
    def q(self) -> int:
        return 3 ** self.N

    def copy(self) -> "El":
        return El(self.arity, self.N, dict(self.terms))

    def add_term(self, key: Key, coeff: int) -> None:
        c = (self.terms.get(key, 0) + coeff) % self.q
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)

    def __add__(self, other: "El") -> "El":
        assert self.arity == other.arity and self.N == other.N
        out = self.copy()
        for k, c in other.terms.items():
            out.add_term(k, c)
        return out

    def __sub__(self, other: "El") -> "El":
        return self + other.scale(-1)

    def scale(self, c: int) -> "El":
        out = El(self.arity, self.N)
        for k, v in self.terms.items():
            out.add_term(k, v * c)
        return out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, El)
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_homogeneous(self) -> Optional[int]:
        degs = {key_degree(k) for k in self.terms}
        if len(degs) > 1:
            return None
        return degs.pop() if degs else 0

    def __repr__(self) -> str:
        return f"El(arity={self.arity}, terms={len(self.terms)})"


def el_mul(a: El, b: El) -> El:
    """Product; slotwise for equal arity, scalar action for arity 0."""
    assert a.N == b.N
    if b.arity == 0 and a.arity != 0:
        return el_mul(b, a)
    out = El(b.arity if a.arity == 0 else a.arity, a.N)
    for (va, sa), ca in a.terms.items():
        for (vb, sb), cb in b.terms.items():
            if a.arity == 0:
                key = (_addv(va, vb), sb)
            else:
                assert a.arity == b.arity
                key = (_addv(va, vb), tuple(_addv(x, y) for x, y in zip(sa, sb)))
            out.add_term(key, ca * cb)
    return out


def el_one(arity: int, N: int) -> El:
    return El(arity, N, {(ZERO_V, tuple(ZERO_V for _ in range(arity))): 1})


def el_pow(a: El, n: int) -> El:
    out = el_one(a.arity, a.N)
    base = a
    while n:
        if n & 1:
            out = el_mul(out, base)
        base = el_mul(base, base)
        n >>= 1
    return out


# ---------------------------------------------------------------------------
# rational layer: exact polynomials in m_i, v_i, t_i over Q

RKey = Tuple[Tuple[int, int, int], Vexp, Tuple[Texp, ...]]  # (mexp, vexp, slots)


def _radd_term(d: Dict[RKey, Fraction], key: RKey, c: Fraction) -> None:
    nc = d.get(key, Fraction(0)) + c
    if nc:
        d[key] = nc
    else:
        d.pop(key, None)


def rmul(a: Dict[RKey, Fraction], b: Dict[RKey, Fraction]) -> Dict[RKey, Fraction]:
    out: Dict[RKey, Fraction] = {}
    for (ma, va, sa), ca in a.items():
        for (mb, vb, sb), cb in b.items():
            if not sa:
                slots = sb
            elif not sb:
                slots = sa
            else:
                assert len(sa) == len(sb)
                slots = tuple(_addv(x, y) for x, y in zip(sa, sb))
            key = (_addv(ma, mb), _addv(va, vb), slots)
            _radd_term(out, key, ca * cb)
    return out


def radd(a: Dict[RKey, Fraction], b: Dict[RKey, Fraction]) -> Dict[RKey, Fraction]:
    out = dict(a)
    for k, c in b.items():
        _radd_term(out, k, c)
    return out


def rscale(a: Dict[RKey, Fraction], c: Fraction) -> Dict[RKey, Fraction]:
    return {k: v * c for k, v in a.items()} if c else {}


def rpow(a: Dict[RKey, Fraction], n: int) -> Dict[RKey, Fraction]:
    out: Dict[RKey, Fraction] = {((0, 0, 0), ZERO_V, ()): Fraction(1)}
    base = a
    while n:
        if n & 1:
            out = rmul(out, base)
        base = rmul(base, base)
        n >>= 1
    return out


def _rvar(kind: str, i: int, arity_slot: Optional[int] = None, arity: int = 0) -> Dict[RKey, Fraction]:
    """Monomial m_i, v_i, or t_i (t placed into a given slot of given arity)."""
    e = [0, 0, 0]
    e[i - 1] = 1
    if kind == "m":
        return {((e[0], e[1], e[2]), ZERO_V, ()): Fraction(1)}
    if kind == "v":
        return {((0, 0, 0), (e[0], e[1], e[2]), ()): Fraction(1)}
    slots = [ZERO_V] * arity
    slots[arity_slot] = (e[0], e[1], e[2])
    return {((0, 0, 0), ZERO_V, tuple(slots)): Fraction(1)}


def _substitute_m(
    poly: Dict[RKey, Fraction], m_expr: List[Dict[RKey, Fraction]]
) -> Dict[RKey, Fraction]:
    out: Dict[RKey, Fraction] = {}
    for (mexp, vexp, slots), c in poly.items():
        term: Dict[RKey, Fraction] = {((0, 0, 0), vexp, slots): c}
        for i, e in enumerate(mexp):
            if e:
                term = rmul(term, rpow(m_expr[i], e))
        out = radd(out, term)
    return out


def _to_integer_el(poly: Dict[RKey, Fraction], arity: int, N: int, what: str) -> El:
    q = 3 ** N
    out = El(arity, N)
    for (mexp, vexp, slots), c in poly.items():
        if any(mexp):
            raise ValueError(f"{what}: residual log coefficient after substitution")
        if c.denominator != 1:
            raise ValueError(f"{what}: non-integral coefficient {c}")
        slots = slots if slots else tuple(ZERO_V for _ in range(arity))
        out.add_term((vexp, slots), int(c) % q)
    return out


# ---------------------------------------------------------------------------


@dataclass
class StructureMaps:
    """Right unit and coproduct on the generators, with derived caches."""

    T: int
    N: int
    k: int
    eta_r_gen: List[El]  # eta_r_gen[i] = eta_R(v_{i+1}), arity 1
    coprod_gen: List[El]  # coprod_gen[i] = coproduct of t_{i+1}, arity 2
    _eta_pow: Dict[Vexp, El] = field(default_factory=dict, repr=False)
    _delta: Dict[Texp, El] = field(default_factory=dict, repr=False)
    _delta_bar: Dict[Texp, El] = field(default_factory=dict, repr=False)
    _migrate: Dict[Tuple[Vexp, Tuple[Texp, ...]], Dict[Key, int]] = field(
        default_factory=dict, repr=False
    )

    @property
    def q(self) -> int:
        return 3 ** self.N

    def v_el(self, vexp: Vexp, arity: int = 0) -> El:
        return El(arity, self.N, {(vexp, tuple(ZERO_V for _ in range(arity))): 1})

    def t_el(self, texp: Texp) -> El:
        return El(1, self.N, {(ZERO_V, (texp,)): 1})

    def eta_pow(self, vexp: Vexp) -> El:
        """eta_R(v^vexp) as an arity-1 element, memoized multiplicatively."""
        vexp = tuple(vexp)  # type: ignore[assignment]
        if vexp in self._eta_pow:
            return self._eta_pow[vexp]
        out = el_one(1, self.N)
        for i, e in enumerate(vexp):
            if e:
                out = el_mul(out, el_pow(self.eta_r_gen[i], e))
        self._eta_pow[vexp] = out
        return out

    def delta(self, texp: Texp) -> El:
        """Full coproduct of the slot monomial t^texp (arity 2)."""
        texp = tuple(texp)  # type: ignore[assignment]
        if texp in self._delta:
            return self._delta[texp]
        out = el_one(2, self.N)
        for i, e in enumerate(texp):
            if e:
                out = el_mul(out, el_pow(self.coprod_gen[i], e))
        self._delta[texp] = out
        return out

    def delta_bar(self, texp: Texp) -> El:
        """Reduced coproduct: terms with an empty child slot dropped."""
        texp = tuple(texp)  # type: ignore[assignment]
        if texp in self._delta_bar:
            return self._delta_bar[texp]
        full = self.delta(texp)
        out = El(2, self.N)
        for (v, (x, y)), c in full.terms.items():
            if any(x) and any(y):
                out.add_term((v, (x, y)), c)
        self._delta_bar[texp] = out
        return out

    def migrate(self, vexp: Vexp, slots: Tuple[Texp, ...]) -> Dict[Key, int]:
        """Move a coefficient v^vexp leftward through the given slots.

        Returns terms (vexp', slots') with the coefficient at the front and
        the slot contents multiplied by the t-parts of the right units
        crossed on the way.
        """
        key = (tuple(vexp), tuple(slots))
        if key in self._migrate:
            return self._migrate[key]
        if not any(vexp) or not slots:
            out = {(tuple(vexp), tuple(slots)): 1}
        else:
            out = {}
            last = slots[-1]
            prefix = slots[:-1]
            for (vb, (td,)), cb in self.eta_pow(tuple(vexp)).terms.items():
                for (v0, s0), c0 in self.migrate(vb, prefix).items():
                    k2 = (v0, s0 + (_addv(last, td),))
                    out[k2] = (out.get(k2, 0) + cb * c0) % self.q
            out = {k: c for k, c in out.items() if c}
        self._migrate[key] = out
        return out

    def concat(self, a: El, b: El) -> El:
        """Tensor concatenation with left migration of b's coefficient."""
        assert a.N == b.N
        out = El(a.arity + b.arity, self.N)
        for (va, sa), ca in a.terms.items():
            for (vb, sb), cb in b.terms.items():
                for (v0, s0), c0 in self.migrate(vb, sa).items():
                    out.add_term((_addv(va, v0), s0 + sb), ca * cb * c0)
        return out

    def delta_on_slot(self, el: El, pos: int) -> El:
        """Apply the coproduct to slot ``pos``, renormalizing coefficients."""
        out = El(el.arity + 1, self.N)
        for (v, slots), c in el.terms.items():
            d = self.delta(slots[pos])
            for (vd, (x, y)), cd in d.terms.items():
                for (v0, s0), c0 in self.migrate(vd, slots[:pos]).items():
                    new_slots = s0 + (x, y) + slots[pos + 1 :]
                    out.add_term((_addv(v, v0), new_slots), c * cd * c0)
        return out

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        def dump_el(el: El):
            return sorted(
                [list(v), [list(t) for t in slots], c]
                for (v, slots), c in el.terms.items()
            )

        return json.dumps(
            {
                "convention": CONVENTION,
                "T": self.T,
                "N": self.N,
                "k": self.k,
                "eta_r": [dump_el(e) for e in self.eta_r_gen],
                "coprod": [dump_el(e) for e in self.coprod_gen],
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "StructureMaps":
        data = json.loads(text)

        def load_el(rows, arity):
            el = El(arity, data["N"])
            for v, slots, c in rows:
                el.add_term((tuple(v), tuple(tuple(t) for t in slots)), c)
            return el

        return cls(
            T=data["T"],
            N=data["N"],
            k=data["k"],
            eta_r_gen=[load_el(r, 1) for r in data["eta_r"]],
            coprod_gen=[load_el(r, 2) for r in data["coprod"]],
        )


_MAPS_CACHE: Dict[Tuple[int, int], StructureMaps] = {}


def derive_structure_maps(T: int = 52, N: int = 5) -> StructureMaps:
    """Derive eta_R and the coproduct at truncation T, modulus 3^N."""
    cached = _MAPS_CACHE.get((T, N))
    if cached is not None:
        return cached
    k = gen_count(T)
    if k == 0:
        raise ValueError(f"truncation T={T} admits no generators")

    # m_n = (v_n + sum_{1<=i<n} m_i v_{n-i}^{3^i}) / 3, exactly over Q
    m_expr: List[Dict[RKey, Fraction]] = []
    for n in range(1, MAX_GENS + 1):
        acc = _rvar("v", n)
        for i in range(1, n):
            acc = radd(acc, rmul(m_expr[i - 1], rpow(_rvar("v", n - i), 3 ** i)))
        m_expr.append(rscale(acc, Fraction(1, 3)))

    # right unit: mR_n = sum_{0<=i<=n} m_i t_{n-i}^{3^i},
    # then vR_n = 3*mR_n - sum_{1<=i<n} mR_i vR_{n-i}^{3^i}
    one: Dict[RKey, Fraction] = {((0, 0, 0), ZERO_V, ()): Fraction(1)}
    mR: List[Dict[RKey, Fraction]] = [one]
    for n in range(1, k + 1):
        acc: Dict[RKey, Fraction] = {}
        for i in range(0, n + 1):
            mi = one if i == 0 else _rvar("m", i)
            tpart = one if i == n else rpow(_rvar("t", n - i, 0, 1), 3 ** i)
            acc = radd(acc, rmul(mi, tpart))
        mR.append(acc)
    vR: List[Dict[RKey, Fraction]] = [one]
    for n in range(1, k + 1):
        acc = rscale(mR[n], Fraction(3))
        for i in range(1, n):
            acc = radd(acc, rscale(rmul(mR[i], rpow(vR[n - i], 3 ** i)), Fraction(-1)))
        vR.append(acc)

    eta_r_gen = [
        _to_integer_el(_substitute_m(vR[n], m_expr), 1, N, f"eta_R(v{n})")
        for n in range(1, k + 1)
    ]

    # coproduct: from sum_{i+j=n} m_i Delta(t_j)^{3^i}
    #              = sum_{i+j+l=n} m_i t_j^{3^i} (x) t_l^{3^{i+j}}
    one2: Dict[RKey, Fraction] = {((0, 0, 0), ZERO_V, (ZERO_V, ZERO_V)): Fraction(1)}
    dt: List[Dict[RKey, Fraction]] = [one2]
    for n in range(1, k + 1):
        rhs: Dict[RKey, Fraction] = {}
        for i in range(0, n + 1):
            for j in range(0, n + 1 - i):
                l = n - i - j
                mi = one if i == 0 else _rvar("m", i)
                left = one2 if j == 0 else rpow(_rvar("t", j, 0, 2), 3 ** i)
                right = one2 if l == 0 else rpow(_rvar("t", l, 1, 2), 3 ** (i + j))
                rhs = radd(rhs, rmul(mi, rmul(left, right)))
        for i in range(1, n + 1):
            mi = _rvar("m", i)
            rhs = radd(rhs, rscale(rmul(mi, rpow(dt[n - i], 3 ** i)), Fraction(-1)))
        dt.append(rhs)

    coprod_gen = [
        _to_integer_el(_substitute_m(dt[n], m_expr), 2, N, f"coproduct(t{n})")
        for n in range(1, k + 1)
    ]

    maps = StructureMaps(T=T, N=N, k=k, eta_r_gen=eta_r_gen, coprod_gen=coprod_gen)
    _MAPS_CACHE[(T, N)] = maps
    return maps


# ---------------------------------------------------------------------------
# axiom certification


@dataclass
class AxiomFailure:
    identity: str
    generator: str
    degree: int
    detail: str = ""


@dataclass
class AxiomReport:
    ok: bool
    checked: List[str]
    failures: List[AxiomFailure]


def axiom_check(maps: StructureMaps) -> AxiomReport:
    """Certify the Hopf algebroid identities generator by generator."""
    checked: List[str] = []
    failures: List[AxiomFailure] = []
    N = maps.N

    def t_unit(i: int) -> Texp:
        e = [0, 0, 0]
        e[i] = 1
        return (e[0], e[1], e[2])

    for i in range(maps.k):
        gname = f"t{i + 1}"
        deg = DEGREES[i]
        ti = t_unit(i)
        d = maps.coprod_gen[i]

        # counit on either side must return the generator
        left_counit = El(1, N)
        right_counit = El(1, N)
        for (v, (x, y)), c in d.terms.items():
            if not any(x):
                left_counit.add_term((v, (y,)), c)
            if not any(y):
                right_counit.add_term((v, (x,)), c)
        expected = maps.t_el(ti)
        checked.append(f"counit({gname})")
        if left_counit != expected:
            failures.append(AxiomFailure("counit-left", gname, deg))
        if right_counit != expected:
            failures.append(AxiomFailure("counit-right", gname, deg))

        # coassociativity
        checked.append(f"coassoc({gname})")
        lhs = maps.delta_on_slot(d, 0)
        rhs = maps.delta_on_slot(d, 1)
        if lhs != rhs:
            failures.append(AxiomFailure("coassociativity", gname, deg))

    for i in range(maps.k):
        gname = f"v{i + 1}"
        deg = DEGREES[i]
        e = [0, 0, 0]
        e[i] = 1
        vexp = (e[0], e[1], e[2])
        eta = maps.eta_r_gen[i]

        # counit of the right unit recovers the generator
        checked.append(f"counit(eta_R({gname}))")
        tfree = El(0, N)
        for (v, (x,)), c in eta.terms.items():
            if not any(x):
                tfree.add_term((v, ()), c)
        if tfree != maps.v_el(vexp):
            failures.append(AxiomFailure("counit-eta_R", gname, deg))

        # coproduct of a right-unit coefficient equals 1 (x) that coefficient
        checked.append(f"right-unit-compat({gname})")
        lhs = maps.delta_on_slot(eta, 0)
        rhs = El(2, N)
        for (v, (dslot,)), c in eta.terms.items():
            for (v2, (x,)), c2 in maps.eta_pow(v).terms.items():
                rhs.add_term((v2, (x, dslot)), c * c2)
        if lhs != rhs:
            failures.append(AxiomFailure("right-unit-compatibility", gname, deg))

    # multiplicativity of eta_R on generator pairs within the truncation
    for i in range(maps.k):
        for j in range(i, maps.k):
            if DEGREES[i] + DEGREES[j] > 2 * maps.T:
                continue
            e = [0, 0, 0]
            e[i] += 1
            e[j] += 1
            vexp = (e[0], e[1], e[2])
            checked.append(f"eta_R-multiplicative(v{i+1}v{j+1})")
            prod = el_mul(maps.eta_r_gen[i], maps.eta_r_gen[j])
            if prod != maps.eta_pow(vexp):
                failures.append(
                    AxiomFailure("eta_R-multiplicativity", f"v{i+1}v{j+1}", DEGREES[i] + DEGREES[j])
                )

    return AxiomReport(ok=not failures, checked=checked, failures=failures)
