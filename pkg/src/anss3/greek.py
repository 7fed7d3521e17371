"""Greek-letter elements built through cofiber zig-zags.

beta(a, b) is the image of v2^a under the two connecting maps: first divide
the mod-3 coaction of v2^a by v1^b (possible exactly when b <= 3^(v3(a)),
with v3 the 3-adic valuation), then apply the integral zig-zag.  The result
is a coordinate vector in the chart of the coefficient ring at bidegree
(16a - 4b - 2, 2).

alpha(t) is the analogous one-step image of v1^t for t prime to 3; for t
divisible by 3 the 1-line class is 3-divisible and is read off the chart
directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .cobar import Cochain, CobarWindow, ExtChart, connecting_mod3
from .comodule import ComodulePresentation
from .hopfalg import StructureMaps


def _v3(a: int) -> int:
    v = 0
    while a % 3 == 0:
        a //= 3
        v += 1
    return v


@dataclass
class GreekClass:
    name: str
    s: int
    f: int
    coords: List[int]
    order: int


class Workbench:
    """Shared windows and charts over one structure-map derivation."""

    def __init__(self, maps: StructureMaps, s_max: int, f_max: int):
        self.maps = maps
        self.s_max = s_max
        self.f_max = f_max
        self._windows: Dict[str, CobarWindow] = {}
        self._charts: Dict[str, ExtChart] = {}

    def window(self, label: str) -> CobarWindow:
        if label not in self._windows:
            from .comodule import presentation_for_label

            com = presentation_for_label(self.maps, label)
            self._windows[label] = CobarWindow(com, self.s_max, self.f_max)
        return self._windows[label]

    def chart(self, label: str) -> ExtChart:
        if label not in self._charts:
            self._charts[label] = self.window(label).ext()
        return self._charts[label]


def moore_coaction_cochain(maps: StructureMaps, a: int) -> Cochain:
    """The mod-3 cobar differential of v2^a, as a filtration-1 cochain."""
    moore = ComodulePresentation(maps, "3")
    psi = moore.reduced_coaction((0, a, 0))
    out = Cochain(1, 16 * a)
    for (v, (td,)), c in psi.terms.items():
        out.add((v, (td,)), c, 3)
    return out


def beta(bench: Workbench, a: int, b: int = 1) -> GreekClass:
    """beta_{a/b} in the coefficient-ring chart at (16a - 4b - 2, 2)."""
    if b < 1:
        raise ValueError("b >= 1 required")
    if b > 3 ** _v3(a):
        raise ValueError(
            f"beta_{a}/{b} is not constructible this way: requires b <= 3^v3(a) = {3 ** _v3(a)}"
        )
    s = 16 * a - 4 * b - 2
    if s > bench.s_max:
        raise ValueError(f"stem {s} exceeds the window (s_max={bench.s_max})")
    dcochain = moore_coaction_cochain(bench.maps, a)
    # divide by v1^b: every term must carry at least v1^b
    divided = Cochain(1, 16 * a - 4 * b)
    for (v, slots), c in dcochain.terms.items():
        if v[0] < b:
            raise AssertionError(
                f"coaction term of v2^{a} with v1-exponent {v[0]} < {b}"
            )
        divided.add(((v[0] - b, v[1], v[2]), slots), c, 3)
    sphere = bench.window("S")
    schart = bench.chart("S")
    jx, drop = connecting_mod3(sphere, divided)
    coords = schart.reduce(jx, drop=drop)
    name = f"beta_{a}" if b == 1 else f"beta_{a}/{b}"
    return GreekClass(name, s, 2, coords, schart.class_order(s, 2, coords))


def alpha(bench: Workbench, t: int) -> GreekClass:
    """The 1-line class in stem 4t - 1."""
    s = 4 * t - 1
    if s > bench.s_max:
        raise ValueError(f"stem {s} exceeds the window (s_max={bench.s_max})")
    schart = bench.chart("S")
    if t % 3:
        x = Cochain(0, 4 * t, {((t, 0, 0), ()): 1})
        sphere = bench.window("S")
        jx, drop = connecting_mod3(sphere, x)
        coords = schart.reduce(jx, drop=drop)
    else:
        g = schart.group(s, 1)
        if g is None:
            return GreekClass(f"alpha_{t}", s, 1, [], 1)
        coords = [1 if i == 0 else 0 for i in range(g.dim)]
    return GreekClass(f"alpha_{t}", s, 1, coords, schart.class_order(s, 1, coords))


def label_chart(bench: Workbench, label: str) -> ExtChart:
    """Attach conventional names to a chart's generators where identifiable.

    Zero-line monomial names are assigned for the quotient targets; the
    coefficient-ring chart gets alpha- and beta-family names.  Ambiguous
    matches (a Greek class not proportional to a single generator) keep the
    positional names and are recorded in ``chart.naming_notes``.
    """
    chart = bench.chart(label)
    notes: List[str] = []
    if label != "S":
        for (s, f), g in chart.groups.items():
            if f == 0:
                for i in range(g.dim):
                    vec = g.gens[i]
                    basis = chart.window.basis[(0, s)]
                    nz = [basis[j] for j in np.nonzero(vec)[0]]
                    if len(nz) == 1:
                        (vexp, _) = nz[0]
                        parts = [
                            f"v{k+1}^{e}" if e > 1 else f"v{k+1}"
                            for k, e in enumerate(vexp)
                            if e
                        ]
                        chart.set_name(s, 0, i, "*".join(parts) if parts else "1")
        chart.naming_notes = notes
        return chart
    for t in range(1, (bench.s_max + 1) // 4 + 1):
        s = 4 * t - 1
        if s > bench.s_max or (s, 1) not in chart.groups:
            continue
        cls = alpha(bench, t)
        nz = [i for i, c in enumerate(cls.coords) if c]
        if len(nz) == 1:
            chart.set_name(s, 1, nz[0], cls.name)
        elif nz:
            notes.append(f"{cls.name} mixes generators {nz} at ({s},1)")
    a = 1
    while 16 * a - 4 * (3 ** _v3(a)) - 2 <= bench.s_max:
        for b in range(1, 3 ** _v3(a) + 1):
            s = 16 * a - 4 * b - 2
            if s > bench.s_max or s < 0 or (s, 2) not in chart.groups:
                continue
            try:
                cls = beta(bench, a, b)
            except (ValueError, AssertionError):
                continue
            nz = [i for i, c in enumerate(cls.coords) if c]
            if len(nz) == 1 and cls.order > 1:
                chart.set_name(s, 2, nz[0], cls.name)
            elif nz:
                notes.append(f"{cls.name} mixes generators {nz} at ({s},2)")
        a += 1
    chart.naming_notes = notes
    return chart
