"""Spectral-sequence page tracker and deduction rule engine.

Charts (computed or fixture-backed) provide the classes; scripts assert
differentials, permanence facts, and external homotopy inputs with free-text
citations; ``propagate`` closes the fact store under a fixed battery of
naturality and multiplicativity rules.  Every derived fact carries the rule
that produced it and the premises it consumed, so the derivation log replays
deterministically and every claim can be traced back to assertions and chart
data.

Differential conventions: d_r maps (s, f) to (s-1, f+r); only r congruent to
1 mod 4 is admissible (sparseness forces s+f = 0 mod 4 at both ends), and
nothing happens before d5.  "perm" means the class supports no differential
on any page; "dead E_p" means the class is zero on page p and beyond (it may
be a literal boundary or a product that collapses).  A class that is both
perm and dead must therefore be hit, which is what the forced-hit accounting
rule exploits.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

Bidegree = Tuple[int, int]
ClassRef = Tuple[int, int, int]

FIXTURE_DIR = Path(__file__).parent / "fixtures"
SCRIPT_DIR = Path(__file__).parent / "scripts"


class ScriptError(Exception):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


class Contradiction(Exception):
    """A class is required both to survive and to die.

    Carries the two derivation chains (lists of log entries, assertions and
    chart data at the leaves) so the conflict can be audited.
    """

    def __init__(self, survive_chain: List["LogEntry"], die_chain: List["LogEntry"]):
        self.survive_chain = survive_chain
        self.die_chain = die_chain
        super().__init__(
            "contradiction: "
            f"{survive_chain[0].fact!r} vs {die_chain[0].fact!r}"
        )


@dataclass
class LogEntry:
    index: int
    fact: str
    rule: str
    premises: List[str]
    citation: str = ""
    flags: List[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "fact": self.fact,
                "rule": self.rule,
                "premises": self.premises,
                "citation": self.citation,
                "flags": self.flags,
            },
            sort_keys=True,
        )


@dataclass
class ChartClass:
    s: int
    f: int
    i: int
    name: str = ""
    order: int = 3
    cell: str = ""  # "", "bottom", or "top"
    citation: str = ""
    ilink: Optional[ClassRef] = None
    jlink: Optional[Tuple[int, int, object]] = None  # index may be "*"


def _quotient_exponent(label: str) -> Optional[int]:
    m = re.fullmatch(r"S/\(3,v1\^(\d+)\)", label)
    return int(m.group(1)) if m else None


def base_label(label: str) -> Optional[str]:
    if label == "S":
        return None
    if label == "S/3":
        return "S"
    if _quotient_exponent(label) is not None:
        return "S/3"
    raise ValueError(f"unknown target label {label!r}")


def jlink_shift(label: str) -> Tuple[int, int]:
    """Bidegree shift of the boundary map out of this target's chart."""
    if label == "S/3":
        return (-1, 1)
    m = _quotient_exponent(label)
    if m is not None:
        return (-4 * m - 1, 1)
    raise ValueError(f"{label} has no boundary map")


class DeduceChart:
    """Class-level chart data for one target, fixture-backed or computed."""

    def __init__(self, label: str):
        self.label = label
        self.base = base_label(label)
        self.fixture = False
        self.classes: Dict[Bidegree, List[ChartClass]] = {}
        self.empty: Dict[Bidegree, str] = {}
        self.products: Dict[Tuple[ClassRef, ClassRef], Optional[ClassRef]] = {}
        self.product_cites: Dict[Tuple[ClassRef, ClassRef], str] = {}
        self.complete_stems: Set[int] = set()
        self.source = ""

    def classes_at(self, s: int, f: int) -> List[ChartClass]:
        return self.classes.get((s, f), [])

    def get(self, ref: ClassRef) -> Optional[ChartClass]:
        for c in self.classes_at(ref[0], ref[1]):
            if c.i == ref[2]:
                return c
        return None

    def product(self, a: ClassRef, b: ClassRef):
        """(result, known): known distinguishes 'product is zero' from 'no data'."""
        for key in ((a, b), (b, a)):
            if key in self.products:
                return self.products[key], True
        return None, False

    def bidegree_known_empty(self, s: int, f: int) -> bool:
        if (s, f) in self.empty:
            return True
        return s in self.complete_stems and not self.classes_at(s, f)

    @classmethod
    def from_fixture(cls, label: str, data: dict) -> "DeduceChart":
        chart = cls(label)
        chart.fixture = True
        shift = jlink_shift(label) if chart.base else None
        for key in sorted(data.get("classes", {})):
            s, f = (int(x) for x in key.split(","))
            lst = []
            for i, entry in enumerate(data["classes"][key]):
                ilink = tuple(entry["ilink"]) if entry.get("ilink") else None
                jl = entry.get("jlink")
                jlink = (jl[0], jl[1], jl[2]) if jl else None
                if ilink and (ilink[0], ilink[1]) != (s, f):
                    raise ValueError(f"{label} ({s},{f},{i}): ilink bidegree mismatch")
                if jlink and shift and (jlink[0], jlink[1]) != (s + shift[0], f + shift[1]):
                    raise ValueError(f"{label} ({s},{f},{i}): jlink shift mismatch")
                lst.append(
                    ChartClass(
                        s,
                        f,
                        i,
                        name=entry.get("name", ""),
                        order=entry.get("order", 3),
                        cell=entry.get("cell", ""),
                        citation=entry.get("citation", ""),
                        ilink=ilink,
                        jlink=jlink,
                    )
                )
            chart.classes[(s, f)] = lst
        for ent in data.get("empty", []):
            chart.empty[(ent["s"], ent["f"])] = ent.get("citation", "")
        for ent in data.get("products", []):
            a = tuple(ent["a"])
            b = tuple(ent["b"])
            res = tuple(ent["result"]) if ent["result"] != 0 else None
            chart.products[(a, b)] = res
            chart.product_cites[(a, b)] = ent.get("citation", "")
        chart.complete_stems = set(data.get("complete_stems", []))
        return chart

    @classmethod
    def from_ext_chart(cls, ext_chart) -> "DeduceChart":
        """Adapter over a computed chart; products are filled on demand."""
        chart = cls(ext_chart.label)
        chart._ext = ext_chart
        for (s, f) in sorted(ext_chart.groups):
            g = ext_chart.groups[(s, f)]
            chart.classes[(s, f)] = [
                ChartClass(s, f, i, name=g.names[i], order=g.orders[i], citation="computed")
                for i in range(g.dim)
            ]
        chart.complete_stems = set(range(0, ext_chart.window.s_max + 1))
        chart.source = "computed"
        return chart

    def product_computed(self, a: ClassRef, b: ClassRef):
        from .cobar import class_product

        ext = getattr(self, "_ext", None)
        if ext is None:
            return self.product(a, b)
        s, f = a[0] + b[0], a[1] + b[1]
        if s > ext.window.s_max or f > ext.window.f_max:
            return None, False
        try:
            coords = class_product(ext, a, b)
        except Exception:
            return None, False
        nz = [i for i, c in enumerate(coords) if c]
        if not nz:
            return None, True
        if len(nz) == 1:
            return (s, f, nz[0]), True
        return None, False


def _cref(ref: Sequence[int]) -> str:
    return f"({ref[0]},{ref[1]},{ref[2]})"


def _bref(s: int, f: int) -> str:
    return f"({s},{f})"


_ADMISSIBLE = lambda r: r >= 5 and r % 4 == 1


@dataclass
class ClaimResult:
    line: str
    proven: bool
    detail: str
    flags: List[str] = field(default_factory=list)


@dataclass
class ScriptReport:
    claims: List[ClaimResult] = field(default_factory=list)
    contradiction: Optional[Contradiction] = None

    @property
    def ok(self) -> bool:
        return self.contradiction is None and all(c.proven for c in self.claims)


class Engine:
    """Single-writer deduction state over one or more loaded charts."""

    def __init__(
        self,
        chart_provider: Optional[Callable[[str, int, int], DeduceChart]] = None,
        fixture_dir: Optional[Path] = None,
    ):
        self.chart_provider = chart_provider
        self.fixture_dir = Path(fixture_dir) if fixture_dir else FIXTURE_DIR
        self.charts: Dict[str, DeduceChart] = {}
        self.facts: Dict[str, LogEntry] = {}
        self.log: List[LogEntry] = []
        # status indexes (maintained by _add)
        self._dead: Dict[Tuple[str, ClassRef], int] = {}  # min page
        self._hit: Dict[Tuple[str, ClassRef], int] = {}
        self._supports: Dict[Tuple[str, ClassRef], Dict[int, Optional[ClassRef]]] = {}
        self._perm: Set[Tuple[str, ClassRef]] = set()

    # ---------------- fact store ----------------

    def _chain(self, fact: str) -> List[LogEntry]:
        out: List[LogEntry] = []
        seen: Set[str] = set()

        def walk(f: str):
            if f in seen or f not in self.facts:
                return
            seen.add(f)
            e = self.facts[f]
            out.append(e)
            for p in e.premises:
                walk(p)

        walk(fact)
        return out

    def _add(
        self,
        fact: str,
        rule: str,
        premises: Sequence[str],
        citation: str = "",
        flags: Sequence[str] = (),
    ) -> Optional[LogEntry]:
        if fact in self.facts:
            return None
        fl = set(flags)
        for p in premises:
            e = self.facts.get(p)
            if e:
                fl.update(e.flags)
        entry = LogEntry(len(self.log), fact, rule, list(premises), citation, sorted(fl))
        self.facts[fact] = entry
        self.log.append(entry)
        self._index(entry)
        return entry

    def _index(self, entry: LogEntry):
        parts = entry.fact.split()
        kind = parts[0]
        if kind.startswith("d") and "->" in entry.fact and "some" not in kind:
            r = int(kind[1:])
            label = parts[1]
            src_s, tgt_s = parts[2].split("->")
            src = self._parse_ref(src_s)
            tgt = self._parse_ref(tgt_s)
            self._add(
                f"supports {label} {_cref(src)} d{r}", "page-bookkeeping", [entry.fact]
            )
            self._add(f"hit {label} {_cref(tgt)} E{r + 1}", "page-bookkeeping", [entry.fact])
        elif kind == "supports":
            label, ref_s, dr = parts[1], parts[2], parts[3]
            r = int(dr[1:])
            ref = self._parse_ref(ref_s)
            self._supports.setdefault((label, ref), {})[r] = None
            self._add(f"dead {label} {ref_s} E{r + 1}", "page-bookkeeping", [entry.fact])
            if (label, ref) in self._perm:
                raise Contradiction(
                    self._chain(f"perm {label} {ref_s}"), self._chain(entry.fact)
                )
        elif kind == "hit":
            label, ref_s, page_s = parts[1], parts[2], parts[3]
            page = int(page_s[1:])
            ref = self._parse_ref(ref_s)
            prev = self._hit.get((label, ref))
            self._hit[(label, ref)] = min(page, prev) if prev else page
            self._add(f"dead {label} {ref_s} E{page}", "page-bookkeeping", [entry.fact])
        elif kind == "dead":
            label, ref_s, page_s = parts[1], parts[2], parts[3]
            page = int(page_s[1:])
            ref = self._parse_ref(ref_s)
            prev = self._dead.get((label, ref))
            self._dead[(label, ref)] = min(page, prev) if prev else page
        elif kind == "perm":
            label, ref_s = parts[1], parts[2]
            ref = self._parse_ref(ref_s)
            self._perm.add((label, ref))
            sup = self._supports.get((label, ref))
            if sup:
                r = sorted(sup)[0]
                raise Contradiction(
                    self._chain(entry.fact),
                    self._chain(f"supports {label} {ref_s} d{r}"),
                )

    @staticmethod
    def _parse_ref(text: str) -> ClassRef:
        m = re.fullmatch(r"\((\-?\d+),(\-?\d+),(\-?\d+)\)", text)
        if not m:
            raise ValueError(f"bad class reference {text!r}")
        return (int(m.group(1)), int(m.group(2)), int(m.group(3)))

    # status helpers -----------------------------------------------------

    def dead_page(self, label: str, ref: ClassRef) -> Optional[int]:
        return self._dead.get((label, ref))

    def alive_at(self, label: str, ref: ClassRef, page: int) -> bool:
        d = self.dead_page(label, ref)
        return d is None or d > page

    def is_perm(self, label: str, ref: ClassRef) -> bool:
        return (label, ref) in self._perm

    def supports_known_target(self, label: str, ref: ClassRef, r: int) -> Optional[ClassRef]:
        for fact in self.facts:
            if fact.startswith(f"d{r} {label} {_cref(ref)}->"):
                return self._parse_ref(fact.split("->")[1])
        return None

    def supports_any(self, label: str, ref: ClassRef) -> bool:
        return bool(self._supports.get((label, ref)))

    # ---------------- chart loading ----------------

    def load_chart(self, chart: DeduceChart):
        if chart.label in self.charts:
            return
        self.charts[chart.label] = chart
        for (s, f) in sorted(chart.classes):
            for c in chart.classes[(s, f)]:
                flags = ["figure-only"] if c.citation == "figure-only" else []
                self._add(
                    f"class {chart.label} {_cref((s, f, c.i))}",
                    "chart",
                    [],
                    citation=c.citation or chart.source,
                    flags=flags,
                )
        for (s, f) in sorted(chart.empty):
            self._add(
                f"empty {chart.label} {_bref(s, f)}",
                "chart",
                [],
                citation=chart.empty[(s, f)],
            )
        for stem in sorted(chart.complete_stems) if chart.fixture else []:
            self._add(
                f"complete {chart.label} {stem}",
                "chart",
                [],
                citation=chart.source or "chart coverage",
            )
        for (a, b) in sorted(chart.products):
            res = chart.products[(a, b)]
            rhs = _cref(res) if res else "0"
            self._add(
                f"product {chart.label} {_cref(a)}*{_cref(b)}={rhs}",
                "chart",
                [],
                citation=chart.product_cites.get((a, b), ""),
            )

    def _product(self, label: str, a: ClassRef, b: ClassRef):
        chart = self.charts[label]
        if chart.fixture:
            return chart.product(a, b)
        return chart.product_computed(a, b)

    def _product_fact(self, label: str, a: ClassRef, b: ClassRef, res) -> str:
        rhs = _cref(res) if res else "0"
        for x, y in ((a, b), (b, a)):
            fact = f"product {label} {_cref(x)}*{_cref(y)}={rhs}"
            if fact in self.facts:
                return fact
        # computed products are materialized as chart-backed facts on demand
        self._add(f"product {label} {_cref(a)}*{_cref(b)}={rhs}", "chart", [], "computed")
        return f"product {label} {_cref(a)}*{_cref(b)}={rhs}"

    # ---------------- script interface ----------------

    def run_script(self, text: str) -> ScriptReport:
        report = ScriptReport()
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                self.execute(line, lineno, report)
            except Contradiction as c:
                report.contradiction = c
                break
        return report

    def execute(self, line: str, lineno: int = 0, report: Optional[ScriptReport] = None) -> List[LogEntry]:
        start = len(self.log)
        words = line.split()
        head = words[0]
        if head == "chart":
            self._exec_chart(words, lineno)
        elif head == "assert":
            self._exec_assert(line, words, lineno)
        elif head == "propagate":
            self.propagate()
        elif head == "claim":
            result = self._exec_claim(line, words, lineno)
            if report is not None:
                report.claims.append(result)
        else:
            raise ScriptError(lineno, f"unknown directive {head!r}")
        return self.log[start:]

    def _exec_chart(self, words: List[str], lineno: int):
        if len(words) < 4:
            raise ScriptError(lineno, "chart <label> fixture <file> | chart <label> computed <s_max> <f_max>")
        label, mode = words[1], words[2]
        if mode == "fixture":
            path = self.fixture_dir / words[3]
            if not path.exists():
                raise ScriptError(lineno, f"fixture not found: {words[3]}")
            data = json.loads(path.read_text())
            if data.get("target") != label:
                raise ScriptError(lineno, f"fixture targets {data.get('target')!r}, not {label!r}")
            chart = DeduceChart.from_fixture(label, data)
            chart.source = words[3]
            self.load_chart(chart)
        elif mode == "computed":
            if self.chart_provider is None:
                raise ScriptError(lineno, "no computed-chart provider configured")
            s_max, f_max = int(words[3]), int(words[4])
            self.load_chart(self.chart_provider(label, s_max, f_max))
        else:
            raise ScriptError(lineno, f"unknown chart mode {mode!r}")

    def _split_cite(self, line: str, lineno: int) -> Tuple[str, str]:
        m = re.search(r'\s+cite\s+"([^"]*)"\s*$', line)
        if not m:
            raise ScriptError(lineno, 'assertion requires a trailing cite "..."')
        return line[: m.start()], m.group(1)

    def _require_class(self, label: str, ref: ClassRef, lineno: int) -> ChartClass:
        chart = self.charts.get(label)
        if chart is None:
            raise ScriptError(lineno, f"no chart loaded for {label}")
        c = chart.get(ref)
        if c is None:
            raise ScriptError(lineno, f"no class {_cref(ref)} in the {label} chart")
        return c

    def _exec_assert(self, line: str, words: List[str], lineno: int):
        body, cite = self._split_cite(line, lineno)
        words = body.split()
        kind = words[1]
        m = re.fullmatch(r"d(\d+)", kind)
        if m:
            r = int(m.group(1))
            if not _ADMISSIBLE(r):
                raise ScriptError(lineno, f"d{r} is not admissible (need r = 1 mod 4, r >= 5)")
            label = words[2]
            src = self._parse_ref(words[3])
            if words[4] != "->":
                raise ScriptError(lineno, "expected '->'")
            tgt = self._parse_ref(words[5])
            if (tgt[0], tgt[1]) != (src[0] - 1, src[1] + r):
                raise ScriptError(
                    lineno,
                    f"d{r} must map ({src[0]},{src[1]}) to ({src[0] - 1},{src[1] + r})",
                )
            self._require_class(label, src, lineno)
            self._require_class(label, tgt, lineno)
            for ref, role in ((src, "source"), (tgt, "target")):
                if not self.alive_at(label, ref, r):
                    raise ScriptError(lineno, f"{role} {_cref(ref)} is already dead at page {r}")
            self._add(
                f"d{r} {label} {_cref(src)}->{_cref(tgt)}",
                "assert",
                [f"class {label} {_cref(src)}", f"class {label} {_cref(tgt)}"],
                cite,
            )
        elif kind in ("perm", "pi3", "cube"):
            label = words[2]
            ref = self._parse_ref(words[3])
            self._require_class(label, ref, lineno)
            self._add(f"{kind} {label} {_cref(ref)}", "assert", [f"class {label} {_cref(ref)}"], cite)
        elif kind == "permim":
            label = words[2]
            s, f = (int(x) for x in words[3].strip("()").split(","))
            self._add(f"permim {label} {_bref(s, f)}", "assert", [], cite)
        elif kind == "filtration_le":
            label, stem, bound = words[2], int(words[3]), int(words[4])
            self._add(f"fle {label} {stem} {bound}", "assert", [], cite)
        else:
            raise ScriptError(lineno, f"unknown assertion kind {kind!r}")

    def _exec_claim(self, line: str, words: List[str], lineno: int) -> ClaimResult:
        kind = words[1]
        if kind in ("dead", "alive", "perm"):
            label = words[2]
            ref = self._parse_ref(words[3])
            chart = self.charts.get(label)
            if chart is None or chart.get(ref) is None:
                return ClaimResult(line, False, f"no data: {label} has no class {_cref(ref)}")
            if kind == "dead":
                page = self.dead_page(label, ref)
                if page is not None:
                    chain = self._chain(f"dead {label} {_cref(ref)} E{page}")
                    flags = sorted({fl for e in chain for fl in e.flags})
                    return ClaimResult(line, True, f"dead at E{page}", flags)
                return ClaimResult(line, False, "no derivation concludes this class dies")
            if kind == "alive":
                page = self.dead_page(label, ref)
                if page is None:
                    return ClaimResult(line, True, "no rule kills this class")
                return ClaimResult(line, False, f"class dies at E{page}")
            fact = f"perm {label} {_cref(ref)}"
            if fact in self.facts:
                chain = self._chain(fact)
                flags = sorted({fl for e in chain for fl in e.flags})
                return ClaimResult(line, True, "permanent cycle", flags)
            return ClaimResult(line, False, "permanence not derived")
        if kind == "filtration_le":
            label, stem, bound = words[2], int(words[3]), int(words[4])
            chart = self.charts.get(label)
            if chart is None:
                return ClaimResult(line, False, f"no chart loaded for {label}")
            if stem not in chart.complete_stems:
                return ClaimResult(line, False, f"no data: stem {stem} not covered by the chart")
            flags: Set[str] = set()
            survivors = []
            for (s, f) in sorted(chart.classes):
                if s != stem or f <= bound:
                    continue
                for c in chart.classes[(s, f)]:
                    page = self.dead_page(label, (s, f, c.i))
                    if page is None:
                        survivors.append((s, f, c.i))
                    else:
                        chain = self._chain(f"dead {label} {_cref((s, f, c.i))} E{page}")
                        flags.update(fl for e in chain for fl in e.flags)
            if survivors:
                return ClaimResult(
                    line, False, f"classes not killed: {[_cref(x) for x in survivors]}"
                )
            return ClaimResult(
                line, True, f"every stem-{stem} class above filtration {bound} dies", sorted(flags)
            )
        if kind == "ext":
            # claim ext d5 <label> (s,f,i) = 0  |  claim ext v1^<m> <label> (s,f,i) = 0
            what, label = words[2], words[3]
            ref = self._parse_ref(words[4])
            if what == "d5":
                fact = f"d5zero {label} {_cref(ref)}"
                desc = "d5 vanishes"
            else:
                m = re.fullmatch(r"v1\^(\d+)", what)
                if not m:
                    raise ScriptError(lineno, f"unknown ext claim {what!r}")
                fact = f"v1extzero {label} {_cref(ref)} {m.group(1)}"
                desc = f"{what}-extension vanishes"
            if fact in self.facts:
                chain = self._chain(fact)
                flags = sorted({fl for e in chain for fl in e.flags})
                return ClaimResult(line, True, desc, flags)
            return ClaimResult(line, False, f"{desc}: not derived")
        raise ScriptError(lineno, f"unknown claim kind {kind!r}")

    # ---------------- rules ----------------

    def propagate(self) -> List[LogEntry]:
        start = len(self.log)
        rules = [
            self._rule_product_kill,
            self._rule_leibniz,
            self._rule_i_transfer,
            self._rule_i_death,
            self._rule_delta_transfer,
            self._rule_forced_hit,
            self._rule_d9_transfer,
            self._rule_perm_product,
            self._rule_perm_image,
            self._rule_perm_utility,
            self._rule_d5_vanishing,
            self._rule_v1_extension,
        ]
        changed = True
        while changed:
            changed = False
            for rule in rules:
                before = len(self.log)
                rule()
                if len(self.log) != before:
                    changed = True
        return self.log[start:]

    def _dead_facts(self) -> List[Tuple[str, ClassRef, int]]:
        return sorted(
            ((label, ref, page) for (label, ref), page in self._dead.items()),
            key=lambda x: (x[0], x[1]),
        )

    def _diff_facts(self) -> List[Tuple[int, str, ClassRef, ClassRef, str]]:
        out = []
        for fact in self.facts:
            m = re.fullmatch(r"d(\d+) (\S+) (\(.*?\))->(\(.*?\))", fact)
            if m:
                out.append(
                    (
                        int(m.group(1)),
                        m.group(2),
                        self._parse_ref(m.group(3)),
                        self._parse_ref(m.group(4)),
                        fact,
                    )
                )
        out.sort(key=lambda x: (x[0], x[1], x[2]))
        return out

    def _perm_facts(self, label: str) -> List[ClassRef]:
        return sorted(ref for (lb, ref) in self._perm if lb == label)

    def _rule_product_kill(self):
        """A page-p-zero class times a surviving permanent cycle is zero on page p."""
        for label, y, page in self._dead_facts():
            if label not in self.charts:
                continue
            for z in self._perm_facts(label):
                if not self.alive_at(label, z, page - 1):
                    continue
                res, known = self._product(label, y, z)
                if not known or res is None:
                    continue
                if self.dead_page(label, res) is not None and self.dead_page(label, res) <= page:
                    continue
                pf = self._product_fact(label, y, z, res)
                self._add(
                    f"dead {label} {_cref(res)} E{page}",
                    "product-kill",
                    [
                        f"dead {label} {_cref(y)} E{page}",
                        f"perm {label} {_cref(z)}",
                        pf,
                    ],
                )

    def _rule_leibniz(self):
        """d_r(x*z) = d_r(x)*z for a permanent cycle z, when both products resolve."""
        for r, label, x, y, fact in self._diff_facts():
            if label not in self.charts:
                continue
            for z in self._perm_facts(label):
                if not self.alive_at(label, z, r):
                    continue
                xz, known_x = self._product(label, x, z)
                yz, known_y = self._product(label, y, z)
                if not (known_x and known_y) or xz is None or yz is None:
                    continue
                if not self.alive_at(label, xz, r) or not self.alive_at(label, yz, r):
                    continue
                pf_x = self._product_fact(label, x, z, xz)
                pf_y = self._product_fact(label, y, z, yz)
                self._add(
                    f"d{r} {label} {_cref(xz)}->{_cref(yz)}",
                    "leibniz",
                    [fact, f"perm {label} {_cref(z)}", pf_x, pf_y],
                )

    def _moore_pairs(self) -> List[Tuple[str, str]]:
        return sorted(
            (label, chart.base)
            for label, chart in self.charts.items()
            if chart.base and chart.base in self.charts
        )

    def _rule_i_transfer(self):
        """A d5 with non-divisible target pushes forward along the inclusion."""
        diffs = self._diff_facts()
        for label, base in self._moore_pairs():
            chart = self.charts[label]
            for r, lb, src, tgt, fact in diffs:
                if lb != base or r != 5:
                    continue
                tgt_class = self.charts[base].get(tgt)
                if tgt_class is None or tgt_class.order != 3:
                    continue
                for (s, f) in sorted(chart.classes):
                    for c in chart.classes[(s, f)]:
                        if c.ilink != src:
                            continue
                        for c2 in chart.classes_at(tgt[0], tgt[1]):
                            if c2.ilink == tgt:
                                self._add(
                                    f"d5 {label} {_cref((s, f, c.i))}->{_cref((tgt[0], tgt[1], c2.i))}",
                                    "i-transfer",
                                    [
                                        fact,
                                        f"class {label} {_cref((s, f, c.i))}",
                                        f"class {label} {_cref((tgt[0], tgt[1], c2.i))}",
                                    ],
                                )

    def _rule_i_death(self):
        """The inclusion-image of a class that is zero on page p is zero on page p."""
        for label, base in self._moore_pairs():
            chart = self.charts[label]
            for (s, f) in sorted(chart.classes):
                for c in chart.classes[(s, f)]:
                    if c.ilink is None:
                        continue
                    page = self.dead_page(base, c.ilink)
                    if page is None:
                        continue
                    own = self.dead_page(label, (s, f, c.i))
                    if own is not None and own <= page:
                        continue
                    self._add(
                        f"dead {label} {_cref((s, f, c.i))} E{page}",
                        "i-death",
                        [
                            f"dead {base} {_cref(c.ilink)} E{page}",
                            f"class {label} {_cref((s, f, c.i))}",
                        ],
                    )

    def _rule_delta_transfer(self):
        """Pull a base-chart d5 between boundary-map images back up the cofiber.

        Exact form: when both ends have boundary-linked classes upstairs and
        the inclusion image vanishes in the target bidegree, the differential
        transfers on the nose.  Weak form: when only the source is linked and
        every class in the target bidegree has order 3 (so it lifts along the
        boundary map), the linked class is still forced to support a d5.
        """
        for label, base in self._moore_pairs():
            chart = self.charts[label]
            # exact + weak forms from full differentials
            for r, lb, src, tgt, fact in self._diff_facts():
                if lb != base or r != 5:
                    continue
                self._delta_transfer_one(label, base, src, tgt, fact)
            # weak form from bare supports facts (target bidegree implied)
            for (lb, ref), pages in sorted(self._supports.items()):
                if lb != base or 5 not in pages:
                    continue
                tgt_bid = (ref[0] - 1, ref[1] + 5)
                sup_fact = f"supports {base} {_cref(ref)} d5"
                self._delta_transfer_one(label, base, ref, None, sup_fact, tgt_bid)

    def _delta_transfer_one(self, label, base, src, tgt, fact, tgt_bid=None):
        chart = self.charts[label]
        if tgt is not None:
            tgt_bid = (tgt[0], tgt[1])
        for (s, f) in sorted(chart.classes):
            for c in chart.classes[(s, f)]:
                if c.jlink != src:
                    continue
                xref = (s, f, c.i)
                if tgt is not None:
                    # upstairs target bidegree: d5 of (s,f) lands at (s-1,f+5)
                    targets = [c2 for c2 in chart.classes_at(s - 1, f + 5) if c2.jlink == tgt]
                    no_bottom = not any(
                        c2.cell == "bottom" for c2 in chart.classes_at(s - 1, f + 5)
                    )
                    if targets and no_bottom:
                        c2 = targets[0]
                        self._add(
                            f"d5 {label} {_cref(xref)}->{_cref((s - 1, f + 5, c2.i))}",
                            "delta-transfer",
                            [fact, f"class {label} {_cref(xref)}", f"class {label} {_cref((s - 1, f + 5, c2.i))}"],
                        )
                        continue
                base_targets = self.charts[base].classes_at(*tgt_bid)
                if base_targets and all(t.order == 3 for t in base_targets):
                    self._add(
                        f"supports {label} {_cref(xref)} d5",
                        "delta-transfer",
                        [fact, f"class {label} {_cref(xref)}"],
                    )

    def _rule_forced_hit(self):
        """A permanent cycle that is zero on page p must be hit before page p.

        When the alive candidate sources across admissible lengths match the
        number of needed hits exactly, each candidate fires; when one hit is
        needed and all candidates share a bidegree, a subspace-level fact is
        emitted instead of guessing a generator.
        """
        for label in sorted(self.charts):
            chart = self.charts[label]
            if not chart.fixture:
                continue
            by_bid: Dict[Bidegree, List[Tuple[ClassRef, int]]] = {}
            for (lb, ref), page in sorted(self._dead.items()):
                if lb != label or (lb, ref) not in self._perm:
                    continue
                if (lb, ref) in self._hit:
                    continue
                if any(
                    fact.startswith(f"d{r}some {label} ") and fact.endswith(f"->{_cref(ref)}")
                    for fact in self.facts
                    for r in (5, 9, 13)
                ):
                    continue
                by_bid.setdefault((ref[0], ref[1]), []).append((ref, page))
            for bid in sorted(by_bid):
                needed = by_bid[bid]
                page = min(p for _, p in needed)
                candidates: List[Tuple[int, ClassRef]] = []
                complete = True
                r = 5
                while r < page:
                    sbid = (bid[0] + 1, bid[1] - r)
                    if sbid[1] >= 0:
                        if not (
                            self.charts[label].bidegree_known_empty(*sbid)
                            or self.charts[label].classes_at(*sbid)
                        ):
                            complete = False
                        for c in self.charts[label].classes_at(*sbid):
                            ref = (sbid[0], sbid[1], c.i)
                            if self.is_perm(label, ref) or not self.alive_at(label, ref, r):
                                continue
                            known = self.supports_known_target(label, ref, r)
                            if known is not None and (known[0], known[1], known[2]) not in [
                                n[0] for n in needed
                            ]:
                                continue  # already spoken for elsewhere
                            if self.supports_any(label, ref) and known is None:
                                continue
                            if known is not None:
                                continue
                            candidates.append((r, ref))
                    r += 4
                if not complete:
                    continue
                premise_deads = [f"dead {label} {_cref(ref)} E{pg}" for ref, pg in needed]
                premise_perms = [f"perm {label} {_cref(ref)}" for ref, _ in needed]
                if len(candidates) == len(needed) and candidates:
                    for r, ref in candidates:
                        self._add(
                            f"supports {label} {_cref(ref)} d{r}",
                            "forced-hit",
                            premise_deads + premise_perms + [f"class {label} {_cref(ref)}"],
                        )
                    self._add(
                        f"hitacct {label} {_bref(*bid)}",
                        "forced-hit",
                        premise_deads,
                    )
                elif len(needed) == 1 and candidates and len({(r, (ref[0], ref[1])) for r, ref in candidates}) == 1:
                    r = candidates[0][0]
                    sbid = (candidates[0][1][0], candidates[0][1][1])
                    self._add(
                        f"d{r}some {label} {_bref(*sbid)}->{_cref(needed[0][0])}",
                        "forced-hit",
                        premise_deads + premise_perms,
                    )

    def _rule_d9_transfer(self):
        """Flagged top-cell transfer of a subspace-level d9 across the cofiber.

        Fires only when the upstairs top-cell class provably survives to page
        9 (its shorter-differential target bidegree consists of classes that
        themselves support d5), every other class in the target bidegree is
        dead by page 9, and the downstairs target is still alive there.
        """
        some = sorted(
            fact for fact in self.facts if re.fullmatch(r"d9some \S+ \(.*?\)->\(.*?\)", fact)
        )
        for fact in some:
            m = re.fullmatch(r"d9some (\S+) \((\-?\d+),(\-?\d+)\)->(\(.*?\))", fact)
            base = m.group(1)
            sbid = (int(m.group(2)), int(m.group(3)))
            w_s = self._parse_ref(m.group(4))
            for label, bl in self._moore_pairs():
                if bl != base:
                    continue
                chart = self.charts[label]
                for (s, f) in sorted(chart.classes):
                    for c in chart.classes[(s, f)]:
                        if c.jlink != (sbid[0], sbid[1], "*"):
                            continue
                        xref = (s, f, c.i)
                        surv = self._survives_to(label, xref, 9)
                        if surv is None:
                            continue
                        for c2 in chart.classes_at(s - 1, f + 9):
                            if c2.jlink != w_s:
                                continue
                            others_dead = all(
                                (self.dead_page(label, (s - 1, f + 9, c3.i)) or 99) <= 9
                                for c3 in chart.classes_at(s - 1, f + 9)
                                if c3.i != c2.i
                            )
                            if not others_dead:
                                continue
                            if not self.alive_at(base, w_s, 9):
                                continue
                            self._add(
                                f"d9 {label} {_cref(xref)}->{_cref((s - 1, f + 9, c2.i))}",
                                "d9-transfer",
                                [fact, surv, f"class {label} {_cref((s - 1, f + 9, c2.i))}"],
                                flags=["d9-transfer"],
                            )

    def _survives_to(self, label: str, ref: ClassRef, page: int) -> Optional[str]:
        fact = f"survives {label} {_cref(ref)} E{page}"
        if fact in self.facts:
            return fact
        chart = self.charts[label]
        premises = [f"class {label} {_cref(ref)}"]
        r = 5
        while r < page:
            tbid = (ref[0] - 1, ref[1] + r)
            sbid = (ref[0] + 1, ref[1] - r)
            targets = chart.classes_at(*tbid)
            if targets:
                for c in targets:
                    sup = f"supports {label} {_cref((tbid[0], tbid[1], c.i))} d{r}"
                    if sup not in self.facts:
                        return None
                    premises.append(sup)
            elif not chart.bidegree_known_empty(*tbid):
                return None
            if sbid[1] >= 0 and chart.classes_at(*sbid):
                alive_sources = [
                    c
                    for c in chart.classes_at(*sbid)
                    if self.alive_at(label, (sbid[0], sbid[1], c.i), r)
                ]
                if alive_sources:
                    return None
            r += 4
        entry = self._add(fact, "no-room-survival", premises)
        return fact if entry or fact in self.facts else None

    def _rule_perm_product(self):
        """A product of permanent cycles is a permanent cycle."""
        for label in sorted(self.charts):
            perms = self._perm_facts(label)
            for y in perms:
                for z in perms:
                    if z < y:
                        continue
                    res, known = self._product(label, y, z)
                    if not known or res is None or self.is_perm(label, res):
                        continue
                    pf = self._product_fact(label, y, z, res)
                    self._add(
                        f"perm {label} {_cref(res)}",
                        "perm-product",
                        [f"perm {label} {_cref(y)}", f"perm {label} {_cref(z)}", pf],
                    )

    def _rule_perm_image(self):
        """Derive 'the inclusion image at (s,f) consists of permanent cycles'."""
        for label, base in self._moore_pairs():
            chart = self.charts[label]
            for (s, f) in sorted(chart.classes):
                fact = f"permim {label} {_bref(s, f)}"
                if fact in self.facts:
                    continue
                bottoms = [c for c in chart.classes_at(s, f) if c.cell == "bottom"]
                if bottoms:
                    refs = [(s, f, c.i) for c in bottoms]
                    if all(self.is_perm(label, r) for r in refs):
                        self._add(
                            fact,
                            "perm-image",
                            [f"perm {label} {_cref(r)}" for r in refs],
                        )
                        continue
                base_classes = self.charts[base].classes_at(s, f)
                if base_classes and all(
                    self.is_perm(base, (s, f, c.i)) for c in base_classes
                ):
                    self._add(
                        fact,
                        "perm-image",
                        [f"perm {base} {_cref((s, f, c.i))}" for c in base_classes],
                    )
                elif not bottoms and s in chart.complete_stems:
                    self._add(
                        fact,
                        "perm-image",
                        [f"complete {label} {s}"],
                        citation="no bottom-cell classes",
                    )

    def _rule_perm_utility(self):
        """Low-filtration permanence through the boundary map.

        A class with f <= 3 whose boundary image is a permanent cycle
        detecting a suitable homotopy class (order 3 downstairs, or with the
        matching v1-power extension vanishing) is itself permanent, provided
        the inclusion image in its bidegree consists of permanent cycles.
        """
        for label, base in self._moore_pairs():
            chart = self.charts[label]
            mexp = _quotient_exponent(label)
            for (s, f) in sorted(chart.classes):
                if f > 3:
                    continue
                for c in chart.classes[(s, f)]:
                    xref = (s, f, c.i)
                    if self.is_perm(label, xref) or c.jlink is None or c.jlink[2] == "*":
                        continue
                    y = (c.jlink[0], c.jlink[1], c.jlink[2])
                    if not self.is_perm(base, y):
                        continue
                    if mexp is None:
                        hom = f"pi3 {base} {_cref(y)}"
                    else:
                        hom = f"v1extzero {base} {_cref(y)} {mexp}"
                    if hom not in self.facts:
                        continue
                    permim = f"permim {label} {_bref(s, f)}"
                    if permim not in self.facts:
                        continue
                    self._add(
                        f"perm {label} {_cref(xref)}",
                        "perm-utility",
                        [f"perm {base} {_cref(y)}", hom, permim, f"class {label} {_cref(xref)}"],
                    )

    def _find_empty(self, label: str, s: int, f: int) -> Optional[str]:
        fact = f"empty {label} {_bref(s, f)}"
        return fact if fact in self.facts else None

    def _rule_d5_vanishing(self):
        """Cofiber-division argument: d5 of a cube-decomposable class is zero.

        Premises per firing: the characteristic-3 cube fact (its image in the
        three-fold-smaller quotient has vanishing d5), permanence of the
        boundary image (so the boundary of the d5 value vanishes and the
        value lifts along the inclusion), and emptiness of the bidegree that
        absorbs v1-divisible lifts.
        """
        cubes = sorted(f for f in self.facts if f.startswith("cube "))
        for fact in cubes:
            _, label, ref_s = fact.split()
            ref = self._parse_ref(ref_s)
            if f"d5zero {label} {ref_s}" in self.facts:
                continue
            chart = self.charts.get(label)
            if chart is None or chart.base is None:
                continue
            c = chart.get(ref)
            if c is None or c.jlink is None or c.jlink[2] == "*":
                continue
            y = (c.jlink[0], c.jlink[1], c.jlink[2])
            perm_fact = f"perm {chart.base} {_cref(y)}"
            if perm_fact not in self.facts:
                continue
            # the v1-divisible lift lives two v1-powers below the d5 bidegree
            tbid = (ref[0] - 1 - 8, ref[1] + 5)
            empty = self._find_empty(chart.base, *tbid)
            if empty is None:
                continue
            self._add(
                f"d5zero {label} {ref_s}",
                "d5-vanishing",
                [fact, perm_fact, empty, f"class {label} {ref_s}"],
            )

    def _rule_v1_extension(self):
        """Hidden-extension vanishing from a vanishing d5.

        If the boundary image j_m(y) is permanent, every detecting filtration
        for the v1^m-extension is pinned above the bound to a single sparse
        slot, the extension-linking differential d5(y) vanishes, and
        v1-divisible candidates land in an empty bidegree, the extension
        product is zero in homotopy.
        """
        zeros = sorted(f for f in self.facts if f.startswith("d5zero "))
        for fact in zeros:
            _, label, ref_s = fact.split()
            ref = self._parse_ref(ref_s)
            chart = self.charts.get(label)
            mexp = _quotient_exponent(label)
            if chart is None or mexp is None:
                continue
            c = chart.get(ref)
            if c is None or c.jlink is None or c.jlink[2] == "*":
                continue
            y = (c.jlink[0], c.jlink[1], c.jlink[2])
            base = chart.base
            out_fact = f"v1extzero {base} {_cref(y)} {mexp}"
            if out_fact in self.facts:
                continue
            perm_fact = f"perm {base} {_cref(y)}"
            if perm_fact not in self.facts:
                continue
            # the product stem downstairs: |v1^m| + stem of j_m-image
            prod_stem = 4 * mexp + y[0]
            fle = None
            for f2 in self.facts:
                m2 = re.fullmatch(rf"fle {re.escape(base)} {prod_stem} (\d+)", f2)
                if m2:
                    fle = f2
                    break
            if fle is None:
                continue
            # the E2-level product with v1^m must vanish (filtration jump)
            bchart = self.charts[base]
            v1m = None
            for (s, f2) in sorted(bchart.classes):
                for cc in bchart.classes[(s, f2)]:
                    if cc.name == f"v_1^{mexp}":
                        v1m = (s, f2, cc.i)
            if v1m is None:
                continue
            res, known = self._product(base, v1m, y)
            if not known or res is not None:
                continue
            pf = self._product_fact(base, v1m, y, None)
            bound = int(fle.split()[-1])
            det_f = bound  # sparse slots below the bound: the top one detects
            empty = self._find_empty(base, prod_stem - 4 * 2, det_f)
            if empty is None:
                continue
            self._add(
                out_fact,
                "v1-extension-vanishing",
                [fact, perm_fact, fle, pf, empty],
            )

    # ---------------- queries ----------------

    def query(self, label: str, stem: int) -> List[dict]:
        chart = self.charts.get(label)
        if chart is None:
            raise ValueError(f"no chart loaded for {label}")
        out = []
        for (s, f) in sorted(chart.classes):
            if s != stem:
                continue
            for c in chart.classes[(s, f)]:
                ref = (s, f, c.i)
                page = self.dead_page(label, ref)
                out.append(
                    {
                        "s": s,
                        "f": f,
                        "i": c.i,
                        "name": c.name,
                        "status": "dead" if page is not None else "alive",
                        "dead_page": page,
                        "perm": self.is_perm(label, ref),
                    }
                )
        return out

    def log_json(self) -> str:
        return "\n".join(e.to_json() for e in self.log)


def run_script_file(
    path: Path,
    chart_provider: Optional[Callable[[str, int, int], DeduceChart]] = None,
    fixture_dir: Optional[Path] = None,
) -> Tuple[Engine, ScriptReport]:
    engine = Engine(chart_provider=chart_provider, fixture_dir=fixture_dir)
    report = engine.run_script(Path(path).read_text())
    return engine, report
