"""Line-oriented scenario and search-space files.

A scenario::

    [field]
    p = 2

    [ring]
    n = 2
    precision = 64

    [ideal]
    gen = z^2 + x1^3*x2 + x1*x2^3

    [divisor]
    s = 1, 1

    [chart]
    S = 1, 2
    T = 1, 2
    t2 = 1

A search space replaces [ideal] by [space] (n, e, m, degrees), allows
``T = all`` / ``t = all`` in [chart], and takes ``policy = maximal`` or
``policy = zero`` in [divisor].
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .blowup import BlowupChart
from .contact import Divisor
from .errors import ParseError
from .field import FieldSpec
from .grammar import format_poly, parse_poly
from .ideals import Ideal
from .poly import INF

DEFAULT_PRECISION = 64

_SECTION = re.compile(r"^\s*\[\s*([A-Za-z_]+)\s*\]\s*$")
_ENTRY = re.compile(r"^(\s*)([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")


@dataclass
class _Entry:
    key: str
    value: str
    line: int
    col: int      # 0-based column where the value starts


def _read_sections(text, allowed):
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        mt = _SECTION.match(line)
        if mt:
            name = mt.group(1).lower()
            if name not in allowed:
                raise ParseError(f"unknown section [{name}]", lineno, line.index("[") + 1)
            if name in sections:
                raise ParseError(f"duplicate section [{name}]", lineno, 1)
            current = name
            sections[name] = []
            continue
        me = _ENTRY.match(line)
        if not me:
            raise ParseError("expected 'key = value'", lineno, len(line) - len(line.lstrip()) + 1)
        if current is None:
            raise ParseError("entry outside of a section", lineno, 1)
        sections[current].append(_Entry(me.group(2), me.group(3), lineno, me.start(3)))
    return sections


def _single(entries, key, section, required=True, default=None):
    found = [e for e in entries if e.key == key]
    if len(found) > 1:
        raise ParseError(f"duplicate key '{key}' in [{section}]", found[1].line, 1)
    if not found:
        if required:
            raise ParseError(f"missing key '{key}' in [{section}]")
        return default
    return found[0]


def _int(entry, minimum=None):
    try:
        v = int(entry.value)
    except ValueError:
        raise ParseError(f"'{entry.key}' must be an integer", entry.line, entry.col + 1) from None
    if minimum is not None and v < minimum:
        raise ParseError(f"'{entry.key}' must be >= {minimum}", entry.line, entry.col + 1)
    return v


def _int_list(entry):
    items = [s.strip() for s in entry.value.split(",")]
    if items == [""]:
        return []
    out = []
    for s in items:
        if not re.fullmatch(r"-?\d+", s):
            col = entry.col + entry.value.find(s) + 1
            raise ParseError(f"malformed integer {s!r} in '{entry.key}'", entry.line, col)
        out.append(int(s))
    return out


def _check_keys(entries, allowed, section):
    for e in entries:
        if e.key not in allowed and not (section == "chart" and re.fullmatch(r"t\d+", e.key)):
            raise ParseError(f"unknown key '{e.key}' in [{section}]", e.line, 1)


def _parse_field(sections):
    if "field" not in sections:
        raise ParseError("missing section [field]")
    entries = sections["field"]
    _check_keys(entries, {"p", "k", "modulus"}, "field")
    pe = _single(entries, "p", "field")
    p = _int(pe, 2)
    ke = _single(entries, "k", "field", required=False)
    k = _int(ke, 1) if ke else 1
    me = _single(entries, "modulus", "field", required=False)
    modulus = tuple(_int_list(me)) if me else None
    try:
        return FieldSpec(p, k, modulus)
    except ValueError as exc:
        bad = me or ke or pe
        raise ParseError(str(exc), bad.line, bad.col + 1) from None


def _parse_constant(entry, F):
    f = parse_poly(entry.value, F, 0, line=entry.line, col0=entry.col)
    if any(any(m) for m in f.terms):
        raise ParseError("expected a field constant", entry.line, entry.col + 1)
    return f.terms.get((0,), 0)


def _format_indices(idx):
    return ", ".join(map(str, sorted(idx)))


@dataclass
class Scenario:
    field: FieldSpec
    n: int
    precision: object
    generators: list            # canonical text of each generator
    divisor: Divisor
    chart: BlowupChart = None
    flags: dict = field(default_factory=dict)

    def ideal(self, precision=None) -> Ideal:
        prec = self.precision if precision is None else precision
        gens = [parse_poly(g, self.field, self.n, prec) for g in self.generators]
        return Ideal(tuple(gens), self.n)

    def emit(self) -> str:
        F = self.field
        lines = ["[field]", f"p = {F.p}"]
        if F.k > 1:
            lines.append(f"k = {F.k}")
            lines.append("modulus = " + ", ".join(map(str, F.modulus)))
        lines += ["", "[ring]", f"n = {self.n}"]
        if self.precision != INF:
            lines.append(f"precision = {self.precision}")
        else:
            lines.append("precision = exact")
        lines += ["", "[ideal]"]
        lines += [f"gen = {g}" for g in self.generators]
        lines += ["", "[divisor]", "s = " + ", ".join(map(str, self.divisor.s))]
        if self.chart is not None:
            lines += ["", "[chart]", f"S = {_format_indices(self.chart.S)}", f"T = {_format_indices(self.chart.T)}"]
            for i, v in self.chart.t:
                lines.append(f"t{i} = {F.format(v).replace(' ', '')}")
        if self.flags:
            lines += ["", "[mode]"] + [f"{k} = {v}" for k, v in sorted(self.flags.items())]
        return "\n".join(lines) + "\n"


def _parse_ring(sections):
    if "ring" not in sections:
        raise ParseError("missing section [ring]")
    entries = sections["ring"]
    _check_keys(entries, {"n", "precision"}, "ring")
    n = _int(_single(entries, "n", "ring"), 1)
    pe = _single(entries, "precision", "ring", required=False)
    if pe is None:
        prec = DEFAULT_PRECISION
    elif pe.value == "exact":
        prec = INF
    else:
        prec = _int(pe, 1)
    return n, prec


def _chart_sets(entries, n, allow_all):
    def index_set(key, default):
        e = _single(entries, key, "chart", required=False)
        if e is None:
            return default, None
        if allow_all and e.value == "all":
            return "all", e
        vals = _int_list(e)
        for v in vals:
            if not 1 <= v <= n:
                raise ParseError(f"chart index {v} outside 1..{n}", e.line, e.col + 1)
        return frozenset(vals), e

    S, se = index_set("S", frozenset(range(1, n + 1)))
    T, te = index_set("T", frozenset({1}))
    if S == "all":
        raise ParseError("S = all is not supported; list the center indices", se.line, se.col + 1)
    if 1 not in S:
        raise ParseError("the center must contain x1", se.line if se else None, 1)
    if T != "all":
        if 1 not in T:
            raise ParseError("T must contain 1", te.line, te.col + 1)
        if not T <= S:
            raise ParseError("T must be a subset of S", te.line, te.col + 1)
    return S, T


def _parse_chart(sections, F, n):
    entries = sections["chart"]
    _check_keys(entries, {"S", "T"}, "chart")
    S, T = _chart_sets(entries, n, False)
    t = {}
    for e in entries:
        if re.fullmatch(r"t\d+", e.key):
            i = int(e.key[1:])
            if i not in T - {1}:
                raise ParseError(f"translation {e.key} given for an index outside T minus {{1}}", e.line, 1)
            v = _parse_constant(e, F)
            if v == 0:
                raise ParseError("translation constant must be nonzero", e.line, e.col + 1)
            t[i] = v
    missing = sorted(T - {1} - set(t))
    if missing:
        raise ParseError(f"missing translation constant t{missing[0]}")
    return BlowupChart.make(S, T, t)


def _parse_divisor(sections, n):
    if "divisor" not in sections:
        return Divisor.zero(n)
    entries = sections["divisor"]
    _check_keys(entries, {"s"}, "divisor")
    e = _single(entries, "s", "divisor")
    s = _int_list(e)
    if len(s) != n:
        raise ParseError(f"divisor needs {n} multiplicities, got {len(s)}", e.line, e.col + 1)
    if any(v < 0 for v in s):
        raise ParseError("divisor multiplicities must be non-negative", e.line, e.col + 1)
    return Divisor(tuple(s))


def parse_scenario(text: str) -> Scenario:
    sections = _read_sections(text, {"field", "ring", "ideal", "divisor", "chart", "mode"})
    F = _parse_field(sections)
    n, prec = _parse_ring(sections)
    gens = []
    for e in sections.get("ideal", []):
        if e.key != "gen":
            raise ParseError(f"unknown key '{e.key}' in [ideal]", e.line, 1)
        f = parse_poly(e.value, F, n, line=e.line, col0=e.col)
        if not f.terms:
            raise ParseError("generator is zero", e.line, e.col + 1)
        gens.append(format_poly(f))
    if not gens:
        raise ParseError("empty generator list: [ideal] needs at least one 'gen = ...'")
    D = _parse_divisor(sections, n)
    chart = _parse_chart(sections, F, n) if "chart" in sections else None
    flags = {e.key: e.value for e in sections.get("mode", [])}
    return Scenario(F, n, prec, gens, D, chart, flags)


@dataclass
class SearchSpace:
    """Candidates f = (z^(p^e) + F)^m with F homogeneous, not a p^e-th power."""

    field: FieldSpec
    n: int
    e: int
    m: int
    degrees: tuple
    S: frozenset
    T: object                 # frozenset, or "all" for every T with 1 in T inside S
    t: object                 # dict index -> value, or "all" for every nonzero choice
    policy: str = "maximal"

    @property
    def c(self):
        return self.m * self.field.p ** self.e

    def emit(self) -> str:
        F = self.field
        lines = ["[field]", f"p = {F.p}"]
        if F.k > 1:
            lines += [f"k = {F.k}", "modulus = " + ", ".join(map(str, F.modulus))]
        lines += ["", "[space]", f"n = {self.n}", f"e = {self.e}", f"m = {self.m}",
                  "degrees = " + ", ".join(map(str, self.degrees)),
                  "", "[chart]", f"S = {_format_indices(self.S)}"]
        lines.append("T = all" if self.T == "all" else f"T = {_format_indices(self.T)}")
        if self.t == "all":
            lines.append("t = all")
        else:
            for i, v in sorted(self.t.items()):
                lines.append(f"t{i} = {F.format(v).replace(' ', '')}")
        lines += ["", "[divisor]", f"policy = {self.policy}"]
        return "\n".join(lines) + "\n"


def parse_search_space(text: str) -> SearchSpace:
    sections = _read_sections(text, {"field", "space", "chart", "divisor"})
    F = _parse_field(sections)
    if "space" not in sections:
        raise ParseError("missing section [space]")
    entries = sections["space"]
    _check_keys(entries, {"n", "e", "m", "degrees"}, "space")
    n = _int(_single(entries, "n", "space"), 1)
    e = _int(_single(entries, "e", "space"), 1)
    me = _single(entries, "m", "space", required=False)
    m = _int(me, 1) if me else 1
    de = _single(entries, "degrees", "space")
    degrees = tuple(_int_list(de))
    if any(d < 1 for d in degrees):
        raise ParseError("degrees must be positive", de.line, de.col + 1)
    chart_entries = sections.get("chart", [])
    _check_keys(chart_entries, {"S", "T", "t"}, "chart")
    S, T = _chart_sets(chart_entries, n, True)
    te = _single(chart_entries, "t", "chart", required=False)
    if te is not None:
        if te.value != "all":
            raise ParseError("'t' only accepts 'all'; give explicit constants as t2 = ...", te.line, te.col + 1)
        t = "all"
    else:
        t = {}
        for en in chart_entries:
            if re.fullmatch(r"t\d+", en.key):
                v = _parse_constant(en, F)
                if v == 0:
                    raise ParseError("translation constant must be nonzero", en.line, en.col + 1)
                t[int(en.key[1:])] = v
        if T == "all":
            raise ParseError("T = all needs t = all")
        missing = sorted(T - {1} - set(t))
        if missing:
            raise ParseError(f"missing translation constant t{missing[0]}")
    policy = "maximal"
    if "divisor" in sections:
        _check_keys(sections["divisor"], {"policy"}, "divisor")
        pe = _single(sections["divisor"], "policy", "divisor")
        if pe.value not in ("maximal", "zero"):
            raise ParseError("divisor policy must be 'maximal' or 'zero'", pe.line, pe.col + 1)
        policy = pe.value
    return SearchSpace(F, n, e, m, degrees, S, T, t, policy)


def load(path):
    """Parse a scenario or a search space, decided by the presence of [space]."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if re.search(r"^\s*\[\s*space\s*\]", text, re.M):
        return parse_search_space(text)
    return parse_scenario(text)
