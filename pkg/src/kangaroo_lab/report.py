"""Reports: a human block followed by a machine block of ``key=value`` lines.

The machine keys c, o, w, resord.before, resord.after, cond.1 .. cond.9 and
verdict are stable; extra keys may be added but never renamed.
"""

from __future__ import annotations

from fractions import Fraction

from .grammar import format_poly
from .kangaroo import NA, flag
from .poly import INF

MACHINE_HEADER = "# machine"


def fmt(value):
    if value is None:
        return NA
    if value == INF:
        return "inf"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if hasattr(value, "terms"):
        return format_poly(value)
    return str(value)


class Report:
    def __init__(self, command):
        self.command = command
        self.human = []
        self.machine = [("command", command)]

    def line(self, text=""):
        self.human.append(text)

    def put(self, key, value):
        self.machine.append((key, fmt(value)))

    def render(self):
        out = list(self.human)
        out.append("")
        out.append(MACHINE_HEADER)
        out += [f"{k}={v}" for k, v in self.machine]
        return "\n".join(out) + "\n"


def machine_block(text):
    """The machine lines of a rendered report, as a dict."""
    lines = text.split(MACHINE_HEADER + "\n", 1)[1].splitlines()
    return dict(line.split("=", 1) for line in lines if line)


def _conditions_summary(cert):
    if cert is None:
        return "conditions 1–9: n/a"
    failed = [k for k in range(1, 10) if cert.conditions.get(k) is False]
    missing = [k for k in range(1, 10) if cert.conditions.get(k) is None]
    if not failed and not missing:
        return "conditions 1–9: pass"
    parts = []
    if failed:
        parts.append("fail " + ", ".join(map(str, failed)))
    if missing:
        parts.append("n/a " + ", ".join(map(str, missing)))
    return "conditions 1–9: " + "; ".join(parts)


def frame_line(frame):
    return f"c={frame.c}, o={fmt(frame.o)}, w={fmt(frame.w)}, maximal contact: {frame.hypersurface()}"


def add_frame(rep: Report, frame, prefix=""):
    rep.put(prefix + "c", frame.c)
    rep.put(prefix + "o", frame.o)
    rep.put(prefix + "w", frame.w)
    rep.put(prefix + "contact", frame.hypersurface())
    rep.put(prefix + "contact.status", frame.status)
    rep.put(prefix + "cleaning.steps", len(frame.steps))
    rep.put(prefix + "cleaning.orders", ",".join(fmt(o) for o in frame.orders))


def add_transform(rep: Report, tr):
    rep.put("transform.ideal", " ; ".join(format_poly(g) for g in tr.ideal.gens))
    rep.put("transform.divisor", ",".join(map(str, tr.divisor.s)))
    rep.put("transform.lost", ",".join(map(str, sorted(tr.lost))) or "none")
    rep.put("transform.exceptional", tr.exceptional_multiplicity)
    rep.put("transform.divisible", tr.divisible)


def add_certificate(rep: Report, cert):
    for k in range(1, 10):
        rep.put(f"cond.{k}", flag(cert.conditions.get(k)) if cert else NA)
    if cert is None:
        return
    rep.put("cert.e", cert.e)
    rep.put("cert.m", cert.m)
    if cert.cone_error:
        rep.put("cert.cone", cert.cone_error)
    if cert.F is not None:
        rep.put("cert.F", cert.F)
        rep.put("cert.r", ",".join(f"{i}:{v}" for i, v in sorted(cert.r.items())))
        rep.put("cert.G", cert.G)
        rep.put("cert.v", cert.v)
        rep.put("cert.ord_mod", cert.ord_mod)
        rep.put("cert.N", cert.N)
        rep.put("cert.ell", cert.ell)
        rep.put("cert.b", cert.b)
        rep.put("cert.residues", ",".join(f"{i}:{v}" for i, v in sorted(cert.residues.items())))
        rep.put("cert.vbar", cert.vbar)
        for h in cert.hasse:
            rep.put(f"cert.H.{h.index}", h.H)


def certificate_lines(rep: Report, cert):
    if cert is None:
        return
    if cert.cone_error:
        rep.line(f"  weighted cone: {cert.cone_error}")
    if cert.F is not None:
        rep.line(f"  weighted cone: (z^{cert.F.field.p ** cert.e} + F)^{cert.m}, F = {format_poly(cert.F)}")
        rep.line(f"  F = x^r * G with r = {dict(sorted(cert.r.items()))}, G = {format_poly(cert.G)}, v = {cert.v}")
        rep.line(f"  ord mod p^e along Q_T = {fmt(cert.ord_mod)}; ell = {cert.ell}, b = {cert.b}, "
                 f"residues = {dict(sorted(cert.residues.items()))}, vbar = {cert.vbar}")
    for k in range(1, 10):
        rep.line(f"  ({k}) {flag(cert.conditions.get(k))}")


VERDICT_TITLES = {
    "kangaroo": "KANGAROO",
    "no-increase": "NO INCREASE",
    "order-dropped": "ORDER DROPPED",
    "not-permissible": "NOT PERMISSIBLE",
    "incompatible": "INCOMPATIBLE",
    "inconclusive": "INCONCLUSIVE",
}


def headline(ar):
    title = VERDICT_TITLES.get(ar.verdict, str(ar.verdict).upper())
    if ar.verdict in ("kangaroo", "no-increase"):
        return (f"{title}: residual order {fmt(ar.resord_before)} → {fmt(ar.resord_after)}; "
                f"{_conditions_summary(ar.certificate)}; Moh bound: {ar.moh}")
    if ar.verdict == "order-dropped":
        return f"{title}: order {ar.c} → {fmt(ar.order_after)}"
    return f"{title}: " + ("; ".join(ar.notes) if ar.notes else ar.verdict)


def detect_report(ar, command="detect") -> Report:
    rep = Report(command)
    if command == "check-theorem":
        rep.line(f"{_conditions_summary(ar.certificate)} (verdict: {ar.verdict})")
    else:
        rep.line(headline(ar))
    if ar.frame is not None:
        rep.line("before: " + frame_line(ar.frame))
    if ar.permissibility is not None and not ar.permissibility.ok:
        rep.line("permissibility failures: " + ", ".join(ar.permissibility.failures()))
    if ar.transform is not None:
        tr = ar.transform
        rep.line("weak transform: " + " ; ".join(format_poly(g) for g in tr.ideal.gens))
        rep.line(f"divisor after: {tr.divisor}; lost components: {sorted(tr.lost) or 'none'}; "
                 f"exceptional multiplicity {tr.exceptional_multiplicity}")
    if ar.frame_after is not None:
        rep.line("after: " + frame_line(ar.frame_after))
    if ar.proposition is not None:
        pr = ar.proposition
        rep.line(f"adjusted hypersurface: V(z - ({fmt(pr.q)})), bound {fmt(pr.bound)}, "
                 f"sigma step matches cleaning: {fmt(pr.u_match)}")
    if command == "check-theorem" or ar.verdict == "kangaroo":
        certificate_lines(rep, ar.certificate)
    for v in ar.violations:
        rep.line("VIOLATION: " + v)
    rep.put("verdict", ar.verdict)
    rep.put("c", ar.c)
    rep.put("o", ar.o)
    rep.put("w", ar.w)
    if ar.frame is not None:
        rep.put("contact", ar.frame.hypersurface())
    rep.put("resord.before", ar.resord_before)
    rep.put("resord.after", ar.resord_after)
    rep.put("order.after", ar.order_after)
    rep.put("moh", ar.moh)
    add_certificate(rep, ar.certificate)
    if ar.transform is not None:
        add_transform(rep, ar.transform)
    if ar.frame_after is not None:
        rep.put("contact.after", ar.frame_after.hypersurface())
        rep.put("cleaning.after", ar.frame_after.q_total)
    if ar.proposition is not None:
        rep.put("prop.q", ar.proposition.q)
        rep.put("prop.q_sigma", ar.proposition.q_sigma)
        rep.put("prop.bound", ar.proposition.bound)
        rep.put("prop.u_match", ar.proposition.u_match)
        rep.put("prop.chain", ar.proposition.chain_ok)
    rep.put("violations", len(ar.violations))
    return rep


def search_report(result, command="search") -> Report:
    rep = Report(command)
    sp = result.space
    rep.line(f"search space: p={sp.field.p}, k={sp.field.k}, n={sp.n}, e={sp.e}, m={sp.m}, "
             f"degrees={list(sp.degrees)}; declared {result.declared} candidates, visited {result.visited}")
    kang = result.kangaroos()
    rep.line(f"kangaroo instances: {len(kang)}")
    for r in kang:
        rep.line(f"  F = {r.F}  [{r.chart}]  D = {r.divisor}  residual order {fmt(r.before)} → {fmt(r.after)}"
                 f"  Moh: {r.moh}")
    counts = result.verdict_counts()
    rep.line("verdicts: " + ", ".join(f"{k} {v}" for k, v in counts.items()))
    viol = result.violations()
    disc = result.discrepancies()
    for key, v in viol:
        rep.line(f"VIOLATION {key}: {v}")
    for key, d in disc:
        rep.line(f"DISCREPANCY {key}: {d}")
    rep.put("candidates.declared", result.declared)
    rep.put("candidates.visited", result.visited)
    rep.put("kangaroos", len(kang))
    for k, v in counts.items():
        rep.put(f"verdict.{k}", v)
    moh_eq = sum(1 for r in kang if r.moh == "equality")
    rep.put("moh.equality", moh_eq)
    rep.put("violations", len(viol))
    rep.put("discrepancies", len(disc))
    for i, r in enumerate(kang, 1):
        rep.put(f"kangaroo.{i}", f"{r.F} | {r.chart} | {r.divisor} | {fmt(r.before)}->{fmt(r.after)}")
    return rep
