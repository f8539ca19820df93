"""Certificates for residual-order increases ("kangaroo" points).

Conditions (1)-(9) are evaluated as executable checks on the weighted
tangent cone of J and the chart; :func:`detect_kangaroo` runs the whole
blowup pipeline and compares residual orders before and after.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .blowup import (BlowupChart, PermissibilityReport, TransformResult, blowup, from_y,
                     permissibility_check, pull_back, qt_degree, to_y)
from .contact import (MAXIMAL, ContactFrame, Divisor, coefficient_data, largest_p_power, residual_order,
                      shift_z, weak_max_contact)
from .errors import InternalAssertion, PrecisionError, check
from .field import lucas_binom
from .ideals import Ideal, ideal_order, weighted_initial_form, weighted_order, z_coefficient, z_regular_witness
from .poly import INF, Poly, hasse_derivative, max_p_power, p_power_root, substitute, truncate


class ConeFailure(ValueError):
    """The weighted tangent cone is not a power of a purely inseparable polynomial."""


@dataclass(frozen=True)
class WeightedCone:
    F: Poly          # homogeneous in x, degree w * p^e
    c: int
    w: int
    m: int
    e: int
    alpha: int       # encoded leading scalar of the first minimal generator

    @property
    def pe(self):
        return self.F.field.p ** self.e


def inseparable_power(F: Poly, pe: int, m: int) -> Poly:
    """(z^pe + F)^m expanded with Lucas binomials."""
    field_ = F.field
    nv = F.nvars
    zpe = Poly.monomial(field_, nv, (pe,) + (0,) * (nv - 1))
    out = Poly.zero(field_, nv)
    Fpow = Poly.constant(field_, nv, 1)
    powers = [Fpow]
    for _ in range(m):
        powers.append(powers[-1] * F)
    for j in range(m + 1):
        b = lucas_binom(m, j, field_.p)
        if b:
            out = out + (zpe ** j) * powers[m - j] * b
    return out


def extract_weighted_cone(frame: ContactFrame) -> WeightedCone:
    """Find F with in_w(f) = alpha (z^(p^e) + F)^m for every minimal generator."""
    J = frame.ideal
    c = frame.c
    field_ = J.field
    p = field_.p
    if frame.o == INF:
        raise ConeFailure("coefficient ideal vanishes")
    w = frame.w
    if w.denominator != 1:
        raise ConeFailure("condition (2) violated: w is not an integer")
    w = int(w)
    pe, e = largest_p_power(c, p)
    m = c // pe
    orders = [weighted_order(g, w) for g in J.gens]
    best = min(orders)
    if best != c * w:
        raise ConeFailure(f"minimal weighted order {best} differs from c*w = {c * w}")
    F = None
    alpha = None
    target = None
    for idx, (g, wo) in enumerate(zip(J.gens, orders), 1):
        if wo != best:
            continue
        cone = weighted_initial_form(g, w)
        lead = cone.coefficient((c,) + (0,) * J.n)
        if not lead:
            raise ConeFailure(f"generator {idx}: weighted initial form has no z^{c} term")
        cone = cone.mul_encoded(field_.inv(lead))
        if F is None:
            alpha = lead
            Fc = z_coefficient(cone, c - pe)
            F = Fc.mul_encoded(field_.inv(lucas_binom(c, pe, p))).exact()
            if not F.terms:
                raise ConeFailure(f"generator {idx}: no z^{c - pe} term in the weighted initial form")
            target = inseparable_power(F, pe, m)
        if cone != target:
            raise ConeFailure(f"generator {idx}: weighted initial form is not (z^{pe} + F)^{m}")
    if not F.is_homogeneous() or F.degree() != w * pe:
        raise ConeFailure("F is not homogeneous of degree w*p^e")
    if p_power_root(F, e) is not None:
        raise ConeFailure("F is a p^e-th power")
    return WeightedCone(F, c, w, m, e, alpha)


# -- conditions on F ------------------------------------------------------

def factorize_F(F: Poly, chart: BlowupChart):
    """(r, G, v): r_i = ord_(x_i) F for i in T, G = F / x^r, v = deg G."""
    r = {i: F.var_order(i) for i in sorted(chart.T)}
    mono = [0] * F.nvars
    for i, ri in r.items():
        mono[i] = ri
    G = F.exact_divide_monomial(mono)
    return r, G, G.degree()


def strip_pe_powers(F: Poly, chart: BlowupChart, e: int) -> Poly:
    """F in y-coordinates minus every monomial that some H^(p^e) can cancel."""
    pe = F.field.p ** e
    Fy = to_y(F, chart)
    return Fy.like({m: c for m, c in Fy.terms.items() if any(a % pe for a in m)})


def ord_mod_pe_QT(F: Poly, chart: BlowupChart, e: int):
    """max over H of ord_{Q_T}(F + H^(p^e)); inf when F is a p^e-th power."""
    rest = strip_pe_powers(F, chart, e)
    return min((qt_degree(m) for m in rest.terms), default=INF)


def check_condition_4(F, chart, e, v):
    return ord_mod_pe_QT(F, chart, e) > v


def check_condition_5(F: Poly, chart: BlowupChart, e: int, r: dict, G: Poly, v: int):
    """G((1, x') + tt) * prod (x_i + t_i)^r_i, cut at degree v, is a p^e-th power.

    Returns (flag, N) with N the p^e-th root when it exists.
    """
    field_, nv = F.field, F.nvars
    t = chart.translations
    assign = {1: Poly.constant(field_, nv, 1)}
    unit = Poly.constant(field_, nv, 1)
    for i, ti in t.items():
        xi_t = Poly.var(field_, nv, i) + Poly(field_, nv, {(0,) * nv: ti})
        assign[i] = xi_t
        unit = unit * xi_t ** r[i]
    Gt = substitute(G.exact(), assign)
    jet = truncate(Gt * unit, v)
    N = p_power_root(jet.exact(), e)
    return N is not None, N


def compute_l_b_residues(F: Poly, r: dict, e: int, p: int):
    """(ell, b, residues, vbar) with residues modulo p^(ell+1)."""
    ell = max_p_power(F)
    check(ell < e, "F is a p^e-th power; ell must stay below e")
    mod = p ** (ell + 1)
    residues = {i: ri % mod for i, ri in r.items()}
    b = sum(1 for x in residues.values() if x)
    v = F.degree() - sum(r.values())
    return ell, b, residues, v % mod


def check_condition_6(ell, b, residues, vbar, p, degree=None):
    """sum r_i mod p^(l+1) <= (b-1) p^(l+1); asserts agreement with the != form."""
    mod = p ** (ell + 1)
    total = sum(residues.values())
    first = total <= (b - 1) * mod
    second = total + vbar != b * mod
    if degree is None or degree % mod == 0:
        check(first == second, "the two forms of the residue inequality disagree")
    return first


def check_condition_7(F: Poly, chart: BlowupChart, e: int, ell: int = 0):
    """x_j (j not in T) only as p^e-th powers; x_i (i in T) only as p^ell-th powers."""
    p = F.field.p
    pe, pl = p ** e, p ** ell
    outside = [j for j in range(1, F.nvars) if j not in chart.T]
    for m in F.terms:
        if any(m[j] % pe for j in outside):
            return False
        if any(m[i] % pl for i in chart.T):
            return False
    return True


@dataclass(frozen=True)
class HasseCheck:
    index: int
    H: Poly
    ok: bool


def check_condition_8(F: Poly, chart: BlowupChart, r: dict, ell: int, e: int, require_nonzero=True):
    """x_i^(p^l) d/dx_i^(p^l) F = x^r H_i with H_i in K[y_j^(p^l), x_k^(p^e)].

    Returns (flag, [HasseCheck]).
    """
    p = F.field.p
    pl, pe = p ** ell, p ** e
    mono = [0] * F.nvars
    for i, ri in r.items():
        mono[i] = ri
    results = []
    for i in sorted(chart.T):
        d = hasse_derivative(F, i, pl)
        if not d.terms:
            continue
        shift = [0] * F.nvars
        shift[i] = pl
        logd = d * Poly.monomial(F.field, F.nvars, shift)
        try:
            H = logd.exact_divide_monomial(mono)
        except ArithmeticError:
            results.append(HasseCheck(i, logd, False))
            continue
        Hy = to_y(H, chart)
        ok = True
        for m in Hy.terms:
            if m[1]:
                ok = False
            for j in range(2, F.nvars):
                need = pl if j in chart.T else pe
                if m[j] % need:
                    ok = False
        results.append(HasseCheck(i, H, ok))
    if require_nonzero:
        check(results, "all logarithmic Hasse derivatives at level p^ell vanish along T")
    return all(h.ok for h in results) and bool(results), results


def moh_increase_bound(c, p):
    return Fraction(math.factorial(c), p)


def check_moh_bound(before, after, c, p):
    return after - before <= moh_increase_bound(c, p)


def sigma_weighted_initial(g: Poly, chart: BlowupChart) -> Poly:
    """Initial form for sigma(y_i) = 2 (i in S-1), 1 otherwise, back in x-coordinates."""
    gy = to_y(g, chart)
    if not gy.terms:
        return gy
    S = chart.S

    def sigma(m):
        return sum(a * (2 if i in S and i != 1 else 1) for i, a in enumerate(m) if i >= 1)

    low = min(sigma(m) for m in gy.terms)
    init = gy.like({m: c for m, c in gy.terms.items() if sigma(m) == low}, precision=INF)
    return from_y(init, chart)


def qt_order_of_initial(h: Poly, chart: BlowupChart):
    """ord_{Q_T} in(h)."""
    hy = to_y(h.initial_form(), chart)
    return min((qt_degree(m) for m in hy.terms), default=INF)


def proposition_bound(h: Poly, chart: BlowupChart, D: Divisor, exponent: int = 1):
    """ord_{Q_T} in(h^exponent) - sum of s_i over i outside T."""
    outside = sum(D[i] for i in range(1, D.n + 1) if i not in chart.T)
    return exponent * qt_order_of_initial(h, chart) - outside


# -- certificate and detector ---------------------------------------------

PASS, FAIL, NA = "pass", "fail", "n/a"


def flag(value):
    if value is None:
        return NA
    return PASS if value else FAIL


@dataclass
class KangarooCertificate:
    c: int
    o: object
    w: object
    p: int
    e: int = None
    m: int = None
    ell: int = None
    b: int = None
    v: int = None
    vbar: int = None
    r: dict = field(default_factory=dict)
    residues: dict = field(default_factory=dict)
    F: Poly = None
    G: Poly = None
    N: Poly = None
    ord_mod: object = None
    hasse: list = field(default_factory=list)
    cone_error: str = None
    conditions: dict = field(default_factory=dict)
    resord_before: object = None
    resord_after: object = None

    def all_pass(self):
        return all(self.conditions.get(k) is True for k in range(1, 10))

    def first_eight(self):
        return all(self.conditions.get(k) is True for k in range(1, 9))


def theorem_conditions(frame: ContactFrame, chart: BlowupChart) -> KangarooCertificate:
    """Conditions (1)-(8) from the maximal-contact frame and the chart; (9) is filled in later."""
    c = frame.c
    p = frame.ideal.field.p
    cert = KangarooCertificate(c=c, o=frame.o, w=frame.w, p=p)
    pe, e = largest_p_power(c, p)
    cert.e, cert.m = e, c // pe
    conds = cert.conditions
    conds[1] = e >= 1
    w = frame.w
    conds[2] = w != INF and w.denominator == 1 and w >= 2
    try:
        cone = extract_weighted_cone(frame) if e >= 1 else None
        if cone is None:
            raise ConeFailure("p does not divide c")
    except ConeFailure as exc:
        cert.cone_error = str(exc)
        conds[3] = False
        for k in range(4, 9):
            conds[k] = None
        return cert
    conds[3] = True
    F = cone.F
    cert.F = F
    r, G, v = factorize_F(F, chart)
    cert.r, cert.G, cert.v = r, G, v
    cert.ord_mod = ord_mod_pe_QT(F, chart, e)
    conds[4] = cert.ord_mod > v
    ok5, N = check_condition_5(F, chart, e, r, G, v)
    conds[5], cert.N = ok5, N
    ell, b, residues, vbar = compute_l_b_residues(F, r, e, p)
    cert.ell, cert.b, cert.residues, cert.vbar = ell, b, residues, vbar
    conds[6] = check_condition_6(ell, b, residues, vbar, p, F.degree())
    conds[7] = check_condition_7(F, chart, e, ell)
    ok8, hasse = check_condition_8(F, chart, r, ell, e, require_nonzero=conds[7])
    conds[8], cert.hasse = ok8, hasse
    return cert


@dataclass
class PropositionCheck:
    q_sigma: Poly = None     # p^e-th root of lambda * in_sigma(f_{c-p^e})
    q: Poly = None           # the hypersurface U = V(z - q) actually used
    bound: object = None
    order_kept: bool = None
    u_match: bool = None     # q_sigma reproduces the first cleaning step after blowup
    chain_ok: bool = None
    note: str = ""


def proposition_check(frame: ContactFrame, chart: BlowupChart, D: Divisor, after_frame: ContactFrame = None):
    """Build U = V(z - q) and evaluate the bound on ord I_1'.

    q_sigma comes from the sigma-initial form of f_{c-p^e}.  When the
    cleaning of J' is known, q is the pull-back of all its steps (the
    first of which must equal q_sigma); otherwise q = q_sigma.
    """
    out = PropositionCheck()
    J = frame.ideal
    c = frame.c
    field_ = J.field
    p = field_.p
    f = z_regular_witness(J, c)
    if f is None:
        out.note = "no z-regular generator"
        return out
    pe, e = largest_p_power(c, p)
    fcp = z_coefficient(f, c - pe)
    if fcp.terms:
        lam = field_.neg(field_.inv(lucas_binom(c, pe, p)))
        g = sigma_weighted_initial(fcp, chart).mul_encoded(lam)
        out.q_sigma = p_power_root(g, e)
    q = out.q_sigma
    if after_frame is not None and after_frame.steps:
        pulled = [pull_back(step, chart) for step in after_frame.steps]
        if any(x is None for x in pulled):
            out.note = "a cleaning step after blowup has no preimage"
            return out
        out.u_match = out.q_sigma is not None and pulled[0] == out.q_sigma
        q = Poly.zero(field_, J.n + 1)
        for x in pulled:
            q = q + x
    if q is None:
        out.note = "sigma-initial form is not a p^e-th power"
        return out
    out.q = q
    data = coefficient_data(shift_z(J, q), c)
    out.order_kept = data.known_order == frame.o
    bounds = [proposition_bound(entry.coeff, chart, D, entry.exponent)
              for entry in data.minimal_entries() if not entry.shift]
    out.bound = min(bounds) if bounds else INF
    return out


VERDICT_KANGAROO = "kangaroo"
VERDICT_NO_INCREASE = "no-increase"
VERDICT_ORDER_DROPPED = "order-dropped"
VERDICT_NOT_PERMISSIBLE = "not-permissible"
VERDICT_INCOMPATIBLE = "incompatible"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass
class AnalysisReport:
    c: int = None
    o: object = None
    w: object = None
    frame: ContactFrame = None
    resord_before: object = None
    permissibility: PermissibilityReport = None
    transform: TransformResult = None
    order_after: object = None
    frame_after: ContactFrame = None
    resord_after: object = None
    verdict: str = None
    certificate: KangarooCertificate = None
    proposition: PropositionCheck = None
    moh: str = NA
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def increase(self):
        if self.resord_before is None or self.resord_after is None:
            return None
        return self.resord_after - self.resord_before


def detect_kangaroo(J: Ideal, D: Divisor, chart: BlowupChart, strict: bool = True) -> AnalysisReport:
    """Full pipeline: contact, residual order, blowup, contact again, certificate.

    With ``strict`` any violated theorem-level invariant raises
    InternalAssertion; otherwise violations are listed in the report.
    """
    rep = AnalysisReport()
    try:
        _detect(J, D, chart, rep)
    except PrecisionError as exc:
        rep.verdict = VERDICT_INCONCLUSIVE
        rep.notes.append(f"inconclusive: raise precision ({exc})")
    if strict and rep.violations:
        raise InternalAssertion("; ".join(rep.violations))
    return rep


def _detect(J, D, chart, rep):
    chart.validate(J.n)
    frame = weak_max_contact(J)
    rep.frame = frame
    rep.c, rep.o = frame.c, frame.o
    rep.w = frame.w
    if frame.status != MAXIMAL:
        rep.verdict = VERDICT_INCONCLUSIVE
        rep.notes.append(f"inconclusive: contact frame status {frame.status}")
        return
    before = residual_order(J, D, frame)
    if not before.compatible:
        rep.verdict = VERDICT_INCOMPATIBLE
        rep.notes.append("before blowup: " + before.describe())
        return
    rep.resord_before = before.value
    cert = theorem_conditions(frame, chart)
    cert.resord_before = before.value
    rep.certificate = cert
    perm = permissibility_check(J, D, chart, frame)
    rep.permissibility = perm
    if not perm.ok:
        rep.verdict = VERDICT_NOT_PERMISSIBLE
        rep.notes.append("not permissible: " + ", ".join(perm.failures()))
        return
    tr = blowup(J, D, chart, frame)
    rep.transform = tr
    c_after = ideal_order(tr.ideal)
    rep.order_after = c_after
    if c_after > frame.c:
        rep.violations.append(f"order increased under permissible blowup: {frame.c} -> {c_after}")
    if c_after < frame.c:
        rep.verdict = VERDICT_ORDER_DROPPED
        return
    frame_after = weak_max_contact(tr.ideal)
    rep.frame_after = frame_after
    if frame_after.status != MAXIMAL:
        rep.verdict = VERDICT_INCONCLUSIVE
        rep.notes.append(f"inconclusive: contact frame after blowup has status {frame_after.status}")
        return
    after = residual_order(tr.ideal, tr.divisor, frame_after)
    if not after.compatible:
        rep.verdict = VERDICT_INCOMPATIBLE
        rep.notes.append("after blowup: " + after.describe())
        return
    rep.resord_after = after.value
    cert.resord_after = after.value
    p = J.field.p
    cert.conditions[9] = check_moh_bound(before.value, after.value, frame.c, p)
    inc = after.value - before.value
    bound = moh_increase_bound(frame.c, p)
    if inc <= 0:
        rep.moh = "vacuous"
    elif inc == bound:
        rep.moh = "equality"
    elif inc < bound:
        rep.moh = "strict"
    else:
        rep.moh = "violated"
    if inc > 0:
        rep.verdict = VERDICT_KANGAROO
        if not tr.divisible:
            rep.violations.append(
                f"exceptional multiplicity {tr.exceptional_multiplicity} is not a multiple of c!")
        if not cert.all_pass():
            failed = [k for k in range(1, 10) if cert.conditions.get(k) is not True]
            rep.violations.append(f"kangaroo without conditions {failed}")
        prop = proposition_check(frame, chart, D, frame_after)
        rep.proposition = prop
        if prop.bound is None:
            rep.violations.append(f"proposition construction failed: {prop.note}")
        elif not prop.order_kept:
            rep.violations.append("the adjusted hypersurface lowers the coefficient order")
        else:
            prop.chain_ok = before.value < after.value <= prop.bound
            if not prop.chain_ok:
                rep.violations.append(
                    f"proposition chain {before.value} < {after.value} <= {prop.bound} fails")
    else:
        rep.verdict = VERDICT_NO_INCREASE
