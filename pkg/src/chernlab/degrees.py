"""Extended degrees (hdeg, hdeg_I), the invariant T, inequality reports and
conjecture verdicts.

hdeg(M) = deg(M) + sum_{i=r-d+1}^{r} binom(d-1, i-r+d-1) hdeg(Ext^i_S(M, S)),
with hdeg(M) = lambda(M) for modules of finite length. hdeg_I uses the
Samuel multiplicity e(I; .) in place of deg at every node.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb

from .errors import ChernlabError, GenericityError, PreconditionError
from .hilbert import (ClosureFiltration, hilbert_coefficients, module_multiplicity)
from .homology import (GradedModulePresentation, as_module, ext_module, is_cm,
                       koszul_homology_lengths, local_cohomology_length)
from .rings import (PresentedRing, RingIdeal, jacobian_ideal, minimal_reduction_candidate,
                    random_superficial_reduction)

VERDICTS = ("holds", "fails", "hypotheses-not-met", "ingredient-unavailable")


# ---------------------------------------------------------------------------
# extended degrees


@dataclass
class DegreeReport:
    """One node of the hdeg recursion; ``children`` are (i, weight, DegreeReport)."""

    label: str
    dim: int
    base: int
    value: int
    children: list = field(default_factory=list)
    relative: bool = False
    finite_length: bool = False

    @property
    def deg(self) -> int:
        return self.base

    def excess(self) -> int:
        return self.value - self.base

    def as_dict(self) -> dict:
        return {
            "module": self.label,
            "dim": str(self.dim),
            "e(I;M)" if self.relative else "deg": str(self.base),
            "value": str(self.value),
            "finite_length": self.finite_length,
            "ext": [{"i": str(i), "weight": str(w), "node": child.as_dict()}
                    for i, w, child in self.children],
        }

    def lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        name = "e(I;.)" if self.relative else "deg"
        out = [f"{pad}{self.label}: dim {self.dim}, {name} {self.base}, total {self.value}"]
        for i, w, child in self.children:
            out.append(f"{pad}  + {w} * [Ext^{i}]")
            out.extend(child.lines(indent + 2))
        return out


def _ideal_key(I):
    return None if I is None else (I.ring, I.gb)


def _hdeg(M: GradedModulePresentation, I, memo: dict, label: str) -> DegreeReport:
    key = (M, _ideal_key(I))
    if key in memo:
        return memo[key]
    relative = I is not None
    if M.is_zero():
        rep = DegreeReport(label, -1, 0, 0, [], relative, True)
        memo[key] = rep
        return rep
    L = M.length()
    if L is not None:
        rep = DegreeReport(label, 0, L, L, [], relative, True)
        memo[key] = rep
        return rep
    d = M.dim()
    r = M.ring.nvars
    base = module_multiplicity(M, I, d) if relative else M.degree()
    children = []
    for i in range(r - d + 1, r + 1):
        w = comb(d - 1, i - r + d - 1)
        E = ext_module(M, i)
        if E.is_zero():
            continue
        if E.dim >= d:
            raise AssertionError("Ext module does not drop dimension")
        child = _hdeg(E.module, I, memo, f"Ext^{i}({label})")
        children.append((i, w, child))
    value = base + sum(w * c.value for _, w, c in children)
    rep = DegreeReport(label, d, base, value, children, relative, False)
    memo[key] = rep
    return rep


def hdeg(M, memo: dict | None = None) -> DegreeReport:
    """Homological degree of a graded module (or of a presented ring)."""
    label = M.name if isinstance(M, PresentedRing) and M.name else "M"
    M = as_module(M)
    return _hdeg(M, None, {} if memo is None else memo, M.name or label)


def hdeg_rel(M, I: RingIdeal, memo: dict | None = None) -> DegreeReport:
    """hdeg_I: the same recursion with Samuel multiplicities relative to I."""
    if not I.is_m_primary():
        raise PreconditionError("hdeg_I needs an m-primary ideal")
    M = as_module(M)
    if M.ring != I.ring.ambient:
        raise PreconditionError("module and ideal over different rings")
    return _hdeg(M, I, {} if memo is None else memo, M.name or "M")


def t_invariant(M) -> int | None:
    """T(M) = sum_{i=1}^{d-1} binom(d-2, i-1) lambda(H^i_m(M)); None if some H^i is infinite."""
    M = as_module(M)
    d = M.dim()
    total = 0
    for i in range(1, d):
        h = local_cohomology_length(M, i)
        if h is None:
            return None
        total += comb(d - 2, i - 1) * h
    return total


def nilpotency_index(I: RingIdeal, limit: int = 200) -> int:
    """Least r with m^r contained in I."""
    if not I.is_m_primary():
        raise PreconditionError("nilpotency index of a non m-primary ideal")
    m = I.ring.maximal_ideal()
    power = m
    for r in range(1, limit + 1):
        if power.issubset(I):
            return r
        power = m.times_gb(power)
    raise AssertionError("nilpotency index not found")


# ---------------------------------------------------------------------------
# bound reports


def _compare(lhs, rel, rhs) -> bool:
    return {"<=": lhs <= rhs, ">=": lhs >= rhs, "==": lhs == rhs,
            "<": lhs < rhs}[rel]


@dataclass
class BoundReport:
    name: str
    statement: str
    hypotheses: dict
    lhs: object
    relation: str
    rhs: object
    values: dict = field(default_factory=dict)
    verdict: str = field(init=False)

    def __post_init__(self):
        if not all(self.hypotheses.values()):
            self.verdict = "hypotheses-not-met"
        elif self.lhs is None or self.rhs is None:
            self.verdict = "ingredient-unavailable"
        else:
            self.verdict = "holds" if _compare(self.lhs, self.relation, self.rhs) else "fails"

    def as_dict(self) -> dict:
        def s(v):
            return "unavailable" if v is None else str(v)
        return {
            "name": self.name,
            "statement": self.statement,
            "hypotheses": {k: bool(v) for k, v in self.hypotheses.items()},
            "lhs": s(self.lhs),
            "relation": self.relation,
            "rhs": s(self.rhs),
            "values": {k: s(v) for k, v in self.values.items()},
            "verdict": self.verdict,
        }


def is_parameter_ideal(R: PresentedRing, J: RingIdeal) -> bool:
    return len(J.gens) == R.dim and J.is_m_primary()


def is_d_sequence(R: PresentedRing, gens) -> bool:
    """Colon criterion ((x_1..x_i) : x_{i+1} x_k) = ((x_1..x_i) : x_k), 0 <= i < d, k > i."""
    gens = list(gens)
    d = len(gens)
    for i in range(d):
        base = RingIdeal(R, gens[:i])
        for k in range(i, d):
            left = base.colon_element(gens[i] * gens[k])
            right = base.colon_element(gens[k])
            if left != right:
                return False
    return True


class _Lazy:
    """Per-suite memo of expensive quantities, each computed at most once."""

    def __init__(self, R: PresentedRing, memo: dict):
        self.R = R
        self.memo = memo
        self.cache: dict = {}

    def get(self, key, fn):
        if key not in self.cache:
            try:
                self.cache[key] = fn()
            except ChernlabError as exc:
                self.cache[key] = exc
        val = self.cache[key]
        return None if isinstance(val, ChernlabError) else val


def northcott_report(R, I, lazy: _Lazy) -> BoundReport:
    cm = lazy.get("cm", lambda: is_cm(R))
    c = lazy.get(("coeffs", I), lambda: hilbert_coefficients(R, I))
    colen = I.colength()
    e0 = c.e0 if c else None
    e1 = c.e1 if c else None
    return BoundReport("northcott", "e1(I) >= e0(I) - lambda(R/I)",
                       {"R Cohen-Macaulay": bool(cm), "I m-primary": I.is_m_primary()},
                       e1, ">=", None if e0 is None else e0 - colen,
                       {"e0": e0, "e1": e1, "lambda(R/I)": colen})


def generalized_cm_report(R, J, lazy: _Lazy, buchsbaum: bool) -> BoundReport:
    d = R.dim
    T = lazy.get("T", lambda: t_invariant(R))
    c = lazy.get(("coeffs", J), lambda: hilbert_coefficients(R, J))
    hyp = {"R generalized Cohen-Macaulay": T is not None,
           "J parameter ideal": is_parameter_ideal(R, J), "d >= 2": d >= 2}
    rel = "==" if buchsbaum else ">="
    values = {"e1(J)": c.e1 if c else None, "T(R)": T, "buchsbaum_flag": buchsbaum}
    if T is not None:
        for i in range(1, d):
            values[f"lambda(H^{i})"] = local_cohomology_length(R, i)
    return BoundReport("generalized-cm-lower-bound",
                       "e1(J) >= -sum binom(d-2,i-1) lambda(H^i(R)), equality if Buchsbaum",
                       hyp, c.e1 if c else None, rel, None if T is None else -T, values)


def d_sequence_report(R, J, lazy: _Lazy) -> BoundReport:
    param = is_parameter_ideal(R, J)
    dseq = param and lazy.get(("dseq", J), lambda: is_d_sequence(R, J.gens))
    h = lazy.get(("koszul", J), lambda: koszul_homology_lengths(R, J)) if param else None
    c = lazy.get(("coeffs", J), lambda: hilbert_coefficients(R, J))
    rhs = None if h is None else sum((-1) ** i * i * hi for i, hi in enumerate(h))
    return BoundReport("d-sequence-e1", "e1(J) = sum (-1)^i i h_i(J)",
                       {"J parameter ideal": param, "J generated by a d-sequence": bool(dseq)},
                       c.e1 if c else None, "==", rhs,
                       {"h": None if h is None else ",".join(map(str, h))})


def hdeg_lower_report(R, I, lazy: _Lazy) -> BoundReport:
    c = lazy.get(("coeffs", I), lambda: hilbert_coefficients(R, I))
    hd = lazy.get(("hdeg_I", I), lambda: hdeg_rel(R, I, lazy.memo))
    rhs = None if (hd is None or c is None) else c.e0 - hd.value
    return BoundReport("hdeg-lower-bound", "e1(I) >= e0(I) - hdeg_I(R)",
                       {"d >= 1": R.dim >= 1, "I m-primary": I.is_m_primary()},
                       c.e1 if c else None, ">=", rhs,
                       {"e0": c.e0 if c else None, "hdeg_I": hd.value if hd else None})


def comparison_report(R, I, lazy: _Lazy) -> BoundReport:
    d = R.dim
    hd = lazy.get("hdeg", lambda: hdeg(R, lazy.memo))
    hdI = lazy.get(("hdeg_I", I), lambda: hdeg_rel(R, I, lazy.memo))
    r = lazy.get(("nil", I), lambda: nilpotency_index(I))
    rhs = None
    if hd is not None and r is not None:
        rhs = r ** d * hd.deg + r ** max(d - 1, 0) * (hd.value - hd.deg)
    return BoundReport("hdeg-comparison", "hdeg_I(M) <= r^d deg(M) + r^(d-1)(hdeg(M) - deg(M))",
                       {"I m-primary": I.is_m_primary()}, hdI.value if hdI else None, "<=", rhs,
                       {"r": r, "deg": hd.deg if hd else None, "hdeg": hd.value if hd else None})


def specialization_reports(R, lazy: _Lazy, seed) -> list[BoundReport]:
    d = R.dim
    count = d - 1
    out = []
    if d < 2:
        for name in ("specialization-torsion", "specialization-torsion-T"):
            out.append(BoundReport(name, "needs dim >= 2", {"d >= 2": False}, None, "<=", None))
        return out
    try:
        red = random_superficial_reduction(R, R.maximal_ideal(), count, seed=seed)
    except GenericityError:
        red = None
    hd = lazy.get("hdeg", lambda: hdeg(R, lazy.memo))
    h0 = None if red is None else local_cohomology_length(red.ring, 0)
    values = {"count": count, "lambda(H0(M/xM))": h0,
              "elements": None if red is None else "; ".join(map(str, red.elements))}
    out.append(BoundReport("specialization-torsion", "lambda(H0(M/xM)) <= hdeg(M)",
                           {"superficial sequence found": red is not None}, h0, "<=",
                           hd.value if hd else None, dict(values, hdeg=hd.value if hd else None)))
    T = lazy.get("T", lambda: t_invariant(R))
    H0 = local_cohomology_length(R, 0)
    rhs = None if T is None else H0 + T
    out.append(BoundReport("specialization-torsion-T", "lambda(H0(M/xM)) <= lambda(H0(M)) + T(M)",
                           {"superficial sequence found": red is not None, "d >= 2": True,
                            "T(M) finite": T is not None},
                           h0, "<=", rhs, dict(values, **{"lambda(H0(M))": H0, "T": T})))
    return out


def superficial_reports(R, I, lazy: _Lazy, seed) -> list[BoundReport]:
    d = R.dim
    count = max(1, d - 1)
    try:
        red = random_superficial_reduction(R, I, count, seed=seed)
    except GenericityError:
        red = None
    hdI = lazy.get(("hdeg_I", I), lambda: hdeg_rel(R, I, lazy.memo))
    c = lazy.get(("coeffs", I), lambda: hilbert_coefficients(R, I))
    hyp = {"d >= 1": d >= 1, "superficial sequence found": red is not None}
    lhs = None
    values = {"count": count}
    if red is not None:
        values["elements"] = "; ".join(map(str, red.elements))
        Mx = GradedModulePresentation.from_ring(red.ring)
        if Mx.is_homogeneous():
            lhs = lazy.get(("hdeg_I_red", I), lambda: hdeg_rel(red.ring, RingIdeal(red.ring, I.gens),
                                                               {}).value)
    out = [BoundReport("superficial-invariance", "hdeg_I(M/xM) <= hdeg_I(M)", hyp, lhs, "<=",
                       hdI.value if hdI else None, dict(values))]
    h0 = None if red is None else local_cohomology_length(red.ring, 0)
    rhs = None if (hdI is None or c is None) else hdI.value - c.e0
    out.append(BoundReport("superficial-torsion", "lambda(H0(M/xM)) <= hdeg_I(M) - e(I;M)",
                           dict(hyp, **{"count < d": count < d}), h0, "<=", rhs,
                           dict(values, **{"lambda(H0(M/xM))": h0})))
    return out


def _closure_data(R, I, lazy: _Lazy):
    """(closure coefficients, lambda(R/closure I)) or None outside the monomial case."""
    if not (R.is_polynomial_ring and I.is_monomial() and I.is_m_primary()):
        return None

    def compute():
        filt = ClosureFiltration(R, RingIdeal(R, [g for g in I.gb.elements()]))
        cb = hilbert_coefficients(R, filt)
        return cb, filt.lengths(0)[0]
    return lazy.get(("closure", I), compute)


def briancon_skoda_report(R, I, J, lazy: _Lazy) -> BoundReport:
    d = R.dim
    L = lazy.get("jacobian", lambda: jacobian_ideal(R))
    lam_L = None
    if L is not None:
        lam_L = 0 if L.is_unit() else (L.colength() if L.is_m_primary() else None)
    cl = _closure_data(R, I, lazy)
    cI = lazy.get(("coeffs", I), lambda: hilbert_coefficients(R, I))
    cJ = lazy.get(("coeffs", J), lambda: hilbert_coefficients(R, J)) if J is not None else None
    hyp = {"jacobian ideal m-primary or unit": lam_L is not None,
           "J minimal reduction": J is not None and cI is not None and cJ is not None
           and cJ.e0 == cI.e0}
    lhs = rhs = None
    if cl is not None and cJ is not None:
        lhs = cl[0].e1 - cJ.e1
    if lam_L is not None and cI is not None:
        rhs = (d + lam_L - 1) * cI.e0
    return BoundReport("briancon-skoda-upper", "bar e1(I) - e1(J) <= (d + lambda(R/L) - 1) e0(I)",
                       hyp, lhs, "<=", rhs,
                       {"bar_e1": cl[0].e1 if cl else None, "e1(J)": cJ.e1 if cJ else None,
                        "lambda(R/L)": lam_L})


def sally_report(R, I, J, lazy: _Lazy) -> BoundReport:
    cl = _closure_data(R, I, lazy)
    cI = lazy.get(("coeffs", I), lambda: hilbert_coefficients(R, I))
    cJ = lazy.get(("coeffs", J), lambda: hilbert_coefficients(R, J)) if J is not None else None
    hyp = {"R regular (polynomial ring)": R.is_polynomial_ring,
           "J parameter ideal of linear type": J is not None and is_parameter_ideal(R, J),
           "J reduction of I": cJ is not None and cI is not None and cJ.e0 == cI.e0}
    rhs_value = None
    if cl is not None and cI is not None and cJ is not None:
        rhs_value = cl[0].e1 - cI.e0 - cJ.e1 + cl[1]
    return BoundReport("sally-rhs", "bar e1(I) - e0(I) - e1(J) + lambda(R/bar I) >= 0",
                       hyp, rhs_value, ">=", 0 if rhs_value is not None else None,
                       {"bar_e1": cl[0].e1 if cl else None, "e0": cI.e0 if cI else None,
                        "e1(J)": cJ.e1 if cJ else None,
                        "lambda(R/bar I)": cl[1] if cl else None})


def bound_suite(R: PresentedRing, I: RingIdeal, J: RingIdeal | None = None,
                buchsbaum: bool = False, domain: bool = False, seed: int = 0,
                memo: dict | None = None) -> list[BoundReport]:
    """Evaluate every inequality on (R, I); J defaults to I if it is a parameter ideal,
    else to a random minimal-reduction candidate."""
    lazy = _Lazy(R, {} if memo is None else memo)
    if J is None:
        if is_parameter_ideal(R, I):
            J = I
        else:
            try:
                J = minimal_reduction_candidate(R, I, seed=seed)
            except GenericityError:
                J = None
    reports = [northcott_report(R, I, lazy)]
    if J is not None:
        reports.append(generalized_cm_report(R, J, lazy, buchsbaum))
        reports.append(d_sequence_report(R, J, lazy))
    reports.append(hdeg_lower_report(R, I, lazy))
    reports.append(comparison_report(R, I, lazy))
    reports += specialization_reports(R, lazy, seed)
    reports += superficial_reports(R, I, lazy, seed)
    reports.append(briancon_skoda_report(R, I, J, lazy))
    reports.append(sally_report(R, I, J, lazy))
    return reports


# ---------------------------------------------------------------------------
# conjectures


@dataclass
class ConjectureVerdict:
    conjecture: int
    instance: str
    evidence: dict
    verdict: str

    def as_dict(self) -> dict:
        return {"conjecture": str(self.conjecture), "instance": self.instance,
                "evidence": {k: str(v) for k, v in self.evidence.items()},
                "verdict": self.verdict}


def conjecture1_check(R: PresentedRing, J: RingIdeal, domain: bool = False,
                      unmixed: bool = False) -> ConjectureVerdict:
    """e1(J) < 0 iff R is not Cohen-Macaulay; applicable to domains or unmixed rings."""
    if not is_parameter_ideal(R, J):
        raise PreconditionError("the e1 sign test concerns parameter ideals")
    c = hilbert_coefficients(R, J)
    cm = is_cm(R)
    evidence = {"e1": c.e1, "sign": (c.e1 > 0) - (c.e1 < 0), "cohen_macaulay": cm,
                "domain": domain, "unmixed": unmixed}
    if not (domain or unmixed):
        verdict = "inapplicable"
    else:
        verdict = "consistent" if (c.e1 < 0) == (not cm) else "inconsistent"
    return ConjectureVerdict(1, repr(R), evidence, verdict)


def conjecture2_check(R: PresentedRing, I: RingIdeal) -> ConjectureVerdict:
    """bar e1(I) >= 0 for the integral closure filtration (monomial case only)."""
    lazy = _Lazy(R, {})
    cl = _closure_data(R, I, lazy)
    if cl is None:
        return ConjectureVerdict(2, repr(R), {"bar_e1": "unavailable"}, "inapplicable")
    e1 = cl[0].e1
    return ConjectureVerdict(2, repr(R), {"bar_e1": e1},
                             "consistent" if e1 >= 0 else "inconsistent")


def conjecture3_check(R: PresentedRing, I: RingIdeal, seed: int = 0) -> ConjectureVerdict:
    """Lower function e0 - hdeg_I against e1 of the I-adic (and closure) filtrations."""
    lazy = _Lazy(R, {})
    c = hilbert_coefficients(R, I)
    hdI = hdeg_rel(R, I, lazy.memo)
    lower = c.e0 - hdI.value
    evidence = {"f_l": lower, "e1(I)": c.e1, "f_u": "unavailable"}
    ok = c.e1 >= lower
    cl = _closure_data(R, I, lazy)
    if cl is not None:
        evidence["bar_e1"] = cl[0].e1
        ok &= cl[0].e1 >= lower
        try:
            J = minimal_reduction_candidate(R, I, seed=seed)
            bs = briancon_skoda_report(R, I, J, lazy)
            if bs.rhs is not None and bs.values.get("e1(J)") is not None:
                upper = bs.values["e1(J)"] + bs.rhs
                evidence["f_u"] = upper
                ok &= cl[0].e1 <= upper and c.e1 <= upper
        except GenericityError:
            pass
    return ConjectureVerdict(3, repr(R), evidence, "consistent" if ok else "inconsistent")


@dataclass
class ReductionExperiment:
    values: list
    reductions: list
    failures: int

    @property
    def agree(self) -> bool:
        return len(set(self.values)) <= 1


def reduction_e1_experiment(R: PresentedRing, I: RingIdeal, trials: int = 10,
                            seed: int = 0) -> ReductionExperiment:
    """e1 of `trials` random minimal-reduction candidates of I."""
    if not I.is_m_primary():
        raise PreconditionError("reductions of a non m-primary ideal")
    rng = random.Random(seed)
    values, reds, failures = [], [], 0
    for _ in range(trials):
        try:
            J = minimal_reduction_candidate(R, I, seed=rng.randrange(2 ** 32), randomize=True)
        except GenericityError:
            failures += 1
            continue
        values.append(hilbert_coefficients(R, J).e1)
        reds.append(J)
    return ReductionExperiment(values, reds, failures)
