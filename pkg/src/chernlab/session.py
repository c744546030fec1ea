"""Execution of parsed session scripts and of built-in lab instances."""

from __future__ import annotations

from . import degrees, hilbert, homology
from .core import PolyRing, make_field
from .dsl import SessionScript, parse_filtration
from .errors import ChernlabError, ParseError
from .hilbert import ClosureFiltration, IAdicFiltration
from .lab import LabInstance
from .report import ReportBundle, Result
from .rings import PresentedRing


class _Env:
    def __init__(self, field):
        self.field = field
        self.rings: dict = {}
        self.ideals: dict = {}      # name -> (ring name, RingIdeal)


def _declare_ring(env: _Env, decl):
    amb = PolyRing(decl.variables, env.field, weights=decl.weights)
    rels = [amb.parse(r) for r in decl.relations]
    env.rings[decl.name] = PresentedRing(amb, rels, name=decl.name)


def _declare_ideal(env: _Env, decl):
    R = env.rings[decl.ring]
    env.ideals[decl.name] = (decl.ring, R.ideal(list(decl.generators)))


def _coeff_values(c) -> dict:
    vals = {"d": c.d}
    vals.update({f"e{i}": v for i, v in enumerate(c.e)})
    vals["n0"] = c.n0
    return vals


def _filtration(env, R, token):
    kind, name = parse_filtration(token)
    I = env.ideals[name][1]
    if kind == "closure":
        return hilbert.closure_filtration(R, I)
    return IAdicFiltration(R, I)


def _run_command(env: _Env, cmd, bundle: ReportBundle, seed: int):
    a = cmd.args
    if cmd.name == "closure":
        rname, I = env.ideals[a[0]]
        R = env.rings[rname]
        cl = hilbert.monomial_integral_closure(I)
        filt = hilbert.closure_filtration(R, I)
        c = hilbert.hilbert_coefficients(R, filt)
        gens = [str(R.ambient.monomial(e)) for e in cl.gens]
        bundle.add(rname, repr(R), Result("closure", {"ideal": a[0]},
                                          {"generators": gens, **_coeff_values(c)}))
        return
    R = env.rings[a[0]]
    inst = (a[0], repr(R))
    ideal = (lambda k: env.ideals[a[k]][1])
    if cmd.name == "coeffs":
        I = ideal(1)
        n_max = cmd.option("maxn", hilbert.DEFAULT_NMAX)
        guard = cmd.option("guard", hilbert.DEFAULT_GUARD)
        d = R.dim
        table = hilbert.hs_table(R, I, cmd.option("n", d + guard + 1))
        c = hilbert.extract_coefficients(table, d, guard, n_max)
        bundle.tables[f"{a[0]}_{a[1]}"] = table.to_tsv()
        bundle.add(*inst, Result("coefficients", {"ideal": a[1], "generators": list(map(str, I.gens))},
                                 {**_coeff_values(c), "table": table.values}))
    elif cmd.name == "hdeg":
        if len(a) == 2:
            rep = degrees.hdeg_rel(R, ideal(1))
            kind, inputs = "hdeg_I", {"ideal": a[1]}
        else:
            rep = degrees.hdeg(R)
            kind, inputs = "hdeg", {}
        bundle.add(*inst, Result(kind, inputs, {"value": rep.value, "deg": rep.base,
                                                "tree": rep.as_dict()}))
    elif cmd.name == "koszul":
        J = ideal(1)
        h = homology.koszul_homology_lengths(R, J)
        e0 = hilbert.hilbert_coefficients(R, J).e0
        rep = homology.KoszulReport(h, e0, h[0])
        bundle.add(*inst, Result("koszul", {"ideal": a[1]},
                                 {"h": h, "e0": e0, "correction": rep.correction},
                                 verdict="holds" if rep.serre_holds else "fails"))
    elif cmd.name == "bounds":
        reports = degrees.bound_suite(R, ideal(1), buchsbaum="buchsbaum" in cmd.flags,
                                      domain="domain" in cmd.flags,
                                      seed=cmd.option("seed", seed))
        for rep in reports:
            bundle.add(*inst, Result("bound:" + rep.name, {"ideal": a[1]}, rep.as_dict(),
                                     verdict=rep.verdict))
    elif cmd.name == "conjecture1":
        v = degrees.conjecture1_check(R, ideal(1), domain="domain" in cmd.flags,
                                      unmixed="unmixed" in cmd.flags)
        bundle.add(*inst, Result("conjecture1", {"ideal": a[1]}, v.evidence, verdict=v.verdict))
    elif cmd.name == "reductions":
        exp = degrees.reduction_e1_experiment(R, ideal(1), cmd.option("trials", 10),
                                              cmd.option("seed", seed))
        # disagreement between reductions is data, never a falsification
        bundle.add(*inst, Result("reductions", {"ideal": a[1]},
                                 {"e1": exp.values, "genericity_failures": exp.failures,
                                  "agree": exp.agree},
                                 verdict="agree" if exp.agree else "disagree"))
    elif cmd.name == "compare":
        A, B = _filtration(env, R, a[1]), _filtration(env, R, a[2])
        rep = hilbert.tracking_compare(R, A, B)
        ok = rep["e0_equal"] and rep["e1_monotone"]
        bundle.add(*inst, Result("compare", {"A": a[1], "B": a[2]}, {
            "e0_A": rep["coefficients_A"].e0, "e1_A": rep["coefficients_A"].e1,
            "e0_B": rep["coefficients_B"].e0, "e1_B": rep["coefficients_B"].e1,
            "chain_length_bound": rep["chain_length_bound"]},
            verdict="holds" if ok else "fails"))


def run_session(script: SessionScript, seed: int = 0, field=None) -> ReportBundle:
    """Run every statement in order; errors are recorded and the run continues."""
    fld = make_field(field if field is not None else (script.field or "Fp 32003"))
    bundle = ReportBundle(seed, fld.name)
    env = _Env(fld)
    for st in script.statements:
        kind = type(st).__name__
        try:
            if kind == "RingDecl":
                _declare_ring(env, st)
            elif kind == "IdealDecl":
                _declare_ideal(env, st)
            elif kind == "Command":
                _run_command(env, st, bundle, seed)
        except ChernlabError as exc:
            name = getattr(st, "name", "?")
            target = st.args[0] if kind == "Command" else name
            bundle.add(target, "", Result("error", {"statement": str(st)},
                                          {"error": type(exc).__name__, "message": str(exc)},
                                          verdict="error"))
            bundle.flag(exc.exit_code)
    return bundle


def run_text(text: str, seed: int = 0, field=None) -> ReportBundle:
    from .dsl import parse
    try:
        script = parse(text)
    except ParseError as exc:
        bundle = ReportBundle(seed, make_field(field or "Fp 32003").name)
        bundle.add("script", "", Result("error", {}, {"error": "ParseError",
                                                      "message": str(exc)}, verdict="error"))
        bundle.flag(2)
        return bundle
    return run_session(script, seed, field)


def run_instance(inst: LabInstance, seed: int = 0) -> ReportBundle:
    """Verify every expected value of a lab instance and run its bound suite."""
    R = inst.ring
    bundle = ReportBundle(seed, R.field.name)
    for row in inst.verify():
        verdict = "holds" if row["ok"] else "fails"
        bundle.add(inst.name, repr(R), Result("expected", {"quantity": row["key"]},
                                              {"quantity": row["key"],
                                               "expected": row["expected"],
                                               "computed": row["computed"]},
                                              provenance=row["provenance"], verdict=verdict))
    for name in inst.roles:
        I = inst.ideals[name]
        for rep in degrees.bound_suite(R, I, buchsbaum=inst.flags.get("buchsbaum", False),
                                       domain=inst.flags.get("domain", False), seed=seed):
            bundle.add(inst.name, repr(R), Result("bound:" + rep.name, {"ideal": name},
                                                  rep.as_dict(), verdict=rep.verdict))
    return bundle
