"""Built-in example rings with their distinguished ideals, flags and expected values.

Every expected value carries a provenance tag: "LITERATURE" for values stated
in the source text, "DERIVED" for values computed by hand or by an
independent route.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .core import QQ, PrimeField, PolyRing
from .errors import DomainError
from .groebner import ring_map_kernel
from .rings import PresentedRing, RingIdeal


@dataclass(frozen=True)
class Expectation:
    key: str
    value: object
    provenance: str   # "LITERATURE" or "DERIVED"
    note: str = ""


@dataclass
class LabInstance:
    name: str
    ring: PresentedRing
    ideals: dict                      # name -> RingIdeal
    roles: dict                       # name -> "parameter" | "m-primary"
    flags: dict
    expected: list = field(default_factory=list)
    expensive: bool = False

    def ideal(self, name: str) -> RingIdeal:
        return self.ideals[name]

    def verify(self) -> list[dict]:
        """Recompute every expected value with the engine."""
        rows = []
        for exp in self.expected:
            got = evaluate(self, exp.key)
            rows.append({"key": exp.key, "expected": exp.value, "computed": got,
                         "provenance": exp.provenance, "ok": got == exp.value})
        return rows


def evaluate(inst: LabInstance, key: str):
    """Compute a named quantity: 'e1(J)', 'e0(m)', 'hdeg', 'hdeg_I(J)', 'H1', 'dim', ..."""
    from . import degrees, hilbert, homology

    R = inst.ring
    if key == "dim":
        return R.dim
    if key == "depth":
        return homology.depth(R)
    if key == "cm":
        return homology.is_cm(R)
    if key == "generalized_cm":
        return homology.is_generalized_cm(R)
    if key == "hdeg":
        return degrees.hdeg(R).value
    if key == "T":
        return degrees.t_invariant(R)
    if key.startswith("H") and key[1:].isdigit():
        return homology.local_cohomology_length(R, int(key[1:]))
    if key.startswith("hdeg_I(") and key.endswith(")"):
        return degrees.hdeg_rel(R, inst.ideals[key[7:-1]]).value
    if key[0] == "e" and "(" in key and key.endswith(")"):
        idx, name = key[1:key.index("(")], key[key.index("(") + 1:-1]
        return hilbert.hilbert_coefficients(R, inst.ideals[name]).e[int(idx)]
    raise DomainError(f"unknown quantity {key!r}")


# ---------------------------------------------------------------------------
# constructors


def build_idealization_family(n: int, field=None) -> LabInstance:
    """k[x,y,z] extended by the module (x,y) of k[x,y,z]^1, with J = (x, y, z^n)."""
    if n < 1:
        raise DomainError("the family is indexed by n >= 1")
    R = PresentedRing.from_strings(["x", "y", "z", "u", "v"],
                                   ["u^2", "u*v", "v^2", "y*u - x*v"],
                                   field or PrimeField(), name=f"idealization{n}")
    J = R.ideal(["x", "y", f"z^{n}"])
    m = R.maximal_ideal()
    exp = [
        Expectation("e1(J)", -n, "LITERATURE", "e_1(J) = -n"),
        Expectation("e0(J)", 2 * n, "DERIVED", "rank 2 over k[x,y,z] times n"),
        Expectation("hdeg_I(J)", 3 * n, "DERIVED", "2n plus one k[z]-line Ext node"),
        Expectation("dim", 3, "DERIVED"),
        Expectation("depth", 2, "DERIVED"),
        Expectation("generalized_cm", False, "DERIVED", "H^2 has infinite length"),
    ]
    return LabInstance(f"idealization-{n}", R, {"J": J, "m": m},
                       {"J": "parameter", "m": "m-primary"},
                       {"domain": False, "unmixed": True, "buchsbaum": False}, exp)


def build_z_ring(field=None) -> LabInstance:
    """k[x,y,z]/(xz, yz, z^2)."""
    R = PresentedRing.from_strings(["x", "y", "z"], ["x*z", "y*z", "z^2"],
                                   field or PrimeField(), name="zring")
    J = R.ideal(["x", "y"])
    m = R.maximal_ideal()
    exp = [
        Expectation("e1(m)", 0, "LITERATURE", "e_1(R) = e_1(S) = 0"),
        Expectation("H0", 1, "DERIVED"),
        Expectation("H1", 0, "DERIVED"),
        Expectation("hdeg", 2, "DERIVED"),
        Expectation("e1(J)", 0, "DERIVED"),
        Expectation("e2(J)", 1, "DERIVED"),
        Expectation("depth", 0, "DERIVED"),
    ]
    return LabInstance("z-ring", R, {"J": J, "m": m}, {"J": "parameter", "m": "m-primary"},
                       {"domain": False, "unmixed": False, "buchsbaum": False}, exp)


def buchsbaum_ring(field=QQ) -> PresentedRing:
    """Presentation of k[x, y, sx, sy] inside k[x,y,s]/(s^2 + 1) by elimination."""
    target = PresentedRing.from_strings(["x", "y", "s"], ["s^2 + 1"], field)
    x, y, s = target.ambient.gens()
    rels = ring_map_kernel(["a", "b", "c", "d"], target, [x, y, s * x, s * y])
    return PresentedRing(rels[0].ring, rels, name="buchsbaum")


def build_buchsbaum_rc(field=QQ) -> LabInstance:
    R = buchsbaum_ring(field)
    J = R.ideal(["a", "b"])
    m = R.maximal_ideal()
    exp = [
        Expectation("e1(J)", -1, "LITERATURE", "e_1(x,y) = -1"),
        Expectation("e1(m)", 0, "LITERATURE", "e_1(S) = 0 for the m-adic filtration"),
        Expectation("H1", 1, "DERIVED", "forced by the Buchsbaum equality"),
    ]
    return LabInstance("buchsbaum", R, {"J": J, "m": m}, {"J": "parameter", "m": "m-primary"},
                       {"domain": True, "unmixed": True, "buchsbaum": True}, exp)


def rees_cubic_ring(field=QQ) -> PresentedRing:
    """Rees algebra of the maximal homogeneous ideal of k[x,y,z]/(x^3+y^3+z^3)."""
    target = PresentedRing.from_strings(["x", "y", "z", "t"], ["x^3 + y^3 + z^3"], field)
    x, y, z, t = target.ambient.gens()
    rels = ring_map_kernel(["X", "Y", "Z", "T1", "T2", "T3"], target,
                           [x, y, z, x * t, y * t, z * t])
    return PresentedRing(rels[0].ring, rels, name="rees_cubic")


def build_rees_cubic(field=QQ) -> LabInstance:
    R = rees_cubic_ring(field)
    m = R.maximal_ideal()
    exp = [
        Expectation("dim", 3, "DERIVED", "dim A + 1"),
        Expectation("cm", False, "LITERATURE", "reduction number 2, not Cohen-Macaulay"),
    ]
    return LabInstance("rees-cubic", R, {"m": m}, {"m": "m-primary"},
                       {"domain": True, "unmixed": True, "buchsbaum": False, "normal": True},
                       exp, expensive=True)


def build_plane(field=None) -> LabInstance:
    """k[x,y] with I = m^2."""
    R = PresentedRing.from_strings(["x", "y"], [], field or PrimeField(), name="plane")
    I = R.ideal(["x^2", "x*y", "y^2"])
    exp = [
        Expectation("e0(I)", 4, "DERIVED"),
        Expectation("e1(I)", 1, "DERIVED"),
        Expectation("e2(I)", 0, "DERIVED"),
    ]
    return LabInstance("plane", R, {"I": I, "m": R.maximal_ideal()},
                       {"I": "m-primary", "m": "m-primary"},
                       {"domain": True, "unmixed": True, "buchsbaum": True}, exp)


def build_cubic_closure(field=None) -> LabInstance:
    """k[x,y] with the non-normal monomial ideal (x^3, y^3)."""
    R = PresentedRing.from_strings(["x", "y"], [], field or PrimeField(), name="cubic")
    I = R.ideal(["x^3", "y^3"])
    exp = [
        Expectation("e0(I)", 9, "DERIVED"),
        Expectation("e1(I)", 0, "DERIVED"),
    ]
    return LabInstance("cubic-closure", R, {"I": I, "m": R.maximal_ideal()},
                       {"I": "parameter", "m": "m-primary"},
                       {"domain": True, "unmixed": True, "buchsbaum": True}, exp)


INSTANCES: dict[str, Callable[..., LabInstance]] = {
    "idealization-1": lambda: build_idealization_family(1),
    "idealization-2": lambda: build_idealization_family(2),
    "idealization-3": lambda: build_idealization_family(3),
    "idealization-4": lambda: build_idealization_family(4),
    "z-ring": build_z_ring,
    "buchsbaum": build_buchsbaum_rc,
    "plane": build_plane,
    "cubic-closure": build_cubic_closure,
    "rees-cubic": build_rees_cubic,
}

EXPENSIVE = {"rees-cubic"}


def build(name: str) -> LabInstance:
    try:
        return INSTANCES[name]()
    except KeyError:
        raise DomainError(f"unknown instance {name!r}; choose from {', '.join(INSTANCES)}")


def polynomial_ring(variables, field=None) -> PresentedRing:
    return PresentedRing(PolyRing(variables, field or PrimeField()))
