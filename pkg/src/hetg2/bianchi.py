"""Anomaly-cancellation residuals, constraint systems and solution branches.

The residual of the flux identity  dH = (a'/4)(tr F^F - tr R^R)  with H the
characteristic torsion and both gauge connections drawn from the deformation
family is assembled inside the generated rings; the formal tr(R2 ^ R2) tokens
must cancel before coefficients are matched against the independent 4-form
basis.  Branch verification is a polynomial-identity check: bindings are
substituted and the remaining constraints reduced to zero modulo the branch's
defining relations via pseudo-remainders.  No tolerances anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .curvature import (beta_of, curvature_3ad, curvature_su3,
                        instanton_obstruction, wedge_trace)
from .linsolve import InconsistentSystemError, rank, solve_ring_rhs
from .scalar import AlgebraError, Scalar, SymbolTable, prem
from .structures import (CYCLIC, GenForm, NotInSpanError, Ring3ad, RingSU3,
                         characteristic_torsion, make_table, torsion_classes)


class Rho2CancellationError(AlgebraError):
    pass


_RINGS: dict = {}


def get_ring(geometry: str):
    ring = _RINGS.get(geometry)
    if ring is None:
        ring = Ring3ad(make_table("3ad")) if geometry == "3ad" \
            else RingSU3(make_table("su3"))
        _RINGS[geometry] = ring
    return ring


_TC_CACHE: dict = {}


def characteristic_torsion_genform(ring) -> GenForm:
    """H = T^c recovered through the torsion-class machinery, as a GenForm."""
    key = id(ring)
    if key in _TC_CACHE:
        return _TC_CACHE[key]
    if isinstance(ring, Ring3ad):
        phi, psi = ring.phi(), ring.psi()
    else:
        phi, psi = ring.phi_theta(), ring.psi_theta()
    phi_f, psi_f = phi.embed(), psi.embed()
    tc = torsion_classes(phi_f, psi_f, phi.d().embed(), psi.d().embed())
    out = ring.from_form(characteristic_torsion(tc, phi_f, psi_f))
    _TC_CACHE[key] = out
    return out


def basis_4forms(ring) -> list[GenForm]:
    """Independent 4-form basis used for coefficient matching."""
    if isinstance(ring, Ring3ad):
        b1 = ring.zero()
        b2 = ring.zero()
        for i, (j, k) in CYCLIC.items():
            b1 = b1 + ring.Phi(i).wedge(ring.eta(j, k))
            b2 = b2 + ring.Phi(i).wedge(ring.Phi(i))
        return [b1, b2]
    return [ring.Phi().wedge(ring.Phi()),
            ring.eta().wedge(ring.Om("+")),
            ring.eta().wedge(ring.Om("-"))]


@dataclass
class BianchiResidual:
    geometry: str
    ring: object
    genform: GenForm
    basis: list

    @property
    def is_zero(self) -> bool:
        return self.genform.is_zero


def residual(geometry: str, lam1: Scalar, lam2: Scalar,
             ring=None) -> BianchiResidual:
    """dT^c - (a'/4)(tr R^{lam1} ^ R^{lam1} - tr R^{lam2} ^ R^{lam2})."""
    ring = ring or get_ring(geometry)
    table = ring.table
    alphap = table.sym("alphap")
    dtc = characteristic_torsion_genform(ring).d()
    curv = curvature_3ad if geometry == "3ad" else curvature_su3
    tr1 = wedge_trace(curv(ring, lam1))
    tr2 = wedge_trace(curv(ring, lam2))
    diff = tr1 - tr2
    if not diff.rho2.is_zero:
        raise Rho2CancellationError(
            "formal tr(R2^R2) tokens failed to cancel")
    gf = dtc - (alphap / 4) * diff.explicit
    return BianchiResidual(geometry, ring, gf, basis_4forms(ring))


@dataclass
class ConstraintSystem:
    geometry: str
    polynomials: list

    def substituted(self, bindings) -> list[Scalar]:
        return [p.subs(bindings) for p in self.polynomials]

    @property
    def is_satisfied(self) -> bool:
        return all(p.is_zero for p in self.polynomials)


def extract_constraints(res: BianchiResidual,
                        basis: Optional[list] = None) -> ConstraintSystem:
    """One polynomial per independent basis 4-form.

    The basis is verified to be linearly independent in the coframe by exact
    rank computation; a residual outside the basis span raises
    :class:`NotInSpanError` carrying the leftover component.
    """
    ring = res.ring
    table = ring.table
    basis = basis if basis is not None else res.basis
    monos = sorted({m for b in basis for m in b.terms}
                   | set(res.genform.terms),
                   key=lambda m: (ring.mono_degree(m), ring.mono_label(m)))
    matrix = []
    for m in monos:
        matrix.append([b.terms.get(m, table.zero()).as_fraction()
                       for b in basis])
    if rank(matrix) != len(basis):
        raise AlgebraError("coefficient basis is not linearly independent")
    rhs = [res.genform.terms.get(m, table.zero()) for m in monos]
    try:
        sol = solve_ring_rhs(matrix, rhs, table.zero(), lambda x: x.is_zero)
    except InconsistentSystemError as exc:
        raise NotInSpanError("residual is not in the span of the "
                             "declared basis", exc.residual) from exc
    return ConstraintSystem(res.geometry, sol)


@dataclass
class SolutionBranch:
    """One solution family: bindings, defining relations, sign samples.

    ``hypotheses`` are (polynomial, main variable) pairs; a constraint holds
    on the branch when it pseudo-reduces to zero by the hypotheses in order.
    ``samples`` are rational points satisfying bindings, hypotheses and the
    branch's sign conditions (a' > 0 and the stated parameter ranges), used
    for fully numeric confirmation of closed-form root expressions.
    """

    branch_id: str
    geometry: str
    bindings: dict
    hypotheses: list
    samples: list
    description: str
    expect_zero: bool = True
    conditional_pair: Optional[tuple] = None  # (h1 var, h2 poly) for case ii


@dataclass
class BranchReport:
    branch_id: str
    status: str
    residuals: list
    notes: str = ""
    hypotheses: list = field(default_factory=list)

    def as_record(self) -> dict:
        """Per-branch payload: id, hypotheses, residual normal form, status."""
        return {
            "branch_id": self.branch_id,
            "hypotheses": self.hypotheses,
            "residual_normal_form": "; ".join(str(p) for p in self.residuals),
            "status": self.status,
        }


def _reduce_by_hypotheses(p: Scalar, hyps) -> Scalar:
    for h, var in hyps:
        p = prem(p, h, var)
    return p


def verify_branch(branch: SolutionBranch, ring=None) -> BranchReport:
    """Substitute the branch into the constraint system and check vanishing."""
    ring = ring or get_ring(branch.geometry)
    table = ring.table
    lam1 = table.sym("lam1")
    lam2 = table.sym("lam2")
    res = residual(branch.geometry, lam1, lam2, ring)
    system = extract_constraints(res)
    bound = system.substituted(branch.bindings)
    leftovers = []
    for p in bound:
        if branch.conditional_pair is not None and not p.is_zero:
            p = _conditional_identity_reduce(p, branch, table)
        else:
            p = _reduce_by_hypotheses(p, branch.hypotheses)
        leftovers.append(p)
    symbolic_zero = all(p.is_zero for p in leftovers)
    ok = symbolic_zero == branch.expect_zero
    # numeric confirmation on the declared rational sample points
    sample_notes = []
    for sample in branch.samples:
        vals = system.substituted({k: table.rat(v) for k, v in sample.items()})
        if all(v.is_zero for v in vals) != branch.expect_zero:
            ok = False
            sample_notes.append(f"sample {sample} residuals "
                                f"{[str(v) for v in vals]}")
        ap = sample.get("alphap")
        if ap is not None and not ap > 0:
            ok = False
            sample_notes.append(f"sample {sample} violates alphap > 0")
    hyp_text = [f"{k} = {v}" for k, v in branch.bindings.items()]
    hyp_text += [f"{h} = 0" for h, _ in branch.hypotheses]
    if branch.conditional_pair is not None:
        hyp_text.append(f"{branch.conditional_pair[0]} = 0")
    return BranchReport(branch.branch_id, "pass" if ok else "fail",
                        leftovers, "; ".join(sample_notes), hyp_text)


def _conditional_identity_reduce(p: Scalar, branch: SolutionBranch,
                                 table: SymbolTable) -> Scalar:
    """Sign-agnostic reduction for branches with a nested-radical condition.

    The constraint reduces modulo the quadratic lam2-relation to a residue
    linear in lam2, say a lam2 + b.  On the branch lam2 + beta = +-sqrt(D)
    with 3a' D = 3a' beta^2 + 4, so the constraint holds for one sign choice
    iff 3a'(a beta - b)^2 - a^2 (3a' beta^2 + 4) vanishes modulo the squared
    compatibility relation between a', delta and beta.
    """
    (h1, var), = [hp for hp in branch.hypotheses if hp[1] == "lam2"]
    r = prem(p, h1, var)
    cs = r.coeffs_in(var)
    if max(cs, default=0) > 1:
        raise AlgebraError("unexpected degree after quadratic reduction")
    a = cs.get(1, table.zero())
    b = cs.get(0, table.zero())
    alpha, delta = table.sym("alpha"), table.sym("delta")
    alphap = table.sym("alphap")
    beta = 2 * (delta - 2 * alpha)
    n = 3 * alphap * (a * beta - b) ** 2 - a * a * (3 * alphap * beta ** 2 + 4)
    h2, var2 = branch.conditional_pair
    return prem(n, h2, var2)


def branches() -> list[SolutionBranch]:
    """The solution branches of both geometries plus a negative control."""
    t3 = get_ring("3ad").table
    ts = get_ring("su3").table
    a3, d3 = t3.sym("alpha"), t3.sym("delta")
    l1_3, l2_3, ap3 = t3.sym("lam1"), t3.sym("lam2"), t3.sym("alphap")
    beta3 = 2 * (d3 - 2 * a3)
    as_, ds_ = ts.sym("alpha"), ts.sym("delta")
    l1_s, l2_s, aps = ts.sym("lam1"), ts.sym("lam2"), ts.sym("alphap")
    out = []
    # exact solution: degenerate case, both instantons
    out.append(SolutionBranch(
        "3ad.exact", "3ad",
        {"delta": t3.zero(), "lam1": -beta3.subs({"delta": 0}),
         "lam2": t3.zero()},
        [(12 * ap3 * a3 ** 2 - 1, "alphap")],
        [{"alpha": 1, "delta": 0, "lam1": Fraction(4), "lam2": 0,
          "alphap": Fraction(1, 12)}],
        "delta = 0, A = parallel-family instanton, Theta = canonical, "
        "12 a' alpha^2 = 1"))
    # case i: lam2 = 2 delta with 1/a' = 12 (delta - alpha)^2
    out.append(SolutionBranch(
        "3ad.case-i", "3ad",
        {"lam1": -beta3, "lam2": 2 * d3},
        [(12 * ap3 * (d3 - a3) ** 2 - 1, "alphap")],
        [{"alpha": 1, "delta": 3, "lam1": -2, "lam2": 6,
          "alphap": Fraction(1, 48)}],
        "A = parallel-family instanton, lam2 = 2 delta, "
        "12 a' (delta-alpha)^2 = 1"))
    # case ii: lam1 = 0, lam2 from the quadratic, nested-radical condition
    h1 = 3 * ap3 * (beta3 + l2_3) ** 2 - 3 * ap3 * beta3 ** 2 - 4
    h2 = (4 + 3 * ap3 * (beta3 ** 2 - 2 * d3 ** 2 - 2 * d3 * beta3)) ** 2 \
        - 36 * ap3 ** 2 * d3 ** 3 * (d3 + 2 * beta3)
    out.append(SolutionBranch(
        "3ad.case-ii", "3ad",
        {"lam1": t3.zero()},
        [(h1, "lam2")],
        [{"alpha": Fraction(1, 2), "delta": 1, "lam1": 0, "lam2": 2,
          "alphap": Fraction(1, 3)}],
        "A = canonical, 3a'(beta+lam2)^2 = 3a' beta^2 + 4 with the squared "
        "compatibility relation; verified as a conditional identity",
        conditional_pair=(h2, "alphap")))
    # contact case a: delta = 0
    out.append(SolutionBranch(
        "su3.case-a", "su3",
        {"delta": ts.zero()},
        [(3 * aps * (4 * as_ - l2_s) ** 2
          - 3 * aps * (4 * as_ - l1_s) ** 2 + 8, "lam2")],
        [{"alpha": 1, "delta": 0, "lam1": 0, "lam2": 2,
          "alphap": Fraction(2, 9)},
         {"alpha": 1, "delta": 0, "lam1": 0, "lam2": 6,
          "alphap": Fraction(2, 9)}],
        "delta = 0, 3a'(4a - lam2)^2 = 3a'(4a - lam1)^2 - 8"))
    # contact case b: delta = 3 alpha / 2
    out.append(SolutionBranch(
        "su3.case-b", "su3",
        {"delta": Fraction(3, 2) * as_},
        [(3 * aps * l2_s ** 2 - 3 * aps * l1_s ** 2 - 8, "lam2")],
        [{"alpha": 1, "delta": Fraction(3, 2), "lam1": 1, "lam2": 3,
          "alphap": Fraction(1, 3)}],
        "delta = 3a/2, 3a' lam2^2 = 3a' lam1^2 + 8"))
    # deliberately wrong branch: lam2 = 3 delta instead of 2 delta
    out.append(SolutionBranch(
        "3ad.negative-control", "3ad",
        {"lam1": -beta3, "lam2": 3 * d3},
        [(12 * ap3 * (d3 - a3) ** 2 - 1, "alphap")],
        [{"alpha": 1, "delta": 3, "lam1": -2, "lam2": 9,
          "alphap": Fraction(1, 48)}],
        "wrong slope lam2 = 3 delta; residual must be nonzero",
        expect_zero=False))
    return out


@dataclass
class ImpossibilityReport:
    status: str
    eliminant: Scalar
    quadratic_factor: Scalar
    discriminant: Scalar
    notes: str


def sasaki_3alpha_impossibility() -> ImpossibilityReport:
    """No (lam1, lam2, a' > 0) solves the system when alpha = delta.

    By the fibre/base rescaling invariance the parameters are homogeneous, so
    alpha = delta = 1 covers the whole ray.  Eliminating a' from the two
    constraints leaves 12((lam2-2)^3 - (lam1-2)^3); after removing the factor
    lam2 - lam1 (which must be nonzero since a' is finite) the remaining
    quadratic has discriminant -432 (lam1 - 2)^2 < 0 away from lam1 = 2, and
    the boundary cases reduce the first constraint to the nonzero constant 4.
    """
    ring = get_ring("3ad")
    table = ring.table
    l1, l2 = table.sym("lam1"), table.sym("lam2")
    res = residual("3ad", l1, l2, ring)
    system = extract_constraints(res)
    sub = {"delta": table.sym("alpha")}
    e_b2, e_b1 = None, None
    # order: [B1 coefficient, B2 coefficient] as returned by the basis
    e_b1, e_b2 = (p.subs(sub).subs({"alpha": 1}) for p in system.polynomials)
    elim = prem(e_b1, e_b2, "alphap")
    expected = 12 * ((l2 - 2) ** 3 - (l1 - 2) ** 3)
    if not (elim - expected).is_zero:
        return ImpossibilityReport("fail", elim, table.zero(), table.zero(),
                                   "unexpected eliminant")
    quad = elim.div_exact(l2 - l1, "lam2")
    cs = quad.coeffs_in("lam2")
    disc = cs[1] * cs[1] - 4 * cs[2] * cs[0]
    disc_ok = disc == -432 * (l1 - 2) ** 2
    # boundary: lam2 = lam1 makes the first constraint the constant 4
    boundary = e_b2.subs({"lam2": table.sym("lam1")})
    boundary_ok = boundary == table.rat(4)
    status = "pass" if (disc_ok and boundary_ok) else "fail"
    return ImpossibilityReport(
        status, elim, quad, disc,
        "eliminant 12((lam2-2)^3-(lam1-2)^3); quadratic factor has "
        "discriminant -432(lam1-2)^2; lam2 = lam1 forces 4 = 0")


@dataclass
class ApproxOrderReport:
    geometry: str
    leading_order: Optional[int]
    required_order: int
    status: str
    norm_sq_text: str


def approx_order_report(geometry: str, scaling: dict,
                        t_table: SymbolTable) -> ApproxOrderReport:
    """Leading t-order of the squared obstruction norm under a scaling.

    ``scaling`` binds every parameter appearing in the obstruction norm to a
    Laurent polynomial in t over ``t_table`` (with a' = t^2 among them); the
    approximate-instanton condition demands order >= 8, i.e. the norm itself
    is O(a'^2).
    """
    ring = get_ring(geometry)
    table = ring.table
    lam = table.sym("lam")
    curv = curvature_3ad if geometry == "3ad" else curvature_su3
    psi = ring.psi() if geometry == "3ad" else ring.psi_theta()
    ob = instanton_obstruction(curv(ring, lam), psi)
    norm_sq = ob.norm_sq.subs(scaling, table=t_table)
    order = norm_sq.laurent_order("t")
    ok = order is not None and order >= 8
    return ApproxOrderReport(geometry, order, 8, "pass" if ok else "fail",
                             str(norm_sq))
