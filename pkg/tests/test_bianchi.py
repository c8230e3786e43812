from fractions import Fraction as F

import pytest

from hetg2.bianchi import (approx_order_report, branches,
                           characteristic_torsion_genform,
                           extract_constraints, get_ring, residual,
                           sasaki_3alpha_impossibility, verify_branch)
from hetg2.scalar import SymbolTable, prem
from hetg2.structures import NotInSpanError

R3 = get_ring("3ad")
T3 = R3.table
AL, DE, AP = T3.sym("alpha"), T3.sym("delta"), T3.sym("alphap")
L1, L2 = T3.sym("lam1"), T3.sym("lam2")
BETA = 2 * (DE - 2 * AL)


class TestResidual:
    def test_rho2_cancels(self):
        res = residual("3ad", L1, L2)
        assert res.genform is not None  # construction implies cancellation

    def test_flux_source_is_characteristic_torsion(self):
        tcg = characteristic_torsion_genform(R3)
        expect = 2 * (DE - 4 * AL) * R3.eta(1, 2, 3)
        for i in (1, 2, 3):
            expect = expect + 2 * AL * R3.eta(i).wedge(R3.Phi(i))
        assert tcg == expect

    def test_case_i_generic_system(self):
        sysm = extract_constraints(residual("3ad", -BETA, L2))
        assert sysm.polynomials[1] == 4 * AL ** 2 \
            - 3 * AP * AL ** 2 * (BETA + L2) ** 2
        assert sysm.polynomials[0] == 4 * AL * BETA \
            - 3 * AP * AL * (BETA + L2) ** 2 * (L2 - 4 * AL)

    def test_exact_solution_system(self):
        sysm = extract_constraints(residual("3ad", -BETA, T3.zero()))
        at0 = [p.subs({"delta": 0}) for p in sysm.polynomials]
        # {4a^2 = 3a^2 b^2 a', 4ab = -12 a^2 b^2 a'} at b = -4a
        assert at0[1] == 4 * AL ** 2 - 48 * AP * AL ** 4
        assert at0[0] == -16 * AL ** 2 + 192 * AP * AL ** 4
        vals = [p.subs({"alpha": 1, "delta": 0, "alphap": F(1, 12)})
                for p in sysm.polynomials]
        assert all(v.is_zero for v in vals)
        bad = [p.subs({"alpha": 1, "delta": 0, "alphap": F(1, 10)})
               for p in sysm.polynomials]
        assert any(not v.is_zero for v in bad)

    def test_su3_eta_omega_coefficients(self):
        rs = get_ring("su3")
        ts = rs.table
        sysm = extract_constraints(
            residual("su3", ts.sym("lam1"), ts.sym("lam2"), rs))
        de, al = ts.sym("delta"), ts.sym("alpha")
        s, c = ts.sym("s"), ts.sym("c")
        by_monomial = dict(zip(["PhiPhi", "etaOm+", "etaOm-"],
                               sysm.polynomials))
        assert by_monomial["etaOm+"] == -c * 4 * de * (6 * al - 4 * de) / 3
        assert by_monomial["etaOm-"] == s * 4 * de * (6 * al - 4 * de) / 3
        # nonzero unless delta (3 alpha - 2 delta) = 0
        assert by_monomial["etaOm+"].subs({"delta": 0}).is_zero
        assert by_monomial["etaOm+"] \
            .subs({"delta": F(3, 2) * ts.sym("alpha")}).is_zero
        assert not by_monomial["etaOm+"].subs({"delta": 1}).is_zero

    def test_zero_residual_gives_satisfiable_system(self):
        res = residual("3ad", -BETA, T3.zero())
        sysm = extract_constraints(res)
        vals = [p.subs({"alpha": 1, "delta": 0, "alphap": F(1, 12)})
                for p in sysm.polynomials]
        assert all(v.is_zero for v in vals)


class TestBranches:
    @pytest.mark.parametrize("branch", branches(), ids=lambda b: b.branch_id)
    def test_branch(self, branch):
        rep = verify_branch(branch)
        assert rep.status == "pass", (branch.branch_id, rep.notes)

    def test_branch_reports_residuals(self):
        neg = [b for b in branches() if not b.expect_zero][0]
        rep = verify_branch(neg)
        assert any(not p.is_zero for p in rep.residuals)

    def test_case_ii_conditional_identity_directly(self):
        # E2 reduced by the lam2 quadratic and the squared compatibility
        e1 = 4 * AL ** 2 + 3 * AL ** 2 * AP * (BETA ** 2 - (BETA + L2) ** 2)
        h1 = 3 * AP * (BETA + L2) ** 2 - 3 * AP * BETA ** 2 - 4
        assert (e1 + AL ** 2 * h1).is_zero


class TestImpossibility:
    def test_report(self):
        rep = sasaki_3alpha_impossibility()
        assert rep.status == "pass"
        assert rep.eliminant == 12 * ((L2 - 2) ** 3 - (L1 - 2) ** 3)
        assert rep.discriminant == -432 * (L1 - 2) ** 2

    def test_numeric_samples(self):
        # a = d = 1: no rational (lam1, lam2, a' > 0) zeroes both constraints
        sysm = extract_constraints(residual("3ad", L1, L2))
        for l1 in (F(0), F(2), F(4), F(-1)):
            for l2 in (F(0), F(1), F(3), F(7, 2)):
                for ap in (F(1, 12), F(1, 3), F(2)):
                    vals = [p.subs({"alpha": 1, "delta": 1, "lam1": l1,
                                    "lam2": l2, "alphap": ap})
                            for p in sysm.polynomials]
                    assert any(not v.is_zero for v in vals)


class TestApproxOrders:
    def test_3ad_scaling(self):
        tt = SymbolTable(("t",), sqrt_d=3)
        t = tt.sym("t")
        rep = approx_order_report(
            "3ad", {"lam": 2 * t ** 5, "delta": t ** 5,
                    "alpha": t ** 5 - (tt.sqrt() / 6) / t}, tt)
        assert rep.leading_order == 8 and rep.status == "pass"
        assert rep.norm_sq_text == "192*t^8"

    def test_su3_scaling(self):
        tt = SymbolTable(("t",), sqrt_d=6)
        t = tt.sym("t")
        rep = approx_order_report(
            "su3", {"lam": (2 * tt.sqrt() / 3) / t, "alpha": t ** 5,
                    "delta": F(3, 2) * t ** 5}, tt)
        assert rep.leading_order == 8 and rep.status == "pass"
        assert rep.norm_sq_text == "216*t^8"

    def test_constant_scaling_fails(self):
        tt = SymbolTable(("t",))
        rep = approx_order_report(
            "3ad", {"lam": tt.rat(1), "delta": tt.rat(1),
                    "alpha": tt.rat(3)}, tt)
        assert rep.leading_order == 0 and rep.status == "fail"


class TestBasisHandling:
    def test_basis_independence(self):
        res = residual("3ad", T3.rat(4), T3.zero())
        s1 = extract_constraints(res)
        alt = [res.basis[0], res.basis[0] + res.basis[1]]
        s2 = extract_constraints(res, basis=alt)
        assert (s2.polynomials[0]
                - (s1.polynomials[0] - s1.polynomials[1])).is_zero
        assert (s2.polynomials[1] - s1.polynomials[1]).is_zero

    def test_leftover_detection(self):
        res = residual("3ad", T3.rat(4), T3.zero())
        with pytest.raises(NotInSpanError):
            extract_constraints(res, basis=[res.basis[0]])


def test_branch_record_payload():
    branch = [b for b in branches() if b.branch_id == "3ad.case-i"][0]
    rec = verify_branch(branch).as_record()
    assert rec["status"] == "pass"
    assert rec["branch_id"] == "3ad.case-i"
    assert rec["residual_normal_form"] == "0; 0"
    assert any("lam2 = 2*delta" == h for h in rec["hypotheses"])
