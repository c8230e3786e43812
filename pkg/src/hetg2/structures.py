"""Adapted-frame structure forms and their finitely presented differential rings.

Two geometries are modelled on a fixed orthonormal 7-coframe:

* the 3-contact case, generated by eta_1..eta_3 (degree 1) and the horizontal
  hermitian forms Phi_1..Phi_3 (degree 2) with d eta_i = 2a Phi_i - 2d eta_jk,
* the contact case, generated by eta (degree 1), Phi (degree 2) and the real
  and imaginary parts Om+ / Om- of the complex volume form (degree 3) with
  d eta = 2a Phi, d Om+ = -4d eta Om-, d Om- = 4d eta Om+.

Exterior derivatives are Leibniz extensions of the generator table; the rule
d Phi_i = 2d (Phi_j eta_k - eta_j Phi_k) is forced by d^2 eta_i = 0.  Both
rings embed into the coframe, and construction verifies d^2 = 0 together with
every wedge relation under that embedding.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional, Union

from .exterior import Coframe, Form, basis_multi_indices, form_to_vector
from .linsolve import InconsistentSystemError, nullspace, solve_ring_rhs
from .scalar import AlgebraError, Scalar, SymbolTable

CYCLIC = {1: (2, 3), 2: (3, 1), 3: (1, 2)}

SYMBOLS_3AD = ("alpha", "delta", "lam", "lam1", "lam2", "alphap")
SYMBOLS_SU3 = SYMBOLS_3AD + ("s", "c")


class NotInSpanError(AlgebraError):
    def __init__(self, message, leftover=None):
        super().__init__(message)
        self.leftover = leftover


def make_table(geometry: str, sqrt_d=None) -> SymbolTable:
    """Master symbol table for one geometry ('3ad' or 'su3')."""
    if geometry == "3ad":
        return SymbolTable(SYMBOLS_3AD, sqrt_d=sqrt_d)
    if geometry == "su3":
        t = SymbolTable(SYMBOLS_SU3, sqrt_d=sqrt_d)
        t.add_relation(t.sym("s") ** 2 + t.sym("c") ** 2 - 1)
        return t
    raise AlgebraError(f"unknown geometry: {geometry}")


def sp1_frame_forms(cf: Coframe) -> dict:
    """Adapted-frame forms of the 3-contact structure (n = 1)."""
    eta = {i: cf.e(i) for i in (1, 2, 3)}
    phih = {
        1: -(cf.e(4, 5) + cf.e(6, 7)),
        2: -(cf.e(4, 6) - cf.e(5, 7)),
        3: -(cf.e(4, 7) + cf.e(5, 6)),
    }
    phi_full = {i: -(eta[j] ^ eta[k]) + phih[i]
                for i, (j, k) in CYCLIC.items()}
    return {"eta": eta, "PhiH": phih, "Phi": phi_full}


def su3_frame_forms(cf: Coframe) -> dict:
    """Adapted-frame forms of the SU(3)-structure (m = 3)."""
    eta = cf.e(1)
    phi2 = -(cf.e(2, 3) + cf.e(4, 5) + cf.e(6, 7))
    om_p = cf.form({(3, 5, 7): 1, (3, 4, 6): -1, (2, 5, 6): -1, (2, 4, 7): -1})
    om_m = cf.form({(3, 5, 6): 1, (3, 4, 7): 1, (2, 5, 7): 1, (2, 4, 6): -1})
    return {"eta": eta, "Phi": phi2, "Om+": om_p, "Om-": om_m}


class GenForm:
    """Element of a generated graded ring, in normal form."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms: Mapping[tuple, Scalar]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if not c.is_zero}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> Optional[int]:
        degs = {self.ring.mono_degree(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError("mixed-degree generated form")
        return degs.pop()

    def _coerce_scalar(self, c) -> Scalar:
        if isinstance(c, Scalar):
            return c
        return self.ring.table.rat(c)

    def __add__(self, other: "GenForm") -> "GenForm":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, self.ring.table.zero()) + c
            if s.is_zero:
                out.pop(m, None)
            else:
                out[m] = s
        return GenForm(self.ring, out)

    def __neg__(self) -> "GenForm":
        return GenForm(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "GenForm") -> "GenForm":
        return self + (-other)

    def __mul__(self, c) -> "GenForm":
        c = self._coerce_scalar(c)
        return GenForm(self.ring, {m: v * c for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c) -> "GenForm":
        if isinstance(c, Scalar):
            return self * c.inverse()
        return GenForm(self.ring,
                       {m: v / Fraction(c) for m, v in self.terms.items()})

    def wedge(self, other: "GenForm") -> "GenForm":
        out: dict[tuple, Scalar] = {}
        table = self.ring.table
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                for q, m in self.ring.mono_mul(m1, m2):
                    c = c1 * c2 * q
                    s = out.get(m, table.zero()) + c
                    if s.is_zero:
                        out.pop(m, None)
                    else:
                        out[m] = s
        return GenForm(self.ring, out)

    __xor__ = wedge

    def d(self) -> "GenForm":
        out = self.ring.zero()
        for m, c in self.terms.items():
            out = out + c * self.ring.mono_d(m)
        return out

    def embed(self) -> Form:
        out = self.ring.coframe.zero()
        for m, c in self.terms.items():
            out = out + c * self.ring.mono_embed(m)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenForm):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.ring), frozenset(self.terms)))

    def text(self) -> str:
        if self.is_zero:
            return "0"
        keys = sorted(self.terms, key=lambda m: (self.ring.mono_degree(m),
                                                 self.ring.mono_label(m)))
        return "; ".join(f"{self.terms[m]} : {self.ring.mono_label(m)}"
                         for m in keys)

    __str__ = text
    __repr__ = text


class _BaseRing:
    """Shared machinery: embedding cache, from_form, star, setup checks."""

    def __init__(self, table: SymbolTable):
        self.table = table
        self.coframe = Coframe(table, 7)
        self._embed_cache: dict[tuple, Form] = {}
        self._setup()
        self._check_construction()

    def zero(self) -> GenForm:
        return GenForm(self, {})

    def one(self) -> GenForm:
        return GenForm(self, {self.unit_mono(): self.table.one()})

    def genform(self, terms: Mapping[tuple, Union[Scalar, int, Fraction]]) -> GenForm:
        fixed = {}
        for m, c in terms.items():
            if not isinstance(c, Scalar):
                c = self.table.rat(c)
            fixed[m] = c
        return GenForm(self, fixed)

    def mono_embed(self, mono: tuple) -> Form:
        f = self._embed_cache.get(mono)
        if f is None:
            f = self._embed(mono)
            self._embed_cache[mono] = f
        return f

    def from_form(self, form: Form) -> GenForm:
        """Express a coframe form in ring generators (error if impossible)."""
        out = self.zero()
        degs = sorted({len(k) for k in form.terms})
        for k in degs:
            part = form.homogeneous_part(k)
            monos = self.monomials(k)
            if not monos:
                raise NotInSpanError(f"no degree-{k} monomials", part)
            basis = basis_multi_indices(7, k)
            matrix = []
            embeds = [self.mono_embed(m) for m in monos]
            for idx in basis:
                matrix.append([e.terms.get(idx, self.table.zero()).as_fraction()
                               for e in embeds])
            rhs = form_to_vector(part, basis)
            try:
                sol = solve_ring_rhs(matrix, rhs, self.table.zero(),
                                     lambda x: x.is_zero)
            except InconsistentSystemError as exc:
                raise NotInSpanError("form is not in the ring's span",
                                     exc.residual) from exc
            for m, c in zip(monos, sol):
                if not c.is_zero:
                    out = out + GenForm(self, {m: c})
        return out

    def star(self, gf: GenForm) -> GenForm:
        """Hodge star computed through the coframe embedding."""
        return self.from_form(gf.embed().star())

    def _check_construction(self):
        for g in self.generators():
            dd = g.d().d()
            if not dd.is_zero:
                raise AlgebraError(f"d^2 != 0 on generator: {dd}")
        for lhs, rhs in self.wedge_relation_checks():
            if not (lhs - rhs).is_zero:
                raise AlgebraError("wedge relation fails under embedding")


class Ring3ad(_BaseRing):
    """Generated ring of the 3-contact geometry.

    Monomials are pairs (etas, phis): etas a strictly increasing subset of
    (1,2,3); phis one of (), (i,), (1,1).  The square Phi_i^2 is canonicalised
    to (1,1) since all three squares equal twice the horizontal volume.
    """

    def _setup(self):
        self.frame = sp1_frame_forms(self.coframe)
        self.alpha = self.table.sym("alpha")
        self.delta = self.table.sym("delta")

    def unit_mono(self):
        return ((), ())

    def eta(self, *idx: int) -> GenForm:
        from .exterior import _sort_index
        key, sign = _sort_index(tuple(idx))
        if key is None:
            return self.zero()
        return self.genform({(key, ()): sign})

    def Phi(self, i: int) -> GenForm:
        return self.genform({((), (i,)): 1})

    def generators(self):
        return [self.eta(i) for i in (1, 2, 3)] + [self.Phi(i) for i in (1, 2, 3)]

    def mono_degree(self, m) -> int:
        etas, phis = m
        return len(etas) + 2 * len(phis)

    def mono_label(self, m) -> str:
        etas, phis = m
        bits = []
        if etas:
            bits.append("eta" + "".join(map(str, etas)))
        for i in phis:
            bits.append(f"Phi{i}")
        return "^".join(bits) if bits else "1"

    def monomials(self, k: int) -> list[tuple]:
        from itertools import combinations
        out = []
        for ne in range(0, 4):
            for etas in combinations((1, 2, 3), ne):
                for phis in ((), (1,), (2,), (3,), (1, 1)):
                    if len(etas) + 2 * len(phis) == k:
                        out.append((etas, phis))
        return out

    def mono_mul(self, m1, m2):
        from .exterior import _merge
        e1, p1 = m1
        e2, p2 = m2
        etas, sign = _merge(e1, e2)
        if etas is None:
            return []
        if not p1:
            phis = p2
        elif not p2:
            phis = p1
        elif len(p1) == 1 and len(p2) == 1:
            if p1[0] != p2[0]:
                return []  # Phi_i ^ Phi_j = 0 for i != j
            phis = (1, 1)
        else:
            return []  # horizontal degree would exceed 4
        return [(Fraction(sign), (etas, phis))]

    def d_eta(self, i: int) -> GenForm:
        j, k = CYCLIC[i]
        return 2 * self.alpha * self.Phi(i) - 2 * self.delta * self.eta(j, k)

    def d_Phi(self, i: int) -> GenForm:
        j, k = CYCLIC[i]
        return 2 * self.delta * (self.Phi(j).wedge(self.eta(k))
                                 - self.eta(j).wedge(self.Phi(k)))

    def mono_d(self, m) -> GenForm:
        etas, phis = m
        out = self.zero()
        factors = [("eta", i) for i in etas] + [("Phi", i) for i in phis]
        for pos, (kind, i) in enumerate(factors):
            parity = sum(1 for k2, _ in factors[:pos] if k2 == "eta") % 2
            dfac = self.d_eta(i) if kind == "eta" else self.d_Phi(i)
            term = self._mono_from(factors[:pos]).wedge(dfac) \
                .wedge(self._mono_from(factors[pos + 1:]))
            out = out + (term if parity == 0 else -term)
        return out

    def _mono_from(self, factors) -> GenForm:
        out = self.one()
        for kind, i in factors:
            out = out.wedge(self.eta(i) if kind == "eta" else self.Phi(i))
        return out

    def _embed(self, m) -> Form:
        etas, phis = m
        out = self.coframe.one()
        for i in etas:
            out = out ^ self.frame["eta"][i]
        for i in phis:
            out = out ^ self.frame["PhiH"][i]
        return out

    def wedge_relation_checks(self):
        f = self.frame["PhiH"]
        cf = self.coframe
        checks = []
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                if i < j:
                    checks.append((f[i] ^ f[j], cf.zero()))
            checks.append((f[i] ^ f[i], f[1] ^ f[1]))
            checks.append(((f[1] ^ f[1]) ^ f[i], cf.zero()))
        return checks

    # distinguished forms -------------------------------------------------
    def phi(self) -> GenForm:
        out = self.eta(1, 2, 3)
        for i in (1, 2, 3):
            out = out + self.eta(i).wedge(self.Phi(i))
        return out

    def psi(self) -> GenForm:
        out = self.zero()
        for i, (j, k) in CYCLIC.items():
            out = out + self.Phi(i).wedge(self.eta(j, k))
        for i in (1, 2, 3):
            out = out + Fraction(1, 6) * self.Phi(i).wedge(self.Phi(i))
        return out

    def aux_phi(self, i: int) -> GenForm:
        """Auxiliary 3-form eta123 + 2 eta_i Phi_i - sum eta_l Phi_l."""
        out = self.eta(1, 2, 3) + 2 * self.eta(i).wedge(self.Phi(i))
        for ell in (1, 2, 3):
            out = out - self.eta(ell).wedge(self.Phi(ell))
        return out


class RingSU3(_BaseRing):
    """Generated ring of the contact SU(3) geometry.

    Monomials are triples (e, p, w): e in {0,1} for eta, p in {0..3} for the
    Phi power, w in {'', '+', '-'} for a single Om factor.  Relations:
    eta^2 = 0, Phi^4 = 0, Phi^Om = 0, Om+^Om+ = Om-^Om- = 0 and
    Om+ ^ Om- = (2/3) Phi^3.
    """

    OM_PAIR = Fraction(2, 3)

    def _setup(self):
        self.frame = su3_frame_forms(self.coframe)
        self.alpha = self.table.sym("alpha")
        self.delta = self.table.sym("delta")

    def unit_mono(self):
        return (0, 0, "")

    def eta(self) -> GenForm:
        return self.genform({(1, 0, ""): 1})

    def Phi(self) -> GenForm:
        return self.genform({(0, 1, ""): 1})

    def Om(self, sign: str) -> GenForm:
        return self.genform({(0, 0, sign): 1})

    def generators(self):
        return [self.eta(), self.Phi(), self.Om("+"), self.Om("-")]

    def mono_degree(self, m) -> int:
        e, p, w = m
        return e + 2 * p + (3 if w else 0)

    def mono_label(self, m) -> str:
        e, p, w = m
        bits = []
        if e:
            bits.append("eta")
        if p:
            bits.append("Phi" if p == 1 else f"Phi^{p}")
        if w:
            bits.append("Om" + w)
        return "^".join(bits) if bits else "1"

    def monomials(self, k: int) -> list[tuple]:
        out = []
        for e in (0, 1):
            for p in range(0, 4):
                for w in ("", "+", "-"):
                    if p and w:
                        continue
                    if e + 2 * p + (3 if w else 0) == k:
                        out.append((e, p, w))
        return out

    def mono_mul(self, m1, m2):
        e1, p1, w1 = m1
        e2, p2, w2 = m2
        if e1 and e2:
            return []
        sign = 1
        if e2 and w1:
            sign = -sign  # eta from the right crosses Om (odd x odd)
        coeff = Fraction(sign)
        p = p1 + p2
        if w1 and w2:
            if w1 == w2:
                return []
            coeff *= self.OM_PAIR if (w1, w2) == ("+", "-") else -self.OM_PAIR
            p += 3
            w = ""
        else:
            w = w1 or w2
        if p > 3 or (p and w):
            return []
        return [(coeff, (e1 + e2, p, w))]

    def mono_d(self, m) -> GenForm:
        e, p, w = m
        out = self.zero()
        if e:
            rest = self.genform({(0, p, w): 1})
            out = out + 2 * self.alpha * self.Phi().wedge(rest)
        if w:
            other = "-" if w == "+" else "+"
            fac = -4 * self.delta if w == "+" else 4 * self.delta
            dom = fac * self.eta().wedge(self.Om(other))
            prefix = self.genform({(e, p, ""): 1})
            term = prefix.wedge(dom)
            out = out + (term if e % 2 == 0 else -term)
        return out

    def _embed(self, m) -> Form:
        e, p, w = m
        out = self.coframe.one()
        if e:
            out = out ^ self.frame["eta"]
        for _ in range(p):
            out = out ^ self.frame["Phi"]
        if w:
            out = out ^ self.frame["Om" + w]
        return out

    def wedge_relation_checks(self):
        f = self.frame
        cf = self.coframe
        phi3 = f["Phi"] ^ f["Phi"] ^ f["Phi"]
        return [
            (f["Phi"] ^ f["Om+"], cf.zero()),
            (f["Phi"] ^ f["Om-"], cf.zero()),
            (f["Om+"] ^ f["Om+"], cf.zero()),
            (f["Om-"] ^ f["Om-"], cf.zero()),
            (f["Om+"] ^ f["Om-"], self.OM_PAIR * phi3),
            (f["Phi"] ^ phi3, cf.zero()),
        ]

    # distinguished forms -------------------------------------------------
    def phi_theta(self) -> GenForm:
        s, c = self.table.sym("s"), self.table.sym("c")
        return -self.eta().wedge(self.Phi()) + s * self.Om("+") + c * self.Om("-")

    def psi_theta(self) -> GenForm:
        s, c = self.table.sym("s"), self.table.sym("c")
        half_pp = Fraction(1, 2) * self.Phi().wedge(self.Phi())
        return half_pp + s * self.eta().wedge(self.Om("-")) \
            - c * self.eta().wedge(self.Om("+"))


class TorsionClasses:
    """The four independent components of d(phi) and d(psi)."""

    def __init__(self, tau0: Scalar, tau1: Form, tau2: Form, tau3: Form):
        self.tau0 = tau0
        self.tau1 = tau1
        self.tau2 = tau2
        self.tau3 = tau3

    def is_coclosed(self) -> bool:
        return self.tau1.is_zero and self.tau2.is_zero


class ExtractionError(AlgebraError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


def gram_matrix(phi: Form) -> list[list[Scalar]]:
    """Metric induced by a 3-form via (X -| phi)^(Y -| phi)^phi = 6 g(X,Y) vol."""
    cf = phi.coframe
    table = cf.table
    vol_idx = cf.indices
    out = []
    for x in cf.indices:
        row = []
        ix = phi.contract(x)
        for y in cf.indices:
            iy = phi.contract(y)
            w = ix ^ iy ^ phi
            row.append(w.terms.get(vol_idx, table.zero()) / 6)
        out.append(row)
    return out


def is_g2_form(phi: Form, psi: Form) -> bool:
    """Pointwise check: phi^psi = 7 vol and the induced metric is the identity."""
    cf = phi.coframe
    if (phi ^ psi) != 7 * cf.vol():
        return False
    g = gram_matrix(phi)
    one, zero = cf.table.one(), cf.table.zero()
    for i in range(7):
        for j in range(7):
            if g[i][j] != (one if i == j else zero):
                return False
    return True


def _extraction_matrix(phi: Form, psi: Form):
    """Rational matrix of the torsion-class system for numeric phi, psi.

    Unknown layout: [tau0 | tau1 (7) | tau2 (21) | tau3 (35)]; equation rows:
    Lambda^4 (35), Lambda^5 (21), tau2^psi (7), tau3^phi (7), tau3^psi (1).
    """
    cf = phi.coframe
    table = cf.table
    b2 = basis_multi_indices(7, 2)
    b3 = basis_multi_indices(7, 3)
    b4 = basis_multi_indices(7, 4)
    b5 = basis_multi_indices(7, 5)
    b6 = basis_multi_indices(7, 6)
    cols: list[list[Fraction]] = []

    def col_from(pieces):
        vec = []
        for f, basis in pieces:
            vec.extend(x.as_fraction() for x in form_to_vector(f, basis))
        return vec

    z4, z5, z6, z7 = (cf.zero(),) * 4
    # tau0 column
    cols.append(col_from([(psi, b4), (z5, b5), (z6, b6), (z6, b6), (z7, [cf.indices])]))
    # tau1 columns
    for j in cf.indices:
        ej = cf.e(j)
        cols.append(col_from([(3 * (ej ^ phi), b4), (4 * (ej ^ psi), b5),
                              (z6, b6), (z6, b6), (z7, [cf.indices])]))
    # tau2 columns
    for idx in b2:
        b = cf.e(*idx)
        cols.append(col_from([(z4, b4), (b.star(), b5), (b ^ psi, b6),
                              (z6, b6), (z7, [cf.indices])]))
    # tau3 columns
    for idx in b3:
        g = cf.e(*idx)
        cols.append(col_from([(g.star(), b4), (z5, b5), (z6, b6),
                              (g ^ phi, b6), (g ^ psi, [cf.indices])]))
    nrows = len(cols[0])
    matrix = [[cols[c][r] for c in range(len(cols))] for r in range(nrows)]
    return matrix, (b4, b5)


def _extract_at(phi, psi, dphi, dpsi):
    cf = phi.coframe
    table = cf.table
    matrix, (b4, b5) = _extraction_matrix(phi, psi)
    rhs = form_to_vector(dphi, b4) + form_to_vector(dpsi, b5)
    rhs += [table.zero()] * (7 + 7 + 1)
    try:
        sol = solve_ring_rhs(matrix, rhs, table.zero(), lambda x: x.is_zero)
    except InconsistentSystemError as exc:
        raise ExtractionError("torsion-class system is inconsistent",
                              exc.residual) from exc
    return sol


def _classes_from_vector(cf: Coframe, sol) -> TorsionClasses:
    b2 = basis_multi_indices(7, 2)
    b3 = basis_multi_indices(7, 3)
    tau0 = sol[0]
    tau1 = cf.form({(j,): sol[1 + j - 1] for j in cf.indices})
    tau2 = cf.form({idx: sol[8 + i] for i, idx in enumerate(b2)})
    tau3 = cf.form({idx: sol[8 + 21 + i] for i, idx in enumerate(b3)})
    return TorsionClasses(tau0, tau1, tau2, tau3)


def decomposition_residuals(phi, psi, dphi, dpsi, tc: TorsionClasses):
    """The two defining residuals; both must vanish exactly."""
    r1 = dphi - tc.tau0 * psi - 3 * (tc.tau1 ^ phi) - tc.tau3.star()
    r2 = dpsi - 4 * (tc.tau1 ^ psi) - tc.tau2.star()
    return r1, r2


def torsion_classes(phi: Form, psi: Form, dphi: Form, dpsi: Form) -> TorsionClasses:
    """Exact extraction of (tau0, tau1, tau2, tau3) from d(phi), d(psi).

    Inputs with coefficients polynomial in the circle parameters (s, c) are
    handled by solving at rational circle points, fitting an affine ansatz in
    (s, c) and verifying the result symbolically modulo s^2 + c^2 = 1.
    """
    cf = phi.coframe
    table = cf.table
    if not is_g2_form(phi, psi):
        raise ExtractionError("input 3-form is not pointwise G2 "
                              "(phi^psi != 7 vol or metric != identity)")
    sc_used = set()
    for f in (phi, psi, dphi, dpsi):
        for c in f.terms.values():
            sc_used |= (c.support() & {"s", "c"})
    if not sc_used:
        sol = _extract_at(phi, psi, dphi, dpsi)
        tc = _classes_from_vector(cf, sol)
    else:
        pts = [(Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)),
               (Fraction(3, 5), Fraction(4, 5))]
        sols = []
        for sv, cv in pts:
            sub = {"s": table.rat(sv), "c": table.rat(cv)}
            fs = [Form(cf, {k: v.subs(sub) for k, v in f.terms.items()})
                  for f in (phi, psi, dphi, dpsi)]
            sols.append(_extract_at(*fs))
        # fit x = x0 + s*xs + c*xc through the three samples
        vand = [[Fraction(1), sv, cv] for sv, cv in pts]
        n = len(sols[0])
        s_sym, c_sym = table.sym("s"), table.sym("c")
        sol = []
        for i in range(n):
            comps = solve_ring_rhs(vand, [sols[p][i] for p in range(3)],
                                   table.zero(), lambda x: x.is_zero)
            sol.append(comps[0] + s_sym * comps[1] + c_sym * comps[2])
        tc = _classes_from_vector(cf, sol)
    r1, r2 = decomposition_residuals(phi, psi, dphi, dpsi, tc)
    if not (r1.is_zero and r2.is_zero):
        raise ExtractionError("torsion classes do not reproduce inputs",
                              (r1, r2))
    return tc


def characteristic_torsion(tc: TorsionClasses, phi: Form, psi: Form) -> Form:
    """Torsion of the characteristic connection: (1/6) tau0 phi - tau1 -| psi - tau3."""
    return (tc.tau0 / 6) * phi - psi.contract(tc.tau1) - tc.tau3


def h_homothety(alpha: Scalar, delta: Scalar, a, c):
    """Parameter map of the fibre/base rescaling: (c a/alpha ... ) -> (c*alpha/a, delta/c)."""
    table = alpha.table
    if not isinstance(a, Scalar):
        a = table.rat(a)
    if not isinstance(c, Scalar):
        c = table.rat(c)
    if a.is_zero or c.is_zero:
        raise AlgebraError("deformation parameters must be invertible")
    return (c * alpha / a, delta / c)


def lambda214_double_characterization(phi: Form, psi: Form):
    """Bases of {b : b^psi = 0} and {b : b -| phi = 0}; both 14-dimensional."""
    from .exterior import contract_biform
    cf = phi.coframe
    b2 = basis_multi_indices(7, 2)
    b6 = basis_multi_indices(7, 6)
    b1 = basis_multi_indices(7, 1)
    rows_w, rows_c = [], []
    for target, rows, mapper in (
        (b6, rows_w, lambda b: b ^ psi),
        (b1, rows_c, lambda b: contract_biform(b, phi)),
    ):
        cols = [mapper(cf.e(*idx)) for idx in b2]
        for tid in target:
            rows.append([col.terms.get(tid, cf.table.zero()).as_fraction()
                         for col in cols])
    return nullspace(rows_w), nullspace(rows_c)


def endomorphism_from_form(phi_form: Form) -> dict:
    """(1,1)-tensor phi(e_b) = sum_a c_ab e_a from Phi(X, Y) = g(X, phi Y).

    Returned as a dict b -> {a: coefficient} over frame indices; only
    rational-coefficient forms are supported.
    """
    out: dict[int, dict] = {}
    for (a, b), c in phi_form.terms.items():
        v = c.as_fraction()
        out.setdefault(b, {})[a] = out.setdefault(b, {}).get(a, 0) + v
        out.setdefault(a, {})[b] = out.setdefault(a, {}).get(b, 0) - v
    return out


def compose_endomorphisms(f: dict, g: dict) -> dict:
    out: dict[int, dict] = {}
    for b, col in g.items():
        acc: dict[int, Fraction] = {}
        for mid, cg in col.items():
            for a, cf_ in f.get(mid, {}).items():
                acc[a] = acc.get(a, 0) + cf_ * cg
        out[b] = {a: v for a, v in acc.items() if v}
    return {b: col for b, col in out.items() if col}


def endomorphism_trace(f: dict, indices) -> Fraction:
    return sum(Fraction(f.get(i, {}).get(i, 0)) for i in indices)


def registry(table3: Optional[SymbolTable] = None,
             table_s: Optional[SymbolTable] = None) -> dict:
    """Named forms addressable from the command line."""
    r3 = Ring3ad(table3 or make_table("3ad"))
    rs = RingSU3(table_s or make_table("su3"))
    reg: dict[str, object] = {
        "phi.canonical.3ad": r3.phi(),
        "psi.canonical.3ad": r3.psi(),
        "dphi.canonical.3ad": r3.phi().d(),
        "dpsi.canonical.3ad": r3.psi().d(),
        "phi.theta.su3": rs.phi_theta(),
        "psi.theta.su3": rs.psi_theta(),
        "dphi.theta.su3": rs.phi_theta().d(),
    }
    for ring, phi, psi, tag in ((r3, r3.phi(), r3.psi(), "3ad"),
                                (rs, rs.phi_theta(), rs.psi_theta(), "su3")):
        tc = torsion_classes(phi.embed(), psi.embed(),
                             phi.d().embed(), psi.d().embed())
        tcf = characteristic_torsion(tc, phi.embed(), psi.embed())
        reg[f"Tc.{tag}"] = ring.from_form(tcf)
        reg[f"dTc.{tag}"] = reg[f"Tc.{tag}"].d()
    for i in (1, 2, 3):
        reg[f"eta{i}.3ad"] = r3.eta(i)
        reg[f"PhiH{i}.3ad"] = r3.Phi(i)
        reg[f"phi.aux{i}.3ad"] = r3.aux_phi(i)
    reg["eta.su3"] = rs.eta()
    reg["Phi.su3"] = rs.Phi()
    reg["Om+.su3"] = rs.Om("+")
    reg["Om-.su3"] = rs.Om("-")
    return reg
