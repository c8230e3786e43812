"""Clifford representations, spinor bases and bilinear form reconstruction.

Representations are built from Kronecker products of four 2x2 matrices over
the Gaussian rationals; all spinor computations are exact.  Basis spinors are
stored without the overall 1/sqrt(2)^m normalisation (bilinears divide by the
squared norm, so every reconstructed coefficient is rational).

Convention notes, fixed once and verified exhaustively by the test suite:

* the fundamental 2-form acting on spinors in the eigenspace decomposition is
  sum_a e^{2a} ^ e^{2a+1}, the negative of the structure-module convention
  Phi(X, Y) = g(X, phi Y);
* the distinguished section of the lowest eigenspace carries a phase (1+i)
  relative to the plain basis spinor u(1,...,1) (this makes the holomorphic
  volume bilinear land exactly on the adapted-frame form);
* the degree-3 Majorana bilinear is taken with the sign that reproduces the
  canonical associative 3-form componentwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .exterior import Coframe, Form, basis_multi_indices
from .scalar import AlgebraError, SymbolTable


class GQ:
    """Gaussian rational a + b i."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, o):
        o = _gq(o)
        return GQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GQ(-self.re, -self.im)

    def __sub__(self, o):
        o = _gq(o)
        return GQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return _gq(o) - self

    def __mul__(self, o):
        o = _gq(o)
        return GQ(self.re * o.re - self.im * o.im,
                  self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _gq(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("gaussian rational division by zero")
        return GQ((self.re * o.re + self.im * o.im) / n,
                  (self.im * o.re - self.re * o.im) / n)

    def conj(self):
        return GQ(self.re, -self.im)

    def __eq__(self, o):
        o = _gq(o)
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    @property
    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


def _gq(x) -> GQ:
    if isinstance(x, GQ):
        return x
    return GQ(x)


I = GQ(0, 1)

# matrices as tuples of row tuples of GQ
G1 = ((I, GQ(0)), (GQ(0), -I))
G2 = ((GQ(0), I), (I, GQ(0)))
E2X2 = ((GQ(1), GQ(0)), (GQ(0), GQ(1)))
TMAT = ((GQ(0), -I), (I, GQ(0)))


def kron(a, b):
    return tuple(tuple(a[i][j] * b[k][l]
                       for j in range(len(a[0])) for l in range(len(b[0])))
                 for i in range(len(a)) for k in range(len(b)))


def kron_all(mats):
    out = mats[0]
    for m in mats[1:]:
        out = kron(out, m)
    return out


def matmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(m)), GQ(0))
                       for j in range(p)) for i in range(n))


def matvec(a, v):
    return tuple(sum((a[i][k] * v[k] for k in range(len(v))), GQ(0))
                 for i in range(len(a)))


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a, c):
    c = _gq(c)
    return tuple(tuple(c * x for x in r) for r in a)


def eye(n):
    return tuple(tuple(GQ(1) if i == j else GQ(0) for j in range(n))
                 for i in range(n))


def herm(x: Sequence[GQ], y: Sequence[GQ]) -> GQ:
    """Hermitian product, conjugate linear in the first slot."""
    return sum((a.conj() * b for a, b in zip(x, y)), GQ(0))


def vec_add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def vec_scale(x, c):
    c = _gq(c)
    return tuple(c * a for a in x)


def vec_conj(x):
    return tuple(a.conj() for a in x)


@dataclass
class CliffordRep:
    """Generator matrices of the 2^m-dimensional complex representation.

    ``volume_sign`` records the exact scalar by which the ordered product
    e_1 ... e_{2m+1} acts, relative to (-i)^{m+1}: with the quoted
    generator matrices (whose e_1 action on the u-basis is the quoted
    i (prod eps) (-1)^m) the product acts as -(-i)^{m+1}, i.e. the quoted
    volume normalisation and the quoted e_1 action differ by a global sign.
    The e_1 convention is kept; the sign is reported, not hidden.
    """

    m: int
    gens: tuple  # gens[mu-1] = rho(e_mu), 2m+1 matrices
    volume_sign: int = -1

    @property
    def dim(self) -> int:
        return 2 ** self.m

    def act_vector(self, coeffs: Sequence, psi):
        """Clifford action of sum coeffs[mu] e_mu on a spinor."""
        out = (GQ(0),) * self.dim
        for mu, c in enumerate(coeffs, start=1):
            c = _gq(c)
            if not c.is_zero:
                out = vec_add(out, vec_scale(matvec(self.gens[mu - 1], psi), c))
        return out

    def form_matrix(self, form: Form):
        """Matrix of the Clifford action of a form with rational coefficients."""
        out = tuple(tuple(GQ(0) for _ in range(self.dim))
                    for _ in range(self.dim))
        for idx, c in form.terms.items():
            m = self.gens[idx[0] - 1] if idx else eye(self.dim)
            for mu in idx[1:]:
                m = matmul(m, self.gens[mu - 1])
            out = mat_add(out, mat_scale(m, c.as_fraction()))
        return out


def build_rep(m: int) -> CliffordRep:
    """Kronecker-product spin representation in dimension 2m+1.

    rho(e_1) = i T x...x T; the pair (e_2a, e_2a+1) acts by (g1, g2) in the
    (m+1-a)-th tensor slot with identities before it and T's after it.  The
    volume product e_1 ... e_{2m+1} acts as (-i)^{m+1}.
    """
    gens = [mat_scale(kron_all([TMAT] * m), I)]
    for a in range(1, m + 1):
        pre = [E2X2] * (m - a)
        post = [TMAT] * (a - 1)
        gens.append(kron_all(pre + [G1] + post))
        gens.append(kron_all(pre + [G2] + post))
    rep = CliffordRep(m, tuple(gens))
    _check_rep(rep)
    return rep


def _minus_i_pow(k: int) -> GQ:
    return [GQ(1), -I, GQ(-1), I][k % 4]


def volume_action(rep: CliffordRep) -> GQ:
    """Exact scalar by which e_1 ... e_{2m+1} acts (the product is central)."""
    vol = rep.gens[0]
    for g in rep.gens[1:]:
        vol = matmul(vol, g)
    scalar = vol[0][0]
    if vol != mat_scale(eye(rep.dim), scalar):
        raise AlgebraError("volume element does not act by a scalar")
    return scalar


def _check_rep(rep: CliffordRep):
    n = rep.dim
    for mu in range(2 * rep.m + 1):
        for nu in range(mu, 2 * rep.m + 1):
            anti = mat_add(matmul(rep.gens[mu], rep.gens[nu]),
                           matmul(rep.gens[nu], rep.gens[mu]))
            target = mat_scale(eye(n), -2 if mu == nu else 0)
            if anti != target:
                raise AlgebraError(f"clifford relation fails at ({mu+1},{nu+1})")
    scalar = volume_action(rep)
    if scalar != _minus_i_pow(rep.m + 1) * rep.volume_sign:
        raise AlgebraError("volume scalar is not +-(-i)^(m+1)")


def u_spinor(rep: CliffordRep, eps: Sequence[int]):
    """Basis spinor u(eps_1..eps_m), scaled by sqrt(2)^m (Gaussian integers)."""
    if len(eps) != rep.m:
        raise AlgebraError("wrong number of signs")
    vecs = [(GQ(1), -I) if e == 1 else (GQ(1), I) for e in eps]
    out = vecs[0]
    for v in vecs[1:]:
        out = tuple(a * b for a in out for b in v)
    return out


def canonical_su3_spinor(rep: CliffordRep):
    """Distinguished lowest-eigenspace section, phase (1+i) times u(1,..,1)."""
    return vec_scale(u_spinor(rep, (1,) * rep.m), GQ(1, 1))


def charge_conjugation(rep: CliffordRep):
    """C = T x E x T (m = 3); real symmetric, C^2 = 1, C rho = -rho^T C."""
    if rep.m != 3:
        raise AlgebraError("charge conjugation implemented for m = 3")
    return kron_all([TMAT, E2X2, TMAT])


def j_real_structure(rep: CliffordRep, psi):
    c = charge_conjugation(rep)
    return matvec(c, vec_conj(psi))


def is_majorana(rep: CliffordRep, psi) -> bool:
    return j_real_structure(rep, psi) == tuple(psi)


def majorana_v_basis(rep: CliffordRep):
    """The eight real basis spinors (scaled; orthogonal, equal norms)."""
    if rep.m != 3:
        raise AlgebraError("v basis implemented for m = 3")
    u = lambda *e: u_spinor(rep, e)
    s = vec_scale
    vs = [
        vec_add(u(1, 1, 1), u(-1, -1, -1)),
        s(vec_add(u(1, 1, 1), s(u(-1, -1, -1), -1)), -I),
        vec_add(u(-1, 1, 1), s(u(1, -1, -1), -1)),
        s(vec_add(u(-1, 1, 1), u(1, -1, -1)), I),
        s(vec_add(u(1, -1, 1), u(-1, 1, -1)), -1),
        s(vec_add(u(1, -1, 1), s(u(-1, 1, -1), -1)), -I),
        vec_add(u(1, 1, -1), s(u(-1, -1, 1), -1)),
        s(vec_add(u(1, 1, -1), u(-1, -1, 1)), I),
    ]
    return vs


def real_rep7():
    """The eight-dimensional real representation by E_ij block matrices.

    These are the matrices forced by the complex representation through the
    v-basis dictionary (so relations and intertwining hold by construction).
    Relative to the quoted table they correspond to reversing the
    generator order e_2..e_7 and fixing one sign (the quoted -E_67 term
    does not anticommute with E_56 + E_78 and must be +E_67).
    """
    def em(pairs):
        mat = [[Fraction(0)] * 8 for _ in range(8)]
        for (i, j), sgn in pairs:
            mat[i - 1][j - 1] += -sgn
            mat[j - 1][i - 1] += sgn
        return tuple(tuple(row) for row in mat)

    data = [
        [((1, 2), 1), ((3, 4), 1), ((5, 6), 1), ((7, 8), 1)],
        [((1, 8), 1), ((2, 7), 1), ((3, 6), 1), ((4, 5), 1)],
        [((1, 7), 1), ((2, 8), -1), ((3, 5), -1), ((4, 6), 1)],
        [((1, 6), 1), ((2, 5), 1), ((3, 8), -1), ((4, 7), -1)],
        [((1, 5), 1), ((2, 6), -1), ((3, 7), 1), ((4, 8), -1)],
        [((1, 4), 1), ((2, 3), 1), ((5, 8), 1), ((6, 7), 1)],
        [((1, 3), 1), ((2, 4), -1), ((5, 7), -1), ((6, 8), 1)],
    ]
    return tuple(em(d) for d in data)


# ---------------------------------------------------------------------------
# bilinear reconstruction of differential forms
# ---------------------------------------------------------------------------

def _bilinear(rep: CliffordRep, left, right, idx) -> GQ:
    v = tuple(right)
    for mu in reversed(idx):
        v = matvec(rep.gens[mu - 1], v)
    return herm(left, v)


def _norm_sq(psi) -> Fraction:
    n = herm(psi, psi)
    if n.im != 0:
        raise AlgebraError("norm must be real")
    return n.re


# empirical sign/prefactor conventions (see module docstring); each entry is
# (prefactor as GQ, use conjugate spinor on the left).
_FORM_PREFACTORS = {
    1: (I, False),      # eta:  i (-1)^{m+1} <psi, e psi> at m odd
    2: (I, False),      # fundamental 2-form, structure-module sign
    3: (GQ(1), False),  # associative 3-form (Majorana bilinear)
    4: (GQ(-1), False), # coassociative 4-form
}


def form_from_spinor(rep: CliffordRep, psi, degree: int,
                     coframe: Coframe) -> Form:
    """Reconstruct a differential form from spinor bilinears.

    degree 1 and 2: almost-contact data of a lowest-eigenspace section;
    degree 3 and 4 with a Majorana spinor: the associated associative and
    coassociative forms.  Coefficients are rational; a zero spinor or a
    non-real coefficient is an error.
    """
    if all(x.is_zero for x in psi):
        raise AlgebraError("zero spinor")
    if degree not in _FORM_PREFACTORS:
        raise AlgebraError(f"unsupported degree: {degree}")
    pref, conj_left = _FORM_PREFACTORS[degree]
    n = _norm_sq(psi)
    left = vec_conj(psi) if conj_left else psi
    terms = {}
    dim = 2 * rep.m + 1
    for idx in combinations(range(1, dim + 1), degree):
        c = pref * _bilinear(rep, left, psi, idx) / n
        if c.is_zero:
            continue
        if c.im != 0:
            raise AlgebraError(f"non-real coefficient at {idx}: {c}")
        terms[idx] = Fraction(c.re)
    return coframe.form(terms)


def holomorphic_volume_from_spinor(rep: CliffordRep, psi,
                                   coframe: Coframe) -> tuple[Form, Form]:
    """(real, imaginary) parts of the degree-m bilinear between psi-bar and psi."""
    if all(x.is_zero for x in psi):
        raise AlgebraError("zero spinor")
    n = _norm_sq(psi)
    bar = vec_conj(psi)
    re_terms, im_terms = {}, {}
    dim = 2 * rep.m + 1
    for idx in combinations(range(1, dim + 1), rep.m):
        c = I * _bilinear(rep, bar, psi, idx) / n
        if c.re != 0:
            re_terms[idx] = c.re
        if c.im != 0:
            im_terms[idx] = c.im
    return coframe.form(re_terms), coframe.form(im_terms)


# ---------------------------------------------------------------------------
# eigenspace decomposition and purity
# ---------------------------------------------------------------------------

def sigma_fundamental_form(coframe: Coframe, m: int) -> Form:
    """Hermitian form in the eigenspace-decomposition sign convention."""
    terms = {}
    for a in range(1, m + 1):
        terms[(2 * a, 2 * a + 1)] = 1
    return coframe.form(terms)


@dataclass
class SigmaDecomposition:
    projectors: list
    dims: list


def sigma_decompose(rep: CliffordRep, phi_form: Form,
                    xi_index: int = 1) -> SigmaDecomposition:
    """Exact eigenprojectors of the fundamental-form Clifford action.

    Verifies the eigenvalues -i(2r - m) on Sigma_r, the Reeb eigenvalues
    i(-1)^r(-1)^m, the binomial dimensions and the membership equations for
    the extreme eigenspaces.
    """
    m = rep.m
    n = rep.dim
    a = rep.form_matrix(phi_form)
    eigs = [GQ(0, -(2 * r - m)) for r in range(m + 1)]
    projectors = []
    for r in range(m + 1):
        p = eye(n)
        for r2 in range(m + 1):
            if r2 == r:
                continue
            num = mat_add(a, mat_scale(eye(n), -eigs[r2]))
            p = matmul(p, mat_scale(num, GQ(1) / (eigs[r] - eigs[r2])))
        projectors.append(p)
    total = projectors[0]
    for p in projectors[1:]:
        total = mat_add(total, p)
    if total != eye(n):
        raise AlgebraError("eigenprojectors do not resolve the identity")
    dims = []
    xi = rep.gens[xi_index - 1]
    for r, p in enumerate(projectors):
        ap = matmul(a, p)
        if ap != mat_scale(p, eigs[r]):
            raise AlgebraError(f"eigenvalue check fails on Sigma_{r}")
        xi_eval = GQ(0, (-1) ** r * (-1) ** m)
        if matmul(xi, p) != mat_scale(p, xi_eval):
            raise AlgebraError(f"Reeb eigenvalue check fails on Sigma_{r}")
        tr = sum((p[i][i] for i in range(n)), GQ(0))
        if tr.im != 0 or tr.re.denominator != 1:
            raise AlgebraError("projector trace is not an integer")
        dims.append(int(tr.re))
    from math import comb
    if dims != [comb(m, r) for r in range(m + 1)]:
        raise AlgebraError(f"eigenspace dimensions {dims} are wrong")
    return SigmaDecomposition(projectors, dims)


def gq_rank(matrix) -> int:
    """Exact rank of a Gaussian-rational matrix."""
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank_ = 0
    for c in range(ncols):
        piv = next((i for i in range(rank_, nrows)
                    if not rows[i][c].is_zero), None)
        if piv is None:
            continue
        rows[rank_], rows[piv] = rows[piv], rows[rank_]
        pv = rows[rank_][c]
        rows[rank_] = [x / pv for x in rows[rank_]]
        for i in range(nrows):
            if i != rank_ and not rows[i][c].is_zero:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank_])]
        rank_ += 1
    return rank_


def gq_nullspace(matrix):
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not rows[i][c].is_zero), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nrows):
            if i != r and not rows[i][c].is_zero:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [GQ(0)] * ncols
        v[fc] = GQ(1)
        for rr, pc in enumerate(pivots):
            v[pc] = -rows[rr][fc]
        basis.append(tuple(v))
    return basis


def purity_dim(rep: CliffordRep, psi) -> int:
    """Complex dimension of the Clifford annihilator of psi in T^C.

    Also verifies that the annihilator is isotropic for the complex-bilinear
    extension of the metric.
    """
    if all(x.is_zero for x in psi):
        raise AlgebraError("zero spinor")
    cols = [matvec(g, psi) for g in rep.gens]
    matrix = [tuple(cols[mu][i] for mu in range(len(cols)))
              for i in range(rep.dim)]
    kernel = gq_nullspace(matrix)
    for v in kernel:
        for w in kernel:
            s = sum((a * b for a, b in zip(v, w)), GQ(0))
            if not s.is_zero:
                raise AlgebraError("annihilator is not isotropic")
    return len(kernel)


# ---------------------------------------------------------------------------
# the four distinguished spinors of the 3-contact geometry
# ---------------------------------------------------------------------------

def sp1_spinors(rep: CliffordRep) -> dict:
    """Canonical and auxiliary spinors in the adapted frame.

    Built from the distinguished section of the first almost contact
    structure: psi_2 = Psi_+, psi_3 = Psi_-, psi_1 = xi_2 Psi_-,
    psi_0 = -xi_2 Psi_+.  All four are Majorana.
    """
    if rep.m != 3:
        raise AlgebraError("the distinguished spinors live in dimension 7")
    psi = canonical_su3_spinor(rep)
    bar = vec_conj(psi)
    plus = vec_add(psi, bar)
    minus = vec_scale(vec_add(psi, vec_scale(bar, -1)), -I)
    xi2 = rep.gens[1]
    return {
        0: vec_scale(matvec(xi2, plus), -1),
        1: matvec(xi2, minus),
        2: tuple(plus),
        3: tuple(minus),
    }


# Verified sign table for the quoted identity list.  A value sigma means
# the identity holds with an extra factor sigma relative to the display; the
# i = 3 legs of the cyclic identities flip, which is forced: the product
# rho(e_3) rho(e_2) rho(e_1) acts as -1 on the span of psi_0, so at most two
# of the three cyclic relations can carry the quoted sign.
SP1_IDENTITY_SIGNS = {
    ("xi_psi0", 1): 1, ("xi_psi0", 2): 1, ("xi_psi0", 3): -1,
    ("xi_cyclic", (1, 2, 3)): 1, ("xi_cyclic", (2, 3, 1)): 1,
    ("xi_cyclic", (3, 1, 2)): -1,
    ("psi0_from", 1): 1, ("psi0_from", 2): 1, ("psi0_from", 3): -1,
}


@dataclass
class IdentityCheck:
    name: str
    holds: bool
    sign: int  # +1: quoted sign, -1: quoted identity with a sign flip


def _eqv(a, b) -> bool:
    return tuple(a) == tuple(b)


def sp1_spinor_suite(rep: CliffordRep, frame: dict) -> list:
    """Verify the distinguished-spinor identity list, reporting signs.

    ``frame`` must provide the full hermitian 2-forms ``Phi[i]`` and the
    (1,1)-tensors are taken in the spinor-side convention (the negative of
    the structure-module fundamental form); every check is exact.
    """
    psi = sp1_spinors(rep)
    xi = lambda i: rep.gens[i - 1]
    phi_spin = {i: mat_scale(rep.form_matrix(frame["Phi"][i]), -1)
                for i in (1, 2, 3)}
    checks: list[IdentityCheck] = []

    def record(name, lhs, rhs):
        if _eqv(lhs, rhs):
            checks.append(IdentityCheck(name, True, 1))
        elif _eqv(lhs, vec_scale(rhs, -1)):
            checks.append(IdentityCheck(name, True, -1))
        else:
            checks.append(IdentityCheck(name, False, 0))

    for i in (1, 2, 3):
        record(f"xi{i} psi0 = psi{i}", matvec(xi(i), psi[0]), psi[i])
        record(f"psi0 = -xi{i} psi{i}",
               vec_scale(matvec(xi(i), psi[i]), -1), psi[0])
        record(f"Phi{i} psi0 = xi{i} psi0",
               matvec(phi_spin[i], psi[0]), matvec(xi(i), psi[0]))
        record(f"Phi{i} psi{i} = xi{i} psi{i}",
               matvec(phi_spin[i], psi[i]), matvec(xi(i), psi[i]))
        for j in (1, 2, 3):
            if j != i:
                record(f"Phi{i} psi{j} = -3 xi{i} psi{j}",
                       matvec(phi_spin[i], psi[j]),
                       vec_scale(matvec(xi(i), psi[j]), -3))
    for (i, j, k) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        record(f"xi{i} psi{j} = psi{k}", matvec(xi(i), psi[j]), psi[k])
    # membership in the rank-2 bundles: psi_i solves the E_j equation, j != i
    phi_tensor = {i: _endo_from_form(frame["Phi"][i], flip=True)
                  for i in (1, 2, 3)}
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i == j:
                continue
            ok = _e_bundle_member(rep, phi_tensor[j], j, psi[i])
            checks.append(IdentityCheck(f"psi{i} in E{j}", ok, 1))
    # lowest-eigenspace identity used in the Ricci argument
    herm_form = frame.get("sigma_form")
    if herm_form is not None:
        m_phi = rep.form_matrix(herm_form)
        sec = canonical_su3_spinor(rep)
        record("Phi Psi = -3 xi Psi (Sigma_0 section)",
               matvec(m_phi, sec), vec_scale(matvec(rep.gens[0], sec), -3))
    return checks


def _endo_from_form(phi_form: Form, flip: bool) -> dict:
    """(1,1)-tensor phi(e_x) = sum_y c e_y from Phi(X,Y) = g(X, phi Y)."""
    out: dict[int, list] = {}
    sgn = -1 if flip else 1
    for (a, b), c in phi_form.terms.items():
        v = c.as_fraction() * sgn
        # Phi(e_a, e_b) = g(e_a, phi e_b) -> phi(e_b) gains v * e_a
        out.setdefault(b, []).append((a, v))
        out.setdefault(a, []).append((b, -v))
    return out


def _e_bundle_member(rep: CliffordRep, phi_tensor: dict, j: int, psi) -> bool:
    """(-2 phi_j(X) + xi_j X - X xi_j) psi = 0 for every frame vector X."""
    xi = rep.gens[j - 1]
    for x in range(1, 8):
        acc = vec_add(matvec(xi, matvec(rep.gens[x - 1], psi)),
                      vec_scale(matvec(rep.gens[x - 1], matvec(xi, psi)), -1))
        for (y, v) in phi_tensor.get(x, ()):
            acc = vec_add(acc, vec_scale(matvec(rep.gens[y - 1], psi),
                                         GQ(-2 * v)))
        if not all(c.is_zero for c in acc):
            return False
    return True


def plus_minus_relations(rep: CliffordRep, frame: dict) -> list:
    """Reeb and horizontal Clifford relations of the +- spinor pair.

    Checks xi Psi_+ = Psi_-, X Psi_+ = phi(X) Psi_- and
    xi X Psi_+ = phi(X) Psi_+ (structure 1, spinor-side phi convention).
    """
    psi = canonical_su3_spinor(rep)
    bar = vec_conj(psi)
    plus = vec_add(psi, bar)
    minus = vec_scale(vec_add(psi, vec_scale(bar, -1)), -I)
    phi_tensor = _endo_from_form(frame["Phi"][1], flip=True)
    checks = [IdentityCheck("xi1 Psi+ = Psi-",
                            _eqv(matvec(rep.gens[0], plus), minus), 1)]
    ok_h, ok_hv = True, True
    for x in range(2, 8):
        rhs = (GQ(0),) * rep.dim
        for (y, v) in phi_tensor.get(x, ()):
            rhs = vec_add(rhs, vec_scale(matvec(rep.gens[y - 1], minus),
                                         GQ(v)))
        if not _eqv(matvec(rep.gens[x - 1], plus), rhs):
            ok_h = False
        rhs2 = (GQ(0),) * rep.dim
        for (y, v) in phi_tensor.get(x, ()):
            rhs2 = vec_add(rhs2, vec_scale(matvec(rep.gens[y - 1], plus),
                                           GQ(v)))
        lhs2 = matvec(rep.gens[0], matvec(rep.gens[x - 1], plus))
        if not _eqv(lhs2, rhs2):
            ok_hv = False
    checks.append(IdentityCheck("X Psi+ = phi(X) Psi-", ok_h, 1))
    checks.append(IdentityCheck("xi X Psi+ = phi(X) Psi+", ok_hv, 1))
    return checks


def sigma_membership(rep: CliffordRep, phi_form: Form) -> bool:
    """Extreme-eigenspace membership equations for the canonical sections.

    With the spinor-side (1,1)-tensor phi' derived from the hermitian-form
    convention: -phi'(X) Psi + i X Psi + (-1)^m eta(X) Psi = 0 on the lowest
    eigenspace and the conjugated equation on the highest.
    """
    m = rep.m
    psi = canonical_su3_spinor(rep)
    bar = vec_conj(psi)
    phi_tensor = _endo_from_form(phi_form, flip=False)
    for x in range(1, 2 * m + 2):
        acc = vec_scale(matvec(rep.gens[x - 1], psi), I)
        for (y, v) in phi_tensor.get(x, ()):
            acc = vec_add(acc, vec_scale(matvec(rep.gens[y - 1], psi),
                                         GQ(-v)))
        if x == 1:
            acc = vec_add(acc, vec_scale(psi, GQ((-1) ** m)))
        if not all(c.is_zero for c in acc):
            return False
        accb = vec_scale(matvec(rep.gens[x - 1], bar), -I)
        for (y, v) in phi_tensor.get(x, ()):
            accb = vec_add(accb, vec_scale(matvec(rep.gens[y - 1], bar),
                                           GQ(-v)))
        if x == 1:
            accb = vec_add(accb, vec_scale(bar, GQ(-1)))
        if not all(c.is_zero for c in accb):
            return False
    return True


def stabilizer_dimension(phi: Form) -> int:
    """Dimension of the so(7) stabilizer of a 3-form (14 for a G2 form)."""
    cf = phi.coframe
    pairs = basis_multi_indices(7, 2)
    triples = basis_multi_indices(7, 3)
    rows = []
    cols = []
    for (a, b) in pairs:
        acted = _so7_action_on_form(cf, a, b, phi)
        cols.append(acted)
    for tid in triples:
        rows.append([col.terms.get(tid, cf.table.zero()).as_fraction()
                     for col in cols])
    from .linsolve import nullspace
    return len(nullspace(rows))


def _so7_action_on_form(cf: Coframe, a: int, b: int, omega: Form) -> Form:
    """Action of the rotation generator in the (a,b)-plane on a form."""
    out = cf.zero()
    for idx, c in omega.terms.items():
        for pos, mu in enumerate(idx):
            if mu == a:
                rep_idx = idx[:pos] + (b,) + idx[pos + 1:]
                out = out + cf.form({rep_idx: -c})
            elif mu == b:
                rep_idx = idx[:pos] + (a,) + idx[pos + 1:]
                out = out + cf.form({rep_idx: c})
    return out


def su3_killing_consequences(table) -> list:
    """Frame-level consequences of the generalized Killing endomorphism.

    With S(xi) = -(3a - 4d) xi and S = a on the horizontal space, the stated
    covariant derivatives of (eta, Phi, Om) alternate into the structure
    equations: d eta = 2a Phi, d Phi = 0 and d Om = 4 i d eta ^ Om.
    """
    from .structures import su3_frame_forms
    cf = Coframe(table, 7)
    frame = su3_frame_forms(cf)
    a, d = table.sym("alpha"), table.sym("delta")
    s_of = {1: -(3 * a - 4 * d)}
    checks = []
    # d eta = sum e^mu ^ (S(e_mu) -| Phi) = 2 a Phi
    acc = cf.zero()
    for mu in range(1, 8):
        coef = s_of.get(mu, a)
        acc = acc + (cf.e(mu) ^ (coef * frame["Phi"].contract(mu)))
    checks.append(IdentityCheck("alternation of nabla eta gives 2a Phi",
                                acc == 2 * a * frame["Phi"], 1))
    # d Phi = sum e^mu ^ (eta ^ S(e_mu)^flat) = 0
    acc = cf.zero()
    for mu in range(1, 8):
        coef = s_of.get(mu, a)
        acc = acc + (cf.e(mu) ^ (frame["eta"] ^ (coef * cf.e(mu))))
    checks.append(IdentityCheck("alternation of nabla Phi vanishes",
                                acc.is_zero, 1))
    # d Om = i[(S xi)^flat ^ Om + eta ^ sum e^mu ^ (S e_mu -| Om)]
    om_p, om_m = frame["Om+"], frame["Om-"]
    sxi = s_of[1]
    contr_p = cf.zero()
    contr_m = cf.zero()
    for mu in range(2, 8):
        contr_p = contr_p + (cf.e(mu) ^ (a * om_p.contract(mu)))
        contr_m = contr_m + (cf.e(mu) ^ (a * om_m.contract(mu)))
    # real part: d Om+ = -[sxi eta ^ Om- + eta ^ (S -| Om)-part]
    d_omp = -(sxi * (frame["eta"] ^ om_m)) - (frame["eta"] ^ contr_m)
    d_omm = (sxi * (frame["eta"] ^ om_p)) + (frame["eta"] ^ contr_p)
    checks.append(IdentityCheck(
        "alternation of nabla Om reproduces d Om+ = -4d eta Om-",
        d_omp == -4 * d * (frame["eta"] ^ om_m), 1))
    checks.append(IdentityCheck(
        "alternation of nabla Om reproduces d Om- = 4d eta Om+",
        d_omm == 4 * d * (frame["eta"] ^ om_p), 1))
    # the two quoted derivative routes agree: the metric dual of
    # nabla xi = -phi(S(X)) equals nabla eta = S(X) -| Phi on every frame leg
    phi_tensor = _endo_from_form(frame["Phi"], flip=False)
    routes_ok = True
    for mu in range(1, 8):
        coef = s_of.get(mu, a)
        via_eta = coef * frame["Phi"].contract(mu)
        dual = cf.zero()
        for (y, v) in phi_tensor.get(mu, ()):
            dual = dual + cf.form({(y,): -v}) * coef
        if not (via_eta - dual).is_zero:
            routes_ok = False
    checks.append(IdentityCheck(
        "metric dual of nabla xi = -phi(S) matches nabla eta = S -| Phi",
        routes_ok, 1))
    return checks


def spinor_registry(rep: CliffordRep) -> dict:
    """Spinors addressable by label from the command line."""
    reg = {}
    psi = sp1_spinors(rep)
    for i in range(4):
        reg[f"psi{i}.sp1"] = psi[i]
    for eps in ((1, 1, 1), (-1, -1, -1), (1, 1, -1), (1, -1, 1), (-1, 1, 1)):
        label = "u(" + ",".join(str(e) for e in eps) + ")"
        reg[label] = u_spinor(rep, eps)
    for k, v in enumerate(majorana_v_basis(rep), start=1):
        reg[f"v{k}"] = v
    reg["Psi.su3"] = canonical_su3_spinor(rep)
    return reg


def majorana_family_form(rep: CliffordRep, plus, minus, degree: int,
                         coframe: Coframe, table) -> Form:
    """Bilinear 3- or 4-form of the circle family of Majorana spinors.

    The family cos(t/2) Psi_+ - sin(t/2) Psi_- only enters bilinears through
    cos^2, sin^2 and sin cos, i.e. through ((1+c)/2, (1-c)/2, -s/2); the
    result is a Form with coefficients polynomial in the circle symbols.
    (In this realization the quoted circle of forms is traversed with the
    opposite parameter sense, i.e. Psi_- enters with a minus sign.)
    """
    if degree not in (3, 4):
        raise AlgebraError("family reconstruction supports degrees 3 and 4")
    pref = _FORM_PREFACTORS[degree][0]
    npp = _norm_sq(plus)
    nmm = _norm_sq(minus)
    if npp != nmm or not herm(plus, minus).is_zero:
        raise AlgebraError("family spinors must be orthogonal of equal norm")
    s, c = table.sym("s"), table.sym("c")
    w_pp = (1 + c) / 2
    w_mm = (1 - c) / 2
    terms = {}
    dim = 2 * rep.m + 1
    for idx in combinations(range(1, dim + 1), degree):
        bpp = pref * _bilinear(rep, plus, plus, idx) / npp
        bmm = pref * _bilinear(rep, minus, minus, idx) / npp
        cross = pref * (_bilinear(rep, plus, minus, idx)
                        + _bilinear(rep, minus, plus, idx)) / npp
        for val in (bpp, bmm, cross):
            if val.im != 0:
                raise AlgebraError("non-real family coefficient")
        coef = (table.rat(bpp.re) * w_pp + table.rat(bmm.re) * w_mm
                - table.rat(cross.re) * (s / 2))
        if not coef.is_zero:
            terms[idx] = coef
    return coframe.form(terms)
