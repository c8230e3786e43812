"""Concrete degenerate 3-contact model: the 7-dimensional nilpotent group.

The model is specified by its structure equations de^i = 2 Phi_i^H for the
three vertical legs and de^r = 0 on the horizontal ones, i.e. the adapted
structure equations at (alpha, delta) = (1, 0).  Everything here is a
first-principles computation with rational structure constants: Koszul
formula for the Levi-Civita connection, curvature from commutators of the
connection matrices, the spin connection, and the end-to-end check of the
exact-solution theorem.  These results are the independent oracle for the
closed-form curvature module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curvature import contorsion_3ad, curvature_3ad
from .exterior import Coframe, Form, basis_multi_indices
from .scalar import AlgebraError, SymbolTable
from .structures import CYCLIC, Ring3ad, make_table, sp1_frame_forms
from . import spinor as sp

VERT = (1, 2, 3)
HORIZ = (4, 5, 6, 7)


@dataclass
class LieModel:
    """Left-invariant frame data: coframe, de-table and structure constants."""

    coframe: Coframe
    de: dict           # index -> Form (exterior derivative of e^i)
    c: dict            # (mu, nu) -> dict target -> Fraction, brackets

    def bracket(self, mu: int, nu: int) -> dict:
        return self.c.get((mu, nu), {})


def heisenberg_model(table: SymbolTable | None = None) -> LieModel:
    table = table or make_table("3ad")
    cf = Coframe(table, 7)
    frame = sp1_frame_forms(cf)
    de = {i: 2 * frame["PhiH"][i] for i in VERT}
    de.update({r: cf.zero() for r in HORIZ})
    c: dict = {}
    for mu in range(1, 8):
        for nu in range(mu + 1, 8):
            out = {}
            for tgt in range(1, 8):
                # de^t(X, Y) = -e^t([X, Y])
                v = de[tgt].coefficient((mu, nu))
                if not v.is_zero:
                    out[tgt] = -v.as_fraction()
            if out:
                c[(mu, nu)] = out
                c[(nu, mu)] = {k: -v for k, v in out.items()}
    model = LieModel(cf, de, c)
    _check_model(model)
    return model


def d_form(model: LieModel, form: Form) -> Form:
    """Exterior derivative of a left-invariant form with constant coefficients."""
    cf = model.coframe
    out = cf.zero()
    for idx, coef in form.terms.items():
        for pos, mu in enumerate(idx):
            prefix = cf.e(*idx[:pos]) if idx[:pos] else cf.one()
            suffix = cf.e(*idx[pos + 1:]) if idx[pos + 1:] else cf.one()
            piece = prefix ^ model.de[mu] ^ suffix
            out = out + coef * (piece if pos % 2 == 0 else -piece)
    return out


def _check_model(model: LieModel):
    cf = model.coframe
    for mu in range(1, 8):
        if not d_form(model, model.de[mu]).is_zero:
            raise AlgebraError("Jacobi identity fails (d^2 != 0)")
    # structure equations are the adapted ones at (alpha, delta) = (1, 0)
    frame = sp1_frame_forms(cf)
    for i, (j, k) in CYCLIC.items():
        target = 2 * frame["PhiH"][i]
        if not (model.de[i] - target).is_zero:
            raise AlgebraError("de-table violates the structure equations")


class Connection:
    """Left-invariant metric connection: L[y][x][z] = g(e_x, nabla_{e_y} e_z)."""

    def __init__(self, model: LieModel, coeffs):
        self.model = model
        self.L = coeffs  # dict y -> 7x7 list of Fractions

    def nabla(self, y: int, z: int) -> dict:
        return {x: self.L[y][x - 1][z - 1] for x in range(1, 8)
                if self.L[y][x - 1][z - 1] != 0}

    def is_metric(self) -> bool:
        for y in range(1, 8):
            m = self.L[y]
            for x in range(7):
                for z in range(7):
                    if m[x][z] != -m[z][x]:
                        return False
        return True

    def torsion_component(self, x: int, y: int, z: int) -> Fraction:
        """T(X; Y, Z) = g(X, nabla_Y Z - nabla_Z Y - [Y, Z])."""
        val = self.L[y][x - 1][z - 1] - self.L[z][x - 1][y - 1]
        val -= self.model.bracket(y, z).get(x, Fraction(0))
        return val


def levi_civita(model: LieModel) -> Connection:
    """Koszul formula for orthonormal left-invariant fields."""
    def cc(a, b, x):
        return model.bracket(a, b).get(x, Fraction(0))

    L = {}
    for y in range(1, 8):
        mat = [[Fraction(0)] * 7 for _ in range(7)]
        for x in range(1, 8):
            for z in range(1, 8):
                mat[x - 1][z - 1] = (cc(y, z, x) - cc(z, x, y)
                                     + cc(x, y, z)) / 2
        L[y] = mat
    conn = Connection(model, L)
    if not conn.is_metric():
        raise AlgebraError("Koszul connection is not metric")
    for x in range(1, 8):
        for y in range(1, 8):
            for z in range(y + 1, 8):
                if conn.torsion_component(x, y, z) != 0:
                    raise AlgebraError("Levi-Civita torsion does not vanish")
    return conn


def with_torsion(lc: Connection, torsion: Form) -> Connection:
    """Metric connection with prescribed totally skew torsion 3-form."""
    model = lc.model
    L = {}
    for y in range(1, 8):
        mat = [row[:] for row in lc.L[y]]
        for x in range(1, 8):
            for z in range(1, 8):
                mat[x - 1][z - 1] += torsion.coefficient((x, y, z)) \
                    .as_fraction() / 2
        L[y] = mat
    conn = Connection(model, L)
    if not conn.is_metric():
        raise AlgebraError("skew-torsion connection is not metric")
    for x in range(1, 8):
        for y in range(1, 8):
            for z in range(y + 1, 8):
                got = conn.torsion_component(x, y, z)
                want = torsion.coefficient((x, y, z)).as_fraction()
                if got != want:
                    raise AlgebraError("recomputed torsion mismatch")
    return conn


def canonical_torsion_form(model: LieModel) -> Form:
    """T = 2 sum eta_i ^ Phi_i^H - 8 eta_123 at (alpha, delta) = (1, 0)."""
    cf = model.coframe
    frame = sp1_frame_forms(cf)
    out = -8 * cf.e(1, 2, 3)
    for i in VERT:
        out = out + 2 * (frame["eta"][i] ^ frame["PhiH"][i])
    return out


def canonical_connection(model: LieModel) -> Connection:
    return with_torsion(levi_civita(model), canonical_torsion_form(model))


def connection_lambda(model: LieModel, lam: Fraction) -> Connection:
    """Canonical connection shifted by the closed-form difference tensor."""
    cf = model.coframe
    frame = sp1_frame_forms(cf)
    phi = cf.e(1, 2, 3)
    for i in VERT:
        phi = phi + (frame["eta"][i] ^ frame["PhiH"][i])
    delta = contorsion_3ad(phi, Fraction(lam))
    base = canonical_connection(model)
    L = {}
    for y in range(1, 8):
        mat = [row[:] for row in base.L[y]]
        for (x, yy, z), v in delta.items():
            if yy == y:
                mat[x - 1][z - 1] += v
        L[y] = mat
    conn = Connection(model, L)
    if not conn.is_metric():
        raise AlgebraError("deformed connection is not metric")
    return conn


def curvature_fp(conn: Connection) -> dict:
    """First-principles curvature array R[(I, J)] = R(e_I; e_J) as Fractions.

    R(X, Y, Z, V) = g(([nabla_X, nabla_Y] - nabla_[X,Y]) Z, V); the array key
    pairs the 2-form slot I = (x, y) with the endomorphism slot J = (z, v).
    """
    model = conn.model
    pairs = basis_multi_indices(7, 2)
    mats = {}
    for (x, y) in pairs:
        lx, ly = conn.L[x], conn.L[y]
        comm = [[sum(lx[i][k] * ly[k][j] - ly[i][k] * lx[k][j]
                     for k in range(7)) for j in range(7)] for i in range(7)]
        for tgt, cv in model.bracket(x, y).items():
            lk = conn.L[tgt]
            for i in range(7):
                for j in range(7):
                    comm[i][j] -= cv * lk[i][j]
        mats[(x, y)] = comm
    out = {}
    for I in pairs:
        m = mats[I]
        for (z, v) in pairs:
            val = m[v - 1][z - 1]
            if val != 0:
                out[(I, (z, v))] = val
    return out


def closed_form_curvature_array(lam: Fraction) -> dict:
    """The closed-form operator at (alpha, delta) = (1, 0) with R2 = 0."""
    table = make_table("3ad")
    ring = Ring3ad(table)
    R = curvature_3ad(ring, table.rat(lam))
    arr = R.to_array()
    sub = {"alpha": 1, "delta": 0}
    out = {}
    for key, val in arr.items():
        v = val.subs(sub)
        if not v.is_zero:
            out[key] = v.as_fraction()
    return out


def arrays_equal(a: dict, b: dict) -> bool:
    keys = set(a) | set(b)
    return all(a.get(k, Fraction(0)) == b.get(k, Fraction(0)) for k in keys)


def sigma_t_identity(conn: Connection, torsion: Form) -> bool:
    """First Bianchi identity with parallel skew torsion.

    cyclic R(X,Y,Z,V) = cyclic g(T(X,Y), T(Z,V)) over (X, Y, Z), checked on
    every frame quadruple.
    """
    arr = curvature_fp(conn)

    def rc(x, y, z, v):
        sx = 1
        if x == y or z == v:
            return Fraction(0)
        if x > y:
            x, y, sx = y, x, -sx
        if z > v:
            z, v, sx = v, z, -sx
        return sx * arr.get(((x, y), (z, v)), Fraction(0))

    tvec = {}
    for x in range(1, 8):
        for y in range(1, 8):
            tvec[(x, y)] = tuple(torsion.coefficient((w, x, y)).as_fraction()
                                 for w in range(1, 8))

    def dot(a, b):
        return sum(p * q for p, q in zip(a, b))

    for x in range(1, 8):
        for y in range(1, 8):
            for z in range(1, 8):
                for v in range(1, 8):
                    lhs = rc(x, y, z, v) + rc(y, z, x, v) + rc(z, x, y, v)
                    rhs = (dot(tvec[(x, y)], tvec[(z, v)])
                           + dot(tvec[(y, z)], tvec[(x, v)])
                           + dot(tvec[(z, x)], tvec[(y, v)]))
                    if lhs != rhs:
                        return False
    return True


def curvature_wedge_psi(arr: dict, psi: Form) -> dict:
    """(R ^ psi) as an endomorphism-valued 6-form: keys (I6, (z, v))."""
    cf = psi.coframe
    out: dict = {}
    for ((x, y), J), val in arr.items():
        wedge = cf.e(x, y) ^ psi
        for idx, c in wedge.terms.items():
            key = (idx, J)
            cur = out.get(key, Fraction(0)) + val * c.as_fraction()
            if cur:
                out[key] = cur
            else:
                out.pop(key, None)
    return out


def trace_wedge(arr1: dict, arr2: dict, cf: Coframe) -> Form:
    """tr(R ^ R') as a 4-form from two curvature arrays."""
    out = cf.zero()
    pairs = basis_multi_indices(7, 2)
    by_I1: dict = {}
    for (I, J), v in arr1.items():
        by_I1.setdefault(I, {})[J] = v
    by_I2: dict = {}
    for (I, J), v in arr2.items():
        by_I2.setdefault(I, {})[J] = v
    for I1, row1 in by_I1.items():
        f1 = cf.e(*I1)
        for I2, row2 in by_I2.items():
            tr = Fraction(0)
            for J, a in row1.items():
                b = row2.get(J)
                if b is not None:
                    tr += a * b
            if tr == 0:
                continue
            # tr(A B) = -2 sum_{rho<sigma} A_{rho sigma} B_{rho sigma}
            out = out + (-2 * tr) * (f1 ^ cf.e(*I2))
    return out


# ---------------------------------------------------------------------------
# spinor checks on the model
# ---------------------------------------------------------------------------

def spin_connection_action(conn: Connection, rep, x: int):
    """Spinor covariant derivative matrix (1/2) sum_{n<r} G_{nr} e_n e_r."""
    mat = tuple(tuple(sp.GQ(0) for _ in range(rep.dim))
                for _ in range(rep.dim))
    for n in range(1, 8):
        for r in range(n + 1, 8):
            # L[x][n][r] = g(e_n, nabla_x e_r); Gamma_{nr}(x) = g(nabla_x e_n, e_r)
            coef = conn.L[x][r - 1][n - 1]
            if coef == 0:
                continue
            prod = sp.matmul(rep.gens[n - 1], rep.gens[r - 1])
            mat = sp.mat_add(mat, sp.mat_scale(prod, Fraction(coef, 2)))
    return mat


@dataclass
class KillingCheck:
    name: str
    holds: bool


# The Clifford action is only defined up to a global sign of all generator
# matrices.  The u-basis action formulas and the eigenspace table pin the
# +rho realization (which this package uses throughout); the quoted
# generalized-Killing factors belong to the -rho realization, so they hold
# here with one overall sign.  The spin connection itself is the canonical
# lift (it satisfies [Omega(X), rho(Z)] = rho(nabla_X Z) exactly).
CLIFFORD_REALIZATION_SIGN = -1


def spin_killing_checks(model: LieModel) -> list:
    """Derivative rules of the four distinguished spinors at (1, 0).

    With s = CLIFFORD_REALIZATION_SIGN: nabla^g_X psi_0 = -s (3/2) X psi_0 on
    the horizontal space, nabla^g_Y psi_0 = s Y psi_0 on the vertical one;
    the auxiliary spinors satisfy s(1/2) X psi_i, s((2a-d)/2) xi_i psi_i and
    s((3d-2a)/2) xi_j psi_i with (a, d) = (1, 0).
    """
    lc = levi_civita(model)
    rep = sp.build_rep(3)
    psi = sp.sp1_spinors(rep)
    checks = []
    nabla = {x: spin_connection_action(lc, rep, x) for x in range(1, 8)}
    s = CLIFFORD_REALIZATION_SIGN

    def ok(x, spinor, factor):
        lhs = sp.matvec(nabla[x], spinor)
        rhs = sp.vec_scale(sp.matvec(rep.gens[x - 1], spinor), s * factor)
        return tuple(lhs) == tuple(rhs)

    checks.append(KillingCheck(
        "nabla_X psi0 = -(3/2) X psi0 for horizontal X",
        all(ok(x, psi[0], Fraction(-3, 2)) for x in HORIZ)))
    checks.append(KillingCheck(
        "nabla_Y psi0 = Y psi0 for vertical Y",
        all(ok(y, psi[0], Fraction(1)) for y in VERT)))
    checks.append(KillingCheck(
        "nabla_X psi_i = (1/2) X psi_i for horizontal X",
        all(ok(x, psi[i], Fraction(1, 2)) for x in HORIZ for i in (1, 2, 3))))
    checks.append(KillingCheck(
        "nabla_{xi_i} psi_i = xi_i psi_i",
        all(ok(i, psi[i], Fraction(1)) for i in (1, 2, 3))))
    checks.append(KillingCheck(
        "nabla_{xi_j} psi_i = -xi_j psi_i for j != i",
        all(ok(j, psi[i], Fraction(-1))
            for i in (1, 2, 3) for j in (1, 2, 3) if j != i)))
    checks.append(KillingCheck(
        "spin connection is the canonical lift ([Omega, rho(Z)] = rho(nabla Z))",
        _leibniz_compatible(lc, rep, nabla)))
    return checks


def _leibniz_compatible(conn: Connection, rep, nabla) -> bool:
    for x in range(1, 8):
        om = nabla[x]
        for z in range(1, 8):
            comm = sp.mat_add(sp.matmul(om, rep.gens[z - 1]),
                              sp.mat_scale(sp.matmul(rep.gens[z - 1], om), -1))
            target = tuple(tuple(sp.GQ(0) for _ in range(rep.dim))
                           for _ in range(rep.dim))
            for w in range(1, 8):
                c = conn.L[x][w - 1][z - 1]
                if c:
                    target = sp.mat_add(target,
                                        sp.mat_scale(rep.gens[w - 1], c))
            if comm != target:
                return False
    return True


# ---------------------------------------------------------------------------
# the end-to-end theorem check
# ---------------------------------------------------------------------------

@dataclass
class TheoremReport:
    status: str
    instanton_zero: bool
    flat_parallel: bool
    bianchi_residual: Form
    torsion_classes_ok: bool
    notes: str


def theorem1_end_to_end(alphap: Fraction = Fraction(1, 12)) -> TheoremReport:
    """Exact-solution check from first principles at (alpha, delta) = (1, 0).

    (i) both gauge curvatures wedge the coassociative form to zero,
    (ii) dT - (a'/4)(tr R^{-b} ^ R^{-b} - tr R^0 ^ R^0) = 0 exactly,
    (iii) the torsion classes of the associative form take the stated values.
    The default a' = 1/12 satisfies 12 a' alpha^2 = 1; any other value must
    yield a nonzero residual.
    """
    model = heisenberg_model()
    cf = model.coframe
    frame = sp1_frame_forms(cf)
    phi = cf.e(1, 2, 3)
    for i in VERT:
        phi = phi + (frame["eta"][i] ^ frame["PhiH"][i])
    psi = phi.star()
    torsion = canonical_torsion_form(model)

    arr0 = curvature_fp(canonical_connection(model))
    arr4 = curvature_fp(connection_lambda(model, Fraction(4)))  # lam = -beta
    flat = not arr4
    ob0 = curvature_wedge_psi(arr0, psi)
    ob4 = curvature_wedge_psi(arr4, psi)
    instanton_zero = not ob0 and not ob4

    dT = d_form(model, torsion)
    tr4 = trace_wedge(arr4, arr4, cf)
    tr0 = trace_wedge(arr0, arr0, cf)
    residual = dT - Fraction(alphap, 4) * (tr4 - tr0)

    from .structures import torsion_classes
    tc = torsion_classes(phi, psi, d_form(model, phi), d_form(model, psi))
    table = cf.table
    tau_ok = (tc.tau0 == table.rat(Fraction(24, 7))
              and tc.tau1.is_zero and tc.tau2.is_zero)

    ok = instanton_zero and flat and residual.is_zero and tau_ok
    return TheoremReport(
        "pass" if ok else "fail",
        instanton_zero, flat, residual, tau_ok,
        f"alphap = {alphap}; residual "
        f"{'vanishes' if residual.is_zero else 'nonzero: ' + residual.text()}")
