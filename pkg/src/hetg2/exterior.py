"""Exterior algebra on a fixed orthonormal coframe with Scalar coefficients.

The metric is the identity in this frame, the volume form is e^{1...n} and
vectors are identified with one-forms index-by-index.  Forms store only
strictly increasing multi-indices; all antisymmetry signs are absorbed into
the coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .scalar import AlgebraError, Scalar, SymbolTable


class DegreeError(AlgebraError):
    pass


class Coframe:
    def __init__(self, table: SymbolTable, dim: int = 7):
        self.table = table
        self.dim = dim
        self.indices = tuple(range(1, dim + 1))

    def zero(self) -> "Form":
        return Form(self, {})

    def one(self) -> "Form":
        return Form(self, {(): self.table.one()})

    def e(self, *idx: int) -> "Form":
        """Basis form e^{i1...ik} for strictly increasing indices."""
        if any(not 1 <= i <= self.dim for i in idx):
            raise AlgebraError(f"index out of range: {idx}")
        if len(set(idx)) != len(idx) or tuple(sorted(idx)) != tuple(idx):
            raise AlgebraError("basis indices must be strictly increasing")
        return Form(self, {tuple(idx): self.table.one()})

    def vol(self) -> "Form":
        return self.e(*self.indices)

    def form(self, terms: Mapping[tuple, Union[Scalar, int, Fraction]]) -> "Form":
        out: dict[tuple, Scalar] = {}
        for idx, c in terms.items():
            if not isinstance(c, Scalar):
                c = self.table.rat(c)
            key, sign = _sort_index(tuple(idx))
            if key is None:
                continue
            cur = out.get(key, self.table.zero()) + (c if sign > 0 else -c)
            if cur.is_zero:
                out.pop(key, None)
            else:
                out[key] = cur
        return Form(self, out)


def _sort_index(idx: tuple) -> tuple[Optional[tuple], int]:
    """Sort a multi-index, returning (sorted tuple, permutation sign)."""
    if len(set(idx)) != len(idx):
        return None, 0
    lst = list(idx)
    sign = 1
    for i in range(1, len(lst)):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
    return tuple(lst), sign


def _merge(a: tuple, b: tuple) -> tuple[Optional[tuple], int]:
    """Concatenate and sort two increasing multi-indices with sign."""
    if set(a) & set(b):
        return None, 0
    out = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            sign *= (-1) ** (len(a) - i)
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), sign


class Form:
    """Exterior form; possibly inhomogeneous."""

    __slots__ = ("coframe", "terms")

    def __init__(self, coframe: Coframe, terms: Mapping[tuple, Scalar]):
        self.coframe = coframe
        self.terms = {k: v for k, v in terms.items() if not v.is_zero}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> Optional[int]:
        """Degree of a homogeneous form, None for the zero form."""
        degs = {len(k) for k in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise DegreeError(f"mixed-degree form: degrees {sorted(degs)}")
        return degs.pop()

    def homogeneous_part(self, k: int) -> "Form":
        return Form(self.coframe, {i: c for i, c in self.terms.items()
                                   if len(i) == k})

    def coefficient(self, idx: tuple) -> Scalar:
        key, sign = _sort_index(tuple(idx))
        if key is None or key not in self.terms:
            return self.coframe.table.zero()
        c = self.terms[key]
        return c if sign > 0 else -c

    # -- algebra -------------------------------------------------------------
    def _check(self, other: "Form"):
        if other.coframe is not self.coframe:
            raise AlgebraError("forms over different coframes")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, self.coframe.table.zero()) + v
            if s.is_zero:
                out.pop(k, None)
            else:
                out[k] = s
        return Form(self.coframe, out)

    def __neg__(self) -> "Form":
        return Form(self.coframe, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, c) -> "Form":
        if not isinstance(c, Scalar):
            c = self.coframe.table.rat(c)
        return Form(self.coframe, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c) -> "Form":
        if isinstance(c, Scalar):
            return Form(self.coframe,
                        {k: v * c.inverse() for k, v in self.terms.items()})
        return Form(self.coframe,
                    {k: v / Fraction(c) for k, v in self.terms.items()})

    def wedge(self, other: "Form") -> "Form":
        self._check(other)
        table = self.coframe.table
        out: dict[tuple, Scalar] = {}
        for i1, c1 in self.terms.items():
            for i2, c2 in other.terms.items():
                key, sign = _merge(i1, i2)
                if key is None or len(key) > self.coframe.dim:
                    continue
                c = c1 * c2
                if sign < 0:
                    c = -c
                s = out.get(key, table.zero()) + c
                if s.is_zero:
                    out.pop(key, None)
                else:
                    out[key] = s
        return Form(self.coframe, out)

    __xor__ = wedge

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.coframe is other.coframe and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.coframe), frozenset(self.terms)))

    # -- metric operations -----------------------------------------------------
    def star(self) -> "Form":
        """Hodge star for the identity metric and volume e^{1...n}."""
        self.degree()  # raises on mixed degree
        cf = self.coframe
        allidx = cf.indices
        out: dict[tuple, Scalar] = {}
        for idx, c in self.terms.items():
            comp = tuple(i for i in allidx if i not in idx)
            _, sign = _sort_index(idx + comp)
            out[comp] = c if sign > 0 else -c
        return Form(cf, out)

    def inner(self, other: "Form") -> Scalar:
        """Orthonormal-frame inner product (multi-index basis orthonormal)."""
        self._check(other)
        d1, d2 = self.degree(), other.degree()
        if d1 is not None and d2 is not None and d1 != d2:
            raise DegreeError(f"inner product of degrees {d1} and {d2}")
        acc = self.coframe.table.zero()
        for idx, c in self.terms.items():
            o = other.terms.get(idx)
            if o is not None:
                acc = acc + c * o
        return acc

    def norm_sq(self) -> Scalar:
        acc = self.coframe.table.zero()
        for c in self.terms.values():
            acc = acc + c * c
        return acc

    def contract(self, v: Union[int, "Form"]) -> "Form":
        """Interior product with a frame vector (index) or a one-form."""
        cf = self.coframe
        if isinstance(v, Form):
            if v.degree() not in (None, 1):
                raise DegreeError("contraction vector must be a one-form")
            acc = cf.zero()
            for (i,), c in v.terms.items():
                acc = acc + c * self.contract(i)
            return acc
        out: dict[tuple, Scalar] = {}
        for idx, c in self.terms.items():
            if v not in idx:
                continue
            pos = idx.index(v)
            key = idx[:pos] + idx[pos + 1:]
            cc = c if pos % 2 == 0 else -c
            s = out.get(key, cf.table.zero()) + cc
            if s.is_zero:
                out.pop(key, None)
            else:
                out[key] = s
        return Form(cf, out)

    # -- rendering ---------------------------------------------------------------
    def text(self) -> str:
        """Canonical dump: terms sorted by degree then multi-index."""
        if self.is_zero:
            return "0"
        keys = sorted(self.terms, key=lambda k: (len(k), k))
        return "; ".join(f"{self.terms[k]} : e^{{{''.join(map(str, k))}}}"
                         if k else f"{self.terms[k]} : 1" for k in keys)

    def __str__(self) -> str:
        return self.text()

    __repr__ = __str__


def contract_biform(beta: Form, omega: Form) -> Form:
    """Contraction of a 2-form into omega: sum beta_{mu<nu} e_mu-,(e_nu-,omega)."""
    cf = omega.coframe
    acc = cf.zero()
    for (m, n), c in beta.terms.items():
        acc = acc + c * omega.contract(n).contract(m)
    return acc


def basis_multi_indices(dim: int, k: int) -> list[tuple]:
    from itertools import combinations
    return [tuple(c) for c in combinations(range(1, dim + 1), k)]


def form_to_vector(f: Form, basis: Iterable[tuple]) -> list[Scalar]:
    return [f.terms.get(idx, f.coframe.table.zero()) for idx in basis]
