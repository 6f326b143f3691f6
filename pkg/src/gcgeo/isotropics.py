"""Maximal isotropic subspaces of (V + V*) x C and the pure spinor correspondence.

Everything here is pointwise linear algebra over gaussian rationals: canonical
(Delta, eps) data, spinor lines in both directions, single-block transforms,
and the tensor product of linear Dirac structures.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import ONE, ZERO, as_gauss
from .forms import MixedForm, check_dim
from .clifford import GenVector, BlockTransform
from . import linalg


class NotIsotropic(ValueError):
    pass


class NotPure(ValueError):
    pass


@dataclass(frozen=True)
class MaxIsotropic:
    """Maximal isotropic with canonical data.

    delta_basis spans the projection to V; eps[a][b] is the induced 2-form on
    that basis; type k = dim - dim(delta); parity = k mod 2.  The original
    spanning basis is kept alongside.
    """

    dim: int
    basis: tuple
    delta_basis: tuple
    eps: tuple
    type: int
    parity: int

    def rows(self):
        return [v.coords() for v in self.basis]

    def conj(self) -> "MaxIsotropic":
        return canonical_form([v.conj() for v in self.basis], self.dim)

    def flip(self) -> "MaxIsotropic":
        """Reversal L -> L^T = {X - xi}."""
        return canonical_form([v.flip() for v in self.basis], self.dim)

    def contains(self, v: GenVector) -> bool:
        return linalg.span_contains(self.rows(), [as_gauss(c) for c in v.coords()])

    def equals(self, other: "MaxIsotropic") -> bool:
        return self.dim == other.dim and linalg.span_equal(self.rows(), other.rows())

    def intersection_dim(self, other: "MaxIsotropic") -> int:
        joint = linalg.rank(self.rows() + other.rows())
        return self.dim + other.dim - joint

    def is_real(self) -> bool:
        return self.equals(self.conj())


@dataclass(frozen=True)
class SpinorLine:
    """A pure spinor line, understood projectively."""

    generator: MixedForm

    def __post_init__(self):
        if not self.generator:
            raise NotPure("a spinor line needs a nonzero generator")
        vecs, pure = null_space(self.generator)
        if not pure:
            raise NotPure(
                f"generator has null space of dimension {len(vecs)}, "
                f"expected {self.generator.dim}"
            )

    def equals(self, other: "SpinorLine") -> bool:
        return self.generator.proportional_to(other.generator)

    def annihilator(self) -> "MaxIsotropic":
        return max_isotropic_from_spinor(self.generator)


def spinor_line_of(iso: "MaxIsotropic") -> SpinorLine:
    return SpinorLine(pure_spinor_line(iso))


def canonical_form(vectors, dim: int) -> MaxIsotropic:
    """Validate a spanning set and compute canonical (Delta, eps, type, parity).

    Raises NotIsotropic naming the offending pair, or on rank deficiency.
    """
    check_dim(dim)
    vecs = list(vectors)
    for i, u in enumerate(vecs):
        for j in range(i, len(vecs)):
            p = u.pair(vecs[j])
            if as_gauss(p):
                raise NotIsotropic(
                    f"basis vectors {i} and {j} have inner product {p!r}, not 0"
                )
    rows = [[as_gauss(c) for c in v.coords()] for v in vecs]
    if linalg.rank(rows) != dim:
        raise NotIsotropic(
            f"spanning set has rank {linalg.rank(rows)}, expected {dim}"
        )
    red, piv = linalg.rref(rows)
    lifts = []
    ann = []
    for r, c in zip(red, piv):
        if c < dim:
            lifts.append(GenVector.from_coords(r))
        else:
            ann.append(GenVector.from_coords(r))
    delta = [list(v.vec) for v in lifts]
    k = dim - len(delta)
    eps = [
        [
            sum((a * b for a, b in zip(u.covec, w.vec)), ZERO)
            for w in lifts
        ]
        for u in lifts
    ]
    basis = tuple(lifts + ann)
    return MaxIsotropic(
        dim=dim,
        basis=basis,
        delta_basis=tuple(tuple(d) for d in delta),
        eps=tuple(tuple(row) for row in eps),
        type=k,
        parity=k % 2,
    )


def tangent_space(dim: int) -> MaxIsotropic:
    return canonical_form([GenVector.basis_vector(dim, i) for i in range(dim)], dim)


def cotangent_space(dim: int) -> MaxIsotropic:
    return canonical_form([GenVector.basis_covector(dim, i) for i in range(dim)], dim)


def graph_of_two_form(b_form: MixedForm) -> MaxIsotropic:
    """{X + i_X B}: the B-transform of V."""
    t = BlockTransform.from_two_form(b_form)
    return transform(tangent_space(b_form.dim), t)


def graph_of_bivector(b_mv: MixedForm) -> MaxIsotropic:
    """{i_xi beta + xi}: the beta-transform of V*."""
    t = BlockTransform.from_bivector(b_mv)
    return transform(cotangent_space(b_mv.dim), t)


def transform(iso: MaxIsotropic, t: BlockTransform) -> MaxIsotropic:
    mat = t.orth_matrix()
    return canonical_form(
        [GenVector.from_coords(linalg.mat_vec(mat, v.coords())) for v in iso.basis],
        iso.dim,
    )


def _ann_basis(delta_rows, dim):
    """Covectors annihilating the span of the given V-vectors."""
    if not delta_rows:
        return linalg.identity(dim)
    return linalg.kernel([list(r) for r in delta_rows])


def _extension_of_eps(delta_rows, eps, dim):
    """2-form components matrix B with i*B = eps, zero on a pivot complement."""
    if not delta_rows:
        return linalg.zeros(dim, dim)
    _, piv = linalg.rref([list(r) for r in delta_rows])
    comp = [c for c in range(dim) if c not in piv]
    cols = [list(r) for r in delta_rows] + [
        [ONE if i == c else ZERO for i in range(dim)] for c in comp
    ]
    cmat = linalg.transpose(cols)
    cinv = linalg.inverse(cmat)
    nd = len(delta_rows)
    bprime = linalg.zeros(dim, dim)
    for a in range(nd):
        for b in range(nd):
            bprime[a][b] = eps[a][b]
    cit = linalg.transpose(cinv)
    return linalg.mat_mul(cit, linalg.mat_mul(bprime, cinv))


def pure_spinor_line(iso: MaxIsotropic) -> MixedForm:
    """Generator of the pure spinor line K_L = e^B theta_1 ^ ... ^ theta_k.

    B extends -eps off Delta, vanishing on a pivot-selected complement.
    """
    dim = iso.dim
    theta = _ann_basis(iso.delta_basis, dim)
    neg_eps = [[-x for x in row] for row in iso.eps]
    bcomp = _extension_of_eps(iso.delta_basis, neg_eps, dim)
    bform = MixedForm(
        dim,
        {
            (1 << i) | (1 << j): bcomp[i][j]
            for i in range(dim)
            for j in range(i + 1, dim)
            if bcomp[i][j]
        },
    )
    phi = bform.exp_wedge()
    for th in theta:
        phi = phi.wedge(MixedForm(dim, {1 << i: c for i, c in enumerate(th) if c}))
    return phi


def null_space(phi: MixedForm):
    """All v with v . phi = 0, plus a purity flag.  Exact kernel computation."""
    if not phi:
        raise ValueError("the zero form has no null space")
    if phi.variance != "form":
        raise ValueError("null spaces are defined for forms")
    dim = phi.dim
    nmask = 1 << dim
    cols = []
    for i in range(dim):
        cols.append(GenVector.basis_vector(dim, i).act(phi))
    for i in range(dim):
        cols.append(GenVector.basis_covector(dim, i).act(phi))
    mat = [[as_gauss(col.coeff(mask)) for col in cols] for mask in range(nmask)]
    ker = linalg.kernel(mat)
    vectors = [GenVector.from_coords(v) for v in ker]
    return vectors, len(vectors) == dim


def max_isotropic_from_spinor(phi: MixedForm) -> MaxIsotropic:
    vecs, pure = null_space(phi)
    if not pure:
        raise NotPure(f"null space has dimension {len(vecs)}, expected {phi.dim}")
    return canonical_form(vecs, phi.dim)


def is_pure(phi: MixedForm) -> bool:
    try:
        return null_space(phi)[1]
    except ValueError:
        return False


def graph_over_cotangent(iso: MaxIsotropic):
    """Dual description L(F, gamma) plus a bivector witness.

    Returns (f_basis, gamma, beta_witness) where F = pi_{V*} L, gamma is the
    induced 2-form on F, and exp(beta).det(Ann(L cap V)) spans the same spinor
    line as pure_spinor_line(L).  The witness is one representative of the
    class fixed only modulo directions along L cap V.
    """
    dim = iso.dim
    swapped = canonical_form(
        [GenVector(dim, v.covec, v.vec) for v in iso.basis], dim
    )
    f_basis = swapped.delta_basis
    gamma = swapped.eps
    bcomp = _extension_of_eps(f_basis, [list(r) for r in gamma], dim)
    beta_mv = MixedForm(
        dim,
        {
            (1 << i) | (1 << j): bcomp[i][j]
            for i in range(dim)
            for j in range(i + 1, dim)
            if bcomp[i][j]
        },
        "mv",
    )
    return list(f_basis), [list(r) for r in gamma], beta_mv


def dual_spinor_of(iso: MaxIsotropic) -> MixedForm:
    """exp(beta) . (f_1 ^ ... ^ f_r), the graph_over_cotangent spinor line."""
    f_basis, _, beta_mv = graph_over_cotangent(iso)
    phi = MixedForm.one(iso.dim)
    for f in f_basis:
        phi = phi.wedge(MixedForm(iso.dim, {1 << i: c for i, c in enumerate(f) if c}))
    if beta_mv:
        t = BlockTransform.from_bivector(beta_mv)
        phi = t.spinor(phi)
    return phi


def tensor_product(l1: MaxIsotropic, l2: MaxIsotropic) -> MaxIsotropic:
    """L1 x L2 = {X + xi + eta : X + xi in L1, X + eta in L2}."""
    if l1.dim != l2.dim:
        raise ValueError("dimension mismatch")
    m = l1.dim
    rows1 = l1.rows()
    rows2 = l2.rows()
    n1, n2 = len(rows1), len(rows2)
    constraint = []
    for coord in range(m):
        constraint.append(
            [rows1[i][coord] for i in range(n1)]
            + [-rows2[j][coord] for j in range(n2)]
        )
    ker = linalg.kernel(constraint)
    candidates = []
    for sol in ker:
        c1, c2 = sol[:n1], sol[n1:]
        coords = [ZERO] * (2 * m)
        for ci, row in zip(c1, rows1):
            for t in range(2 * m):
                coords[t] = coords[t] + ci * row[t]
        for cj, row in zip(c2, rows2):
            for t in range(m, 2 * m):
                coords[t] = coords[t] + cj * row[t]
        candidates.append(coords)
    basis_rows = linalg.row_space_basis(candidates)
    if len(basis_rows) != m:
        raise NotIsotropic(
            f"tensor product span has rank {len(basis_rows)}, expected {m}"
        )
    return canonical_form([GenVector.from_coords(r) for r in basis_rows], m)


def transverse(l1: MaxIsotropic, l2: MaxIsotropic) -> bool:
    return l1.intersection_dim(l2) == 0
