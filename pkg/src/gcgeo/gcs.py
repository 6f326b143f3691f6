"""Generalized complex structures at a point.

Validation, the +i eigenbundle, type and canonical spinor extraction, the
spinorial Z-grading, the Poisson block, and the constructive pointwise
decomposition into a complex times a symplectic piece.

Matrices act on column coordinates in the basis (e_1..e_m, e^1..e^m); the
blocks of J are (A, P_beta_map; B_map, -A^T).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalars import GaussRat, ONE, ZERO, IUNIT, HALF, as_gauss
from .forms import MixedForm, check_dim, mukai_coeff, two_form_from_map
from .clifford import GenVector, SoElement
from .isotropics import MaxIsotropic, canonical_form, pure_spinor_line, max_isotropic_from_spinor
from . import linalg


class InvalidStructure(ValueError):
    pass


@dataclass(frozen=True)
class GCStructure:
    """A validated orthogonal complex structure on (V + V*)."""

    dim: int  # m = 2n
    j: tuple

    @property
    def half_dim(self) -> int:
        return self.dim // 2

    def matrix(self):
        return [list(r) for r in self.j]

    def is_constant(self) -> bool:
        return all(not hasattr(x, "terms") or x.is_const for r in self.j for x in r)

    def eval_at(self, point: dict) -> "GCStructure":
        return GCStructure(self.dim, tuple(
            tuple(x.eval(point) if hasattr(x, "eval") else x for x in row)
            for row in self.j
        ))

    def blocks(self) -> SoElement:
        m = self.dim
        a = [[self.j[i][jj] for jj in range(m)] for i in range(m)]
        beta = [[self.j[i][m + jj] for jj in range(m)] for i in range(m)]
        b = [[self.j[m + i][jj] for jj in range(m)] for i in range(m)]
        return SoElement(m, a=a, b_map=b, beta_map=beta)

    def apply(self, v: GenVector) -> GenVector:
        return GenVector.from_coords(linalg.mat_vec(self.matrix(), v.coords()))


def _pairing_gram(m):
    g = linalg.zeros(2 * m, 2 * m)
    for i in range(m):
        g[i][m + i] = ONE
        g[m + i][i] = ONE
    return g


def validate_gc(j, dim: int | None = None) -> GCStructure:
    """Check J^2 = -1 and orthogonality, with a diagnostic naming the failure.

    Polynomial entries are checked as exact polynomial identities.
    """
    side = len(j)
    if side % 2 or any(len(r) != side for r in j):
        raise InvalidStructure("J must be a square matrix of even side")
    m = side // 2
    check_dim(m)
    j = [list(r) for r in j]
    j2 = linalg.mat_mul(j, j)
    for i in range(side):
        for k in range(side):
            want = -ONE if i == k else ZERO
            if j2[i][k] != want:
                raise InvalidStructure(
                    f"J^2 != -1: entry ({i},{k}) is {j2[i][k]!r}"
                )
    g = _pairing_gram(m)
    jt = linalg.transpose(j)
    gg = linalg.mat_mul(jt, linalg.mat_mul(g, j))
    for i in range(side):
        for k in range(side):
            if gg[i][k] != g[i][k]:
                raise InvalidStructure(
                    f"J is not orthogonal: <Je_{i+1}, Je_{k+1}> differs from <e_{i+1}, e_{k+1}>"
                )
    for i in range(m):
        for k in range(m):
            if j[i][m + k] != -j[k][m + i]:
                raise InvalidStructure("upper-right block is not antisymmetric")
    return GCStructure(m, tuple(tuple(r) for r in j))


def validate_gc_field(j, samples=()) -> GCStructure:
    """Validate a polynomial structure; identities hold as polynomials.

    Optional sample points are checked as well, mainly to produce pointwise
    counterexample locations in reports.
    """
    s = validate_gc(j)
    for p in samples:
        validate_gc(linalg.eval_matrix(s.matrix(), p))
    return s


# ---------------------------------------------------------------------------
# standard structures
# ---------------------------------------------------------------------------

def j_symplectic(omega_map) -> GCStructure:
    """[[0, -w^{-1}], [w, 0]] for an invertible antisymmetric shear map."""
    m = len(omega_map)
    winv = linalg.inverse(omega_map)
    j = linalg.zeros(2 * m, 2 * m)
    for i in range(m):
        for k in range(m):
            j[i][m + k] = -winv[i][k]
            j[m + i][k] = omega_map[i][k]
    return validate_gc(j)


def j_complex(jmat) -> GCStructure:
    """[[-J, 0], [0, J^T]] for an endomorphism with J^2 = -1."""
    m = len(jmat)
    j = linalg.zeros(2 * m, 2 * m)
    for i in range(m):
        for k in range(m):
            j[i][k] = -jmat[i][k]
            j[m + i][m + k] = jmat[k][i]
    return validate_gc(j)


def direct_sum(s1: GCStructure, s2: GCStructure) -> GCStructure:
    m1, m2 = s1.dim, s2.dim
    m = m1 + m2
    j = linalg.zeros(2 * m, 2 * m)

    def slot(orig, which):
        # map an index of the 2m_i coordinate space into the joint one
        if which == 0:
            return orig if orig < m1 else m + (orig - m1)
        return m1 + orig if orig < m2 else m + m1 + (orig - m2)

    for which, s in ((0, s1), (1, s2)):
        mm = s.dim
        for i in range(2 * mm):
            for k in range(2 * mm):
                c = s.j[i][k]
                if c:
                    j[slot(i, which)][slot(k, which)] = c
    return validate_gc(j)


def standard_complex_endo(n: int):
    """J on R^{2n} pairing (x_{2j-1}, x_{2j}) as z_j: e_{2j-1} -> e_{2j}."""
    m = 2 * n
    jm = linalg.zeros(m, m)
    for k in range(n):
        jm[2 * k + 1][2 * k] = ONE
        jm[2 * k][2 * k + 1] = -ONE
    return jm


def standard_symplectic_map(n: int):
    """Shear map of dx1^dx2 + dx3^dx4 + ... on R^{2n}."""
    m = 2 * n
    w = linalg.zeros(m, m)
    for k in range(n):
        w[2 * k + 1][2 * k] = ONE
        w[2 * k][2 * k + 1] = -ONE
    return w


def quaternion_triple():
    """Left-multiplication matrices I, J, K on R^4 = H."""
    i = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
    j = [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]]
    conv = lambda mat: [[GaussRat(x) for x in row] for row in mat]
    i, j = conv(i), conv(j)
    k = linalg.mat_mul(i, j)
    return i, j, k


def hyperkahler_interpolation(a, b) -> GCStructure:
    """a*J_I + b*J_{omega_J} on flat R^4, for a rational circle point."""
    a, b = as_gauss(a), as_gauss(b)
    if a * a + b * b != ONE:
        raise InvalidStructure("(a, b) must satisfy a^2 + b^2 = 1 exactly")
    i_mat, j_mat, _ = quaternion_triple()
    ji = j_complex(i_mat)
    jw = j_symplectic(j_mat)  # omega_J has shear map equal to L_j
    m = 4
    j = [
        [a * ji.j[r][c] + b * jw.j[r][c] for c in range(2 * m)]
        for r in range(2 * m)
    ]
    return validate_gc(j)


# ---------------------------------------------------------------------------
# eigenbundle, type, spinor
# ---------------------------------------------------------------------------

def eigenbundle(s: GCStructure) -> MaxIsotropic:
    """The +i eigenbundle as a maximal isotropic over the gaussian rationals."""
    m = s.dim
    a = [
        [as_gauss(s.j[i][k]) - (IUNIT if i == k else ZERO) for k in range(2 * m)]
        for i in range(2 * m)
    ]
    ker = linalg.kernel(a)
    if len(ker) != m:
        raise InvalidStructure(f"+i eigenspace has dimension {len(ker)}, expected {m}")
    lft = canonical_form([GenVector.from_coords(v) for v in ker], m)
    if lft.intersection_dim(lft.conj()) != 0:
        raise InvalidStructure("eigenbundle meets its conjugate")
    return lft


def gc_type(s: GCStructure) -> int:
    """Half the real dimension of T* cap J(T*)."""
    m = s.dim
    tstar = [[ONE if c == m + i else ZERO for c in range(2 * m)] for i in range(m)]
    jtstar = [
        [as_gauss(s.j[r][m + i]) for r in range(2 * m)] for i in range(m)
    ]
    jtstar = [list(col) for col in jtstar]
    joint = linalg.rank(tstar + jtstar)
    inter = 2 * m - joint
    if inter % 2:
        raise InvalidStructure("T* cap J T* has odd dimension")
    return inter // 2


def gc_from_pure_spinor(phi: MixedForm) -> GCStructure:
    """The structure whose +i eigenbundle is the null space of phi."""
    lft = max_isotropic_from_spinor(phi)
    m = phi.dim
    if lft.intersection_dim(lft.conj()) != 0:
        raise InvalidStructure("null space meets its conjugate; spinor not of complex type")
    if not mukai_coeff(phi, phi.conj()):
        raise InvalidStructure("degenerate spinor: (phi, conj phi) = 0")
    cols = [v.coords() for v in lft.basis] + [v.conj().coords() for v in lft.basis]
    u = linalg.transpose(cols)
    d = [
        [
            (IUNIT if i == k and i < m else (-IUNIT if i == k else ZERO))
            for k in range(2 * m)
        ]
        for i in range(2 * m)
    ]
    j = linalg.mat_mul(u, linalg.mat_mul(d, linalg.inverse(u)))
    for row in j:
        for x in row:
            if x.im != 0:
                raise InvalidStructure("reconstructed J is not real")
    return validate_gc(j)


@dataclass(frozen=True)
class CanonicalSpinorData:
    """Generator = exp(B + i omega) ^ Omega with Omega decomposable of degree k."""

    k: int
    omega_k: MixedForm  # the decomposable lowest piece
    b2: MixedForm  # real 2-form
    om2: MixedForm  # real 2-form
    a2: MixedForm  # b2 + i om2, the solved exponent
    generator: MixedForm
    delta_basis: tuple  # real basis of the symplectic distribution
    n_complement: tuple  # real coordinate indices spanning the transverse N
    n10: tuple  # complex basis of N_{1,0}


def _realify(vectors):
    rows = []
    for v in vectors:
        re = [GaussRat(c.re) for c in v]
        im = [GaussRat(c.im) for c in v]
        if any(re):
            rows.append(re)
        if any(im):
            rows.append(im)
    basis = linalg.row_space_basis(rows)
    return basis


def _adapted_splitting(omega_k: MixedForm):
    """Delta = ker(Omega ^ conj Omega), a real complement N, and N_{1,0}."""
    m = omega_k.dim
    oo = omega_k.wedge(omega_k.conj())
    cols = [
        GenVector.basis_vector(m, i).act(oo) for i in range(m)
    ]
    masks = sorted(set().union(*[set(c.terms) for c in cols]) if any(cols) else set())
    mat = [[as_gauss(c.coeff(mask)) for c in cols] for mask in masks]
    ker = linalg.kernel(mat) if mat else linalg.identity(m)
    delta_rows = _realify(ker)
    if len(delta_rows) != len(ker):
        raise InvalidStructure("symplectic distribution is not conjugation stable")
    if delta_rows:
        _, piv = linalg.rref([list(r) for r in delta_rows])
    else:
        piv = []
    comp = [c for c in range(m) if c not in piv]
    # N_{1,0}: vectors of span(comp) x C annihilating conj(Omega)... by the
    # convention Omega spans det N*_{1,0}, the (0,1) vectors kill Omega.
    oc = omega_k
    n_cols = [GenVector.basis_vector(m, c).act(oc) for c in comp]
    n_masks = sorted(set().union(*[set(c.terms) for c in n_cols]) if any(n_cols) else set())
    n_mat = [[as_gauss(c.coeff(mask)) for c in n_cols] for mask in n_masks]
    n_ker = linalg.kernel(n_mat) if n_mat else []
    n01 = []
    for v in n_ker:
        full = [ZERO] * m
        for coeff, c in zip(v, comp):
            full[c] = coeff
        n01.append(full)
    n10 = [[c.conj() for c in v] for v in n01]
    return delta_rows, comp, n10, n01


def _change_of_basis(delta_rows, n10, n01, m):
    cols = [list(r) for r in delta_rows] + [list(v) for v in n10] + [list(v) for v in n01]
    if len(cols) != m:
        raise InvalidStructure(
            f"adapted basis has {len(cols)} vectors, expected {m}"
        )
    cmat = linalg.transpose(cols)
    return cmat, linalg.inverse(cmat)


def _std_two_form_from_adapted(pairs, cinv, m):
    """Basis 2-forms e'_i ^ e'_j in standard components, per adapted pair."""
    out = []
    cit = linalg.transpose(cinv)
    for (i, j) in pairs:
        mprime = linalg.zeros(m, m)
        mprime[i][j] = ONE
        mprime[j][i] = -ONE
        comp = linalg.mat_mul(cit, linalg.mat_mul(mprime, cinv))
        form = MixedForm(
            m,
            {
                (1 << a) | (1 << b): comp[a][b]
                for a in range(m)
                for b in range(a + 1, m)
                if comp[a][b]
            },
        )
        out.append(form)
    return out


def canonical_spinor(s: GCStructure) -> CanonicalSpinorData:
    """Type and the canonical generator, solved into exp(B + i omega) ^ Omega."""
    lft = eigenbundle(s)
    k = lft.type
    if k != gc_type(s):
        raise InvalidStructure("eigenbundle type disagrees with dim(T* cap JT*)/2")
    phi = pure_spinor_line(lft)
    if not mukai_coeff(phi, phi.conj()):
        raise InvalidStructure("degenerate structure: (phi, conj phi) = 0")
    m = s.dim
    omega_k = phi.degree_part(k)
    delta_rows, comp, n10, n01 = _adapted_splitting(omega_k)
    cmat, cinv = _change_of_basis(delta_rows, n10, n01, m)
    nd = len(delta_rows)
    kk = len(n10)
    pairs = []
    for i in range(nd):
        for j in range(i + 1, nd):
            pairs.append((i, j))  # (2,0,0)
    for i in range(nd):
        for j in range(kk):
            pairs.append((i, nd + kk + j))  # (1,0,1)
    for i in range(kk):
        for j in range(i + 1, kk):
            pairs.append((nd + kk + i, nd + kk + j))  # (0,0,2)
    basis_forms = _std_two_form_from_adapted(pairs, cinv, m)
    target = phi.degree_part(k + 2)
    masks = sorted(
        set(target.terms)
        | set().union(*[set(f.wedge(omega_k).terms) for f in basis_forms])
        if basis_forms
        else set(target.terms)
    )
    mat = []
    rhs = []
    images = [f.wedge(omega_k) for f in basis_forms]
    for mask in masks:
        mat.append([as_gauss(img.coeff(mask)) for img in images])
        rhs.append(as_gauss(target.coeff(mask)))
    sol = linalg.solve(mat, rhs) if mat else []
    if sol is None:
        raise InvalidStructure("canonical exponent solve is inconsistent")
    a2 = MixedForm.zero(m)
    for c, f in zip(sol, basis_forms):
        a2 = a2 + f.scale(c)
    if not a2.exp_wedge().wedge(omega_k) == phi:
        raise InvalidStructure("exp(A) ^ Omega does not reproduce the generator")
    b2 = (a2 + a2.conj()).scale(HALF)
    om2 = (a2 - a2.conj()).scale(GaussRat(0, Fraction(-1, 2)))
    n = s.half_dim
    check = om2
    power = MixedForm.one(m)
    for _ in range(n - k):
        power = power.wedge(om2)
    if not power.wedge(omega_k).wedge(omega_k.conj()):
        raise InvalidStructure("omega^{n-k} ^ Omega ^ conj(Omega) vanishes")
    return CanonicalSpinorData(
        k=k,
        omega_k=omega_k,
        b2=b2,
        om2=om2,
        a2=a2,
        generator=phi,
        delta_basis=tuple(tuple(r) for r in delta_rows),
        n_complement=tuple(comp),
        n10=tuple(tuple(v) for v in n10),
    )


def type_and_canonical_spinor(s: GCStructure):
    data = canonical_spinor(s)
    return data.k, data


# ---------------------------------------------------------------------------
# grading
# ---------------------------------------------------------------------------

def spin_operator(s: GCStructure):
    """phi -> (so-element of J) . phi in the spin representation."""
    so = s.blocks()
    return so.spin_act


def grading_project(s: GCStructure, phi: MixedForm, k: int) -> MixedForm:
    """Projection onto U^k, the ik-eigenspace of J in the spin representation."""
    n = s.half_dim
    if abs(k) > n:
        raise ValueError(f"grading index {k} outside [-{n}, {n}]")
    op = spin_operator(s)
    psi = phi
    denom = ONE
    for j in range(-n, n + 1):
        if j == k:
            continue
        psi = op(psi) - psi.scale(GaussRat(0, j))
        denom = denom * GaussRat(0, k - j)
    return psi.scale(ONE / denom)


def grading_components(s: GCStructure, phi: MixedForm):
    n = s.half_dim
    return {k: grading_project(s, phi, k) for k in range(-n, n + 1)}


# ---------------------------------------------------------------------------
# Poisson block and pointwise Darboux
# ---------------------------------------------------------------------------

def poisson_of(s: GCStructure):
    """Upper-right block: the shear map of the Poisson bivector, plus the bivector."""
    m = s.dim
    pmap = [[s.j[i][m + k] for k in range(m)] for i in range(m)]
    return pmap, two_form_from_map(pmap, "mv")


@dataclass(frozen=True)
class DarbouxData:
    k: int
    btilde: MixedForm
    omega0: MixedForm
    delta_frame: tuple
    n_complement: tuple
    n10_frame: tuple
    generator: MixedForm
    omega_k: MixedForm


def darboux_point(s: GCStructure) -> DarbouxData:
    """Split the canonical exponent into a closed-at-a-point normal form.

    Returns Btilde and omega0 with exp(Btilde + i omega0) ^ Omega spanning the
    same spinor line as the canonical generator, omega0 nondegenerate on the
    symplectic distribution, and Omega inducing the transverse complex
    structure.
    """
    data = canonical_spinor(s)
    m = s.dim
    delta_rows = [list(r) for r in data.delta_basis]
    n10 = [list(v) for v in data.n10]
    n01 = [[c.conj() for c in v] for v in n10]
    cmat, cinv = _change_of_basis(delta_rows, n10, n01, m)
    from .forms import map_from_two_form

    amap = map_from_two_form(data.a2) if data.a2 else linalg.zeros(m, m)
    # component matrix A(e_i, e_j) = amap[j][i]
    acomp_std = [[amap[j][i] for j in range(m)] for i in range(m)]
    aprime = linalg.mat_mul(linalg.transpose(cmat), linalg.mat_mul(acomp_std, cmat))
    nd = len(delta_rows)
    kk = len(n10)

    def block_form(rows_cols):
        sel = linalg.zeros(m, m)
        for (i, j) in rows_cols:
            sel[i][j] = aprime[i][j]
            sel[j][i] = aprime[j][i]
        cit = linalg.transpose(cinv)
        std = linalg.mat_mul(cit, linalg.mat_mul(sel, cinv))
        return MixedForm(
            m,
            {
                (1 << a) | (1 << b): std[a][b]
                for a in range(m)
                for b in range(a + 1, m)
                if std[a][b]
            },
        )

    a200 = block_form([(i, j) for i in range(nd) for j in range(i + 1, nd)])
    a101 = block_form(
        [(i, nd + kk + j) for i in range(nd) for j in range(kk)]
    )
    a002 = block_form(
        [(nd + kk + i, nd + kk + j) for i in range(kk) for j in range(i + 1, kk)]
    )
    btilde = (
        (a200 + a200.conj()).scale(HALF)
        + (a101 + a101.conj())
        + (a002 + a002.conj())
    )
    omega0 = (a200 - a200.conj()).scale(GaussRat(0, Fraction(-1, 2)))
    gen = (btilde + omega0.scale(IUNIT)).exp_wedge().wedge(data.omega_k)
    if not gen.proportional_to(data.generator):
        raise InvalidStructure("darboux normal form lost the spinor line")
    if delta_rows:
        om_map = map_from_two_form(omega0) if omega0 else linalg.zeros(m, m)
        omcomp = [[om_map[j][i] for j in range(m)] for i in range(m)]
        gram = [
            [
                sum(
                    (u[a] * omcomp[a][b] * v[b] for a in range(m) for b in range(m)),
                    ZERO,
                )
                for v in delta_rows
            ]
            for u in delta_rows
        ]
        if linalg.rank(gram) != nd:
            raise InvalidStructure("omega0 is degenerate on the symplectic distribution")
    return DarbouxData(
        k=data.k,
        btilde=btilde,
        omega0=omega0,
        delta_frame=data.delta_basis,
        n_complement=data.n_complement,
        n10_frame=data.n10,
        generator=data.generator,
        omega_k=data.omega_k,
    )
