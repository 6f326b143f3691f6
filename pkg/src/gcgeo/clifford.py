"""The split-signature Clifford module structure on forms.

GenVector models an element of (V + V*) x C acting on forms by
(X + xi) . phi = i_X phi + xi ^ phi.  SoElement models an element of
so(V + V*) in the block decomposition (endomorphism A, 2-form shear B,
bivector shear beta), with its spin representation; BlockTransform models the
exponentials of single blocks, acting both orthogonally and spinorially.

All matrices in this module are maps acting on column coordinate vectors in
the basis (e_1..e_m, e^1..e^m).  Geometric 2-forms and bivectors convert to
and from shear maps via forms.two_form_from_map / map_from_two_form.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import GaussRat, ONE, ZERO, HALF, sqrt_exact
from .forms import MixedForm, covector_form, two_form_from_map, check_dim
from . import linalg


class GenVector:
    """X + xi with scalar coefficient lists for the V and V* parts."""

    __slots__ = ("dim", "vec", "covec")

    def __init__(self, dim: int, vec, covec):
        check_dim(dim)
        vec = tuple(vec)
        covec = tuple(covec)
        if len(vec) != dim or len(covec) != dim:
            raise ValueError("component length must equal dim")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "vec", vec)
        object.__setattr__(self, "covec", covec)

    def __setattr__(self, *_):
        raise AttributeError("GenVector is immutable")

    @classmethod
    def basis_vector(cls, dim, i, coeff=ONE):
        return cls(dim, [coeff if j == i else ZERO for j in range(dim)], [ZERO] * dim)

    @classmethod
    def basis_covector(cls, dim, i, coeff=ONE):
        return cls(dim, [ZERO] * dim, [coeff if j == i else ZERO for j in range(dim)])

    @classmethod
    def from_coords(cls, coords):
        m = len(coords) // 2
        return cls(m, coords[:m], coords[m:])

    def coords(self):
        return list(self.vec) + list(self.covec)

    def __add__(self, other):
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return GenVector(
            self.dim,
            [a + b for a, b in zip(self.vec, other.vec)],
            [a + b for a, b in zip(self.covec, other.covec)],
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return GenVector(self.dim, [-a for a in self.vec], [-a for a in self.covec])

    def scale(self, c):
        return GenVector(self.dim, [c * a for a in self.vec], [c * a for a in self.covec])

    def flip(self) -> "GenVector":
        """The anti-orthogonal reversal X + xi -> X - xi."""
        return GenVector(self.dim, self.vec, [-a for a in self.covec])

    def conj(self) -> "GenVector":
        return GenVector(self.dim, [a.conj() for a in self.vec], [a.conj() for a in self.covec])

    def pair(self, other):
        """Natural pairing <X+xi, Y+eta> = (xi(Y) + eta(X)) / 2."""
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        acc = None
        for a, b in zip(self.covec, other.vec):
            t = a * b
            acc = t if acc is None else acc + t
        for a, b in zip(other.covec, self.vec):
            t = a * b
            acc = acc + t
        return HALF * acc

    def act(self, phi: MixedForm) -> MixedForm:
        """Clifford action i_X phi + xi ^ phi on a form."""
        if phi.variance != "form":
            raise ValueError("the spin representation acts on forms")
        if phi.dim != self.dim:
            raise ValueError("dimension mismatch")
        out = phi.contract(self.vec)
        if any(self.covec):
            out = out + covector_form(self.dim, self.covec).wedge(phi)
        return out

    def eval_at(self, point: dict) -> "GenVector":
        ev = lambda c: c.eval(point) if hasattr(c, "eval") else c
        return GenVector(self.dim, [ev(c) for c in self.vec], [ev(c) for c in self.covec])

    def is_zero(self) -> bool:
        return not (any(self.vec) or any(self.covec))

    def __eq__(self, other):
        if not isinstance(other, GenVector):
            return NotImplemented
        return self.dim == other.dim and all(
            a == b for a, b in zip(self.coords(), other.coords())
        )

    def __repr__(self):
        bits = []
        for i, c in enumerate(self.vec):
            if c:
                bits.append(f"({c!r})*e_{i+1}")
        for i, c in enumerate(self.covec):
            if c:
                bits.append(f"({c!r})*e{i+1}")
        return " + ".join(bits) if bits else "0"


def pairing_matrix(vectors):
    return [[u.pair(v) for v in vectors] for u in vectors]


def endo_dual_action(a, phi: MixedForm) -> MixedForm:
    """A* phi = sum a[j][i] e^i ^ i_{e_j} phi, the derivation action of End(V)."""
    dim = phi.dim
    acc = MixedForm.zero(dim)
    for j in range(dim):
        contracted = phi.contract([ONE if k == j else ZERO for k in range(dim)])
        if not contracted:
            continue
        for i in range(dim):
            c = a[j][i]
            if c:
                acc = acc + covector_form(dim, [c if k == i else ZERO for k in range(dim)]).wedge(contracted)
    return acc


class SoElement:
    """Block element of so(V + V*): endomorphism a, shear maps b_map, beta_map.

    b_map is the 2-form shear X -> i_X B and beta_map the bivector shear
    xi -> i_xi beta; both are antisymmetric matrices.
    """

    __slots__ = ("dim", "a", "b_map", "beta_map")

    def __init__(self, dim, a=None, b_map=None, beta_map=None):
        check_dim(dim)
        z = linalg.zeros(dim, dim)
        a = a if a is not None else z
        b_map = b_map if b_map is not None else z
        beta_map = beta_map if beta_map is not None else z
        for name, mat in (("b_map", b_map), ("beta_map", beta_map)):
            if not linalg.is_antisymmetric(mat):
                raise ValueError(f"{name} must be antisymmetric")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "a", [list(r) for r in a])
        object.__setattr__(self, "b_map", [list(r) for r in b_map])
        object.__setattr__(self, "beta_map", [list(r) for r in beta_map])

    def __setattr__(self, *_):
        raise AttributeError("SoElement is immutable")

    def so_matrix(self):
        """2m x 2m map [[A, beta], [B, -A^T]] on column coordinates."""
        m = self.dim
        out = linalg.zeros(2 * m, 2 * m)
        for i in range(m):
            for j in range(m):
                out[i][j] = self.a[i][j]
                out[i][m + j] = self.beta_map[i][j]
                out[m + i][j] = self.b_map[i][j]
                out[m + i][m + j] = -self.a[j][i]
        return out

    def apply(self, v: GenVector) -> GenVector:
        return GenVector.from_coords(linalg.mat_vec(self.so_matrix(), v.coords()))

    def b_form(self) -> MixedForm:
        return two_form_from_map(self.b_map, "form")

    def beta_mv(self) -> MixedForm:
        return two_form_from_map(self.beta_map, "mv")

    def spin_act(self, phi: MixedForm) -> MixedForm:
        """Infinitesimal spin action: -B^phi + i_beta phi - A*phi + (trA/2) phi."""
        acc = MixedForm.zero(self.dim)
        bf = self.b_form()
        if bf:
            acc = acc - bf.wedge(phi)
        bm = self.beta_mv()
        if bm:
            acc = acc + phi.contract_mv(bm)
        if any(any(row) for row in self.a):
            acc = acc - endo_dual_action(self.a, phi)
            tr = self.a[0][0]
            for i in range(1, self.dim):
                tr = tr + self.a[i][i]
            acc = acc + phi.scale(HALF * tr)
        return acc


def gl_pullback_inverse(g, phi: MixedForm) -> MixedForm:
    """(g*)^{-1} phi: the pullback of a form along g^{-1}."""
    dim = phi.dim
    ginv = linalg.inverse(g)
    images = [covector_form(dim, ginv[i]) for i in range(dim)]
    acc = MixedForm.zero(dim)
    for mask, c in phi.terms.items():
        blade = MixedForm.one(dim)
        for i in range(dim):
            if mask & (1 << i):
                blade = blade.wedge(images[i])
        acc = acc + blade.scale(c)
    return acc


class BlockTransform:
    """exp of a single so-block, or a GL(V) element, with both actions.

    kind 'B': payload is the antisymmetric shear map of a 2-form.
    kind 'beta': payload is the antisymmetric shear map of a bivector.
    kind 'gl': payload is an invertible matrix g itself (not its logarithm).
    """

    __slots__ = ("dim", "kind", "mat")

    def __init__(self, dim, kind, mat):
        check_dim(dim)
        if kind not in ("B", "beta", "gl"):
            raise ValueError(f"unknown transform kind {kind!r}")
        if kind in ("B", "beta") and not linalg.is_antisymmetric(mat):
            raise ValueError("shear map must be antisymmetric")
        if kind == "gl" and not linalg.det(mat):
            raise ValueError("gl transform must be invertible")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "mat", [list(r) for r in mat])

    def __setattr__(self, *_):
        raise AttributeError("BlockTransform is immutable")

    @classmethod
    def from_two_form(cls, f: MixedForm):
        from .forms import map_from_two_form

        return cls(f.dim, "B", map_from_two_form(f))

    @classmethod
    def from_bivector(cls, b: MixedForm):
        from .forms import map_from_two_form

        return cls(b.dim, "beta", map_from_two_form(b))

    def orth_matrix(self):
        m = self.dim
        out = linalg.identity(2 * m)
        if self.kind == "B":
            for i in range(m):
                for j in range(m):
                    out[m + i][j] = self.mat[i][j]
        elif self.kind == "beta":
            for i in range(m):
                for j in range(m):
                    out[i][m + j] = self.mat[i][j]
        else:
            ginv_t = linalg.transpose(linalg.inverse(self.mat))
            for i in range(m):
                for j in range(m):
                    out[i][j] = self.mat[i][j]
                    out[m + i][m + j] = ginv_t[i][j]
        return out

    def apply(self, v: GenVector) -> GenVector:
        return GenVector.from_coords(linalg.mat_vec(self.orth_matrix(), v.coords()))

    def spinor(self, phi: MixedForm) -> MixedForm:
        """Spin-lift action: e^{-B}^phi, e^{i_beta}phi, or sqrt(det g)(g*)^{-1}phi."""
        if self.kind == "B":
            return (-two_form_from_map(self.mat, "form")).exp_wedge().wedge(phi)
        if self.kind == "beta":
            b = two_form_from_map(self.mat, "mv")
            acc = phi
            cur = phi
            k = 1
            while True:
                cur = cur.contract_mv(b).scale(GaussRat(Fraction(1, k)))
                if not cur:
                    return acc
                acc = acc + cur
                k += 1
        root = sqrt_exact(linalg.det(self.mat))
        return gl_pullback_inverse(self.mat, phi).scale(root)

    def spinor_untwisted(self, phi: MixedForm) -> MixedForm:
        """GL action without the half-density factor."""
        if self.kind != "gl":
            raise ValueError("untwisted action only applies to gl transforms")
        return gl_pullback_inverse(self.mat, phi)
