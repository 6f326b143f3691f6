"""Exterior algebra on a bitmask basis: mixed forms and multivectors.

A MixedForm is a sparse map from basis bitmasks to scalar coefficients
(GaussRat or Poly).  Bit i set means generator e^i (forms) or e_i
(multivectors) is present; blades are stored with indices ascending, and the
sign of a product is the parity of the merging permutation.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import GaussRat, ONE, ZERO

MAX_DIM = 12


class CapacityError(ValueError):
    """Dimension exceeds the supported bitmask width."""


def check_dim(m: int):
    if not (0 < m <= MAX_DIM):
        raise CapacityError(f"dimension {m} outside supported range 1..{MAX_DIM}")


def merge_sign(a: int, b: int) -> int:
    """Parity of the permutation sorting blade a followed by blade b."""
    s = 0
    rem = a
    while rem:
        low = rem & -rem
        i = low.bit_length() - 1
        s += (b & (low - 1)).bit_count()
        rem ^= low
    return -1 if s & 1 else 1


def contract_sign(mask: int, i: int) -> int:
    """Sign of removing generator i from an ascending blade."""
    return -1 if (mask & ((1 << i) - 1)).bit_count() & 1 else 1


class MixedForm:
    """Element of the full exterior algebra, of form or multivector variance."""

    __slots__ = ("dim", "variance", "terms")

    def __init__(self, dim: int, terms: dict, variance: str = "form"):
        check_dim(dim)
        if variance not in ("form", "mv"):
            raise ValueError(f"unknown variance {variance!r}")
        full = 1 << dim
        clean = {}
        for mask, c in terms.items():
            if not (0 <= mask < full):
                raise ValueError(f"bitmask {mask} out of range for dim {dim}")
            if c:
                clean[mask] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "variance", variance)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *_):
        raise AttributeError("MixedForm is immutable")

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, dim, variance="form"):
        return cls(dim, {}, variance)

    @classmethod
    def one(cls, dim, variance="form"):
        return cls(dim, {0: ONE}, variance)

    @classmethod
    def blade(cls, dim, indices, coeff=ONE, variance="form"):
        """Blade from 0-based generator indices; sign from sorting them."""
        mask = 0
        seen = []
        for i in indices:
            if not 0 <= i < dim:
                raise ValueError(f"generator index {i} out of range")
            if mask & (1 << i):
                return cls.zero(dim, variance)
            seen.append(i)
            mask |= 1 << i
        inv = sum(
            1
            for a in range(len(seen))
            for b in range(a + 1, len(seen))
            if seen[a] > seen[b]
        )
        c = coeff if not isinstance(coeff, (int, Fraction)) else GaussRat(coeff)
        if inv & 1:
            c = -c
        return cls(dim, {mask: c}, variance)

    @classmethod
    def top(cls, dim, coeff=ONE, variance="form"):
        return cls(dim, {(1 << dim) - 1: coeff}, variance)

    # -- basic algebra -----------------------------------------------------
    def _check_peer(self, other):
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        if self.variance != other.variance:
            raise ValueError("variance mismatch: cannot combine form and multivector")

    def __add__(self, other):
        self._check_peer(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MixedForm(self.dim, out, self.variance)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return MixedForm(self.dim, {m: -c for m, c in self.terms.items()}, self.variance)

    def scale(self, c):
        if not c:
            return MixedForm.zero(self.dim, self.variance)
        return MixedForm(self.dim, {m: c * x for m, x in self.terms.items()}, self.variance)

    def wedge(self, other) -> "MixedForm":
        self._check_peer(other)
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue
                sgn = merge_sign(ma, mb)
                m = ma | mb
                t = ca * cb
                if sgn < 0:
                    t = -t
                s = out.get(m, ZERO) + t
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return MixedForm(self.dim, out, self.variance)

    # -- grading ------------------------------------------------------------
    def degree_part(self, k: int) -> "MixedForm":
        return MixedForm(
            self.dim,
            {m: c for m, c in self.terms.items() if m.bit_count() == k},
            self.variance,
        )

    def degrees(self):
        return sorted({m.bit_count() for m in self.terms})

    def min_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero element has no degree")
        return min(m.bit_count() for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    # -- contraction ----------------------------------------------------------
    def contract(self, coeffs) -> "MixedForm":
        """Interior product with the dual object whose components are `coeffs`.

        For a form this is i_X with X = sum coeffs[i] e_i; for a multivector it
        is contraction by the covector with those components.
        """
        out: dict = {}
        for mask, c in self.terms.items():
            rem = mask
            while rem:
                low = rem & -rem
                i = low.bit_length() - 1
                rem ^= low
                x = coeffs[i]
                if not x:
                    continue
                t = x * c
                if contract_sign(mask, i) < 0:
                    t = -t
                m2 = mask ^ low
                s = out.get(m2, ZERO) + t
                if s:
                    out[m2] = s
                else:
                    out.pop(m2, None)
        return MixedForm(self.dim, out, self.variance)

    def contract_blade(self, blade_mask: int) -> "MixedForm":
        """Iterated interior product by the generators of an ascending blade.

        Matches the convention i_{v1^...^vk} = i_{vk} o ... o i_{v1}: the
        lowest index is contracted first.
        """
        out: dict = {}
        for mask, c in self.terms.items():
            if blade_mask & ~mask:
                continue
            sgn = 1
            cur = mask
            rem = blade_mask
            while rem:
                low = rem & -rem
                i = low.bit_length() - 1
                rem ^= low
                sgn *= contract_sign(cur, i)
                cur ^= low
            t = c if sgn > 0 else -c
            s = out.get(cur, ZERO) + t
            if s:
                out[cur] = s
            else:
                out.pop(cur, None)
        return MixedForm(self.dim, out, self.variance)

    def contract_mv(self, mv: "MixedForm") -> "MixedForm":
        """i_P for a multivector P acting on this form (or dually)."""
        if mv.dim != self.dim:
            raise ValueError("dimension mismatch")
        if mv.variance == self.variance:
            raise ValueError("contraction pairs a form with a multivector")
        acc = MixedForm.zero(self.dim, self.variance)
        for bmask, bc in mv.terms.items():
            acc = acc + self.contract_blade(bmask).scale(bc)
        return acc

    # -- exponentials -----------------------------------------------------------
    def exp_wedge(self) -> "MixedForm":
        """Wedge exponential 1 + a + a^2/2! + ... for even-degree nilpotents."""
        if self.terms and any(m.bit_count() % 2 for m in self.terms):
            raise ValueError("wedge exponential needs even degrees")
        acc = MixedForm.one(self.dim, self.variance)
        cur = MixedForm.one(self.dim, self.variance)
        k = 1
        while True:
            cur = cur.wedge(self).scale(GaussRat(Fraction(1, k)))
            if not cur.terms:
                return acc
            acc = acc + cur
            k += 1

    # -- involutions -------------------------------------------------------------
    def reversal(self) -> "MixedForm":
        """Main antiautomorphism: degree k picks up (-1)^{k(k-1)/2}."""
        out = {}
        for m, c in self.terms.items():
            k = m.bit_count()
            out[m] = -c if (k * (k - 1) // 2) & 1 else c
        return MixedForm(self.dim, out, self.variance)

    def conj(self) -> "MixedForm":
        return MixedForm(self.dim, {m: c.conj() for m, c in self.terms.items()}, self.variance)

    # -- evaluation ----------------------------------------------------------------
    def eval_at(self, point: dict) -> "MixedForm":
        out = {}
        for m, c in self.terms.items():
            v = c.eval(point) if hasattr(c, "eval") else c
            if v:
                out[m] = v
        return MixedForm(self.dim, out, self.variance)

    def map_coeffs(self, f) -> "MixedForm":
        return MixedForm(self.dim, {m: f(c) for m, c in self.terms.items()}, self.variance)

    # -- predicates -------------------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MixedForm):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.variance == other.variance
            and self.terms == other.terms
        )

    def coeff(self, mask: int):
        return self.terms.get(mask, ZERO)

    def proportional_to(self, other: "MixedForm") -> bool:
        """Projective equality of two nonzero elements (exact cross products)."""
        self._check_peer(other)
        if not self.terms or not other.terms:
            return False
        anchor = min(self.terms)
        ca = self.terms[anchor]
        cb = other.terms.get(anchor)
        if cb is None or not cb:
            return False
        for m in set(self.terms) | set(other.terms):
            if self.coeff(m) * cb != other.coeff(m) * ca:
                return False
        return True

    def __repr__(self):
        if not self.terms:
            return "0"
        sym = "e" if self.variance == "form" else "e_"
        bits = []
        for m in sorted(self.terms, key=lambda x: (x.bit_count(), x)):
            idx = "".join(str(i + 1) for i in range(self.dim) if m & (1 << i))
            blade = f"{sym}{idx}" if idx else "1"
            bits.append(f"({self.terms[m]!r})*{blade}")
        return " + ".join(bits)


def mukai_pair(s: MixedForm, t: MixedForm) -> "MixedForm":
    """Mukai pairing [reversal(s) ^ t]_top as a top-degree form."""
    s._check_peer(t)
    top = (1 << s.dim) - 1
    c = s.reversal().wedge(t).coeff(top)
    return MixedForm(s.dim, {top: c}, s.variance)


def mukai_coeff(s: MixedForm, t: MixedForm):
    top = (1 << s.dim) - 1
    return s.reversal().wedge(t).coeff(top)


def covector_form(dim: int, coeffs, variance="form") -> MixedForm:
    return MixedForm(dim, {1 << i: c for i, c in enumerate(coeffs) if c}, variance)


def two_form_from_map(m, variance="form") -> MixedForm:
    """2-form (or bivector) whose induced shear map is the given matrix.

    The map convention is x -> i_x B, so components B(e_i, e_j) = map[j][i].
    """
    dim = len(m)
    terms = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            c = m[j][i]
            if c:
                terms[(1 << i) | (1 << j)] = c
    return MixedForm(dim, terms, variance)


def map_from_two_form(f: MixedForm):
    """Inverse of two_form_from_map."""
    dim = f.dim
    out = [[ZERO for _ in range(dim)] for _ in range(dim)]
    for mask, c in f.terms.items():
        if mask.bit_count() != 2:
            raise ValueError("not a 2-homogeneous element")
        i = (mask & -mask).bit_length() - 1
        j = (mask ^ (mask & -mask)).bit_length() - 1
        out[j][i] = c
        out[i][j] = -c
    return out
