import pytest
from fractions import Fraction

from gcgeo.scalars import GaussRat, Poly, IUNIT, ONE, ZERO
from gcgeo.forms import MixedForm, map_from_two_form, two_form_from_map
from gcgeo.clifford import GenVector
from gcgeo.charts import Chart
from gcgeo.fields import (
    ClosedThreeForm,
    DiracFrame,
    b_transform_section,
    d,
    is_involutive,
)
from gcgeo.gcs import (
    j_complex,
    j_symplectic,
    standard_complex_endo,
    standard_symplectic_map,
    validate_gc,
)
from gcgeo.branes import (
    SubmanifoldData,
    brane_check,
    generalized_tangent,
    pullback_dirac,
    whole_chart,
)
from gcgeo.randgen import Rng
from gcgeo import linalg


CH = Chart.real("x1", "x2", "p1", "p2")
SN = ("x1", "x2")


def plane(params, graphed, chart=CH, f2=None, h=None):
    s_names = tuple(chart.names[i] for i in params)
    zero = Poly.zero(s_names)
    graph = {j: zero for j in graphed}
    return SubmanifoldData(chart, tuple(params), graph, f2, h)


def sy_dxdp():
    # omega = dx1^dp1 + dx2^dp2 in coordinates (x1, x2, p1, p2)
    w = two_form_from_map(linalg.zeros(4, 4))
    form = MixedForm(4, {(1 << 0) | (1 << 2): ONE, (1 << 1) | (1 << 3): ONE})
    return j_symplectic(map_from_two_form(form))


class TestSubmanifoldData:
    def test_partition_enforced(self):
        with pytest.raises(ValueError, match="partition"):
            plane((0, 1), (1, 3))

    def test_trivialization_certificate(self):
        # F with dF != i*H is rejected
        sub_names = ("x1", "x2")
        f2 = MixedForm(2, {0b11: Poly.var(sub_names, "x1")})
        # dF = dx1^(dx1^dx2)... = 0 here; pick F = x1 dx2 as 1-form? F must be
        # a 2-form: use an ambient H whose pullback is nonzero
        h = ClosedThreeForm(CH, MixedForm(4, {0b0111: CH.one()}))
        with pytest.raises(ValueError, match="dF"):
            SubmanifoldData(CH, (0, 1, 2), {3: Poly.zero(("x1", "x2", "p1"))}, None, h)

    def test_pull_form_on_graph(self):
        # S = {p1 = x1^2, p2 = 0}: pull back dp1 -> 2 x1 dx1
        s_names = SN
        x1 = Poly.var(s_names, "x1")
        sub = SubmanifoldData(CH, (0, 1), {2: x1 * x1, 3: Poly.zero(s_names)})
        pulled = sub.pull_form(MixedForm(4, {1 << 2: ONE}))
        assert pulled == MixedForm(2, {1 << 0: GaussRat(2) * x1})

    def test_tangent_and_conormal_annihilate(self):
        s_names = SN
        x1 = Poly.var(s_names, "x1")
        sub = SubmanifoldData(CH, (0, 1), {2: x1 * x1, 3: x1})
        for lift in sub.tangent_lifts():
            for con in sub.conormals():
                val = sum((a * b for a, b in zip(lift, con)), Poly.zero(s_names))
                assert not val


class TestGeneralizedTangent:
    def test_f_zero_gives_ts_plus_conormal(self):
        sub = plane((0, 1), (2, 3))
        tau = generalized_tangent(sub)
        assert len(tau.sections) == 4
        assert tau.sections[0].covec == (Poly.zero(SN),) * 4

    def test_defining_relation_with_f(self):
        # i* eta = i_X F for the tangent lifts
        s_names = SN
        f2 = MixedForm(2, {0b11: Poly.var(s_names, "x1")})
        sub = plane((0, 1), (2, 3), f2=f2)
        tau = generalized_tangent(sub)
        for a in range(2):
            u = tau.sections[a]
            eta = MixedForm(4, {1 << i: c for i, c in enumerate(u.covec) if c})
            pulled = sub.pull_form(eta)
            unit = [Poly.const(s_names, ONE) if b == a else Poly.zero(s_names) for b in range(2)]
            assert pulled == sub.f2.contract(unit)

    def test_whole_chart_with_closed_f_is_graph(self):
        f_amb = MixedForm(4, {0b0011: ONE})
        sub = whole_chart(CH, f_amb)
        tau = generalized_tangent(sub)
        for i, u in enumerate(tau.sections):
            want = b_transform_section(CH, CH.lift_form(f_amb), CH.coordinate_vector(i))
            assert (u - want).is_zero()


class TestPullback:
    def test_identity_pullback(self):
        sub = whole_chart(CH)
        secs = tuple(CH.coordinate_vector(i) for i in range(4))
        frame = DiracFrame(CH, secs)
        res = pullback_dirac(frame, sub)
        assert len(res.frame.sections) == 4
        assert all(not v for v in res.involutivity.values())

    def test_cotangent_pullback(self):
        sub = plane((0, 1), (2, 3))
        secs = tuple(CH.coordinate_covector(i) for i in range(4))
        frame = DiracFrame(CH, secs)
        res = pullback_dirac(frame, sub)
        # T*M pulls back to T*S
        rows = [[c for c in u.coords()] for u in res.frame.sections]
        s_chart = sub.chart_s()
        p = s_chart.point(0, 0)
        rows_p = [[x.eval(p) for x in row] for row in rows]
        want = [[ZERO, ZERO, ONE, ZERO], [ZERO, ZERO, ZERO, ONE]]
        assert linalg.span_equal(rows_p, want)

    def test_graph_pullback_is_pullback_graph(self):
        rng = Rng(3)
        for _ in range(5):
            b_amb = rng.poly_two_form(CH, 1)
            secs = tuple(
                b_transform_section(CH, b_amb, CH.coordinate_vector(i)) for i in range(4)
            )
            frame = DiracFrame(CH, secs)
            s_names = SN
            x1 = Poly.var(s_names, "x1")
            sub = SubmanifoldData(CH, (0, 1), {2: x1 * x1, 3: Poly.zero(s_names)})
            res = pullback_dirac(frame, sub)
            ib = sub.pull_form(b_amb)
            s_chart = sub.chart_s()
            want = tuple(
                b_transform_section(s_chart, ib, s_chart.coordinate_vector(i))
                for i in range(2)
            )
            rows_got = [u.coords() for u in res.frame.sections]
            rows_want = [u.coords() for u in want]
            for p in (s_chart.point(0, 0), s_chart.point(1, 1), s_chart.point(2, -1)):
                gp = [[c.eval(p) for c in row] for row in rows_got]
                wp = [[c.eval(p) for c in row] for row in rows_want]
                assert linalg.span_equal(gp, wp)

    def test_rank_jump_reported(self):
        # L whose intersection with K-perp jumps rank: vec part x1 d/dp1
        s_names = SN
        x1_amb = CH.var("x1")
        sec1 = GenVector(
            4,
            [CH.zero(), CH.zero(), x1_amb, CH.zero()],
            [CH.zero()] * 4,
        )
        # complete to a maximal isotropic: add dp-ish covectors and a tangent
        sec2 = CH.coordinate_vector(0)
        sec3 = CH.coordinate_covector(1)
        sec4 = CH.coordinate_covector(3)
        frame = DiracFrame(CH, (sec1, sec2, sec3, sec4))
        sub = plane((0, 1), (2, 3))
        with pytest.raises(ValueError, match="rank"):
            pullback_dirac(frame, sub, samples=[sub.chart_s().point(0, 0), sub.chart_s().point(1, 0)])


class TestBraneCheck:
    def test_lagrangian_plane_passes(self):
        rep = brane_check(sy_dxdp(), plane((0, 1), (2, 3)))
        assert rep.compatible and rep.lagrangian and rep.coisotropic

    def test_non_lagrangian_plane_fails(self):
        # span(e1, e3) has omega(e1, e3) = 1
        rep = brane_check(sy_dxdp(), plane((0, 2), (1, 3)))
        assert not rep.compatible

    def test_lagrangian_graph_passes(self):
        # {p = df} for f = x1 x2: a lagrangian graph submanifold
        s_names = SN
        x1 = Poly.var(s_names, "x1")
        x2 = Poly.var(s_names, "x2")
        sub = SubmanifoldData(CH, (0, 1), {2: x2, 3: x1})
        rep = brane_check(sy_dxdp(), sub)
        assert rep.compatible and rep.lagrangian

    def test_complex_brane_f_types(self):
        chc = Chart.complex_plane(2)
        sj = j_complex(standard_complex_endo(2))
        f11 = MixedForm(4, {0b0011: ONE})
        f20 = MixedForm(4, {0b0101: ONE, 0b1010: -ONE})
        assert brane_check(sj, whole_chart(chc, f11)).compatible
        rep = brane_check(sj, whole_chart(chc, f20))
        assert not rep.compatible and rep.f_type_11 is False

    def test_complex_submanifold_stability(self):
        chc = Chart.complex_plane(2)
        sj = j_complex(standard_complex_endo(2))
        s_names = ("x1", "x2")
        zero = Poly.zero(s_names)
        holo = SubmanifoldData(chc, (0, 1), {2: zero, 3: zero})
        rep = brane_check(sj, holo)
        assert rep.compatible and rep.complex_stable
        x1 = Poly.var(s_names, "x1")
        x2 = Poly.var(s_names, "x2")
        anti = SubmanifoldData(chc, (0, 1), {2: x1, 3: -x2})
        rep2 = brane_check(sj, anti)
        assert not rep2.compatible and rep2.complex_stable is False

    def test_space_filling_example(self):
        ch = Chart.real("x1", "x2", "p1", "p2")
        omega_form = MixedForm(4, {(1 << 0) | (1 << 3): ONE, (1 << 1) | (1 << 2): ONE})
        s = j_symplectic(map_from_two_form(omega_form))
        f = MixedForm(4, {(1 << 0) | (1 << 2): ONE, (1 << 1) | (1 << 3): -ONE})
        rep = brane_check(s, whole_chart(ch, f))
        assert rep.compatible
        assert rep.space_filling_j_squared_ok
        assert rep.sigma_20
        # the matrix oracle: J = -omega^{-1} F squared equals -1
        wmap = map_from_two_form(omega_form)
        fmap = map_from_two_form(f)
        j = [[-x for x in row] for row in linalg.mat_mul(linalg.inverse(wmap), fmap)]
        j2 = linalg.mat_mul(j, j)
        assert linalg.mat_eq(j2, linalg.mat_scale(linalg.identity(4), -ONE))
        got = [[v.const_value() for v in row] for row in rep.space_filling_j]
        assert linalg.mat_eq(got, j)

    def test_coisotropy_invariant(self):
        # every compatible case in this file has P(N*S) inside TS at samples
        reps = [
            brane_check(sy_dxdp(), plane((0, 1), (2, 3))),
            brane_check(
                j_complex(standard_complex_endo(2)),
                plane((0, 1), (2, 3), chart=Chart.complex_plane(2)),
            ),
        ]
        for rep in reps:
            assert rep.compatible
            assert rep.coisotropic

    def test_splitting_covariance(self):
        # conjugating the ambient structure by exp(B) and shifting F by i*B
        # preserves the compatibility verdict
        rng = Rng(9)
        base = sy_dxdp()
        for _ in range(5):
            bmap = rng.antisym_map(4)
            from gcgeo.clifford import BlockTransform

            t = BlockTransform(4, "B", bmap)
            o = t.orth_matrix()
            j2 = linalg.mat_mul(o, linalg.mat_mul(base.matrix(), linalg.inverse(o)))
            s2 = validate_gc(j2)
            b_form = two_form_from_map(bmap)
            sub0 = plane((0, 1), (2, 3))
            pulled = sub0.pull_form(b_form)
            sub2 = SubmanifoldData(CH, (0, 1), sub0.graph, pulled)
            before = brane_check(base, sub0).compatible
            after = brane_check(s2, sub2).compatible
            assert before == after == True
