import cmath
import math

import numpy as np
import pytest

from halfplane.extreal import Arc, EMPTY, INF, normalize
from halfplane.factor import (BlackBoxFunction,
                              CompositeFunction, ExpRep, RepFunction,
                              analyze_pick, compose_in_class,
                              constant_factor_check, divide_single, exp_eval,
                              factorize, psi_recover)
from halfplane.krein import KreinProduct, p_eval
from halfplane.nevanlinna import Measure, NevanlinnaRep, SigmaDescriptor

from conftest import random_atomic_rep, random_upper_points


def sqrt_branch(z):
    # z + sqrt(z^2 - 1), the branch positive to the right of 1
    z = complex(z)
    return z + cmath.sqrt(z - 1.0) * cmath.sqrt(z + 1.0)


SQRT_BB = BlackBoxFunction(sqrt_branch,
                           SigmaDescriptor(intervals=((-1.0, 1.0),), has_inf=True))


class TestDivideSingle:
    def test_identity_map(self):
        f = RepFunction(NevanlinnaRep(1.0, 0.0))
        g = divide_single(f, Arc(INF, 0.0))
        assert isinstance(g, RepFunction)
        for z in (1j, 2 + 3j):
            assert abs(g(z) - 1.0) < 1e-12

    def test_reciprocal(self):
        f = RepFunction(NevanlinnaRep(0.0, 0.0, Measure(atoms=((0.0, 1.0),))))
        g = divide_single(f, Arc(0.0, INF))
        for z in (1j, 2 + 3j):
            assert abs(g(z) - 1.0) < 1e-12

    def test_partial_component(self, rng):
        # dividing off a strict sub-arc of a negativity component
        f = RepFunction(NevanlinnaRep(1.0, 0.0, Measure(atoms=((0.0, 1.0),))))
        g = divide_single(f, Arc(0.0, 0.5))
        for z in random_upper_points(rng, 20):
            assert complex(g(z)).imag > -1e-12
            assert abs(g(z) * p_eval(Arc(0.0, 0.5), z) - f(z)) < 1e-10

    def test_reconstruction(self, rng):
        for _ in range(20):
            rep = random_atomic_rep(rng, 5)
            f = RepFunction(rep)
            gamma = analyze_pick(f).gamma
            if gamma.full or gamma.is_empty:
                continue
            j = gamma.arcs[int(rng.integers(0, len(gamma.arcs)))]
            g = divide_single(f, j)
            for z in random_upper_points(rng, 5):
                assert abs(g(z) * p_eval(j, z) - f(z)) < 1e-10 * max(1, abs(f(z)))

    def test_rejects_arc_outside_gamma(self):
        f = RepFunction(NevanlinnaRep(1.0, 0.0))  # gamma = (-oo, 0)
        with pytest.raises(ValueError):
            divide_single(f, Arc(1.0, 2.0))

    def test_composite_removes_arc(self):
        comp = CompositeFunction(2.0, KreinProduct(normalize([Arc(0, 1), Arc(2, 3)])))
        g = divide_single(comp, Arc(0, 1))
        assert isinstance(g, CompositeFunction)
        assert g.product.arcs.isclose(normalize([Arc(2, 3)]))
        for z in (0.5 + 1j, -2 + 0.5j):
            assert abs(g(z) * p_eval(Arc(0, 1), z) - comp(z)) < 1e-12

    def test_composite_splits_arc(self):
        comp = CompositeFunction(1.0, KreinProduct(normalize([Arc(0, 3)])))
        g = divide_single(comp, Arc(1, 2))
        assert g.product.arcs.isclose(normalize([Arc(0, 1), Arc(2, 3)]))
        for z in (0.5 + 1j, 4 + 2j):
            assert abs(g(z) * p_eval(Arc(1, 2), z) - comp(z)) < 1e-12

    def test_blackbox_quotient(self, rng):
        g = divide_single(SQRT_BB, Arc(INF, -1.0))
        for z in random_upper_points(rng, 10):
            assert complex(g(z)).imag > -1e-12

    def test_wrap_component_division(self):
        rep = NevanlinnaRep(0.0, -2.0, Measure(atoms=((-1.0, 1.0), (1.0, 1.0))))
        f = RepFunction(rep)
        gamma = analyze_pick(f).gamma
        wrap = next(a for a in gamma.arcs if a.is_wrap)
        for j in (wrap,
                  Arc(float(wrap.b) + 0.2, float(wrap.a) - 0.2),  # still wraps
                  Arc(float(wrap.b) + 0.2, INF)):
            g = divide_single(f, j)
            for z in (0.7 + 0.9j, -5 + 1j):
                assert abs(g(z) * p_eval(j, z) - f(z)) < 1e-9

    def test_mixed_measure_factorization(self):
        rep = NevanlinnaRep(0.5, -0.7, Measure(atoms=((-3.0, 1.0), (2.0, 0.8)),
                                               ac=((-1.0, 1.0, 0.4),)))
        res = factorize(RepFunction(rep))
        assert res.ok
        assert res.constant is None  # sigma has positive measure
        for z in (0.3 + 1.2j, -4 + 0.5j):
            assert abs(res.k(z) * res.g(z) - rep.eval(z)) < 1e-9

    def test_far_from_origin_support(self):
        # the (1+t²) kernel factors make exact division chains ill-conditioned
        # at large coordinates; the corollary certificate must hold regardless
        rep = NevanlinnaRep(0.3, 1e4, Measure(atoms=((1e4, 2.0), (1.00002e4, 1.5))))
        res = factorize(RepFunction(rep))
        assert res.ok and res.constant_residual <= 1e-9
        rep2 = NevanlinnaRep(1.0, -3e5,
                             Measure(atoms=((-2e5, 5.0), (1e-3, 0.2), (7e5, 8.0))))
        res2 = factorize(RepFunction(rep2))
        assert res2.ok and res2.constant_residual <= 1e-9
        # moderate scales keep the exact structured cofactor
        rep3 = NevanlinnaRep(0.5, -1.0, Measure(atoms=((-40.0, 1.0), (35.0, 2.0))))
        res3 = factorize(RepFunction(rep3))
        assert isinstance(res3.g, RepFunction) and res3.ok


class TestFactorize:
    def test_identity_map(self):
        res = factorize(RepFunction(NevanlinnaRep(1.0, 0.0)))
        assert res.gamma.isclose(normalize([Arc(INF, 0.0)]))
        assert res.constant == pytest.approx(1.0)
        assert abs(res.g(1j) - 1.0) < 1e-12

    def test_scaled_identity(self):
        res = factorize(RepFunction(NevanlinnaRep(2.0, 0.0)))
        assert res.constant == pytest.approx(2.0)

    def test_reciprocal(self):
        res = factorize(RepFunction(
            NevanlinnaRep(0.0, 0.0, Measure(atoms=((0.0, 1.0),)))))
        assert res.gamma.isclose(normalize([Arc(0.0, INF)]))
        assert res.constant == pytest.approx(1.0)

    def test_negative_constant(self):
        res = factorize(RepFunction(NevanlinnaRep(0.0, -3.0)))
        assert res.gamma.full
        assert abs(res.g(1j) - 3.0) < 1e-12

    def test_positive_constant(self):
        res = factorize(RepFunction(NevanlinnaRep(0.0, 3.0)))
        assert res.gamma.is_empty

    def test_posts_on_random_reps(self, rng):
        for _ in range(20):
            rep = random_atomic_rep(rng, 6)
            res = factorize(RepFunction(rep))
            assert res.ok
            assert res.constant_residual <= 1e-9

    def test_corollary_identity_pointwise(self, rng):
        for _ in range(10):
            rep = random_atomic_rep(rng, 5)
            f = RepFunction(rep)
            res = factorize(f)
            for z in random_upper_points(rng, 10):
                assert abs(f(z) - res.constant * res.k(z)) < 1e-8 * max(
                    1.0, abs(f(z)))

    def test_order_independence(self, rng):
        for _ in range(8):
            rep = random_atomic_rep(rng, 5)
            f = RepFunction(rep)
            gamma = analyze_pick(f).gamma
            if gamma.full or gamma.is_empty or len(gamma.arcs) < 2:
                continue
            order = list(range(len(gamma.arcs)))
            rng.shuffle(order)
            g1, g2 = f, f
            for arc in gamma.arcs:
                g1 = divide_single(g1, arc, verify=False, _pre_checked=True)
            for i in order:
                g2 = divide_single(g2, gamma.arcs[i], verify=False,
                                   _pre_checked=True)
            for z in random_upper_points(rng, 5):
                assert abs(g1(z) - g2(z)) < 1e-9 * max(1.0, abs(g1(z)))

    def test_blackbox_branch_function(self):
        res = factorize(SQRT_BB)
        assert res.gamma.isclose(normalize([Arc(INF, -1.0)]), 1e-9)
        assert res.ok
        g10 = complex(res.g(complex(10.0, 0.0))).real
        assert g10 == pytest.approx(math.sqrt(2) * (10 + math.sqrt(99)) / 11,
                                    abs=1e-10)
        xs = list(np.linspace(-60, -1.3, 50)) + list(np.linspace(1.3, 60, 50))
        for x in xs:
            assert complex(res.g(complex(x, 0.0))).real > 0

    def test_composite_idempotence(self):
        o = normalize([Arc(0, 1), Arc(3, 4)])
        e = ExpRep(0.0, ((1.5, 2.5, 0.5),))
        comp = CompositeFunction(1.0, KreinProduct(o), e)
        res = factorize(comp)
        assert res.gamma.isclose(o)
        # the cofactor is the exponential part itself, exactly
        assert isinstance(res.g, CompositeFunction)
        assert res.g.product.arcs.is_empty
        for z in (0.5 + 1j, -2 + 0.3j):
            assert abs(res.g(z) * res.k(z) - comp(z)) < 1e-12

    def test_composite_overlap_rejected_in_analysis(self):
        comp = CompositeFunction(1.0, KreinProduct(normalize([Arc(0, 2)])),
                                 ExpRep(0.0, ((1.0, 3.0, 0.5),)))
        with pytest.raises(ValueError):
            analyze_pick(comp)


class TestConstantCheck:
    def test_examples(self):
        assert constant_factor_check(
            RepFunction(NevanlinnaRep(2.0, 0.0))) == pytest.approx(2.0)
        assert constant_factor_check(RepFunction(
            NevanlinnaRep(0.0, 0.0, Measure(atoms=((0.0, 1.0),))))
        ) == pytest.approx(1.0)

    def test_measure_zero_required(self):
        rep = NevanlinnaRep(0.0, 0.0, Measure(ac=((0.0, 1.0, 1.0),)))
        with pytest.raises(ValueError):
            constant_factor_check(RepFunction(rep))

    def test_random(self, rng):
        for _ in range(10):
            rep = random_atomic_rep(rng, 8)
            c = constant_factor_check(RepFunction(rep))
            assert c == pytest.approx(abs(rep.eval(1j)))


class TestExpRep:
    def test_trivial(self):
        e = ExpRep(0.0, ())
        h, ev = exp_eval(e, 1j)
        assert h == 0 and ev == 1

    def test_half_density_angle(self):
        e = ExpRep(0.0, ((-1.0, 1.0, 0.5),))
        h, _ = exp_eval(e, 1j)
        assert h.imag == pytest.approx(math.pi / 4, abs=1e-13)

    def test_full_line_saturates_pi(self):
        e = ExpRep(0.0, ((-INF, INF, 1.0),))
        h, _ = exp_eval(e, 0.3 + 2j)
        assert h.imag == pytest.approx(math.pi, abs=1e-13)
        assert e.saturated_pieces()

    def test_imag_in_open_interval(self, rng):
        for _ in range(20):
            l, r = sorted(rng.uniform(-5, 5, size=2))
            if r - l < 0.2:
                continue
            psi = float(rng.uniform(0.05, 0.95))
            e = ExpRep(float(rng.uniform(-1, 1)), ((l, r, psi),))
            for z in random_upper_points(rng, 10):
                im = complex(e.h(z)).imag
                assert 0.0 < im < math.pi

    def test_positive_on_real_axis_off_pieces(self):
        e = ExpRep(0.3, ((-1.0, 1.0, 0.5),))
        for x in (-4.0, 2.0, 7.5):
            assert e(x) > 0

    def test_psi_validation(self):
        with pytest.raises(ValueError):
            ExpRep(0.0, ((0.0, 1.0, 1.5),))
        with pytest.raises(ValueError):
            ExpRep(0.0, ((0.0, 1.0, 0.5), (0.5, 2.0, 0.5)))


class TestCompose:
    def test_basic(self, rng):
        comp = compose_in_class(normalize([Arc(0, 1)]),
                                ExpRep(0.0, ((2.0, 3.0, 0.5),)))
        for z in random_upper_points(rng, 30):
            assert comp(z).imag >= -1e-12

    def test_empty_trivial(self):
        comp = compose_in_class(EMPTY, ExpRep(0.0, ()))
        assert comp(1j) == 1.0

    def test_overlap_rejected(self):
        with pytest.raises(ValueError):
            compose_in_class(normalize([Arc(0, 1)]),
                             ExpRep(0.0, ((0.5, 0.7, 0.5),)))


class TestPsiRecover:
    def test_constant_half(self):
        g = ExpRep(0.0, ((-1.0, 1.0, 0.5),))
        assert psi_recover(g, 0.0) == pytest.approx(0.5, abs=1e-6)

    def test_one_is_zero_everywhere_else(self):
        g = ExpRep(0.0, ((0.0, 1.0, 0.25),))
        assert psi_recover(g, 2.0) == pytest.approx(0.0, abs=1e-8)

    def test_trivial(self):
        g = ExpRep(0.0, ())
        assert psi_recover(g, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_piece_values(self, rng):
        for psi in (0.2, 0.5, 0.8):
            g = ExpRep(0.0, ((-2.0, -0.5, psi), (1.0, 3.0, 0.6),))
            assert psi_recover(g, -1.2) == pytest.approx(psi, abs=1e-4)
            assert psi_recover(g, 2.0) == pytest.approx(0.6, abs=1e-4)


class TestAnalyzeDispatch:
    def test_composite(self):
        comp = CompositeFunction(1.0, KreinProduct(normalize([Arc(0, 1)])),
                                 ExpRep(0.0, ((2.0, 3.0, 0.5),)))
        ana = analyze_pick(comp)
        assert ana.gamma.isclose(normalize([Arc(0, 1)]))
        assert ana.sigma.contains(0.0) and ana.sigma.contains(2.5)
        assert not ana.sigma.contains(5.0)

    def test_blackbox_requires_sigma(self):
        with pytest.raises(ValueError):
            analyze_pick(BlackBoxFunction(lambda z: z))

    def test_blackbox_gamma(self):
        ana = analyze_pick(SQRT_BB)
        assert ana.gamma.isclose(normalize([Arc(INF, -1.0)]), 1e-9)
