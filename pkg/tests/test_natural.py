import numpy as np
import pytest

from prodgeo import errors
from prodgeo.conformal import deformed_geometry, random_closed_form
from prodgeo.example import ExampleParams, build_example
from prodgeo.levicivita import (
    cov_deriv_components,
    levi_civita_coeffs,
    lee_form,
    pi1_tensor,
    structure_tensor_F,
    weyl_tensor,
)
from prodgeo.liealg import LieFrameAlgebra
from prodgeo.natural import (
    NaturalConnection,
    TorsionParams,
    canonical_params,
    connection_D,
    connection_from_torsion,
    curvature_Rprime,
    direct_potential,
    dtheta_components,
    flat_D_report,
    has_parallel_torsion,
    is_riemannian_P_tensor,
    naturality_defects,
    p_curvature_criterion,
    recomputed_torsion,
    ricci_scalar_relation,
    s_tensor,
    torsion_family,
    torsion_identity_defects,
    torsion_of_D,
    verify_curvature_relation,
    weyl_invariance_check,
)
from prodgeo.structure import RpmInstance
from prodgeo.tensors import CO, DenseTensor, max_abs
from prodgeo.pipeline import analyze_instance
from tests.conftest import random_lambdas

E = np.eye(4)


def full(inst):
    nabla = levi_civita_coeffs(inst)
    f = structure_tensor_F(inst, nabla)
    theta = lee_form(inst, f).theta_components
    return nabla, theta


class TestTorsionFamily:
    def test_zero_params_match_distinguished_torsion(self, inst_1234):
        _, theta = full(inst_1234)
        fam = torsion_family(inst_1234, theta, TorsionParams(0.0, 0.0))
        assert max_abs(fam.components - torsion_of_D(inst_1234, theta).components) <= 1e-12

    def test_canonical_member(self, inst_1234):
        _, theta = full(inst_1234)
        t = torsion_family(inst_1234, theta, canonical_params(inst_1234.n))
        comp = t.components
        assert max_abs(comp + np.einsum("jik->ijk", comp)) <= 1e-12
        # differs from the distinguished torsion whenever the Lee form is nonzero
        assert max_abs(comp - torsion_of_D(inst_1234, theta).components) > 0.1

    def test_vanishing_lee_form(self, inst_zero):
        _, theta = full(inst_zero)
        for params in (TorsionParams(0, 0), TorsionParams(1.5, -0.25), canonical_params(2)):
            assert max_abs(torsion_family(inst_zero, theta, params).components) == 0.0

    def test_every_member_yields_natural_connection(self, inst_1234):
        _, theta = full(inst_1234)
        rng = np.random.default_rng(13)
        for _ in range(10):
            params = TorsionParams(*rng.uniform(-1, 1, 2))
            conn = connection_from_torsion(inst_1234, torsion_family(inst_1234, theta, params))
            dg, dp = naturality_defects(conn, inst_1234)
            assert dg <= 1e-9 and dp <= 1e-9

    def test_warns_outside_class(self, inst_1000):
        c = np.array(inst_1000.c)
        c[1, 2] = E[0]
        c[2, 1] = -E[0]
        inst = RpmInstance(
            alg=LieFrameAlgebra(4, c),
            metric=inst_1000.metric,
            structure=inst_1000.structure,
        )
        _, theta = full(inst)
        with pytest.warns(errors.NotW1Warning):
            torsion_family(inst, theta, TorsionParams(0, 0))


class TestConnectionFromTorsion:
    def test_half_coefficient_reproduces_direct_potential(self):
        for lam in random_lambdas(73, 50):
            inst = build_example(ExampleParams(lam))
            _, theta = full(inst)
            built = connection_from_torsion(inst, torsion_of_D(inst, theta))
            direct = direct_potential(inst, theta)
            assert max_abs(built.Q.components - direct.components) <= 1e-9

    def test_zero_torsion_gives_levi_civita(self, inst_1234):
        zero = DenseTensor(4, (CO, CO, CO), np.zeros((4, 4, 4)))
        built = connection_from_torsion(inst_1234, zero)
        assert max_abs(built.Q.components) == 0.0
        assert max_abs(built.coeffs.gamma - levi_civita_coeffs(inst_1234).gamma) == 0.0

    def test_potential_is_transposed_torsion(self, inst_1234):
        _, theta = full(inst_1234)
        built = connection_from_torsion(inst_1234, torsion_of_D(inst_1234, theta))
        t = built.T.components
        assert max_abs(built.Q.components - np.einsum("kji->ijk", t)) <= 1e-12

    def test_torsion_reconstruction_round_trip(self):
        for lam in random_lambdas(79, 50):
            inst = build_example(ExampleParams(lam))
            _, theta = full(inst)
            t = torsion_of_D(inst, theta)
            built = connection_from_torsion(inst, t)
            assert max_abs(recomputed_torsion(built.coeffs, inst) - t.components) <= 1e-9


class TestConnectionD:
    def test_single_parameter_components(self, inst_1000):
        d = connection_D(inst_1000)
        assert np.allclose(d.coeffs.gamma[2, 3], [-1, 0, 0, 0])  # X4 along X3 gives -X1

    def test_other_parameter_components(self):
        inst = build_example(ExampleParams((0, 0, 3, 0)))
        d = connection_D(inst)
        assert np.allclose(d.coeffs.gamma[0, 0], [0, 0, 0, -3])  # X1 along X1 gives -3 X4

    def test_degenerate_case_reduces_to_levi_civita(self, inst_zero):
        d = connection_D(inst_zero)
        assert max_abs(d.coeffs.gamma - levi_civita_coeffs(inst_zero).gamma) == 0.0

    def test_lee_derivative_relation(self):
        # derivative along the natural connection differs from the Levi-Civita
        # one by the closed-form correction in g, theta, and the structure
        for lam in random_lambdas(83, 30):
            inst = build_example(ExampleParams(lam))
            nabla, theta = full(inst)
            d = connection_D(inst)
            lhs = dtheta_components(d, theta)
            grad = cov_deriv_components(nabla.gamma, theta, (CO,))
            omega = inst.g_inv @ theta
            theta_p_omega = float(theta @ inst.p @ omega)
            correction = (
                inst.g * theta_p_omega - np.einsum("j,i->ij", theta @ inst.p, theta)
            ) / (2.0 * inst.n)
            assert max_abs(lhs - (grad - correction)) <= 1e-9

    def test_naturality(self):
        for lam in random_lambdas(89, 100):
            inst = build_example(ExampleParams(lam))
            dg, dp = naturality_defects(connection_D(inst), inst)
            assert dg <= 1e-9 and dp <= 1e-9

    def test_warns_outside_class(self, inst_1000):
        c = np.array(inst_1000.c)
        c[1, 2] = E[0]
        c[2, 1] = -E[0]
        inst = RpmInstance(
            alg=LieFrameAlgebra(4, c),
            metric=inst_1000.metric,
            structure=inst_1000.structure,
        )
        with pytest.warns(errors.NotW1Warning):
            connection_D(inst)


class TestTorsionOfD:
    def test_single_parameter_values(self, inst_1000):
        _, theta = full(inst_1000)
        t = torsion_of_D(inst_1000, theta).components
        t_up = np.einsum("ijl,lk->ijk", t, inst_1000.g_inv)
        assert np.allclose(t_up[0, 1], [-1, 0, 0, 0])
        assert np.allclose(t_up[1, 3], [0, 0, 0, 1])

    def test_generic_values(self, inst_1234):
        _, theta = full(inst_1234)
        t_up = np.einsum(
            "ijl,lk->ijk", torsion_of_D(inst_1234, theta).components, inst_1234.g_inv
        )
        assert np.allclose(t_up[2, 3], [0, 0, 3, 4])

    def test_vanishing_lee_form(self, inst_zero):
        _, theta = full(inst_zero)
        assert max_abs(torsion_of_D(inst_zero, theta).components) == 0.0

    def test_structural_identities(self):
        for lam in random_lambdas(97, 100):
            inst = build_example(ExampleParams(lam))
            _, theta = full(inst)
            d = connection_D(inst)
            ids = torsion_identity_defects(inst, d, theta)
            assert ids.cyclic <= 1e-9
            assert ids.structure_cyclic <= 1e-9
            assert ids.nested_cyclic <= 1e-9
            assert ids.potential_transpose <= 1e-9
            assert ids.lee_orthogonality <= 1e-9


class TestCurvatureRelation:
    def test_flat_family(self):
        for lam in random_lambdas(101, 100):
            inst = build_example(ExampleParams(lam))
            a = analyze_instance(inst)
            assert max_abs(a.Rprime.components) <= 1e-9
            assert a.curvature_relation_residual <= 1e-9
            assert a.ricci_relation.ricci_residual <= 1e-9
            assert a.ricci_relation.scalar_residual <= 1e-9

    def test_degenerate_case_exact(self, inst_zero):
        a = analyze_instance(inst_zero)
        assert a.curvature_relation_residual == 0.0
        assert max_abs(a.Rprime.components - a.R.components) == 0.0

    def test_relation_on_deformed_instances(self):
        rng = np.random.default_rng(103)
        for lam in random_lambdas(107, 25):
            inst = build_example(ExampleParams(lam))
            alpha = random_closed_form(inst.alg, rng)
            geo = deformed_geometry(inst, alpha)
            residual = verify_curvature_relation(geo.R, geo.Rprime, geo.S, inst.metric, inst.n)
            assert residual <= 1e-9
            rel = ricci_scalar_relation(
                geo.rho, geo.rho_prime, geo.tau, geo.tau_prime, geo.S, inst.metric, inst.n
            )
            assert rel.ricci_residual <= 1e-9 and rel.scalar_residual <= 1e-9

    def test_trace_spot_value(self, inst_1234):
        _, theta = full(inst_1234)
        d = connection_D(inst_1234)
        assert s_tensor(inst_1234, d, theta).trace_S == pytest.approx(120.0)

    def test_s_vanishes_with_lee_form(self, inst_zero):
        _, theta = full(inst_zero)
        d = connection_D(inst_zero)
        assert max_abs(s_tensor(inst_zero, d, theta).S.components) == 0.0

    def test_metric_part_of_s(self, inst_1000):
        # Lee norm 16 over 4n = 8 gives twice the identity
        _, theta = full(inst_1000)
        d = connection_D(inst_1000)
        s = s_tensor(inst_1000, d, theta).S.components
        dtheta_part = dtheta_components(d, theta) @ inst_1000.p
        assert np.allclose(s - dtheta_part, 2.0 * np.eye(4))


class TestNaturalCurvature:
    def test_family_flat(self):
        for lam in random_lambdas(109, 50):
            inst = build_example(ExampleParams(lam))
            d = connection_D(inst)
            rp = curvature_Rprime(d, inst.alg, inst.metric)
            assert max_abs(rp.components) <= 1e-9

    def test_degenerate_case_equals_levi_civita_curvature(self, inst_zero):
        from prodgeo.levicivita import curvature_tensor

        d = connection_D(inst_zero)
        rp = curvature_Rprime(d, inst_zero.alg, inst_zero.metric)
        nabla = levi_civita_coeffs(inst_zero)
        r = curvature_tensor(nabla, inst_zero.alg, inst_zero.metric)
        assert max_abs(rp.components - r.components) == 0.0

    def test_canonical_connection_curvature_properties(self, inst_1234):
        # a second natural connection with generically non-flat curvature:
        # skew symmetries and structure invariance must hold regardless
        _, theta = full(inst_1234)
        conn = connection_from_torsion(
            inst_1234, torsion_family(inst_1234, theta, canonical_params(inst_1234.n))
        )
        rp = curvature_Rprime(conn, inst_1234.alg, inst_1234.metric).components
        assert max_abs(rp) > 1.0
        assert max_abs(rp + np.einsum("jikl->ijkl", rp)) <= 1e-9
        assert max_abs(rp + np.einsum("ijlk->ijkl", rp)) <= 1e-9
        p = inst_1234.p
        assert max_abs(np.einsum("ijab,ak,bl->ijkl", rp, p, p) - rp) <= 1e-9


class TestPTensorPredicate:
    def test_zero_tensor(self, inst_1234):
        report = is_riemannian_P_tensor(
            DenseTensor(4, (CO,) * 4, np.zeros((4,) * 4)), inst_1234.p
        )
        assert report.verdict

    def test_space_form_tensor_is_not_structure_invariant(self, inst_1234):
        # the invariance axiom transforms only the last two slots, and the
        # space-form tensor fails it: pairing slots across the two factors
        # flips against pairing them straight (defect 2 on unit diagonals)
        report = is_riemannian_P_tensor(pi1_tensor(inst_1234.metric), inst_1234.p)
        assert report.skew12 <= 1e-12 and report.skew34 <= 1e-12
        assert report.bianchi <= 1e-12
        assert report.p_invariance == pytest.approx(2.0)
        assert not report.verdict

    def test_natural_curvature_of_second_connection_is_invariant(self, inst_1234):
        _, theta = full(inst_1234)
        conn = connection_from_torsion(
            inst_1234, torsion_family(inst_1234, theta, canonical_params(inst_1234.n))
        )
        rp = curvature_Rprime(conn, inst_1234.alg, inst_1234.metric)
        report = is_riemannian_P_tensor(rp, inst_1234.p)
        assert report.skew12 <= 1e-9 and report.skew34 <= 1e-9
        assert report.p_invariance <= 1e-9

    def test_levi_civita_curvature_is_not(self, inst_1000):
        from prodgeo.levicivita import curvature_tensor

        nabla = levi_civita_coeffs(inst_1000)
        r = curvature_tensor(nabla, inst_1000.alg, inst_1000.metric)
        report = is_riemannian_P_tensor(r, inst_1000.p)
        # frozen magnitude: the (X2,X4) diagonal maps to its own negative
        assert report.p_invariance == pytest.approx(2.0)
        assert not report.verdict
        assert report.skew12 <= 1e-12 and report.bianchi <= 1e-12


class TestCriterionAndParallelTorsion:
    def test_flat_family_satisfies_criterion(self, inst_1234):
        _, theta = full(inst_1234)
        d = connection_D(inst_1234)
        crit = p_curvature_criterion(inst_1234, d, theta)
        assert crit.dtheta_symmetry_defect <= 1e-9
        assert crit.bianchi_defect_rprime <= 1e-9
        assert crit.equivalence_holds and crit.closedness_agrees

    def test_degenerate_case(self, inst_zero):
        _, theta = full(inst_zero)
        d = connection_D(inst_zero)
        crit = p_curvature_criterion(inst_zero, d, theta)
        assert crit.dtheta_symmetry_defect == 0.0
        assert crit.bianchi_defect_rprime == 0.0
        assert crit.equivalence_holds

    def test_deformed_sweep(self):
        rng = np.random.default_rng(113)
        for lam in random_lambdas(127, 25):
            inst = build_example(ExampleParams(lam))
            alpha = random_closed_form(inst.alg, rng)
            geo = deformed_geometry(inst, alpha)
            crit = p_curvature_criterion(inst, geo.D, geo.theta, nabla=geo.nabla)
            assert crit.equivalence_holds and crit.closedness_agrees

    def test_perturbed_connection_fails_both_sides(self, inst_1234):
        # breaking naturality must break the symmetry and the cyclic identity
        # together, which is exactly what the biconditional asserts
        _, theta = full(inst_1234)
        d = connection_D(inst_1234)
        gamma = np.array(d.coeffs.gamma)
        gamma[0, 1, 2] += 0.35
        bent = NaturalConnection(
            coeffs=type(d.coeffs)(gamma, torsion_free=False), Q=d.Q, T=d.T
        )
        crit = p_curvature_criterion(inst_1234, bent, theta)
        assert crit.dtheta_symmetry_defect > 1e-3
        assert crit.bianchi_defect_rprime > 1e-3
        assert crit.equivalence_holds

    def test_parallel_torsion_only_in_degenerate_case(self):
        for lam in random_lambdas(131, 50):
            inst = build_example(ExampleParams(lam))
            _, theta = full(inst)
            d = connection_D(inst)
            report = has_parallel_torsion(inst, d, theta)
            assert report.verdict == all(abs(v) < 1e-12 for v in lam)
            verdicts = {
                report.dt_defect <= 1e-9,
                report.dtheta_defect <= 1e-9,
                report.gradient_identity_defect <= 1e-9,
            }
            assert len(verdicts) == 1  # triple equivalence

    def test_generic_point_all_defects_positive(self, inst_1234):
        _, theta = full(inst_1234)
        d = connection_D(inst_1234)
        report = has_parallel_torsion(inst_1234, d, theta)
        assert report.dt_defect > 1.0
        assert report.dtheta_defect > 1.0
        assert report.gradient_identity_defect > 1.0
        assert not report.verdict


class TestFlatReport:
    def test_generic_family_point(self, inst_1234):
        a = analyze_instance(inst_1234)
        report = a.flat
        assert report.is_flat
        assert report.weyl_max <= 1e-9
        assert not report.torsion_parallel
        assert report.space_form_residual is None
        assert report.ricci_residual is None
        assert report.parallel_curvature_defect is None

    def test_degenerate_point(self, inst_zero):
        report = analyze_instance(inst_zero).flat
        assert report.is_flat and report.torsion_parallel
        assert report.space_form_residual == 0.0
        assert report.ricci_residual == 0.0
        assert report.scalar_residual == 0.0
        assert report.parallel_curvature_defect == 0.0
        assert report.parallel_relation_residual == 0.0
        assert report.tau == 0.0 and report.tau_negative is None

    def test_flat_connection_forces_conformal_flatness(self):
        # zero natural curvature, then zero natural Weyl tensor, then by
        # invariance zero Levi-Civita Weyl tensor: verified numerically
        for lam in random_lambdas(137, 25):
            inst = build_example(ExampleParams(lam))
            a = analyze_instance(inst)
            w_prime = weyl_tensor(
                a.Rprime, a.ricci_prime.rho, a.ricci_prime.tau, inst.metric
            )
            assert max_abs(a.Rprime.components) <= 1e-9
            assert max_abs(w_prime.components) <= 1e-9
            assert max_abs(a.W.components) <= 1e-9

    def test_synthetic_flat_parallel_instance(self, inst_1234):
        # fabricate the flat-with-parallel-torsion regime by feeding the
        # degenerate geometry a hand-built space-form curvature, so the
        # conditional branch is exercised with a nonzero Lee form
        _, theta = full(inst_1234)
        d = connection_D(inst_1234)
        theta_omega = float(theta @ inst_1234.g_inv @ theta)
        n = inst_1234.n
        r = DenseTensor(
            4, (CO,) * 4,
            -(theta_omega / (4 * n * n)) * pi1_tensor(inst_1234.metric).components,
        )
        zero = DenseTensor(4, (CO,) * 4, np.zeros((4,) * 4))
        degenerate_d = NaturalConnection(
            coeffs=type(d.coeffs)(np.zeros((4, 4, 4)), torsion_free=False),
            Q=DenseTensor(4, (CO,) * 3, np.zeros((4, 4, 4))),
            T=DenseTensor(4, (CO,) * 3, np.zeros((4, 4, 4))),
        )
        report = flat_D_report(inst_1234, degenerate_d, r, zero, theta)
        assert report.is_flat and report.torsion_parallel
        assert report.space_form_residual <= 1e-9
        assert report.ricci_residual <= 1e-9
        assert report.scalar_residual <= 1e-9
        assert report.parallel_curvature_defect <= 1e-9
        assert report.tau_negative is True


class TestWeylInvariance:
    def test_generic_point(self, inst_1234):
        a = analyze_instance(inst_1234)
        assert a.weyl_invariance_residual <= 1e-9

    def test_degenerate_point_exact(self, inst_zero):
        assert analyze_instance(inst_zero).weyl_invariance_residual == 0.0

    def test_deformed_sweep(self):
        rng = np.random.default_rng(139)
        for lam in random_lambdas(149, 25):
            inst = build_example(ExampleParams(lam))
            alpha = random_closed_form(inst.alg, rng)
            geo = deformed_geometry(inst, alpha)
            residual = weyl_invariance_check(
                geo.R, geo.rho, geo.tau, geo.Rprime, geo.rho_prime, geo.tau_prime,
                inst.metric, inst.n,
            )
            assert residual <= 1e-9
