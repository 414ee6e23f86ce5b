import math

import numpy as np
import pytest

from tsfrac.couplings import m_from_n, n_from_m
from tsfrac.ifl import build_ifl, dominance_gap_dense
from tsfrac.mesh import build_mesh, l1_weights
from tsfrac.problems import make_case
from tsfrac.scheme import (
    ProblemSpec,
    SolverOptions,
    run_dids,
    run_fids,
    select_solver,
    stability_probe,
)
from tsfrac.spectrum import dense_system


def zero_problem(gamma=0.5, alpha=1.5):
    return ProblemSpec(gamma=gamma, alpha=alpha, l=1.0, T=1.0,
                       kappa=lambda x, t: np.ones_like(x),
                       source=lambda x, t: np.zeros_like(x),
                       initial=lambda x: np.zeros_like(x))


class TestSchemeBasics:
    def test_zero_data_gives_zero_solution(self):
        spec = zero_problem()
        hist, _ = run_dids(spec, 8, 2, 16)
        np.testing.assert_array_equal(hist, 0.0)
        hist, _ = run_fids(spec, 8, 2, 16, epsilon=1e-10)
        np.testing.assert_array_equal(hist, 0.0)

    def test_memory_lean_fids_returns_final_level(self):
        from tsfrac.soe import build_soe

        case = make_case("example1", 1.5, 0.5)
        soe = build_soe(0.5, 1e-10, (1.0 / 16) ** 2, 1.0)
        hist, _ = run_fids(case.spec, 16, 2, 16, soe=soe)
        final, rep = run_fids(case.spec, 16, 2, 16, soe=soe, keep_history=False)
        np.testing.assert_allclose(final, hist[-1], rtol=1e-14)
        assert rep.history_memory_values == soe.n_exp * 15

    def test_kappa_positivity_enforced(self):
        spec = ProblemSpec(gamma=0.5, alpha=1.5, l=1.0, T=1.0,
                           kappa=lambda x, t: np.where(x > 0, 1.0, -1.0),
                           source=lambda x, t: np.zeros_like(x),
                           initial=lambda x: np.zeros_like(x))
        with pytest.raises(ValueError, match="kappa"):
            run_dids(spec, 4, 1, 8)

    def test_select_solver(self):
        assert select_solver(64) == "direct"
        assert select_solver(512) == "pkrylov"
        assert select_solver(512, SolverOptions(solver="krylov")) == "krylov"
        assert select_solver(16, SolverOptions(solver="pkrylov")) == "pkrylov"


class TestPaperValues:
    def test_temporal_benchmark_row(self):
        # alpha=1.5, mu=1+alpha/2, s=3, (r,gamma)=(1,0.8), M=2^8
        case = make_case("example1", 1.5, 0.8)
        N = n_from_m(2 ** 8, 1, 0.8, 2)
        _, rep = run_dids(case.spec, 2 ** 8, 1, N)
        assert rep.err_inf == pytest.approx(6.734e-3, rel=2e-3)
        assert rep.err_2 == pytest.approx(5.974e-3, rel=2e-3)

    def test_spatial_benchmark_row_with_rate(self):
        # alpha=0.5, (r,gamma)=(2,0.5): N=2^5 row err 8.214e-4, rate 1.912
        case = make_case("example1", 0.5, 0.5)
        errs = []
        for N in (16, 32):
            M = m_from_n(N, 2, 0.5, 2)
            _, rep = run_dids(case.spec, M, 2, N)
            errs.append(rep.err_inf)
        assert errs[1] == pytest.approx(8.214e-4, rel=2e-3)
        assert math.log2(errs[0] / errs[1]) == pytest.approx(1.912, abs=5e-3)

    @pytest.mark.slow
    def test_fids_deep_mesh_benchmark_row(self):
        # (r,gamma)=(3,0.8), M=2^10: FIDS matches the DIDS benchmark digits
        case = make_case("example1", 1.5, 0.8)
        N = n_from_m(2 ** 10, 3, 0.8, 2)
        _, rep = run_fids(case.spec, 2 ** 10, 3, N, epsilon=1e-10)
        assert rep.err_inf == pytest.approx(1.037e-4, rel=2e-3)


class TestFidsDidsAgreement:
    def test_proximity_at_moderate_size(self):
        eps = 1e-10
        case = make_case("example1", 1.5, 0.5)
        h_dids, _ = run_dids(case.spec, 2 ** 7, 2, 2 ** 5)
        h_fids, _ = run_fids(case.spec, 2 ** 7, 2, 2 ** 5, epsilon=eps)
        assert np.max(np.abs(h_fids - h_dids)) <= 100 * eps


class TestDominancePreservation:
    @pytest.mark.parametrize("N", [8, 32, 64])
    def test_level_systems_dominated_by_shift(self, N):
        # D(shift I + K A) >= shift must hold at every level
        case = make_case("example1", 1.5, 0.5)
        M, r = 6, 2.0
        mesh = build_mesh(M, r, 1.0)
        disc = build_ifl(1.5, 1.75, 1.0, N)
        x = disc.interior_points()
        g = math.gamma(1.0 - 0.5)
        for m in range(1, M + 1):
            shift = l1_weights(mesh, 0.5, m).a[-1] / g
            kappa = case.spec.kappa(x, mesh.t[m])
            mat = dense_system(disc, shift, kappa)
            assert dominance_gap_dense(mat) >= shift - 1e-12 * disc.scale


class TestStabilityProbe:
    def test_zero_source_bounds_by_initial_data(self, rng):
        # random initial data in [-1,1], f == 0: sup-norm never grows
        data = rng.uniform(-1.0, 1.0, size=63)
        spec = ProblemSpec(gamma=0.5, alpha=1.5, l=1.0, T=1.0,
                           kappa=lambda x, t: np.ones_like(x),
                           source=lambda x, t: np.zeros_like(x),
                           initial=lambda x: data[: x.size])
        hist, _ = run_dids(spec, 16, 2, 64)
        norms = np.max(np.abs(hist), axis=1)
        assert np.all(norms[1:] <= norms[0] + 1e-12)

    @pytest.mark.parametrize("scheme", ["dids", "fids"])
    @pytest.mark.parametrize("name,r,gamma", [("example1", 2.0, 0.5),
                                              ("example2", 3.0, 0.8)])
    def test_inequality_holds_every_level(self, scheme, name, r, gamma):
        case = make_case(name, 1.5, gamma)
        check = stability_probe(case.spec, 2 ** 5, r, 2 ** 4, scheme=scheme,
                                epsilon=1e-10)
        assert check.ok
        assert check.max_slack <= 0.0 or check.max_slack <= 1e-12


class TestComplexityCounters:
    def test_dids_history_cost_grows_linearly(self):
        case = make_case("example1", 1.5, 0.5)
        _, rep = run_dids(case.spec, 128, 2, 16)
        ops = rep.history_ops
        assert ops[99] == pytest.approx(2 * ops[49], rel=0.05)
        assert ops[-1] > ops[0]

    def test_fids_history_cost_flat_and_memory_capped(self):
        case = make_case("example1", 1.5, 0.5)
        _, rep = run_fids(case.spec, 128, 2, 16, epsilon=1e-10,
                          keep_history=False)
        assert np.all(rep.history_ops == rep.history_ops[0])
        assert rep.history_memory_values <= 256 * 15


class TestTemporalOrder:
    def test_empirical_rate_meets_theory(self):
        # (r,gamma)=(3,0.8): min(r*gamma, 2-gamma) = 1.2
        case = make_case("example1", 1.5, 0.8)
        errs = []
        for M in (64, 128, 256):
            N = n_from_m(M, 3, 0.8, 2)
            _, rep = run_fids(case.spec, M, 3, N, epsilon=1e-10)
            errs.append(rep.err_inf)
        rate = math.log2(errs[-2] / errs[-1])
        assert rate >= 1.2 - 0.1
