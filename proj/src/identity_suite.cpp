#include "bhvar/identity_suite.hpp"

#include "bhvar/catstates.hpp"
#include "bhvar/cs_algebra.hpp"
#include "bhvar/fock.hpp"
#include "bhvar/gutzwiller.hpp"
#include "bhvar/integrator.hpp"
#include "bhvar/mf_dynamics.hpp"
#include "bhvar/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace bhvar {

namespace {

Vec random_unit_vector(std::mt19937_64& rng, int M) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(M);
    for (int i = 0; i < M; ++i) v(i) = cx(gauss(rng), gauss(rng));
    return v / v.norm();
}

SuMState random_sum_state(std::mt19937_64& rng, int M, int N) {
    return make_sum_state(N, random_unit_vector(rng, M));
}

GlauberState random_glauber(std::mt19937_64& rng, int M, double scale) {
    std::normal_distribution<double> gauss(0.0, scale);
    Vec z(M);
    for (int i = 0; i < M; ++i) z(i) = cx(gauss(rng), gauss(rng));
    return make_glauber_state(std::move(z));
}

// Decaying occupation amplitudes with an empty top band: the bracket and flow
// identities are statements of the untruncated algebra, so test states must
// keep the truncation wall unpopulated.
GutzwillerState random_gutzwiller(std::mt19937_64& rng, int M, int n_max) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(M, n_max + 1);
    const int top = std::max(1, n_max - 3);
    for (int i = 0; i < M; ++i) {
        for (int n = 0; n < top; ++n) {
            const double damp = std::exp(-0.4 * n);
            f(i, n) = cx(damp * gauss(rng), damp * gauss(rng));
        }
        f.row(i) /= f.row(i).norm();
    }
    return make_gutzwiller_state(std::move(f));
}

// SU(M) state built by repeated ladder application of sum_i xi_i a_i^+ to the
// vacuum: the independent route to the closed-form amplitudes.
SectorVector sum_state_by_ladder(const SuMState& state, BasisPtr basis) {
    const int M = static_cast<int>(state.xi.size());
    Vec v = Vec::Ones(1);
    BasisPtr lower = enumerate_sector(M, 0);
    for (int n = 0; n < state.N; ++n) {
        BasisPtr upper = enumerate_sector(M, n + 1);
        Vec next = Vec::Zero(upper->dim());
        for (int j = 1; j <= M; ++j) {
            next += state.xi(j - 1) * (raise_map(*lower, *upper, j) * v);
        }
        v = next;
        lower = upper;
    }
    v /= std::exp(0.5 * std::lgamma(state.N + 1.0));
    return SectorVector{basis, v};
}

struct Checker {
    std::vector<CheckResult> results;

    void add(const std::string& scope, const std::string& id, const std::string& name,
             double residual, double tolerance) {
        results.push_back(CheckResult{name, scope + "/" + id, residual, tolerance,
                                      residual <= tolerance});
    }
};

// ------------------------------- algebra -------------------------------

void check_algebra(Checker& out) {
    std::mt19937_64 rng(20240517);

    // Ring builders validate and carry both mirror images of every bond.
    {
        double worst = 0.0;
        for (int M : {1, 2, 3, 5, 8}) {
            const HoppingMatrix ring = build_ring_hopping(M, 0.7, true);
            if (validate(BHParams{1.0, M, ring})) worst = 1.0;
            if (M >= 3) worst = std::max(worst, std::abs(ring.sum() - 2.0 * M * 0.7));
        }
        out.add("algebra", "ring-hopping", "ring builders validate with the full bond sum", worst,
                1e-14);
    }

    // Basis index round trip over a few sectors.
    {
        double worst = 0.0;
        for (auto [M, N] : {std::pair{3, 4}, std::pair{4, 3}, std::pair{2, 6}}) {
            BasisPtr basis = enumerate_sector(M, N);
            for (int i = 0; i < basis->dim(); ++i) {
                worst = std::max(worst, std::abs(basis->index_of(basis->state(i)) - i) + 0.0);
            }
        }
        out.add("algebra", "basis-index-round-trip", "basis index map inverts the enumeration",
                worst, 0.0);
    }

    // Hermiticity of the sector Hamiltonian.
    {
        BHParams params{0.7, 4, build_ring_hopping(4, 1.0, true)};
        BasisPtr basis = enumerate_sector(4, 4);
        const Mat H = build_bh_matrix(params, *basis);
        out.add("algebra", "bh-matrix-hermitian", "sector Hamiltonian is Hermitian",
                hermiticity_residual(H), 1e-14 * H.cwiseAbs().maxCoeff());
    }

    // Two-boson generator commutators close on the sector.
    {
        BasisPtr basis = enumerate_sector(3, 4);
        std::uniform_int_distribution<int> site(1, 3);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const int j = site(rng), k = site(rng), m = site(rng), n = site(rng);
            const Mat Ejk = transfer_matrix(*basis, j, k);
            const Mat Emn = transfer_matrix(*basis, m, n);
            Mat expected = Mat::Zero(basis->dim(), basis->dim());
            if (k == m) expected += transfer_matrix(*basis, j, n);
            if (n == j) expected -= transfer_matrix(*basis, m, k);
            worst = std::max(worst, (Ejk * Emn - Emn * Ejk - expected).cwiseAbs().maxCoeff());
        }
        out.add("algebra", "two-boson-commutators", "two-boson generators close under commutation",
                worst, 1e-12);
    }

    // Closed-form overlap vs Fock inner product.
    {
        double worst = 0.0;
        for (auto [M, N] : {std::pair{2, 6}, std::pair{3, 5}, std::pair{4, 4}}) {
            BasisPtr basis = enumerate_sector(M, N);
            for (int trial = 0; trial < 10; ++trial) {
                const SuMState eta = random_sum_state(rng, M, N);
                const SuMState xi = random_sum_state(rng, M, N);
                const cx closed = sum_overlap(eta, xi);
                const cx fock = sum_state_by_ladder(eta, basis)
                                    .amps.dot(sum_state_by_ladder(xi, basis).amps);
                worst = std::max(worst, std::abs(closed - fock));
            }
        }
        out.add("algebra", "overlap-closed-vs-fock",
                "coherent-state overlap matches the Fock inner product", worst, 1e-12);
    }

    // Closed-form expectation values vs sector matrix elements.
    {
        double worst = 0.0;
        for (auto [M, N] : {std::pair{3, 5}, std::pair{4, 4}}) {
            BasisPtr basis = enumerate_sector(M, N);
            for (int trial = 0; trial < 10; ++trial) {
                const SuMState xi = random_sum_state(rng, M, N);
                const Vec amps = sum_state_by_ladder(xi, basis).amps;
                for (int i = 1; i <= M; ++i) {
                    const PairExpectations ex = sum_expectations(xi, i, 1 + (i % M));
                    const Mat n_op = transfer_matrix(*basis, i, i);
                    const double n_fock = (amps.adjoint() * (n_op * amps))(0).real();
                    const double pair_fock =
                        (amps.adjoint() * (n_op * (n_op * amps)))(0).real() - n_fock;
                    const cx hop_fock =
                        amps.dot(transfer_matrix(*basis, 1 + (i % M), i) * amps);
                    worst = std::max({worst, std::abs(ex.n - n_fock),
                                      std::abs(ex.n_pair - pair_fock),
                                      std::abs(ex.transfer - hop_fock)});
                }
            }
        }
        out.add("algebra", "expectations-closed-vs-fock",
                "closed-form one/two-boson expectations match Fock evaluation", worst, 1e-12);
    }

    // Generalized pair matrix element between different states.
    {
        const int M = 3, N = 5;
        BasisPtr basis = enumerate_sector(M, N);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const SuMState eta = random_sum_state(rng, M, N);
            const SuMState xi = random_sum_state(rng, M, N);
            const Vec ea = sum_fock_amplitudes(eta, basis).amps;
            const Vec xa = sum_fock_amplitudes(xi, basis).amps;
            for (int m = 1; m <= M; ++m) {
                for (int i = 1; i <= M; ++i) {
                    const cx closed = sum_pair_matrix_element(eta, xi, m, i);
                    const cx fock = ea.dot(transfer_matrix(*basis, m, i) * xa);
                    worst = std::max(worst, std::abs(closed - fock));
                }
            }
        }
        out.add("algebra", "pair-matrix-element",
                "cross-state transfer matrix element matches Fock evaluation", worst, 1e-12);
    }

    // Fixed-N weights of a Glauber product state: restriction identity and
    // completeness of the weight distribution.
    {
        const GlauberState z = random_glauber(rng, 3, 0.8);
        const double nbar = z.mean_total();
        const Vec xi_dir = z.z / std::sqrt(nbar);
        const int S_max = sector_cutoff(nbar, 1e-13);
        const auto sectors = glauber_fock_amplitudes(z, S_max);
        double worst_restriction = 0.0;
        double weight_sum = 0.0;
        for (int S = 0; S <= S_max; ++S) {
            const cx w = glauber_sector_weight(z, xi_dir, S);
            weight_sum += std::norm(w);
            const SuMState xi = make_sum_state(S, xi_dir);
            const Vec expected = w * sum_fock_amplitudes(xi, sectors[S].basis).amps;
            worst_restriction =
                std::max(worst_restriction, (sectors[S].amps - expected).cwiseAbs().maxCoeff());
        }
        out.add("algebra", "glauber-sector-restriction",
                "fixed-N restriction of a Glauber state is weight times the SU(M) state",
                worst_restriction, 1e-12);
        out.add("algebra", "glauber-weights-complete", "sector weights have unit total probability",
                std::abs(weight_sum - 1.0), 1e-12);
    }

    // Group-element chart round trip.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const SuMState xi = random_sum_state(rng, 4, 3);
            const GroupElementParams p = parametrize_group_element(xi);
            worst = std::max(worst,
                             (group_element_forward(p, 4) - xi.xi).cwiseAbs().maxCoeff());
        }
        out.add("algebra", "group-chart-round-trip", "group-element chart inverts exactly", worst,
                1e-12);
    }

    // Three operator routes to the coherent state.
    {
        const int M = 3, N = 4;
        BasisPtr basis = enumerate_sector(M, N);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const SuMState xi = random_sum_state(rng, M, N);
            const GroupElementParams p = parametrize_group_element(xi);
            const DisentangledForms forms = disentangled_action(p, xi, basis);
            const Vec closed = sum_fock_amplitudes(xi, basis).amps;
            worst = std::max(worst, phase_aligned_residual(forms.e_applied.amps, closed).residual);
            worst = std::max(worst, phase_aligned_residual(forms.t_applied.amps, closed).residual);
            if (!forms.eta_pole) {
                worst = std::max(
                    worst, phase_aligned_residual(forms.disentangled.amps, closed).residual);
            }
        }
        out.add("algebra", "group-routes-match",
                "exponential, displacement and disentangled routes agree with the closed form",
                worst, 1e-10);
    }

    // SU(2) spin reduction.
    {
        const int N = 5;
        BasisPtr basis = enumerate_sector(2, N);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const SuMState xi = random_sum_state(rng, 2, N);
            const Su2Reduction red = su2_reduce(xi);
            const Vec closed = sum_fock_amplitudes(xi, basis).amps;
            worst = std::max(worst,
                             phase_aligned_residual(closed, red.spin_amplitudes).residual);
        }
        out.add("algebra", "su2-reduction", "M=2 spin parametrization matches the closed form",
                worst, 1e-12);
    }
}

// ------------------------------- duality -------------------------------

void check_duality(Checker& out) {
    std::mt19937_64 rng(20240518);

    {
        double worst = 0.0;
        for (int M : {2, 3, 5}) {
            const Vec v = random_unit_vector(rng, M);
            const Vec round =
                mode_fourier(mode_fourier(v, FourierDirection::SiteToMomentum),
                             FourierDirection::MomentumToSite);
            worst = std::max(worst, (round - v).cwiseAbs().maxCoeff());
        }
        out.add("duality", "mode-transform-round-trip", "mode transform is unitary", worst, 1e-14);
    }

    {
        const int M = 3, N = 4;
        BasisPtr basis = enumerate_sector(M, N);
        const Mat W = momentum_basis_unitary(*basis);
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            const SuMState xi = random_sum_state(rng, M, N);
            const SuMState alpha =
                make_sum_state(N, mode_fourier(xi.xi, FourierDirection::SiteToMomentum));
            const Vec site = sum_fock_amplitudes(xi, basis).amps;
            const Vec momentum = sum_fock_amplitudes(alpha, basis).amps;
            worst = std::max(worst, (W.adjoint() * site - momentum).cwiseAbs().maxCoeff());
        }
        out.add("duality", "sum-state", "SU(M) state transforms covariantly to momentum modes",
                worst, 1e-12);
    }

    {
        const int M = 3;
        const GlauberState z = random_glauber(rng, M, 0.7);
        const GlauberState v =
            make_glauber_state(mode_fourier(z.z, FourierDirection::SiteToMomentum));
        const int S_max = sector_cutoff(z.mean_total(), 1e-13);
        const auto site_secs = glauber_fock_amplitudes(z, S_max);
        const auto mom_secs = glauber_fock_amplitudes(v, S_max);
        double worst = 0.0;
        for (int S = 0; S <= S_max; ++S) {
            const Mat W = momentum_basis_unitary(*site_secs[S].basis);
            worst = std::max(
                worst,
                (W.adjoint() * site_secs[S].amps - mom_secs[S].amps).cwiseAbs().maxCoeff());
        }
        out.add("duality", "glauber-state", "Glauber state transforms covariantly per sector",
                worst, 1e-12);
    }

    {
        const int M = 3, N = 4;
        BasisPtr upper = enumerate_sector(M, N);
        BasisPtr lower = enumerate_sector(M, N - 1);
        const Mat D_up = displacement_matrix(*upper);
        const Mat D_down = displacement_matrix(*lower);
        double worst = 0.0;
        for (int l = 1; l <= M; ++l) {
            const int next = l % M + 1;
            const Mat lhs = D_down * lower_map(*upper, *lower, l) * D_up.adjoint();
            const Mat rhs = lower_map(*upper, *lower, next);
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
        out.add("duality", "displacement-covariance",
                "ring displacement shifts site operators by one", worst, 1e-10);
    }
}

// ------------------------------- dynamics ------------------------------

void check_dynamics(Checker& out) {
    std::mt19937_64 rng(20240519);

    const BHParams ring{0.5, 3, build_ring_hopping(3, 1.0, true)};

    // Weyl-Heisenberg brackets on the coefficient table.
    {
        double worst_alpha = 0.0;
        double worst_number = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            const GutzwillerState state = random_gutzwiller(rng, 3, 10);
            const Vec alpha = order_parameter_alpha(state);
            for (int j = 1; j <= 3; ++j) {
                for (int l = 1; l <= 3; ++l) {
                    const cx expected = j == l ? cx{0.0, -1.0} : cx{0.0, 0.0};
                    const cx bracket = poisson_bracket_fd(state, alpha_observable(j),
                                                          alpha_conj_observable(l));
                    worst_alpha = std::max(worst_alpha, std::abs(bracket - expected));
                    const cx expected_n = j == l ? cx{0.0, -1.0} * alpha(j - 1) : cx{0.0, 0.0};
                    const cx bracket_n = poisson_bracket_fd(state, alpha_observable(j),
                                                            site_number_observable(l));
                    worst_number = std::max(worst_number, std::abs(bracket_n - expected_n));
                }
            }
        }
        out.add("dynamics", "wh-bracket-alpha",
                "order parameters close a Weyl-Heisenberg bracket", worst_alpha, 1e-8);
        out.add("dynamics", "wh-bracket-number",
                "order parameter brackets with site numbers reproduce the ladder relation",
                worst_number, 1e-8);
    }

    // Equations of motion equal the finite-difference Hamiltonian flow.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            const GutzwillerState state = random_gutzwiller(rng, 3, 10);
            const Eigen::MatrixXcd fdot = rhs_gutzwiller(state, ring);
            const double h = 1e-6;
            GutzwillerState work = state;
            for (int j = 0; j < state.M; ++j) {
                for (int n = 0; n <= state.n_max; ++n) {
                    auto energy_at = [&](cx value) {
                        work.f(j, n) = value;
                        const double e = energy_F(work, ring).value;
                        work.f(j, n) = state.f(j, n);
                        return e;
                    };
                    const double dx =
                        (energy_at(state.f(j, n) + h) - energy_at(state.f(j, n) - h)) / (2 * h);
                    const double dy = (energy_at(state.f(j, n) + cx(0, h)) -
                                       energy_at(state.f(j, n) - cx(0, h))) /
                                      (2 * h);
                    const cx dH_dfbar = 0.5 * cx(dx, dy);
                    worst = std::max(worst, std::abs(fdot(j, n) - cx{0.0, -1.0} * dH_dfbar));
                }
            }
        }
        out.add("dynamics", "rhs-matches-bracket-flow",
                "coefficient equations of motion equal the Hamiltonian flow", worst, 1e-8);
    }

    // Conservation along a coefficient-table trajectory.
    {
        Vec z0(3);
        z0 << cx(1.0, 0.2), cx(-0.4, 0.8), cx(0.3, -0.5);
        const GutzwillerState start = coherent_embed(make_glauber_state(z0), 30);
        const int cols = start.n_max + 1;
        auto unpack = [&](const Vec& y) {
            GutzwillerState s = start;
            for (int i = 0; i < 3; ++i) s.f.row(i) = y.segment(i * cols, cols).transpose();
            return s;
        };
        auto pack = [&](const Eigen::MatrixXcd& table) {
            Vec y(3 * cols);
            for (int i = 0; i < 3; ++i) y.segment(i * cols, cols) = table.row(i).transpose();
            return y;
        };
        RhsFn rhs = [&](const Vec& y) { return pack(rhs_gutzwiller(unpack(y), ring)); };
        IntegratorConfig config;
        config.dt = 1e-3;
        config.t_end = 10.0;
        config.record_every = 200;
        config.keep_snapshots = false;
        std::vector<Monitor> monitors{
            {"energy", [&](const Vec& y) { return energy_F(unpack(y), ring).value; }},
            {"N_bar", [&](const Vec& y) { return invariants_F(unpack(y)).N_bar; }},
            {"I_min", [&](const Vec& y) { return invariants_F(unpack(y)).I.minCoeff(); }},
            {"I_max", [&](const Vec& y) { return invariants_F(unpack(y)).I.maxCoeff(); }}};
        const Trajectory traj = integrate(rhs, pack(start.f), config, monitors);
        double worst = 0.0;
        for (size_t i = 0; i < traj.times.size(); ++i) {
            worst = std::max(worst, std::abs(traj.monitor_series[0][i] - traj.monitor_series[0][0]));
            worst = std::max(worst, std::abs(traj.monitor_series[1][i] - traj.monitor_series[1][0]));
            worst = std::max(worst, std::abs(traj.monitor_series[2][i] - 1.0));
            worst = std::max(worst, std::abs(traj.monitor_series[3][i] - 1.0));
        }
        out.add("dynamics", "gutzwiller-conservation",
                "energy, total number and per-site norms are conserved", worst, 1e-8);
    }

    // U = 0: the coherent manifold is invariant and tracks the mode flow.
    {
        const BHParams free_ring{0.0, 3, build_ring_hopping(3, 1.0, true)};
        Vec z0(3);
        z0 << cx(0.9, 0.1), cx(-0.3, 0.6), cx(0.2, -0.4);
        const GutzwillerState start = coherent_embed(make_glauber_state(z0), 30);
        const int cols = start.n_max + 1;
        auto unpack = [&](const Vec& y) {
            GutzwillerState s = start;
            for (int i = 0; i < 3; ++i) s.f.row(i) = y.segment(i * cols, cols).transpose();
            return s;
        };
        auto pack = [&](const Eigen::MatrixXcd& table) {
            Vec y(3 * cols);
            for (int i = 0; i < 3; ++i) y.segment(i * cols, cols) = table.row(i).transpose();
            return y;
        };
        IntegratorConfig config;
        config.dt = 1e-3;
        config.t_end = 10.0;
        config.record_every = 100;
        config.keep_snapshots = true;
        RhsFn rhs_table = [&](const Vec& y) { return pack(rhs_gutzwiller(unpack(y), free_ring)); };
        const Trajectory table_traj = integrate(rhs_table, pack(start.f), config, {});
        RhsFn rhs_modes = [&](const Vec& y) { return rhs_dnls(DnlsState{y}, free_ring); };
        const Trajectory mode_traj = integrate(rhs_modes, z0, config, {});
        double worst = 0.0;
        for (size_t i = 0; i < table_traj.snapshots.size(); ++i) {
            const Vec alpha = order_parameter_alpha(unpack(table_traj.snapshots[i]));
            worst = std::max(worst, (alpha - mode_traj.snapshots[i]).cwiseAbs().maxCoeff());
        }
        out.add("dynamics", "coherent-reduction-u0",
                "order parameters track the mode flow on the coherent manifold at U=0", worst,
                1e-8);
    }

    // The two mode flows coincide under the interaction rescaling.
    {
        const int N = 7;
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            Vec psi = random_unit_vector(rng, 3) * std::sqrt(static_cast<double>(N));
            const Vec lhs = rhs_sum(make_psi_state(N, psi), ring);
            BHParams scaled = ring;
            scaled.U = ring.U * (N - 1.0) / N;
            const Vec rhs_v = rhs_dnls(DnlsState{psi}, scaled);
            worst = std::max(worst, (lhs - rhs_v).cwiseAbs().maxCoeff());
        }
        out.add("dynamics", "scheme-agreement",
                "number-preserving flow equals the rescaled mode flow", worst, 1e-14);
    }

    // Plane-wave orbits satisfy both flows.
    {
        const BHParams ring4{0.8, 4, build_ring_hopping(4, 1.0, true)};
        double worst = 0.0;
        for (int k = 1; k <= 4; ++k) {
            const PlaneWave pw = plane_wave(4, k, cx(0.9, 0.3), ring4, PlaneWaveScheme::Dnls);
            const Vec res = rhs_dnls(DnlsState{pw.state}, ring4) +
                            cx(0.0, pw.omega) * pw.state;
            worst = std::max(worst, res.cwiseAbs().maxCoeff());
            const cx A_sum = std::sqrt(6.0 / 4.0) * std::exp(cx(0.0, 0.3));
            const PlaneWave pws = plane_wave(4, k, A_sum, ring4, PlaneWaveScheme::Sum, 6);
            const Vec res_s =
                rhs_sum(make_psi_state(6, pws.state), ring4) + cx(0.0, pws.omega) * pws.state;
            worst = std::max(worst, res_s.cwiseAbs().maxCoeff());
        }
        out.add("dynamics", "plane-wave-residual", "plane waves are exact orbits of both flows",
                worst, 1e-12);
    }

    // Mode-flow conservation and gauge covariance.
    {
        Vec z0(3);
        z0 << cx(0.8, -0.1), cx(0.2, 0.5), cx(-0.6, 0.3);
        IntegratorConfig config;
        config.dt = 1e-3;
        config.t_end = 10.0;
        config.record_every = 500;
        RhsFn rhs = [&](const Vec& y) { return rhs_dnls(DnlsState{y}, ring); };
        std::vector<Monitor> monitors{
            {"norm", [](const Vec& y) { return y.squaredNorm(); }},
            {"energy", [&](const Vec& y) { return energy_dnls(DnlsState{y}, ring).value; }}};
        const Trajectory traj = integrate(rhs, z0, config, monitors);
        double worst = 0.0;
        for (size_t i = 0; i < traj.times.size(); ++i) {
            worst = std::max(worst, std::abs(traj.monitor_series[0][i] - traj.monitor_series[0][0]));
            worst = std::max(worst, std::abs(traj.monitor_series[1][i] - traj.monitor_series[1][0]));
        }
        const int N = 5;
        Vec psi0 = z0 * std::sqrt(N / z0.squaredNorm());
        RhsFn rhs_psi = [&](const Vec& y) { return rhs_sum(PsiState{N, y}, ring); };
        std::vector<Monitor> psi_monitors{
            {"norm", [](const Vec& y) { return y.squaredNorm(); }},
            {"energy", [&](const Vec& y) { return energy_sum(PsiState{N, y}, ring).value; }}};
        const Trajectory psi_traj = integrate(rhs_psi, psi0, config, psi_monitors);
        for (size_t i = 0; i < psi_traj.times.size(); ++i) {
            worst = std::max(worst, std::abs(psi_traj.monitor_series[0][i] -
                                             psi_traj.monitor_series[0][0]));
            worst = std::max(worst, std::abs(psi_traj.monitor_series[1][i] -
                                             psi_traj.monitor_series[1][0]));
        }
        out.add("dynamics", "mode-flow-conservation",
                "both mode flows conserve norm and energy", worst, 1e-8);

        const cx phase = std::exp(cx(0.0, 0.81));
        const Trajectory shifted = integrate(rhs, Vec(phase * z0), config, {});
        const double gauge =
            (shifted.final_state - phase * traj.final_state).cwiseAbs().maxCoeff();
        out.add("dynamics", "gauge-covariance", "global phases propagate unchanged", gauge, 1e-10);
    }

    // Fourth-order convergence on the linear test problem.
    {
        const double T = 1.0;
        RhsFn rhs = [&](const Vec& y) { return Vec(cx(0.0, T) * y); };
        Vec y0 = Vec::Ones(1);
        auto error_at = [&](double dt) {
            IntegratorConfig config;
            config.dt = dt;
            config.t_end = 5.0;
            config.record_every = 1 << 20;
            config.keep_snapshots = false;
            const Trajectory traj = integrate(rhs, y0, config, {});
            const cx exact = std::exp(cx(0.0, T * 5.0));
            return std::abs(traj.final_state(0) - exact);
        };
        const double ratio = error_at(0.05) / error_at(0.025);
        out.add("dynamics", "rk4-order", "step halving reduces the linear-problem error 16x",
                std::abs(ratio - 16.0), 2.0);
    }

    // Deterministic re-run.
    {
        Vec z0(3);
        z0 << cx(0.4, 0.6), cx(-0.2, 0.1), cx(0.9, -0.3);
        IntegratorConfig config;
        config.dt = 1e-3;
        config.t_end = 2.0;
        config.record_every = 100;
        RhsFn rhs = [&](const Vec& y) { return rhs_dnls(DnlsState{y}, ring); };
        const Trajectory a = integrate(rhs, z0, config, {});
        const Trajectory b = integrate(rhs, z0, config, {});
        double diff = 0.0;
        for (size_t i = 0; i < a.snapshots.size(); ++i) {
            diff = std::max(diff, (a.snapshots[i] - b.snapshots[i]).cwiseAbs().maxCoeff());
        }
        out.add("dynamics", "determinism", "identical inputs give bit-identical trajectories",
                diff, 0.0);
    }

    // Number-preserving energy against the exact sector expectation.
    {
        const int M = 3, N = 5;
        BasisPtr basis = enumerate_sector(M, N);
        const BHParams model{1.3, 3, build_ring_hopping(3, 1.0, true)};
        const Mat H = build_bh_matrix(model, *basis);
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            const SuMState xi = random_sum_state(rng, M, N);
            const Vec amps = sum_fock_amplitudes(xi, basis).amps;
            const double exact = (amps.adjoint() * (H * amps))(0).real();
            Vec psi = std::sqrt(static_cast<double>(N)) * xi.xi;
            const double effective = energy_sum(make_psi_state(N, psi), model).value;
            worst = std::max(worst, std::abs(exact - effective));
        }
        out.add("dynamics", "energy-sum-vs-exact",
                "number-preserving energy matches the exact sector expectation", worst, 1e-12);
    }

    // Exact sector evolution conserves norm and energy.
    {
        const int M = 3, N = 4;
        BasisPtr basis = enumerate_sector(M, N);
        const BHParams model{0.9, 3, build_ring_hopping(3, 1.0, true)};
        const SuMState xi = random_sum_state(rng, M, N);
        const SectorVector psi0 = sum_fock_amplitudes(xi, basis);
        const Mat H = build_bh_matrix(model, *basis);
        std::vector<double> grid;
        for (int i = 0; i <= 10; ++i) grid.push_back(i * 1.0);
        const auto states = evolve_exact(psi0, model, grid);
        const double e0 = (psi0.amps.adjoint() * (H * psi0.amps))(0).real();
        double worst = 0.0;
        for (const SectorVector& s : states) {
            worst = std::max(worst, std::abs(s.norm() - 1.0));
            worst = std::max(worst,
                             std::abs((s.amps.adjoint() * (H * s.amps))(0).real() - e0));
        }
        out.add("dynamics", "exact-evolution-conservation",
                "exact propagation conserves norm and energy", worst, 1e-10);
    }
}

// --------------------------------- cats --------------------------------

void check_cats(Checker& out) {
    const int M = 3;

    for (int N : {3, 6}) {
        BasisPtr basis = enumerate_sector(M, N);
        const LocalizedFamily family = build_localized_family(M, N, 0.0, 1);

        double ortho = 0.0;
        for (int q = 1; q <= M; ++q) {
            const SectorVector sq = cat_site_amplitudes(build_cat(family, q), basis);
            for (int k = 1; k <= M; ++k) {
                const SectorVector sk = cat_site_amplitudes(build_cat(family, k), basis);
                const cx overlap = sq.amps.dot(sk.amps);
                ortho = std::max(ortho, std::abs(overlap - (q == k ? 1.0 : 0.0)));
            }
        }
        out.add("cats", "orthonormality-N" + std::to_string(N),
                "superpositions of an orthogonal family are orthonormal", ortho, 1e-12);

        const CatObservables obs = cat_observables(build_cat(family, 1), basis);
        const double density_dev =
            (obs.site_density.array() - static_cast<double>(N) / M).abs().maxCoeff();
        out.add("cats", "uniform-density-N" + std::to_string(N),
                "superpositions delocalize the boson density uniformly", density_dev, 1e-12);

        double leak = 0.0;
        for (int q = 1; q <= M; ++q) {
            const auto amps = cat_momentum_amplitudes(build_cat(family, q), basis);
            for (const MomentumAmplitude& a : amps) {
                if (a.lambda != q % M) leak = std::max(leak, std::abs(a.amp));
            }
        }
        out.add("cats", "class-selectivity-N" + std::to_string(N),
                "momentum support is confined to one quasi-momentum class", leak, 1e-12);
    }

    {
        const LocalizedFamily family = build_localized_family(M, 4, 0.05, 20240520);
        out.add("cats", "family-gram", "perturbed family re-orthogonalizes to the identity Gram",
                family_gram_residual(family), 1e-12);
    }

    // The exactly localized member transforms to a flat phase ramp over the
    // momentum modes, which is what makes the class selectivity exact.
    {
        double worst = 0.0;
        const LocalizedFamily family = build_localized_family(M, 3, 0.0, 1);
        for (int l = 1; l <= M; ++l) {
            const Vec alpha =
                mode_fourier(family.xis.col(l - 1), FourierDirection::SiteToMomentum);
            for (int k = 1; k <= M; ++k) {
                const cx expected =
                    std::exp(cx(0.0, -2.0 * pi * k * l / M)) / std::sqrt(static_cast<double>(M));
                worst = std::max(worst, std::abs(alpha(k - 1) - expected));
            }
        }
        out.add("cats", "localized-dual", "localized members transform to pure phase ramps",
                worst, 1e-14);
    }

    {
        const double nbar = 4.0;
        double worst = 0.0;
        for (int h = 1; h <= M; ++h) {
            for (int l = 1; l <= M; ++l) {
                if (h == l) continue;
                Vec x = Vec::Zero(M);
                Vec y = Vec::Zero(M);
                x(h - 1) = std::sqrt(nbar);
                y(l - 1) = std::sqrt(nbar) * std::exp(cx(0.0, 0.37 * h + 0.11 * l));
                const double overlap =
                    std::abs(glauber_overlap(make_glauber_state(x), make_glauber_state(y)));
                worst = std::max(worst, std::abs(overlap - std::exp(-nbar)) / std::exp(-nbar));
            }
        }
        out.add("cats", "glauber-quasi-orthogonality",
                "localized Glauber states overlap at the exponential floor", worst, 1e-12);
    }
}

}  // namespace

std::vector<CheckResult> run_identity_suite(const std::string& scope) {
    Checker checker;
    bool known = false;
    if (scope == "all" || scope == "algebra") {
        check_algebra(checker);
        known = true;
    }
    if (scope == "all" || scope == "duality") {
        check_duality(checker);
        known = true;
    }
    if (scope == "all" || scope == "dynamics") {
        check_dynamics(checker);
        known = true;
    }
    if (scope == "all" || scope == "cats") {
        check_cats(checker);
        known = true;
    }
    if (!known) {
        throw std::invalid_argument(
            "run_identity_suite: scope must be one of all|algebra|dynamics|duality|cats");
    }
    return checker.results;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results) {
        if (!r.pass) return false;
    }
    return true;
}

}  // namespace bhvar
