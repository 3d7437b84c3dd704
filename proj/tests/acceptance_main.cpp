// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion pins its tolerance and runtime budget in code.

#include "bhvar/catstates.hpp"
#include "bhvar/cs_algebra.hpp"
#include "bhvar/fock.hpp"
#include "bhvar/gutzwiller.hpp"
#include "bhvar/integrator.hpp"
#include "bhvar/mf_dynamics.hpp"
#include "bhvar/model.hpp"

#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace bhvar;
using namespace bhvar::testing;

namespace {

struct Criterion {
    int id;
    std::string label;
    double residual;
    double tolerance;
    double seconds;
    double budget_seconds;
    bool pass;
};

std::vector<Criterion> g_results;
std::vector<std::string> g_notes;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void record(int id, const std::string& label, double residual, double tolerance, double seconds,
            double budget) {
    const bool pass = residual <= tolerance && seconds < budget;
    g_results.push_back(Criterion{id, label, residual, tolerance, seconds, budget, pass});
}

Vec pack_table(const Eigen::MatrixXcd& f) {
    Vec y(f.rows() * f.cols());
    for (int i = 0; i < f.rows(); ++i) y.segment(i * f.cols(), f.cols()) = f.row(i).transpose();
    return y;
}

GutzwillerState unpack_table(const Vec& y, const GutzwillerState& like) {
    GutzwillerState s = like;
    const int cols = like.n_max + 1;
    for (int i = 0; i < like.M; ++i) s.f.row(i) = y.segment(i * cols, cols).transpose();
    return s;
}

// 1. closed-form overlaps and expectation values against brute force
void criterion_algebra() {
    Timer timer;
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    for (auto [M, N] : {std::pair{2, 4}, std::pair{3, 5}, std::pair{4, 4}}) {
        BasisPtr basis = enumerate_sector(M, N);
        for (int trial = 0; trial < 50; ++trial) {
            const SuMState eta = random_sum_state(rng, M, N);
            const SuMState xi = random_sum_state(rng, M, N);
            const Vec ea = sum_state_by_ladder(eta, basis).amps;
            const Vec xa = sum_state_by_ladder(xi, basis).amps;
            worst = std::max(worst, std::abs(sum_overlap(eta, xi) - ea.dot(xa)));
            for (int i = 1; i <= M; ++i) {
                const int m = 1 + (i % M);
                const PairExpectations ex = sum_expectations(xi, i, m);
                const Mat ni = transfer_matrix(*basis, i, i);
                const double n_fock = matrix_expectation(xa, ni).real();
                const double pair_fock =
                    matrix_expectation(xa, Mat(ni * ni)).real() - n_fock;
                const cx hop_fock = matrix_expectation(xa, transfer_matrix(*basis, m, i));
                worst = std::max({worst, std::abs(ex.n - n_fock), std::abs(ex.n_pair - pair_fock),
                                  std::abs(ex.transfer - hop_fock)});
            }
        }
    }
    record(1, "coherent-state overlaps and expectations vs brute force", worst, 1e-12,
           timer.seconds(), 5.0);
}

// 2. fixed-N decomposition of a coherent product state
void criterion_decomposition() {
    Timer timer;
    std::mt19937_64 rng(1002);
    const GlauberState z = random_glauber(rng, 3, 0.8);
    const double nbar = z.mean_total();
    const Vec dir = Vec(z.z / std::sqrt(nbar));
    const int S_max = sector_cutoff(nbar, 1e-12);
    const auto sectors = glauber_fock_amplitudes(z, S_max);
    double worst = 0.0;
    double total = 0.0;
    for (int S = 0; S <= S_max; ++S) {
        const cx w = glauber_sector_weight(z, dir, S);
        total += std::norm(w);
        const Vec expected =
            w * sum_fock_amplitudes(make_sum_state(S, dir), sectors[S].basis).amps;
        worst = std::max(worst, (sectors[S].amps - expected).cwiseAbs().maxCoeff());
    }
    worst = std::max(worst, std::abs(total - 1.0));
    record(2, "fixed-N restriction equals weight times direction state; weights complete", worst,
           1e-12, timer.seconds(), 2.0);
}

// 3. operator routes from the extremal state, with the SU(2) special case
void criterion_group_routes() {
    Timer timer;
    std::mt19937_64 rng(1003);
    const int M = 3, N = 4;
    BasisPtr basis = enumerate_sector(M, N);
    double worst = 0.0;
    double half_residual = 0.0;
    double full_residual = 1e300;
    for (int trial = 0; trial < 20; ++trial) {
        const SuMState xi = random_sum_state(rng, M, N);
        const GroupElementParams p = parametrize_group_element(xi);
        const DisentangledForms forms = disentangled_action(p, xi, basis);
        const Vec closed = sum_fock_amplitudes(xi, basis).amps;
        worst = std::max(worst, phase_aligned_residual(forms.e_applied.amps, closed).residual);
        worst = std::max(worst, phase_aligned_residual(forms.t_applied.amps, closed).residual);
        if (!forms.eta_pole) {
            worst = std::max(worst,
                             phase_aligned_residual(forms.disentangled.amps, closed).residual);
            half_residual = std::max(half_residual,
                                     forms.norm_exponent_half_residual / forms.eta_norm);
            full_residual = std::min(full_residual,
                                     forms.norm_exponent_full_residual / forms.eta_norm);
        }
    }
    BasisPtr basis2 = enumerate_sector(2, 5);
    for (int trial = 0; trial < 20; ++trial) {
        const SuMState xi = random_sum_state(rng, 2, 5);
        const Su2Reduction red = su2_reduce(xi);
        worst = std::max(worst, phase_aligned_residual(sum_fock_amplitudes(xi, basis2).amps,
                                                       red.spin_amplitudes)
                                    .residual);
    }
    record(3, "group-element routes match the symmetric form up to one phase", worst, 1e-10,
           timer.seconds(), 10.0);
    char note[256];
    std::snprintf(note, sizeof(note),
                  "criterion 3 note: disentangled norm matches (1+|u|^2)^(N/2) "
                  "(relative residual %.2e); exponent N is off by at least %.2e",
                  half_residual, full_residual);
    g_notes.push_back(note);
}

// 4. finite-difference brackets of the order parameters
void criterion_brackets() {
    Timer timer;
    std::mt19937_64 rng(1004);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const GutzwillerState state = random_gutzwiller(rng, 3, 12);
        const Vec alpha = order_parameter_alpha(state);
        for (int j = 1; j <= 3; ++j) {
            for (int l = 1; l <= 3; ++l) {
                const cx ab =
                    poisson_bracket_fd(state, alpha_observable(j), alpha_conj_observable(l));
                const cx expected = j == l ? cx{0.0, -1.0} : cx{0.0, 0.0};
                worst = std::max(worst, std::abs(ab - expected));
                const cx an =
                    poisson_bracket_fd(state, alpha_observable(j), site_number_observable(l));
                const cx expected_n = j == l ? cx{0.0, -1.0} * alpha(j - 1) : cx{0.0, 0.0};
                worst = std::max(worst, std::abs(an - expected_n));
            }
        }
    }
    record(4, "order parameters close the Weyl-Heisenberg bracket relations", worst, 1e-8,
           timer.seconds(), 5.0);
}

// shared table-flow harness for criteria 5 and 6
struct TableRun {
    GutzwillerState start;
    Trajectory traj;
};

TableRun run_table(const BHParams& params, const Vec& z0, double t_end, int record_every) {
    TableRun run{coherent_embed(make_glauber_state(z0), 30), {}};
    const GutzwillerState& start = run.start;
    RhsFn rhs = [&params, &start](const Vec& y) {
        return pack_table(rhs_gutzwiller(unpack_table(y, start), params));
    };
    IntegratorConfig config;
    config.dt = 1e-3;
    config.t_end = t_end;
    config.record_every = record_every;
    std::vector<Monitor> monitors{
        {"energy",
         [&params, &start](const Vec& y) { return energy_F(unpack_table(y, start), params).value; }},
        {"N_bar", [&start](const Vec& y) { return invariants_F(unpack_table(y, start)).N_bar; }},
        {"I_dev", [&start](const Vec& y) {
             return (invariants_F(unpack_table(y, start)).I.array() - 1.0).abs().maxCoeff();
         }}};
    run.traj = integrate(rhs, pack_table(start.f), config, monitors);
    return run;
}

// 5. conservation of the table flow at three interaction strengths
void criterion_conservation() {
    Timer timer;
    Vec z0(3);  // unit filling with nontrivial phases: N_bar = 3
    z0 << std::exp(cx(0.0, 0.3)), cx(1.0, 0.0), std::exp(cx(0.0, -1.0));
    double worst = 0.0;
    for (double U : {0.0, 0.5, 2.0}) {
        const BHParams params{U, 3, build_ring_hopping(3, 1.0, true)};
        const TableRun run = run_table(params, z0, 10.0, 250);
        for (size_t i = 0; i < run.traj.times.size(); ++i) {
            worst = std::max(worst, std::abs(run.traj.monitor_series[0][i] -
                                             run.traj.monitor_series[0][0]));
            worst = std::max(worst, std::abs(run.traj.monitor_series[1][i] -
                                             run.traj.monitor_series[1][0]));
            worst = std::max(worst, run.traj.monitor_series[2][i]);
        }
    }
    record(5, "table flow conserves energy, boson number and per-site norms", worst, 1e-8,
           timer.seconds(), 60.0);
}

// 6. coherent reduction: exact at U = 0, broken at U/T = 2
void criterion_reduction() {
    Timer timer;
    Vec z0(3);
    z0 << std::exp(cx(0.0, 0.3)), cx(1.0, 0.0), std::exp(cx(0.0, -1.0));

    auto deviation = [&](double U) {
        const BHParams params{U, 3, build_ring_hopping(3, 1.0, true)};
        const TableRun table = run_table(params, z0, 10.0, 100);
        RhsFn rhs_modes = [&params](const Vec& y) { return rhs_dnls(DnlsState{y}, params); };
        IntegratorConfig config;
        config.dt = 1e-3;
        config.t_end = 10.0;
        config.record_every = 100;
        const Trajectory modes = integrate(rhs_modes, z0, config, {});
        double dev = 0.0;
        for (size_t i = 0; i < table.traj.snapshots.size(); ++i) {
            const Vec alpha =
                order_parameter_alpha(unpack_table(table.traj.snapshots[i], table.start));
            dev = std::max(dev, (alpha - modes.snapshots[i]).cwiseAbs().maxCoeff());
        }
        return dev;
    };

    const double dev_free = deviation(0.0);
    const double dev_interacting = deviation(2.0);
    // pass needs dev_free <= 1e-8 AND dev_interacting > 1e-2
    const double residual = std::max(dev_free, dev_interacting > 1e-2 ? 0.0 : 1.0);
    record(6, "order parameter tracks the mode flow at U=0 and departs at U/T=2", residual, 1e-8,
           timer.seconds(), 60.0);
    char note[160];
    std::snprintf(note, sizeof(note),
                  "criterion 6 note: max deviation %.2e at U=0, %.2e at U/T=2", dev_free,
                  dev_interacting);
    g_notes.push_back(note);
}

// 7. mode-flow structure: plane waves, kernel equivalence, exact energy
void criterion_mode_structure() {
    Timer timer;
    std::mt19937_64 rng(1007);
    double worst = 0.0;

    const BHParams ring4{1.1, 4, build_ring_hopping(4, 1.0, true)};
    for (int k = 1; k <= 4; ++k) {
        const PlaneWave pw = plane_wave(4, k, cx(0.7, 0.4), ring4, PlaneWaveScheme::Dnls);
        worst = std::max(worst, (rhs_dnls(make_dnls_state(pw.state), ring4) +
                                 cx(0.0, pw.omega) * pw.state)
                                    .cwiseAbs()
                                    .maxCoeff());
        const cx A = std::sqrt(8.0 / 4.0) * std::exp(cx(0.0, 0.2));
        const PlaneWave pws = plane_wave(4, k, A, ring4, PlaneWaveScheme::Sum, 8);
        worst = std::max(worst, (rhs_sum(make_psi_state(8, pws.state), ring4) +
                                 cx(0.0, pws.omega) * pws.state)
                                    .cwiseAbs()
                                    .maxCoeff());
    }

    Timer kernel_timer;
    double worst_kernel = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int N = 5;
        Vec psi = random_unit_vector(rng, 4) * std::sqrt(static_cast<double>(N));
        BHParams scaled = ring4;
        scaled.U = ring4.U * (N - 1.0) / N;
        worst_kernel = std::max(worst_kernel, (rhs_sum(make_psi_state(N, psi), ring4) -
                                               rhs_dnls(make_dnls_state(psi), scaled))
                                                  .cwiseAbs()
                                                  .maxCoeff());
    }
    record(7, "number-preserving flow equals the rescaled mode flow", worst_kernel, 1e-14,
           kernel_timer.seconds(), 5.0);

    const int M = 3, N = 5;
    BasisPtr basis = enumerate_sector(M, N);
    const BHParams ring3{1.3, 3, build_ring_hopping(3, 1.0, true)};
    const Mat H = build_bh_matrix(ring3, *basis);
    for (int trial = 0; trial < 20; ++trial) {
        const SuMState xi = random_sum_state(rng, M, N);
        const Vec amps = sum_state_by_ladder(xi, basis).amps;
        const double exact = amps.dot(H * amps).real();
        Vec psi = std::sqrt(static_cast<double>(N)) * xi.xi;
        worst = std::max(worst,
                         std::abs(energy_sum(make_psi_state(N, psi), ring3).value - exact));
    }
    record(7, "plane-wave orbits and the exact energy expectation", worst, 1e-12, timer.seconds(),
           5.0);
}

// 8. duality at (M,N) = (3,4), Glauber sectors, displacement covariance
void criterion_duality() {
    Timer timer;
    std::mt19937_64 rng(1008);
    double worst = 0.0;

    const int M = 3, N = 4;
    BasisPtr basis = enumerate_sector(M, N);
    const Mat W = momentum_basis_unitary(*basis);
    for (int trial = 0; trial < 10; ++trial) {
        const SuMState xi = random_sum_state(rng, M, N);
        const SuMState alpha =
            make_sum_state(N, mode_fourier(xi.xi, FourierDirection::SiteToMomentum));
        worst = std::max(worst, (W.adjoint() * sum_fock_amplitudes(xi, basis).amps -
                                 sum_fock_amplitudes(alpha, basis).amps)
                                    .cwiseAbs()
                                    .maxCoeff());
    }

    const GlauberState z = random_glauber(rng, 3, 0.7);
    const GlauberState v = make_glauber_state(mode_fourier(z.z, FourierDirection::SiteToMomentum));
    const int S_max = sector_cutoff(z.mean_total(), 1e-12);
    const auto site_secs = glauber_fock_amplitudes(z, S_max);
    const auto mom_secs = glauber_fock_amplitudes(v, S_max);
    for (int S = 0; S <= S_max; ++S) {
        const Mat WS = momentum_basis_unitary(*site_secs[S].basis);
        worst = std::max(worst, (WS.adjoint() * site_secs[S].amps - mom_secs[S].amps)
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    record(8, "site<->momentum duality for both state families", worst, 1e-12, timer.seconds(),
           10.0);

    Timer timer2;
    BasisPtr lower = enumerate_sector(M, N - 1);
    const Mat D_up = displacement_matrix(*basis);
    const Mat D_down = displacement_matrix(*lower);
    double cov = 0.0;
    for (int l = 1; l <= M; ++l) {
        const int next = l % M + 1;
        const Mat lhs = D_down * lower_map(*basis, *lower, l) * D_up.adjoint();
        cov = std::max(cov, (lhs - lower_map(*basis, *lower, next)).cwiseAbs().maxCoeff());
    }
    record(8, "displacement operator shifts the site modes by one", cov, 1e-10, timer2.seconds(),
           10.0);
}

// 9. localized families, their superpositions and momentum classes
void criterion_cats() {
    Timer timer;
    double worst = 0.0;
    const int M = 3;
    for (int N : {3, 6}) {
        BasisPtr basis = enumerate_sector(M, N);
        const LocalizedFamily family = build_localized_family(M, N, 0.0, 1);
        std::vector<Vec> cats;
        for (int k = 1; k <= M; ++k) {
            cats.push_back(cat_site_amplitudes(build_cat(family, k), basis).amps);
        }
        for (int q = 0; q < M; ++q) {
            for (int k = 0; k < M; ++k) {
                worst = std::max(worst,
                                 std::abs(cats[q].dot(cats[k]) - (q == k ? 1.0 : 0.0)));
            }
        }
        for (int k = 1; k <= M; ++k) {
            const CatObservables obs = cat_observables(build_cat(family, k), basis);
            worst = std::max(worst, (obs.site_density.array() - static_cast<double>(N) / M)
                                        .abs()
                                        .maxCoeff());
            for (const MomentumAmplitude& a :
                 cat_momentum_amplitudes(build_cat(family, k), basis)) {
                if (a.lambda != k % M) worst = std::max(worst, std::abs(a.amp));
            }
        }

        // localized coherent products meet the exponential overlap floor
        for (int h = 1; h <= M; ++h) {
            for (int l = 1; l <= M; ++l) {
                if (h == l) continue;
                Vec x = Vec::Zero(M), y = Vec::Zero(M);
                x(h - 1) = std::sqrt(static_cast<double>(N)) * std::exp(cx(0.0, 0.21 * h));
                y(l - 1) = std::sqrt(static_cast<double>(N)) * std::exp(cx(0.0, -0.4 * l));
                const double overlap =
                    std::abs(glauber_overlap(make_glauber_state(x), make_glauber_state(y)));
                worst = std::max(worst,
                                 std::abs(overlap - std::exp(-static_cast<double>(N))) /
                                     std::exp(-static_cast<double>(N)));
            }
        }
    }
    record(9, "superposition orthonormality, uniform density, class selectivity", worst, 1e-12,
           timer.seconds(), 10.0);
}

// 10. fourth-order convergence of the default stepper
void criterion_integrator_order() {
    Timer timer;
    RhsFn rhs = [](const Vec& y) { return Vec(cx(0.0, 1.0) * y); };
    Vec y0 = Vec::Ones(1);
    auto error_at = [&](double dt) {
        IntegratorConfig config;
        config.dt = dt;
        config.t_end = 5.0;
        config.record_every = 1 << 20;
        config.keep_snapshots = false;
        return std::abs(integrate(rhs, y0, config, {}).final_state(0) - std::exp(cx(0.0, 5.0)));
    };
    const double ratio = error_at(0.05) / error_at(0.025);
    record(10, "step halving reduces the linear-problem error 16x (+-2)", std::abs(ratio - 16.0),
           2.0, timer.seconds(), 1.0);
}

}  // namespace

int main() {
    criterion_algebra();
    criterion_decomposition();
    criterion_group_routes();
    criterion_brackets();
    criterion_conservation();
    criterion_reduction();
    criterion_mode_structure();
    criterion_duality();
    criterion_cats();
    criterion_integrator_order();

    bool all_pass = true;
    for (const Criterion& c : g_results) {
        std::printf("%s criterion %2d: %s (residual=%.3e, tol=%.1e, %.2fs < %.0fs)\n",
                    c.pass ? "PASS" : "FAIL", c.id, c.label.c_str(), c.residual, c.tolerance,
                    c.seconds, c.budget_seconds);
        all_pass = all_pass && c.pass;
    }
    for (const std::string& note : g_notes) std::printf("%s\n", note.c_str());
    std::printf("%s\n", all_pass ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES");
    return all_pass ? 0 : 1;
}
