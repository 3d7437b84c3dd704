// cs_algebra.hpp — coherent-state algebra: SU(M) coherent states and their
// Fock expansion, overlaps and expectation values, the decomposition of
// Glauber product states into fixed-N components, the group-element route to
// the same states, the SU(2) special case, and the site<->momentum mode
// transform.

#pragma once

#include "bhvar/fock.hpp"
#include "bhvar/linalg.hpp"

#include <vector>

namespace bhvar {

class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// |N, xi> with sum_i |xi_i|^2 = 1 (checked to 1e-12 at construction).
struct SuMState {
    int N{0};
    Vec xi;
};

SuMState make_sum_state(int N, Vec xi);

// Product of per-site Glauber coherent states; z_i unconstrained and finite.
// The mean total boson number is derived, never stored.
struct GlauberState {
    Vec z;

    double mean_total() const { return z.squaredNorm(); }
};

GlauberState make_glauber_state(Vec z);

// Amplitude on |m> is sqrt(N!/prod m_i!) prod xi_i^{m_i}.
SectorVector sum_fock_amplitudes(const SuMState& state, BasisPtr basis);

// <eta|xi> = (sum_i conj(eta_i) xi_i)^N for equal sectors.
cx sum_overlap(const SuMState& eta, const SuMState& xi);

// <n_i>, <n_i(n_i - 1)> and <a_m^+ a_i> in closed form (1-based sites).
struct PairExpectations {
    double n;
    double n_pair;
    cx transfer;
};

PairExpectations sum_expectations(const SuMState& state, int i, int m);

// <eta|a_m^+ a_i|xi> = N conj(eta_m) xi_i (sum conj(eta) xi)^{N-1}.
cx sum_pair_matrix_element(const SuMState& eta, const SuMState& xi, int m, int i);

// Weight of the L-boson component of |Z> along direction zeta:
// e^{-Nbar/2} Nbar^{L/2}/sqrt(L!) (sum conj(zeta) xi)^L with xi = z/sqrt(Nbar).
// z = 0 with L > 0 has the defined limit 0.
cx glauber_sector_weight(const GlauberState& z, const Vec& zeta, int L);

// Smallest S_max whose Poisson(Nbar) tail beyond it is <= tail_tol.
int sector_cutoff(double mean_total, double tail_tol);

// Per-sector amplitudes of |Z> for S = 0..S_max; amplitude on |m> is
// prod_i e^{-|z_i|^2/2} z_i^{m_i}/sqrt(m_i!). Throws TruncationError when the
// S_max tail exceeds 1e-12 and CapacityError when a sector is over the cap.
std::vector<SectorVector> glauber_fock_amplitudes(const GlauberState& z, int S_max,
                                                  int dim_cap = kDefaultDimCap);

// <x|z> = prod_j exp(conj(x_j) z_j - (|x_j|^2 + |z_j|^2)/2).
cx glauber_overlap(const GlauberState& x, const GlauberState& z);

// Chart for the group-element factorisation E = e^{iS} e^{iD} that carries
// |N,0,...,0> to |N,xi>: phases phi_i, mixing angles theta_k (k = 2..M),
// theta = |theta_vec|, and the derived zeta_l, u, eta_k of the one-parameter
// SU(2) reduction of the mixing generator.
struct GroupElementParams {
    Eigen::VectorXd phi;        // size M
    Eigen::VectorXd theta_vec;  // size M-1, entries for sites 2..M
    double theta{0.0};
    Vec zeta;  // size M-1, zeta_l = theta_l e^{i(phi_l - phi_1)}
    cx u{0.0, 0.0};
    Vec eta;  // size M-1, eta_k = u zeta_k / theta
};

// Inverse chart: phi_1 = arg xi_1 (0 when xi_1 = 0), theta = arccos|xi_1|,
// theta_k = theta |xi_k| / sin theta, phi_k = arg xi_k - pi/2; all theta_k = 0
// at theta = 0. Forward evaluation reproduces xi exactly.
GroupElementParams parametrize_group_element(const SuMState& state);

// Forward map of the chart back to xi.
Vec group_element_forward(const GroupElementParams& params, int M);

// The three operator routes to |N,xi> from the extremal state |N,0,...,0>:
// E = e^{iS} e^{iD}, T = exp[i sum_l (conj(zeta_l) a_1^+ a_l + zeta_l a_l^+ a_1)],
// and the normalized exp(sum_k eta_k a_k^+ a_1) form. eta_norm is the norm of
// the unnormalised eta form; norm_exponent_*_residual compare it against
// (1+|u|^2)^{N/2} and (1+|u|^2)^N. The eta form has a pole at theta = pi/2
// (|xi_1| = 0); eta_pole is set and the eta fields are empty there.
struct DisentangledForms {
    SectorVector e_applied;
    SectorVector t_applied;
    SectorVector disentangled;
    bool eta_pole{false};
    double eta_norm{0.0};
    double norm_exponent_half_residual{0.0};
    double norm_exponent_full_residual{0.0};
};

DisentangledForms disentangled_action(const GroupElementParams& params, const SuMState& state,
                                      BasisPtr basis);

// M=2 spin reduction: z = xi_2/xi_1 and amplitudes C_s z^s (1+|z|^2)^{-N/2}
// on |N-s, s>. pole is set when xi_1 = 0 (caller uses the localized branch).
struct Su2Reduction {
    bool pole{false};
    cx z{0.0, 0.0};
    Vec spin_amplitudes;
};

Su2Reduction su2_reduce(const SuMState& state);

enum class FourierDirection { SiteToMomentum, MomentumToSite };

// v_k = sum_j e^{-i k~ j} z_j / sqrt(M), k~ = 2 pi k / M, j,k in [1,M];
// the two directions are mutual inverses.
Vec mode_fourier(const Vec& vec, FourierDirection direction);

}  // namespace bhvar
