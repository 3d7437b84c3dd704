// gutzwiller.hpp — site-factorized trial states with a full per-site
// coefficient table: order parameters, effective energy, equations of motion,
// conserved quantities, the coherent-state embedding, and finite-difference
// Poisson brackets over the coefficient table.

#pragma once

#include "bhvar/cs_algebra.hpp"
#include "bhvar/fock.hpp"
#include "bhvar/model.hpp"

#include <functional>

namespace bhvar {

// f(i, n) is the amplitude of |n> at site i+1, n = 0..n_max. Per-site norms
// are 1 at construction; evolution monitors drift and never renormalizes.
struct GutzwillerState {
    int M{0};
    int n_max{0};
    Eigen::MatrixXcd f;
};

GutzwillerState make_gutzwiller_state(Eigen::MatrixXcd f, double norm_tol = 1e-10);

// alpha_i = sum_m sqrt(m+1) conj(f_im) f_i,m+1.
Vec order_parameter_alpha(const GutzwillerState& state);

// Phi_i = sum_l T_{li} alpha_l.
Vec mean_field_phi(const Vec& alpha, const HoppingMatrix& hopping);

struct EnergyValue {
    double value{0.0};
    double imag_residual{0.0};
};

// H = (U/2) sum_j sum_n (n^2-n)|f_jn|^2 - sum_{l!=j} T_{lj} alpha_l conj(alpha_j).
EnergyValue energy_F(const GutzwillerState& state, const BHParams& params);

// df/dt table: i df_im/dt = (U/2)(m^2-m) f_im - sqrt(m+1) f_i,m+1 conj(Phi_i)
//                           - sqrt(m) f_i,m-1 Phi_i, hard wall at n_max.
Eigen::MatrixXcd rhs_gutzwiller(const GutzwillerState& state, const BHParams& params);

struct GutzwillerInvariants {
    double N_bar{0.0};
    Eigen::VectorXd I;  // per-site norms
};

GutzwillerInvariants invariants_F(const GutzwillerState& state);

// Per-site boson number sum_n n |f_jn|^2 (1-based site).
double site_number(const GutzwillerState& state, int j);

int default_n_max(double N_bar, int M);

// f_im = e^{-|z_i|^2/2} z_i^m / sqrt(m!); the Poisson tail beyond n_max must
// be <= 1e-12 for every site, else TruncationError naming the worst site.
GutzwillerState coherent_embed(const GlauberState& z, int n_max);

// Projection onto a fixed-N sector: amplitude on |m> is prod_i f_i,m_i
// (zero by convention when any m_i exceeds n_max).
SectorVector product_amplitudes(const GutzwillerState& state, BasisPtr basis);

using GutzObservable = std::function<cx(const GutzwillerState&)>;

// { A, B } = -i sum_{j,n} [ dA/df_jn dB/dconj(f_jn) - dB/df_jn dA/dconj(f_jn) ]
// with Wirtinger derivatives taken by central finite differences of step h on
// the real and imaginary parts of each table entry.
cx poisson_bracket_fd(const GutzwillerState& state, const GutzObservable& A,
                      const GutzObservable& B, double step = 1e-6);

// Convenience observables for the bracket checks.
GutzObservable alpha_observable(int j);
GutzObservable alpha_conj_observable(int j);
GutzObservable site_number_observable(int j);

}  // namespace bhvar
