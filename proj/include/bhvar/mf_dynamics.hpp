// mf_dynamics.hpp — the lattice nonlinear-Schrodinger flow of Glauber
// parameters z_j and the number-preserving psi_j = sqrt(N) xi_j flow, which
// share one kernel up to the interaction rescaling U -> U (N-1)/N, plus the
// analytic plane-wave reference on homogeneous rings.

#pragma once

#include "bhvar/gutzwiller.hpp"
#include "bhvar/model.hpp"

namespace bhvar {

struct DnlsState {
    Vec z;
};

// psi_j with sum |psi_j|^2 = N (checked to 1e-10 at construction).
struct PsiState {
    int N{0};
    Vec psi;
};

DnlsState make_dnls_state(Vec z);
PsiState make_psi_state(int N, Vec psi, double norm_tol = 1e-10);

// dz/dt with i dz_j/dt = U |z_j|^2 z_j - sum_l T_{lj} z_l.
Vec rhs_dnls(const DnlsState& state, const BHParams& params);

// dpsi/dt with the interaction scaled by (N-1)/N; N = 0 is rejected.
Vec rhs_sum(const PsiState& state, const BHParams& params);

// H = (U/2) sum_i |z_i|^4 - sum_{j!=l} T_{jl} z_j conj(z_l).
EnergyValue energy_dnls(const DnlsState& state, const BHParams& params);

// H = (U(N-1)/(2N)) sum |psi_j|^4 - sum_{j!=l} T_{jl} conj(psi_j) psi_l.
EnergyValue energy_sum(const PsiState& state, const BHParams& params);

enum class PlaneWaveScheme { Dnls, Sum };

// z_j = A e^{i k~ j} on an M-site homogeneous periodic ring (M >= 3), with
// omega = U_eff |A|^2 - 2 T cos k~. N is consumed only by the Sum scheme.
struct PlaneWave {
    Vec state;
    double omega{0.0};
};

PlaneWave plane_wave(int M, int k, cx A, const BHParams& params, PlaneWaveScheme scheme,
                     int N = 0);

}  // namespace bhvar
