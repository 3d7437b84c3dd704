#include "bhvar/mf_dynamics.hpp"

#include <cmath>
#include <sstream>

namespace bhvar {

namespace {

// Shared kernel: dv/dt = -i [ U_eff |v_j|^2 v_j - (T v)_j ].
Vec nls_rhs(const Vec& v, double U_eff, const HoppingMatrix& hopping) {
    Vec hop = hopping.entries.cast<cx>() * v;  // symmetric T
    Vec out(v.size());
    const cx minus_i{0.0, -1.0};
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        out(j) = minus_i * (U_eff * std::norm(v(j)) * v(j) - hop(j));
    }
    return out;
}

EnergyValue nls_energy(const Vec& v, double U_eff, const BHParams& params) {
    double quartic = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) quartic += std::norm(v(i)) * std::norm(v(i));
    cx hop{0.0, 0.0};
    const Eigen::MatrixXd& T = params.hopping.entries;
    for (int j = 0; j < params.M; ++j) {
        for (int l = 0; l < params.M; ++l) {
            if (j == l) continue;
            hop += T(j, l) * v(j) * std::conj(v(l));
        }
    }
    EnergyValue out;
    out.value = 0.5 * U_eff * quartic - hop.real();
    out.imag_residual = std::abs(hop.imag());
    return out;
}

void check_sites(Eigen::Index size, const BHParams& params, const char* who) {
    require_valid(params);
    if (size != params.M) {
        std::ostringstream os;
        os << who << ": state has " << size << " sites, model has " << params.M;
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

DnlsState make_dnls_state(Vec z) {
    if (z.size() < 1) throw std::invalid_argument("make_dnls_state: empty state");
    if (!z.allFinite()) throw std::invalid_argument("make_dnls_state: non-finite entries");
    return DnlsState{std::move(z)};
}

PsiState make_psi_state(int N, Vec psi, double norm_tol) {
    if (N < 1) throw std::invalid_argument("make_psi_state: N must be >= 1");
    if (psi.size() < 1) throw std::invalid_argument("make_psi_state: empty state");
    if (!psi.allFinite()) throw std::invalid_argument("make_psi_state: non-finite entries");
    const double norm2 = psi.squaredNorm();
    if (std::abs(norm2 - N) > norm_tol) {
        std::ostringstream os;
        os << "make_psi_state: |psi|^2 = " << norm2 << " violates N = " << N << " beyond "
           << norm_tol;
        throw std::invalid_argument(os.str());
    }
    return PsiState{N, std::move(psi)};
}

Vec rhs_dnls(const DnlsState& state, const BHParams& params) {
    check_sites(state.z.size(), params, "rhs_dnls");
    return nls_rhs(state.z, params.U, params.hopping);
}

Vec rhs_sum(const PsiState& state, const BHParams& params) {
    check_sites(state.psi.size(), params, "rhs_sum");
    if (state.N < 1) {
        throw std::invalid_argument("rhs_sum: N = 0 leaves the interaction factor undefined");
    }
    const double U_eff = params.U * (state.N - 1.0) / state.N;
    return nls_rhs(state.psi, U_eff, params.hopping);
}

EnergyValue energy_dnls(const DnlsState& state, const BHParams& params) {
    check_sites(state.z.size(), params, "energy_dnls");
    return nls_energy(state.z, params.U, params);
}

EnergyValue energy_sum(const PsiState& state, const BHParams& params) {
    check_sites(state.psi.size(), params, "energy_sum");
    if (state.N < 1) {
        throw std::invalid_argument("energy_sum: N = 0 leaves the interaction factor undefined");
    }
    const double U_eff = params.U * (state.N - 1.0) / state.N;
    return nls_energy(state.psi, U_eff, params);
}

PlaneWave plane_wave(int M, int k, cx A, const BHParams& params, PlaneWaveScheme scheme, int N) {
    require_valid(params);
    if (params.M != M) throw std::invalid_argument("plane_wave: M does not match the model");
    if (M < 3) {
        throw std::invalid_argument("plane_wave: unsupported lattice, need a ring with M >= 3");
    }
    const double T = params.hopping.entries(0, 1);
    const HoppingMatrix ring = build_ring_hopping(M, T, true);
    if ((params.hopping.entries - ring.entries).cwiseAbs().maxCoeff() != 0.0) {
        throw std::invalid_argument("plane_wave: unsupported hopping, need a homogeneous ring");
    }
    double U_eff = params.U;
    if (scheme == PlaneWaveScheme::Sum) {
        if (N < 1) throw std::invalid_argument("plane_wave: Sum scheme requires N >= 1");
        U_eff = params.U * (N - 1.0) / N;
    }
    const double k_tilde = 2.0 * pi * k / M;
    PlaneWave out;
    out.state = Vec(M);
    for (int j = 1; j <= M; ++j) {
        out.state(j - 1) = A * std::exp(cx(0.0, k_tilde * j));
    }
    out.omega = U_eff * std::norm(A) - 2.0 * T * std::cos(k_tilde);
    return out;
}

}  // namespace bhvar
