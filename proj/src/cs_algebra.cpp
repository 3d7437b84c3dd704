#include "bhvar/cs_algebra.hpp"

#include <cmath>
#include <sstream>

namespace bhvar {

namespace {

constexpr double kNormTol = 1e-12;

void check_same_sector(const SuMState& a, const SuMState& b, const char* who) {
    if (a.N != b.N || a.xi.size() != b.xi.size()) {
        std::ostringstream os;
        os << who << ": sector mismatch (N=" << a.N << ",M=" << a.xi.size() << ") vs (N=" << b.N
           << ",M=" << b.xi.size() << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

SuMState make_sum_state(int N, Vec xi) {
    if (N < 0) throw std::invalid_argument("make_sum_state: N must be >= 0");
    if (xi.size() < 1) throw std::invalid_argument("make_sum_state: xi must be non-empty");
    if (!xi.allFinite()) throw std::invalid_argument("make_sum_state: xi has non-finite entries");
    const double norm2 = xi.squaredNorm();
    if (std::abs(norm2 - 1.0) > kNormTol) {
        std::ostringstream os;
        os << "make_sum_state: |xi|^2 = " << norm2 << " violates unit norm beyond " << kNormTol;
        throw std::invalid_argument(os.str());
    }
    return SuMState{N, std::move(xi)};
}

GlauberState make_glauber_state(Vec z) {
    if (z.size() < 1) throw std::invalid_argument("make_glauber_state: z must be non-empty");
    if (!z.allFinite()) throw std::invalid_argument("make_glauber_state: z has non-finite entries");
    return GlauberState{std::move(z)};
}

SectorVector sum_fock_amplitudes(const SuMState& state, BasisPtr basis) {
    const int M = static_cast<int>(state.xi.size());
    if (basis->sites() != M || basis->bosons() != state.N) {
        throw std::invalid_argument("sum_fock_amplitudes: basis sector does not match the state");
    }
    const double log_nfact = std::lgamma(state.N + 1.0);
    SectorVector out{basis, Vec(basis->dim())};
    for (int i = 0; i < basis->dim(); ++i) {
        const OccupationVector& m = basis->state(i);
        double log_mult = log_nfact;
        cx prod{1.0, 0.0};
        for (int s = 0; s < M; ++s) {
            log_mult -= std::lgamma(m.occ[s] + 1.0);
            prod *= cx_pow(state.xi(s), m.occ[s]);
        }
        out.amps(i) = std::exp(0.5 * log_mult) * prod;
    }
    return out;
}

cx sum_overlap(const SuMState& eta, const SuMState& xi) {
    check_same_sector(eta, xi, "sum_overlap");
    return cx_pow(eta.xi.dot(xi.xi), xi.N);  // Eigen dot conjugates the left factor
}

PairExpectations sum_expectations(const SuMState& state, int i, int m) {
    const int M = static_cast<int>(state.xi.size());
    if (i < 1 || i > M || m < 1 || m > M) {
        throw std::out_of_range("sum_expectations: site index out of range");
    }
    const double N = state.N;
    const double pi2 = std::norm(state.xi(i - 1));
    PairExpectations out;
    out.n = N * pi2;
    out.n_pair = N * (N - 1.0) * pi2 * pi2;
    out.transfer = N * std::conj(state.xi(m - 1)) * state.xi(i - 1);
    return out;
}

cx sum_pair_matrix_element(const SuMState& eta, const SuMState& xi, int m, int i) {
    check_same_sector(eta, xi, "sum_pair_matrix_element");
    const int M = static_cast<int>(xi.xi.size());
    if (i < 1 || i > M || m < 1 || m > M) {
        throw std::out_of_range("sum_pair_matrix_element: site index out of range");
    }
    const cx inner = eta.xi.dot(xi.xi);
    return static_cast<double>(xi.N) * std::conj(eta.xi(m - 1)) * xi.xi(i - 1) *
           cx_pow(inner, xi.N - 1);
}

cx glauber_sector_weight(const GlauberState& z, const Vec& zeta, int L) {
    if (L < 0) throw std::invalid_argument("glauber_sector_weight: L must be >= 0");
    if (zeta.size() != z.z.size()) {
        throw std::invalid_argument("glauber_sector_weight: direction has wrong length");
    }
    const double nbar = z.mean_total();
    if (nbar == 0.0) {
        return L == 0 ? cx{1.0, 0.0} : cx{0.0, 0.0};
    }
    const Vec xi = z.z / std::sqrt(nbar);
    const double log_mag = -0.5 * nbar + 0.5 * L * std::log(nbar) - 0.5 * std::lgamma(L + 1.0);
    return std::exp(log_mag) * cx_pow(zeta.dot(xi), L);
}

int sector_cutoff(double mean_total, double tail_tol) {
    if (mean_total < 0.0 || !std::isfinite(mean_total)) {
        throw std::invalid_argument("sector_cutoff: mean boson number must be finite and >= 0");
    }
    if (mean_total == 0.0) return 0;
    double term = std::exp(-mean_total);  // Poisson pmf at S = 0
    double cum = term;
    int S = 0;
    const int hard_stop = static_cast<int>(10.0 * mean_total) + 200;
    while (1.0 - cum > tail_tol && S < hard_stop) {
        ++S;
        term *= mean_total / S;
        cum += term;
    }
    return S;
}

std::vector<SectorVector> glauber_fock_amplitudes(const GlauberState& z, int S_max, int dim_cap) {
    const int M = static_cast<int>(z.z.size());
    const double nbar = z.mean_total();
    // Poisson tail beyond S_max must be within the declared truncation target.
    if (sector_cutoff(nbar, 1e-12) > S_max) {
        std::ostringstream os;
        os << "glauber_fock_amplitudes: S_max=" << S_max << " leaves a Poisson tail above 1e-12"
           << " (need S_max>=" << sector_cutoff(nbar, 1e-12) << ")";
        throw TruncationError(os.str());
    }
    double log_prefactor = -0.5 * nbar;  // prod_i e^{-|z_i|^2/2}
    std::vector<SectorVector> out;
    out.reserve(S_max + 1);
    for (int S = 0; S <= S_max; ++S) {
        BasisPtr basis = enumerate_sector(M, S, dim_cap);
        SectorVector sec{basis, Vec(basis->dim())};
        for (int i = 0; i < basis->dim(); ++i) {
            const OccupationVector& m = basis->state(i);
            cx prod{1.0, 0.0};
            double log_fact = 0.0;
            for (int s = 0; s < M; ++s) {
                prod *= cx_pow(z.z(s), m.occ[s]);
                log_fact += std::lgamma(m.occ[s] + 1.0);
            }
            sec.amps(i) = prod * std::exp(log_prefactor - 0.5 * log_fact);
        }
        out.push_back(std::move(sec));
    }
    return out;
}

cx glauber_overlap(const GlauberState& x, const GlauberState& z) {
    if (x.z.size() != z.z.size()) {
        throw std::invalid_argument("glauber_overlap: states have different mode counts");
    }
    const cx exponent = x.z.dot(z.z) - 0.5 * cx(x.z.squaredNorm() + z.z.squaredNorm(), 0.0);
    return std::exp(exponent);
}

GroupElementParams parametrize_group_element(const SuMState& state) {
    const int M = static_cast<int>(state.xi.size());
    GroupElementParams p;
    p.phi = Eigen::VectorXd::Zero(M);
    p.theta_vec = Eigen::VectorXd::Zero(std::max(M - 1, 0));
    p.zeta = Vec::Zero(std::max(M - 1, 0));
    p.eta = Vec::Zero(std::max(M - 1, 0));

    const cx xi1 = state.xi(0);
    const double a1 = std::abs(xi1);
    p.phi(0) = (a1 == 0.0) ? 0.0 : std::arg(xi1);
    p.theta = std::acos(std::min(a1, 1.0));
    const double sin_theta = std::sin(p.theta);
    for (int k = 2; k <= M; ++k) {
        const cx xik = state.xi(k - 1);
        const double ak = std::abs(xik);
        if (sin_theta > 0.0 && ak > 0.0) {
            p.theta_vec(k - 2) = p.theta * ak / sin_theta;
            p.phi(k - 1) = std::arg(xik) - pi / 2.0;
        }
    }
    for (int k = 2; k <= M; ++k) {
        p.zeta(k - 2) = p.theta_vec(k - 2) * std::exp(cx(0.0, p.phi(k - 1) - p.phi(0)));
    }
    p.u = cx(0.0, std::tan(p.theta));
    if (p.theta > 0.0) {
        p.eta = (p.u / p.theta) * p.zeta;
    }
    return p;
}

Vec group_element_forward(const GroupElementParams& params, int M) {
    Vec xi(M);
    const double sinc = params.theta > 0.0 ? std::sin(params.theta) / params.theta : 1.0;
    xi(0) = std::exp(cx(0.0, params.phi(0))) * std::cos(params.theta);
    for (int k = 2; k <= M; ++k) {
        xi(k - 1) = cx(0.0, 1.0) * params.theta_vec(k - 2) *
                    std::exp(cx(0.0, params.phi(k - 1))) * sinc;
    }
    return xi;
}

DisentangledForms disentangled_action(const GroupElementParams& params, const SuMState& state,
                                      BasisPtr basis) {
    const int M = static_cast<int>(state.xi.size());
    if (basis->sites() != M || basis->bosons() != state.N) {
        throw std::invalid_argument("disentangled_action: basis sector does not match the state");
    }
    const int dim = basis->dim();

    // Extremal state |N, 0, ..., 0> is the first basis element in the
    // descending lexicographic order.
    Vec extremal = Vec::Zero(dim);
    extremal(0) = 1.0;

    // S = sum_i phi_i n_i is diagonal.
    Vec s_diag(dim);
    for (int i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (int s = 0; s < M; ++s) acc += params.phi(s) * basis->state(i).occ[s];
        s_diag(i) = std::exp(cx(0.0, acc));
    }

    // D = sum_{k>=2} theta_k (a_1^+ a_k + a_k^+ a_1), Hermitian.
    Mat D = Mat::Zero(dim, dim);
    for (int k = 2; k <= M; ++k) {
        const double th = params.theta_vec(k - 2);
        if (th == 0.0) continue;
        D += th * (transfer_matrix(*basis, 1, k) + transfer_matrix(*basis, k, 1));
    }

    DisentangledForms out;
    out.e_applied = SectorVector{basis, s_diag.asDiagonal() * (expm_i_hermitian(D) * extremal)};

    // T exponent: sum_{l>=2} (conj(zeta_l) a_1^+ a_l + zeta_l a_l^+ a_1), Hermitian.
    Mat Texp = Mat::Zero(dim, dim);
    for (int l = 2; l <= M; ++l) {
        const cx zl = params.zeta(l - 2);
        if (zl == cx{0.0, 0.0}) continue;
        Texp += std::conj(zl) * transfer_matrix(*basis, 1, l) + zl * transfer_matrix(*basis, l, 1);
    }
    if (hermiticity_residual(Texp) > 1e-12 * std::max(1.0, Texp.cwiseAbs().maxCoeff())) {
        throw std::runtime_error("disentangled_action: exponent construction lost hermiticity");
    }
    out.t_applied = SectorVector{basis, expm_i_hermitian(Texp) * extremal};

    // eta route: exp(sum_k eta_k a_k^+ a_1)|N,0,...>, normalized numerically.
    // Pole at theta = pi/2 where |u| diverges.
    if (std::cos(params.theta) < 1e-12) {
        out.eta_pole = true;
        out.disentangled = SectorVector{basis, Vec::Zero(dim)};
        return out;
    }
    Mat G = Mat::Zero(dim, dim);
    for (int k = 2; k <= M; ++k) {
        if (params.eta(k - 2) == cx{0.0, 0.0}) continue;
        G += params.eta(k - 2) * transfer_matrix(*basis, k, 1);
    }
    // The series terminates: each application moves one boson off site 1.
    Vec raw = expm_series_apply(G, extremal, state.N + 2);
    out.eta_norm = raw.norm();
    const double u2 = std::norm(params.u);
    out.norm_exponent_half_residual = std::abs(out.eta_norm - std::pow(1.0 + u2, 0.5 * state.N));
    out.norm_exponent_full_residual =
        std::abs(out.eta_norm - std::pow(1.0 + u2, static_cast<double>(state.N)));
    out.disentangled = SectorVector{basis, raw / out.eta_norm};
    return out;
}

Su2Reduction su2_reduce(const SuMState& state) {
    if (state.xi.size() != 2) {
        throw std::invalid_argument("su2_reduce: state must have M = 2");
    }
    Su2Reduction out;
    if (std::abs(state.xi(0)) == 0.0) {
        out.pole = true;
        return out;
    }
    out.z = state.xi(1) / state.xi(0);
    const int N = state.N;
    out.spin_amplitudes = Vec(N + 1);
    const double log_nfact = std::lgamma(N + 1.0);
    const double denom = std::pow(1.0 + std::norm(out.z), 0.5 * N);
    for (int s = 0; s <= N; ++s) {
        const double c =
            std::exp(0.5 * (log_nfact - std::lgamma(s + 1.0) - std::lgamma(N - s + 1.0)));
        out.spin_amplitudes(s) = c * cx_pow(out.z, s) / denom;
    }
    return out;
}

Vec mode_fourier(const Vec& vec, FourierDirection direction) {
    const int M = static_cast<int>(vec.size());
    const Mat F = dft_matrix(M);
    return direction == FourierDirection::SiteToMomentum ? Vec(F * vec) : Vec(F.adjoint() * vec);
}

}  // namespace bhvar
