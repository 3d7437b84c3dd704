#include "bhvar/gutzwiller.hpp"

#include <cmath>
#include <sstream>

namespace bhvar {

GutzwillerState make_gutzwiller_state(Eigen::MatrixXcd f, double norm_tol) {
    if (f.rows() < 1 || f.cols() < 1) {
        throw std::invalid_argument("make_gutzwiller_state: empty coefficient table");
    }
    if (!f.allFinite()) {
        throw std::invalid_argument("make_gutzwiller_state: non-finite coefficients");
    }
    for (int i = 0; i < f.rows(); ++i) {
        const double norm2 = f.row(i).squaredNorm();
        if (std::abs(norm2 - 1.0) > norm_tol) {
            std::ostringstream os;
            os << "make_gutzwiller_state: site " << i + 1 << " norm^2 = " << norm2
               << " violates 1 beyond " << norm_tol;
            throw std::invalid_argument(os.str());
        }
    }
    GutzwillerState state;
    state.M = static_cast<int>(f.rows());
    state.n_max = static_cast<int>(f.cols()) - 1;
    state.f = std::move(f);
    return state;
}

Vec order_parameter_alpha(const GutzwillerState& state) {
    Vec alpha = Vec::Zero(state.M);
    for (int i = 0; i < state.M; ++i) {
        cx acc{0.0, 0.0};
        for (int m = 0; m < state.n_max; ++m) {
            acc += std::sqrt(m + 1.0) * std::conj(state.f(i, m)) * state.f(i, m + 1);
        }
        alpha(i) = acc;
    }
    return alpha;
}

Vec mean_field_phi(const Vec& alpha, const HoppingMatrix& hopping) {
    if (alpha.size() != hopping.entries.rows()) {
        throw std::invalid_argument("mean_field_phi: size mismatch");
    }
    return hopping.entries.transpose().cast<cx>() * alpha;
}

EnergyValue energy_F(const GutzwillerState& state, const BHParams& params) {
    require_valid(params);
    if (params.M != state.M) throw std::invalid_argument("energy_F: site count mismatch");
    double onsite = 0.0;
    for (int j = 0; j < state.M; ++j) {
        for (int n = 2; n <= state.n_max; ++n) {
            onsite += n * (n - 1.0) * std::norm(state.f(j, n));
        }
    }
    const Vec alpha = order_parameter_alpha(state);
    cx hop{0.0, 0.0};
    for (int l = 0; l < state.M; ++l) {
        for (int j = 0; j < state.M; ++j) {
            if (l == j) continue;
            hop += params.hopping.entries(l, j) * alpha(l) * std::conj(alpha(j));
        }
    }
    EnergyValue out;
    out.value = 0.5 * params.U * onsite - hop.real();
    out.imag_residual = std::abs(hop.imag());
    return out;
}

Eigen::MatrixXcd rhs_gutzwiller(const GutzwillerState& state, const BHParams& params) {
    require_valid(params);
    if (params.M != state.M) throw std::invalid_argument("rhs_gutzwiller: site count mismatch");
    const Vec alpha = order_parameter_alpha(state);
    const Vec phi = mean_field_phi(alpha, params.hopping);
    Eigen::MatrixXcd fdot(state.M, state.n_max + 1);
    const cx minus_i{0.0, -1.0};
    for (int i = 0; i < state.M; ++i) {
        const cx phi_i = phi(i);
        const cx phi_i_conj = std::conj(phi_i);
        for (int m = 0; m <= state.n_max; ++m) {
            cx acc = 0.5 * params.U * m * (m - 1.0) * state.f(i, m);
            if (m + 1 <= state.n_max) acc -= std::sqrt(m + 1.0) * state.f(i, m + 1) * phi_i_conj;
            if (m >= 1) acc -= std::sqrt(static_cast<double>(m)) * state.f(i, m - 1) * phi_i;
            fdot(i, m) = minus_i * acc;
        }
    }
    return fdot;
}

GutzwillerInvariants invariants_F(const GutzwillerState& state) {
    GutzwillerInvariants out;
    out.I = Eigen::VectorXd(state.M);
    for (int j = 0; j < state.M; ++j) {
        double norm2 = 0.0;
        double nbar = 0.0;
        for (int n = 0; n <= state.n_max; ++n) {
            const double w = std::norm(state.f(j, n));
            norm2 += w;
            nbar += n * w;
        }
        out.I(j) = norm2;
        out.N_bar += nbar;
    }
    return out;
}

double site_number(const GutzwillerState& state, int j) {
    if (j < 1 || j > state.M) throw std::out_of_range("site_number: site out of range");
    double nbar = 0.0;
    for (int n = 1; n <= state.n_max; ++n) nbar += n * std::norm(state.f(j - 1, n));
    return nbar;
}

int default_n_max(double N_bar, int M) {
    return std::max(30, static_cast<int>(std::ceil(4.0 * N_bar / M)));
}

GutzwillerState coherent_embed(const GlauberState& z, int n_max) {
    const int M = static_cast<int>(z.z.size());
    if (n_max < 0) throw std::invalid_argument("coherent_embed: n_max must be >= 0");
    // per-site Poisson tails beyond n_max
    int worst_site = -1;
    double worst_tail = 0.0;
    for (int i = 0; i < M; ++i) {
        const double lam = std::norm(z.z(i));
        double term = std::exp(-lam);
        double cum = term;
        for (int n = 1; n <= n_max; ++n) {
            term *= lam / n;
            cum += term;
        }
        const double tail = 1.0 - cum;
        if (tail > worst_tail) {
            worst_tail = tail;
            worst_site = i;
        }
    }
    if (worst_tail > 1e-12) {
        std::ostringstream os;
        os << "coherent_embed: n_max=" << n_max << " leaves Poisson tail " << worst_tail
           << " at site " << worst_site + 1;
        throw TruncationError(os.str());
    }
    Eigen::MatrixXcd f(M, n_max + 1);
    for (int i = 0; i < M; ++i) {
        const double pref = std::exp(-0.5 * std::norm(z.z(i)));
        cx zpow{1.0, 0.0};
        double log_fact = 0.0;
        for (int m = 0; m <= n_max; ++m) {
            if (m > 0) {
                zpow *= z.z(i);
                log_fact += std::log(static_cast<double>(m));
            }
            f(i, m) = pref * zpow * std::exp(-0.5 * log_fact);
        }
    }
    GutzwillerState state;
    state.M = M;
    state.n_max = n_max;
    state.f = std::move(f);
    return state;
}

SectorVector product_amplitudes(const GutzwillerState& state, BasisPtr basis) {
    if (basis->sites() != state.M) {
        throw std::invalid_argument("product_amplitudes: basis has wrong site count");
    }
    SectorVector out{basis, Vec(basis->dim())};
    for (int i = 0; i < basis->dim(); ++i) {
        const OccupationVector& m = basis->state(i);
        cx prod{1.0, 0.0};
        for (int s = 0; s < state.M && prod != cx{0.0, 0.0}; ++s) {
            prod = m.occ[s] > state.n_max ? cx{0.0, 0.0} : prod * state.f(s, m.occ[s]);
        }
        out.amps(i) = prod;
    }
    return out;
}

namespace {

// Wirtinger derivatives of a complex observable w.r.t. one table entry, by
// central differences on the real and imaginary parts.
struct WirtingerPair {
    cx d_f;
    cx d_fbar;
};

WirtingerPair wirtinger_fd(const GutzwillerState& state, const GutzObservable& obs, int j, int n,
                           double h) {
    GutzwillerState work = state;
    work.f(j, n) = state.f(j, n) + h;
    const cx xp = obs(work);
    work.f(j, n) = state.f(j, n) - h;
    const cx xm = obs(work);
    work.f(j, n) = state.f(j, n) + cx(0.0, h);
    const cx yp = obs(work);
    work.f(j, n) = state.f(j, n) - cx(0.0, h);
    const cx ym = obs(work);
    const cx dx = (xp - xm) / (2.0 * h);
    const cx dy = (yp - ym) / (2.0 * h);
    const cx i_unit{0.0, 1.0};
    return WirtingerPair{0.5 * (dx - i_unit * dy), 0.5 * (dx + i_unit * dy)};
}

}  // namespace

cx poisson_bracket_fd(const GutzwillerState& state, const GutzObservable& A,
                      const GutzObservable& B, double step) {
    if (step <= 0.0) throw std::invalid_argument("poisson_bracket_fd: step underflow");
    cx acc{0.0, 0.0};
    for (int j = 0; j < state.M; ++j) {
        for (int n = 0; n <= state.n_max; ++n) {
            const WirtingerPair da = wirtinger_fd(state, A, j, n, step);
            const WirtingerPair db = wirtinger_fd(state, B, j, n, step);
            acc += da.d_f * db.d_fbar - db.d_f * da.d_fbar;
        }
    }
    return cx{0.0, -1.0} * acc;
}

GutzObservable alpha_observable(int j) {
    return [j](const GutzwillerState& s) { return order_parameter_alpha(s)(j - 1); };
}

GutzObservable alpha_conj_observable(int j) {
    return [j](const GutzwillerState& s) { return std::conj(order_parameter_alpha(s)(j - 1)); };
}

GutzObservable site_number_observable(int j) {
    return [j](const GutzwillerState& s) { return cx(site_number(s, j), 0.0); };
}

}  // namespace bhvar
