#include "bhvar/catstates.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace bhvar {

LocalizedFamily build_localized_family(int M, int N, double epsilon, std::uint64_t seed) {
    if (M < 1) throw std::invalid_argument("build_localized_family: M must be >= 1");
    if (N < 0) throw std::invalid_argument("build_localized_family: N must be >= 0");
    const double eps_cap = M > 1 ? 1.0 / (M - 1) : 1.0;
    if (epsilon < 0.0 || epsilon >= eps_cap) {
        std::ostringstream os;
        os << "build_localized_family: epsilon=" << epsilon
           << " is not localization-dominant (need 0 <= epsilon < " << eps_cap << ")";
        throw std::invalid_argument(os.str());
    }

    LocalizedFamily family;
    family.M = M;
    family.N = N;
    family.epsilon = epsilon;
    family.seed = seed;

    if (epsilon == 0.0 || M == 1) {
        family.xis = Mat::Identity(M, M);
        return family;
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
    const double diag = std::sqrt(1.0 - (M - 1) * epsilon);
    const double off = std::sqrt(epsilon);
    Mat seeds(M, M);
    for (int l = 0; l < M; ++l) {
        for (int j = 0; j < M; ++j) {
            seeds(j, l) = j == l ? cx(diag, 0.0) : off * std::exp(cx(0.0, phase(rng)));
        }
    }

    // Symmetric orthogonalization: X = A (A^+ A)^{-1/2}.
    const Mat gram = seeds.adjoint() * seeds;
    Eigen::SelfAdjointEigenSolver<Mat> solver(gram);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("build_localized_family: Gram eigendecomposition failed");
    }
    Eigen::VectorXd inv_sqrt = solver.eigenvalues().cwiseSqrt().cwiseInverse();
    const Mat gram_inv_sqrt =
        solver.eigenvectors() * inv_sqrt.asDiagonal() * solver.eigenvectors().adjoint();
    family.xis = seeds * gram_inv_sqrt;
    return family;
}

double family_gram_residual(const LocalizedFamily& family) {
    const Mat gram = family.xis.adjoint() * family.xis;
    return (gram - Mat::Identity(family.M, family.M)).cwiseAbs().maxCoeff();
}

CatState build_cat(const LocalizedFamily& family, int k) {
    if (k < 1 || k > family.M) {
        throw std::invalid_argument("build_cat: k must lie in [1,M]");
    }
    if (family_gram_residual(family) > 1e-10) {
        std::ostringstream os;
        os << "build_cat: family is not orthogonal (Gram residual "
           << family_gram_residual(family) << ")";
        throw std::invalid_argument(os.str());
    }
    CatState cat;
    cat.family = family;
    cat.k = k;
    cat.coefficients = Vec(family.M);
    const double k_tilde = 2.0 * pi * k / family.M;
    const double norm = 1.0 / std::sqrt(static_cast<double>(family.M));
    for (int l = 1; l <= family.M; ++l) {
        cat.coefficients(l - 1) = norm * std::exp(cx(0.0, k_tilde * l));
    }
    return cat;
}

SectorVector cat_site_amplitudes(const CatState& cat, BasisPtr basis) {
    if (basis->sites() != cat.family.M || basis->bosons() != cat.family.N) {
        throw std::invalid_argument("cat_site_amplitudes: basis sector does not match the family");
    }
    SectorVector out{basis, Vec::Zero(basis->dim())};
    for (int l = 0; l < cat.family.M; ++l) {
        const SuMState member = make_sum_state(cat.family.N, cat.family.xis.col(l));
        out.amps += cat.coefficients(l) * sum_fock_amplitudes(member, basis).amps;
    }
    return out;
}

CatObservables cat_observables(const CatState& cat, BasisPtr basis) {
    const SectorVector psi = cat_site_amplitudes(cat, basis);
    CatObservables out;
    out.norm = psi.norm();
    out.site_density = Eigen::VectorXd::Zero(cat.family.M);
    for (int i = 0; i < basis->dim(); ++i) {
        const double w = std::norm(psi.amps(i));
        const OccupationVector& occ = basis->state(i);
        for (int s = 0; s < cat.family.M; ++s) {
            out.site_density(s) += w * occ.occ[s];
        }
    }
    return out;
}

std::vector<MomentumAmplitude> cat_momentum_amplitudes(const CatState& cat, BasisPtr basis) {
    const SectorVector psi = cat_site_amplitudes(cat, basis);
    const Mat W = momentum_basis_unitary(*basis);
    const Vec mom = W.adjoint() * psi.amps;
    std::vector<MomentumAmplitude> out;
    out.reserve(basis->dim());
    for (int i = 0; i < basis->dim(); ++i) {
        const OccupationVector& p = basis->state(i);
        out.push_back(MomentumAmplitude{p, quasimomentum_class(p), mom(i)});
    }
    return out;
}

std::vector<double> momentum_class_weights(const std::vector<MomentumAmplitude>& amps, int M) {
    std::vector<double> weights(M, 0.0);
    for (const MomentumAmplitude& a : amps) {
        weights[a.lambda] += std::norm(a.amp);
    }
    return weights;
}

}  // namespace bhvar
