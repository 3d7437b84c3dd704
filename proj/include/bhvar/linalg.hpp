// linalg.hpp — small dense linear-algebra helpers shared across modules:
// Hermitian matrix exponentials, a series exponential for nilpotent-dominated
// generators, and state comparison up to a global phase.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace bhvar {

using cx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;

// Integer power of a complex number by repeated multiplication.
inline cx cx_pow(cx base, int n) {
    cx out{1.0, 0.0};
    for (int i = 0; i < n; ++i) out *= base;
    return out;
}

// Hermiticity residual max|A - A†| (absolute).
inline double hermiticity_residual(const Mat& A) {
    return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

// exp(i*s*H) for Hermitian H via eigendecomposition.
inline Mat expm_i_hermitian(const Mat& H, double s = 1.0) {
    if (H.rows() != H.cols()) {
        throw std::invalid_argument("expm_i_hermitian: matrix must be square");
    }
    Eigen::SelfAdjointEigenSolver<Mat> solver(H);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("expm_i_hermitian: eigendecomposition failed");
    }
    const Eigen::VectorXd& w = solver.eigenvalues();
    const Mat& V = solver.eigenvectors();
    Vec phases(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        phases(i) = std::exp(cx(0.0, s * w(i)));
    }
    return V * phases.asDiagonal() * V.adjoint();
}

// exp(A)·v by the plain series. Intended for generators that act nilpotently
// on v within a fixed-N sector (the series terminates); max_terms is a guard.
inline Vec expm_series_apply(const Mat& A, const Vec& v, int max_terms = 512,
                             double term_tol = 1e-300) {
    if (A.rows() != A.cols() || A.cols() != v.size()) {
        throw std::invalid_argument("expm_series_apply: dimension mismatch");
    }
    Vec acc = v;
    Vec term = v;
    for (int n = 1; n <= max_terms; ++n) {
        term = (A * term) / static_cast<double>(n);
        acc += term;
        if (term.norm() <= term_tol * acc.norm()) return acc;
    }
    throw std::runtime_error("expm_series_apply: series did not terminate");
}

// Phase fitted from the largest-magnitude amplitude pair, then the max
// elementwise residual of v against phase*w. Used wherever two states are
// compared up to one global phase.
struct PhaseFit {
    cx phase{1.0, 0.0};
    double residual{0.0};
};

inline PhaseFit phase_aligned_residual(const Vec& v, const Vec& w) {
    if (v.size() != w.size()) {
        throw std::invalid_argument("phase_aligned_residual: dimension mismatch");
    }
    Eigen::Index best = 0;
    double best_mag = -1.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double m = std::min(std::abs(v(i)), std::abs(w(i)));
        if (m > best_mag) {
            best_mag = m;
            best = i;
        }
    }
    PhaseFit fit;
    if (best_mag <= 0.0) {
        fit.residual = std::max(v.cwiseAbs().maxCoeff(), w.cwiseAbs().maxCoeff());
        return fit;
    }
    fit.phase = v(best) / w(best);
    fit.phase /= std::abs(fit.phase);
    fit.residual = (v - fit.phase * w).cwiseAbs().maxCoeff();
    return fit;
}

}  // namespace bhvar
