#include "bhvar/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bhvar {

HoppingMatrix build_ring_hopping(int M, double T, bool periodic) {
    if (M < 1) {
        throw std::invalid_argument("build_ring_hopping: invalid lattice, M must be >= 1");
    }
    if (!std::isfinite(T)) {
        throw std::invalid_argument("build_ring_hopping: hopping amplitude must be finite");
    }
    HoppingMatrix hop;
    hop.entries = Eigen::MatrixXd::Zero(M, M);
    for (int j = 0; j + 1 < M; ++j) {
        hop.entries(j, j + 1) = T;
        hop.entries(j + 1, j) = T;
    }
    // Closing bond; for M=2 it coincides with (1,2) and must not double it.
    if (periodic && M >= 3) {
        hop.entries(M - 1, 0) = T;
        hop.entries(0, M - 1) = T;
    }
    return hop;
}

std::optional<std::string> validate(const BHParams& params) {
    if (params.M < 1) {
        return "model: M must be >= 1";
    }
    const Eigen::MatrixXd& T = params.hopping.entries;
    if (T.rows() != params.M || T.cols() != params.M) {
        std::ostringstream os;
        os << "model: hopping matrix is " << T.rows() << "x" << T.cols()
           << ", expected " << params.M << "x" << params.M;
        return os.str();
    }
    if (!std::isfinite(params.U)) {
        return "model: interaction U is not finite";
    }
    for (int j = 0; j < params.M; ++j) {
        for (int l = 0; l < params.M; ++l) {
            if (!std::isfinite(T(j, l))) {
                std::ostringstream os;
                os << "model: non-finite hopping entry at (" << j + 1 << "," << l + 1 << ")";
                return os.str();
            }
        }
    }
    for (int j = 0; j < params.M; ++j) {
        if (T(j, j) != 0.0) {
            std::ostringstream os;
            os << "model: nonzero diagonal hopping entry at (" << j + 1 << "," << j + 1 << ")";
            return os.str();
        }
    }
    for (int j = 0; j < params.M; ++j) {
        for (int l = j + 1; l < params.M; ++l) {
            if (T(j, l) != T(l, j)) {
                std::ostringstream os;
                os << "model: asymmetric hopping entries at (" << j + 1 << "," << l + 1 << ")";
                return os.str();
            }
        }
    }
    return std::nullopt;
}

void require_valid(const BHParams& params) {
    if (auto issue = validate(params)) {
        throw std::invalid_argument(*issue);
    }
}

}  // namespace bhvar
