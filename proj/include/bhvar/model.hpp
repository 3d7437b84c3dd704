// model.hpp — lattice geometry, hopping matrix and Bose-Hubbard parameters
// shared by every scheme.

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace bhvar {

// Symmetric real hopping amplitudes T_{jl}, zero diagonal. Sites are 1-based
// in every diagnostic message; storage is the usual 0-based dense matrix.
struct HoppingMatrix {
    Eigen::MatrixXd entries;

    int sites() const { return static_cast<int>(entries.rows()); }
    double sum() const { return entries.sum(); }
};

struct BHParams {
    double U{0.0};
    int M{0};
    HoppingMatrix hopping;
};

// Ring / open-chain builder. periodic=true closes the bond (M,1); the M=2
// periodic ring collapses to the single bond (1,2). Each physical bond is
// stored once and mirrored.
HoppingMatrix build_ring_hopping(int M, double T, bool periodic);

// nullopt when the matrix is a valid hopping matrix; otherwise a diagnostic
// naming the violating indices (1-based).
std::optional<std::string> validate(const BHParams& params);

// Throwing wrapper for call sites that require validity.
void require_valid(const BHParams& params);

}  // namespace bhvar
