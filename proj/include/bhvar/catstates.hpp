// catstates.hpp — orthogonal families of near-localized SU(M) coherent
// states, their equal-weight phased superpositions, and the momentum-class
// structure of those superpositions on a ring.

#pragma once

#include "bhvar/cs_algebra.hpp"
#include "bhvar/fock.hpp"

#include <cstdint>
#include <vector>

namespace bhvar {

// Column l-1 holds xi(l), the member dominated at site l. The Gram matrix of
// the columns is the identity to 1e-12.
struct LocalizedFamily {
    int M{0};
    int N{0};
    Mat xis;
    double epsilon{0.0};
    std::uint64_t seed{0};
};

// Near-localized seeds u_j(l) = sqrt(1-(M-1)eps) delta_jl + sqrt(eps) e^{i phi}
// (random phases, reproducible in seed), symmetrically orthogonalized through
// the inverse square root of their Gram matrix. Requires 0 <= eps < 1/(M-1).
LocalizedFamily build_localized_family(int M, int N, double epsilon, std::uint64_t seed);

// max |Gram - I| over entries.
double family_gram_residual(const LocalizedFamily& family);

struct CatState {
    LocalizedFamily family;
    int k{0};
    Vec coefficients;  // e^{i k~ l}/sqrt(M)
};

// |S_k> = sum_l e^{i k~ l}/sqrt(M) |xi(l)>, k in [1,M].
CatState build_cat(const LocalizedFamily& family, int k);

// Site-basis sector amplitudes of the superposition.
SectorVector cat_site_amplitudes(const CatState& cat, BasisPtr basis);

struct CatObservables {
    Eigen::VectorXd site_density;  // <n_i>
    double norm{0.0};
};

CatObservables cat_observables(const CatState& cat, BasisPtr basis);

struct MomentumAmplitude {
    OccupationVector p;
    int lambda;  // quasi-momentum class of p
    cx amp;
};

// The superposition expressed over momentum Fock states, each tagged with its
// quasi-momentum class.
std::vector<MomentumAmplitude> cat_momentum_amplitudes(const CatState& cat, BasisPtr basis);

// Total |amplitude|^2 per quasi-momentum class (size M).
std::vector<double> momentum_class_weights(const std::vector<MomentumAmplitude>& amps, int M);

}  // namespace bhvar
