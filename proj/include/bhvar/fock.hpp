// fock.hpp — exact fixed-N Fock-sector representation: basis enumeration,
// ladder actions, the Bose-Hubbard matrix, exact time evolution, and the
// site<->momentum machinery (mode transform, sector DFT unitary, ring
// displacement operator, quasi-momentum classes).

#pragma once

#include "bhvar/linalg.hpp"
#include "bhvar/model.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bhvar {

inline constexpr int kDefaultDimCap = 20000;

class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OccupationVector {
    std::vector<int> occ;

    int sites() const { return static_cast<int>(occ.size()); }
    int total() const;
    bool operator==(const OccupationVector& other) const { return occ == other.occ; }
};

// Complete fixed-(M,N) sector, ordered lexicographically descending on the
// occupation tuple, with the inverse index map.
class FockBasis {
public:
    FockBasis(int M, int N, int dim_cap);

    int sites() const { return M_; }
    int bosons() const { return N_; }
    int dim() const { return static_cast<int>(states_.size()); }
    const OccupationVector& state(int i) const { return states_[i]; }
    const std::vector<OccupationVector>& states() const { return states_; }

    // -1 when the occupation does not belong to the sector.
    int index_of(const OccupationVector& occ) const;

private:
    int M_;
    int N_;
    std::vector<OccupationVector> states_;
    std::map<std::vector<int>, int> index_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

BasisPtr enumerate_sector(int M, int N, int dim_cap = kDefaultDimCap);

// binomial(N+M-1, M-1), the sector dimension; throws CapacityError above cap.
long long sector_dimension(int M, int N);

struct SectorVector {
    BasisPtr basis;
    Vec amps;

    double norm() const { return amps.norm(); }
};

enum class LadderKind { Raise, Lower, Number };

// a_site^+, a_site or n_site applied to a sector vector (1-based site).
// Raise/Lower land in the N±1 sector; lowering the N=0 sector gives the
// zero vector in the same sector.
SectorVector apply_ladder(const SectorVector& state, int site, LadderKind kind,
                          int dim_cap = kDefaultDimCap);

// Matrix of a_site^+ from sector N to sector N+1 (1-based site).
Mat raise_map(const FockBasis& from, const FockBasis& to, int site);
// Matrix of a_site from sector N to sector N-1.
Mat lower_map(const FockBasis& from, const FockBasis& to, int site);

// Matrix of a_create^+ a_annihilate on a sector (1-based sites).
Mat transfer_matrix(const FockBasis& basis, int create, int annihilate);

// H = (U/2) sum_j (n_j^2 - n_j) - sum_{j!=l} T_{jl} a_j^+ a_l.
Mat build_bh_matrix(const BHParams& params, const FockBasis& basis);

// |psi(t)> = exp(-iHt)|psi(0)> for every t in the (ascending) grid, via
// eigendecomposition of the Hermitian H; one decomposition serves all times.
std::vector<SectorVector> evolve_exact(const SectorVector& psi0, const BHParams& params,
                                       const std::vector<double>& t_grid);

// lambda(p) = (sum_k k p_k) mod M with mode labels k = 1..M.
int quasimomentum_class(const OccupationVector& p);

// F(k,j) = exp(-i 2pi k j / M)/sqrt(M) with HERE 1-based k,j in the phase
// (row k-1, col j-1): v = F z maps site amplitudes to mode amplitudes.
Mat dft_matrix(int M);

// Sector unitary with columns <m|p>: momentum Fock states built by applying
// mode creation operators b_k^+ = sum_j conj(F(k,j)) a_j^+ to the vacuum.
Mat momentum_basis_unitary(const FockBasis& basis, int dim_cap = kDefaultDimCap);

// Ring displacement exp(-i sigma K), sigma = 2pi/M, K = sum_k k b_k^+ b_k,
// diagonal in the momentum basis; satisfies D a_l D^+ = a_{l+1}.
Mat displacement_matrix(const FockBasis& basis, int dim_cap = kDefaultDimCap);

}  // namespace bhvar
