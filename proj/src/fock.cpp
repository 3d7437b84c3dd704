#include "bhvar/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bhvar {

int OccupationVector::total() const {
    int s = 0;
    for (int m : occ) s += m;
    return s;
}

long long sector_dimension(int M, int N) {
    // binomial(N+M-1, M-1) with overflow guard via the log estimate
    double log_dim = std::lgamma(N + M) - std::lgamma(N + 1.0) - std::lgamma(static_cast<double>(M));
    if (log_dim > 34.5) {  // ~1e15, far beyond any usable cap
        std::ostringstream os;
        os << "sector_dimension: dimension ~exp(" << log_dim << ") is out of range for M=" << M
           << ", N=" << N;
        throw CapacityError(os.str());
    }
    unsigned __int128 dim = 1;
    for (int i = 1; i <= M - 1; ++i) {
        dim = dim * static_cast<unsigned>(N + i) / static_cast<unsigned>(i);  // stays integral
    }
    return static_cast<long long>(dim);
}

FockBasis::FockBasis(int M, int N, int dim_cap) : M_(M), N_(N) {
    if (M < 1) throw std::invalid_argument("FockBasis: M must be >= 1");
    if (N < 0) throw std::invalid_argument("FockBasis: N must be >= 0");
    const long long dim = sector_dimension(M, N);
    if (dim > dim_cap) {
        std::ostringstream os;
        os << "FockBasis: sector dimension " << dim << " exceeds cap " << dim_cap
           << " (M=" << M << ", N=" << N << ")";
        throw CapacityError(os.str());
    }
    states_.reserve(static_cast<size_t>(dim));
    // lexicographic descending: start at (N,0,...,0), end at (0,...,0,N)
    std::vector<int> occ(M, 0);
    occ[0] = N;
    while (true) {
        states_.push_back(OccupationVector{occ});
        // find rightmost non-last position with occ > 0 to decrement
        int j = M - 2;
        while (j >= 0 && occ[j] == 0) --j;
        if (j < 0) break;
        --occ[j];
        int rest = occ[M - 1] + 1;
        occ[M - 1] = 0;
        occ[j + 1] = rest;
    }
    for (int i = 0; i < static_cast<int>(states_.size()); ++i) {
        index_.emplace(states_[i].occ, i);
    }
}

int FockBasis::index_of(const OccupationVector& occ) const {
    auto it = index_.find(occ.occ);
    return it == index_.end() ? -1 : it->second;
}

BasisPtr enumerate_sector(int M, int N, int dim_cap) {
    return std::make_shared<const FockBasis>(M, N, dim_cap);
}

namespace {

void check_site(const FockBasis& basis, int site, const char* who) {
    if (site < 1 || site > basis.sites()) {
        std::ostringstream os;
        os << who << ": site " << site << " out of range [1," << basis.sites() << "]";
        throw std::out_of_range(os.str());
    }
}

}  // namespace

Mat raise_map(const FockBasis& from, const FockBasis& to, int site) {
    check_site(from, site, "raise_map");
    if (to.sites() != from.sites() || to.bosons() != from.bosons() + 1) {
        throw std::invalid_argument("raise_map: target basis must be the N+1 sector");
    }
    Mat R = Mat::Zero(to.dim(), from.dim());
    const int s = site - 1;
    for (int i = 0; i < from.dim(); ++i) {
        OccupationVector occ = from.state(i);
        const int n = occ.occ[s];
        occ.occ[s] = n + 1;
        const int j = to.index_of(occ);
        R(j, i) = std::sqrt(n + 1.0);
    }
    return R;
}

Mat lower_map(const FockBasis& from, const FockBasis& to, int site) {
    check_site(from, site, "lower_map");
    if (to.sites() != from.sites() || to.bosons() != from.bosons() - 1) {
        throw std::invalid_argument("lower_map: target basis must be the N-1 sector");
    }
    Mat L = Mat::Zero(to.dim(), from.dim());
    const int s = site - 1;
    for (int i = 0; i < from.dim(); ++i) {
        OccupationVector occ = from.state(i);
        const int n = occ.occ[s];
        if (n == 0) continue;
        occ.occ[s] = n - 1;
        const int j = to.index_of(occ);
        L(j, i) = std::sqrt(static_cast<double>(n));
    }
    return L;
}

SectorVector apply_ladder(const SectorVector& state, int site, LadderKind kind, int dim_cap) {
    const FockBasis& basis = *state.basis;
    check_site(basis, site, "apply_ladder");
    switch (kind) {
        case LadderKind::Number: {
            SectorVector out{state.basis, state.amps};
            const int s = site - 1;
            for (int i = 0; i < basis.dim(); ++i) {
                out.amps(i) *= static_cast<double>(basis.state(i).occ[s]);
            }
            return out;
        }
        case LadderKind::Raise: {
            BasisPtr up = enumerate_sector(basis.sites(), basis.bosons() + 1, dim_cap);
            return SectorVector{up, raise_map(basis, *up, site) * state.amps};
        }
        case LadderKind::Lower: {
            if (basis.bosons() == 0) {
                return SectorVector{state.basis, Vec::Zero(basis.dim())};
            }
            BasisPtr down = enumerate_sector(basis.sites(), basis.bosons() - 1, dim_cap);
            return SectorVector{down, lower_map(basis, *down, site) * state.amps};
        }
    }
    throw std::logic_error("apply_ladder: unknown kind");
}

Mat transfer_matrix(const FockBasis& basis, int create, int annihilate) {
    check_site(basis, create, "transfer_matrix");
    check_site(basis, annihilate, "transfer_matrix");
    Mat A = Mat::Zero(basis.dim(), basis.dim());
    const int c = create - 1;
    const int a = annihilate - 1;
    for (int i = 0; i < basis.dim(); ++i) {
        const OccupationVector& occ = basis.state(i);
        const int na = occ.occ[a];
        if (na == 0) continue;
        if (c == a) {
            A(i, i) = static_cast<double>(na);
            continue;
        }
        OccupationVector out = occ;
        out.occ[a] = na - 1;
        out.occ[c] += 1;
        const int j = basis.index_of(out);
        A(j, i) = std::sqrt(static_cast<double>(na) * out.occ[c]);
    }
    return A;
}

Mat build_bh_matrix(const BHParams& params, const FockBasis& basis) {
    require_valid(params);
    if (params.M != basis.sites()) {
        throw std::invalid_argument("build_bh_matrix: basis has wrong site count");
    }
    Mat H = Mat::Zero(basis.dim(), basis.dim());
    for (int i = 0; i < basis.dim(); ++i) {
        double diag = 0.0;
        for (int n : basis.state(i).occ) {
            diag += 0.5 * params.U * n * (n - 1.0);
        }
        H(i, i) = diag;
    }
    const Eigen::MatrixXd& T = params.hopping.entries;
    for (int j = 1; j <= params.M; ++j) {
        for (int l = 1; l <= params.M; ++l) {
            if (j == l || T(j - 1, l - 1) == 0.0) continue;
            H -= T(j - 1, l - 1) * transfer_matrix(basis, j, l);
        }
    }
    return H;
}

std::vector<SectorVector> evolve_exact(const SectorVector& psi0, const BHParams& params,
                                       const std::vector<double>& t_grid) {
    if (!psi0.amps.allFinite()) {
        throw std::invalid_argument("evolve_exact: non-finite input state");
    }
    if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
        throw std::invalid_argument("evolve_exact: time grid must be ascending");
    }
    const Mat H = build_bh_matrix(params, *psi0.basis);
    Eigen::SelfAdjointEigenSolver<Mat> solver(H);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("evolve_exact: eigendecomposition failed");
    }
    const Eigen::VectorXd& w = solver.eigenvalues();
    const Mat& V = solver.eigenvectors();
    const Vec coeffs = V.adjoint() * psi0.amps;
    std::vector<SectorVector> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        Vec rotated(coeffs.size());
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
            rotated(i) = coeffs(i) * std::exp(cx(0.0, -w(i) * t));
        }
        out.push_back(SectorVector{psi0.basis, V * rotated});
    }
    return out;
}

int quasimomentum_class(const OccupationVector& p) {
    const int M = p.sites();
    long long acc = 0;
    for (int k = 1; k <= M; ++k) {
        acc += static_cast<long long>(k) * p.occ[k - 1];
    }
    return static_cast<int>(acc % M);
}

Mat dft_matrix(int M) {
    Mat F(M, M);
    const double norm = 1.0 / std::sqrt(static_cast<double>(M));
    for (int k = 1; k <= M; ++k) {
        for (int j = 1; j <= M; ++j) {
            const double phase = -2.0 * pi * k * j / M;
            F(k - 1, j - 1) = norm * std::exp(cx(0.0, phase));
        }
    }
    return F;
}

Mat momentum_basis_unitary(const FockBasis& basis, int dim_cap) {
    const int M = basis.sites();
    const int N = basis.bosons();
    const Mat F = dft_matrix(M);

    // Mode raising maps per sector: B_k^+ = sum_j conj(F(k,j)) a_j^+.
    std::vector<BasisPtr> sectors;
    sectors.reserve(N + 1);
    for (int n = 0; n <= N; ++n) sectors.push_back(enumerate_sector(M, n, dim_cap));

    std::vector<std::vector<Mat>> mode_raise(N);  // [sector n][mode k-1]
    for (int n = 0; n < N; ++n) {
        mode_raise[n].reserve(M);
        std::vector<Mat> site_raise;
        site_raise.reserve(M);
        for (int j = 1; j <= M; ++j) {
            site_raise.push_back(raise_map(*sectors[n], *sectors[n + 1], j));
        }
        for (int k = 1; k <= M; ++k) {
            Mat B = Mat::Zero(sectors[n + 1]->dim(), sectors[n]->dim());
            for (int j = 1; j <= M; ++j) {
                B += std::conj(F(k - 1, j - 1)) * site_raise[j - 1];
            }
            mode_raise[n].push_back(std::move(B));
        }
    }

    Mat W(basis.dim(), basis.dim());
    for (int col = 0; col < basis.dim(); ++col) {
        const OccupationVector& p = basis.state(col);
        Vec v = Vec::Ones(1);  // vacuum sector amplitude
        int n = 0;
        double log_fact = 0.0;
        for (int k = 1; k <= M; ++k) {
            for (int rep = 0; rep < p.occ[k - 1]; ++rep) {
                v = mode_raise[n][k - 1] * v;
                ++n;
            }
            log_fact += std::lgamma(p.occ[k - 1] + 1.0);
        }
        W.col(col) = v * std::exp(-0.5 * log_fact);
    }
    return W;
}

Mat displacement_matrix(const FockBasis& basis, int dim_cap) {
    const int M = basis.sites();
    const double sigma = 2.0 * pi / M;
    const Mat W = momentum_basis_unitary(basis, dim_cap);
    Vec phases(basis.dim());
    for (int p = 0; p < basis.dim(); ++p) {
        long long weighted = 0;
        const OccupationVector& occ = basis.state(p);
        for (int k = 1; k <= M; ++k) weighted += static_cast<long long>(k) * occ.occ[k - 1];
        phases(p) = std::exp(cx(0.0, -sigma * weighted));
    }
    return W * phases.asDiagonal() * W.adjoint();
}

}  // namespace bhvar
