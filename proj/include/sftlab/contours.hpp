#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "sftlab/models.hpp"

namespace sftlab {

struct ContourPath {
    std::vector<Site> sites;  // in traversal order for closed paths
    bool closed = false;
    bool ccw = false;       // meaningful when closed
    Volume interior;        // bounded complement component (closed paths)
    bool interior_clipped = false;  // interior reaches outside the patch volume
};

struct ContourSet {
    Volume arrow_sites;
    std::vector<ContourPath> paths;
};

ContourSet extract(const Patch& p);

std::array<std::array<long long, 3>, 3> m_alpha();
long long trace_m_alpha_pow(int ell);
double spectrum_check();  // max |root - expected| of the characteristic polynomial

struct Loop {
    std::vector<Site> sites;    // cyclic order
    std::vector<int> arrows;    // vertex arrow symbol per site
    bool ccw = false;
};

struct LoopEnumeration {
    long long count = 0;
    double bound = 0;  // pi * ceil(ell/2)^2 * trace(M_alpha^ell)
    std::vector<Loop> loops;
};

// closed self-avoiding turn-constrained arrow loops of length ell with the
// origin in the interior
LoopEnumeration enumerate_encircling_loops(int ell, bool collect = false,
                                           std::uint64_t budget = default_search_budget());

// embed a loop in its matching homogeneous sea on [-n,n]^2
Patch embed_loop_in_sea(const Loop& loop, int n);

Patch tau_flip(const Patch& p, const ContourPath& loop);

double peierls_bound(double beta, int ell);
double beta_star();

}  // namespace sftlab
