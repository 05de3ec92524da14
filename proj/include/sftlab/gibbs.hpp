#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "sftlab/sft.hpp"

namespace sftlab {

// One-letter energies of the form eps0 * s with s in a finite set of
// nonnegative integers; the integer level is stored per symbol so counting
// identities stay exact.
struct Interaction {
    double eps0 = 1.0;
    std::vector<int> levels;        // distinct realized s values, sorted
    std::vector<int> level_of;      // per symbol
    int max_level() const { return levels.back(); }
    int min_level() const { return levels.front(); }
    double energy_of(int sym) const { return eps0 * level_of[std::size_t(sym)]; }
};

Interaction validate_hypothesis_H(const std::vector<double>& energy_table, double rel_tol = 1e-9);

double energy(const Interaction& phi, const Patch& p);
long long energy_level_sum(const Interaction& phi, const Patch& p);

// Z_beta(v, boundary): sum over interior patches b with b (+) boundary locally
// admissible of exp(-beta * H(b)); interior-site energies only. With margin > 0
// the support is additionally filtered by margin-extendability.
double partition_function(const SftSpec& spec, const Interaction& phi, double beta,
                          const Volume& v, const Patch& boundary, int margin = 0,
                          std::uint64_t budget = default_search_budget());

struct GibbsConditional {
    Volume volume;
    Patch boundary;
    double beta = 0;
    std::vector<Patch> support;
    std::vector<double> probs;
};

GibbsConditional gibbs_conditional(const SftSpec& spec, const Interaction& phi, double beta,
                                   const Volume& v, const Patch& boundary, int margin = 0,
                                   std::uint64_t budget = default_search_budget());

// adaptive Simpson quadrature with interval bisection
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth = 60);

double onsager_minus_beta_f(double beta);
double beta_critical_potts(int q);
double ell_critical(int q);

}  // namespace sftlab
