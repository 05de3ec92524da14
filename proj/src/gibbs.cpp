#include "sftlab/gibbs.hpp"

#include <algorithm>
#include <cmath>

namespace sftlab {

Interaction validate_hypothesis_H(const std::vector<double>& energy_table, double rel_tol) {
    Interaction phi;
    phi.level_of.assign(energy_table.size(), 0);
    double vmax = 0;
    for (double e : energy_table) {
        if (e < 0) throw NotCommensurable("negative energy; shift the table before validating");
        vmax = std::max(vmax, e);
    }
    if (vmax == 0) {
        phi.eps0 = 1.0;
        phi.levels = {0};
        return phi;
    }
    // positive generator by a tolerant Euclid pass over the distinct values
    std::vector<double> vals;
    for (double e : energy_table)
        if (e > rel_tol * vmax) vals.push_back(e);
    double g = vals.front();
    for (double v : vals) {
        double a = std::max(g, v), b = std::min(g, v);
        while (b > rel_tol * vmax) {
            double r = std::fmod(a, b);
            if (r > b * (1 - rel_tol) || r < rel_tol * vmax) r = 0;
            a = b;
            b = r;
        }
        g = a;
    }
    phi.eps0 = g;
    for (std::size_t i = 0; i < energy_table.size(); ++i) {
        double ratio = energy_table[i] / g;
        long long s = std::llround(ratio);
        if (std::abs(ratio - double(s)) > rel_tol * std::max(1.0, ratio))
            throw NotCommensurable("energy values do not lie on a common lattice");
        phi.level_of[i] = int(s);
    }
    phi.levels = phi.level_of;
    std::sort(phi.levels.begin(), phi.levels.end());
    phi.levels.erase(std::unique(phi.levels.begin(), phi.levels.end()), phi.levels.end());
    return phi;
}

double energy(const Interaction& phi, const Patch& p) {
    return phi.eps0 * double(energy_level_sum(phi, p));
}

long long energy_level_sum(const Interaction& phi, const Patch& p) {
    long long total = 0;
    for (int sym : p.symbols()) {
        if (sym < 0 || std::size_t(sym) >= phi.level_of.size())
            throw UnknownSymbol("symbol outside the interaction table");
        total += phi.level_of[std::size_t(sym)];
    }
    return total;
}

static EnumResult gibbs_enumerate(const SftSpec& spec, const Interaction& phi, double beta,
                                  const Volume& v, const Patch& boundary, int margin,
                                  std::uint64_t budget, bool collect) {
    std::vector<double> w(spec.alphabet().size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-beta * phi.energy_of(int(i)));
    EnumOptions opts;
    opts.budget = budget;
    opts.site_weight_real = &w;
    opts.collect = collect;
    if (margin <= 0) return enumerate_patches(spec, v, &boundary, opts);
    // margin filtering: collect, test extendability of each composite, re-sum
    opts.collect = true;
    EnumResult all = enumerate_patches(spec, v, &boundary, opts);
    EnumResult kept;
    for (const auto& p : all.patches) {
        Patch comp = compose(p, boundary);
        if (check_extendable(spec, comp, margin, budget).extendable_margin == margin) {
            kept.count += 1;
            kept.weighted_sum += std::exp(-beta * energy(phi, p));
            if (collect) kept.patches.push_back(p);
        }
    }
    return kept;
}

double partition_function(const SftSpec& spec, const Interaction& phi, double beta, const Volume& v,
                          const Patch& boundary, int margin, std::uint64_t budget) {
    EnumResult r = gibbs_enumerate(spec, phi, beta, v, boundary, margin, budget, false);
    if (r.count == 0) throw EmptySupport("no interior patch compatible with the boundary");
    return r.weighted_sum;
}

GibbsConditional gibbs_conditional(const SftSpec& spec, const Interaction& phi, double beta,
                                   const Volume& v, const Patch& boundary, int margin,
                                   std::uint64_t budget) {
    EnumResult r = gibbs_enumerate(spec, phi, beta, v, boundary, margin, budget, true);
    if (r.count == 0) throw EmptySupport("no interior patch compatible with the boundary");
    GibbsConditional out;
    out.volume = v;
    out.boundary = boundary;
    out.beta = beta;
    out.support = std::move(r.patches);
    out.probs.reserve(out.support.size());
    double z = 0;
    std::vector<double> w;
    for (const auto& p : out.support) {
        double e = std::exp(-beta * energy(phi, p));
        w.push_back(e);
        z += e;
    }
    for (double e : w) out.probs.push_back(e / z);
    return out;
}

namespace {

double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b, double fb,
             double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, flm, m, fm);
    double right = simpson(m, fm, frm, b, fb);
    if (depth <= 0) throw QuadratureFailure("adaptive quadrature depth exhausted");
    if (std::abs(left + right - whole) <= 15 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth) {
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(a, fa, fm, b, fb);
    return adapt(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

double onsager_minus_beta_f(double beta) {
    if (beta <= 0) throw std::invalid_argument("onsager formula needs beta > 0");
    double sh = std::sinh(beta);
    double kappa = 1.0 / (sh * sh);
    double c2 = std::cosh(beta) * std::cosh(beta);
    auto integrand = [&](double phi) {
        double inner = 1 + kappa * kappa - 2 * kappa * std::cos(2 * phi);
        if (inner < 0) inner = 0;
        return std::log(c2 + std::sqrt(inner) / kappa);
    };
    const double pi = std::acos(-1.0);
    double integral;
    double crit = std::log(1 + std::sqrt(2.0));  // kappa = 1 there: log singularity
    if (std::abs(kappa - 1.0) < 1e-12) {
        integral = integrate(integrand, 0, pi / 2 - 1e-9, 1e-10) +
                   integrate(integrand, pi / 2 + 1e-9, pi, 1e-10);
        (void)crit;
    } else {
        integral = integrate(integrand, 0, pi, 1e-10);
    }
    return -beta + 0.5 * std::log(2.0) + integral / (2 * pi);
}

double beta_critical_potts(int q) {
    if (q < 2) throw std::invalid_argument("q >= 2 required");
    return std::log(std::sqrt(double(q)) + 1) / 2;
}

double ell_critical(int q) {
    if (q < 2) throw std::invalid_argument("q >= 2 required");
    return std::sqrt(double(q)) + 1;
}

}  // namespace sftlab
