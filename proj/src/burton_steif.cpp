#include "sftlab/burton_steif.hpp"

#include <cmath>
#include <stdexcept>

#include "sftlab/rng.hpp"
#include "sftlab/transfer.hpp"

namespace sftlab {

double u128_to_double(u128 v) {
    double hi = double(std::uint64_t(v >> 64));
    double lo = double(std::uint64_t(v));
    return hi * 18446744073709551616.0 + lo;
}

double beta_n(int N, double eps0) {
    if (N < 1) throw std::invalid_argument("N >= 1 required");
    return std::log(double(N)) / eps0;
}

ToneLift lift(const SftSpec& base, const Interaction& phi, int N, std::size_t alphabet_cap) {
    if (N < 1) throw std::invalid_argument("N >= 1 required");
    if (phi.level_of.size() != base.alphabet().size())
        throw std::invalid_argument("interaction table does not match the alphabet");

    ToneLift tl;
    tl.base = base;
    tl.phi = phi;
    tl.N = N;

    int maxs = phi.max_level();
    tl.tone_count_of_level.assign(std::size_t(maxs) + 1, 0);
    for (int s = 0; s <= maxs; ++s) {
        long long c = 1;
        for (int k = 0; k < maxs - s; ++k) {
            if (c > (1LL << 56) / N) throw AlphabetBudgetExceeded("tone count overflow");
            c *= N;
        }
        tl.tone_count_of_level[std::size_t(s)] = c;
    }

    std::size_t nbase = base.alphabet().size();
    std::size_t total = 0;
    for (std::size_t b = 0; b < nbase; ++b)
        total += std::size_t(tl.tone_count_of_level[std::size_t(phi.level_of[b])]);
    if (total > alphabet_cap) throw AlphabetBudgetExceeded("lifted alphabet beyond cap");

    std::vector<std::string> names;
    tl.fiber_of.assign(nbase, {});
    for (std::size_t b = 0; b < nbase; ++b) {
        long long nt = tl.tone_count_of_level[std::size_t(phi.level_of[b])];
        for (long long t = 0; t < nt; ++t) {
            tl.fiber_of[b].push_back(int(names.size()));
            tl.color_of.push_back(int(b));
            names.push_back(base.alphabet().name(int(b)) + "~" + std::to_string(t));
        }
    }

    SftSpec base_copy = base;
    std::vector<int> colors = tl.color_of;
    int wsize = base.window_size();
    auto member = [base_copy, colors, wsize](const int* syms) {
        std::vector<int> proj((std::size_t)wsize);
        for (int i = 0; i < wsize; ++i) proj[std::size_t(i)] = colors[std::size_t(syms[i])];
        return base_copy.window_allowed(proj.data());
    };
    tl.lifted = SftSpec::from_predicate(Alphabet(names), base.window(), member);
    if (!base.pair_offsets().empty()) {
        SftSpec bc = base;
        auto pf = [bc, colors](int a, int b, Site e) {
            return bc.pair_plausible(colors[std::size_t(a)], colors[std::size_t(b)], e);
        };
        tl.lifted.set_pair_table(pf, base.pair_offsets());
    }
    return tl;
}

ToneLift vertex_tone_lift(int N) {
    VertexModel vm = vertex_spec();
    ToneLift tl;
    tl.base = vm.spec;
    tl.phi = vm.phi;
    tl.N = N;
    tl.lifted = vertex_lift_spec(N);
    tl.custom_rules = true;
    tl.tone_count_of_level = {(long long)N, 1};  // dots level 0, arrows level 1
    tl.fiber_of.assign(14, {});
    for (int a = 0; a < 12; ++a) {
        tl.color_of.push_back(a);
        tl.fiber_of[std::size_t(a)].push_back(a);
    }
    for (int t = 0; t < N; ++t) {
        tl.color_of.push_back(vertex::X);
        tl.fiber_of[vertex::X].push_back(12 + t);
    }
    for (int t = 0; t < N; ++t) {
        tl.color_of.push_back(vertex::O);
        tl.fiber_of[vertex::O].push_back(12 + N + t);
    }
    return tl;
}

LevelSets level_sets(const Interaction& phi, const Patch& color_patch) {
    int maxs = phi.max_level();
    std::vector<std::vector<Site>> buckets(std::size_t(maxs) + 1);
    const Volume& v = color_patch.volume();
    for (std::size_t i = 0; i < v.size(); ++i) {
        int s = phi.level_of[std::size_t(color_patch.symbols()[i])];
        buckets[std::size_t(s)].push_back(v[i]);
    }
    LevelSets ls;
    for (int s = 0; s <= maxs; ++s) ls.gamma.push_back({s, Volume(buckets[std::size_t(s)])});
    return ls;
}

u128 omega_fiber_count(const ToneLift& tl, const Patch& color_patch) {
    u128 prod = 1;
    for (int sym : color_patch.symbols())
        prod *= u128(std::uint64_t(tl.tones_of(sym)));
    return prod;
}

Patch color_project(const ToneLift& tl, const Patch& lifted_patch) {
    std::vector<int> syms;
    for (int s : lifted_patch.symbols()) syms.push_back(tl.color_of[std::size_t(s)]);
    return Patch(lifted_patch.volume(), std::move(syms));
}

u128 lifted_patch_count(const ToneLift& tl, const Volume& v, const Patch& lifted_boundary,
                        std::uint64_t budget) {
    if (tl.custom_rules)
        throw std::logic_error("fiber-grouped counting needs the generic lift rule");
    Patch cb = color_project(tl, lifted_boundary);
    std::vector<std::uint64_t> w;
    for (std::size_t b = 0; b < tl.base.alphabet().size(); ++b)
        w.push_back(std::uint64_t(tl.fiber_of[b].size()));
    EnumOptions opts;
    opts.budget = budget;
    opts.site_weight = &w;
    return enumerate_patches(tl.base, v, &cb, opts).count;
}

double verify_counting_identity(const ToneLift& tl, const Volume& v,
                                const Patch& lifted_boundary, std::uint64_t budget) {
    u128 lhs = lifted_patch_count(tl, v, lifted_boundary, budget);
    if (lhs == 0) throw EmptySupport();
    double bn = beta_n(tl.N, tl.phi.eps0);
    Patch cb = color_project(tl, lifted_boundary);
    double z = partition_function(tl.base, tl.phi, bn, v, cb, /*margin=*/0, budget);
    double log_rhs = std::log(double(tl.N)) * tl.phi.max_level() * double(v.size()) + std::log(z);
    double log_lhs = std::log(u128_to_double(lhs));
    return std::abs(std::expm1(log_lhs - log_rhs));
}

double verify_lemma(const ToneLift& tl, const Volume& v, const Patch& lifted_boundary,
                    std::uint64_t budget) {
    if (tl.custom_rules)
        throw std::logic_error("fiber-grouped counting needs the generic lift rule");
    double bn = beta_n(tl.N, tl.phi.eps0);
    Patch cb = color_project(tl, lifted_boundary);
    GibbsConditional gc = gibbs_conditional(tl.base, tl.phi, bn, v, cb, /*margin=*/0, budget);
    u128 omega = 0;
    std::vector<u128> fibers;
    for (const Patch& a : gc.support) {
        fibers.push_back(omega_fiber_count(tl, a));
        omega += fibers.back();
    }
    if (omega == 0) throw EmptySupport();
    double uniform = 1.0 / u128_to_double(omega);
    double dev = 0;
    for (std::size_t i = 0; i < gc.support.size(); ++i)
        dev = std::max(dev, std::abs(uniform - gc.probs[i] / u128_to_double(fibers[i])));
    return dev;
}

Patch lift_sample(const ToneLift& tl, const Patch& color_patch, std::uint64_t seed,
                  std::uint64_t nonce) {
    std::vector<int> syms;
    const auto& cs = color_patch.symbols();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        long long nt = tl.tones_of(cs[i]);
        double u = to_unit_double(counter_rng(seed, nonce, std::uint64_t(i), 0));
        long long t = std::min(nt - 1, (long long)(u * double(nt)));
        syms.push_back(tl.fiber_of[std::size_t(cs[i])][std::size_t(t)]);
    }
    return Patch(color_patch.volume(), std::move(syms));
}

std::vector<HtopRow> htop_identity_report_potts(const PottsModel& pm, int N,
                                                const std::vector<int>& widths) {
    double bn = beta_n(N, pm.phi.eps0);
    int maxs = pm.phi.max_level();
    std::vector<double> wt = pm.letter_weight_tones(N);
    std::vector<double> wb = pm.letter_weight_beta(bn);
    std::vector<HtopRow> rows;
    for (int w : widths) {
        HtopRow r;
        r.width = w;
        r.lifted_per_site = potts_letter_strip_log_lambda(pm.q, w, wt) / w;
        r.base_formula =
            bn * pm.phi.eps0 * maxs + potts_letter_strip_log_lambda(pm.q, w, wb) / w;
        rows.push_back(r);
    }
    return rows;
}

double onsager_htop(double N) {
    if (!(N > 1)) throw std::invalid_argument("N > 1 required");
    double n2 = N * N, n4 = n2 * n2;
    double a = (n4 + 1) / (2 * n2);
    double ik = ((n4 - 1) / (2 * n2));  // 1/sqrt(kappa)
    ik *= ik;                           // 1/kappa
    auto f = [a, ik](double phi) {
        double s = std::sqrt(ik * ik + 1 - 2 * ik * std::cos(2 * phi));
        return std::log(a * a + s);
    };
    double integral = integrate(f, 0, M_PI, 1e-11);
    return 2 * std::log(N) + std::log(2.0) / 2 + integral / (2 * M_PI);
}

}  // namespace sftlab
