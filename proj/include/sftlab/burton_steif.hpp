#pragma once
#include <cstdint>
#include <vector>

#include "sftlab/gibbs.hpp"
#include "sftlab/models.hpp"
#include "sftlab/sft.hpp"

namespace sftlab {

// Tone lift X_N: each color of energy level s carries N^(maxS - s) tones; the
// lifted window rule is color-blindness of the base rule unless a model
// attaches custom rules.
struct ToneLift {
    SftSpec base;
    Interaction phi;
    int N = 1;
    SftSpec lifted;
    std::vector<long long> tone_count_of_level;  // indexed by level s, 0..maxS
    std::vector<int> color_of;                   // lifted symbol -> base symbol
    std::vector<std::vector<int>> fiber_of;      // base symbol -> lifted symbols
    bool custom_rules = false;

    long long tones_of(int base_sym) const {
        return tone_count_of_level[std::size_t(phi.level_of[std::size_t(base_sym)])];
    }
};

ToneLift lift(const SftSpec& base, const Interaction& phi, int N,
              std::size_t alphabet_cap = 1'000'000);
ToneLift vertex_tone_lift(int N);  // the 12 + 2N symbol lift with its extra rule

double beta_n(int N, double eps0);

struct LevelSets {
    std::vector<std::pair<int, Volume>> gamma;  // (level s, sites of that level)
};
LevelSets level_sets(const Interaction& phi, const Patch& color_patch);

u128 omega_fiber_count(const ToneLift& tl, const Patch& color_patch);
Patch color_project(const ToneLift& tl, const Patch& lifted_patch);

// |Omega_Lambda(x)|: lifted patches on v compatible with the lifted boundary
u128 lifted_patch_count(const ToneLift& tl, const Volume& v, const Patch& lifted_boundary,
                        std::uint64_t budget = default_search_budget());

// relative deviation of |Omega| against N^(maxS |v|) Z_{beta_N}(v, color boundary)
double verify_counting_identity(const ToneLift& tl, const Volume& v, const Patch& lifted_boundary,
                                std::uint64_t budget = default_search_budget());

// max |1/|Omega| - mu_{beta_N}([a]|x) / fiber(a)| over the support
double verify_lemma(const ToneLift& tl, const Volume& v, const Patch& lifted_boundary,
                    std::uint64_t budget = default_search_budget());

Patch lift_sample(const ToneLift& tl, const Patch& color_patch, std::uint64_t seed,
                  std::uint64_t nonce = 0);

struct HtopRow {
    int width = 0;
    double lifted_per_site = 0;  // (log lambda of the tone-weighted strip)/w
    double base_formula = 0;     // beta_N eps0 maxS + (log lambda_base at beta_N)/w
};
std::vector<HtopRow> htop_identity_report_potts(const PottsModel& pm, int N,
                                                const std::vector<int>& widths);

double u128_to_double(u128 v);

// closed-form h_top(X_N) for the q=2 cross coding; valid for N > 1
double onsager_htop(double N);

}  // namespace sftlab
