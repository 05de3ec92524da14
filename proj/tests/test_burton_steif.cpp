#include <doctest.h>

#include <cmath>
#include <map>

#include "sftlab/burton_steif.hpp"
#include "sftlab/rng.hpp"

using namespace sftlab;

namespace {

Patch potts_lifted_boundary(const PottsModel& pm, const ToneLift& tl, const Volume& v,
                            std::uint64_t seed, std::uint64_t case_id) {
    Site lo = v.bbox_min() - Site{2, 2}, hi = v.bbox_max() + Site{2, 2};
    Volume spin_box = Volume::box(lo, hi);
    std::vector<int> spins;
    for (std::size_t i = 0; i < spin_box.size(); ++i)
        spins.push_back(int(counter_rng(seed, case_id, i, 7) % std::uint64_t(pm.q)));
    Patch spin_patch(spin_box, std::move(spins));
    Volume ring = boundary(v, 1, Metric::L1);
    std::vector<int> letters;
    for (Site z : ring.sites()) letters.push_back(pm.recode.letter_at(spin_patch, z));
    return lift_sample(tl, Patch(ring, std::move(letters)), seed + 1, case_id);
}

}  // namespace

TEST_CASE("tone counts and beta_N") {
    PottsModel pm = potts_cross_spec(2);
    ToneLift tl = lift(pm.spec, pm.phi, 3);
    CHECK(tl.tone_count_of_level.size() == 5);  // levels 0..4
    CHECK(tl.tone_count_of_level[0] == 81);     // N^maxS tones at the ground level
    CHECK(tl.tone_count_of_level[4] == 1);
    CHECK(beta_n(3, pm.phi.eps0) == doctest::Approx(2 * std::log(3.0)));
    CHECK(beta_n(1, 1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(beta_n(0, 1.0), std::invalid_argument);
}

TEST_CASE("lifted alphabet projects back to colors") {
    PottsModel pm = potts_cross_spec(2);
    ToneLift tl = lift(pm.spec, pm.phi, 2);
    std::size_t total = 0;
    for (std::size_t b = 0; b < pm.spec.alphabet().size(); ++b) {
        total += tl.fiber_of[b].size();
        CHECK((long long)tl.fiber_of[b].size() == tl.tones_of(int(b)));
        for (int s : tl.fiber_of[b]) CHECK(tl.color_of[std::size_t(s)] == int(b));
    }
    CHECK(tl.lifted.alphabet().size() == total);
    Patch colors(Volume({{0, 0}, {1, 0}}), {0, 5});
    Patch lifted = lift_sample(tl, colors, 9, 1);
    CHECK(color_project(tl, lifted) == colors);
}

TEST_CASE("omega fiber count and level sets") {
    PottsModel pm = potts_cross_spec(2);
    ToneLift tl = lift(pm.spec, pm.phi, 2);
    Patch colors(Volume({{0, 0}, {1, 0}}), {0, 0});  // two ground letters
    CHECK((long long)(omega_fiber_count(tl, colors)) == 16 * 16);
    LevelSets ls = level_sets(pm.phi, colors);
    CHECK(ls.gamma.size() == 5);
    CHECK(ls.gamma[0].second.size() == 2);
}

TEST_CASE("counting identity on small volumes") {
    PottsModel pm = potts_cross_spec(2);
    for (int N : {2, 3}) {
        ToneLift tl = lift(pm.spec, pm.phi, N);
        Volume v = Volume::box({0, 0}, {1, 1});
        for (std::uint64_t c = 0; c < 4; ++c) {
            Patch b = potts_lifted_boundary(pm, tl, v, 17, c);
            CHECK(verify_counting_identity(tl, v, b) <= 1e-9);
        }
    }
}

TEST_CASE("uniform conditional identity") {
    PottsModel pm = potts_cross_spec(2);
    ToneLift tl = lift(pm.spec, pm.phi, 2);
    Volume v = Volume::box({0, 0}, {1, 1});
    for (std::uint64_t c = 0; c < 4; ++c) {
        Patch b = potts_lifted_boundary(pm, tl, v, 23, c);
        CHECK(verify_lemma(tl, v, b) <= 1e-12);
    }
}

TEST_CASE("entropy identity per strip width") {
    PottsModel pm = potts_cross_spec(2);
    for (const HtopRow& r : htop_identity_report_potts(pm, 2, {2, 3})) {
        CHECK(r.lifted_per_site == doctest::Approx(r.base_formula).epsilon(1e-11));
    }
}

TEST_CASE("closed-form entropy limits") {
    // N -> 1: subtracting the exact 2 log N leaves log 2
    double eps = 1e-4;
    double h = onsager_htop(1 + eps) - 2 * std::log(1 + eps);
    CHECK(std::abs(h - std::log(2.0)) < 1e-6);
    CHECK(onsager_htop(3.0) > onsager_htop(2.0));
    CHECK_THROWS_AS(onsager_htop(1.0), std::invalid_argument);
}

TEST_CASE("tone draws are deterministic and roughly uniform") {
    PottsModel pm = potts_cross_spec(2);
    ToneLift tl = lift(pm.spec, pm.phi, 3);
    Patch colors(Volume({{0, 0}}), {0});  // 81 tones
    CHECK(lift_sample(tl, colors, 5, 9) == lift_sample(tl, colors, 5, 9));
    std::map<int, int> hist;
    int draws = 8100;
    for (int k = 0; k < draws; ++k) hist[lift_sample(tl, colors, 5, std::uint64_t(k)).symbols()[0]]++;
    double chi2 = 0, expect = double(draws) / 81;
    for (auto& [sym, n] : hist) chi2 += (n - expect) * (n - expect) / expect;
    CHECK(hist.size() == 81);
    CHECK(chi2 < 140);  // 80 dof, generous tail
}

TEST_CASE("vertex tone lift wiring") {
    ToneLift tl = vertex_tone_lift(3);
    CHECK(tl.custom_rules);
    CHECK(tl.lifted.alphabet().size() == 18);
    CHECK(tl.tones_of(vertex::X) == 3);
    CHECK(tl.tones_of(0) == 1);
    CHECK_THROWS_AS((void)lifted_patch_count(tl, Volume({{0, 0}}), Patch{}), std::logic_error);
}
