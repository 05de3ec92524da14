#include <doctest.h>

#include "sftlab/sft.hpp"

using namespace sftlab;

namespace {

// hard squares: no two horizontally or vertically adjacent 1s
SftSpec hard_square_spec() {
    Window w{{{0, 0}, {1, 0}, {0, 1}}};
    return SftSpec::from_forbidden(Alphabet({"0", "1"}), w, {{1, 1, -1}, {1, -1, 1}});
}

}  // namespace

TEST_CASE("storage modes agree on hard squares") {
    SftSpec fb = hard_square_spec();
    std::vector<std::vector<int>> allowed;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                std::vector<int> syms{a, b, c};
                if (fb.window_allowed(syms)) allowed.push_back(syms);
            }
    CHECK(allowed.size() == 5);
    SftSpec fa = SftSpec::from_allowed(fb.alphabet(), fb.window(), allowed);
    SftSpec fp = SftSpec::from_predicate(fb.alphabet(), fb.window(),
                                         [](const int* s) { return !(s[0] && (s[1] || s[2])); });
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                std::vector<int> syms{a, b, c};
                CHECK(fa.window_allowed(syms) == fb.window_allowed(syms));
                CHECK(fp.window_allowed(syms) == fb.window_allowed(syms));
            }
    SftSpec fm = materialize_allowed(fp);
    CHECK(fm.allowed_codes().size() == 5);
}

TEST_CASE("enumerate hard-square patches") {
    SftSpec spec = hard_square_spec();
    Volume v = Volume::box({0, 0}, {1, 1});
    EnumResult r = enumerate_patches(spec, v, nullptr);
    // only the window anchored at the lower-left corner fits the 2x2 box, so
    // just the two pairs through that corner are constrained
    CHECK((long long)r.count == 10);
    EnumOptions opts;
    opts.collect = true;
    r = enumerate_patches(spec, v, nullptr, opts);
    CHECK(r.patches.size() == 10);
    for (const Patch& p : r.patches) CHECK(check_local(spec, p));
}

TEST_CASE("weighted enumeration") {
    SftSpec spec = SftSpec::full_shift(Alphabet({"a", "b", "c"}));
    Volume v = Volume::box({0, 0}, {1, 0});
    std::vector<std::uint64_t> w{1, 2, 3};
    EnumOptions opts;
    opts.site_weight = &w;
    EnumResult r = enumerate_patches(spec, v, nullptr, opts);
    CHECK((long long)r.count == 36);  // (1+2+3)^2
    std::vector<double> wr{0.5, 1.0, 2.0};
    EnumOptions opts2;
    opts2.site_weight_real = &wr;
    r = enumerate_patches(spec, v, nullptr, opts2);
    CHECK(r.weighted_sum == doctest::Approx(3.5 * 3.5));
}

TEST_CASE("boundary-constrained enumeration") {
    SftSpec spec = hard_square_spec();
    Volume v = Volume({{0, 0}});
    Patch ones(Volume({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}), {1, 1, 1, 1});
    EnumResult r = enumerate_patches(spec, v, &ones);
    CHECK((long long)r.count == 1);  // only 0 fits next to a 1
}

TEST_CASE("extendability and admissible draws") {
    SftSpec spec = hard_square_spec();
    Patch p(Volume({{0, 0}, {1, 0}}), {1, 0});
    AdmissibilityReport rep = check_extendable(spec, p, 2);
    CHECK(rep.locally_admissible);
    CHECK(rep.extendable_margin >= 2);
    Patch bad(Volume({{0, 0}, {1, 0}}), {1, 1});
    // no window fits inside the domino, but every margin-1 extension fails
    CHECK(check_extendable(spec, bad, 1).extendable_margin < 1);

    Volume ring = boundary(make_box(1), 1, Metric::L1);
    for (std::uint64_t k = 0; k < 5; ++k) {
        Patch d = random_admissible_patch(spec, ring, 2, k);
        CHECK(d.volume() == ring);
        CHECK(check_extendable(spec, d, 1).locally_admissible);
    }
    CHECK(random_admissible_patch(spec, ring, 2, 3) == random_admissible_patch(spec, ring, 2, 3));
}

TEST_CASE("spec text round trip") {
    SftSpec spec = materialize_allowed(hard_square_spec());
    std::string txt = spec_to_text(spec);
    SftSpec back = spec_from_text(txt);
    CHECK(back.alphabet() == spec.alphabet());
    CHECK(back.allowed_codes() == spec.allowed_codes());
}

TEST_CASE("gluing holds for the full shift") {
    SftSpec spec = SftSpec::full_shift(Alphabet({"0", "1"}));
    GluingReport rep = gluing_check(spec, 2, 1, 10, 7);
    CHECK(rep.pairs_tested == 10);
    CHECK(rep.failures == 0);
}
