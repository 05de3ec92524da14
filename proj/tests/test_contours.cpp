#include <doctest.h>

#include <cmath>

#include "sftlab/contours.hpp"
#include "sftlab/gibbs.hpp"

using namespace sftlab;

TEST_CASE("M_alpha and its spectrum") {
    auto m = m_alpha();
    CHECK(m[0] == std::array<long long, 3>{1, 1, 1});
    CHECK(m[1] == std::array<long long, 3>{1, 0, 1});
    CHECK(m[2] == std::array<long long, 3>{1, 1, 0});
    CHECK(spectrum_check() < 1e-12);
    CHECK(beta_star() == doctest::Approx(std::log(1 + std::sqrt(2.0))).epsilon(1e-15));
}

TEST_CASE("trace identity for ell up to 20") {
    // direct matrix powers
    auto m = m_alpha();
    long long a[3][3], b[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = (i == j);
    for (int ell = 1; ell <= 20; ++ell) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                long long s = 0;
                for (int k = 0; k < 3; ++k) s += a[i][k] * m[std::size_t(k)][std::size_t(j)];
                b[i][j] = s;
            }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a[i][j] = b[i][j];
        CHECK(trace_m_alpha_pow(ell) == a[0][0] + a[1][1] + a[2][2]);
        // spectral form
        double l1 = 1 + std::sqrt(2.0), l2 = 1 - std::sqrt(2.0);
        double spectral = std::pow(l1, ell) + std::pow(l2, ell) + std::pow(-1.0, ell);
        CHECK(double(trace_m_alpha_pow(ell)) == doctest::Approx(spectral).epsilon(1e-9));
    }
}

TEST_CASE("encircling loop counts") {
    LoopEnumeration e8 = enumerate_encircling_loops(8, true);
    CHECK(e8.count == 2);  // the 3x3 ring, both circulations
    CHECK(double(e8.count) <= e8.bound);
    CHECK(e8.bound == doctest::Approx(M_PI * 16 * trace_m_alpha_pow(8)));
    CHECK(enumerate_encircling_loops(7).count == 0);
    CHECK(enumerate_encircling_loops(9).count == 0);
    LoopEnumeration e10 = enumerate_encircling_loops(10, true);
    LoopEnumeration e12 = enumerate_encircling_loops(12);
    CHECK(e10.count > e8.count);
    CHECK(e12.count > e10.count);
    CHECK(double(e10.count) <= e10.bound);
    CHECK(double(e12.count) <= e12.bound);

    // each collected loop embeds admissibly and is recovered by extraction
    VertexModel vm = vertex_spec();
    for (const Loop& lp : e10.loops) {
        CHECK(lp.sites.size() == 10);
        Patch sea = embed_loop_in_sea(lp, 6);
        CHECK(check_local(vm.spec, sea));
        ContourSet cs = extract(sea);
        REQUIRE(cs.paths.size() == 1);
        CHECK(cs.paths[0].closed);
        CHECK(cs.paths[0].ccw == lp.ccw);
        CHECK(cs.paths[0].sites.size() == 10);
        CHECK(cs.paths[0].interior.contains({0, 0}));
    }
}

TEST_CASE("tau flip drops the energy by the loop length") {
    VertexModel vm = vertex_spec();
    int cases = 0;
    for (int ell : {8, 10, 12, 14}) {
        LoopEnumeration e = enumerate_encircling_loops(ell, true);
        for (const Loop& lp : e.loops) {
            Patch sea = embed_loop_in_sea(lp, 8);
            ContourSet cs = extract(sea);
            REQUIRE(cs.paths.size() == 1);
            Patch flipped = tau_flip(sea, cs.paths[0]);
            CHECK(check_local(vm.spec, flipped));
            CHECK(energy_level_sum(vm.phi, sea) - energy_level_sum(vm.phi, flipped) == ell);
            ++cases;
            if (cases >= 100) break;
        }
        if (cases >= 100) break;
    }
    CHECK(cases >= 100);
}

TEST_CASE("extraction rejects broken paths") {
    using namespace vertex;
    // lone straight arrow pointing at a dot has no successor arrow
    Volume v = Volume::box({-2, -2}, {2, 2});
    std::vector<int> syms(v.size(), O);
    Patch p(v, std::move(syms));
    std::vector<int> s2 = p.symbols();
    s2[std::size_t(v.index_of({0, 0}))] = arrow_id(1, 1);
    CHECK_THROWS_AS(extract(Patch(v, std::move(s2))), InconsistentPath);
}

TEST_CASE("peierls bound formula and decay") {
    for (int ell : {8, 10, 12}) {
        double b = peierls_bound(1.5, ell);
        double expected = 3 * M_PI * std::pow((ell + 1) / 2, 2) *
                          std::exp(ell * (beta_star() - 1.5));
        CHECK(b == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(peierls_bound(2.0, 12) < peierls_bound(2.0, 8));
    CHECK(peierls_bound(1.0, 8) > peierls_bound(2.0, 8));
}

TEST_CASE("small-volume loop probability sits under the bound") {
    // exact conditional probability that a length-8 loop encircles the origin
    // in the 5x5 box with O-sea boundary, at beta = 1.5
    VertexModel vm = vertex_spec();
    Volume v = make_box(2);
    Patch b = constant_patch(boundary(v, 1, Metric::L1), vertex::O);
    GibbsConditional gc = gibbs_conditional(vm.spec, vm.phi, 1.5, v, b);
    double p_loop = 0;
    for (std::size_t i = 0; i < gc.support.size(); ++i) {
        ContourSet cs = extract(compose(gc.support[i], b));
        for (const ContourPath& path : cs.paths)
            if (path.closed && path.sites.size() == 8 && path.interior.contains({0, 0}))
                p_loop += gc.probs[i];
    }
    CHECK(p_loop > 0);
    CHECK(p_loop <= peierls_bound(1.5, 8));
}
