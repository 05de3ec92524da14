#include <doctest.h>

#include <cmath>
#include <set>

#include "sftlab/models.hpp"
#include "sftlab/sft.hpp"

using namespace sftlab;

TEST_CASE("vertex arrow coding") {
    using namespace vertex;
    for (int a = 0; a < 12; ++a) {
        CHECK(arrow_id(d_in(a), d_out(a)) == a);
        CHECK(tau(tau(a)) == a);
        CHECK(is_arrow(tau(a)));
    }
    CHECK(tau(X) == O);
    CHECK(tau(O) == X);
    CHECK(arrow_id(0, 2) == -1);  // reversal is not a symbol
}

TEST_CASE("vertex census matches the advertised counts") {
    VertexModel vm = vertex_spec();
    VertexCensus c = vertex_census(vm.spec);
    CHECK(c.total == 248);
    CHECK(c.center_dot == 90);
    CHECK(c.center_cross == 90);
    CHECK(c.center_straight == 36);
    CHECK(c.center_corner == 32);
    CHECK(c.center_dot + c.center_cross + c.center_straight + c.center_corner == c.total);
}

TEST_CASE("vertex allowed set is dihedral and tau invariant") {
    VertexModel vm = vertex_spec();
    std::set<std::vector<int>> allowed;
    for (std::uint64_t code : vm.spec.allowed_codes()) allowed.insert(vm.spec.decode(code));
    const Window& w = vm.spec.window();
    for (const DihedralAction& g : vertex_dihedral_actions()) {
        for (const auto& syms : allowed) {
            std::vector<int> mapped(syms.size());
            for (std::size_t i = 0; i < syms.size(); ++i) {
                Site img = g.apply(w.offsets[i]);
                int j = -1;
                for (std::size_t k = 0; k < w.offsets.size(); ++k)
                    if (w.offsets[k] == img) j = int(k);
                REQUIRE(j >= 0);
                mapped[std::size_t(j)] = g.apply_symbol(syms[i]);
            }
            CHECK(allowed.count(mapped) == 1);
        }
    }
    for (const auto& syms : allowed) {
        std::vector<int> t;
        for (int s : syms) t.push_back(vertex::tau(s));
        CHECK(allowed.count(t) == 1);
    }
}

TEST_CASE("vertex energies sit at two levels") {
    VertexModel vm = vertex_spec();
    CHECK(vm.phi.eps0 == doctest::Approx(1.0));
    CHECK(vm.phi.level_of[vertex::X] == 0);
    CHECK(vm.phi.level_of[vertex::O] == 0);
    for (int a = 0; a < 12; ++a) CHECK(vm.phi.level_of[std::size_t(a)] == 1);
}

TEST_CASE("vertex lift alphabet and the four-straight exclusion") {
    for (int N : {1, 2, 3}) {
        SftSpec spec = vertex_lift_spec(N);
        CHECK(spec.alphabet().size() == std::size_t(12 + 2 * N));
        // toned center ringed by four straight arrows is excluded, but the same
        // ring in the base model is allowed
        using namespace vertex;
        std::vector<int> ring{arrow_id(0, 0), arrow_id(1, 1), arrow_id(0, 0), arrow_id(1, 1)};
        // neighbors in (E, N, W, S) order: straight arrows circulating around
        std::vector<int> base_syms{O, arrow_id(0, 0), arrow_id(3, 3), arrow_id(2, 2),
                                   arrow_id(1, 1)};
        CHECK(vertex_spec().spec.window_allowed(base_syms));
        std::vector<int> lift_syms{12 + N, base_syms[1], base_syms[2], base_syms[3],
                                   base_syms[4]};  // (O, tone 0)
        CHECK(!spec.window_allowed(lift_syms));
    }
}

TEST_CASE("gray codes") {
    Alphabet g3 = gray3_alphabet();
    CHECK(g3.size() == 3);
    VertexModel vm = vertex_spec();
    Patch p(Volume({{0, 0}, {1, 0}, {2, 0}}), {vertex::X, 0, vertex::O});
    Patch g = gray3(p);
    CHECK(g.at({0, 0}) != g.at({2, 0}));
    Patch g7 = gray7(p);
    CHECK(g7.volume() == p.volume());
}

TEST_CASE("potts cross letters") {
    PottsModel pm = potts_cross_spec(2);
    CHECK(pm.recode.letters.size() == 32);
    CHECK(materialize_allowed(pm.spec).allowed_codes().size() == 8192);
    CHECK(pm.phi.eps0 == doctest::Approx(0.5));
    CHECK(pm.phi.max_level() == 4);
    // letter 0 = all spins equal: zero energy
    CHECK(pm.recode.letter_energy[0] == doctest::Approx(0.0));
    PottsModel p3 = potts_cross_spec(3);
    CHECK(p3.recode.letters.size() == 243);
}

TEST_CASE("potts letter weights") {
    PottsModel pm = potts_cross_spec(2);
    int N = 3;
    std::vector<double> wt = pm.letter_weight_tones(N);
    std::vector<double> wb = pm.letter_weight_beta(beta_critical_potts(2));
    CHECK(wt.size() == 32);
    CHECK(wt[0] == doctest::Approx(std::pow(double(N), 4)));  // level 0: N^maxS tones
    CHECK(wb[0] == doctest::Approx(1.0));
}

TEST_CASE("yprime window rule") {
    SftSpec yp = yprime_spec();
    auto patch = [](const Volume& box, std::vector<Site> ones) {
        std::vector<int> syms(box.size(), 0);
        for (Site s : ones) syms[std::size_t(box.index_of(s))] = 1;
        return Patch(box, std::move(syms));
    };
    Volume win = Volume::box({-2, -2}, {2, 2});
    CHECK(check_local(yp, patch(win, {})));
    for (Site s : win.sites()) CHECK(check_local(yp, patch(win, {s})));
    // corner-touching dilated squares pinch at the center, in both diagonal senses
    CHECK(!check_local(yp, patch(win, {{-1, 1}, {1, -1}})));
    CHECK(!check_local(yp, patch(win, {{-1, -1}, {1, 1}})));
    // a larger canvas puts the off-center boundary sites in range
    Volume big = Volume::box({-4, -4}, {4, 4});
    CHECK(check_local(yp, patch(big, {{0, 0}, {2, 0}})));        // merged rectangle
    CHECK(check_local(yp, patch(big, {{0, 0}, {0, 1}})));
    CHECK(check_local(yp, patch(big, {{0, 0}, {1, 0}, {0, 1}, {1, 1}})));  // dense block
    CHECK(!check_local(yp, patch(big, {{0, 0}, {1, 1}})));       // diagonal step
    CHECK(!check_local(yp, patch(big, {{0, 0}, {2, 1}})));       // thin outer corner
}

TEST_CASE("factor chain lands in the vertex model") {
    SftSpec yp = yprime_spec();
    VertexModel vm = vertex_spec();
    Volume win = Volume::box({0, 0}, {6, 6});
    int ok = 0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        Patch y = random_admissible_patch(yp, win, 2, k);
        Patch v = factor_chain(y);
        CHECK(v.volume().size() == 9);  // (7-4) x (7-4)
        CHECK(check_local(vm.spec, v));
        ++ok;
    }
    CHECK(ok == 20);
}

TEST_CASE("edge potts census") {
    int q = 2, N = 3;
    SftSpec spec = edge_potts_spec(q, N);
    // q colors, each with a horizontal and a vertical edge tone
    CHECK(spec.alphabet().size() == std::size_t(q * N * N));
    for (std::size_t s = 0; s < spec.alphabet().size(); ++s) {
        int c = edge_potts_color(spec, int(s));
        CHECK(c >= 0);
        CHECK(c < q);
    }
}
