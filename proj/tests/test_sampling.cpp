#include <doctest.h>

#include <cmath>
#include <map>

#include "sftlab/models.hpp"
#include "sftlab/sampling.hpp"

using namespace sftlab;

TEST_CASE("pinned ring geometry") {
    Volume r = pinned_ring(4, 4, 2);
    CHECK(r.size() == 8 * 8 - 4 * 4);
    Patch c = constant_ring(4, 4, 1, 7);
    CHECK(c.volume().size() == 6 * 6 - 4 * 4);
    for (int s : c.symbols()) CHECK(s == 7);
}

TEST_CASE("potts spin conditional is the boltzmann ratio") {
    PottsSpinChain ch;
    ch.q = 3;
    ch.beta = 0.8;
    ch.w = ch.h = 4;
    ch.torus = true;
    ch.init();
    ch.set_spin(1, 2, 1);
    ch.set_spin(2, 1, 2);
    std::vector<double> p = ch.site_conditional(2, 2);
    double total = 0;
    for (double x : p) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    auto dis = [&](int c) {
        int n = 0;
        for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
            if (ch.spin(2 + dx, 2 + dy) != c) ++n;
        return n;
    };
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            CHECK(p[std::size_t(a)] / p[std::size_t(b)] ==
                  doctest::Approx(std::exp(-ch.beta * (dis(a) - dis(b)))).epsilon(1e-12));
}

TEST_CASE("potts spin chain targets the exact torus measure") {
    PottsSpinChain ch;
    ch.q = 2;
    ch.beta = 0.5;
    ch.w = ch.h = 2;
    ch.torus = true;
    ch.seed = 31;
    ch.init();
    std::map<int, long> hist;
    int sweeps = 40000, burn = 2000;
    for (int s = 0; s < sweeps; ++s) {
        ch.sweep(std::uint64_t(s));
        if (s < burn) continue;
        int code = 0;
        for (int y = 0; y < 2; ++y)
            for (int x = 0; x < 2; ++x) code = code * 2 + ch.spin(x, y);
        hist[code]++;
    }
    // exact stationary law: pi ~ exp(-beta/2 * sum_site #disagreeing neighbors)
    std::vector<double> pi(16, 0);
    double z = 0;
    for (int code = 0; code < 16; ++code) {
        int sp[2][2];
        int c = code;
        for (int y = 1; y >= 0; --y)
            for (int x = 1; x >= 0; --x) sp[x][y] = c & 1, c >>= 1;
        int dis = 0;
        for (int y = 0; y < 2; ++y)
            for (int x = 0; x < 2; ++x)
                for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
                    dis += sp[x][y] != sp[(x + dx + 2) % 2][(y + dy + 2) % 2];
        pi[std::size_t(code)] = std::exp(-ch.beta * dis / 2.0);
        z += pi[std::size_t(code)];
    }
    double tv = 0;
    long n = sweeps - burn;
    for (int code = 0; code < 16; ++code)
        tv += std::abs(double(hist[code]) / n - pi[std::size_t(code)] / z);
    CHECK(tv / 2 < 0.05);
}

TEST_CASE("potts spin chain is deterministic") {
    auto run = [] {
        PottsSpinChain ch;
        ch.q = 3;
        ch.beta = 1.0;
        ch.w = ch.h = 5;
        ch.torus = false;
        ch.pin_color = 1;
        ch.seed = 77;
        ch.init();
        for (int s = 0; s < 50; ++s) ch.sweep(std::uint64_t(s));
        return ch.spins;
    };
    CHECK(run() == run());
}

TEST_CASE("single-site heat bath on a soft model") {
    ChainSpec chain;
    chain.spec = SftSpec::full_shift(Alphabet({"g", "e"}));
    static Interaction phi = validate_hypothesis_H({0.0, 1.0});
    chain.phi = &phi;
    chain.beta = 0.9;
    chain.kind = LatticeKind::torus;
    chain.w = chain.h = 4;
    chain.seed = 3;
    GridState st = init_state(chain, 0);
    std::vector<double> p = site_conditional(st, chain, {1, 1});
    CHECK(p[0] / p[1] == doctest::Approx(std::exp(chain.beta)).epsilon(1e-12));
    double mean = 0;
    int n = 0;
    for (int s = 0; s < 3000; ++s) {
        heatbath_sweep(st, chain, std::uint64_t(s));
        if (s < 500) continue;
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x) mean += st.get(x, y), ++n;
    }
    mean /= n;
    double expect = 1.0 / (1.0 + std::exp(chain.beta));  // independent sites
    CHECK(std::abs(mean - expect) < 0.02);
    CHECK(state_admissible(st, chain));
}

TEST_CASE("block sampler keeps vertex states admissible") {
    ChainSpec chain;
    VertexModel vm = vertex_spec();
    chain.spec = vm.spec;
    chain.phi = &vm.phi;
    chain.beta = std::log(3.0);
    chain.kind = LatticeKind::pinned;
    chain.w = chain.h = 6;
    chain.boundary = constant_ring(6, 6, 2, vertex::O);
    chain.seed = 11;
    BlockSampler bs(chain, vertex::O);
    CHECK(state_admissible(bs.state(), chain));
    auto [fills, probs] = bs.block_conditional({1, 1});
    REQUIRE(!fills.empty());
    double total = 0;
    for (double p : probs) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (int s = 0; s < 30; ++s) bs.sweep(std::uint64_t(s));
    CHECK(state_admissible(bs.state(), chain));
    CHECK(bs.memo_entries() > 0);

    BlockSampler bs2(chain, vertex::O);
    for (int s = 0; s < 30; ++s) bs2.sweep(std::uint64_t(s));
    CHECK(bs.state().cells == bs2.state().cells);
}

TEST_CASE("block conditional matches the exact gibbs kernel") {
    // pinned O sea: the 3x3 block law must equal the conditional of the Gibbs
    // measure given the rest of the grid
    ChainSpec chain;
    VertexModel vm = vertex_spec();
    chain.spec = vm.spec;
    chain.phi = &vm.phi;
    chain.beta = 1.1;
    chain.kind = LatticeKind::pinned;
    chain.w = chain.h = 5;
    chain.boundary = constant_ring(5, 5, 2, vertex::O);
    chain.seed = 4;
    BlockSampler bs(chain, vertex::O);
    auto [fills, probs] = bs.block_conditional({1, 1});
    Volume block = Volume::box({1, 1}, {3, 3});
    // assemble the environment patch: everything stored except the block
    std::vector<Site> env_sites;
    std::vector<int> env_syms;
    for (int y = -2; y < 7; ++y)
        for (int x = -2; x < 7; ++x)
            if (!block.contains({x, y})) {
                env_sites.push_back({x, y});
                env_syms.push_back(bs.state().get(x, y));
            }
    Volume env_vol(env_sites);
    std::vector<int> sorted_syms(env_vol.size());
    for (std::size_t i = 0; i < env_sites.size(); ++i)
        sorted_syms[std::size_t(env_vol.index_of(env_sites[i]))] = env_syms[i];
    Patch env(env_vol, std::move(sorted_syms));
    GibbsConditional gc = gibbs_conditional(vm.spec, vm.phi, chain.beta, block, env);
    REQUIRE(gc.support.size() == fills.size());
    for (std::size_t i = 0; i < fills.size(); ++i) {
        // block fillings run x fast, y ascending from the corner
        std::vector<int> canon(block.size());
        for (int k = 0; k < 9; ++k)
            canon[std::size_t(block.index_of({1 + k % 3, 1 + k / 3}))] = fills[i][std::size_t(k)];
        Patch fp(block, canon);
        bool found = false;
        for (std::size_t j = 0; j < gc.support.size(); ++j)
            if (gc.support[j] == fp) {
                CHECK(probs[i] == doctest::Approx(gc.probs[j]).epsilon(1e-10));
                found = true;
            }
        CHECK(found);
    }
}

TEST_CASE("order parameters") {
    ChainSpec chain;
    chain.spec = vertex_spec().spec;
    chain.kind = LatticeKind::pinned;
    chain.w = chain.h = 4;
    chain.boundary = constant_ring(4, 4, 2, vertex::O);
    GridState st = init_state(chain, vertex::O);
    OrderParams op = order_parameter_vertex(st);
    CHECK(op.frac_dot_o == doctest::Approx(1.0));
    CHECK(op.largest_o == doctest::Approx(1.0));
    CHECK(op.frac_arrow == doctest::Approx(0.0));
    OrderParams oc = order_parameter_colors({0, 0, 1, 2}, 3);
    CHECK(oc.color_frac[0] == doctest::Approx(0.5));
    CHECK(oc.max_color_frac == doctest::Approx(0.5));
}

TEST_CASE("phase scan plumbing") {
    PhaseScanResult r = phase_scan_potts(2, {1, 2}, 6, 6, 40, 10, 2, 5);
    CHECK(r.cells.size() == 2);
    CHECK(!r.rows.empty());
    CHECK(r.threshold_level == doctest::Approx(std::sqrt(2.0) + 1));
    for (const PhaseScanCell& c : r.cells) CHECK(c.failures == 0);
    PhaseScanResult r2 = phase_scan_potts(2, {1, 2}, 6, 6, 40, 10, 2, 5);
    CHECK(r.cells[1].gap == doctest::Approx(r2.cells[1].gap).epsilon(1e-15));
}
