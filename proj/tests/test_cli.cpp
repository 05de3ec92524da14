#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "sftlab/cli.hpp"
#include "sftlab/models.hpp"
#include "sftlab/sft.hpp"

using namespace sftlab;

namespace {

struct CliRun {
    int code = 0;
    std::string out, err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "sftlab");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream o, e;
    CliRun r;
    r.code = run_cli(int(argv.size()), argv.data(), o, e);
    r.out = o.str();
    r.err = e.str();
    return r;
}

}  // namespace

TEST_CASE("census command") {
    CliRun r = run({"census", "--model", "vertex"});
    CHECK(r.code == 0);
    CHECK(r.out.find("allowed_crosses,248,248,yes") != std::string::npos);
    CHECK(r.out.find("# config:") != std::string::npos);
    CHECK(r.out.find("# schema:") != std::string::npos);
}

TEST_CASE("bad arguments exit with 1") {
    CHECK(run({"census", "--model", "nonsense"}).code == 1);
    CHECK(run({"verify", "--what", "wat", "--model", "potts:2", "--N", "2"}).code == 1);
    CHECK(run({"nosuchcommand"}).code != 0);
}

TEST_CASE("help exits cleanly") {
    CliRun r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("census") != std::string::npos);
}

TEST_CASE("verify lemma quick case") {
    CliRun r = run({"verify", "--what", "lemma", "--model", "potts:2", "--N", "2", "--cases",
                    "random:3:7", "--volume", "2x2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"pass\":true") != std::string::npos);
}

TEST_CASE("entropy table") {
    CliRun r = run({"entropy", "--model", "vertex", "--widths", "2..3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("width,states,log_lambda,entropy_per_site") != std::string::npos);
}

TEST_CASE("peierls table") {
    CliRun r = run({"peierls", "--ell-max", "10", "--beta", "1.5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("ell,exact_count,bound,ratio,mu_bound") != std::string::npos);
}

TEST_CASE("identical invocations give identical bytes") {
    auto go = [] {
        return run({"verify", "--what", "counting", "--model", "potts:2", "--N", "2", "--cases",
                    "random:2:3", "--volume", "2x2"});
    };
    CliRun a = go(), b = go();
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    auto sc = [] { return run({"sample", "--model", "potts-lift:2:2", "--size", "6x6",
                               "--sweeps", "20", "--seed", "9"}); };
    CliRun s1 = sc(), s2 = sc();
    CHECK(s1.code == 0);
    CHECK(s1.out == s2.out);
}

TEST_CASE("model export round trips through the text format") {
    CliRun r = run({"model", "export", "--model", "yprime"});
    CHECK(r.code == 0);
    CHECK(r.out.find("alphabet") != std::string::npos);
    SftSpec back = spec_from_text(r.out);
    SftSpec yp = yprime_spec();
    CHECK(back.window_size() == yp.window_size());
    // spot-check agreement across all single-1 windows and the pinch pair
    std::vector<int> w(25, 0);
    for (int i = 0; i < 25; ++i) {
        w.assign(25, 0);
        w[std::size_t(i)] = 1;
        CHECK(back.window_allowed(w) == yp.window_allowed(w));
    }
    w.assign(25, 0);
    w[6] = w[18] = 1;  // 1s at (-1,1) and (1,-1), rows listed top first
    CHECK(!back.window_allowed(w));
}
