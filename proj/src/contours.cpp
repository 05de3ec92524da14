#include "sftlab/contours.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace sftlab {

using namespace vertex;

namespace {

// parity ray cast: is (x0,y0) strictly inside the closed polyline through the
// loop sites (axis-aligned unit edges)?
bool inside_loop(const std::vector<Site>& cyc, Site p) {
    int cnt = 0;
    std::size_t n = cyc.size();
    for (Site s : cyc)
        if (s == p) return false;
    for (std::size_t i = 0; i < n; ++i) {
        Site a = cyc[i], b = cyc[(i + 1) % n];
        if (a.x != b.x) continue;  // horizontal edge: never crosses a horizontal ray
        if (a.x <= p.x) continue;
        int ylo = std::min(a.y, b.y), yhi = std::max(a.y, b.y);
        if (ylo <= p.y && p.y < yhi) ++cnt;
    }
    return (cnt & 1) != 0;
}

long long shoelace2(const std::vector<Site>& cyc) {
    long long a2 = 0;
    std::size_t n = cyc.size();
    for (std::size_t i = 0; i < n; ++i) {
        Site u = cyc[i], v = cyc[(i + 1) % n];
        a2 += (long long)u.x * v.y - (long long)v.x * u.y;
    }
    return a2;
}

int turn_sign(int arrow) {
    int t = turn(arrow);
    return t == 0 ? 0 : (t == 1 ? 1 : -1);
}

Volume loop_interior(const std::vector<Site>& cyc) {
    int xlo = cyc[0].x, xhi = cyc[0].x, ylo = cyc[0].y, yhi = cyc[0].y;
    for (Site s : cyc) {
        xlo = std::min(xlo, s.x);
        xhi = std::max(xhi, s.x);
        ylo = std::min(ylo, s.y);
        yhi = std::max(yhi, s.y);
    }
    std::unordered_set<Site, SiteHash> on;
    for (Site s : cyc) on.insert(s);
    std::vector<Site> in;
    for (int y = ylo; y <= yhi; ++y)
        for (int x = xlo; x <= xhi; ++x) {
            Site s{x, y};
            if (!on.count(s) && inside_loop(cyc, s)) in.push_back(s);
        }
    return Volume(std::move(in));
}

}  // namespace

ContourSet extract(const Patch& p) {
    const Volume& vol = p.volume();
    std::vector<Site> arrow_sites;
    for (Site z : vol.sites())
        if (is_arrow(p.at(z))) arrow_sites.push_back(z);

    ContourSet cs;
    cs.arrow_sites = Volume(arrow_sites);

    std::unordered_set<Site, SiteHash> visited;
    for (Site z : arrow_sites) {
        if (visited.count(z)) continue;
        // walk backward to a start (open end) or all the way around
        Site start = z;
        bool closed = false;
        std::unordered_set<Site, SiteHash> seen;
        while (true) {
            seen.insert(start);
            int sym = p.at(start);
            Site prev = start - dvec(d_in(sym));
            if (!vol.contains(prev)) break;
            int ps = p.at(prev);
            if (!is_arrow(ps) || d_out(ps) != d_in(sym)) throw InconsistentPath();
            if (prev == z) {
                closed = true;
                break;
            }
            if (seen.count(prev)) throw InconsistentPath();
            start = prev;
        }

        ContourPath path;
        path.closed = closed;
        Site cur = closed ? z : start;
        while (true) {
            path.sites.push_back(cur);
            visited.insert(cur);
            int sym = p.at(cur);
            Site nxt = cur + dvec(d_out(sym));
            if (closed && nxt == (closed ? z : start)) break;
            if (!vol.contains(nxt)) {
                if (closed) throw InconsistentPath();
                break;
            }
            int ns = p.at(nxt);
            if (closed || vol.contains(nxt)) {
                if (!is_arrow(ns)) throw InconsistentPath();
                if (d_in(ns) != d_out(sym)) throw InconsistentPath();
            }
            if (!closed && visited.count(nxt)) throw InconsistentPath();
            cur = nxt;
        }

        if (closed) {
            long long a2 = shoelace2(path.sites);
            path.ccw = a2 > 0;
            int tsum = 0;
            for (Site s : path.sites) tsum += turn_sign(p.at(s));
            if (tsum != (path.ccw ? 4 : -4)) throw InconsistentPath();
            path.interior = loop_interior(path.sites);
            for (Site s : path.interior.sites())
                if (!vol.contains(s)) path.interior_clipped = true;
        }
        cs.paths.push_back(std::move(path));
    }
    return cs;
}

std::array<std::array<long long, 3>, 3> m_alpha() {
    return {{{1, 1, 1}, {1, 0, 1}, {1, 1, 0}}};
}

namespace {
using Mat3 = std::array<std::array<long long, 3>, 3>;
Mat3 mul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}
}  // namespace

long long trace_m_alpha_pow(int ell) {
    if (ell < 1 || ell > 40) throw std::invalid_argument("trace_m_alpha_pow: ell out of range");
    Mat3 m = m_alpha(), acc = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    int e = ell;
    while (e) {
        if (e & 1) acc = mul(acc, m);
        m = mul(m, m);
        e >>= 1;
    }
    return acc[0][0] + acc[1][1] + acc[2][2];
}

double spectrum_check() {
    Mat3 m = m_alpha();
    double tr = m[0][0] + m[1][1] + m[2][2];
    double tr2 = double(trace_m_alpha_pow(2));
    double c2 = (tr * tr - tr2) / 2;
    double det = double(m[0][0]) * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                 double(m[0][1]) * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 double(m[0][2]) * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // lambda^3 - tr lambda^2 + c2 lambda - det; depressed cubic, three real roots
    double a = -tr, b = c2, c = -det;
    double p = b - a * a / 3;
    double q = 2 * a * a * a / 27 - a * b / 3 + c;
    double r = 2 * std::sqrt(-p / 3);
    double arg = std::clamp(3 * q / (2 * p) * std::sqrt(-3 / p), -1.0, 1.0);
    double phi = std::acos(arg);
    std::array<double, 3> roots;
    for (int k = 0; k < 3; ++k)
        roots[std::size_t(k)] = r * std::cos((phi - 2 * M_PI * k) / 3) - a / 3;
    std::sort(roots.begin(), roots.end());
    std::array<double, 3> expect{-1.0, 1 - std::sqrt(2.0), 1 + std::sqrt(2.0)};
    std::sort(expect.begin(), expect.end());
    double dev = 0;
    for (int k = 0; k < 3; ++k)
        dev = std::max(dev, std::abs(roots[std::size_t(k)] - expect[std::size_t(k)]));
    return dev;
}

namespace {

struct LoopDfs {
    int ell;
    int lim;  // coordinate box
    std::uint64_t budget, nodes = 0;
    bool collect;
    LoopEnumeration out;

    std::vector<Site> path;
    std::vector<int> dirs;  // dirs[k] = step from path[k-1] to path[k]
    std::unordered_set<Site, SiteHash> used;

    bool turn_pair_ok(int a1, int a2) const {  // arrows at consecutive sites
        int t1 = turn(a1), t2 = turn(a2);
        return !(t1 == t2 && t1 != 0);
    }

    void close_attempt() {
        Site last = path.back(), anchor = path.front();
        Site d = anchor - last;
        if (std::abs(d.x) + std::abs(d.y) != 1) return;
        int dlast = -1;
        for (int k = 0; k < 4; ++k)
            if (dvec(k) == d) dlast = k;
        if (dlast < 0 || dlast == opp(dirs.back())) return;
        // arrows around the seam
        int a_last = arrow_id(dirs.back(), dlast);
        int a_first = arrow_id(dlast, dirs[1]);
        if (a_last < 0 || a_first < 0) return;
        int a_prev = arrow_id(dirs[std::size_t(ell - 2)], dirs.back());
        int a_second = arrow_id(dirs[1], dirs[2]);
        if (!turn_pair_ok(a_prev, a_last) || !turn_pair_ok(a_last, a_first) ||
            !turn_pair_ok(a_first, a_second))
            return;
        if (!inside_loop(path, {0, 0})) return;
        ++out.count;
        if (collect) {
            Loop lp;
            lp.sites = path;
            for (int k = 0; k < ell; ++k) {
                int din = (k == 0) ? dlast : dirs[std::size_t(k)];
                int dn = (k == ell - 1) ? dlast : dirs[std::size_t(k + 1)];
                lp.arrows.push_back(arrow_id(din, dn));
            }
            lp.ccw = shoelace2(path) > 0;
            out.loops.push_back(std::move(lp));
        }
    }

    void grow() {
        if (++nodes > budget) throw SearchBudgetExceeded(nodes);
        int len = int(path.size());
        if (len == ell) {
            close_attempt();
            return;
        }
        Site cur = path.back();
        for (int d = 0; d < 4; ++d) {
            if (len >= 2 && d == opp(dirs.back())) continue;
            if (len >= 3) {
                int a1 = arrow_id(dirs[std::size_t(len - 2)], dirs.back());
                int a2 = arrow_id(dirs.back(), d);
                if (a2 < 0 || !turn_pair_ok(a1, a2)) continue;
            }
            Site n = cur + dvec(d);
            if (std::abs(n.x) > lim || std::abs(n.y) > lim) continue;
            if (used.count(n)) continue;
            if (!canonical_less(path.front(), n)) continue;
            path.push_back(n);
            dirs.push_back(d);
            used.insert(n);
            grow();
            used.erase(n);
            dirs.pop_back();
            path.pop_back();
        }
    }
};

}  // namespace

LoopEnumeration enumerate_encircling_loops(int ell, bool collect, std::uint64_t budget) {
    if (ell < 3) throw std::invalid_argument("enumerate_encircling_loops: ell too small");
    double half = std::ceil(double(ell) / 2);
    LoopEnumeration result;
    result.bound = M_PI * half * half * double(trace_m_alpha_pow(ell));
    if (ell % 2 != 0) return result;  // closed lattice loops have even length

    int lim = ell / 2;
    std::uint64_t nodes_total = 0;
    for (int y = lim; y >= -lim; --y) {
        for (int x = -lim; x <= lim; ++x) {
            if (x == 0 && y == 0) continue;
            if (nodes_total >= budget) throw SearchBudgetExceeded(nodes_total);
            LoopDfs dfs;
            dfs.ell = ell;
            dfs.lim = lim;
            dfs.budget = budget - nodes_total;
            dfs.collect = collect;
            dfs.path.push_back({x, y});
            dfs.dirs.push_back(-1);  // placeholder: dirs[0] unused
            dfs.used.insert({x, y});
            dfs.grow();
            nodes_total += dfs.nodes;
            result.count += dfs.out.count;
            for (auto& lp : dfs.out.loops) result.loops.push_back(std::move(lp));
        }
    }
    if (double(result.count) > result.bound)
        throw std::logic_error("loop count exceeds its stated bound");
    return result;
}

Patch embed_loop_in_sea(const Loop& loop, int n) {
    Volume box = make_box(n);
    std::unordered_set<Site, SiteHash> on;
    for (std::size_t i = 0; i < loop.sites.size(); ++i) on.insert(loop.sites[i]);
    int in_sym = loop.ccw ? O : X;
    int out_sym = loop.ccw ? X : O;
    std::vector<int> syms(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
        Site s = box[i];
        auto it = std::find(loop.sites.begin(), loop.sites.end(), s);
        if (it != loop.sites.end())
            syms[i] = loop.arrows[std::size_t(it - loop.sites.begin())];
        else
            syms[i] = inside_loop(loop.sites, s) ? in_sym : out_sym;
    }
    return Patch(box, std::move(syms));
}

Patch tau_flip(const Patch& p, const ContourPath& loop) {
    if (!loop.closed) throw LoopNotClosed();
    if (loop.interior_clipped) throw InteriorClipped();
    for (Site s : loop.sites)
        if (!p.has(s)) throw InteriorClipped();
    const Volume& vol = p.volume();
    std::vector<int> syms = p.symbols();
    int fill = loop.ccw ? X : O;
    for (Site s : loop.sites) syms[std::size_t(vol.index_of(s))] = fill;
    for (Site s : loop.interior.sites()) {
        int i = vol.index_of(s);
        syms[std::size_t(i)] = tau(syms[std::size_t(i)]);
    }
    return Patch(vol, std::move(syms));
}

double peierls_bound(double beta, int ell) {
    double half = std::ceil(double(ell) / 2);
    return 3 * M_PI * half * half * std::exp(ell * (beta_star() - beta));
}

double beta_star() { return std::log(1 + std::sqrt(2.0)); }

}  // namespace sftlab
