#include "sftlab/models.hpp"

#include <algorithm>
#include <cmath>

namespace sftlab {

namespace vertex {

namespace {
constexpr int M_mat[4][4] = {{1, 1, 1, 1}, {1, 1, 0, 1}, {1, 1, 0, 1}, {1, 0, 1, 0}};

// classes around a counterclockwise dot: 0=dot, 1=straight, 2=in, 3=out, -1 bad
int dot_neighbor_class(int nb, int f) {
    if (nb == O) return 0;
    if (nb == X) return -1;
    int t = rot_cw(opp(f));  // tangential motion keeping the dot on the left
    int di = d_in(nb), dout = d_out(nb);
    if (di == t && dout == t) return 1;
    if (di == opp(f) && dout == t) return 2;
    if (di == t && dout == f) return 3;
    return -1;
}
}  // namespace

bool pair_ok(int a, int b, int e_dir) {
    bool adot = !is_arrow(a), bdot = !is_arrow(b);
    if (adot && bdot) return a == b;
    if (adot || bdot) {
        // reduce to: dot at site p, arrow at p + dvec(f)
        int dot = adot ? a : b;
        int arr = adot ? b : a;
        int f = adot ? e_dir : opp(e_dir);
        if (dot == X) {
            arr = tau(arr);  // X neighborhoods are the tau image of O ones
        }
        int t = rot_cw(opp(f));
        return (d_in(arr) == t || d_in(arr) == opp(f)) && (d_out(arr) == t || d_out(arr) == f);
    }
    // two arrows: allowed only when consecutive on a path, without LL or RR
    bool ab = d_out(a) == e_dir && d_in(b) == e_dir;            // a -> b
    bool ba = d_out(b) == opp(e_dir) && d_in(a) == opp(e_dir);  // b -> a
    if (!ab && !ba) return false;
    int ta = turn(a), tb = turn(b);
    return !(ta == tb && ta != 0);
}

bool cross_ok(int c, int e, int n, int w, int s) {
    const int nb[4] = {e, n, w, s};       // counterclockwise from East
    const int fdir[4] = {1, 0, 3, 2};     // R, U, L, D
    for (int k = 0; k < 4; ++k)
        if (!pair_ok(c, nb[k], fdir[k])) return false;
    if (is_arrow(c)) return true;
    int cls[4];
    for (int k = 0; k < 4; ++k) {
        int v = nb[k], f = fdir[k];
        if (c == X) {
            // tau maps an X neighborhood onto an O one with the same geometry
            v = tau(v);
        }
        cls[k] = dot_neighbor_class(v, f);
        if (cls[k] < 0) return false;
    }
    for (int k = 0; k < 4; ++k)
        if (!M_mat[cls[k]][cls[(k + 1) & 3]]) return false;
    return true;
}

}  // namespace vertex

static Alphabet vertex_alphabet() {
    const char dir[4] = {'u', 'r', 'd', 'l'};
    std::vector<std::string> names;
    for (int a = 0; a < 12; ++a) {
        std::string nm;
        nm += dir[vertex::d_in(a)];
        nm += dir[vertex::d_out(a)];
        names.push_back(nm);
    }
    names.push_back("X");
    names.push_back("O");
    return Alphabet(std::move(names));
}

VertexModel vertex_spec() {
    using namespace vertex;
    std::vector<std::vector<int>> allowed;
    for (int c = 0; c < n_symbols; ++c)
        for (int e = 0; e < n_symbols; ++e)
            for (int n = 0; n < n_symbols; ++n)
                for (int w = 0; w < n_symbols; ++w)
                    for (int s = 0; s < n_symbols; ++s)
                        if (cross_ok(c, e, n, w, s)) allowed.push_back({c, e, n, w, s});
    VertexModel m;
    m.spec = SftSpec::from_allowed(vertex_alphabet(), cross_window(), allowed,
                                   /*prune_unused=*/false);
    std::vector<double> table(n_symbols, 1.0);
    table[X] = 0.0;
    table[O] = 0.0;
    m.phi = validate_hypothesis_H(table);
    return m;
}

VertexCensus vertex_census(const SftSpec& spec) {
    VertexCensus c;
    for (std::uint64_t code : spec.allowed_codes()) {
        int center = spec.decode(code)[0];
        ++c.total;
        if (center == vertex::O)
            ++c.center_dot;
        else if (center == vertex::X)
            ++c.center_cross;
        else if (vertex::turn(center) == 0)
            ++c.center_straight;
        else
            ++c.center_corner;
    }
    return c;
}

SftSpec vertex_lift_spec(int N) {
    using namespace vertex;
    // symbols: arrows 0..11, then (X,t) t=0..N-1, then (O,t)
    const int nsym = 12 + 2 * N;
    auto color = [N](int sym) {
        if (sym < 12) return sym;
        return sym < 12 + N ? X : O;
    };
    std::vector<std::string> names;
    for (int a = 0; a < 12; ++a) names.push_back(vertex_alphabet().name(a));
    for (int t = 0; t < N; ++t) names.push_back("X" + std::to_string(t));
    for (int t = 0; t < N; ++t) names.push_back("O" + std::to_string(t));

    std::vector<std::vector<int>> allowed;
    std::vector<int> syms(5);
    for (syms[0] = 0; syms[0] < nsym; ++syms[0])
        for (syms[1] = 0; syms[1] < nsym; ++syms[1])
            for (syms[2] = 0; syms[2] < nsym; ++syms[2])
                for (syms[3] = 0; syms[3] < nsym; ++syms[3])
                    for (syms[4] = 0; syms[4] < nsym; ++syms[4]) {
                        int c = color(syms[0]), e = color(syms[1]), n = color(syms[2]),
                            w = color(syms[3]), s = color(syms[4]);
                        if (!cross_ok(c, e, n, w, s)) continue;
                        if (!is_arrow(c) && is_arrow(e) && turn(e) == 0 && is_arrow(n) &&
                            turn(n) == 0 && is_arrow(w) && turn(w) == 0 && is_arrow(s) &&
                            turn(s) == 0)
                            continue;  // no toned X/O inside four straight arrows
                        allowed.push_back(syms);
                    }
    return SftSpec::from_allowed(Alphabet(std::move(names)), cross_window(), allowed,
                                 /*prune_unused=*/false);
}

Site DihedralAction::apply(Site s) const {
    Site p = s;
    if (element >= 4) p = {-p.x, p.y};  // mirror across the y axis first
    switch (element & 3) {              // then rotate ccw by 90deg steps
        case 0: return p;
        case 1: return {-p.y, p.x};
        case 2: return {-p.x, -p.y};
        default: return {p.y, -p.x};
    }
}

int DihedralAction::apply_symbol(int sym) const {
    using namespace vertex;
    bool mirror = element >= 4;
    int rot = element & 3;
    auto map_dir = [&](int d) {
        // directions as vectors through the same site map
        Site v = dvec(d);
        Site w = apply(v);
        for (int k = 0; k < 4; ++k)
            if (dvec(k) == w) return k;
        return -1;
    };
    if (sym == X) return mirror ? O : X;
    if (sym == O) return mirror ? X : O;
    (void)rot;
    return arrow_id(map_dir(d_in(sym)), map_dir(d_out(sym)));
}

std::vector<DihedralAction> vertex_dihedral_actions() {
    std::vector<DihedralAction> out;
    for (int e = 0; e < 8; ++e) out.push_back(DihedralAction{e});
    return out;
}

Alphabet gray3_alphabet() { return Alphabet({"X", "a", "O"}); }

Patch gray3(const Patch& x) {
    std::vector<int> syms;
    syms.reserve(x.symbols().size());
    for (int s : x.symbols()) syms.push_back(s == vertex::X ? 0 : (s == vertex::O ? 2 : 1));
    return Patch(x.volume(), std::move(syms));
}

Alphabet gray7_alphabet(int N) {
    std::vector<std::string> names;
    for (int v = -N; v <= N; ++v) names.push_back(std::to_string(v));
    return Alphabet(std::move(names));
}

Patch gray7(const Patch& x, int N) {
    // lift symbol ids: arrows < 12, (X,t) = 12+t, (O,t) = 12+N+t
    std::vector<int> syms;
    syms.reserve(x.symbols().size());
    for (int s : x.symbols()) {
        int v = 0;
        if (s >= 12 && s < 12 + N) v = -(s - 12 + 1);
        else if (s >= 12 + N) v = s - 12 - N + 1;
        syms.push_back(v + N);
    }
    return Patch(x.volume(), std::move(syms));
}

std::vector<double> PottsModel::letter_weight_beta(double beta) const {
    std::size_t n = 1;
    for (int i = 0; i < 5; ++i) n *= std::size_t(q);
    std::vector<double> w(n);
    for (std::size_t code = 0; code < n; ++code) {
        std::size_t c = code;
        int o = int(c % std::size_t(q)); c /= std::size_t(q);
        int e = int(c % std::size_t(q)); c /= std::size_t(q);
        int nn = int(c % std::size_t(q)); c /= std::size_t(q);
        int ww = int(c % std::size_t(q)); c /= std::size_t(q);
        int s = int(c % std::size_t(q));
        int dis = (o != e) + (o != nn) + (o != ww) + (o != s);
        w[code] = std::exp(-beta * 0.5 * dis);
    }
    return w;
}

std::vector<double> PottsModel::letter_weight_tones(int N) const {
    std::size_t n = 1;
    for (int i = 0; i < 5; ++i) n *= std::size_t(q);
    std::vector<double> w(n);
    int maxs = phi.max_level();
    for (std::size_t code = 0; code < n; ++code) {
        std::size_t c = code;
        int o = int(c % std::size_t(q)); c /= std::size_t(q);
        int e = int(c % std::size_t(q)); c /= std::size_t(q);
        int nn = int(c % std::size_t(q)); c /= std::size_t(q);
        int ww = int(c % std::size_t(q)); c /= std::size_t(q);
        int s = int(c % std::size_t(q));
        int dis = (o != e) + (o != nn) + (o != ww) + (o != s);
        // level = dis/2 in eps0 units of 1/2 -> integer level equals dis
        double count = std::pow(double(N), double(maxs - dis));
        w[code] = count;
    }
    return w;
}

PottsModel potts_cross_spec(int q) {
    if (q < 2) throw std::invalid_argument("q >= 2 required");
    if (q > 5) throw AlphabetBudgetExceeded("potts cross letters capped at q = 5");
    PottsModel m;
    m.q = q;
    std::vector<std::string> spin_names;
    for (int i = 0; i < q; ++i) spin_names.push_back(std::to_string(i));
    m.spin_spec = SftSpec::full_shift(Alphabet(spin_names));

    FiniteRangeInteraction phi;
    auto disagree = [](const std::vector<int>& s) { return s[0] != s[1] ? 1.0 : 0.0; };
    phi.terms.push_back({{{0, 0}, {1, 0}}, disagree});
    phi.terms.push_back({{{0, 0}, {0, 1}}, disagree});
    m.recode = block_recode(m.spin_spec, phi);
    m.spec = m.recode.cross_spec;
    m.phi = validate_hypothesis_H(m.recode.letter_energy);
    return m;
}

namespace {

// Symbol for a covered site given which of its 8 neighbors are uncovered, or -1
// when the boundary shape has no vertex reading (pinches, diagonal steps, thin
// corners). Shared by the classification map and the yprime window rule.
int boundary_symbol(bool zN, bool zS, bool zE, bool zW, bool zNE, bool zNW, bool zSE, bool zSW) {
    using namespace vertex;
    int zeros = zN + zS + zE + zW + zNE + zNW + zSE + zSW;
    if (zeros == 0) return O;
    if (zeros == 3) {
        // one full side: motion keeps the zero region on the right
        if (zW && zNW && zSW) return arrow_id(2, 2);  // down
        if (zN && zNW && zNE) return arrow_id(3, 3);  // left
        if (zE && zNE && zSE) return arrow_id(0, 0);  // up
        if (zS && zSE && zSW) return arrow_id(1, 1);  // right
    } else if (zeros == 5) {
        // two adjacent sides: convex corner of the zero region, left turn
        if (zN && zW && zNW && zNE && zSW) return arrow_id(3, 2);  // <- then v
        if (zN && zE && zNW && zNE && zSE) return arrow_id(0, 3);  // ^ then <-
        if (zS && zE && zSW && zSE && zNE) return arrow_id(1, 0);  // -> then ^
        if (zS && zW && zSW && zSE && zNW) return arrow_id(2, 1);  // v then ->
    } else if (zeros == 1) {
        // lone diagonal zero: concave corner, right turn
        if (zSE) return arrow_id(0, 1);
        if (zSW) return arrow_id(1, 2);
        if (zNW) return arrow_id(2, 3);
        if (zNE) return arrow_id(3, 0);
    }
    return -1;
}

// A 5x5 binary window is admissible when the dilation of its 1s gives the
// center a classifiable surrounding. The center's dilated 3x3 neighborhood
// depends on exactly this window, so the constraint is local; it subsumes the
// corner-touching square pair and rules out every other dilation shape with no
// vertex reading (diagonal steps, width-1 channel caps, thin concave corners).
bool yprime_window_ok(const int* v) {
    auto one = [&](int x, int y) { return v[(2 - y) * 5 + (x + 2)] != 0; };
    auto covered = [&](int x, int y) {
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (one(x + dx, y + dy)) return true;
        return false;
    };
    if (!covered(0, 0)) return true;
    return boundary_symbol(!covered(0, 1), !covered(0, -1), !covered(1, 0), !covered(-1, 0),
                           !covered(1, 1), !covered(-1, 1), !covered(1, -1),
                           !covered(-1, -1)) >= 0;
}

const bool yprime_registered = (register_spec_predicate("yprime", yprime_spec), true);

}  // namespace

SftSpec yprime_spec() {
    // 5x5 window, rows listed top first
    Window w;
    for (int y = 2; y >= -2; --y)
        for (int x = -2; x <= 2; ++x) w.offsets.push_back({x, y});
    return SftSpec::from_predicate(Alphabet({"0", "1"}), w, yprime_window_ok, "yprime");
}

Patch psi_dilate(const Patch& y) {
    const Volume& v = y.volume();
    std::vector<Site> inner;
    for (Site s : v.sites()) {
        bool interior = true;
        for (int dy = -1; dy <= 1 && interior; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (!v.contains({s.x + dx, s.y + dy})) {
                    interior = false;
                    break;
                }
        if (interior) inner.push_back(s);
    }
    Volume iv(inner);
    std::vector<int> syms;
    syms.reserve(iv.size());
    for (Site s : iv.sites()) {
        int mx = 0;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) mx = std::max(mx, y.at({s.x + dx, s.y + dy}));
        syms.push_back(mx);
    }
    return Patch(std::move(iv), std::move(syms));
}

Patch q_classify(const Patch& y) {
    using namespace vertex;
    const Volume& v = y.volume();
    std::vector<Site> inner;
    for (Site s : v.sites()) {
        bool interior = true;
        for (int dy = -1; dy <= 1 && interior; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (!v.contains({s.x + dx, s.y + dy})) {
                    interior = false;
                    break;
                }
        if (interior) inner.push_back(s);
    }
    Volume iv(inner);
    std::vector<int> syms;
    syms.reserve(iv.size());
    for (Site z : iv.sites()) {
        if (y.at(z) == 0) {
            syms.push_back(X);
            continue;
        }
        bool zN = y.at({z.x, z.y + 1}) == 0, zS = y.at({z.x, z.y - 1}) == 0;
        bool zE = y.at({z.x + 1, z.y}) == 0, zW = y.at({z.x - 1, z.y}) == 0;
        bool zNE = y.at({z.x + 1, z.y + 1}) == 0, zNW = y.at({z.x - 1, z.y + 1}) == 0;
        bool zSE = y.at({z.x + 1, z.y - 1}) == 0, zSW = y.at({z.x - 1, z.y - 1}) == 0;
        int sym = boundary_symbol(zN, zS, zE, zW, zNE, zNW, zSE, zSW);
        if (sym < 0)
            throw UnclassifiableNeighborhood("no classification case matches at (" +
                                             std::to_string(z.x) + "," + std::to_string(z.y) + ")");
        syms.push_back(sym);
    }
    return Patch(std::move(iv), std::move(syms));
}

Patch factor_chain(const Patch& y) { return q_classify(psi_dilate(y)); }

SftSpec edge_potts_spec(int q, int N) {
    if (q < 2 || N < 1) throw std::invalid_argument("q >= 2 and N >= 1 required");
    const int nsym = q * N * N;
    auto color = [N](int s) { return s / (N * N); };
    auto htone = [N](int s) { return (s / N) % N; };
    auto vtone = [N](int s) { return s % N; };
    std::vector<std::string> names;
    for (int s = 0; s < nsym; ++s)
        names.push_back(std::to_string(color(s)) + "h" + std::to_string(htone(s)) + "v" +
                        std::to_string(vtone(s)));
    Window w{{{0, 0}, {1, 0}, {0, 1}}};
    std::vector<std::vector<int>> allowed;
    for (int o = 0; o < nsym; ++o)
        for (int e1 = 0; e1 < nsym; ++e1)
            for (int e2 = 0; e2 < nsym; ++e2) {
                if (color(o) != color(e1) && htone(o) != 0) continue;
                if (color(o) != color(e2) && vtone(o) != 0) continue;
                allowed.push_back({o, e1, e2});
            }
    return SftSpec::from_allowed(Alphabet(std::move(names)), w, allowed, /*prune_unused=*/false);
}

int edge_potts_color(const SftSpec& spec, int sym) {
    const std::string& nm = spec.alphabet().name(sym);
    return std::stoi(nm.substr(0, nm.find('h')));
}

}  // namespace sftlab
