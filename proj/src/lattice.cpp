#include "sftlab/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace sftlab {

std::uint64_t default_search_budget() {
    static std::uint64_t budget = [] {
        if (const char* env = std::getenv("SFTLAB_BUDGET")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end && *end == '\0' && v > 0) return std::uint64_t(v);
        }
        return std::uint64_t(200'000'000);
    }();
    return budget;
}

int dist(Site a, Site b, Metric m) {
    int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
    return m == Metric::L1 ? dx + dy : std::max(dx, dy);
}

Volume::Volume(std::vector<Site> sites) : sites_(std::move(sites)) {
    std::sort(sites_.begin(), sites_.end(), canonical_less);
    sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
    index_.reserve(sites_.size());
    for (std::size_t i = 0; i < sites_.size(); ++i) index_.emplace(sites_[i], int(i));
}

Volume Volume::box(Site lo, Site hi) {
    std::vector<Site> s;
    s.reserve(std::size_t(hi.x - lo.x + 1) * std::size_t(hi.y - lo.y + 1));
    for (int y = hi.y; y >= lo.y; --y)
        for (int x = lo.x; x <= hi.x; ++x) s.push_back({x, y});
    return Volume(std::move(s));
}

int Volume::index_of(Site s) const {
    auto it = index_.find(s);
    return it == index_.end() ? -1 : it->second;
}

Volume Volume::translated(Site z) const {
    std::vector<Site> s = sites_;
    for (auto& t : s) t = t + z;
    return Volume(std::move(s));
}

Volume Volume::united(const Volume& other) const {
    std::vector<Site> s = sites_;
    s.insert(s.end(), other.sites_.begin(), other.sites_.end());
    return Volume(std::move(s));
}

bool Volume::intersects(const Volume& other) const {
    const Volume& small = size() <= other.size() ? *this : other;
    const Volume& big = size() <= other.size() ? other : *this;
    for (Site s : small.sites_)
        if (big.contains(s)) return true;
    return false;
}

Site Volume::bbox_min() const {
    Site lo = sites_.front();
    for (Site s : sites_) {
        lo.x = std::min(lo.x, s.x);
        lo.y = std::min(lo.y, s.y);
    }
    return lo;
}

Site Volume::bbox_max() const {
    Site hi = sites_.front();
    for (Site s : sites_) {
        hi.x = std::max(hi.x, s.x);
        hi.y = std::max(hi.y, s.y);
    }
    return hi;
}

bool Volume::is_rectangle() const {
    if (empty()) return false;
    Site lo = bbox_min(), hi = bbox_max();
    return size() == std::size_t(hi.x - lo.x + 1) * std::size_t(hi.y - lo.y + 1);
}

Volume make_box(int n) { return Volume::box({-n, -n}, {n, n}); }

Volume boundary(const Volume& v, int r, Metric metric) {
    std::vector<Site> out;
    Site lo = v.bbox_min(), hi = v.bbox_max();
    for (int y = hi.y + r; y >= lo.y - r; --y) {
        for (int x = lo.x - r; x <= hi.x + r; ++x) {
            Site s{x, y};
            if (v.contains(s)) continue;
            bool close = false;
            for (Site t : v.sites())
                if (dist(s, t, metric) <= r) {
                    close = true;
                    break;
                }
            if (close) out.push_back(s);
        }
    }
    return Volume(std::move(out));
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    lookup_.reserve(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) lookup_.emplace(names_[i], int(i));
}

int Alphabet::index(const std::string& name) const {
    auto it = lookup_.find(name);
    if (it == lookup_.end()) throw UnknownSymbol("unknown symbol name: " + name);
    return it->second;
}

Patch::Patch(Volume v, std::vector<int> symbols) : vol_(std::move(v)), syms_(std::move(symbols)) {
    if (vol_.size() != syms_.size())
        throw std::invalid_argument("patch symbol count does not match volume size");
}

int Patch::at(Site s) const {
    int i = vol_.index_of(s);
    if (i < 0) throw std::out_of_range("site outside patch volume");
    return syms_[std::size_t(i)];
}

Patch Patch::shifted(Site z) const {
    Volume v = vol_.translated(z);
    // translation preserves canonical order, so symbols carry over positionally
    return Patch(std::move(v), syms_);
}

Patch Patch::restricted(const Volume& sub) const {
    std::vector<int> syms;
    syms.reserve(sub.size());
    for (Site s : sub.sites()) syms.push_back(at(s));
    return Patch(sub, std::move(syms));
}

Patch compose(const Patch& a, const Patch& b) {
    if (a.volume().intersects(b.volume()))
        throw OverlappingVolumes("compose: patch volumes intersect");
    Volume u = a.volume().united(b.volume());
    std::vector<int> syms;
    syms.reserve(u.size());
    for (Site s : u.sites()) syms.push_back(a.has(s) ? a.at(s) : b.at(s));
    return Patch(std::move(u), std::move(syms));
}

Patch shift(const Patch& p, Site z) { return p.shifted(z); }

Patch constant_patch(const Volume& v, int sym) {
    return Patch(v, std::vector<int>(v.size(), sym));
}

bool Window::contains_origin() const {
    for (Site s : offsets)
        if (s == Site{0, 0}) return true;
    return false;
}

Window cross_window() { return Window{{{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}}}; }

std::string patch_to_text(const Patch& p, const Alphabet& a) {
    const Volume& v = p.volume();
    if (!v.is_rectangle()) throw BadPatchFormat("patch text format requires a rectangular volume");
    Site lo = v.bbox_min(), hi = v.bbox_max();
    std::ostringstream os;
    os << "volume " << (hi.x - lo.x + 1) << "x" << (hi.y - lo.y + 1) << " origin " << lo.x << " "
       << lo.y << "\n";
    for (int y = hi.y; y >= lo.y; --y) {
        for (int x = lo.x; x <= hi.x; ++x) {
            if (x > lo.x) os << " ";
            os << a.name(p.at({x, y}));
        }
        os << "\n";
    }
    return os.str();
}

Patch patch_from_text(std::istream& in, const Alphabet& a) {
    std::string kw, dims;
    int ox, oy;
    if (!(in >> kw >> dims) || kw != "volume")
        throw BadPatchFormat("expected 'volume <w>x<h> origin <x> <y>' header");
    auto xpos = dims.find('x');
    if (xpos == std::string::npos) throw BadPatchFormat("bad dimension spec: " + dims);
    int w = std::stoi(dims.substr(0, xpos));
    int h = std::stoi(dims.substr(xpos + 1));
    if (!(in >> kw >> ox >> oy) || kw != "origin") throw BadPatchFormat("expected origin");
    if (w <= 0 || h <= 0) throw BadPatchFormat("non-positive patch dimensions");
    Volume v = Volume::box({ox, oy}, {ox + w - 1, oy + h - 1});
    std::vector<int> syms;
    syms.reserve(v.size());
    for (int i = 0; i < w * h; ++i) {
        std::string name;
        if (!(in >> name)) throw BadPatchFormat("truncated patch body");
        syms.push_back(a.index(name));
    }
    return Patch(std::move(v), std::move(syms));
}

Patch patch_from_text(const std::string& text, const Alphabet& a) {
    std::istringstream is(text);
    return patch_from_text(is, a);
}

}  // namespace sftlab
