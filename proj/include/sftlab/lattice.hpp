#pragma once
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "sftlab/errors.hpp"

namespace sftlab {

struct Site {
    int x = 0;
    int y = 0;
    friend bool operator==(const Site&, const Site&) = default;
    friend Site operator+(Site a, Site b) { return {a.x + b.x, a.y + b.y}; }
    friend Site operator-(Site a, Site b) { return {a.x - b.x, a.y - b.y}; }
    friend Site operator-(Site a) { return {-a.x, -a.y}; }
};

// Canonical site order: y descending, then x ascending (row-major, top row first).
inline bool canonical_less(Site a, Site b) {
    if (a.y != b.y) return a.y > b.y;
    return a.x < b.x;
}

struct SiteHash {
    std::size_t operator()(Site s) const {
        std::uint64_t k = (std::uint64_t(std::uint32_t(s.x)) << 32) | std::uint32_t(s.y);
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return std::size_t(k);
    }
};

enum class Metric { L1, Linf };

int dist(Site a, Site b, Metric m);

class Volume {
  public:
    Volume() = default;
    explicit Volume(std::vector<Site> sites);  // dedups and sorts canonically

    static Volume box(Site lo, Site hi);  // inclusive corners

    std::size_t size() const { return sites_.size(); }
    bool empty() const { return sites_.empty(); }
    bool contains(Site s) const { return index_.count(s) != 0; }
    int index_of(Site s) const;  // -1 if absent
    const std::vector<Site>& sites() const { return sites_; }
    Site operator[](std::size_t i) const { return sites_[i]; }

    Volume translated(Site z) const;
    Volume united(const Volume& other) const;
    bool intersects(const Volume& other) const;

    // Bounding box [min corner, max corner]; valid only when nonempty.
    Site bbox_min() const;
    Site bbox_max() const;
    bool is_rectangle() const;

    friend bool operator==(const Volume& a, const Volume& b) { return a.sites_ == b.sites_; }

  private:
    std::vector<Site> sites_;
    std::unordered_map<Site, int, SiteHash> index_;
};

Volume make_box(int n);  // [-n,n]^2
Volume boundary(const Volume& v, int r, Metric metric);

class Alphabet {
  public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names);
    std::size_t size() const { return names_.size(); }
    const std::string& name(int sym) const { return names_.at(std::size_t(sym)); }
    int index(const std::string& name) const;  // throws UnknownSymbol
    const std::vector<std::string>& names() const { return names_; }
    friend bool operator==(const Alphabet&, const Alphabet&) = default;

  private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> lookup_;
};

class Patch {
  public:
    Patch() = default;
    Patch(Volume v, std::vector<int> symbols);  // symbols in the volume's canonical order

    const Volume& volume() const { return vol_; }
    const std::vector<int>& symbols() const { return syms_; }
    int at(Site s) const;  // throws if s outside volume
    bool has(Site s) const { return vol_.contains(s); }

    Patch shifted(Site z) const;
    Patch restricted(const Volume& sub) const;  // sub must be contained in volume

    friend bool operator==(const Patch& a, const Patch& b) {
        return a.vol_ == b.vol_ && a.syms_ == b.syms_;
    }

  private:
    Volume vol_;
    std::vector<int> syms_;
};

Patch compose(const Patch& a, const Patch& b);  // throws OverlappingVolumes
Patch shift(const Patch& p, Site z);
Patch constant_patch(const Volume& v, int sym);

struct Window {
    std::vector<Site> offsets;  // origin must be a member
    bool contains_origin() const;
};

Window cross_window();  // {o, +e1, +e2, -e1, -e2}

// Text format: header `volume <w>x<h> origin <x> <y>`, rows top first.
// Origin names the bottom-left site of the rectangle. Rectangular patches only.
std::string patch_to_text(const Patch& p, const Alphabet& a);
Patch patch_from_text(std::istream& in, const Alphabet& a);
Patch patch_from_text(const std::string& text, const Alphabet& a);

}  // namespace sftlab
