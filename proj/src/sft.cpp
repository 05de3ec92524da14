#include "sftlab/sft.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "sftlab/rng.hpp"

namespace sftlab {

SftSpec SftSpec::from_allowed(Alphabet a, Window w, const std::vector<std::vector<int>>& allowed,
                              bool prune_unused) {
    SftSpec s;
    s.alphabet_ = std::move(a);
    s.window_ = std::move(w);
    const int ws = int(s.window_.offsets.size());

    std::vector<std::vector<int>> patches = allowed;
    if (prune_unused) {
        std::vector<char> used(s.alphabet_.size(), 0);
        for (const auto& p : patches)
            for (int sym : p) used.at(std::size_t(sym)) = 1;
        if (std::find(used.begin(), used.end(), 0) != used.end()) {
            std::vector<std::string> names;
            std::vector<int> remap(s.alphabet_.size(), -1);
            for (std::size_t i = 0; i < used.size(); ++i)
                if (used[i]) {
                    remap[i] = int(names.size());
                    names.push_back(s.alphabet_.name(int(i)));
                }
            s.alphabet_ = Alphabet(std::move(names));
            for (auto& p : patches)
                for (int& sym : p) sym = remap[std::size_t(sym)];
        }
    }
    s.allowed_codes_.reserve(patches.size());
    for (const auto& p : patches) {
        if (int(p.size()) != ws) throw std::invalid_argument("allowed patch has wrong arity");
        s.allowed_codes_.push_back(s.encode(p.data()));
    }
    std::sort(s.allowed_codes_.begin(), s.allowed_codes_.end());
    s.allowed_codes_.erase(std::unique(s.allowed_codes_.begin(), s.allowed_codes_.end()),
                           s.allowed_codes_.end());
    s.derive_pair_table();
    return s;
}

SftSpec SftSpec::from_predicate(Alphabet a, Window w, std::function<bool(const int*)> member,
                                std::string name) {
    SftSpec s;
    s.alphabet_ = std::move(a);
    s.window_ = std::move(w);
    s.member_ = std::move(member);
    s.predicate_name_ = std::move(name);
    return s;
}

namespace {
std::map<std::string, std::function<SftSpec()>>& predicate_registry() {
    static std::map<std::string, std::function<SftSpec()>> reg;
    return reg;
}
}  // namespace

void register_spec_predicate(const std::string& name, std::function<SftSpec()> make) {
    predicate_registry()[name] = std::move(make);
}

SftSpec SftSpec::from_forbidden(Alphabet a, Window w,
                                std::vector<std::vector<int>> forbidden_templates) {
    SftSpec s;
    s.alphabet_ = std::move(a);
    s.window_ = std::move(w);
    s.forbidden_ = std::move(forbidden_templates);
    const std::size_t ws = s.window_.offsets.size();
    for (const auto& t : s.forbidden_)
        if (t.size() != ws) throw std::invalid_argument("forbidden template has wrong arity");
    return s;
}

SftSpec SftSpec::full_shift(Alphabet a) {
    SftSpec s;
    s.alphabet_ = std::move(a);
    s.window_ = Window{{{0, 0}}};
    const int n = int(s.alphabet_.size());
    s.allowed_codes_.reserve(std::size_t(n));
    for (int i = 0; i < n; ++i) s.allowed_codes_.push_back(std::uint64_t(i));
    return s;
}

std::uint64_t SftSpec::encode(const int* syms) const {
    const std::uint64_t base = alphabet_.size();
    std::uint64_t code = 0;
    for (int i = int(window_.offsets.size()) - 1; i >= 0; --i) code = code * base + std::uint64_t(syms[i]);
    return code;
}

std::vector<int> SftSpec::decode(std::uint64_t code) const {
    const std::uint64_t base = alphabet_.size();
    std::vector<int> syms(window_.offsets.size());
    for (auto& s : syms) {
        s = int(code % base);
        code /= base;
    }
    return syms;
}

bool SftSpec::window_allowed(const int* syms) const {
    if (!allowed_codes_.empty())
        return std::binary_search(allowed_codes_.begin(), allowed_codes_.end(), encode(syms));
    if (member_) return member_(syms);
    if (!forbidden_.empty()) {
        const std::size_t ws = window_.offsets.size();
        for (const auto& t : forbidden_) {
            bool match = true;
            for (std::size_t i = 0; i < ws && match; ++i)
                if (t[i] >= 0 && t[i] != syms[i]) match = false;
            if (match) return false;
        }
        return true;
    }
    return true;  // full shift
}

bool SftSpec::window_allowed(const std::vector<int>& syms) const { return window_allowed(syms.data()); }

bool SftSpec::pair_plausible(int a, int b, Site e) const {
    if (!pair_fn_) return true;
    return pair_fn_(a, b, e);
}

void SftSpec::set_pair_table(std::function<bool(int, int, Site)> fn, std::vector<Site> offsets) {
    pair_fn_ = std::move(fn);
    pair_offsets_ = std::move(offsets);
}

void SftSpec::derive_pair_table() {
    if (allowed_codes_.empty()) return;
    const auto& offs = window_.offsets;
    const int ws = int(offs.size());
    const int n = int(alphabet_.size());
    // distinct nonzero offset differences within the window
    std::vector<Site> diffs;
    for (int i = 0; i < ws; ++i)
        for (int j = 0; j < ws; ++j) {
            if (i == j) continue;
            Site d = offs[j] - offs[i];
            bool seen = false;
            for (Site x : diffs)
                if (x == d) seen = true;
            if (!seen) diffs.push_back(d);
        }
    auto table = std::make_shared<std::vector<std::vector<char>>>(diffs.size());
    for (auto& t : *table) t.assign(std::size_t(n) * std::size_t(n), 0);
    for (std::uint64_t code : allowed_codes_) {
        std::vector<int> syms = decode(code);
        for (int i = 0; i < ws; ++i)
            for (int j = 0; j < ws; ++j) {
                if (i == j) continue;
                Site d = offs[j] - offs[i];
                for (std::size_t k = 0; k < diffs.size(); ++k)
                    if (diffs[k] == d)
                        (*table)[k][std::size_t(syms[i]) * std::size_t(n) + std::size_t(syms[j])] = 1;
            }
    }
    auto diffs_copy = std::make_shared<std::vector<Site>>(diffs);
    int nn = n;
    pair_offsets_ = diffs;
    pair_fn_ = [table, diffs_copy, nn](int a, int b, Site e) {
        for (std::size_t k = 0; k < diffs_copy->size(); ++k)
            if ((*diffs_copy)[k] == e)
                return (*table)[k][std::size_t(a) * std::size_t(nn) + std::size_t(b)] != 0;
        return true;
    };
}

bool check_local(const SftSpec& spec, const Patch& p) {
    const int nsym = int(spec.alphabet().size());
    for (int s : p.symbols())
        if (s < 0 || s >= nsym) throw UnknownSymbol("patch symbol index out of range");
    const Volume& v = p.volume();
    const auto& offs = spec.window().offsets;
    std::vector<int> buf(offs.size());
    for (Site z : v.sites()) {
        bool full = true;
        for (std::size_t i = 0; i < offs.size(); ++i) {
            Site t = z + offs[i];
            if (!v.contains(t)) {
                full = false;
                break;
            }
            buf[i] = p.at(t);
        }
        if (full && !spec.window_allowed(buf.data())) return false;
    }
    return true;
}

namespace {

struct Filler {
    const SftSpec& spec;
    std::vector<Site> all_sites;       // interior (DFS order) then boundary
    std::size_t n_interior = 0;
    std::vector<int> assign;           // symbol per all_sites slot, -1 unassigned
    std::unordered_map<Site, int, SiteHash> slot_of;
    // per interior slot: pair checks (other slot, offset index into pair_offsets)
    std::vector<std::vector<std::pair<int, int>>> pair_checks;
    // per interior slot: window translates that complete at this slot; each is a
    // list of slots in window-offset order
    std::vector<std::vector<std::vector<int>>> win_checks;
    std::vector<std::vector<int>> upfront_windows;  // boundary-only windows
    std::uint64_t nodes = 0;
    std::uint64_t budget;

    Filler(const SftSpec& sp, const Volume& v, const Patch* bdry, bool reverse, std::uint64_t bud)
        : spec(sp), budget(bud) {
        all_sites = v.sites();
        if (reverse) std::reverse(all_sites.begin(), all_sites.end());
        n_interior = all_sites.size();
        if (bdry)
            for (Site s : bdry->volume().sites()) all_sites.push_back(s);
        assign.assign(all_sites.size(), -1);
        slot_of.reserve(all_sites.size());
        for (std::size_t i = 0; i < all_sites.size(); ++i) {
            if (slot_of.count(all_sites[i]))
                throw OverlappingVolumes("boundary overlaps interior volume");
            slot_of.emplace(all_sites[i], int(i));
        }
        if (bdry)
            for (std::size_t i = n_interior; i < all_sites.size(); ++i)
                assign[i] = bdry->at(all_sites[i]);

        const auto& offs = spec.window().offsets;
        const auto& pdiffs = spec.pair_offsets();
        pair_checks.resize(n_interior);
        win_checks.resize(n_interior);
        for (std::size_t i = 0; i < n_interior; ++i) {
            for (std::size_t k = 0; k < pdiffs.size(); ++k) {
                auto it = slot_of.find(all_sites[i] + pdiffs[k]);
                if (it == slot_of.end()) continue;
                int j = it->second;
                // only slots assigned before i: boundary or earlier interior
                if (j < int(i) || j >= int(n_interior)) pair_checks[i].push_back({j, int(k)});
            }
        }
        // window translates fully inside the combined volume
        std::unordered_map<Site, char, SiteHash> seen;
        for (Site s : all_sites)
            for (Site off : offs) seen.emplace(s - off, 0);
        for (auto& [z, mark] : seen) {
            (void)mark;
            std::vector<int> slots;
            bool full = true;
            int last_interior = -1;
            for (Site off : offs) {
                auto it = slot_of.find(z + off);
                if (it == slot_of.end()) {
                    full = false;
                    break;
                }
                slots.push_back(it->second);
                if (it->second < int(n_interior)) last_interior = std::max(last_interior, it->second);
            }
            if (!full) continue;
            if (last_interior < 0)
                upfront_windows.push_back(std::move(slots));
            else
                win_checks[std::size_t(last_interior)].push_back(std::move(slots));
        }
    }

    bool upfront_ok() {
        std::vector<int> buf;
        for (const auto& w : upfront_windows) {
            buf.clear();
            for (int s : w) buf.push_back(assign[std::size_t(s)]);
            if (!spec.window_allowed(buf.data())) return false;
        }
        return true;
    }

    bool site_ok(std::size_t i) {
        for (auto [j, k] : pair_checks[i])
            if (!spec.pair_plausible(assign[i], assign[std::size_t(j)], spec.pair_offsets()[std::size_t(k)]))
                return false;
        thread_local std::vector<int> buf;
        for (const auto& w : win_checks[i]) {
            buf.clear();
            for (int s : w) buf.push_back(assign[std::size_t(s)]);
            if (!spec.window_allowed(buf.data())) return false;
        }
        return true;
    }
};

}  // namespace

EnumResult enumerate_patches(const SftSpec& spec, const Volume& v, const Patch* boundary,
                             const EnumOptions& opts, const std::function<void(const Patch&)>& on_patch) {
    const int nsym = int(spec.alphabet().size());
    if (boundary)
        for (int s : boundary->symbols())
            if (s < 0 || s >= nsym) throw UnknownSymbol("boundary symbol index out of range");
    Filler f(spec, v, boundary, opts.reverse_site_order, opts.budget);
    EnumResult res;
    if (!f.upfront_ok()) return res;

    std::vector<int> order((std::size_t)nsym);
    for (int i = 0; i < nsym; ++i) order[std::size_t(i)] = i;

    // iterative DFS with explicit symbol-order stacks per depth
    const std::size_t n = f.n_interior;
    std::vector<std::vector<int>> orders(n);
    std::vector<u128> weight_stack(n + 1, 1);
    if (opts.shuffle_key == 0)
        for (auto& o : orders) o = order;
    else
        for (std::size_t i = 0; i < n; ++i) {
            orders[i] = order;
            for (std::size_t k = orders[i].size(); k > 1; --k) {
                std::uint64_t r = counter_rng(opts.shuffle_key, i, k);
                std::swap(orders[i][k - 1], orders[i][r % k]);
            }
        }
    std::vector<double> rweight_stack(n + 1, 1.0);
    std::vector<std::size_t> cursor(n, 0);
    std::size_t depth = 0;
    bool done = n == 0;
    if (done) {
        res.count = 1;
        res.weighted_sum = 1;
        if (opts.collect || on_patch) {
            Patch p(v, {});
            if (opts.collect) res.patches.push_back(p);
            if (on_patch) on_patch(p);
        }
        return res;
    }
    while (true) {
        if (cursor[depth] >= orders[depth].size()) {
            f.assign[depth] = -1;
            if (depth == 0) break;
            --depth;
            ++cursor[depth];
            continue;
        }
        if (++f.nodes > f.budget) throw SearchBudgetExceeded(f.nodes);
        int sym = orders[depth][cursor[depth]];
        f.assign[depth] = sym;
        if (!f.site_ok(depth)) {
            ++cursor[depth];
            continue;
        }
        weight_stack[depth + 1] =
            weight_stack[depth] *
            (opts.site_weight ? u128((*opts.site_weight)[std::size_t(sym)]) : u128(1));
        rweight_stack[depth + 1] =
            rweight_stack[depth] *
            (opts.site_weight_real ? (*opts.site_weight_real)[std::size_t(sym)] : 1.0);
        if (depth + 1 == n) {
            res.count += weight_stack[depth + 1];
            res.weighted_sum += rweight_stack[depth + 1];
            if (opts.collect || on_patch) {
                std::vector<Site> sites(f.all_sites.begin(), f.all_sites.begin() + long(n));
                Volume pv(sites);
                std::vector<int> syms;
                syms.reserve(n);
                for (Site s : pv.sites()) syms.push_back(f.assign[std::size_t(f.slot_of.at(s))]);
                Patch p(std::move(pv), std::move(syms));
                if (opts.collect) res.patches.push_back(p);
                if (on_patch) on_patch(p);
            }
            if (opts.stop_at_first) return res;
            ++cursor[depth];
            continue;
        }
        ++depth;
        cursor[depth] = 0;
    }
    return res;
}

static Volume fattening(const Volume& v, int margin) {
    std::vector<Site> out;
    Site lo = v.bbox_min(), hi = v.bbox_max();
    for (int y = hi.y + margin; y >= lo.y - margin; --y)
        for (int x = lo.x - margin; x <= hi.x + margin; ++x) {
            Site s{x, y};
            if (v.contains(s)) continue;
            for (Site t : v.sites())
                if (dist(s, t, Metric::Linf) <= margin) {
                    out.push_back(s);
                    break;
                }
        }
    return Volume(std::move(out));
}

AdmissibilityReport check_extendable(const SftSpec& spec, const Patch& p, int margin,
                                     std::uint64_t budget) {
    AdmissibilityReport rep;
    if (!check_local(spec, p)) return rep;
    rep.locally_admissible = true;
    if (margin == 0 || p.volume().empty()) {
        rep.extendable_margin = 0;
        rep.witness = p;
        return rep;
    }
    Volume ring = fattening(p.volume(), margin);
    EnumOptions opts;
    opts.budget = budget;
    opts.stop_at_first = true;
    opts.collect = true;
    EnumResult r = enumerate_patches(spec, ring, &p, opts);
    if (r.count > 0) {
        rep.extendable_margin = margin;
        rep.witness = compose(p, r.patches.front());
    } else {
        rep.locally_admissible = true;
        rep.extendable_margin = 0;
    }
    return rep;
}

Patch random_admissible_patch(const SftSpec& spec, const Volume& v, int slack,
                              std::uint64_t key, std::uint64_t budget) {
    // fill a slack-fattened copy so the restriction is comfortably extendable
    Volume big = fattening(v, slack).united(v);
    EnumOptions opts;
    opts.budget = budget;
    opts.stop_at_first = true;
    opts.collect = true;
    opts.shuffle_key = key;
    EnumResult r = enumerate_patches(spec, big, nullptr, opts);
    if (r.count == 0) throw EmptySupport("no admissible patch on the requested volume");
    return r.patches.front().restricted(v);
}

GluingReport gluing_check(const SftSpec& spec, int gap, int window_radius, int trials,
                          std::uint64_t seed, std::uint64_t budget) {
    GluingReport rep;
    const int r = window_radius;
    Volume boxA = make_box(r);
    Site offset{2 * r + gap, 0};  // dist_inf between the two boxes is exactly gap
    Volume boxB = boxA.translated(offset);
    for (int t = 0; t < trials; ++t) {
        Patch a = random_admissible_patch(spec, boxA, 2, counter_rng(seed, std::uint64_t(t), 1), budget);
        Patch b0 = random_admissible_patch(spec, boxA, 2, counter_rng(seed, std::uint64_t(t), 2), budget);
        Patch b = b0.shifted(offset);
        Patch joint = compose(a, b);
        Volume ext = fattening(boxA, r).united(fattening(boxB, r));
        std::vector<Site> ext_sites;
        for (Site s : ext.sites())
            if (!boxA.contains(s) && !boxB.contains(s)) ext_sites.push_back(s);
        Volume ext_v(ext_sites);
        ++rep.pairs_tested;
        try {
            EnumOptions opts;
            opts.budget = budget;
            opts.stop_at_first = true;
            opts.shuffle_key = counter_rng(seed, std::uint64_t(t), 3);
            EnumResult res = enumerate_patches(spec, ext_v, &joint, opts);
            if (res.count == 0) {
                ++rep.failures;
                rep.failure_witnesses.push_back({a, b});
            }
        } catch (const SearchBudgetExceeded&) {
            ++rep.budget_exceeded;
        }
    }
    return rep;
}

BlockRecode block_recode(const SftSpec& spec, const FiniteRangeInteraction& phi,
                         std::uint64_t budget) {
    // letter shape: the window plus every origin-anchored translate of each term
    std::vector<Site> lam_sites = spec.window().offsets;
    for (const auto& term : phi.terms)
        for (Site u : term.shape)
            for (Site w : term.shape) lam_sites.push_back(w - u);
    BlockRecode out;
    out.lambda = Volume(lam_sites);

    EnumOptions opts;
    opts.budget = budget;
    opts.collect = true;
    EnumResult letters = enumerate_patches(spec, out.lambda, nullptr, opts);
    out.letters = std::move(letters.patches);
    if (out.letters.size() > (1u << 21))
        throw AlphabetBudgetExceeded("recoded letter alphabet too large");

    // letter names: concatenated base-symbol names in canonical lambda order
    bool short_names = true;
    for (const auto& nm : spec.alphabet().names())
        if (nm.size() != 1) short_names = false;
    std::vector<std::string> names;
    names.reserve(out.letters.size());
    for (const auto& L : out.letters) {
        std::string nm;
        for (std::size_t i = 0; i < L.symbols().size(); ++i) {
            if (!short_names && i) nm += ".";
            nm += spec.alphabet().name(L.symbols()[i]);
        }
        names.push_back(std::move(nm));
    }

    out.letter_energy.assign(out.letters.size(), 0.0);
    for (std::size_t li = 0; li < out.letters.size(); ++li) {
        const Patch& L = out.letters[li];
        double e = 0;
        for (const auto& term : phi.terms) {
            for (Site u : term.shape) {
                std::vector<int> sub;
                sub.reserve(term.shape.size());
                for (Site w : term.shape) sub.push_back(L.at(w - u));
                e += term.energy(sub) / double(term.shape.size());
            }
        }
        out.letter_energy[li] = e;
    }

    // overlap-consistency cross spec over the letter alphabet
    auto letters_sp = std::make_shared<std::vector<Patch>>(out.letters);
    Volume lambda = out.lambda;
    Window cw = cross_window();
    // all distinct offset differences within the cross
    std::vector<Site> diffs;
    for (Site u : cw.offsets)
        for (Site w : cw.offsets) {
            if (u == w) continue;
            Site d = w - u;
            bool seen = false;
            for (Site x : diffs)
                if (x == d) seen = true;
            if (!seen) diffs.push_back(d);
        }
    // overlap index lists per difference
    struct OverlapList { Site d; std::vector<std::pair<int, int>> idx; };
    auto overlaps = std::make_shared<std::vector<OverlapList>>();
    for (Site d : diffs) {
        OverlapList ol{d, {}};
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            Site w = lambda[i];
            int j = lambda.index_of(w - d);
            if (j >= 0) ol.idx.push_back({int(i), j});
        }
        overlaps->push_back(std::move(ol));
    }
    auto consistent = [letters_sp, overlaps](int a, int b, Site d) {
        const auto& A = (*letters_sp)[std::size_t(a)].symbols();
        const auto& B = (*letters_sp)[std::size_t(b)].symbols();
        for (const auto& ol : *overlaps)
            if (ol.d == d) {
                for (auto [i, j] : ol.idx)
                    if (A[std::size_t(i)] != B[std::size_t(j)]) return false;
                return true;
            }
        return true;
    };
    auto member = [consistent, cw](const int* syms) {
        const auto& offs = cw.offsets;
        for (std::size_t i = 0; i < offs.size(); ++i)
            for (std::size_t j = 0; j < offs.size(); ++j) {
                if (i == j) continue;
                if (!consistent(syms[i], syms[j], offs[j] - offs[i])) return false;
            }
        return true;
    };
    out.cross_spec = SftSpec::from_predicate(Alphabet(std::move(names)), cw, member);
    out.cross_spec.set_pair_table(consistent, diffs);
    return out;
}

int BlockRecode::letter_at(const Patch& config, Site z) const {
    std::vector<int> key;
    key.reserve(lambda.size());
    for (Site off : lambda.sites()) key.push_back(config.at(z + off));
    for (std::size_t i = 0; i < letters.size(); ++i)
        if (letters[i].symbols() == key) return int(i);
    throw UnknownSymbol("configuration window is not an admissible letter");
}

SftSpec materialize_allowed(const SftSpec& spec, std::uint64_t budget) {
    if (spec.has_allowed_set()) return spec;
    Volume wv(spec.window().offsets);
    EnumOptions opts;
    opts.budget = budget;
    opts.collect = true;
    EnumResult r = enumerate_patches(spec, wv, nullptr, opts);
    std::vector<std::vector<int>> allowed;
    allowed.reserve(r.patches.size());
    for (const auto& p : r.patches) {
        std::vector<int> syms;
        syms.reserve(spec.window().offsets.size());
        for (Site off : spec.window().offsets) syms.push_back(p.at(off));
        allowed.push_back(std::move(syms));
    }
    return SftSpec::from_allowed(spec.alphabet(), spec.window(), allowed, /*prune_unused=*/false);
}

std::string spec_to_text(const SftSpec& spec) {
    std::ostringstream os;
    os << "alphabet:";
    for (const auto& nm : spec.alphabet().names()) os << " " << nm;
    os << "\n";
    Window cw = cross_window();
    if (spec.window().offsets == cw.offsets) {
        os << "window: cross\n";
    } else {
        os << "window:";
        for (Site s : spec.window().offsets) os << " " << s.x << "," << s.y;
        os << "\n";
    }
    if (!spec.predicate_name().empty()) {
        os << "predicate: " << spec.predicate_name() << "\n";
    } else if (spec.has_allowed_set()) {
        os << "allowed:\n";
        for (std::uint64_t code : spec.allowed_codes()) {
            std::vector<int> syms = spec.decode(code);
            for (std::size_t i = 0; i < syms.size(); ++i)
                os << (i ? " " : "") << spec.alphabet().name(syms[i]);
            os << "\n";
        }
    } else if (!spec.forbidden_templates().empty()) {
        os << "forbidden:\n";
        for (const auto& tpl : spec.forbidden_templates()) {
            for (std::size_t i = 0; i < tpl.size(); ++i) {
                if (i) os << " ";
                if (tpl[i] < 0)
                    os << "*";
                else
                    os << spec.alphabet().name(tpl[i]);
            }
            os << "\n";
        }
    } else {
        // fall back to explicit window enumeration when small enough
        double combos = 1;
        for (std::size_t i = 0; i < spec.window().offsets.size(); ++i)
            combos *= double(spec.alphabet().size());
        if (combos <= 2e6) {
            os << "allowed:\n";
            std::vector<int> syms(spec.window().offsets.size(), 0);
            const int n = int(spec.alphabet().size());
            while (true) {
                if (spec.window_allowed(syms.data())) {
                    for (std::size_t i = 0; i < syms.size(); ++i)
                        os << (i ? " " : "") << spec.alphabet().name(syms[i]);
                    os << "\n";
                }
                std::size_t i = 0;
                for (; i < syms.size(); ++i) {
                    if (++syms[i] < n) break;
                    syms[i] = 0;
                }
                if (i == syms.size()) break;
            }
        } else {
            throw std::runtime_error("spec too large to materialize for export");
        }
    }
    return os.str();
}

SftSpec spec_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> names;
    Window w;
    std::vector<std::vector<int>> allowed;
    std::vector<std::vector<int>> forbidden;
    Alphabet alpha;
    std::string predicate_name;
    bool in_allowed = false;
    bool in_forbidden = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "alphabet:") {
            std::string nm;
            while (ls >> nm) names.push_back(nm);
            alpha = Alphabet(names);
        } else if (first == "window:") {
            std::string tok;
            while (ls >> tok) {
                if (tok == "cross") {
                    w = cross_window();
                } else {
                    auto comma = tok.find(',');
                    if (comma == std::string::npos) throw BadPatchFormat("bad window offset: " + tok);
                    w.offsets.push_back(
                        {std::stoi(tok.substr(0, comma)), std::stoi(tok.substr(comma + 1))});
                }
            }
        } else if (first == "predicate:") {
            if (!(ls >> predicate_name)) throw BadPatchFormat("predicate section missing a name");
        } else if (first == "allowed:") {
            in_allowed = true;
            in_forbidden = false;
        } else if (first == "forbidden:") {
            in_forbidden = true;
            in_allowed = false;
        } else if (in_allowed || in_forbidden) {
            std::vector<int> syms;
            auto sym = [&](const std::string& nm) {
                return in_forbidden && nm == "*" ? -1 : alpha.index(nm);
            };
            syms.push_back(sym(first));
            std::string nm;
            while (ls >> nm) syms.push_back(sym(nm));
            (in_forbidden ? forbidden : allowed).push_back(std::move(syms));
        } else {
            throw BadPatchFormat("unrecognized spec line: " + line);
        }
    }
    if (!w.contains_origin()) throw BadPatchFormat("spec window missing the origin");
    if (!predicate_name.empty()) {
        auto it = predicate_registry().find(predicate_name);
        if (it == predicate_registry().end())
            throw BadPatchFormat("unknown spec predicate: " + predicate_name);
        SftSpec spec = it->second();
        if (spec.alphabet().size() != alpha.size() || !(spec.window().offsets == w.offsets))
            throw BadPatchFormat("predicate " + predicate_name +
                                 " disagrees with the declared alphabet or window");
        return spec;
    }
    if (!forbidden.empty()) return SftSpec::from_forbidden(alpha, w, std::move(forbidden));
    return SftSpec::from_allowed(alpha, w, allowed, /*prune_unused=*/false);
}

}  // namespace sftlab
