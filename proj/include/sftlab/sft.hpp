#pragma once
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sftlab/lattice.hpp"

namespace sftlab {

using u128 = unsigned __int128;

// Membership over window-shaped patches; symbols given in window-offset order.
// Three storage modes: a materialized allowed set (sorted codes), a forbidden
// template list (wildcards), or an opaque predicate.
class SftSpec {
  public:
    SftSpec() = default;

    static SftSpec from_allowed(Alphabet a, Window w, const std::vector<std::vector<int>>& allowed,
                                bool prune_unused = true);
    // name, when nonempty, must be registered via register_spec_predicate so the
    // spec can round-trip through the text format without materialization
    static SftSpec from_predicate(Alphabet a, Window w, std::function<bool(const int*)> member,
                                  std::string name = {});
    // forbidden templates: -1 entries are wildcards
    static SftSpec from_forbidden(Alphabet a, Window w,
                                  std::vector<std::vector<int>> forbidden_templates);
    static SftSpec full_shift(Alphabet a);

    const Alphabet& alphabet() const { return alphabet_; }
    const Window& window() const { return window_; }
    int window_size() const { return int(window_.offsets.size()); }

    bool window_allowed(const int* syms) const;
    bool window_allowed(const std::vector<int>& syms) const;

    bool has_allowed_set() const { return !allowed_codes_.empty(); }
    const std::vector<std::uint64_t>& allowed_codes() const { return allowed_codes_; }
    std::vector<int> decode(std::uint64_t code) const;
    std::uint64_t encode(const int* syms) const;

    // necessary condition for symbol a at z and b at z+e to co-occur in some
    // allowed window patch; identically true when no table is attached
    bool pair_plausible(int a, int b, Site e) const;
    void set_pair_table(std::function<bool(int, int, Site)> fn, std::vector<Site> offsets);
    const std::vector<Site>& pair_offsets() const { return pair_offsets_; }
    void derive_pair_table();  // from the materialized allowed set
    const std::vector<std::vector<int>>& forbidden_templates() const { return forbidden_; }
    const std::string& predicate_name() const { return predicate_name_; }

  private:
    Alphabet alphabet_;
    Window window_;
    std::function<bool(const int*)> member_;
    std::vector<std::uint64_t> allowed_codes_;  // sorted; empty in predicate mode
    std::vector<std::vector<int>> forbidden_;
    std::function<bool(int, int, Site)> pair_fn_;
    std::vector<Site> pair_offsets_;
    std::string predicate_name_;
};

// constructors for named predicate specs, looked up by spec_from_text
void register_spec_predicate(const std::string& name, std::function<SftSpec()> make);

struct AdmissibilityReport {
    bool locally_admissible = false;
    int extendable_margin = 0;
    std::optional<Patch> witness;
};

bool check_local(const SftSpec& spec, const Patch& p);

AdmissibilityReport check_extendable(const SftSpec& spec, const Patch& p, int margin,
                                     std::uint64_t budget = default_search_budget());

struct EnumOptions {
    std::uint64_t budget = default_search_budget();
    bool collect = false;          // keep patches (otherwise count only)
    std::uint64_t shuffle_key = 0; // nonzero: randomized symbol order per site
    bool stop_at_first = false;
    bool reverse_site_order = false;
    // per-symbol positive integer weight; count becomes a weighted sum
    const std::vector<std::uint64_t>* site_weight = nullptr;
    // per-symbol positive real weight; accumulated into weighted_sum
    const std::vector<double>* site_weight_real = nullptr;
};

struct EnumResult {
    u128 count = 0;
    double weighted_sum = 0;  // sum of real site-weight products (count when unweighted)
    std::vector<Patch> patches;
};

// All p on v with compose(p, boundary) locally admissible.
EnumResult enumerate_patches(const SftSpec& spec, const Volume& v, const Patch* boundary,
                             const EnumOptions& opts = {},
                             const std::function<void(const Patch&)>& on_patch = nullptr);

// seeded draw: restrict a shuffled-DFS filling of a slack-fattened copy of v
Patch random_admissible_patch(const SftSpec& spec, const Volume& v, int slack, std::uint64_t key,
                              std::uint64_t budget = default_search_budget());

struct GluingReport {
    int pairs_tested = 0;
    int failures = 0;
    int budget_exceeded = 0;
    std::vector<std::pair<Patch, Patch>> failure_witnesses;
};

GluingReport gluing_check(const SftSpec& spec, int gap, int window_radius, int trials,
                          std::uint64_t seed, std::uint64_t budget = default_search_budget());

struct InteractionTerm {
    std::vector<Site> shape;  // offsets, origin-anchored translate class
    std::function<double(const std::vector<int>&)> energy;  // symbols in shape order
};

struct FiniteRangeInteraction {
    std::vector<InteractionTerm> terms;
};

struct BlockRecode {
    Volume lambda;               // letter shape
    std::vector<Patch> letters;  // admissible lambda-patches, canonical order
    SftSpec cross_spec;          // overlap-consistency spec on the letter alphabet
    std::vector<double> letter_energy;
    // letter symbol of the original configuration at site z
    int letter_at(const Patch& config, Site z) const;
};

BlockRecode block_recode(const SftSpec& spec, const FiniteRangeInteraction& phi,
                         std::uint64_t budget = default_search_budget());

// rebuild a predicate-mode spec with an explicit allowed set (same alphabet)
SftSpec materialize_allowed(const SftSpec& spec, std::uint64_t budget = default_search_budget());

// spec file format I/O (alphabet/window/allowed lines, '#' comments)
std::string spec_to_text(const SftSpec& spec);
SftSpec spec_from_text(const std::string& text);

}  // namespace sftlab
