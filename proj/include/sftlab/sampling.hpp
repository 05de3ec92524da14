#pragma once
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sftlab/gibbs.hpp"
#include "sftlab/sft.hpp"

namespace sftlab {

enum class LatticeKind { torus, pinned };

// Single-site (and 3x3 block) heat-bath chains. All randomness is drawn from a
// counter generator keyed by (seed, chain id, sweep, step), so trajectories are
// reproducible and independent of thread count.
struct ChainSpec {
    SftSpec spec;
    const Interaction* phi = nullptr;  // null: uniform over admissible candidates
    double beta = 0;
    LatticeKind kind = LatticeKind::torus;
    int w = 8, h = 8;
    Patch boundary;  // pinned: symbols for the frozen margin ring (missing sites filled)
    std::uint64_t seed = 0;
    std::uint64_t chain_id = 0;
    int sweeps = 1000;
    int thin = 10;
    int check_every = 100;
};

struct GridState {
    int w = 0, h = 0, margin = 0;
    bool torus = false;
    std::vector<int> cells;  // (w+2m) x (h+2m), row-major, site (x,y) at (y+m)*(w+2m)+(x+m)

    int get(int x, int y) const;
    void set(int x, int y, int sym);
    bool stored(int x, int y) const;  // inside the stored array (always true on a torus)
};

Volume pinned_ring(int w, int h, int margin);
Patch constant_ring(int w, int h, int margin, int sym);

GridState init_state(const ChainSpec& chain, int fill_symbol);

void heatbath_sweep(GridState& state, const ChainSpec& chain, std::uint64_t sweep_index);

// exact single-site conditional used by the sweep (for kernel tests)
std::vector<double> site_conditional(const GridState& state, const ChainSpec& chain, Site z);

bool state_admissible(const GridState& state, const ChainSpec& chain);

// 3x3 block heat bath with memoized exact block conditionals; the workhorse for
// hard-constrained models whose single-site dynamics freeze.
class BlockSampler {
  public:
    BlockSampler(ChainSpec chain, int fill_symbol);

    void sweep(std::uint64_t sweep_index);
    const GridState& state() const { return state_; }
    GridState& state() { return state_; }
    const ChainSpec& chain() const { return chain_; }

    // exact conditional of the 3x3 block at the given lower-left interior corner
    // given everything else: (fillings with x fast and y ascending, probabilities)
    std::pair<std::vector<std::vector<int>>, std::vector<double>> block_conditional(Site corner);

    std::size_t updates_per_sweep() const;
    std::size_t memo_entries() const { return memo_.size(); }

  private:
    struct Dist {
        std::vector<std::vector<int>> fill;
        std::vector<double> cum;
    };
    const Dist& dist_for(Site corner, const std::vector<int>& ring_key);

    ChainSpec chain_;
    GridState state_;
    std::unordered_map<std::string, Dist> memo_;
    std::vector<Site> ring_off_, block_off_, win_centers_;
};

// dedicated nearest-neighbor Potts spin sampler (energy = #disagreeing pairs)
struct PottsSpinChain {
    int q = 2;
    double beta = 0;
    int w = 8, h = 8;
    bool torus = true;
    int pin_color = -1;  // >= 0: pinned margin-1 ring of that color
    std::uint64_t seed = 0, chain_id = 0;
    std::vector<int> spins;  // (w+2) x (h+2)

    void init();  // ring + interior set to pin color (or color 0 on a torus)
    int spin(int x, int y) const;
    void set_spin(int x, int y, int c);
    void sweep(std::uint64_t sweep_index);
    std::vector<double> site_conditional(int x, int y) const;
};

struct OrderParams {
    double frac_dot_o = 0, frac_dot_x = 0, frac_arrow = 0;
    double largest_o = 0, largest_x = 0;
    std::vector<double> color_frac;
    double max_color_frac = 0;
};

OrderParams order_parameter_vertex(const GridState& state);
OrderParams order_parameter_colors(const std::vector<int>& colors, int q);

struct PhaseScanRow {
    double param = 0;
    std::string pinning;
    int replicate = 0;
    int sweep = 0;
    std::string stat;
    double value = 0;
};

struct PhaseScanCell {
    double param = 0;
    double gap = 0, gap_err = 0;
    double mean_pin0 = 0, mean_pin1 = 0;
    int failures = 0;
};

struct PhaseScanResult {
    std::vector<PhaseScanRow> rows;
    std::vector<PhaseScanCell> cells;
    double threshold_level = 0;       // l_q = sqrt(q) + 1
    double threshold_convention = 0;  // N solving beta_N = beta_c under our energy table
};

PhaseScanResult phase_scan_vertex(const std::vector<int>& Ns, int w, int h, int sweeps, int thin,
                                  int replicates, std::uint64_t seed, int threads = 1);
PhaseScanResult phase_scan_potts(int q, const std::vector<int>& Ns, int w, int h, int sweeps,
                                 int thin, int replicates, std::uint64_t seed, int threads = 1);

}  // namespace sftlab
