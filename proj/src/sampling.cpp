#include "sftlab/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "sftlab/models.hpp"
#include "sftlab/rng.hpp"

namespace sftlab {

namespace {

int reach(const Window& w) {
    int r = 0;
    for (Site o : w.offsets) r = std::max({r, std::abs(o.x), std::abs(o.y)});
    return r;
}

std::uint64_t lane_rng(const ChainSpec& c, int lane, std::uint64_t sweep, std::uint64_t step) {
    return counter_rng(c.seed, c.chain_id * 8 + std::uint64_t(lane), sweep, step);
}

}  // namespace

int GridState::get(int x, int y) const {
    if (torus) {
        x %= w;
        if (x < 0) x += w;
        y %= h;
        if (y < 0) y += h;
    }
    return cells[std::size_t((y + margin) * (w + 2 * margin) + (x + margin))];
}

void GridState::set(int x, int y, int sym) {
    if (torus) {
        x %= w;
        if (x < 0) x += w;
        y %= h;
        if (y < 0) y += h;
    }
    cells[std::size_t((y + margin) * (w + 2 * margin) + (x + margin))] = sym;
}

bool GridState::stored(int x, int y) const {
    if (torus) return true;
    return x >= -margin && x < w + margin && y >= -margin && y < h + margin;
}

Volume pinned_ring(int w, int h, int margin) {
    std::vector<Site> sites;
    for (int y = -margin; y < h + margin; ++y)
        for (int x = -margin; x < w + margin; ++x)
            if (x < 0 || x >= w || y < 0 || y >= h) sites.push_back({x, y});
    return Volume(std::move(sites));
}

Patch constant_ring(int w, int h, int margin, int sym) {
    return constant_patch(pinned_ring(w, h, margin), sym);
}

GridState init_state(const ChainSpec& chain, int fill_symbol) {
    GridState st;
    st.w = chain.w;
    st.h = chain.h;
    st.torus = chain.kind == LatticeKind::torus;
    st.margin = st.torus ? 0 : 2 * reach(chain.spec.window());
    st.cells.assign(std::size_t((st.w + 2 * st.margin) * (st.h + 2 * st.margin)), fill_symbol);
    if (!st.torus && !chain.boundary.volume().empty()) {
        for (int y = -st.margin; y < st.h + st.margin; ++y)
            for (int x = -st.margin; x < st.w + st.margin; ++x) {
                if (x >= 0 && x < st.w && y >= 0 && y < st.h) continue;
                if (chain.boundary.has({x, y})) st.set(x, y, chain.boundary.at({x, y}));
            }
    }
    return st;
}

std::vector<double> site_conditional(const GridState& state, const ChainSpec& chain, Site z) {
    const Window& win = chain.spec.window();
    int nsym = int(chain.spec.alphabet().size());
    // window centers whose window contains z
    std::vector<Site> centers;
    for (Site o : win.offsets) {
        Site c = z - o;
        bool dup = false;
        for (Site d : centers) dup = dup || d == c;
        if (dup) continue;
        bool fits = true;
        for (Site oo : win.offsets) fits = fits && state.stored((c + oo).x, (c + oo).y);
        if (fits) centers.push_back(c);
    }
    std::vector<double> probs(std::size_t(nsym), 0.0);
    std::vector<int> syms(win.offsets.size());
    double total = 0;
    for (int cand = 0; cand < nsym; ++cand) {
        bool ok = true;
        for (Site c : centers) {
            for (std::size_t i = 0; i < win.offsets.size(); ++i) {
                Site s = c + win.offsets[i];
                syms[i] = (s == z) ? cand : state.get(s.x, s.y);
            }
            if (!chain.spec.window_allowed(syms.data())) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        double wgt = chain.phi ? std::exp(-chain.beta * chain.phi->energy_of(cand)) : 1.0;
        probs[std::size_t(cand)] = wgt;
        total += wgt;
    }
    if (total <= 0) throw std::runtime_error("empty single-site candidate set");
    for (double& p : probs) p /= total;
    return probs;
}

bool state_admissible(const GridState& state, const ChainSpec& chain) {
    const Window& win = chain.spec.window();
    std::vector<int> syms(win.offsets.size());
    int lo_x = state.torus ? 0 : -state.margin;
    int hi_x = state.torus ? state.w : state.w + state.margin;
    int lo_y = state.torus ? 0 : -state.margin;
    int hi_y = state.torus ? state.h : state.h + state.margin;
    for (int y = lo_y; y < hi_y; ++y)
        for (int x = lo_x; x < hi_x; ++x) {
            bool fits = true;
            for (Site o : win.offsets) fits = fits && state.stored(x + o.x, y + o.y);
            if (!fits) continue;
            for (std::size_t i = 0; i < win.offsets.size(); ++i)
                syms[i] = state.get(x + win.offsets[i].x, y + win.offsets[i].y);
            if (!chain.spec.window_allowed(syms.data())) return false;
        }
    return true;
}

void heatbath_sweep(GridState& state, const ChainSpec& chain, std::uint64_t sweep_index) {
    int n = chain.w * chain.h;
    std::vector<int> perm((std::size_t)n);
    for (int i = 0; i < n; ++i) perm[std::size_t(i)] = i;
    for (int i = n - 1; i > 0; --i) {
        std::uint64_t r = lane_rng(chain, 0, sweep_index, std::uint64_t(i));
        std::swap(perm[std::size_t(i)], perm[std::size_t(r % std::uint64_t(i + 1))]);
    }
    for (int k = 0; k < n; ++k) {
        int site = perm[std::size_t(k)];
        Site z{site % chain.w, site / chain.w};
        std::vector<double> probs = site_conditional(state, chain, z);
        double u = to_unit_double(lane_rng(chain, 1, sweep_index, std::uint64_t(k)));
        double acc = 0;
        int pick = int(probs.size()) - 1;
        for (std::size_t c = 0; c < probs.size(); ++c) {
            acc += probs[c];
            if (u < acc) {
                pick = int(c);
                break;
            }
        }
        state.set(z.x, z.y, pick);
    }
    if (chain.check_every > 0 && sweep_index % std::uint64_t(chain.check_every) == 0)
        if (!state_admissible(state, chain))
            throw std::runtime_error("sweep broke local admissibility");
}

// ---- block sampler ----

BlockSampler::BlockSampler(ChainSpec chain, int fill_symbol) : chain_(std::move(chain)) {
    int r = reach(chain_.spec.window());
    if (chain_.kind == LatticeKind::torus && (chain_.w < 3 + 2 * r || chain_.h < 3 + 2 * r))
        throw std::invalid_argument("torus too small for 3x3 block updates");
    state_ = init_state(chain_, fill_symbol);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) block_off_.push_back({x, y});
    // window centers whose window touches the block, then the referenced ring
    std::vector<Site> centers;
    for (Site b : block_off_)
        for (Site o : chain_.spec.window().offsets) {
            Site c = b - o;
            bool dup = false;
            for (Site d : centers) dup = dup || d == c;
            if (!dup) centers.push_back(c);
        }
    win_centers_ = centers;
    std::vector<Site> ring;
    for (Site c : centers)
        for (Site o : chain_.spec.window().offsets) {
            Site s = c + o;
            if (s.x >= 0 && s.x < 3 && s.y >= 0 && s.y < 3) continue;
            bool dup = false;
            for (Site d : ring) dup = dup || d == s;
            if (!dup) ring.push_back(s);
        }
    std::sort(ring.begin(), ring.end(), canonical_less);
    ring_off_ = ring;
}

std::size_t BlockSampler::updates_per_sweep() const {
    return std::size_t(std::max(1, (chain_.w * chain_.h + 8) / 9));
}

const BlockSampler::Dist& BlockSampler::dist_for(Site corner, const std::vector<int>& ring_key) {
    std::string key(ring_key.size(), '\0');
    for (std::size_t i = 0; i < ring_key.size(); ++i) key[i] = char(ring_key[i]);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    // enumerate admissible block fillings given the ring
    Dist d;
    int nsym = int(chain_.spec.alphabet().size());
    const Window& win = chain_.spec.window();
    std::vector<int> fill(9, -1);
    auto cell_at = [&](Site s) -> int {  // relative coordinates, -1 if unassigned
        if (s.x >= 0 && s.x < 3 && s.y >= 0 && s.y < 3) return fill[std::size_t(s.y * 3 + s.x)];
        for (std::size_t i = 0; i < ring_off_.size(); ++i)
            if (ring_off_[i] == s) return ring_key[i];
        return -1;
    };
    double raw_sum = 0;
    std::vector<double> raw;
    std::vector<int> syms(win.offsets.size());
    std::uint64_t nodes = 0, budget = default_search_budget();
    constexpr Site nbr[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    std::function<void(int)> dfs = [&](int slot) {
        if (++nodes > budget) throw SearchBudgetExceeded(nodes);
        if (slot == 9) {
            for (Site c : win_centers_) {
                for (std::size_t i = 0; i < win.offsets.size(); ++i) {
                    int v = cell_at(c + win.offsets[i]);
                    if (v < 0) return;  // ring cell outside key: cannot happen
                    syms[i] = v;
                }
                if (!chain_.spec.window_allowed(syms.data())) return;
            }
            double e = 0;
            if (chain_.phi)
                for (int v : fill) e += chain_.phi->energy_of(v);
            double wgt = std::exp(-chain_.beta * e);
            d.fill.push_back(fill);
            raw.push_back(wgt);
            raw_sum += wgt;
            return;
        }
        Site z = block_off_[std::size_t(slot)];
        for (int cand = 0; cand < nsym; ++cand) {
            bool ok = true;
            for (Site e : nbr) {
                int v = cell_at(z + e);
                if (v >= 0 && !chain_.spec.pair_plausible(cand, v, e)) ok = false;
            }
            if (!ok) continue;
            fill[std::size_t(slot)] = cand;
            dfs(slot + 1);
            fill[std::size_t(slot)] = -1;
        }
    };
    dfs(0);
    (void)corner;
    if (d.fill.empty()) throw std::runtime_error("empty block candidate set");
    double acc = 0;
    for (double wgt : raw) {
        acc += wgt / raw_sum;
        d.cum.push_back(acc);
    }
    d.cum.back() = 1.0;
    if (memo_.size() < 100000) return memo_.emplace(std::move(key), std::move(d)).first->second;
    static thread_local Dist scratch;
    scratch = std::move(d);
    return scratch;
}

std::pair<std::vector<std::vector<int>>, std::vector<double>> BlockSampler::block_conditional(
    Site corner) {
    std::vector<int> ring_key;
    for (Site o : ring_off_) ring_key.push_back(state_.get(corner.x + o.x, corner.y + o.y));
    const Dist& d = dist_for(corner, ring_key);
    std::vector<double> probs;
    double prev = 0;
    for (double c : d.cum) {
        probs.push_back(c - prev);
        prev = c;
    }
    return {d.fill, probs};
}

void BlockSampler::sweep(std::uint64_t sweep_index) {
    std::size_t n = updates_per_sweep();
    int bw = state_.torus ? chain_.w : chain_.w - 2;
    int bh = state_.torus ? chain_.h : chain_.h - 2;
    for (std::size_t k = 0; k < n; ++k) {
        std::uint64_t r = lane_rng(chain_, 2, sweep_index, k);
        Site corner{int(r % std::uint64_t(bw)), int((r >> 32) % std::uint64_t(bh))};
        std::vector<int> ring_key;
        for (Site o : ring_off_) ring_key.push_back(state_.get(corner.x + o.x, corner.y + o.y));
        const Dist& d = dist_for(corner, ring_key);
        double u = to_unit_double(lane_rng(chain_, 3, sweep_index, k));
        std::size_t pick =
            std::size_t(std::lower_bound(d.cum.begin(), d.cum.end(), u) - d.cum.begin());
        if (pick >= d.fill.size()) pick = d.fill.size() - 1;
        for (int i = 0; i < 9; ++i) {
            Site o = block_off_[std::size_t(i)];
            state_.set(corner.x + o.x, corner.y + o.y, d.fill[pick][std::size_t(i)]);
        }
    }
    if (chain_.check_every > 0 && sweep_index % std::uint64_t(chain_.check_every) == 0)
        if (!state_admissible(state_, chain_))
            throw std::runtime_error("block sweep broke local admissibility");
}

// ---- Potts spins ----

void PottsSpinChain::init() {
    int fill = pin_color >= 0 ? pin_color : 0;
    spins.assign(std::size_t((w + 2) * (h + 2)), fill);
}

int PottsSpinChain::spin(int x, int y) const {
    if (torus) {
        x = (x % w + w) % w;
        y = (y % h + h) % h;
    }
    return spins[std::size_t((y + 1) * (w + 2) + (x + 1))];
}

void PottsSpinChain::set_spin(int x, int y, int c) {
    if (torus) {
        x = (x % w + w) % w;
        y = (y % h + h) % h;
    }
    spins[std::size_t((y + 1) * (w + 2) + (x + 1))] = c;
}

std::vector<double> PottsSpinChain::site_conditional(int x, int y) const {
    std::vector<double> p((std::size_t)q);
    double total = 0;
    for (int c = 0; c < q; ++c) {
        int dis = 0;
        constexpr int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int nx = x + dx[k], ny = y + dy[k];
            if (!torus && (nx < -1 || nx > w || ny < -1 || ny > h)) continue;
            if (!torus && pin_color < 0 && (nx < 0 || nx >= w || ny < 0 || ny >= h))
                continue;  // free boundary
            dis += spin(nx, ny) != c;
        }
        p[std::size_t(c)] = std::exp(-beta * dis);
        total += p[std::size_t(c)];
    }
    for (double& v : p) v /= total;
    return p;
}

void PottsSpinChain::sweep(std::uint64_t sweep_index) {
    int n = w * h;
    std::vector<int> perm((std::size_t)n);
    for (int i = 0; i < n; ++i) perm[std::size_t(i)] = i;
    for (int i = n - 1; i > 0; --i) {
        std::uint64_t r = counter_rng(seed, chain_id * 8 + 4, sweep_index, std::uint64_t(i));
        std::swap(perm[std::size_t(i)], perm[std::size_t(r % std::uint64_t(i + 1))]);
    }
    for (int k = 0; k < n; ++k) {
        int site = perm[std::size_t(k)];
        int x = site % w, y = site / w;
        std::vector<double> p = site_conditional(x, y);
        double u =
            to_unit_double(counter_rng(seed, chain_id * 8 + 5, sweep_index, std::uint64_t(k)));
        double acc = 0;
        int pick = q - 1;
        for (int c = 0; c < q; ++c) {
            acc += p[std::size_t(c)];
            if (u < acc) {
                pick = c;
                break;
            }
        }
        set_spin(x, y, pick);
    }
}

// ---- order parameters ----

OrderParams order_parameter_vertex(const GridState& state) {
    OrderParams op;
    int n = state.w * state.h;
    auto largest = [&](int target) {
        std::vector<char> seen(std::size_t(n), 0);
        int best = 0;
        for (int y0 = 0; y0 < state.h; ++y0)
            for (int x0 = 0; x0 < state.w; ++x0) {
                if (seen[std::size_t(y0 * state.w + x0)] || state.get(x0, y0) != target) continue;
                int size = 0;
                std::vector<Site> stack{{x0, y0}};
                seen[std::size_t(y0 * state.w + x0)] = 1;
                while (!stack.empty()) {
                    Site s = stack.back();
                    stack.pop_back();
                    ++size;
                    constexpr Site nbr[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                    for (Site e : nbr) {
                        Site t = s + e;
                        if (t.x < 0 || t.x >= state.w || t.y < 0 || t.y >= state.h) continue;
                        int i = t.y * state.w + t.x;
                        if (!seen[std::size_t(i)] && state.get(t.x, t.y) == target) {
                            seen[std::size_t(i)] = 1;
                            stack.push_back(t);
                        }
                    }
                }
                best = std::max(best, size);
            }
        return double(best) / n;
    };
    for (int y = 0; y < state.h; ++y)
        for (int x = 0; x < state.w; ++x) {
            int s = state.get(x, y);
            if (s == vertex::O)
                op.frac_dot_o += 1;
            else if (s == vertex::X)
                op.frac_dot_x += 1;
            else
                op.frac_arrow += 1;
        }
    op.frac_dot_o /= n;
    op.frac_dot_x /= n;
    op.frac_arrow /= n;
    op.largest_o = largest(vertex::O);
    op.largest_x = largest(vertex::X);
    return op;
}

OrderParams order_parameter_colors(const std::vector<int>& colors, int q) {
    OrderParams op;
    op.color_frac.assign(std::size_t(q), 0.0);
    for (int c : colors) op.color_frac[std::size_t(c)] += 1;
    for (double& f : op.color_frac) {
        f /= double(colors.size());
        op.max_color_frac = std::max(op.max_color_frac, f);
    }
    return op;
}

// ---- phase scans ----

namespace {

struct ScanTask {
    double param = 0;
    int param_index = 0, pin = 0, replicate = 0;
};

struct ScanOut {
    std::vector<PhaseScanRow> rows;
    double mean = 0;
    bool failed = false;
};

template <typename RunFn>
PhaseScanResult run_scan(const std::vector<double>& params, int pins, int replicates, int threads,
                         const RunFn& run_one) {
    std::vector<ScanTask> tasks;
    for (int pi = 0; pi < int(params.size()); ++pi)
        for (int pin = 0; pin < pins; ++pin)
            for (int r = 0; r < replicates; ++r)
                tasks.push_back({params[std::size_t(pi)], pi, pin, r});
    std::vector<ScanOut> outs(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                outs[i] = run_one(tasks[i]);
            } catch (const std::exception&) {
                outs[i].failed = true;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    PhaseScanResult res;
    for (std::size_t i = 0; i < tasks.size(); ++i)
        for (const auto& row : outs[i].rows) res.rows.push_back(row);
    for (int pi = 0; pi < int(params.size()); ++pi) {
        PhaseScanCell cell;
        cell.param = params[std::size_t(pi)];
        double m[2] = {0, 0}, m2[2] = {0, 0};
        int cnt[2] = {0, 0};
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (tasks[i].param_index != pi) continue;
            if (outs[i].failed) {
                ++cell.failures;
                continue;
            }
            int p = tasks[i].pin;
            m[p] += outs[i].mean;
            m2[p] += outs[i].mean * outs[i].mean;
            ++cnt[p];
        }
        double se2 = 0;
        for (int p = 0; p < 2; ++p) {
            if (cnt[p] == 0) continue;
            m[p] /= cnt[p];
            double var = std::max(0.0, m2[p] / cnt[p] - m[p] * m[p]);
            if (cnt[p] > 1) se2 += var / (cnt[p] - 1);
        }
        cell.mean_pin0 = m[0];
        cell.mean_pin1 = m[1];
        cell.gap = m[0] - m[1];
        cell.gap_err = std::sqrt(se2);
        res.cells.push_back(cell);
    }
    return res;
}

}  // namespace

PhaseScanResult phase_scan_vertex(const std::vector<int>& Ns, int w, int h, int sweeps, int thin,
                                  int replicates, std::uint64_t seed, int threads) {
    VertexModel vm = vertex_spec();
    std::vector<double> params(Ns.begin(), Ns.end());
    auto run_one = [&](const ScanTask& t) {
        ScanOut out;
        int N = int(t.param);
        int pin_sym = t.pin == 0 ? vertex::O : vertex::X;
        ChainSpec cs;
        cs.spec = vm.spec;
        cs.phi = &vm.phi;
        cs.beta = std::log(double(N)) / vm.phi.eps0;
        cs.kind = LatticeKind::pinned;
        cs.w = w;
        cs.h = h;
        cs.boundary = constant_ring(w, h, 2, pin_sym);
        cs.seed = seed;
        cs.chain_id = (std::uint64_t(t.param_index) << 20) | (std::uint64_t(t.pin) << 10) |
                      std::uint64_t(t.replicate);
        BlockSampler sampler(cs, pin_sym);
        int burn = sweeps / 2, kept = 0;
        double acc = 0;
        Site origin{w / 2, h / 2};
        for (int s = 1; s <= sweeps; ++s) {
            sampler.sweep(std::uint64_t(s));
            if (s <= burn || s % thin != 0) continue;
            double val = sampler.state().get(origin.x, origin.y) == vertex::O ? 1.0 : 0.0;
            out.rows.push_back({t.param, t.pin == 0 ? "dot" : "cross", t.replicate, s,
                                "origin_is_dot_o", val});
            acc += val;
            ++kept;
        }
        out.mean = kept ? acc / kept : 0;
        return out;
    };
    PhaseScanResult res = run_scan(params, 2, replicates, threads, run_one);
    res.threshold_level = std::sqrt(2.0) + 1;
    res.threshold_convention = std::exp(std::log(1 + std::sqrt(2.0)) * vm.phi.eps0);
    return res;
}

PhaseScanResult phase_scan_potts(int q, const std::vector<int>& Ns, int w, int h, int sweeps,
                                 int thin, int replicates, std::uint64_t seed, int threads) {
    double eps0 = 0.5;  // one-letter energy of the cross coding: half the disagreement count
    std::vector<double> params(Ns.begin(), Ns.end());
    auto run_one = [&](const ScanTask& t) {
        ScanOut out;
        int N = int(t.param);
        PottsSpinChain ch;
        ch.q = q;
        ch.beta = std::log(double(N)) / eps0;
        ch.w = w;
        ch.h = h;
        ch.torus = false;
        ch.pin_color = t.pin;
        ch.seed = seed;
        ch.chain_id = (std::uint64_t(t.param_index) << 20) | (std::uint64_t(t.pin) << 10) |
                      std::uint64_t(t.replicate);
        ch.init();
        int burn = sweeps / 2, kept = 0;
        double acc = 0;
        for (int s = 1; s <= sweeps; ++s) {
            ch.sweep(std::uint64_t(s));
            if (s <= burn || s % thin != 0) continue;
            double val = ch.spin(w / 2, h / 2) == 0 ? 1.0 : 0.0;
            out.rows.push_back({t.param, "color:" + std::to_string(t.pin), t.replicate, s,
                                "origin_is_color0", val});
            acc += val;
            ++kept;
        }
        out.mean = kept ? acc / kept : 0;
        return out;
    };
    PhaseScanResult res = run_scan(params, 2, replicates, threads, run_one);
    res.threshold_level = std::sqrt(double(q)) + 1;
    res.threshold_convention = std::exp(beta_critical_potts(q) * eps0);
    return res;
}

}  // namespace sftlab
