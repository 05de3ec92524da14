#include "sftlab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace sftlab {

namespace {

// vertically admissible columns: pairwise plausibility for in-column offsets
// plus full checks of windows whose x-offsets are all zero
std::vector<std::vector<int>> enumerate_columns(const SftSpec& spec, int width, Wrap wrap,
                                                std::size_t budget) {
    const int nsym = int(spec.alphabet().size());
    const auto& pdiffs = spec.pair_offsets();
    const auto& offs = spec.window().offsets;
    std::vector<std::vector<int>> out;
    std::vector<int> col(std::size_t(width), -1);

    auto row_ok = [&](int y) {
        for (Site d : pdiffs) {
            if (d.x != 0 || d.y == 0) continue;
            int y2 = y + d.y;
            if (wrap == Wrap::cylinder)
                y2 = ((y2 % width) + width) % width;
            else if (y2 < 0 || y2 >= width)
                continue;
            if (col[std::size_t(y2)] < 0) continue;
            if (!spec.pair_plausible(col[std::size_t(y)], col[std::size_t(y2)], d)) return false;
        }
        return true;
    };
    auto column_ok = [&] {
        std::vector<int> buf(offs.size());
        for (int y = 0; y < width; ++y) {
            bool contained = true;
            for (std::size_t i = 0; i < offs.size(); ++i) {
                if (offs[i].x != 0) {
                    contained = false;
                    break;
                }
                int yy = y + offs[i].y;
                if (wrap == Wrap::cylinder)
                    yy = ((yy % width) + width) % width;
                else if (yy < 0 || yy >= width) {
                    contained = false;
                    break;
                }
                buf[i] = col[std::size_t(yy)];
            }
            if (contained && !spec.window_allowed(buf.data())) return false;
        }
        return true;
    };

    int y = 0;
    std::vector<int> cursor(std::size_t(width), 0);
    while (true) {
        if (cursor[std::size_t(y)] >= nsym) {
            col[std::size_t(y)] = -1;
            if (y == 0) break;
            --y;
            ++cursor[std::size_t(y)];
            continue;
        }
        col[std::size_t(y)] = cursor[std::size_t(y)];
        if (!row_ok(y)) {
            ++cursor[std::size_t(y)];
            continue;
        }
        if (y + 1 == width) {
            if (column_ok()) {
                out.push_back(col);
                if (out.size() > budget) throw StateBudgetExceeded("too many admissible columns");
            }
            ++cursor[std::size_t(y)];
            continue;
        }
        ++y;
        cursor[std::size_t(y)] = 0;
    }
    return out;
}

}  // namespace

TransferMatrix strip_transfer_matrix(const SftSpec& spec, int width,
                                     const std::vector<double>* site_weight, Wrap wrap,
                                     std::size_t state_budget) {
    for (Site off : spec.window().offsets)
        if (off.x < -1 || off.x > 1)
            throw std::invalid_argument("strip transfer matrix needs window x-offsets in [-1,1]");

    TransferMatrix tm;
    tm.width = width;
    tm.wrap = wrap;
    tm.columns = enumerate_columns(spec, width, wrap, state_budget);
    const std::size_t ncols = tm.columns.size();
    tm.col_weight.assign(ncols, 1.0);
    if (site_weight)
        for (std::size_t c = 0; c < ncols; ++c)
            for (int sym : tm.columns[c]) tm.col_weight[c] *= (*site_weight)[std::size_t(sym)];

    const auto& pdiffs = spec.pair_offsets();
    auto pair_cols_ok = [&](const std::vector<int>& A, const std::vector<int>& B) {
        for (Site d : pdiffs) {
            if (d.x != 1) continue;
            for (int y = 0; y < width; ++y) {
                int y2 = y + d.y;
                if (wrap == Wrap::cylinder)
                    y2 = ((y2 % width) + width) % width;
                else if (y2 < 0 || y2 >= width)
                    continue;
                if (!spec.pair_plausible(A[std::size_t(y)], B[std::size_t(y2)], d)) return false;
            }
        }
        return true;
    };

    std::unordered_map<std::uint64_t, std::uint32_t> state_of;
    std::vector<std::vector<std::uint32_t>> right_of(ncols);
    for (std::uint32_t a = 0; a < ncols; ++a)
        for (std::uint32_t b = 0; b < ncols; ++b) {
            if (!pair_cols_ok(tm.columns[a], tm.columns[b])) continue;
            state_of.emplace((std::uint64_t(a) << 32) | b, std::uint32_t(tm.states.size()));
            tm.states.push_back({a, b});
            right_of[a].push_back(b);
            if (tm.states.size() > state_budget) throw StateBudgetExceeded("transfer state budget");
        }

    const auto& offs = spec.window().offsets;
    // window check with columns cols[0..2] = A,B,C and center in the middle;
    // which_cols restricts the x-offsets allowed (others mean "not contained")
    auto windows_ok = [&](const std::vector<int>* cols[3], int center_col, int min_dx, int max_dx) {
        std::vector<int> buf(offs.size());
        for (int y = 0; y < width; ++y) {
            bool contained = true;
            for (std::size_t i = 0; i < offs.size() && contained; ++i) {
                int dx = offs[i].x;
                if (dx < min_dx || dx > max_dx) {
                    contained = false;
                    break;
                }
                int yy = y + offs[i].y;
                if (wrap == Wrap::cylinder)
                    yy = ((yy % width) + width) % width;
                else if (yy < 0 || yy >= width) {
                    contained = false;
                    break;
                }
                buf[i] = (*cols[std::size_t(center_col + dx)])[std::size_t(yy)];
            }
            if (contained && !spec.window_allowed(buf.data())) return false;
        }
        return true;
    };

    tm.row_ptr.assign(tm.states.size() + 1, 0);
    tm.start_ok.assign(tm.states.size(), 0);
    for (std::size_t s = 0; s < tm.states.size(); ++s) {
        auto [a, b] = tm.states[s];
        const std::vector<int>* cols2[3] = {&tm.columns[a], &tm.columns[b], nullptr};
        tm.start_ok[s] = windows_ok(cols2, 0, 0, 1) ? 1 : 0;
        for (std::uint32_t c : right_of[b]) {
            const std::vector<int>* cols[3] = {&tm.columns[a], &tm.columns[b], &tm.columns[c]};
            if (windows_ok(cols, 1, -1, 1)) ++tm.row_ptr[s + 1];
        }
    }
    for (std::size_t s = 0; s < tm.states.size(); ++s) tm.row_ptr[s + 1] += tm.row_ptr[s];
    tm.succ.assign(tm.row_ptr.back(), 0);
    std::vector<std::uint32_t> fill(tm.states.size(), 0);
    for (std::size_t s = 0; s < tm.states.size(); ++s) {
        auto [a, b] = tm.states[s];
        for (std::uint32_t c : right_of[b]) {
            const std::vector<int>* cols[3] = {&tm.columns[a], &tm.columns[b], &tm.columns[c]};
            if (windows_ok(cols, 1, -1, 1))
                tm.succ[tm.row_ptr[s] + fill[s]++] = state_of.at((std::uint64_t(b) << 32) | c);
        }
    }
    return tm;
}

double TransferMatrix::leading_eigenvalue(double tol, int max_iter, double* cw_low,
                                          double* cw_high) const {
    const std::size_t n = states.size();
    std::vector<char> alive(n, 1);
    std::vector<std::uint32_t> outdeg(n, 0), indeg(n, 0);
    // trim states with no successors or predecessors until stable
    bool changed = true;
    while (changed) {
        changed = false;
        std::fill(outdeg.begin(), outdeg.end(), 0);
        std::fill(indeg.begin(), indeg.end(), 0);
        for (std::size_t s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            for (std::uint32_t k = row_ptr[s]; k < row_ptr[s + 1]; ++k)
                if (alive[succ[k]]) {
                    ++outdeg[s];
                    ++indeg[succ[k]];
                }
        }
        for (std::size_t s = 0; s < n; ++s)
            if (alive[s] && (outdeg[s] == 0 || indeg[s] == 0)) {
                alive[s] = 0;
                changed = true;
            }
    }
    if (std::count(alive.begin(), alive.end(), char(1)) == 0) return 0.0;

    std::vector<double> v(n, 0.0), u(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) v[s] = alive[s] ? 1.0 : 0.0;
    double lambda = 0, prev = -1;
    double lo = 0, hi = 0;
    for (int it = 0; it < max_iter; ++it) {
        std::fill(u.begin(), u.end(), 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            if (!alive[s] || v[s] == 0) continue;
            double vs = v[s];
            for (std::uint32_t k = row_ptr[s]; k < row_ptr[s + 1]; ++k) {
                std::uint32_t t = succ[k];
                if (alive[t]) u[t] += vs * col_weight[states[t].second];
            }
        }
        lo = 1e300;
        hi = 0;
        double mx = 0;
        for (std::size_t s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            if (v[s] > 0) {
                double r = u[s] / v[s];
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
            mx = std::max(mx, u[s]);
        }
        lambda = hi;
        if (mx == 0) return 0.0;
        for (std::size_t s = 0; s < n; ++s) v[s] = u[s] / mx;
        bool cw_tight = hi - lo <= tol * hi;
        bool inc_tight = prev >= 0 && std::abs(lambda - prev) <= 0.1 * tol * lambda;
        if (it > 4 && (cw_tight || inc_tight)) break;
        prev = lambda;
    }
    if (cw_low) *cw_low = lo;
    if (cw_high) *cw_high = hi;
    return 0.5 * (lo + hi) <= 0 ? lambda : 0.5 * (lo + hi);
}

double TransferMatrix::strip_log_value(int ncols) const {
    const std::size_t n = states.size();
    std::vector<double> v(n, 0.0), u(n, 0.0);
    for (std::size_t s = 0; s < n; ++s)
        if (start_ok[s]) v[s] = col_weight[states[s].first] * col_weight[states[s].second];
    double log_scale = 0;
    for (int step = 0; step < ncols - 2; ++step) {
        std::fill(u.begin(), u.end(), 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            if (v[s] == 0) continue;
            for (std::uint32_t k = row_ptr[s]; k < row_ptr[s + 1]; ++k) {
                std::uint32_t t = succ[k];
                u[t] += v[s] * col_weight[states[t].second];
            }
        }
        double mx = 0;
        for (double x : u) mx = std::max(mx, x);
        if (mx == 0) return -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < n; ++s) v[s] = u[s] / mx;
        log_scale += std::log(mx);
    }
    double total = 0;
    for (double x : v) total += x;
    return log_scale + std::log(total);
}

double potts_letter_strip_log_lambda(int q, int width, const std::vector<double>& letter_weight,
                                     Wrap wrap) {
    if (wrap != Wrap::cylinder)
        throw std::invalid_argument("potts letter strip supports cylinder wrap only");
    std::size_t nstates = 1;
    for (int i = 0; i < width; ++i) {
        nstates *= std::size_t(q);
        if (nstates > (1u << 22)) throw StateBudgetExceeded("potts spin strip too wide");
    }
    auto spin = [&](std::size_t state, int y) {
        int yy = ((y % width) + width) % width;
        for (int i = 0; i < yy; ++i) state /= std::size_t(q);
        return int(state % std::size_t(q));
    };
    // letter code in (o, e1, e2, -e1, -e2) order, mixed radix q
    auto letter_code = [&](int c, int e, int nn, int w_, int s_) {
        return std::size_t(c) + std::size_t(q) * (std::size_t(e) +
               std::size_t(q) * (std::size_t(nn) + std::size_t(q) * (std::size_t(w_) +
               std::size_t(q) * std::size_t(s_))));
    };
    // dense power iteration over spin-column pairs, transition weight = product
    // of middle-column letter weights
    const std::size_t np = nstates * nstates;
    std::vector<double> v(np, 1.0), u(np, 0.0);
    // cache per (S1,S2,S3) is too big in general; cache per (S2): w(S1,S3) grids
    std::vector<std::vector<double>> mid(nstates);
    for (std::size_t s2 = 0; s2 < nstates; ++s2) {
        mid[s2].assign(np, 0.0);
        for (std::size_t s1 = 0; s1 < nstates; ++s1)
            for (std::size_t s3 = 0; s3 < nstates; ++s3) {
                double wgt = 1.0;
                for (int y = 0; y < width; ++y)
                    wgt *= letter_weight[letter_code(spin(s2, y), spin(s3, y), spin(s2, y + 1),
                                                    spin(s1, y), spin(s2, y - 1))];
                mid[s2][s1 * nstates + s3] = wgt;
            }
    }
    double lambda = 0, prev = -1;
    for (int it = 0; it < 200000; ++it) {
        std::fill(u.begin(), u.end(), 0.0);
        for (std::size_t s1 = 0; s1 < nstates; ++s1)
            for (std::size_t s2 = 0; s2 < nstates; ++s2) {
                double vs = v[s1 * nstates + s2];
                if (vs == 0) continue;
                const double* row = mid[s2].data() + s1 * nstates;
                double* urow = u.data() + s2 * nstates;
                for (std::size_t s3 = 0; s3 < nstates; ++s3) urow[s3] += vs * row[s3];
            }
        double lo = 1e300, hi = 0, mx = 0;
        for (std::size_t i = 0; i < np; ++i) {
            if (v[i] > 0 && u[i] > 0) {
                double r = u[i] / v[i];
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
            mx = std::max(mx, u[i]);
        }
        lambda = 0.5 * (lo + hi);
        for (std::size_t i = 0; i < np; ++i) v[i] = u[i] / mx;
        if (it > 4 && (hi - lo <= 1e-13 * hi ||
                       (prev > 0 && std::abs(lambda - prev) <= 1e-14 * lambda)))
            break;
        prev = lambda;
    }
    return std::log(lambda);
}

}  // namespace sftlab
