#pragma once
#include <cstdint>
#include <vector>

#include "sftlab/sft.hpp"

namespace sftlab {

enum class Wrap { cylinder, free };

// Strip transfer matrix over two-column states. Requires every window x-offset
// in {-1, 0, 1}; a state is a horizontally compatible pair of vertically
// admissible columns, and a transition (A,B) -> (B,C) carries the full window
// checks centered in the middle column. Entry weight = product of site weights
// of the new column.
struct TransferMatrix {
    int width = 0;
    Wrap wrap = Wrap::cylinder;
    std::vector<std::vector<int>> columns;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> states;  // (left col, right col)
    std::vector<double> col_weight;     // per column: product of site weights
    std::vector<std::uint32_t> row_ptr; // CSR over states, successors
    std::vector<std::uint32_t> succ;
    std::vector<char> start_ok;         // windows fitting the first two columns pass

    std::size_t n_states() const { return states.size(); }
    // Perron eigenvalue by power iteration on the trimmed core, with
    // Collatz-Wielandt bounds; throws if not converged.
    double leading_eigenvalue(double tol = 1e-12, int max_iter = 100000,
                              double* cw_low = nullptr, double* cw_high = nullptr) const;
    // log of the weighted sum over admissible n-column strips (n >= 2)
    double strip_log_value(int ncols) const;
};

TransferMatrix strip_transfer_matrix(const SftSpec& spec, int width,
                                     const std::vector<double>* site_weight = nullptr,
                                     Wrap wrap = Wrap::cylinder,
                                     std::size_t state_budget = 6'000'000);

// Potts cross-letter strip eigenvalue computed on the conjugate spin
// presentation: states are adjacent spin-column pairs, the transition weight is
// the product of letter weights read off the middle spin column. Equals the
// letter transfer matrix's leading eigenvalue, at any width the spin state
// space allows.  letter_weight is indexed by the letter code
// sum_i spin_i * q^i over cross offsets in (o, e1, e2, -e1, -e2) order.
double potts_letter_strip_log_lambda(int q, int width, const std::vector<double>& letter_weight,
                                     Wrap wrap = Wrap::cylinder);

}  // namespace sftlab
