#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "sftlab/gibbs.hpp"
#include "sftlab/sft.hpp"

namespace sftlab {

// ---- 14-symbol vertex model ----
// Directions 0=U, 1=R, 2=D, 3=L. Arrow symbol ids 0..11 encode
// (incoming motion, outgoing motion) with the turn in {straight, left, right};
// id = 3*d_in + turn. Symbol 12 is X (clockwise plane-perpendicular), 13 is O
// (counterclockwise).
namespace vertex {
constexpr int X = 12, O = 13;
constexpr int n_symbols = 14;
inline Site dvec(int d) {
    constexpr std::array<Site, 4> v{{{0, 1}, {1, 0}, {0, -1}, {-1, 0}}};
    return v[std::size_t(d)];
}
inline int rot_cw(int d) { return (d + 1) & 3; }
inline int rot_ccw(int d) { return (d + 3) & 3; }
inline int opp(int d) { return (d + 2) & 3; }
inline bool is_arrow(int sym) { return sym < 12; }
inline int d_in(int arrow) { return arrow / 3; }
inline int turn(int arrow) { return arrow % 3; }  // 0 straight, 1 left, 2 right
inline int d_out(int arrow) {
    int t = turn(arrow), di = d_in(arrow);
    return t == 0 ? di : (t == 1 ? rot_ccw(di) : rot_cw(di));
}
inline int arrow_id(int din, int dout) {
    if (dout == din) return 3 * din;
    if (dout == rot_ccw(din)) return 3 * din + 1;
    if (dout == rot_cw(din)) return 3 * din + 2;
    return -1;  // reversal: not a symbol
}
// X <-> O, arrows reversed
inline int tau(int sym) {
    if (sym == X) return O;
    if (sym == O) return X;
    return arrow_id(opp(d_out(sym)), opp(d_in(sym)));
}
// symbol pair admissibility: a at z, b at z + dvec(e_dir)
bool pair_ok(int a, int b, int e_dir);
// full cross membership, neighbors in (E, N, W, S) order around center c
bool cross_ok(int c, int e, int n, int w, int s);
}  // namespace vertex

struct VertexModel {
    SftSpec spec;
    Interaction phi;  // 1 on arrows, 0 on X/O
};

VertexModel vertex_spec();

struct VertexCensus {
    std::size_t total = 0, center_dot = 0, center_cross = 0, center_straight = 0,
                center_corner = 0;
};
VertexCensus vertex_census(const SftSpec& spec);

// tone-lifted vertex model: 12 arrows + {X,O} x Z_N, with the extra rule that
// no toned X/O may be surrounded by four straight arrows
SftSpec vertex_lift_spec(int N);

struct DihedralAction {
    int element = 0;  // 0..3 rotations by 90deg ccw, 4..7 those after x-mirror
    Site apply(Site s) const;
    int apply_symbol(int sym) const;  // vertex alphabet permutation
};
std::vector<DihedralAction> vertex_dihedral_actions();

Alphabet gray3_alphabet();           // X, a, O
Patch gray3(const Patch& x);
Alphabet gray7_alphabet(int N = 3);  // -N .. N
Patch gray7(const Patch& x, int N = 3);

// ---- Potts cross coding ----
struct PottsModel {
    int q = 2;
    BlockRecode recode;  // letters are cross-shaped spin patches
    SftSpec spec;        // = recode.cross_spec
    Interaction phi;     // eps0 = 1/2, levels = #disagreeing neighbors
    SftSpec spin_spec;   // the underlying full shift on q spins
    // letter code in (o,e1,e2,-e1,-e2) order with radix q (transfer-matrix use)
    std::vector<double> letter_weight_beta(double beta) const;
    std::vector<double> letter_weight_tones(int N) const;
};

PottsModel potts_cross_spec(int q);

// ---- Y' -> vertex factor chain ----
SftSpec yprime_spec();
// dilation by the 3x3 max
Patch psi_dilate(const Patch& y);
// classification of 3x3 neighborhoods into vertex symbols
Patch q_classify(const Patch& y);
// psi then q: (k+4)x(k+4) binary window -> k x k vertex patch
Patch factor_chain(const Patch& y);

// ---- appendix edge-coded Potts ----
SftSpec edge_potts_spec(int q, int N);
int edge_potts_color(const SftSpec& spec, int sym);

}  // namespace sftlab
