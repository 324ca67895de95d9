#pragma once

#include <vector>

namespace scse {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& v);

/// v / ||v||. Rejects zero-norm input.
Vec l2_normalize(const Vec& v);

/// Pullback of l2_normalize at v applied to `upstream`:
/// (upstream - (u . upstream) u) / ||v||  with  u = v / ||v||.
Vec l2_normalize_vjp(const Vec& v, const Vec& upstream);

/// a.b / (||a|| ||b||), clamped to [-1, 1]. Rejects zero-norm operands
/// and dimension mismatches.
double cosine_sim(const Vec& a, const Vec& b);

struct CosineSimGrad {
    Vec wrt_a;
    Vec wrt_b;
};
CosineSimGrad cosine_sim_grad(const Vec& a, const Vec& b);

/// softmax(scores / temperature), computed max-subtracted.
std::vector<double> softmax_temp(const std::vector<double>& scores, double temperature);

/// Average ranks in [1, n]; tied values share the mean rank of their block.
std::vector<double> rankdata(const std::vector<double>& xs);

}  // namespace scse
