#include "mdisp/morder.hpp"

namespace mdisp::morder {

double dual_norm_sup(const MOrderWeights& w, const VectorXcd& h, Side side,
                     int probes, std::uint64_t seed) {
  if (h.size() != w.dim())
    throw std::invalid_argument("dual_norm_sup: dimension mismatch");
  const Side other =
      side == Side::minus_plus ? Side::plus_minus : Side::minus_plus;
  auto ratio = [&](const VectorXcd& g) -> double {
    double denom = norm(w, g, other);
    if (denom == 0.0) return 0.0;
    return std::abs(pairing(w, g, h)) / denom;
  };
  // explicit optimizer: g with diag-scaled components parallel to h's
  VectorXcd opt;
  if (side == Side::minus_plus)
    opt = (w.s.array() * w.s.array()).matrix().asDiagonal() * h;
  else
    opt = (w.s.array() * w.s.array()).cwiseInverse().matrix().asDiagonal() * h;
  double best = ratio(opt);
  Rng rng(seed);
  for (int i = 0; i < probes; ++i) {
    VectorXcd g = randn_complex(w.dim(), 1, rng);
    best = std::max(best, ratio(g));
  }
  return best;
}

}  // namespace mdisp::morder
