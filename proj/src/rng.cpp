#include "hiermc/rng.hpp"

namespace hiermc {

namespace {

// Marsaglia-Tsang ziggurat tables for the standard normal, 128 layers.
struct ZigguratTables {
  std::uint64_t kn[128];
  double wn[128];
  double fn[128];

  ZigguratTables() {
    const double m = 9007199254740992.0;  // 2^53
    const double vn = 9.91256303526217e-3;
    double dn = 3.442619855899;
    double tn = dn;
    double q = vn / std::exp(-0.5 * dn * dn);
    kn[0] = static_cast<std::uint64_t>((dn / q) * m);
    kn[1] = 0;
    wn[0] = q / m;
    wn[127] = dn / m;
    fn[0] = 1.0;
    fn[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
      kn[i + 1] = static_cast<std::uint64_t>((dn / tn) * m);
      tn = dn;
      fn[i] = std::exp(-0.5 * dn * dn);
      wn[i] = dn / m;
    }
  }
};

const ZigguratTables& tables() {
  static const ZigguratTables t;
  return t;
}

}  // namespace

double RandomStream::normal() {
  const auto& t = tables();
  for (;;) {
    const std::uint64_t bits = next_u64();
    const int i = static_cast<int>(bits & 127u);
    const bool neg = (bits >> 7) & 1u;
    // 53-bit magnitude so the wn scale factors stay exact.
    const std::uint64_t j = bits >> 11;
    if (j < t.kn[i]) {
      const double x = static_cast<double>(j) * t.wn[i];
      return neg ? -x : x;
    }
    if (i == 0) {
      // Tail beyond r = 3.4426...
      const double r = 3.442619855899;
      double x, y;
      do {
        x = -std::log(uniform()) / r;
        y = -std::log(uniform());
      } while (y + y < x * x);
      return neg ? -(r + x) : (r + x);
    }
    const double x = static_cast<double>(j) * t.wn[i];
    if (t.fn[i] + uniform() * (t.fn[i - 1] - t.fn[i]) < std::exp(-0.5 * x * x)) {
      return neg ? -x : x;
    }
  }
}

}  // namespace hiermc
