#include "locus/threshold.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace locus {

namespace {

constexpr int kLevels = 256;

// Renyi orders for the Sahoo combination.
constexpr double kRenyiLow = 0.5;
constexpr double kRenyiHigh = 2.0;
// Two component thresholds are "close" if within this many gray levels.
constexpr int kSahooProximity = 5;

struct Stats {
  std::array<double, kLevels> p{};      // normalized bin probabilities
  std::array<double, kLevels> cum_p{};  // prefix sums of p
  std::array<double, kLevels> cum_gp{};  // prefix sums of g*p
  int gmin = 0;
  int gmax = 0;

  double w0(int t) const { return cum_p[t]; }
  double w1(int t) const { return cum_p[kLevels - 1] - cum_p[t]; }
  double mu0(int t) const { return cum_gp[t] / cum_p[t]; }
  double mu1(int t) const { return (cum_gp[kLevels - 1] - cum_gp[t]) / w1(t); }
};

Stats make_stats(const Histogram& h) {
  if (h.populated_levels() < 2) throw DegenerateHistogram();
  Stats s;
  const double total = static_cast<double>(h.total);
  double cp = 0.0, cgp = 0.0;
  s.gmin = -1;
  for (int g = 0; g < kLevels; ++g) {
    s.p[g] = static_cast<double>(h.bins[g]) / total;
    cp += s.p[g];
    cgp += g * s.p[g];
    s.cum_p[g] = cp;
    s.cum_gp[g] = cgp;
    if (h.bins[g] > 0) {
      if (s.gmin < 0) s.gmin = g;
      s.gmax = g;
    }
  }
  return s;
}

// Smallest candidate t in [gmin, gmax-1] maximizing crit.
template <typename Crit>
int arg_best(const Stats& s, Crit crit, bool maximize = true) {
  int best_t = s.gmin;
  double best = maximize ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  for (int t = s.gmin; t < s.gmax; ++t) {
    const double v = crit(t);
    if (maximize ? (v > best) : (v < best)) {
      best = v;
      best_t = t;
    }
  }
  return best_t;
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Kapur-style Shannon class entropy sum at split t.
double shannon_split(const Stats& s, const std::array<double, kLevels>& cum_plogp, int t) {
  const double w0 = s.w0(t);
  const double w1 = s.w1(t);
  const double h0 = std::log(w0) - cum_plogp[t] / w0;
  const double h1 = std::log(w1) - (cum_plogp[kLevels - 1] - cum_plogp[t]) / w1;
  return h0 + h1;
}

std::array<double, kLevels> prefix_plogp(const Stats& s) {
  std::array<double, kLevels> a{};
  double acc = 0.0;
  for (int g = 0; g < kLevels; ++g) {
    acc += xlogx(s.p[g]);
    a[g] = acc;
  }
  return a;
}

int kapur_split(const Stats& s) {
  const auto cum_plogp = prefix_plogp(s);
  return arg_best(s, [&](int t) { return shannon_split(s, cum_plogp, t); });
}

// Renyi class entropy sum at order rho != 1.
int renyi_split(const Stats& s, double rho) {
  std::array<double, kLevels> cum_prho{};
  double acc = 0.0;
  for (int g = 0; g < kLevels; ++g) {
    acc += s.p[g] > 0.0 ? std::pow(s.p[g], rho) : 0.0;
    cum_prho[g] = acc;
  }
  const double inv = 1.0 / (1.0 - rho);
  return arg_best(s, [&](int t) {
    const double s0 = cum_prho[t];
    const double s1 = cum_prho[kLevels - 1] - cum_prho[t];
    const double h0 = inv * std::log(s0 / std::pow(s.w0(t), rho));
    const double h1 = inv * std::log(s1 / std::pow(s.w1(t), rho));
    return h0 + h1;
  });
}

}  // namespace

std::string method_name(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::Otsu: return "Otsu";
    case ThresholdMethod::Kapur: return "Kapur";
    case ThresholdMethod::HuangWang: return "Huang";
    case ThresholdMethod::Yen: return "Yen";
    case ThresholdMethod::Sahoo: return "Sahoo";
    case ThresholdMethod::LiTam: return "Li";
  }
  return "?";
}

ThresholdMethod parse_method(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "otsu") return ThresholdMethod::Otsu;
  if (s == "kapur") return ThresholdMethod::Kapur;
  if (s == "huang" || s == "huangwang") return ThresholdMethod::HuangWang;
  if (s == "yen") return ThresholdMethod::Yen;
  if (s == "sahoo") return ThresholdMethod::Sahoo;
  if (s == "li" || s == "litam") return ThresholdMethod::LiTam;
  throw ParseError("unknown thresholding method: " + name);
}

ThresholdResult otsu(const Histogram& h) {
  const Stats s = make_stats(h);
  const int t = arg_best(s, [&](int t) {
    const double d = s.mu0(t) - s.mu1(t);
    return s.w0(t) * s.w1(t) * d * d;
  });
  return {ThresholdMethod::Otsu, t};
}

ThresholdResult kapur(const Histogram& h) {
  const Stats s = make_stats(h);
  return {ThresholdMethod::Kapur, kapur_split(s)};
}

ThresholdResult huang_wang(const Histogram& h) {
  const Stats s = make_stats(h);
  const double range = static_cast<double>(s.gmax - s.gmin);
  const int t = arg_best(
      s,
      [&](int t) {
        const double m0 = s.mu0(t);
        const double m1 = s.mu1(t);
        double e = 0.0;
        for (int g = s.gmin; g <= s.gmax; ++g) {
          if (s.p[g] <= 0.0) continue;
          const double mu = g <= t ? m0 : m1;
          const double u = 1.0 / (1.0 + std::abs(g - mu) / range);
          e += s.p[g] * (-xlogx(u) - xlogx(1.0 - u));
        }
        return e;
      },
      /*maximize=*/false);
  return {ThresholdMethod::HuangWang, t};
}

ThresholdResult yen(const Histogram& h) {
  const Stats s = make_stats(h);
  std::array<double, kLevels> cum_p2{};
  double acc = 0.0;
  for (int g = 0; g < kLevels; ++g) {
    acc += s.p[g] * s.p[g];
    cum_p2[g] = acc;
  }
  const int t = arg_best(s, [&](int t) {
    const double g0 = cum_p2[t] / (s.w0(t) * s.w0(t));
    const double g1 = (cum_p2[kLevels - 1] - cum_p2[t]) / (s.w1(t) * s.w1(t));
    return -std::log(g0) - std::log(g1);
  });
  return {ThresholdMethod::Yen, t};
}

ThresholdResult sahoo(const Histogram& h) {
  const Stats s = make_stats(h);
  int t[3] = {renyi_split(s, kRenyiLow), kapur_split(s), renyi_split(s, kRenyiHigh)};
  std::sort(t, t + 3);

  int b1, b2, b3;
  const bool near12 = std::abs(t[0] - t[1]) <= kSahooProximity;
  const bool near23 = std::abs(t[1] - t[2]) <= kSahooProximity;
  if (near12 && near23) {
    b1 = 1; b2 = 2; b3 = 1;
  } else if (near12 && !near23) {
    b1 = 0; b2 = 1; b3 = 3;
  } else if (!near12 && near23) {
    b1 = 3; b2 = 1; b3 = 0;
  } else {
    b1 = 1; b2 = 2; b3 = 1;
  }

  const double omega = s.cum_p[t[2]] - s.cum_p[t[0]];
  const double combined = t[0] * (s.cum_p[t[0]] + 0.25 * omega * b1) +
                          0.25 * t[1] * omega * b2 +
                          t[2] * (1.0 - s.cum_p[t[2]] + 0.25 * omega * b3);
  const int result = std::clamp(static_cast<int>(std::lround(combined)), 0, kLevels - 1);
  return {ThresholdMethod::Sahoo, result};
}

double cross_entropy(const Histogram& h, int t) {
  double a0 = 0.0, n0 = 0.0, a1 = 0.0, n1 = 0.0;
  for (int g = 0; g < kLevels; ++g) {
    const double c = static_cast<double>(h.bins[g]);
    if (g <= t) {
      a0 += g * c;
      n0 += c;
    } else {
      a1 += g * c;
      n1 += c;
    }
  }
  double eta = 0.0;
  if (n0 > 0.0 && a0 > 0.0) eta -= a0 * std::log(a0 / n0);
  if (n1 > 0.0 && a1 > 0.0) eta -= a1 * std::log(a1 / n1);
  return eta;
}

ThresholdResult li_tam(const Histogram& h) {
  const Stats s = make_stats(h);
  const double eps = std::numeric_limits<double>::epsilon();
  const int lo = s.gmin;
  const int hi = s.gmax - 1;

  int t = std::clamp(static_cast<int>(s.cum_gp[kLevels - 1]), lo, hi);
  for (int iter = 0; iter < 64; ++iter) {
    const double m0 = s.mu0(t);
    const double m1 = s.mu1(t);
    const double denom = std::log(std::max(m0, eps)) - std::log(std::max(m1, eps));
    if (denom == 0.0) break;
    const int tn = std::clamp(static_cast<int>(std::lround((m0 - m1) / denom)), lo, hi);
    if (tn == t) break;
    t = tn;
  }

  // Descend to the nearest local optimum, walking left across plateaus so the
  // smallest gray level attaining the local optimum is returned.
  for (int step = 0; step < 2 * kLevels; ++step) {
    if (t - 1 >= lo && cross_entropy(h, t - 1) <= cross_entropy(h, t)) {
      --t;
    } else if (t + 1 <= hi && cross_entropy(h, t + 1) < cross_entropy(h, t)) {
      ++t;
    } else {
      break;
    }
  }
  return {ThresholdMethod::LiTam, t};
}

ThresholdResult apply_method(ThresholdMethod m, const Histogram& h) {
  switch (m) {
    case ThresholdMethod::Otsu: return otsu(h);
    case ThresholdMethod::Kapur: return kapur(h);
    case ThresholdMethod::HuangWang: return huang_wang(h);
    case ThresholdMethod::Yen: return yen(h);
    case ThresholdMethod::Sahoo: return sahoo(h);
    case ThresholdMethod::LiTam: return li_tam(h);
  }
  throw ParseError("invalid method tag");
}

EnsembleSpec::EnsembleSpec(std::vector<ThresholdMethod> methods) : methods_(std::move(methods)) {
  if (methods_.empty() || methods_.size() > kMethodCount)
    throw ParseError("ensemble must contain 1..6 methods");
  for (std::size_t i = 0; i < methods_.size(); ++i)
    for (std::size_t j = i + 1; j < methods_.size(); ++j)
      if (methods_[i] == methods_[j])
        throw ParseError("duplicate method in ensemble: " + method_name(methods_[i]));
}

EnsembleSpec EnsembleSpec::parse(const std::string& text) {
  std::vector<ThresholdMethod> methods;
  std::string token;
  for (char c : text + "-") {
    if (c == '-' || c == ',') {
      if (!token.empty()) methods.push_back(parse_method(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  return EnsembleSpec(std::move(methods));
}

std::string EnsembleSpec::name() const {
  std::string out;
  for (std::size_t i = 0; i < methods_.size(); ++i) {
    if (i) out += "-";
    out += method_name(methods_[i]);
  }
  return out;
}

std::vector<ThresholdResult> compute_ensemble(const Histogram& h, const EnsembleSpec& spec) {
  std::vector<ThresholdResult> out;
  out.reserve(spec.size());
  for (ThresholdMethod m : spec.methods()) out.push_back(apply_method(m, h));
  return out;
}

}  // namespace locus
