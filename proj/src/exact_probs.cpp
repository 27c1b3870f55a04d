#include "brwlab/exact_probs.hpp"

#include <cmath>
#include <stdexcept>

#include "brwlab/errors.hpp"

namespace brwlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Integral of |cos t|^m over [0, pi].
double abs_cos_power_integral(std::uint64_t m) {
  double md = static_cast<double>(m);
  return std::sqrt(kPi) * std::exp(std::lgamma(0.5 * (md + 1.0)) - std::lgamma(0.5 * md + 1.0));
}

// log of (2 sqrt(pq))^m (p/q)^(s/2) (q/p)^(k/2).
double log_prefactor(const WalkParams& wp, std::uint64_t s, std::uint64_t m, std::uint64_t k) {
  double p = wp.p_down, q = wp.p_up;
  double lr = std::log(q / p);
  return static_cast<double>(m) * std::log(2.0 * std::sqrt(p * q)) -
         0.5 * static_cast<double>(s) * lr + 0.5 * static_cast<double>(k) * lr;
}

double main_term_at(const WalkParams& wp, std::uint64_t k) {
  double p = wp.p_down, q = wp.p_up, c = p - q;
  if (c == 0.0) return 0.0;
  // Parity-matched value of the two unit-eigenvalue projections, k >= 1.
  return (c / (p * q)) * std::exp(static_cast<double>(k) * std::log(q / p));
}

// Boundary-adapted eigenfunction g_x(t) = cos(x t) - c cos(t) sin(x t)/sin(t),
// with g_0 = 1 and the removable endpoint limits filled in.
double g_eigen(std::uint64_t x, double theta, double c) {
  if (x == 0) return 1.0;
  double xd = static_cast<double>(x);
  double st = std::sin(theta);
  if (st == 0.0) {
    double sgn = (theta > 1.0 && (x & 1ull)) ? -1.0 : 1.0;  // (-1)^x at theta = pi
    return sgn * (1.0 - c * xd);
  }
  return std::cos(xd * theta) - c * std::cos(theta) * std::sin(xd * theta) / st;
}

struct SimpsonCtx {
  const WalkParams* wp;
  std::uint64_t s, m, k;
  double c;
  double operator()(double theta) const {
    double ct = std::cos(theta);
    double st = std::sin(theta);
    double s2 = st * st;
    double T = s2 / (c * c + (1.0 - c * c) * s2);
    if (c == 0.0) T = 1.0;
    return std::pow(ct, static_cast<double>(m)) * T * g_eigen(s, theta, c) * g_eigen(k, theta, c);
  }
};

double adaptive_simpson_rec(const SimpsonCtx& f, double a, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth) {
  double m1 = 0.5 * (a + b);
  double lm = 0.5 * (a + m1), rm = 0.5 * (m1 + b);
  double flm = f(lm), frm = f(rm);
  double left = (m1 - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m1) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw QuadratureError("transition-probability quadrature did not converge");
  return adaptive_simpson_rec(f, a, m1, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m1, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const SimpsonCtx& f, double tol) {
  const int panels = 16;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    double a = kPi * static_cast<double>(i) / panels;
    double b = kPi * static_cast<double>(i + 1) / panels;
    double m1 = 0.5 * (a + b);
    double fa = f(a), fm = f(m1), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    total += adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol / panels, 60);
  }
  return total;
}

}  // namespace

double TransitionRow::tail_from(std::uint64_t threshold) const {
  double acc = 0.0;
  if (threshold >= probs.size()) return 0.0;
  for (std::size_t k = probs.size(); k-- > threshold;) acc += probs[k];
  return acc;
}

TransitionRow rw_dp_transition_prob(const WalkParams& params, std::uint64_t start,
                                    std::uint64_t m) {
  std::size_t size = static_cast<std::size_t>(start + m + 1);
  std::vector<double> cur(size, 0.0), nxt(size, 0.0);
  cur[static_cast<std::size_t>(start)] = 1.0;
  double p = params.p_down, q = params.p_up;
  std::size_t hi = static_cast<std::size_t>(start);
  for (std::uint64_t step = 0; step < m; ++step) {
    std::fill(nxt.begin(), nxt.begin() + static_cast<std::ptrdiff_t>(hi) + 2, 0.0);
    nxt[1] += cur[0];
    for (std::size_t x = 1; x <= hi; ++x) {
      double mass = cur[x];
      if (mass == 0.0) continue;
      nxt[x - 1] += p * mass;
      nxt[x + 1] += q * mass;
    }
    ++hi;
    cur.swap(nxt);
  }
  return {params, start, m, std::move(cur)};
}

double kac_remainder_envelope(const WalkParams& params, std::uint64_t start, std::uint64_t m,
                              std::uint64_t k) {
  double c = params.p_down - params.p_up;
  double lp = log_prefactor(params, start, m, k);
  return (2.0 / kPi) * std::exp(lp) * (1.0 + c * static_cast<double>(start)) *
         (1.0 + c * static_cast<double>(k)) * abs_cos_power_integral(m);
}

KacDecomposition kac_transition_prob(const WalkParams& params, std::uint64_t start,
                                     std::uint64_t m, std::uint64_t k, double quadrature_tol) {
  if (m == 0) throw std::invalid_argument("kac_transition_prob requires m >= 1");
  if (k == 0) throw std::invalid_argument("kac_transition_prob serves k >= 1 only");
  double env = kac_remainder_envelope(params, start, m, k);
  if (((start + m + k) & 1ull) != 0) {
    // Off the parity class: both the main term's alternating factor and the
    // integral (odd under theta -> pi - theta) vanish identically.
    return {0.0, 0.0, env};
  }
  double main = main_term_at(params, k);
  double lp = log_prefactor(params, start, m, k);
  double scale = (2.0 / kPi) * std::exp(lp);
  if (scale < 1e-280) return {main, 0.0, env};
  SimpsonCtx f{&params, start, m, k, params.p_down - params.p_up};
  double tol = std::max(quadrature_tol / scale * 0.5, 1e-16);
  double integral = adaptive_simpson(f, tol);
  return {main, scale * integral, env};
}

KacRow kac_transition_row(const WalkParams& params, std::uint64_t start, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("kac_transition_row requires m >= 1");
  const double p = params.p_down, q = params.p_up;
  const double c = p - q;
  const double r = q / p;
  const std::uint64_t s = start;
  const std::size_t ksize = static_cast<std::size_t>(s + m + 1);

  KacRow row{start, m, std::vector<double>(ksize, 0.0), std::vector<double>(ksize, 0.0)};

  // G(N) = integral of cos^m(t) cos(N t) over [0, pi]; nonzero only for
  // N <= m with N = m (mod 2). Built once from the central value outward.
  const std::size_t nmax = static_cast<std::size_t>(2 * s + m + 2);
  std::vector<double> G(nmax + 2, 0.0);
  {
    double md = static_cast<double>(m);
    std::uint64_t n0 = m & 1ull;
    double logc = std::lgamma(md + 1.0) -
                  std::lgamma(0.5 * (md - static_cast<double>(n0)) + 1.0) -
                  std::lgamma(0.5 * (md + static_cast<double>(n0)) + 1.0) - md * std::log(2.0);
    double val = kPi * std::exp(logc);
    for (std::uint64_t N = n0; N <= m; N += 2) {
      if (N < G.size()) G[static_cast<std::size_t>(N)] = val;
      double t = 0.5 * (md - static_cast<double>(N));  // binom column index
      val *= t / (md - t + 1.0);
    }
  }

  // u(N) = integral of cos^m(t) T(t) cos(N t), via the exact cosine series
  // T = 1/(2p) - (c/(2p^2)) sum_{j>=1} r^(j-1) cos(2jt), truncated once the
  // geometric tail is below 5e-17 of scale.
  std::vector<double> u(nmax + 1, 0.0);
  {
    std::size_t J = 0;
    if (c > 0.0) {
      double target = 5e-17 * (1.0 - r) * 2.0 * p * p / c;
      J = static_cast<std::size_t>(std::ceil(std::log(target) / std::log(r))) + 1;
      if (J < 1) J = 1;
      if (J > 60000) J = 60000;
    }
    auto Gat = [&](std::uint64_t N) -> double {
      return N < G.size() ? G[static_cast<std::size_t>(N)] : 0.0;
    };
    for (std::uint64_t N = m & 1ull; N <= nmax; N += 2) {
      double acc = Gat(N) / (2.0 * p);
      double tj = -c / (2.0 * p * p);
      for (std::size_t j = 1; j <= J; ++j) {
        std::uint64_t twoj = 2 * static_cast<std::uint64_t>(j);
        double lo = N >= twoj ? Gat(N - twoj) : Gat(twoj - N);
        acc += tj * 0.5 * (Gat(N + twoj) + lo);
        tj *= r;
      }
      u[static_cast<std::size_t>(N)] = acc;
    }
  }

  // w(M) = integral of cos^m T g_s cos(M t), folding in the coefficient
  // ladder of g_s: (1-c) at N=s, -2c on {s-2, s-4, ..., >=1}, -c at 0 for
  // even s (g_0 = 1 exactly).
  const std::size_t wmax = static_cast<std::size_t>(s + m);
  std::vector<double> w(wmax + 1, 0.0);
  auto uat = [&](std::uint64_t N) -> double {
    return N <= nmax ? u[static_cast<std::size_t>(N)] : 0.0;
  };
  for (std::uint64_t M = (s + m) & 1ull; M <= wmax; M += 2) {
    double acc;
    if (s == 0) {
      acc = uat(M);
    } else {
      auto h = [&](std::uint64_t N) {
        double lo = M >= N ? uat(M - N) : uat(N - M);
        return 0.5 * (uat(M + N) + lo);
      };
      acc = (1.0 - c) * h(s);
      if (c != 0.0) {
        for (std::uint64_t N = s >= 2 ? s - 2 : 0; N >= 1; N -= 2) {
          acc -= 2.0 * c * h(N);
          if (N < 2) break;
        }
        if ((s & 1ull) == 0) acc -= c * h(0);
      }
    }
    w[static_cast<std::size_t>(M)] = acc;
  }

  // Prefix sums of w along the parity class, so each target site costs O(1).
  std::vector<double> pref(wmax + 1, 0.0);
  for (std::size_t M = 0; M <= wmax; ++M) {
    pref[M] = w[M] + (M >= 2 ? pref[M - 2] : 0.0);
  }

  const double lr = std::log(r);
  const double log_base = static_cast<double>(m) * std::log(2.0 * std::sqrt(p * q)) -
                          0.5 * static_cast<double>(s) * lr;
  for (std::uint64_t k = 1; k <= s + m; ++k) {
    if (((s + m + k) & 1ull) != 0) continue;
    double I = (1.0 - c) * w[static_cast<std::size_t>(k)];
    if (c != 0.0) {
      if (k >= 2) {
        I -= 2.0 * c * pref[static_cast<std::size_t>(k - 2)];
        if ((k & 1ull) == 0) I += c * w[0];
      }
      row.main_term[static_cast<std::size_t>(k)] = main_term_at(params, k);
    }
    double scale = (2.0 / kPi) * std::exp(log_base + 0.5 * static_cast<double>(k) * lr);
    row.remainder[static_cast<std::size_t>(k)] = scale * I;
  }
  return row;
}

double geometric_main_term_tail(const WalkParams& params, int parity, std::uint64_t threshold) {
  if (parity != 0 && parity != 1) throw std::invalid_argument("parity must be 0 or 1");
  double c = params.p_down - params.p_up;
  if (c == 0.0) return 0.0;  // the main term vanishes without drift
  std::uint64_t k0 = threshold;
  if ((k0 & 1ull) != static_cast<std::uint64_t>(parity)) ++k0;
  // Geometric sum of the main term over {k0, k0+2, ...} collapses to
  // (p/q) (q/p)^k0.
  double lr = std::log(params.p_up / params.p_down);
  return std::exp((static_cast<double>(k0) - 1.0) * lr);
}

TailProbability tail_probability(const WalkParams& params, std::uint64_t start, std::uint64_t m,
                                 std::uint64_t threshold) {
  if (threshold == 0) return {1.0, 0.0, false};
  bool fast_ok = params.beta > 0.0 && m >= params.n;
  if (!fast_ok) {
    TransitionRow row = rw_dp_transition_prob(params, start, m);
    return {row.tail_from(threshold), 0.0, false};
  }
  int parity = static_cast<int>((start + m) & 1ull);
  double value = geometric_main_term_tail(params, parity, threshold);
  // Envelope of the neglected oscillatory mass, summed in closed form over
  // the parity class from the first admissible site.
  std::uint64_t k0 = threshold;
  if ((k0 & 1ull) != static_cast<std::uint64_t>(parity)) ++k0;
  double p = params.p_down, q = params.p_up, c = p - q;
  double x = q / p;  // per-site decay of (q/p)^(k/2) across a 2-step
  double base = (2.0 / kPi) * std::exp(log_prefactor(params, start, m, k0)) *
                (1.0 + c * static_cast<double>(start)) * abs_cos_power_integral(m);
  double geom = 1.0 / (1.0 - x);
  double err = base * ((1.0 + c * static_cast<double>(k0)) * geom +
                       2.0 * c * x * geom * geom);
  return {value, err, true};
}

double max_abs_simple_walk_tail_exact(std::uint64_t m, std::uint64_t k) {
  if (k == 0) return 1.0;
  if (k > m) return 0.0;
  std::size_t width = static_cast<std::size_t>(2 * k - 1);
  std::vector<double> cur(width, 0.0), nxt(width, 0.0);
  cur[static_cast<std::size_t>(k - 1)] = 1.0;  // origin
  for (std::uint64_t step = 0; step < m; ++step) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    for (std::size_t i = 0; i < width; ++i) {
      double mass = cur[i];
      if (mass == 0.0) continue;
      if (i > 0) nxt[i - 1] += 0.5 * mass;
      if (i + 1 < width) nxt[i + 1] += 0.5 * mass;
    }
    cur.swap(nxt);
  }
  double inside = 0.0;
  for (double v : cur) inside += v;
  return 1.0 - inside;
}

}  // namespace brwlab
