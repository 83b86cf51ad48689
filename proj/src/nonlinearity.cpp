#include "mti/nonlinearity.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>

namespace mti {

namespace {

double pow_int(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

Complex pow_int(Complex x, int n) {
  Complex r{1.0, 0.0};
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Unit phase e^{i s / eps^2}; plain double precision is adequate here, the
// extended-precision carrier in the steppers handles the accumulating case.
Complex unit_phase(double s, double epsilon) {
  const double theta = s / (epsilon * epsilon);
  return {std::cos(theta), std::sin(theta)};
}

}  // namespace

namespace {

std::vector<IndexTriple> enumerate_index_set(int p, int k) {
  std::vector<IndexTriple> out;
  if (k > p || k < 0 || p < 0) return out;
  const int rem = p - k;
  for (int p1 = 0; p1 <= rem; ++p1)
    for (int p2 = 0; 2 * p2 <= rem - p1; ++p2)
      for (int p3 = 0; p3 <= 1; ++p3)
        if (p1 + 2 * p2 + p3 == rem) out.push_back({p1, p2, p3});
  return out;
}

// The index sets are queried on every step; keep the small-p ones in a table
// built once (thread-safe static init) so the hot path never allocates.
constexpr int kIndexTableMaxP = 12;

}  // namespace

std::span<const IndexTriple> index_set_view(int p, int k) {
  static const auto table = [] {
    std::vector<std::vector<IndexTriple>> t((kIndexTableMaxP + 1) * (kIndexTableMaxP + 1));
    for (int pp = 0; pp <= kIndexTableMaxP; ++pp)
      for (int kk = 0; kk <= kIndexTableMaxP; ++kk)
        t[pp * (kIndexTableMaxP + 1) + kk] = enumerate_index_set(pp, kk);
    return t;
  }();
  if (p >= 0 && p <= kIndexTableMaxP && k >= 0 && k <= kIndexTableMaxP)
    return table[p * (kIndexTableMaxP + 1) + k];
  static thread_local std::vector<IndexTriple> overflow;
  overflow = enumerate_index_set(p, k);
  return overflow;
}

namespace {
}  // namespace

std::vector<IndexTriple> index_set(int p, int k) { return enumerate_index_set(p, k); }

Complex eval_f(const NonlinearitySpec& spec, Complex y) {
  if (const auto* pw = std::get_if<PurePower>(&spec))
    return eval_g(*pw, std::norm(y)) * y;
  return std::get<GeneralNonlinearity>(spec).f(y);
}

double eval_g(const PurePower& pw, double rho) { return pw.lambda * pow_int(rho, pw.p); }

double antiderivative_F(const PurePower& pw, double rho) {
  return pw.lambda * pow_int(rho, pw.p + 1) / (pw.p + 1);
}

std::pair<double, double> g_pm(double lambda, int p, double rho_plus, double rho_minus) {
  double gp = 0.0, gm = 0.0;
  for (const auto& t : index_set_view(p, 0)) {
    const double common = pow_int(rho_plus + rho_minus, t.p1) * pow_int(rho_plus * rho_minus, t.p2);
    gp += common * pow_int(rho_minus, t.p3);
    gm += common * pow_int(rho_plus, t.p3);
  }
  return {lambda * gp, lambda * gm};
}

std::pair<double, double> g_plus_partials(double lambda, int p, double rho_plus, double rho_minus) {
  double dp = 0.0, dm = 0.0;
  for (const auto& t : index_set_view(p, 0)) {
    const double s = rho_plus + rho_minus;
    const double prod = rho_plus * rho_minus;
    // d/dx of x^n with the n=0 term dropped rather than evaluated at x^{-1}
    const double s_p1 = pow_int(s, t.p1);
    const double prod_p2 = pow_int(prod, t.p2);
    const double rm_p3 = pow_int(rho_minus, t.p3);
    const double ds = t.p1 > 0 ? t.p1 * pow_int(s, t.p1 - 1) : 0.0;
    const double dprod = t.p2 > 0 ? t.p2 * pow_int(prod, t.p2 - 1) : 0.0;
    const double drm = t.p3 > 0 ? static_cast<double>(t.p3) : 0.0;
    dp += ds * prod_p2 * rm_p3 + s_p1 * dprod * rho_minus * rm_p3;
    dm += ds * prod_p2 * rm_p3 + s_p1 * dprod * rho_plus * rm_p3 + s_p1 * prod_p2 * drm;
  }
  return {lambda * dp, lambda * dm};
}

namespace {

// Symmetric sum S_k = sum over <p1,p2,p3>_k of (rho+ + rho-)^p1 rho+^p2 rho-^{p2+p3}
// together with its two partial derivatives.
struct SkValue {
  double value = 0.0;
  double d_rho_plus = 0.0;
  double d_rho_minus = 0.0;
};

SkValue s_k(int p, int k, double rho_plus, double rho_minus) {
  SkValue out;
  for (const auto& t : index_set_view(p, k)) {
    const double s = rho_plus + rho_minus;
    const double a = pow_int(s, t.p1);
    const double b = pow_int(rho_plus, t.p2);
    const double c = pow_int(rho_minus, t.p2 + t.p3);
    out.value += a * b * c;
    const double da = t.p1 > 0 ? t.p1 * pow_int(s, t.p1 - 1) : 0.0;
    const double db = t.p2 > 0 ? t.p2 * pow_int(rho_plus, t.p2 - 1) : 0.0;
    const int cexp = t.p2 + t.p3;
    const double dc = cexp > 0 ? cexp * pow_int(rho_minus, cexp - 1) : 0.0;
    out.d_rho_plus += da * b * c + a * db * c;
    out.d_rho_minus += da * b * c + a * b * dc;
  }
  return out;
}

}  // namespace

Complex g_k(double lambda, int p, int k, Complex z_plus, Complex z_minus) {
  if (k > p) return {0.0, 0.0};
  const SkValue s = s_k(p, k, std::norm(z_plus), std::norm(z_minus));
  return lambda * pow_int(z_plus, k + 1) * pow_int(z_minus, k) * s.value;
}

Complex flow_derivative_g_k(double lambda, int p, int k, Complex z_plus, Complex z_minus,
                            Complex zdot_plus, Complex zdot_minus) {
  if (k > p) return {0.0, 0.0};
  const double rho_p = std::norm(z_plus);
  const double rho_m = std::norm(z_minus);
  const SkValue s = s_k(p, k, rho_p, rho_m);
  const double rho_p_dot = 2.0 * (std::conj(z_plus) * zdot_plus).real();
  const double rho_m_dot = 2.0 * (std::conj(z_minus) * zdot_minus).real();
  const Complex zp_k = pow_int(z_plus, k);
  const Complex zm_km1 = k > 0 ? pow_int(z_minus, k - 1) : Complex{0.0, 0.0};
  const Complex mono = pow_int(z_plus, k + 1) * pow_int(z_minus, k);
  const Complex mono_dot = static_cast<double>(k + 1) * zp_k * zdot_plus * pow_int(z_minus, k) +
                           (k > 0 ? static_cast<double>(k) * pow_int(z_plus, k + 1) * zm_km1 * zdot_minus
                                  : Complex{0.0, 0.0});
  const double s_dot = s.d_rho_plus * rho_p_dot + s.d_rho_minus * rho_m_dot;
  return lambda * (mono_dot * s.value + mono * s_dot);
}

std::pair<Complex, Complex> f_pm(const NonlinearitySpec& spec, Complex z_plus, Complex z_minus) {
  if (const auto* pw = std::get_if<PurePower>(&spec)) {
    const auto [gp, gm] = g_pm(pw->lambda, pw->p, std::norm(z_plus), std::norm(z_minus));
    return {gp * z_plus, gm * z_minus};
  }
  const auto& gen = std::get<GeneralNonlinearity>(spec);
  const int n = gen.quadrature_nodes;
  Complex fp{0.0, 0.0}, fm{0.0, 0.0};
  for (int j = 0; j < n; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / n;
    const Complex e{std::cos(theta), std::sin(theta)};
    fp += gen.f(z_plus + e * std::conj(z_minus));
    fm += gen.f(z_minus + e * std::conj(z_plus));
  }
  return {fp / static_cast<double>(n), fm / static_cast<double>(n)};
}

Complex h_remainder(const NonlinearitySpec& spec, Complex z_plus, Complex z_minus, Complex r,
                    double s, double epsilon) {
  const auto* pw = std::get_if<PurePower>(&spec);
  if (!pw) throw std::invalid_argument("h_remainder: pure power nonlinearity required");
  const Complex e = unit_phase(s, epsilon);
  const Complex w = e * z_plus + std::conj(e * z_minus);
  const Complex wr = w + r;
  return eval_g(*pw, std::norm(wr)) * wr - eval_g(*pw, std::norm(w)) * w;
}

Complex f_r(const NonlinearitySpec& spec, Complex z_plus, Complex z_minus, Complex r, double s,
            double epsilon) {
  const Complex e = unit_phase(s, epsilon);
  const Complex w = e * z_plus + std::conj(e * z_minus) + r;
  const auto [fp, fm] = f_pm(spec, z_plus, z_minus);
  return eval_f(spec, w) - fp * e - std::conj(fm * e);
}

std::pair<Complex, Complex> flow_derivative_f_pm(const NonlinearitySpec& spec, Complex z_plus,
                                                 Complex z_minus, Complex zdot_plus,
                                                 Complex zdot_minus) {
  if (const auto* pw = std::get_if<PurePower>(&spec)) {
    const double rho_p = std::norm(z_plus);
    const double rho_m = std::norm(z_minus);
    const double rho_p_dot = 2.0 * (std::conj(z_plus) * zdot_plus).real();
    const double rho_m_dot = 2.0 * (std::conj(z_minus) * zdot_minus).real();
    const auto [gp, gm] = g_pm(pw->lambda, pw->p, rho_p, rho_m);
    const auto [dgp_dp, dgp_dm] = g_plus_partials(pw->lambda, pw->p, rho_p, rho_m);
    // g- partials by the rho+ <-> rho- symmetry
    const auto [dgm_dm, dgm_dp] = g_plus_partials(pw->lambda, pw->p, rho_m, rho_p);
    const Complex fp_dot = (dgp_dp * rho_p_dot + dgp_dm * rho_m_dot) * z_plus + gp * zdot_plus;
    const Complex fm_dot = (dgm_dp * rho_p_dot + dgm_dm * rho_m_dot) * z_minus + gm * zdot_minus;
    return {fp_dot, fm_dot};
  }
  const auto& gen = std::get<GeneralNonlinearity>(spec);
  const int n = gen.quadrature_nodes;
  Complex fp_dot{0.0, 0.0}, fm_dot{0.0, 0.0};
  for (int j = 0; j < n; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / n;
    const Complex e{std::cos(theta), std::sin(theta)};
    {
      const Complex zeta = z_plus + e * std::conj(z_minus);
      const Complex zeta_dot = zdot_plus + e * std::conj(zdot_minus);
      fp_dot += gen.df_dy(zeta) * zeta_dot + gen.df_dybar(zeta) * std::conj(zeta_dot);
    }
    {
      const Complex zeta = z_minus + e * std::conj(z_plus);
      const Complex zeta_dot = zdot_minus + e * std::conj(zdot_plus);
      fm_dot += gen.df_dy(zeta) * zeta_dot + gen.df_dybar(zeta) * std::conj(zeta_dot);
    }
  }
  return {fp_dot / static_cast<double>(n), fm_dot / static_cast<double>(n)};
}

double quadrature_doubling_delta(const NonlinearitySpec& spec, Complex z_plus, Complex z_minus) {
  const auto* gen = std::get_if<GeneralNonlinearity>(&spec);
  if (!gen) return 0.0;
  GeneralNonlinearity doubled = *gen;
  doubled.quadrature_nodes *= 2;
  const auto coarse = f_pm(spec, z_plus, z_minus);
  const auto fine = f_pm(NonlinearitySpec{doubled}, z_plus, z_minus);
  return std::max(std::abs(coarse.first - fine.first), std::abs(coarse.second - fine.second));
}

NonlinearitySpec make_power(double lambda, int p) {
  if (p < 0) throw std::invalid_argument("make_power: p must be >= 0");
  return PurePower{lambda, p};
}

NonlinearitySpec make_power_as_general(double lambda, int p, int nodes) {
  if (p < 0) throw std::invalid_argument("make_power_as_general: p must be >= 0");
  GeneralNonlinearity gen;
  gen.name = "power-as-general";
  gen.quadrature_nodes = nodes;
  gen.f = [lambda, p](Complex y) { return lambda * pow_int(std::norm(y), p) * y; };
  gen.df_dy = [lambda, p](Complex y) {
    return Complex{lambda * (p + 1) * pow_int(std::norm(y), p), 0.0};
  };
  gen.df_dybar = [lambda, p](Complex y) {
    return p > 0 ? lambda * static_cast<double>(p) * pow_int(std::norm(y), p - 1) * y * y
                 : Complex{0.0, 0.0};
  };
  return gen;
}

NonlinearitySpec make_sin2(int nodes) {
  GeneralNonlinearity gen;
  gen.name = "sin2";
  gen.quadrature_nodes = nodes;
  gen.f = [](Complex y) {
    const double s = std::sin(std::norm(y));
    return s * s * y;
  };
  gen.df_dy = [](Complex y) {
    const double rho = std::norm(y);
    const double s = std::sin(rho);
    return Complex{s * s + rho * std::sin(2.0 * rho), 0.0};
  };
  gen.df_dybar = [](Complex y) { return y * y * std::sin(2.0 * std::norm(y)); };
  return gen;
}

std::optional<NonlinearitySpec> parse_nonlinearity(const std::string& text) {
  if (text == "sin2") return make_sin2();
  if (text.rfind("power:", 0) == 0) {
    std::istringstream in(text.substr(6));
    std::string lam_s, p_s;
    if (!std::getline(in, lam_s, ':') || !std::getline(in, p_s)) return std::nullopt;
    try {
      const double lambda = std::stod(lam_s);
      const int p = std::stoi(p_s);
      if (p < 0) return std::nullopt;
      return make_power(lambda, p);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::string nonlinearity_name(const NonlinearitySpec& spec) {
  if (const auto* pw = std::get_if<PurePower>(&spec)) {
    std::ostringstream out;
    out << "power:" << pw->lambda << ":" << pw->p;
    return out.str();
  }
  return std::get<GeneralNonlinearity>(spec).name;
}

}  // namespace mti
