#pragma once

#include <cmline/arith.hpp>
#include <cmline/bigfloat.hpp>
#include <cmline/quadratic_forms.hpp>

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cmline {

struct PrecisionConfig {
  long working_bits = 128;
  mpq_class rounding_tolerance = mpq_class(1, mpz_class(1) << 32);

  void validate() const {
    if (working_bits < 64) throw std::invalid_argument("working_bits must be >= 64");
    if (rounding_tolerance <= 0) throw std::invalid_argument("rounding_tolerance must be positive");
  }
};

/// Monic integer polynomial, coefficients from the constant term up.
struct ClassPolynomial {
  Discriminant discriminant;
  std::vector<mpz_class> coefficients;

  i64 degree() const { return static_cast<i64>(coefficients.size()) - 1; }
  /// Middle coefficient for degree 2, i.e. A in X^2 + A X + C.
  const mpz_class& coeff(std::size_t i) const { return coefficients.at(i); }
};

namespace detail {

using ZSeries = std::vector<mpz_class>;

inline ZSeries zmul(const ZSeries& a, const ZSeries& b, std::size_t n) {
  ZSeries r(n, 0);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

inline std::vector<mpz_class> sigma3_table(std::size_t n) {
  std::vector<mpz_class> s(n + 1, 0);
  for (std::size_t d = 1; d <= n; ++d) {
    mpz_class d3 = mpz_class(static_cast<unsigned long>(d));
    d3 = d3 * d3 * d3;
    for (std::size_t m = d; m <= n; m += d) s[m] += d3;
  }
  return s;
}

// Euler: prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}, k in Z.
inline ZSeries euler_product(std::size_t n) {
  ZSeries p(n, 0);
  for (i64 k = 0;; ++k) {
    bool any = false;
    for (int side = 0; side < (k == 0 ? 1 : 2); ++side) {
      const i64 kk = side == 0 ? k : -k;
      i64 e = kk * (3 * kk - 1) / 2;
      if (e < static_cast<i64>(n)) {
        p[static_cast<std::size_t>(e)] += (k % 2 == 0) ? 1 : -1;
        any = true;
      }
    }
    if (!any) break;
  }
  return p;
}

struct JCoeffCache {
  std::mutex mu;
  std::vector<mpz_class> coeffs;  // c_{-1}, c_0, ...
};

inline JCoeffCache& jcoeff_cache() {
  static JCoeffCache cache;
  return cache;
}

inline std::vector<mpz_class> compute_j_coefficients(std::size_t count) {
  // j q = E4^3 / prod(1-q^n)^24, as an integral power series in q.
  const std::size_t n = count;
  auto s3 = sigma3_table(n);
  ZSeries e4(n, 0);
  e4[0] = 1;
  for (std::size_t i = 1; i < n; ++i) e4[i] = 240 * s3[i];
  ZSeries e4cube = zmul(zmul(e4, e4, n), e4, n);

  ZSeries p = euler_product(n);
  ZSeries p2 = zmul(p, p, n), p4 = zmul(p2, p2, n), p8 = zmul(p4, p4, n), p16 = zmul(p8, p8, n);
  ZSeries p24 = zmul(p16, p8, n);

  // Division by a series with constant term 1.
  ZSeries out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class acc = e4cube[i];
    for (std::size_t k = 1; k <= i; ++k) acc -= p24[k] * out[i - k];
    out[i] = acc;
  }
  return out;
}

}  // namespace detail

/// Fourier coefficients c_{-1}, c_0, ..., c_{n_max} of j.
inline std::vector<mpz_class> j_coefficients(std::size_t n_max) {
  auto& cache = detail::jcoeff_cache();
  const std::size_t need = n_max + 2;
  std::lock_guard<std::mutex> lock(cache.mu);
  if (cache.coeffs.size() < need) {
    std::size_t target = std::max<std::size_t>(need, 2 * cache.coeffs.size());
    target = std::max<std::size_t>(target, 32);
    cache.coeffs = detail::compute_j_coefficients(target);
  }
  return std::vector<mpz_class>(cache.coeffs.begin(), cache.coeffs.begin() + static_cast<long>(need));
}

/// Single coefficient c_n, n >= -1.
inline mpz_class j_coefficient(i64 n) {
  if (n < -1) return 0;
  return j_coefficients(static_cast<std::size_t>(std::max<i64>(n, 0)))[static_cast<std::size_t>(n + 1)];
}

namespace detail {

inline long magnitude_bits(double im) {
  return static_cast<long>(std::ceil(2.0 * M_PI * std::max(im, 0.0) / std::log(2.0)));
}

// Moves tau into the standard fundamental domain; j is SL2(Z)-invariant.
inline Complex reduce_tau(Complex t) {
  for (int iter = 0; iter < 100000; ++iter) {
    mpz_class shift = t.re.round_to_integer();
    if (shift != 0) t.re -= BigFloat(shift, t.re.precision());
    BigFloat n2 = t.re * t.re + t.im * t.im;
    if (n2 < BigFloat(1L, n2.precision())) {
      // -1/tau = -conj(tau)/|tau|^2
      t = Complex(-t.re / n2, t.im / n2);
    } else {
      return t;
    }
  }
  throw std::runtime_error("eval_j: reduction did not terminate");
}

}  // namespace detail

/// j(tau) to roughly working_bits of absolute accuracy for reduced tau.
inline Complex eval_j(const Complex& tau_in, const PrecisionConfig& cfg) {
  cfg.validate();
  if (tau_in.im.sign() <= 0) throw std::domain_error("eval_j: Im tau must be positive");

  // Reduce at a generous precision, then pick the working precision from Im tau.
  const long p0 = std::max<long>(cfg.working_bits + 64, tau_in.precision());
  Complex tau(p0);
  mpfr_set(tau.re.get(), tau_in.re.get(), MPFR_RNDN);
  mpfr_set(tau.im.get(), tau_in.im.get(), MPFR_RNDN);
  tau = detail::reduce_tau(tau);

  const double y = tau.im.to_double();
  const long prec = cfg.working_bits + detail::magnitude_bits(y) + 32;
  Complex t(prec);
  mpfr_set(t.re.get(), tau.re.get(), MPFR_RNDN);
  mpfr_set(t.im.get(), tau.im.get(), MPFR_RNDN);

  // q = exp(2 pi i tau)
  BigFloat two_pi = BigFloat::pi(prec) * 2L;
  BigFloat r = exp(-(two_pi * t.im));
  BigFloat ang = two_pi * t.re;
  Complex q(r * cos(ang), r * sin(ang));

  // |q|^N < 2^(-prec-16)
  const std::size_t nterms =
      static_cast<std::size_t>(std::ceil((prec + 16) * std::log(2.0) / (2.0 * M_PI * y))) + 1;

  std::vector<Complex> qpow;
  qpow.reserve(nterms + 1);
  qpow.emplace_back(BigFloat(1L, prec), BigFloat(prec));
  for (std::size_t i = 1; i <= nterms; ++i) qpow.push_back(qpow.back() * q);

  auto s3 = detail::sigma3_table(nterms);
  Complex e4(BigFloat(1L, prec), BigFloat(prec));
  for (std::size_t i = 1; i <= nterms; ++i) {
    const Complex& z = qpow[i];
    mpz_class c = 240 * s3[i];
    e4 += Complex(z.re * c, z.im * c);
  }

  Complex eta(prec);
  for (i64 k = 0;; ++k) {
    bool any = false;
    for (int side = 0; side < (k == 0 ? 1 : 2); ++side) {
      const i64 kk = side == 0 ? k : -k;
      i64 e = kk * (3 * kk - 1) / 2;
      if (e <= static_cast<i64>(nterms)) {
        if (k % 2 == 0) eta += qpow[static_cast<std::size_t>(e)];
        else eta -= qpow[static_cast<std::size_t>(e)];
        any = true;
      }
    }
    if (!any) break;
  }
  Complex e2 = eta * eta, e4p = e2 * e2, e8 = e4p * e4p, e16 = e8 * e8;
  Complex disc = q * (e16 * e8);
  Complex num = e4 * e4 * e4;
  return num / disc;
}

/// Complex tau of a reduced form, at `bits` of precision.
inline Complex tau_complex(const ReducedForm& f, Discriminant disc, long bits) {
  BigFloat re(mpq_class(f.b, 2 * f.a), bits);
  BigFloat im = sqrt(BigFloat(static_cast<long>(disc.abs()), bits)) / static_cast<long>(2 * f.a);
  return Complex(re, im);
}

inline Complex singular_modulus(Discriminant disc, const ReducedForm& f, const PrecisionConfig& cfg) {
  if (f.discriminant() != disc.value() || !f.is_reduced()) {
    throw std::invalid_argument("singular_modulus: form is not a reduced form of the discriminant");
  }
  return eval_j(tau_complex(f, disc, cfg.working_bits + 64), cfg);
}

/// Precision at which hilbert_class_polynomial starts.
inline long hcp_initial_bits(Discriminant disc, i64 h, const PrecisionConfig& cfg) {
  double need = 64.0 + std::ceil(static_cast<double>(h) * M_PI * std::sqrt(static_cast<double>(disc.abs())) /
                                 std::log(2.0));
  return std::max<long>(cfg.working_bits, static_cast<long>(need));
}

class PrecisionEscalationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expands prod (X - x_i) over the singular moduli and certifies integrality.
inline ClassPolynomial hilbert_class_polynomial(Discriminant disc, const PrecisionConfig& cfg = {}) {
  cfg.validate();
  const auto forms = reduced_forms(disc);
  const i64 h = static_cast<i64>(forms.size());
  long bits = hcp_initial_bits(disc, h, cfg);
  const BigFloat tol(cfg.rounding_tolerance, 64);

  for (int attempt = 0; attempt <= 4; ++attempt, bits *= 2) {
    PrecisionConfig local = cfg;
    local.working_bits = bits;
    const long prec = bits + 32;
    std::vector<Complex> poly;
    poly.emplace_back(BigFloat(1L, prec), BigFloat(prec));
    for (const auto& f : forms) {
      Complex root = singular_modulus(disc, f, local);
      // poly *= (X - root)
      std::vector<Complex> next(poly.size() + 1, Complex(prec));
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i + 1] += poly[i];
        next[i] -= poly[i] * root;
      }
      poly = std::move(next);
    }
    std::vector<mpz_class> coeffs;
    bool ok = true;
    for (const auto& c : poly) {
      mpz_class z = c.re.round_to_integer();
      BigFloat frac = abs(c.re - BigFloat(z, prec));
      if (frac > tol || abs(c.im) > tol) {
        ok = false;
        break;
      }
      coeffs.push_back(z);
    }
    if (ok) return {disc, std::move(coeffs)};
  }
  throw PrecisionEscalationError("hilbert_class_polynomial: precision escalation limit exceeded for D=" +
                                 std::to_string(disc.value()));
}

/// Largest deviation ||j(tau)| - e^{2 pi Im tau}| over the reduced forms of disc.
inline BigFloat j_bound_deviation(Discriminant disc, const PrecisionConfig& cfg) {
  BigFloat worst(cfg.working_bits);
  for (const auto& f : reduced_forms(disc)) {
    Complex tau = tau_complex(f, disc, cfg.working_bits + 64);
    Complex j = eval_j(tau, cfg);
    BigFloat two_pi = BigFloat::pi(j.precision()) * 2L;
    BigFloat dev = abs(abs(j) - exp(two_pi * tau.im));
    if (dev > worst) worst = dev;
  }
  return worst;
}

inline bool check_j_bound(Discriminant disc, const PrecisionConfig& cfg) {
  BigFloat dev = j_bound_deviation(disc, cfg);
  BigFloat limit = BigFloat(2079L, dev.precision()) + BigFloat::pow2(-cfg.working_bits / 4, dev.precision());
  return dev <= limit;
}

// ---------------------------------------------------------------------------
// On-disk cache of class polynomials, one JSON record per discriminant.

class HcpCache {
 public:
  explicit HcpCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }

  std::filesystem::path file_for(Discriminant disc) const {
    return dir_ / ("hcp_" + std::to_string(disc.abs()) + ".json");
  }

  /// Returns the cached polynomial if present and well formed.
  std::optional<ClassPolynomial> load(Discriminant disc) const {
    std::ifstream in(file_for(disc));
    if (!in) return std::nullopt;
    try {
      nlohmann::json j = nlohmann::json::parse(in);
      if (j.at("disc").get<i64>() != disc.value()) return std::nullopt;
      const i64 h = j.at("h").get<i64>();
      std::vector<mpz_class> coeffs;
      for (const auto& c : j.at("coefficients")) coeffs.emplace_back(c.get<std::string>());
      if (static_cast<i64>(coeffs.size()) != h + 1 || coeffs.back() != 1) return std::nullopt;
      if (h != class_number(disc)) return std::nullopt;
      return ClassPolynomial{disc, std::move(coeffs)};
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  /// Writes to a temporary file in the same directory, then renames.
  void store(const ClassPolynomial& poly) const {
    std::filesystem::create_directories(dir_);
    nlohmann::json j;
    j["disc"] = poly.discriminant.value();
    j["h"] = poly.degree();
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : poly.coefficients) arr.push_back(c.get_str());
    j["coefficients"] = arr;

    static std::atomic<unsigned> counter{0};
    std::ostringstream tmpname;
    tmpname << ".hcp_" << poly.discriminant.abs() << '.' << std::hash<std::thread::id>{}(std::this_thread::get_id())
            << '.' << counter++ << ".tmp";
    const auto tmp = dir_ / tmpname.str();
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
      out << j.dump() << '\n';
      if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, file_for(poly.discriminant));
  }

 private:
  std::filesystem::path dir_;
};

inline ClassPolynomial hilbert_class_polynomial_cached(Discriminant disc, const PrecisionConfig& cfg,
                                                       const HcpCache* cache) {
  if (cache) {
    if (auto hit = cache->load(disc)) return *hit;
  }
  ClassPolynomial p = hilbert_class_polynomial(disc, cfg);
  if (cache) cache->store(p);
  return p;
}

}  // namespace cmline
