#include "conetorsion/olverpoly.hpp"

#include "conetorsion/errors.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <deque>
#include <mutex>
#include <sstream>

namespace conetorsion {

CoeffPolynomial::CoeffPolynomial(const Rational& c) { add_term(0, 0, c); }

CoeffPolynomial CoeffPolynomial::monomial(int t_pow, int alpha_pow, const Rational& c) {
  CoeffPolynomial p;
  p.add_term(t_pow, alpha_pow, c);
  if (alpha_pow > 0) p.has_alpha_ = true;
  return p;
}

void CoeffPolynomial::add_term(int t_pow, int alpha_pow, const Rational& c) {
  if (c == 0) return;
  auto key = Monomial{t_pow, alpha_pow};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational CoeffPolynomial::coeff(int t_pow, int alpha_pow) const {
  auto it = terms_.find({t_pow, alpha_pow});
  return it == terms_.end() ? Rational(0) : it->second;
}

CoeffPolynomial CoeffPolynomial::t_coeff(int t_pow) const {
  CoeffPolynomial p;
  p.has_alpha_ = has_alpha_;
  for (const auto& [m, c] : terms_)
    if (m.first == t_pow) p.add_term(0, m.second, c);
  return p;
}

std::vector<int> CoeffPolynomial::t_powers() const {
  std::vector<int> out;
  for (const auto& [m, c] : terms_)
    if (out.empty() || out.back() != m.first) out.push_back(m.first);
  return out;
}

int CoeffPolynomial::degree_t() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.first);
  return d;
}

int CoeffPolynomial::degree_alpha() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.second);
  return d;
}

CoeffPolynomial CoeffPolynomial::operator+(const CoeffPolynomial& o) const {
  CoeffPolynomial r = *this;
  r += o;
  return r;
}

CoeffPolynomial CoeffPolynomial::operator-(const CoeffPolynomial& o) const {
  CoeffPolynomial r = *this;
  r -= o;
  return r;
}

CoeffPolynomial& CoeffPolynomial::operator+=(const CoeffPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m.first, m.second, c);
  has_alpha_ = has_alpha_ || o.has_alpha_;
  return *this;
}

CoeffPolynomial& CoeffPolynomial::operator-=(const CoeffPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m.first, m.second, -c);
  has_alpha_ = has_alpha_ || o.has_alpha_;
  return *this;
}

CoeffPolynomial CoeffPolynomial::operator*(const CoeffPolynomial& o) const {
  CoeffPolynomial r;
  r.has_alpha_ = has_alpha_ || o.has_alpha_;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) r.add_term(m1.first + m2.first, m1.second + m2.second, c1 * c2);
  return r;
}

CoeffPolynomial CoeffPolynomial::operator*(const Rational& c) const {
  CoeffPolynomial r;
  r.has_alpha_ = has_alpha_;
  for (const auto& [m, v] : terms_) r.add_term(m.first, m.second, v * c);
  return r;
}

bool CoeffPolynomial::operator==(const CoeffPolynomial& o) const { return terms_ == o.terms_; }

CoeffPolynomial CoeffPolynomial::derivative_t() const {
  CoeffPolynomial r;
  r.has_alpha_ = has_alpha_;
  for (const auto& [m, c] : terms_)
    if (m.first > 0) r.add_term(m.first - 1, m.second, c * m.first);
  return r;
}

CoeffPolynomial CoeffPolynomial::integral_t() const {
  CoeffPolynomial r;
  r.has_alpha_ = has_alpha_;
  for (const auto& [m, c] : terms_) r.add_term(m.first + 1, m.second, c / Rational(m.first + 1));
  return r;
}

CoeffPolynomial CoeffPolynomial::scale_alpha(const Rational& c) const {
  CoeffPolynomial r;
  r.has_alpha_ = has_alpha_;
  for (const auto& [m, v] : terms_) {
    Rational f = 1;
    for (int i = 0; i < m.second; ++i) f *= c;
    r.add_term(m.first, m.second, v * f);
  }
  return r;
}

namespace {

template <class T>
T ipow(const T& x, int p) {
  T r = 1;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

double to_double(const Rational& q) {
  // Route through a wide binary float so huge numerators do not overflow midway.
  using boost::multiprecision::cpp_bin_float_50;
  return static_cast<double>(cpp_bin_float_50(numerator(q)) / cpp_bin_float_50(denominator(q)));
}

}  // namespace

Rational CoeffPolynomial::eval_exact(const Rational& t, const Rational& alpha) const {
  Rational s = 0;
  for (const auto& [m, c] : terms_) s += c * ipow(t, m.first) * ipow(alpha, m.second);
  return s;
}

double CoeffPolynomial::eval(double t, double alpha) const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) s += to_double(c) * ipow(t, m.first) * ipow(alpha, m.second);
  return s;
}

std::string rational_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

std::string CoeffPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational a = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool unit = (a == 1) && (m.first > 0 || m.second > 0);
    if (!unit) os << rational_string(a);
    auto var = [&](const char* name, int p) {
      if (p == 0) return;
      if (!unit) os << "*";
      unit = false;
      os << name;
      if (p > 1) os << "^" << p;
    };
    var("t", m.first);
    var("a", m.second);
  }
  return os.str();
}

std::vector<CoeffPolynomial> formal_log(const std::vector<CoeffPolynomial>& g) {
  std::vector<CoeffPolynomial> f(g.size());
  for (std::size_t r = 1; r <= g.size(); ++r) {
    CoeffPolynomial acc;
    for (std::size_t j = 1; j < r; ++j) acc += (f[j - 1] * g[r - j - 1]) * Rational(static_cast<long>(j));
    f[r - 1] = g[r - 1] - acc * Rational(1, static_cast<long>(r));
  }
  return f;
}

namespace {

struct Memo {
  std::mutex mu;
  int max_order = 12;
  std::deque<CoeffPolynomial> u, v, d, m;
};

Memo& memo() {
  static Memo m;
  return m;
}

void check_order(int r, int lo, int max_order) {
  if (r < lo || r > max_order)
    throw InvalidArgument("olverpoly: order " + std::to_string(r) + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(max_order) + "]");
}

// Caller holds the lock.
void grow_uv(Memo& mm, int r) {
  if (mm.u.empty()) {
    mm.u.emplace_back(Rational(1));
    mm.v.emplace_back(Rational(1));
  }
  const CoeffPolynomial t = CoeffPolynomial::monomial(1, 0, 1);
  const CoeffPolynomial t2 = CoeffPolynomial::monomial(2, 0, 1);
  const CoeffPolynomial one(Rational(1));
  const CoeffPolynomial one_minus_t2 = one - t2;
  const CoeffPolynomial one_minus_5t2 = one - t2 * Rational(5);
  while (static_cast<int>(mm.u.size()) <= r) {
    const CoeffPolynomial& uk = mm.u.back();
    CoeffPolynomial duk = uk.derivative_t();
    CoeffPolynomial next = t2 * one_minus_t2 * duk * Rational(1, 2) + (one_minus_5t2 * uk).integral_t() * Rational(1, 8);
    CoeffPolynomial vnext = next - t * one_minus_t2 * uk * Rational(1, 2) - t2 * one_minus_t2 * duk;
    mm.u.push_back(std::move(next));
    mm.v.push_back(std::move(vnext));
  }
}

void grow_dm(Memo& mm, int r) {
  if (static_cast<int>(mm.d.size()) >= r) return;
  grow_uv(mm, r);
  std::vector<CoeffPolynomial> gu, gm;
  const CoeffPolynomial at = CoeffPolynomial::monomial(1, 1, 1);
  for (int j = 1; j <= r; ++j) {
    gu.push_back(mm.u[j]);
    gm.push_back(mm.v[j] + at * mm.u[j - 1]);
  }
  auto fd = formal_log(gu);
  auto fm = formal_log(gm);
  // Append only: references handed out earlier must stay valid.
  for (int j = static_cast<int>(mm.d.size()); j < r; ++j) {
    mm.d.push_back(fd[j]);
    mm.m.push_back(CoeffPolynomial::monomial(0, 1, 0) + fm[j]);
  }
}

}  // namespace

int olver_max_order() {
  std::lock_guard<std::mutex> lock(memo().mu);
  return memo().max_order;
}

void set_olver_max_order(int r) {
  if (r < 1) throw InvalidArgument("olverpoly: max order must be >= 1");
  std::lock_guard<std::mutex> lock(memo().mu);
  memo().max_order = r;
}

const CoeffPolynomial& olver_u(int r) {
  Memo& mm = memo();
  std::lock_guard<std::mutex> lock(mm.mu);
  check_order(r, 0, mm.max_order);
  grow_uv(mm, r);
  return mm.u[r];
}

const CoeffPolynomial& olver_v(int r) {
  Memo& mm = memo();
  std::lock_guard<std::mutex> lock(mm.mu);
  check_order(r, 0, mm.max_order);
  grow_uv(mm, r);
  return mm.v[r];
}

OlverPair olver_pair(int r) { return {olver_u(r), olver_v(r)}; }

const CoeffPolynomial& d_poly(int r) {
  Memo& mm = memo();
  std::lock_guard<std::mutex> lock(mm.mu);
  check_order(r, 1, mm.max_order);
  grow_dm(mm, r);
  return mm.d[r - 1];
}

const CoeffPolynomial& m_poly(int r) {
  Memo& mm = memo();
  std::lock_guard<std::mutex> lock(mm.mu);
  check_order(r, 1, mm.max_order);
  grow_dm(mm, r);
  return mm.m[r - 1];
}

Rational x_coeff(int r, int b) { return d_poly(r).coeff(r + 2 * b, 0); }

CoeffPolynomial z_coeff(int r, int b) { return m_poly(r).t_coeff(r + 2 * b); }

CoeffPolynomial z_diff_sum_poly(int r) {
  CoeffPolynomial s = CoeffPolynomial::monomial(0, 1, 0);
  for (int b = 0; b <= r; ++b) {
    CoeffPolynomial z = z_coeff(r, b);
    s += z.scale_alpha(-1) - z;
  }
  return s;
}

double z_diff_sum(int r, double alpha) { return z_diff_sum_poly(r).eval(0.0, alpha); }

}  // namespace conetorsion
