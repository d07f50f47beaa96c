#include "pzeta/cyclo.hpp"

namespace pzeta {

QpModZp::QpModZp(Int prime, int m, Int num)
    : prime_(std::move(prime)), m_(m), num_(std::move(num)) {
  if (prime_ < 2) throw InputError("QpModZp: prime must be >= 2");
  if (m_ < 0) throw InputError("QpModZp: negative level");
  num_ = mod_positive(num_, pow_int(prime_, static_cast<unsigned long>(m_)));
  while (m_ > 0 && num_ % prime_ == 0) {
    num_ /= prime_;
    --m_;
  }
  if (num_ == 0) m_ = 0;
}

QpModZp QpModZp::operator+(const QpModZp& o) const {
  if (prime_ != o.prime_) throw ContextMismatchError("QpModZp: mixed primes");
  int m = std::max(m_, o.m_);
  Int a = num_ * pow_int(prime_, static_cast<unsigned long>(m - m_));
  Int b = o.num_ * pow_int(prime_, static_cast<unsigned long>(m - o.m_));
  return QpModZp(prime_, m, a + b);
}

QpModZp QpModZp::operator-() const {
  if (is_zero()) return *this;
  return QpModZp(prime_, m_, pow_int(prime_, static_cast<unsigned long>(m_)) - num_);
}

QpModZp QpModZp::times(const Int& c) const {
  return QpModZp(prime_, m_, num_ * c);
}

CycloSum::CycloSum(Int prime, int order_exponent)
    : prime_(std::move(prime)), m_(order_exponent) {
  if (prime_ < 2) throw InputError("CycloSum: prime must be >= 2");
  if (m_ < 0) throw InputError("CycloSum: negative order exponent");
  Int n = pow_int(prime_, static_cast<unsigned long>(m_));
  if (!n.fits_ulong_p()) throw BudgetExceededError("CycloSum: order too large");
  coeffs_.assign(n.get_ui(), Int(0));
}

CycloSum CycloSum::constant(const Int& prime, const Int& c) {
  CycloSum z(prime, 0);
  z.coeffs_[0] = c;
  return z;
}

CycloSum CycloSum::scaled_root(const Int& prime, int m, const Int& j,
                               const Int& c) {
  CycloSum z(prime, m);
  Int idx = mod_positive(j, Int(z.coeffs_.size()));
  z.coeffs_[idx.get_ui()] += c;
  return z;
}

CycloSum CycloSum::from_angle(const QpModZp& q, const Int& c) {
  return scaled_root(q.prime(), q.level(), q.numerator(), c);
}

CycloSum CycloSum::lift_to(int m) const {
  if (m == m_) return *this;
  if (m < m_) throw Error("CycloSum: cannot lower order");
  CycloSum z(prime_, m);
  Int scale = pow_int(prime_, static_cast<unsigned long>(m - m_));
  unsigned long s = scale.get_ui();
  for (std::size_t j = 0; j < coeffs_.size(); ++j)
    z.coeffs_[j * s] = coeffs_[j];
  return z;
}

CycloSum CycloSum::operator+(const CycloSum& o) const {
  if (prime_ != o.prime_) throw ContextMismatchError("CycloSum: mixed primes");
  int m = std::max(m_, o.m_);
  CycloSum a = lift_to(m), b = o.lift_to(m);
  for (std::size_t j = 0; j < a.coeffs_.size(); ++j) a.coeffs_[j] += b.coeffs_[j];
  return a;
}

CycloSum CycloSum::operator-() const {
  CycloSum z = *this;
  for (auto& c : z.coeffs_) c = -c;
  return z;
}

CycloSum CycloSum::operator*(const CycloSum& o) const {
  if (prime_ != o.prime_) throw ContextMismatchError("CycloSum: mixed primes");
  int m = std::max(m_, o.m_);
  CycloSum a = lift_to(m), b = o.lift_to(m);
  CycloSum z(prime_, m);
  std::size_t n = z.coeffs_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b.coeffs_[j] == 0) continue;
      z.coeffs_[(i + j) % n] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return z;
}

CycloSum CycloSum::conjugate() const {
  CycloSum z(prime_, m_);
  std::size_t n = coeffs_.size();
  for (std::size_t j = 0; j < n; ++j) z.coeffs_[(n - j) % n] += coeffs_[j];
  return z;
}

std::vector<Int> CycloSum::canonical() const {
  if (m_ == 0) return coeffs_;
  // phi(p^m) = (p-1)p^{m-1}; fold zeta^t for t >= phi via
  // zeta^{(p-1)p^{m-1}+r} = -sum_{j<p-1} zeta^{j p^{m-1}+r}.
  unsigned long pm1 = pow_int(prime_, static_cast<unsigned long>(m_ - 1)).get_ui();
  unsigned long p = Int(prime_).get_ui();
  unsigned long phi = (p - 1) * pm1;
  std::vector<Int> out(coeffs_.begin(), coeffs_.begin() + phi);
  for (std::size_t t = phi; t < coeffs_.size(); ++t) {
    if (coeffs_[t] == 0) continue;
    unsigned long r = t - phi;
    for (unsigned long j = 0; j + 1 < p; ++j) out[j * pm1 + r] -= coeffs_[t];
  }
  return out;
}

bool CycloSum::is_rational() const {
  std::vector<Int> c = canonical();
  for (std::size_t j = 1; j < c.size(); ++j)
    if (c[j] != 0) return false;
  return true;
}

std::optional<Rational> CycloSum::rational_value() const {
  std::vector<Int> c = canonical();
  for (std::size_t j = 1; j < c.size(); ++j)
    if (c[j] != 0) return std::nullopt;
  return Rational(c[0]);
}

bool CycloSum::operator==(const CycloSum& o) const {
  if (prime_ != o.prime_) return false;
  int m = std::max(m_, o.m_);
  std::vector<Int> a = lift_to(m).canonical();
  std::vector<Int> b = o.lift_to(m).canonical();
  return a == b;
}

}  // namespace pzeta
