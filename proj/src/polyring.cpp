#include "ambikit/polyring.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

namespace ambikit {

// ---------------------------------------------------------------------------
// VarTable

VarTable::VarTable(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxVars)
    throw DimensionError("too many variables: " + std::to_string(names_.size()) +
                         " (limit " + std::to_string(kMaxVars) + ")");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    auto [it, inserted] = index_.emplace(names_[i], i);
    if (!inserted) throw Error("duplicate variable name: " + names_[i]);
  }
}

std::optional<std::size_t> VarTable::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t VarTable::index(std::string_view name) const {
  auto i = find(name);
  if (!i) throw Error("unknown variable: " + std::string(name));
  return *i;
}

VarTablePtr make_vars(std::vector<std::string> names) {
  return std::make_shared<const VarTable>(std::move(names));
}

bool same_vars(const VarTablePtr& a, const VarTablePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::variable(std::size_t i, std::uint16_t power) {
  Monomial m;
  m.exp[i] = power;
  m.deg = power;
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned e = unsigned(a.exp[i]) + b.exp[i];
    if (e > std::numeric_limits<std::uint16_t>::max()) throw Error("exponent overflow");
    r.exp[i] = static_cast<std::uint16_t>(e);
  }
  r.deg = a.deg + b.deg;
  return r;
}

bool divides(const Monomial& a, const Monomial& b) {
  if (a.deg > b.deg) return false;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (a.exp[i] > b.exp[i]) return false;
  return true;
}

Monomial quotient(const Monomial& b, const Monomial& a) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.exp[i] = static_cast<std::uint16_t>(b.exp[i] - a.exp[i]);
  r.deg = b.deg - a.deg;
  return r;
}

Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    r.exp[i] = std::max(a.exp[i], b.exp[i]);
    r.deg += r.exp[i];
  }
  return r;
}

Monomial gcd(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    r.exp[i] = std::min(a.exp[i], b.exp[i]);
    r.deg += r.exp[i];
  }
  return r;
}

int grevlex_cmp(const Monomial& a, const Monomial& b) {
  if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
  for (std::size_t i = kMaxVars; i-- > 0;)
    if (a.exp[i] != b.exp[i]) return a.exp[i] > b.exp[i] ? -1 : 1;
  return 0;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (auto e : m.exp) {
    h ^= e;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

namespace {

using Term = Polynomial::Term;

bool term_desc(const Term& a, const Term& b) { return grevlex_cmp(a.first, b.first) > 0; }

void check_same(const Polynomial& a, const Polynomial& b) {
  if (!same_vars(a.vars(), b.vars())) throw VarTableMismatch();
}

std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = grevlex_cmp(a[i].first, b[j].first);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.emplace_back(b[j].first, subtract ? Rational(-b[j].second) : b[j].second);
      ++j;
    } else {
      Rational s = subtract ? Rational(a[i].second - b[j].second) : Rational(a[i].second + b[j].second);
      if (s != 0) out.emplace_back(a[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.emplace_back(b[j].first, subtract ? Rational(-b[j].second) : b[j].second);
  return out;
}

// Heap entry for Johnson-style multiplication and division: the product of
// term `i` of one operand with term `j` of the other.
struct HeapEntry {
  Monomial m;
  std::size_t i;
  std::size_t j;
};

struct HeapLess {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const { return grevlex_cmp(a.m, b.m) < 0; }
};

std::vector<Term> heap_multiply(const std::vector<Term>& a, const std::vector<Term>& b) {
  // a is the shorter operand; one heap slot per term of a.
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap;
  for (std::size_t i = 0; i < a.size(); ++i) heap.push({a[i].first * b[0].first, i, 0});
  std::vector<Term> out;
  Rational acc;
  Rational prod;
  while (!heap.empty()) {
    Monomial m = heap.top().m;
    acc = 0;
    while (!heap.empty() && heap.top().m == m) {
      HeapEntry e = heap.top();
      heap.pop();
      mpq_mul(prod.get_mpq_t(), a[e.i].second.get_mpq_t(), b[e.j].second.get_mpq_t());
      acc += prod;
      if (e.j + 1 < b.size()) heap.push({a[e.i].first * b[e.j + 1].first, e.i, e.j + 1});
    }
    if (acc != 0) out.emplace_back(m, acc);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(VarTablePtr vars, std::vector<Term> terms) : vars_(std::move(vars)) {
  std::sort(terms.begin(), terms.end(), term_desc);
  for (auto& t : terms) {
    if (!terms_.empty() && terms_.back().first == t.first) {
      terms_.back().second += t.second;
    } else {
      if (!terms_.empty() && terms_.back().second == 0) terms_.pop_back();
      terms_.push_back(std::move(t));
    }
  }
  if (!terms_.empty() && terms_.back().second == 0) terms_.pop_back();
}

Polynomial Polynomial::from_sorted(VarTablePtr vars, std::vector<Term> terms) {
  Polynomial p(std::move(vars));
  p.terms_ = std::move(terms);
  return p;
}

Polynomial Polynomial::constant(VarTablePtr vars, const Rational& c) {
  Polynomial p(std::move(vars));
  if (c != 0) p.terms_.emplace_back(Monomial{}, c);
  return p;
}

Polynomial Polynomial::variable(VarTablePtr vars, std::size_t i) {
  if (i >= vars->size()) throw DimensionError("variable index out of range");
  Polynomial p(std::move(vars));
  p.terms_.emplace_back(Monomial::variable(i), Rational(1));
  return p;
}

Polynomial Polynomial::variable(VarTablePtr vars, std::string_view name) {
  std::size_t i = vars->index(name);
  return variable(std::move(vars), i);
}

Polynomial Polynomial::monomial(VarTablePtr vars, const Monomial& m, const Rational& c) {
  Polynomial p(std::move(vars));
  if (c != 0) p.terms_.emplace_back(m, c);
  return p;
}

Rational Polynomial::constant_value() const {
  if (!is_constant()) throw Error("polynomial is not constant: " + to_string());
  return terms_.empty() ? Rational(0) : terms_[0].second;
}

std::uint32_t Polynomial::total_degree() const { return terms_.empty() ? 0 : terms_.front().first.deg; }

std::uint32_t Polynomial::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max<std::uint32_t>(d, t.first.exp[var]);
  return d;
}

bool Polynomial::homogeneous() const {
  for (const auto& t : terms_)
    if (t.first.deg != terms_.front().first.deg) return false;
  return true;
}

bool Polynomial::involves(std::size_t var) const {
  for (const auto& t : terms_)
    if (t.first.exp[var] != 0) return true;
  return false;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    bool neg = sgn(c) < 0;
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    Rational a = abs(c);
    bool need_star = false;
    if (m.is_one() || a != 1) {
      os << a.get_str();
      need_star = true;
    }
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (m.exp[i] == 0) continue;
      if (need_star) os << '*';
      os << vars_->name(i);
      if (m.exp[i] > 1) os << '^' << m.exp[i];
      need_star = true;
    }
  }
  return os.str();
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.is_zero()) return *this;
  if (!vars_) vars_ = o.vars_;
  check_same(*this, o);
  terms_ = merge(terms_, o.terms_, false);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.is_zero()) return *this;
  if (!vars_) vars_ = o.vars_;
  check_same(*this, o);
  terms_ = merge(terms_, o.terms_, true);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  *this = *this * o;
  return *this;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return Polynomial(vars_);
  Polynomial r = *this;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

Polynomial Polynomial::times_monomial(const Monomial& m, const Rational& c) const {
  if (c == 0) return Polynomial(vars_);
  Polynomial r(vars_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.emplace_back(t.first * m, t.second * c);
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(vars_, 1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  if (!terms_.empty() && !same_vars(vars_, o.vars_)) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].first != o.terms_[i].first || terms_[i].second != o.terms_[i].second) return false;
  return true;
}

Polynomial Polynomial::embed(VarTablePtr target, std::span<const std::size_t> map) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    Monomial r;
    for (std::size_t i = 0; i < vars_->size(); ++i)
      if (m.exp[i]) r.exp[map[i]] = m.exp[i];
    r.deg = m.deg;
    out.emplace_back(r, c);
  }
  return Polynomial(std::move(target), std::move(out));
}

Polynomial Polynomial::embed(VarTablePtr target) const {
  if (same_vars(vars_, target)) return from_sorted(target, terms_);
  std::vector<std::size_t> map(vars_ ? vars_->size() : 0, 0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!involves(i)) continue;
    auto j = target->find(vars_->name(i));
    if (!j) throw Error("cannot embed: variable " + vars_->name(i) + " missing from target table");
    map[i] = *j;
  }
  return embed(std::move(target), map);
}

Polynomial operator+(Polynomial a, const Polynomial& b) {
  a += b;
  return a;
}

Polynomial operator-(Polynomial a, const Polynomial& b) {
  a -= b;
  return a;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return Polynomial(a.vars() ? a.vars() : b.vars());
  if (b.is_zero()) return Polynomial(a.vars());
  check_same(a, b);
  if (a.size() == 1) return b.times_monomial(a.terms()[0].first, a.terms()[0].second);
  if (b.size() == 1) return a.times_monomial(b.terms()[0].first, b.terms()[0].second);
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  return Polynomial::from_sorted(a.vars(), heap_multiply(small.terms(), large.terms()));
}

// ---------------------------------------------------------------------------
// Content, normalization, exact division

Rational content(const Polynomial& p) {
  if (p.is_zero()) return Rational(1);
  Integer g = 0;
  Integer l = 1;
  for (const auto& [m, c] : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational r(g, l);
  r.canonicalize();
  return r;
}

Polynomial primitive(const Polynomial& p) {
  if (p.is_zero()) return p;
  Rational c = content(p);
  if (c == 1) return p;
  return p.scaled(1 / c);
}

Polynomial normalize(const Polynomial& p) {
  if (p.is_zero()) return p;
  Rational c = content(p);
  if (sgn(p.leading_coefficient()) < 0) c = -c;
  if (c == 1) return p;
  return p.scaled(1 / c);
}

bool associates(const Polynomial& p, const Polynomial& q) { return normalize(p) == normalize(q); }

std::optional<Polynomial> divide_exact(const Polynomial& p, const Polynomial& d) {
  if (d.is_zero()) throw DivisionByZero("exact division by the zero polynomial");
  if (p.is_zero()) return Polynomial(p.vars() ? p.vars() : d.vars());
  check_same(p, d);
  if (d.size() == 1) {
    const auto& [dm, dc] = d.terms()[0];
    std::vector<Term> out;
    out.reserve(p.size());
    for (const auto& [m, c] : p.terms()) {
      if (!divides(dm, m)) return std::nullopt;
      out.emplace_back(quotient(m, dm), c / dc);
    }
    return Polynomial::from_sorted(p.vars(), std::move(out));
  }
  if (d.total_degree() > p.total_degree()) return std::nullopt;
  for (std::size_t v = 0; v < p.vars()->size(); ++v)
    if (d.degree_in(v) > p.degree_in(v)) return std::nullopt;

  // Johnson's heap division: one heap slot per quotient term walking the
  // divisor tail, plus the dividend stream (encoded as i == npos).
  constexpr std::size_t kDividend = std::numeric_limits<std::size_t>::max();
  const auto& pt = p.terms();
  const auto& dt = d.terms();
  const Monomial& lead = dt[0].first;
  Rational lead_inv = 1 / dt[0].second;
  std::vector<Term> q;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> heap;
  heap.push({pt[0].first, kDividend, 0});
  Rational acc, prod;
  while (!heap.empty()) {
    Monomial m = heap.top().m;
    acc = 0;
    while (!heap.empty() && heap.top().m == m) {
      HeapEntry e = heap.top();
      heap.pop();
      if (e.i == kDividend) {
        acc += pt[e.j].second;
        if (e.j + 1 < pt.size()) heap.push({pt[e.j + 1].first, kDividend, e.j + 1});
      } else {
        mpq_mul(prod.get_mpq_t(), q[e.j].second.get_mpq_t(), dt[e.i].second.get_mpq_t());
        acc -= prod;
        if (e.i + 1 < dt.size()) heap.push({q[e.j].first * dt[e.i + 1].first, e.i + 1, e.j});
      }
    }
    if (acc == 0) continue;
    if (!divides(lead, m)) return std::nullopt;
    q.emplace_back(quotient(m, lead), acc * lead_inv);
    heap.push({q.back().first * dt[1].first, 1, q.size() - 1});
  }
  return Polynomial::from_sorted(p.vars(), std::move(q));
}

// ---------------------------------------------------------------------------
// GCD: recursive content / primitive part with a subresultant remainder
// sequence in a chosen main variable.

namespace {

using Dense = std::vector<Polynomial>;  // coefficients by degree in the main variable

Dense to_dense(const Polynomial& p, std::size_t x) {
  Dense out(p.degree_in(x) + 1, Polynomial(p.vars()));
  std::vector<std::vector<Term>> buckets(out.size());
  for (const auto& [m, c] : p.terms()) {
    Monomial r = m;
    r.exp[x] = 0;
    r.deg -= m.exp[x];
    buckets[m.exp[x]].emplace_back(r, c);
  }
  // Removing x from a grevlex-sorted list need not preserve the order.
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = Polynomial(p.vars(), std::move(buckets[k]));
  return out;
}

Polynomial from_dense(const Dense& a, std::size_t x, const VarTablePtr& vars) {
  std::vector<Term> terms;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (const auto& [m, c] : a[k].terms()) {
      Monomial r = m;
      r.exp[x] = static_cast<std::uint16_t>(k);
      r.deg += static_cast<std::uint32_t>(k);
      terms.emplace_back(r, c);
    }
  return Polynomial(vars, std::move(terms));
}

void trim(Dense& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

Polynomial must_divide(const Polynomial& p, const Polynomial& d) {
  auto q = divide_exact(p, d);
  if (!q) throw Error("internal: expected exact division failed");
  return *q;
}

Dense pseudo_remainder(Dense a, const Dense& b) {
  const std::size_t db = b.size() - 1;
  const Polynomial& lb = b.back();
  int e = static_cast<int>(a.size()) - static_cast<int>(db);
  while (!a.empty() && a.size() - 1 >= db) {
    std::size_t k = a.size() - 1 - db;
    Polynomial la = a.back();
    for (std::size_t i = 0; i + 1 < a.size(); ++i) a[i] = a[i] * lb;
    for (std::size_t i = 0; i < db; ++i) a[i + k] -= la * b[i];
    a.pop_back();
    trim(a);
    --e;
  }
  if (e > 0 && !a.empty()) {
    Polynomial f = lb.pow(static_cast<unsigned>(e));
    for (auto& c : a) c = c * f;
  }
  return a;
}

Polynomial gcd_impl(const Polynomial& p, const Polynomial& q);

Polynomial content_in(const Dense& a) {
  Polynomial g(a.front().vars());
  for (const auto& c : a) {
    if (c.is_zero()) continue;
    g = gcd_impl(g, c);
    if (g.is_constant() && !g.is_zero()) break;
  }
  return g;
}

Monomial monomial_content(const Polynomial& p) {
  Monomial g = p.terms().front().first;
  for (const auto& t : p.terms()) g = gcd(g, t.first);
  return g;
}

Polynomial gcd_no_monomial(const Polynomial& p, const Polynomial& q) {
  const auto& vars = p.vars();
  Polynomial one = Polynomial::constant(vars, 1);
  if (p.is_constant() || q.is_constant()) return one;
  if (p.size() >= q.size() && divide_exact(p, q)) return normalize(q);
  if (q.size() >= p.size() && divide_exact(q, p)) return normalize(p);

  std::optional<std::size_t> only_p, only_q, main;
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  for (std::size_t v = 0; v < vars->size(); ++v) {
    std::uint32_t dp = p.degree_in(v), dq = q.degree_in(v);
    if (dp && !dq && !only_p) only_p = v;
    if (dq && !dp && !only_q) only_q = v;
    if (dp && dq && std::max(dp, dq) < best) {
      best = std::max(dp, dq);
      main = v;
    }
  }
  if (!main) return one;
  if (only_p) return gcd_impl(content_in(to_dense(p, *only_p)), q);
  if (only_q) return gcd_impl(p, content_in(to_dense(q, *only_q)));

  std::size_t x = *main;
  Dense a = to_dense(p, x), b = to_dense(q, x);
  Polynomial ca = content_in(a), cb = content_in(b);
  for (auto& c : a) c = must_divide(c, ca);
  for (auto& c : b) c = must_divide(c, cb);
  Polynomial c = gcd_impl(ca, cb);
  if (a.size() < b.size()) std::swap(a, b);

  Polynomial g = one, h = one;
  while (true) {
    std::size_t delta = a.size() - b.size();
    Dense r = pseudo_remainder(a, b);
    if (r.empty()) break;
    if (r.size() == 1) {
      b = Dense{one};
      break;
    }
    a = std::move(b);
    Polynomial divisor = g * h.pow(static_cast<unsigned>(delta));
    for (auto& coeff : r) coeff = must_divide(coeff, divisor);
    b = std::move(r);
    g = a.back();
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = g;
    } else {
      h = must_divide(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
    }
  }
  Polynomial cbb = content_in(b);
  for (auto& coeff : b) coeff = must_divide(coeff, cbb);
  return normalize(c * from_dense(b, x, vars));
}

Polynomial gcd_impl(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero()) return normalize(q);
  if (q.is_zero()) return normalize(p);
  const auto& vars = p.vars();
  if (p.is_constant() || q.is_constant()) return Polynomial::constant(vars, 1);
  Monomial mp = monomial_content(p), mq = monomial_content(q);
  Monomial mg = gcd(mp, mq);
  Polynomial pp = p, qq = q;
  if (!mp.is_one()) pp = *divide_exact(p, Polynomial::monomial(vars, mp, 1));
  if (!mq.is_one()) qq = *divide_exact(q, Polynomial::monomial(vars, mq, 1));
  Polynomial g = gcd_no_monomial(pp, qq);
  if (!mg.is_one()) g = g.times_monomial(mg, 1);
  return normalize(g);
}

}  // namespace

Polynomial gcd(const Polynomial& p, const Polynomial& q) {
  if (!p.is_zero() && !q.is_zero()) check_same(p, q);
  return gcd_impl(p, q);
}

// ---------------------------------------------------------------------------
// Evaluation

Rational evaluate(const Polynomial& p, std::span<const Rational> point) {
  Rational total = 0;
  if (p.is_zero()) return total;
  if (point.size() < p.vars()->size()) throw DimensionError("evaluation point too short");
  Rational term, pw;
  for (const auto& [m, c] : p.terms()) {
    term = c;
    for (std::size_t i = 0; i < kMaxVars && term != 0; ++i) {
      if (!m.exp[i]) continue;
      mpz_pow_ui(pw.get_num_mpz_t(), point[i].get_num_mpz_t(), m.exp[i]);
      mpz_pow_ui(pw.get_den_mpz_t(), point[i].get_den_mpz_t(), m.exp[i]);
      term *= pw;
    }
    total += term;
  }
  return total;
}

Polynomial specialize(const Polynomial& p, std::span<const std::pair<std::size_t, Rational>> values) {
  std::vector<Term> out;
  out.reserve(p.size());
  Rational pw;
  for (const auto& [m, c] : p.terms()) {
    Monomial r = m;
    Rational coeff = c;
    for (const auto& [var, val] : values) {
      if (!m.exp[var]) continue;
      mpz_pow_ui(pw.get_num_mpz_t(), val.get_num_mpz_t(), m.exp[var]);
      mpz_pow_ui(pw.get_den_mpz_t(), val.get_den_mpz_t(), m.exp[var]);
      coeff *= pw;
      r.deg -= r.exp[var];
      r.exp[var] = 0;
    }
    if (coeff != 0) out.emplace_back(r, coeff);
  }
  return Polynomial(p.vars(), std::move(out));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(const VarTablePtr& vars, std::string_view s) : vars_(vars), s_(s) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  const VarTablePtr& vars_;
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    bool neg = false;
    skip();
    if (eat('-')) neg = true;
    else eat('+');
    Polynomial acc = term();
    if (neg) acc = -acc;
    while (true) {
      skip();
      if (eat('+')) acc += term();
      else if (eat('-')) acc -= term();
      else break;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }

  unsigned integer_exponent() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected exponent");
    return static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start))));
  }

  Polynomial factor() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    Polynomial base(vars_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      base = expr();
      if (!eat(')')) fail("expected ')'");
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string num(s_.substr(start, pos_ - start));
      Rational value(num);
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        std::size_t ds = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (ds == pos_) fail("expected denominator");
        Integer den(std::string(s_.substr(ds, pos_ - ds)));
        if (den == 0) fail("zero denominator");
        value = Rational(Integer(num), den);
        value.canonicalize();
      }
      base = Polynomial::constant(vars_, value);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      auto name = s_.substr(start, pos_ - start);
      auto idx = vars_->find(name);
      if (!idx) fail("unknown variable '" + std::string(name) + "'");
      base = Polynomial::variable(vars_, *idx);
    } else {
      fail("unexpected character");
    }
    if (eat('^')) base = base.pow(integer_exponent());
    return base;
  }
};

}  // namespace

Polynomial Polynomial::parse(VarTablePtr vars, std::string_view text) {
  Parser parser(vars, text);
  return parser.parse();
}

Rational parse_rational(std::string_view text) {
  auto vars = make_vars({});
  Polynomial p = Polynomial::parse(vars, text);
  return p.constant_value();
}

// ---------------------------------------------------------------------------
// Matrices

PolyMatrix::PolyMatrix(VarTablePtr vars, std::size_t rows, std::size_t cols)
    : vars_(std::move(vars)), rows_(rows), cols_(cols), data_(rows * cols, Polynomial(vars_)) {}

PolyMatrix PolyMatrix::identity(VarTablePtr vars, std::size_t n) {
  PolyMatrix m(vars, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Polynomial::constant(vars, 1);
  return m;
}

PolyMatrix PolyMatrix::symmetric(VarTablePtr vars, std::string_view prefix, std::size_t n) {
  PolyMatrix m(vars, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      std::string name = std::string(prefix) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
      m(i, j) = Polynomial::variable(vars, name);
      m(j, i) = m(i, j);
    }
  return m;
}

PolyMatrix PolyMatrix::submatrix(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
  PolyMatrix out(vars_, rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (rows[i] >= rows_ || cols[j] >= cols_) throw DimensionError("submatrix index out of range");
      out(i, j) = (*this)(rows[i], cols[j]);
    }
  return out;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix out(vars_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
  PolyMatrix out(a.vars(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Polynomial s(a.vars());
      for (std::size_t k = 0; k < a.cols(); ++k)
        if (!a(i, k).is_zero() && !b(k, j).is_zero()) s += a(i, k) * b(k, j);
      out(i, j) = std::move(s);
    }
  return out;
}

PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix sum shape mismatch");
  PolyMatrix out(a.vars(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

Polynomial cofactor_determinant(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Polynomial::constant(m.vars(), 1);
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Polynomial det(m.vars());
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 1; i < n; ++i) rows.push_back(i);
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    cols.clear();
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) cols.push_back(k);
    Polynomial sub = cofactor_determinant(m.submatrix(rows, cols));
    if (j % 2 == 0) det += m(0, j) * sub;
    else det -= m(0, j) * sub;
  }
  return det;
}

Polynomial bareiss_determinant(const PolyMatrix& input) {
  if (input.rows() != input.cols()) throw DimensionError("determinant of a non-square matrix");
  const std::size_t n = input.rows();
  if (n == 0) return Polynomial::constant(input.vars(), 1);
  PolyMatrix a = input;
  Polynomial prev = Polynomial::constant(input.vars(), 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k).is_zero()) {
      // Prefer the sparsest nonzero pivot below.
      std::optional<std::size_t> swap;
      for (std::size_t r = k + 1; r < n; ++r)
        if (!a(r, k).is_zero() && (!swap || a(r, k).size() < a(*swap, k).size())) swap = r;
      if (!swap) return Polynomial(input.vars());
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(*swap, c));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Polynomial v = a(k, k) * a(i, j);
        if (!a(i, k).is_zero() && !a(k, j).is_zero()) v -= a(i, k) * a(k, j);
        a(i, j) = must_divide(v, prev);
      }
      a(i, k) = Polynomial(input.vars());
    }
    prev = a(k, k);
  }
  Polynomial d = a(n - 1, n - 1);
  return negate ? -d : d;
}

Polynomial determinant(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of a non-square matrix");
  return m.rows() <= 4 ? cofactor_determinant(m) : bareiss_determinant(m);
}

Polynomial minor(const PolyMatrix& m, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
  if (rows.size() != cols.size()) throw DimensionError("minor: row and column sets differ in size");
  if (rows.empty()) return Polynomial::constant(m.vars(), 1);
  return determinant(m.submatrix(rows, cols));
}

PolyMatrix adjugate(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("adjugate of a non-square matrix");
  const std::size_t n = m.rows();
  PolyMatrix adj(m.vars(), n, n);
  if (n == 1) {
    adj(0, 0) = Polynomial::constant(m.vars(), 1);
    return adj;
  }
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      rows.clear();
      cols.clear();
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) rows.push_back(k);
        if (k != i) cols.push_back(k);
      }
      Polynomial c = determinant(m.submatrix(rows, cols));
      adj(i, j) = (i + j) % 2 == 0 ? c : -c;
    }
  return adj;
}

}  // namespace ambikit
