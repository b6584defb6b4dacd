#include "hyperam/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hyperam {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double max_abs_diff(const HNumber& a, const HNumber& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

HNumber unit(std::size_t dim, std::size_t k) {
  HNumber u(dim);
  u[k] = 1.0;
  return u;
}

// Unit tables are encoded per (mu, nu) as sign * (k + 1), k being the index
// of the single resulting basis element (0 = real unit).
Algebra from_unit_table(std::string name, std::size_t dim, const int* enc) {
  const std::size_t n = dim - 1;
  std::vector<double> table(n * n * dim, 0.0);
  for (std::size_t mu = 0; mu < n; ++mu) {
    for (std::size_t nu = 0; nu < n; ++nu) {
      const int v = enc[mu * n + nu];
      const std::size_t k = static_cast<std::size_t>(std::abs(v)) - 1;
      table[(mu * n + nu) * dim + k] = v > 0 ? 1.0 : -1.0;
    }
  }
  return Algebra(std::move(name), dim, std::move(table));
}

}  // namespace

HNumber HVector::component(std::size_t i) const {
  HNumber v(dim);
  for (std::size_t j = 0; j < dim; ++j) v[j] = flat[i * dim + j];
  return v;
}

void HVector::set_component(std::size_t i, const HNumber& v) {
  require(v.dim() == dim, "component dimension mismatch");
  for (std::size_t j = 0; j < dim; ++j) flat[i * dim + j] = v[j];
}

const char* to_string(Involution inv) {
  return inv == Involution::natural ? "natural" : "trivial";
}

Involution involution_from_string(const std::string& s) {
  if (s == "natural") return Involution::natural;
  if (s == "trivial") return Involution::trivial;
  throw std::invalid_argument("unknown involution: " + s);
}

Algebra::Algebra(std::string name, std::size_t dim, std::vector<double> table)
    : name_(std::move(name)), dim_(dim), table_(std::move(table)) {
  require(dim_ >= 1, "algebra dimension must be positive");
  const std::size_t n = dim_ - 1;
  require(table_.size() == n * n * dim_, "multiplication table has wrong shape");
  for (double v : table_) require(std::isfinite(v), "multiplication table entry not finite");
}

Algebra Algebra::reals() { return Algebra("reals", 1, {}); }

Algebra Algebra::complex_numbers() {
  static const int enc[1] = {-1};  // i i = -1
  return from_unit_table("complex", 2, enc);
}

Algebra Algebra::hyperbolic() {
  static const int enc[1] = {+1};  // i i = +1
  return from_unit_table("hyperbolic", 2, enc);
}

Algebra Algebra::quaternions() {
  static const int enc[9] = {
      -1, +4, -3,  // i: ii=-1, ij=k,  ik=-j
      -4, -1, +2,  // j: ji=-k, jj=-1, jk=i
      +3, -2, -1,  // k: ki=j,  kj=-i, kk=-1
  };
  return from_unit_table("quaternion", 4, enc);
}

Algebra Algebra::tessarines() {
  static const int enc[9] = {
      -1, +4, -3,  // ii=-1, ij=k,  ik=-j
      +4, +1, +2,  // ji=k,  jj=+1, jk=i
      -3, +2, -1,  // ki=-j, kj=i,  kk=-1
  };
  return from_unit_table("tessarine", 4, enc);
}

Algebra Algebra::octonions() {
  // Frozen output of cayley_dickson_double applied to the quaternions;
  // test_algebra asserts the equality.
  static const int enc[49] = {
      -1, +4, -3, +6, -5, -8, +7,
      -4, -1, +2, +7, +8, -5, -6,
      +3, -2, -1, +8, -7, +6, -5,
      -6, -7, -8, -1, +2, +3, +4,
      +5, -8, +7, -2, -1, -4, +3,
      +8, +5, -6, -3, +4, -1, -2,
      -7, +6, +5, -4, -3, +2, -1,
  };
  return from_unit_table("octonion", 8, enc);
}

std::optional<Algebra> Algebra::builtin(const std::string& name) {
  if (name == "reals" || name == "bipolar") return reals();
  if (name == "complex") return complex_numbers();
  if (name == "hyperbolic") return hyperbolic();
  if (name == "quaternion") return quaternions();
  if (name == "tessarine") return tessarines();
  if (name == "octonion") return octonions();
  return std::nullopt;
}

std::string Algebra::to_text() const {
  std::ostringstream out;
  out << "name " << name_ << "\n";
  out << "dim " << dim_ << "\n";
  out << "table\n";
  const std::size_t n = dim_ - 1;
  for (std::size_t mu = 1; mu <= n; ++mu)
    for (std::size_t nu = 1; nu <= n; ++nu)
      for (std::size_t k = 0; k < dim_; ++k) {
        const double v = table(mu, nu, k);
        if (v != 0.0) out << mu << " " << nu << " " << k << " " << v << "\n";
      }
  return out.str();
}

Algebra Algebra::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string tok, name;
  std::size_t dim = 0;
  require(bool(in >> tok) && tok == "name", "algebra text: expected 'name'");
  require(bool(in >> name), "algebra text: missing name value");
  require(bool(in >> tok) && tok == "dim", "algebra text: expected 'dim'");
  require(bool(in >> dim) && dim >= 1, "algebra text: bad dim");
  require(bool(in >> tok) && tok == "table", "algebra text: expected 'table'");
  const std::size_t n = dim - 1;
  std::vector<double> table(n * n * dim, 0.0);
  std::size_t mu = 0;
  while (in >> mu) {
    std::size_t nu = 0, k = 0;
    double v = 0.0;
    require(bool(in >> nu >> k >> v), "algebra text: truncated table entry");
    require(mu >= 1 && mu <= n && nu >= 1 && nu <= n && k < dim,
            "algebra text: table index out of range");
    table[((mu - 1) * n + (nu - 1)) * dim + k] = v;
  }
  return Algebra(name, dim, std::move(table));
}

HNumber add(const HNumber& p, const HNumber& q) {
  require(p.dim() == q.dim(), "add: dimension mismatch");
  HNumber r(p.dim());
  for (std::size_t j = 0; j < p.dim(); ++j) r[j] = p[j] + q[j];
  return r;
}

HNumber sub(const HNumber& p, const HNumber& q) {
  require(p.dim() == q.dim(), "sub: dimension mismatch");
  HNumber r(p.dim());
  for (std::size_t j = 0; j < p.dim(); ++j) r[j] = p[j] - q[j];
  return r;
}

HNumber scaled(const HNumber& p, double a) {
  HNumber r(p.dim());
  for (std::size_t j = 0; j < p.dim(); ++j) r[j] = a * p[j];
  return r;
}

HNumber mul(const Algebra& alg, const HNumber& p, const HNumber& q) {
  const std::size_t dim = alg.dim();
  require(p.dim() == dim && q.dim() == dim, "mul: dimension mismatch");
  HNumber r(dim);
  r[0] = p[0] * q[0];
  for (std::size_t k = 1; k < dim; ++k) r[k] = p[0] * q[k] + p[k] * q[0];
  for (std::size_t mu = 1; mu < dim; ++mu) {
    if (p[mu] == 0.0) continue;
    for (std::size_t nu = 1; nu < dim; ++nu) {
      if (q[nu] == 0.0) continue;
      const double w = p[mu] * q[nu];
      for (std::size_t k = 0; k < dim; ++k) {
        const double a = alg.table(mu, nu, k);
        if (a != 0.0) r[k] += w * a;
      }
    }
  }
  return r;
}

HNumber involute(Involution inv, const HNumber& p) {
  if (inv == Involution::trivial) return p;
  HNumber r = p;
  for (std::size_t j = 1; j < r.dim(); ++j) r[j] = -r[j];
  return r;
}

double real_of_product(const Algebra& alg, const HNumber& p, const HNumber& q) {
  const std::size_t dim = alg.dim();
  require(p.dim() == dim && q.dim() == dim, "real_of_product: dimension mismatch");
  double r = p[0] * q[0];
  for (std::size_t mu = 1; mu < dim; ++mu) {
    if (p[mu] == 0.0) continue;
    for (std::size_t nu = 1; nu < dim; ++nu) {
      const double a = alg.table(mu, nu, 0);
      if (a != 0.0) r += p[mu] * q[nu] * a;
    }
  }
  return r;
}

double bilinear(const Algebra& alg, Involution inv, const HNumber& p, const HNumber& q) {
  return real_of_product(alg, involute(inv, p), q);
}

std::optional<std::vector<double>> diagonal_metric(const Algebra& alg, Involution inv) {
  const std::size_t dim = alg.dim();
  std::vector<double> g(dim, 0.0);
  g[0] = 1.0;
  for (std::size_t mu = 1; mu < dim; ++mu) {
    for (std::size_t nu = 1; nu < dim; ++nu) {
      const double a = alg.table(mu, nu, 0);
      if (mu != nu && a != 0.0) return std::nullopt;
      if (mu == nu) g[mu] = (inv == Involution::natural ? -a : a);
    }
  }
  return g;
}

Algebra cayley_dickson_double(const Algebra& alg) {
  const std::size_t d = alg.dim();
  require((d & (d - 1)) == 0, "cayley_dickson_double: dimension must be a power of two");
  const std::size_t dim = 2 * d;
  const std::size_t n = dim - 1;

  // Unit m of the doubled algebra as a pair (x, y) over the base algebra.
  auto as_pair = [&](std::size_t m) {
    std::pair<HNumber, HNumber> p{HNumber(d), HNumber(d)};
    if (m < d)
      p.first[m] = 1.0;
    else
      p.second[m - d] = 1.0;
    return p;
  };
  auto conj = [&](const HNumber& x) { return involute(Involution::natural, x); };

  std::vector<double> table(n * n * dim, 0.0);
  for (std::size_t mu = 1; mu <= n; ++mu) {
    for (std::size_t nu = 1; nu <= n; ++nu) {
      const auto [a, b] = as_pair(mu);
      const auto [c, e] = as_pair(nu);
      // (a,b)(c,e) = (ac - conj(e) b, e a + b conj(c))
      const HNumber first = sub(mul(alg, a, c), mul(alg, conj(e), b));
      const HNumber second = add(mul(alg, e, a), mul(alg, b, conj(c)));
      for (std::size_t k = 0; k < d; ++k) {
        table[((mu - 1) * n + (nu - 1)) * dim + k] = first[k];
        table[((mu - 1) * n + (nu - 1)) * dim + d + k] = second[k];
      }
    }
  }
  return Algebra("cd(" + alg.name() + ")", dim, std::move(table));
}

InvolutionReport check_reverse_involution(const Algebra& alg, Involution inv,
                                          std::size_t samples, std::uint64_t seed) {
  require(samples >= 1, "check_reverse_involution: sample_count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  auto random_number = [&] {
    HNumber p(alg.dim());
    for (std::size_t j = 0; j < alg.dim(); ++j) p[j] = coeff(rng);
    return p;
  };

  InvolutionReport rep;
  rep.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const HNumber p = random_number();
    const HNumber q = random_number();
    const double a = coeff(rng);
    rep.max_involution = std::max(rep.max_involution, max_abs_diff(involute(inv, involute(inv, p)), p));
    rep.max_antihom = std::max(
        rep.max_antihom,
        max_abs_diff(involute(inv, mul(alg, p, q)),
                     mul(alg, involute(inv, q), involute(inv, p))));
    rep.max_linearity = std::max(
        rep.max_linearity,
        max_abs_diff(involute(inv, add(scaled(p, a), q)),
                     add(scaled(involute(inv, p), a), involute(inv, q))));
  }

  // Sweep unit pairs so a violation can be exhibited on exact inputs.
  double worst = 0.0;
  for (std::size_t mu = 1; mu < alg.dim(); ++mu) {
    for (std::size_t nu = 1; nu < alg.dim(); ++nu) {
      const HNumber p = unit(alg.dim(), mu);
      const HNumber q = unit(alg.dim(), nu);
      const double v = max_abs_diff(involute(inv, mul(alg, p, q)),
                                    mul(alg, involute(inv, q), involute(inv, p)));
      if (v > worst) {
        worst = v;
        rep.worst_unit_mu = mu;
        rep.worst_unit_nu = nu;
      }
    }
  }
  rep.max_antihom = std::max(rep.max_antihom, worst);
  return rep;
}

ReAhnReport check_re_ahn(const Algebra& alg, Involution inv,
                         std::size_t samples, std::uint64_t seed) {
  require(samples >= 1, "check_re_ahn: sample_count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  auto random_number = [&] {
    HNumber p(alg.dim());
    for (std::size_t j = 0; j < alg.dim(); ++j) p[j] = coeff(rng);
    return p;
  };

  ReAhnReport rep;
  rep.samples = samples;
  rep.min_self_bilinear = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const HNumber p = random_number();
    const HNumber q = random_number();
    const HNumber r = random_number();
    const double lhs = real_of_product(alg, mul(alg, p, q), r);
    const double rhs = real_of_product(alg, p, mul(alg, q, r));
    rep.max_violation = std::max(rep.max_violation, std::abs(lhs - rhs));
    rep.min_self_bilinear = std::min(rep.min_self_bilinear, bilinear(alg, inv, p, p));
  }
  return rep;
}

}  // namespace hyperam
