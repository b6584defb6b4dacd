#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hyperam {

/// A hypercomplex scalar: the coefficient tuple (p0, p1, ..., pn) over the
/// real unit and the hyperimaginary units i_1..i_n.
struct HNumber {
  std::vector<double> c;

  HNumber() = default;
  explicit HNumber(std::size_t dim) : c(dim, 0.0) {}
  HNumber(std::initializer_list<double> v) : c(v) {}

  std::size_t dim() const { return c.size(); }
  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }
  double real() const { return c.empty() ? 0.0 : c[0]; }
  bool operator==(const HNumber&) const = default;
};

/// An N-component hypercomplex vector stored component-major:
/// coefficient j of component i lives at flat[i*dim + j].
struct HVector {
  std::size_t dim = 1;
  std::vector<double> flat;

  HVector() = default;
  HVector(std::size_t n, std::size_t d) : dim(d), flat(n * d, 0.0) {}

  std::size_t size() const { return dim == 0 ? 0 : flat.size() / dim; }
  std::span<const double> component_span(std::size_t i) const {
    return {flat.data() + i * dim, dim};
  }
  std::span<double> component_span(std::size_t i) {
    return {flat.data() + i * dim, dim};
  }
  HNumber component(std::size_t i) const;
  void set_component(std::size_t i, const HNumber& v);

  bool operator==(const HVector&) const = default;
};

enum class Involution { natural, trivial };

const char* to_string(Involution inv);
Involution involution_from_string(const std::string& s);

/// A hypercomplex number system: its dimension n+1 and the multiplication
/// table i_mu i_nu = a[mu][nu][0] + a[mu][nu][1] i_1 + ... + a[mu][nu][n] i_n.
class Algebra {
 public:
  Algebra() : Algebra("reals", 1, {}) {}
  Algebra(std::string name, std::size_t dim, std::vector<double> table);

  static Algebra reals();
  static Algebra complex_numbers();
  static Algebra hyperbolic();
  static Algebra quaternions();
  static Algebra tessarines();
  static Algebra octonions();
  static std::optional<Algebra> builtin(const std::string& name);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  std::size_t imaginary_count() const { return dim_ - 1; }

  /// Table entry a_{mu nu, k}; mu, nu in 1..n, k in 0..n.
  double table(std::size_t mu, std::size_t nu, std::size_t k) const {
    const std::size_t n = dim_ - 1;
    return table_[((mu - 1) * n + (nu - 1)) * dim_ + k];
  }

  /// Same dimension and identical table entries; names are labels only.
  bool same_table(const Algebra& other) const {
    return dim_ == other.dim_ && table_ == other.table_;
  }

  std::string to_text() const;
  static Algebra from_text(const std::string& text);

 private:
  std::string name_;
  std::size_t dim_;
  std::vector<double> table_;  // (dim-1)^2 * dim entries, all finite
};

HNumber add(const HNumber& p, const HNumber& q);
HNumber sub(const HNumber& p, const HNumber& q);
HNumber scaled(const HNumber& p, double a);
HNumber mul(const Algebra& alg, const HNumber& p, const HNumber& q);
HNumber involute(Involution inv, const HNumber& p);

/// Re(pq) without materializing the full product.
double real_of_product(const Algebra& alg, const HNumber& p, const HNumber& q);

/// The symmetric bilinear form B(p,q) = Re(tau(p) q).
double bilinear(const Algebra& alg, Involution inv, const HNumber& p, const HNumber& q);

/// When every a_{mu nu, 0} with mu != nu vanishes, B reduces to a weighted
/// coefficient dot product B(p,q) = sum_j g_j p_j q_j; returns g, else empty.
/// This is the bridge from the bilinear form to the flat-array kernels.
std::optional<std::vector<double>> diagonal_metric(const Algebra& alg, Involution inv);

/// Doubles a Cayley-Dickson algebra: pairs (x,y) with conjugation
/// (x,y)~ = (x~, -y) and product chosen so that doubling the complex numbers
/// yields quaternions with i j = +k.
Algebra cayley_dickson_double(const Algebra& alg);

struct InvolutionReport {
  double max_involution = 0.0;   // |tau(tau(p)) - p|
  double max_antihom = 0.0;      // |tau(pq) - tau(q)tau(p)|
  double max_linearity = 0.0;    // |tau(a p + q) - (a tau(p) + tau(q))|
  // Worst unit pair for the anti-homomorphism identity (1-based), 0 if none.
  std::size_t worst_unit_mu = 0, worst_unit_nu = 0;
  std::size_t samples = 0;

  bool passed(double tol = 1e-10) const {
    return max_involution <= tol && max_antihom <= tol && max_linearity <= tol;
  }
};

InvolutionReport check_reverse_involution(const Algebra& alg, Involution inv,
                                          std::size_t samples, std::uint64_t seed = 1);

struct ReAhnReport {
  double max_violation = 0.0;    // |Re((pq)r - p(qr))|
  double min_self_bilinear = 0.0;
  std::size_t samples = 0;
};

ReAhnReport check_re_ahn(const Algebra& alg, Involution inv,
                         std::size_t samples, std::uint64_t seed = 1);

}  // namespace hyperam
