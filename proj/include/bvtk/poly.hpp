#pragma once

#include "bvtk/arith.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace bvtk {

/// Dense univariate polynomial, constant term first, trailing zeros trimmed.
template <typename Scalar>
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static UniPoly constant(Scalar c) { return UniPoly(std::vector<Scalar>{std::move(c)}); }

  /// c * x^k
  static UniPoly monomial(Scalar c, std::size_t k) {
    std::vector<Scalar> v(k + 1, Scalar(0));
    v[k] = std::move(c);
    return UniPoly(std::move(v));
  }

  const std::vector<Scalar>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  /// Index of the highest nonzero coefficient; nullopt stands for -infinity.
  std::optional<std::size_t> degree() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.size() - 1;
  }

  Scalar coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Scalar(0); }

  Scalar operator()(const Scalar& x) const {
    Scalar acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<Scalar> v(std::max(a.coeffs_.size(), b.coeffs_.size()), Scalar(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) v[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) v[i] += b.coeffs_[i];
    return UniPoly(std::move(v));
  }

  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    std::vector<Scalar> v(std::max(a.coeffs_.size(), b.coeffs_.size()), Scalar(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) v[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) v[i] -= b.coeffs_[i];
    return UniPoly(std::move(v));
  }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly();
    std::vector<Scalar> v(a.coeffs_.size() + b.coeffs_.size() - 1, Scalar(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return UniPoly(std::move(v));
  }

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Scalar> coeffs_;
};

using RatPoly = UniPoly<Rational>;

template <typename Scalar>
std::optional<std::size_t> poly_degree(const UniPoly<Scalar>& p) {
  return p.degree();
}

template <typename Scalar>
Scalar poly_eval(const UniPoly<Scalar>& p, const Scalar& x) {
  return p(x);
}

}  // namespace bvtk
