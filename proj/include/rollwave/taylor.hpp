#pragma once

#include <cstddef>
#include <vector>

namespace rollwave {

// Power series in z truncated after the z^(n-1) term.
template <class T>
class Taylor {
 public:
  Taylor() = default;
  explicit Taylor(std::size_t n, T c0 = T{}) : c_(n, T{}) {
    if (n) c_[0] = c0;
  }
  static Taylor variable(std::size_t n, T c0) {
    Taylor t(n, c0);
    if (n > 1) t.c_[1] = T{1};
    return t;
  }

  std::size_t size() const { return c_.size(); }
  T& operator[](std::size_t i) { return c_[i]; }
  const T& operator[](std::size_t i) const { return c_[i]; }
  const std::vector<T>& coeffs() const { return c_; }

  Taylor& operator+=(const Taylor& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Taylor& operator*=(T s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Taylor& operator+=(T s) {
    c_[0] += s;
    return *this;
  }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator*(Taylor a, T s) { return a *= s; }
  friend Taylor operator*(T s, Taylor a) { return a *= s; }
  friend Taylor operator+(Taylor a, T s) { return a += s; }
  friend Taylor operator+(T s, Taylor a) { return a += s; }
  friend Taylor operator-(Taylor a) { return a *= T{-1}; }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    const std::size_t n = a.size();
    Taylor r(n);
    for (std::size_t i = 0; i < n; ++i) {
      T s{};
      for (std::size_t j = 0; j <= i; ++j) s += a.c_[j] * b.c_[i - j];
      r.c_[i] = s;
    }
    return r;
  }

  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    const std::size_t n = a.size();
    Taylor r(n);
    for (std::size_t i = 0; i < n; ++i) {
      T s = a.c_[i];
      for (std::size_t j = 1; j <= i; ++j) s -= b.c_[j] * r.c_[i - j];
      r.c_[i] = s / b.c_[0];
    }
    return r;
  }

  // Antiderivative vanishing at z = 0.
  Taylor integral() const {
    Taylor r(c_.size());
    for (std::size_t i = 1; i < c_.size(); ++i) r.c_[i] = c_[i - 1] / T(double(i));
    return r;
  }

  // Multiplication by z.
  Taylor shift() const {
    Taylor r(c_.size());
    for (std::size_t i = 1; i < c_.size(); ++i) r.c_[i] = c_[i - 1];
    return r;
  }

  template <class U>
  auto eval(U z) const {
    decltype(T{} * z) s{};
    for (std::size_t i = c_.size(); i-- > 0;) s = s * z + c_[i];
    return s;
  }

 private:
  std::vector<T> c_;
};

}  // namespace rollwave
