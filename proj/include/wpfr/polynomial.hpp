#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "wpfr/errors.hpp"

namespace wpfr {

// Dense real polynomial, coefficient index = power. The zero polynomial is
// the empty coefficient list; its degree is reported as std::nullopt (the
// "-infinity" sentinel) rather than a numeric value.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs)
        : coeffs_(std::move(coeffs)) {
        trim();
    }
    static Polynomial constant(double c) { return Polynomial({c}); }
    static Polynomial monomial(int power, double c = 1.0) {
        std::vector<double> v(static_cast<std::size_t>(power) + 1, 0.0);
        v.back() = c;
        return Polynomial(std::move(v));
    }

    const std::vector<double>& coefficients() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    std::optional<int> degree() const {
        if (coeffs_.empty()) return std::nullopt;
        return static_cast<int>(coeffs_.size()) - 1;
    }

    double coeff(std::size_t power) const {
        return power < coeffs_.size() ? coeffs_[power] : 0.0;
    }

    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    double linf_norm() const {
        double m = 0.0;
        for (double c : coeffs_) m = std::max(m, std::fabs(c));
        return m;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return Polynomial();
        std::vector<double> d(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            d[i - 1] = coeffs_[i] * static_cast<double>(i);
        return Polynomial(std::move(d));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        return a + (b * -1.0);
    }
    friend Polynomial operator*(const Polynomial& a, double s) {
        std::vector<double> c = a.coeffs_;
        for (double& x : c) x *= s;
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(double s, const Polynomial& a) { return a * s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(c));
    }

    // p(x) -> p(x + shift), exact binomial expansion.
    Polynomial shifted(double shift) const {
        if (is_zero()) return Polynomial();
        Polynomial acc;
        Polynomial base = Polynomial({shift, 1.0});
        Polynomial pw = Polynomial::constant(1.0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            acc = acc + pw * coeffs_[i];
            pw = pw * base;
        }
        return acc;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
    }
    std::vector<double> coeffs_;
};

// Finite convolution (p1 * p2)(x) = int_0^x p1(t) p2(x-t) dt, computed
// termwise from int_0^x t^a (x-t)^b dt = x^{a+b+1} a! b! / (a+b+1)!.
inline Polynomial poly_convolve(const Polynomial& p1, const Polynomial& p2) {
    if (p1.is_zero() || p2.is_zero()) return Polynomial();
    const auto& a = p1.coefficients();
    const auto& b = p2.coefficients();
    std::vector<double> c(a.size() + b.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            // beta = i! j! / (i+j+1)!
            double beta = 1.0;
            for (std::size_t k = 1; k <= j; ++k)
                beta *= static_cast<double>(k) / static_cast<double>(i + k);
            beta /= static_cast<double>(i + j + 1);
            c[i + j + 1] += a[i] * b[j] * beta;
        }
    }
    return Polynomial(std::move(c));
}

}  // namespace wpfr
