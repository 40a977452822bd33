#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wpfr/errors.hpp"
#include "wpfr/quadrature.hpp"

namespace wpfr {

inline constexpr double kPi = 3.14159265358979323846;

// V_{g,n}(x_1..x_n): polynomial even in every variable, degree 6g-6+2n.
class VolumePolynomial {
public:
    struct Term {
        std::vector<int> exponents;
        double coefficient;
    };

    VolumePolynomial() = default;
    VolumePolynomial(int g, int n, std::vector<Term> terms,
                     std::string provenance = "builtin")
        : g_(g), n_(n), terms_(std::move(terms)),
          provenance_(std::move(provenance)) {
        validate();
    }

    int genus() const { return g_; }
    int boundary_count() const { return n_; }
    const std::string& provenance() const { return provenance_; }
    const std::vector<Term>& terms() const { return terms_; }

    double operator()(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != n_)
            throw domain_error("VolumePolynomial: expected " +
                               std::to_string(n_) + " lengths");
        double acc = 0.0;
        for (const auto& t : terms_) {
            double m = t.coefficient;
            for (int i = 0; i < n_; ++i)
                m *= std::pow(x[static_cast<std::size_t>(i)],
                              t.exponents[static_cast<std::size_t>(i)]);
            acc += m;
        }
        return acc;
    }

    double at_zero() const {
        for (const auto& t : terms_) {
            bool constant = true;
            for (int e : t.exponents) constant &= e == 0;
            if (constant) return t.coefficient;
        }
        return 0.0;
    }

private:
    void validate() const {
        const int degree_cap = 6 * g_ - 6 + 2 * n_;
        for (const auto& t : terms_) {
            if (static_cast<int>(t.exponents.size()) != n_)
                throw data_error("volume term arity mismatch for (" +
                                 std::to_string(g_) + "," + std::to_string(n_) + ")");
            int total = 0;
            for (int e : t.exponents) {
                if (e < 0 || e % 2 != 0)
                    throw data_error("volume term with odd or negative exponent in (" +
                                     std::to_string(g_) + "," + std::to_string(n_) + ")");
                total += e;
            }
            if (total > degree_cap)
                throw data_error("volume term degree over 6g-6+2n in (" +
                                 std::to_string(g_) + "," + std::to_string(n_) + ")");
        }
        if (!(at_zero() > 0.0))
            throw data_error("volume polynomial must be positive at 0 for (" +
                             std::to_string(g_) + "," + std::to_string(n_) + ")");
    }

    int g_ = 0, n_ = 0;
    std::vector<Term> terms_;
    std::string provenance_;
};

// Table of volume polynomials keyed by signature. V_{0,3} = 1 and
// V_{1,1}(x) = pi^2/12 + x^2/48 are built in and cannot be overridden.
class VolumeTable {
public:
    VolumeTable() {
        insert_builtin(VolumePolynomial(0, 3, {{{0, 0, 0}, 1.0}}));
        insert_builtin(VolumePolynomial(
            1, 1, {{{0}, kPi * kPi / 12.0}, {{2}, 1.0 / 48.0}}));
    }

    bool contains(int g, int n) const { return table_.count({g, n}) > 0; }

    const VolumePolynomial& get(int g, int n) const {
        auto it = table_.find({g, n});
        if (it == table_.end())
            throw data_error("volume table: missing entry V_{" +
                             std::to_string(g) + "," + std::to_string(n) + "}");
        return it->second;
    }

    std::vector<std::pair<int, int>> signatures() const {
        std::vector<std::pair<int, int>> out;
        for (const auto& kv : table_) out.push_back(kv.first);
        return out;
    }

    void insert(VolumePolynomial v) {
        const std::pair<int, int> key{v.genus(), v.boundary_count()};
        if (builtin_.count(key))
            throw data_error("volume table: built-in entry V_{" +
                             std::to_string(key.first) + "," +
                             std::to_string(key.second) + "} is immutable");
        table_[key] = std::move(v);
    }

    // File format, one entry per line:
    //   g n : e1,...,en=coeff ; e1,...,en=coeff ; ...
    // n = 0 entries use a single "=coeff" term. Coefficients are decimal
    // or rational p/q. '#' starts a comment.
    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw data_error("volume table: cannot open " + path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            try {
                insert(parse_entry(line));
            } catch (const data_error& e) {
                throw data_error(path + ":" + std::to_string(lineno) + ": " +
                                 e.what());
            }
        }
    }

private:
    static double parse_coeff(const std::string& s) {
        const auto slash = s.find('/');
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const double v = std::stod(s, &used);
            if (used != s.size()) throw data_error("bad coefficient '" + s + "'");
            return v;
        }
        const double num = std::stod(s.substr(0, slash));
        const double den = std::stod(s.substr(slash + 1));
        if (den == 0.0) throw data_error("zero denominator in '" + s + "'");
        return num / den;
    }

    static std::string strip(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    static VolumePolynomial parse_entry(const std::string& line) {
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw data_error("malformed entry (missing ':')");
        std::istringstream head(line.substr(0, colon));
        int g = -1, n = -1;
        head >> g >> n;
        if (g < 0 || n < 0) throw data_error("malformed signature");
        std::vector<VolumePolynomial::Term> terms;
        std::string body = line.substr(colon + 1);
        std::istringstream ts(body);
        std::string term;
        while (std::getline(ts, term, ';')) {
            term = strip(term);
            if (term.empty()) continue;
            const auto eq = term.find('=');
            if (eq == std::string::npos)
                throw data_error("malformed term '" + term + "'");
            const std::string lhs = strip(term.substr(0, eq));
            const std::string rhs = strip(term.substr(eq + 1));
            VolumePolynomial::Term t;
            if (!lhs.empty()) {
                std::istringstream es(lhs);
                std::string tok;
                while (std::getline(es, tok, ','))
                    t.exponents.push_back(std::stoi(strip(tok)));
            }
            if (static_cast<int>(t.exponents.size()) != n)
                throw data_error("term arity mismatch in '" + term + "'");
            t.coefficient = parse_coeff(rhs);
            terms.push_back(std::move(t));
        }
        if (terms.empty()) throw data_error("entry with no terms");
        return VolumePolynomial(g, n, std::move(terms), "table");
    }

    void insert_builtin(VolumePolynomial v) {
        const std::pair<int, int> key{v.genus(), v.boundary_count()};
        builtin_.insert(key);
        table_[key] = std::move(v);
    }

    std::map<std::pair<int, int>, VolumePolynomial> table_;
    std::set<std::pair<int, int>> builtin_;
};

inline double volume(const VolumeTable& table, int g, int n,
                     const std::vector<double>& x) {
    for (double xi : x)
        if (xi < 0.0) throw domain_error("volume: lengths must be nonnegative");
    return table.get(g, n)(x);
}

// prod_i (2/x_i) sinh(x_i/2); the x -> 0 limit of each factor is 1.
inline double first_order_ratio(const std::vector<double>& x) {
    double acc = 1.0;
    for (double xi : x) {
        if (xi < 0.0)
            throw domain_error("first_order_ratio: lengths must be nonnegative");
        if (xi < 1e-4) {
            const double t = 0.5 * xi;
            acc *= 1.0 + t * t / 6.0 + t * t * t * t / 120.0;
        } else {
            acc *= 2.0 / xi * std::sinh(0.5 * xi);
        }
    }
    return acc;
}

// helper functions of the second-order volume expansion
inline double vol_f1(double x) { return 2.0 * std::sinh(0.5 * x); }
inline double vol_f2(double x) { return 2.0 * x * x * std::sinh(0.5 * x); }
inline double vol_f3(double x) { return x * std::cosh(0.5 * x); }
inline double vol_f4(double x) { return x; }

namespace detail {

inline double g1(double x) {  // f1(x)/x
    if (x < 1e-4) {
        const double t = 0.5 * x;
        return 1.0 + t * t / 6.0;
    }
    return vol_f1(x) / x;
}
inline double g_combo(double x) {  // (f3+f4-f2/16-2f1)(x)/x
    if (x < 1e-3) return -x * x / 48.0;
    return (vol_f3(x) + vol_f4(x) - vol_f2(x) / 16.0 - 2.0 * vol_f1(x)) / x;
}

}  // namespace detail

// Second-order approximation of V_{g,n}(x)/V_{g,n}:
//   8 r1 sum_i [f3+f4-f2/16-2f1](x_i) prod_{k!=i} f1(x_k)
// - 4 r2 sum_{i<j} [f3 f3 + f4 f4 - 2 f1 f1](x_i,x_j) prod f1
// + prod f1(x_k),   all divided by prod x_i,
// with r1 = V_{g-1,n+1}/V_{g,n} and r2 = V_{g,n-1}/V_{g,n} supplied by the
// caller (they are asymptotic-series data, not computed constants).
inline double second_order_expansion(int g, int n, const std::vector<double>& x,
                                     double ratio_gm1np1, double ratio_gnm1) {
    if (n < 1) throw domain_error("second_order_expansion: n must be >= 1");
    if (static_cast<int>(x.size()) != n)
        throw domain_error("second_order_expansion: dimension mismatch");
    (void)g;
    const std::size_t m = x.size();
    std::vector<double> g1v(m);
    for (std::size_t i = 0; i < m; ++i) g1v[i] = detail::g1(x[i]);

    auto prod_except = [&](std::size_t skip1, std::size_t skip2) {
        double p = 1.0;
        for (std::size_t k = 0; k < m; ++k)
            if (k != skip1 && k != skip2) p *= g1v[k];
        return p;
    };

    double term1 = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        term1 += detail::g_combo(x[i]) * prod_except(i, i);

    double term2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double hij = std::cosh(0.5 * x[i]) * std::cosh(0.5 * x[j]) +
                               1.0 - 2.0 * g1v[i] * g1v[j];
            term2 += hij * prod_except(i, j);
        }
    }

    double prod_all = 1.0;
    for (double v : g1v) prod_all *= v;

    return 8.0 * ratio_gm1np1 * term1 - 4.0 * ratio_gnm1 * term2 + prod_all;
}

// ---------------------------------------------------------------------------
// Bound verification

struct BoundCheckReport {
    int g = 0, n = 0;
    std::size_t samples = 0;
    bool power_bound_ok = true;   // V(x) <= V(0)(1+max x)^{6g-6+2n}
    bool exp_bound_ok = true;     // V(x) <= V(0) e^{sum x / 2}
    std::vector<double> witness_power;
    std::vector<double> witness_exp;
};

inline BoundCheckReport bound_checks(const VolumeTable& table, int g, int n,
                                     std::size_t samples = 200,
                                     std::uint64_t seed = 12345) {
    const VolumePolynomial& v = table.get(g, n);
    BoundCheckReport rep;
    rep.g = g;
    rep.n = n;
    rep.samples = samples;
    const double v0 = v.at_zero();
    const int deg = 6 * g - 6 + 2 * n;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 10.0);
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<double> x(static_cast<std::size_t>(n));
        double mx = 0.0, sum = 0.0;
        for (double& xi : x) {
            xi = uni(rng);
            mx = std::max(mx, xi);
            sum += xi;
        }
        const double val = v(x);
        if (val > v0 * std::pow(1.0 + mx, deg) * (1.0 + 1e-12)) {
            rep.power_bound_ok = false;
            rep.witness_power = x;
        }
        if (val > v0 * std::exp(0.5 * sum) * (1.0 + 1e-12)) {
            rep.exp_bound_ok = false;
            rep.witness_exp = x;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Trace-method parameter schedule, row K of the order/length-scale table:
// row 0 is the leading order (remainder after one term).
struct Schedule {
    double L_multiplier;  // L = multiplier * log g
    double alpha;
    double gap;
};

inline Schedule table_values_schedule(int K) {
    if (K < 0) throw domain_error("table_values_schedule: K must be >= 0");
    const double m = static_cast<double>(K) + 2.0;
    return Schedule{2.0 * m, 1.0 / (2.0 * m), 0.25 - 0.25 / (m * m)};
}

// ---------------------------------------------------------------------------
// Expected number of short one-holed-torus boundaries, main term:
//   ratio * int_0^a (pi^2/6 + x^2/12) sinh(x/2) dx,
// with the integrand sandwiched between x/2 and x on (0, a0].
inline double tor_expectation_integrand(double x) {
    return (kPi * kPi / 6.0 + x * x / 12.0) * std::sinh(0.5 * x);
}

inline double tor_expectation_main_term(double a, double ratio_gm11_over_vg) {
    if (a < 0.0) throw domain_error("tor_expectation_main_term: a must be >= 0");
    if (a == 0.0) return 0.0;
    QuadOptions q;
    q.abs_tol = 1e-13;
    q.rel_tol = 1e-11;
    return ratio_gm11_over_vg *
           integrate_or_throw(tor_expectation_integrand, 0.0, a, q,
                              "torus expectation");
}

// Largest a0 with x/2 <= (pi^2/6 + x^2/12) sinh(x/2) <= x on (0, a0].
// The lower inequality holds for all x >= 0 (pi^2/12 > 1/2); the upper one
// fails past a unique crossing, located by scan + bisection.
inline double tor_sandwich_a0() {
    auto upper_ok = [](double x) {
        return tor_expectation_integrand(x) <= x;
    };
    double lo = 1.0, hi = 2.0;
    while (!upper_ok(lo)) lo *= 0.5;
    while (upper_ok(hi)) hi += 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (upper_ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace wpfr
