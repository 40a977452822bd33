#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "wpfr/errors.hpp"
#include "wpfr/pants_geom.hpp"

namespace wpfr {

// 2x2 real matrix with a det = 1 contract. Products renormalize by
// sqrt(det) once the drift exceeds 1e-12.
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    double trace() const { return a + d; }
    double det() const { return a * d - b * c; }

    Mat2 inverse() const { return Mat2{d, -b, -c, a}; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        Mat2 m{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
               x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
        const double dt = m.det();
        if (std::fabs(dt - 1.0) > 1e-12) {
            const double s = 1.0 / std::sqrt(dt);
            m.a *= s; m.b *= s; m.c *= s; m.d *= s;
        }
        return m;
    }

    friend Mat2 operator-(const Mat2& x) { return Mat2{-x.a, -x.b, -x.c, -x.d}; }
};

// translation along the axis and orthogonal jump, the two building blocks
// of the eight construction
inline Mat2 sl2_translation(double t) {
    return Mat2{std::exp(0.5 * t), 0.0, 0.0, std::exp(-0.5 * t)};
}
inline Mat2 sl2_perp(double p) {
    const double ch = std::cosh(0.5 * p), sh = std::sinh(0.5 * p);
    return Mat2{ch, sh, sh, ch};
}
// quarter turn with R^{-1} = -R; the sign is fixed so that the eight
// construction below has positive generator traces
inline Mat2 sl2_rot90() { return Mat2{0.0, -1.0, 1.0, 0.0}; }

// geodesic length of a hyperbolic class: cosh(l/2) = |tr|/2
inline double trace_to_length(double trace) {
    const double x = 0.5 * std::fabs(trace);
    if (!(x > 1.0))
        throw numeric_error("trace_to_length: non-hyperbolic trace " +
                            std::to_string(trace));
    return 2.0 * std::acosh(x);
}

// ---------------------------------------------------------------------------
// Pants representation: generators A, B with
//   tr A = 2 cosh(l1/2), tr B = 2 cosh(l2/2), tr AB = -2 cosh(l3/2).
// Gauge: A diagonal, b12 = 1; all consumed outputs are traces, which are
// gauge-invariant.
struct PantsRep {
    Mat2 A, B;
    BoundaryLengths cuffs;
    std::array<double, 3> boundary_traces;
};

inline PantsRep build_pants_rep(const BoundaryLengths& b) {
    const double a = std::exp(0.5 * b.l1);
    const double inv_a = std::exp(-0.5 * b.l1);
    if (std::fabs(a - inv_a) < 1e-12)
        throw domain_error("build_pants_rep: degenerate l1 (diagonal gauge)");
    const double tau2 = 2.0 * std::cosh(0.5 * b.l2);
    const double tau3 = -2.0 * std::cosh(0.5 * b.l3);
    // tr B = b11+b22 = tau2, tr(AB) = a b11 + b22/a = tau3, b12 = 1
    const double b11 = (tau3 - tau2 * inv_a) / (a - inv_a);
    const double b22 = tau2 - b11;
    const double b21 = b11 * b22 - 1.0;  // det B = 1
    PantsRep rep{Mat2{a, 0.0, 0.0, inv_a}, Mat2{b11, 1.0, b21, b22}, b,
                 {2.0 * std::cosh(0.5 * b.l1), tau2, -tau3}};
    return rep;
}

// A1 = a_{t1} w_p R, A2 = R^{-1} a_{t2} w_{-p}; the iterated-eight
// recursion step. tr(A_i) = 2 sinh(p/2) sinh(t_i/2).
struct EightRep {
    Mat2 A1, A2;
};

inline EightRep build_eight_rep(double t1, double t2, double p) {
    if (!(t1 > 0.0 && t2 > 0.0 && p > 0.0))
        throw domain_error("build_eight_rep: parameters must be positive");
    const double sp = std::sinh(0.5 * p);
    if (!(2.0 * sp * std::sinh(0.5 * t1) > 2.0 &&
          2.0 * sp * std::sinh(0.5 * t2) > 2.0))
        throw domain_error(
            "build_eight_rep: hyperbolicity 2 sinh(p/2) sinh(t/2) > 2 violated");
    const Mat2 R = sl2_rot90();
    const Mat2 Rinv = -R;  // R^{-1} = -R
    EightRep rep;
    rep.A1 = sl2_translation(t1) * sl2_perp(p) * R;
    rep.A2 = Rinv * sl2_translation(t2) * sl2_perp(-p);
    return rep;
}

// ---------------------------------------------------------------------------
// Enumeration of oriented conjugacy classes of the free group <A,B>.
// Letters: 'A','a','B','b' with lowercase the inverse.

enum class LocalType { boundary, figure_eight, iterated_eight, other_filling };

struct GeodesicClass {
    std::string word;   // lexicographically minimal rotation
    double length = 0.0;
    LocalType local_type = LocalType::other_filling;
    int iterations = 0;  // j for iterated eights
    bool primitive = true;
};

inline std::string local_type_name(const GeodesicClass& g) {
    switch (g.local_type) {
        case LocalType::boundary: return "boundary";
        case LocalType::figure_eight: return "figure_eight";
        case LocalType::iterated_eight:
            return "iterated_eight(" + std::to_string(g.iterations) + ")";
        default: return "other_filling";
    }
}

namespace detail {

inline char inverse_letter(char c) {
    switch (c) {
        case 'A': return 'a';
        case 'a': return 'A';
        case 'B': return 'b';
        default: return 'B';
    }
}

// Booth's least-rotation algorithm.
inline std::string minimal_rotation(const std::string& s) {
    const std::size_t n = s.size();
    std::string ss = s + s;
    std::vector<int> fail(2 * n, -1);
    std::size_t k = 0;
    for (std::size_t j = 1; j < 2 * n; ++j) {
        const char sj = ss[j];
        int i = fail[j - k - 1];
        while (i != -1 && sj != ss[k + i + 1]) {
            if (sj < ss[k + i + 1]) k = j - i - 1;
            i = fail[i];
        }
        if (sj != ss[k + i + 1]) {
            if (sj < ss[k + i + 1]) k = j;
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    return ss.substr(k, n);
}

// smallest period of the cyclic word; word is primitive iff period == n
inline std::size_t cyclic_period(const std::string& s) {
    const std::size_t n = s.size();
    for (std::size_t p = 1; p <= n / 2; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (std::size_t i = p; i < n && ok; ++i) ok = s[i] == s[i - p];
        if (ok) return p;
    }
    return n;
}

struct WordShape {
    int a_plus = 0, a_minus = 0, b_plus = 0, b_minus = 0;
};

inline WordShape shape_of(const std::string& s) {
    WordShape w;
    for (char c : s) {
        if (c == 'A') ++w.a_plus;
        else if (c == 'a') ++w.a_minus;
        else if (c == 'B') ++w.b_plus;
        else ++w.b_minus;
    }
    return w;
}

// Word-level classification of a primitive cyclic word.
inline void classify(GeodesicClass& g, const std::string& root) {
    const WordShape w = shape_of(root);
    const int na = w.a_plus + w.a_minus;
    const int nb = w.b_plus + w.b_minus;
    const std::size_t n = root.size();
    g.local_type = LocalType::other_filling;
    g.iterations = 0;
    if (n == 1) {
        g.local_type = LocalType::boundary;  // A, a, B, b
        return;
    }
    if (n == 2 && na == 1 && nb == 1) {
        // AB and BA-type same-sign words are the third cuff; mixed-sign is
        // the figure-eight
        const bool same_sign = (w.a_plus == 1 && w.b_plus == 1) ||
                               (w.a_minus == 1 && w.b_minus == 1);
        g.local_type = same_sign ? LocalType::boundary : LocalType::figure_eight;
        return;
    }
    if (na == 1 && nb >= 2 && (w.b_plus == nb || w.b_minus == nb)) {
        // one A-letter against j same-sign B-letters, signs mixed:
        // the one-sided iterated eight with j iterations
        const bool mixed = (w.a_plus == 1 && w.b_minus == nb) ||
                           (w.a_minus == 1 && w.b_plus == nb);
        if (mixed) {
            g.local_type = LocalType::iterated_eight;
            g.iterations = nb;
        }
        return;
    }
}

}  // namespace detail

struct EnumerateOptions {
    int max_word_length = 16;
    std::size_t class_capacity = 10000000;
    bool primitive_only = false;
    unsigned workers = 1;
};

namespace detail {

// words with a fixed first letter; a cyclic class is owned by the worker of
// its minimal rotation's first letter, so per-letter results are disjoint
inline void enumerate_subtree(const PantsRep& rep, char first,
                              int max_word_length, double length_cutoff,
                              const EnumerateOptions& opt,
                              std::vector<GeodesicClass>& out) {
    const Mat2 gens[4] = {rep.A, rep.A.inverse(), rep.B, rep.B.inverse()};
    const char letters[4] = {'A', 'a', 'B', 'b'};
    auto gen_of = [&](char c) -> const Mat2& {
        switch (c) {
            case 'A': return gens[0];
            case 'a': return gens[1];
            case 'B': return gens[2];
            default: return gens[3];
        }
    };

    std::string word(1, first);
    auto emit = [&](const std::string& w) {
        // cyclically reduced: first and last letters not inverse of each other
        if (w.size() > 1 && w.front() == inverse_letter(w.back())) return;
        const std::string canon = minimal_rotation(w);
        if (canon != w) return;  // only the minimal rotation represents a class
        Mat2 m;
        for (char c : w) m = m * gen_of(c);
        const double tr = m.trace();
        if (!(std::fabs(tr) > 2.0)) return;  // free Fuchsian: cannot happen
        const double len = trace_to_length(tr);
        if (len > length_cutoff) return;
        GeodesicClass g;
        g.word = w;
        g.length = len;
        const std::size_t period = cyclic_period(w);
        g.primitive = period == w.size();
        classify(g, w.substr(0, period));
        if (opt.primitive_only && !g.primitive) return;
        if (out.size() >= opt.class_capacity)
            throw capability_error("enumerate_geodesics: class capacity exceeded");
        out.push_back(std::move(g));
    };

    std::function<void(int)> dfs = [&](int depth) {
        emit(word);
        if (depth == max_word_length) return;
        const char last = word.back();
        for (char c : letters) {
            if (c == inverse_letter(last)) continue;
            word.push_back(c);
            dfs(depth + 1);
            word.pop_back();
        }
    };
    dfs(1);
}

}  // namespace detail

// One representative per oriented conjugacy class (rotations identified,
// inverses kept distinct), complete up to the word-length cap. The word
// tree is partitioned by first letter; per-letter results are merged in
// letter order, so the output is identical at any worker count.
inline std::vector<GeodesicClass> enumerate_geodesics(
    const PantsRep& rep, int max_word_length, double length_cutoff,
    const EnumerateOptions& opt = {}) {
    if (max_word_length > opt.max_word_length)
        throw capability_error("enumerate_geodesics: word length " +
                               std::to_string(max_word_length) + " over cap " +
                               std::to_string(opt.max_word_length));
    const char letters[4] = {'A', 'a', 'B', 'b'};
    std::vector<std::vector<GeodesicClass>> parts(4);
    std::exception_ptr failure;
    auto run = [&](int i) {
        try {
            detail::enumerate_subtree(rep, letters[i], max_word_length,
                                      length_cutoff, opt, parts[static_cast<std::size_t>(i)]);
        } catch (...) {
            failure = std::current_exception();
        }
    };
    if (opt.workers > 1) {
        std::vector<std::thread> pool;
        for (int i = 0; i < 4; ++i) pool.emplace_back(run, i);
        for (auto& t : pool) t.join();
    } else {
        for (int i = 0; i < 4; ++i) run(i);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<GeodesicClass> out;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    if (total > opt.class_capacity)
        throw capability_error("enumerate_geodesics: class capacity exceeded");
    out.reserve(total);
    for (auto& p : parts)
        for (auto& g : p) out.push_back(std::move(g));
    std::sort(out.begin(), out.end(),
              [](const GeodesicClass& x, const GeodesicClass& y) {
                  if (x.length != y.length) return x.length < y.length;
                  if (x.word.size() != y.word.size())
                      return x.word.size() < y.word.size();
                  return x.word < y.word;
              });
    return out;
}

// Counting-bound scan over a family of pants with growing boundary length:
// filling-class counts against C exp(L - (1-eta)/2 * boundary).
struct FillingCountRow {
    double boundary_total = 0.0;
    std::size_t filling_count = 0;
    double bound_scale = 0.0;  // exp(L - (1-eta)/2 * boundary)
};

struct FillingCountTable {
    std::vector<FillingCountRow> rows;
    double fitted_constant = 0.0;
    int word_cap = 0;
};

inline FillingCountTable filling_count_decay(
    const std::vector<BoundaryLengths>& family, double length_cutoff,
    double eta, int max_word_length = 14) {
    if (family.size() < 3)
        throw domain_error("filling_count_decay: need at least 3 pants");
    FillingCountTable table;
    table.word_cap = max_word_length;
    for (const auto& b : family) {
        const PantsRep rep = build_pants_rep(b);
        const auto classes =
            enumerate_geodesics(rep, max_word_length, length_cutoff);
        FillingCountRow row;
        row.boundary_total = b.l1 + b.l2 + b.l3;
        for (const auto& g : classes)
            if (g.primitive && g.local_type != LocalType::boundary)
                ++row.filling_count;
        row.bound_scale = std::exp(length_cutoff -
                                   0.5 * (1.0 - eta) * row.boundary_total);
        table.fitted_constant =
            std::max(table.fitted_constant,
                     static_cast<double>(row.filling_count) / row.bound_scale);
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace wpfr
