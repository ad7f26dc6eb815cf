#pragma once

// Row-major double matrix, plus the handful of vector helpers the embedding
// models and the policy network need. Everything is double precision so
// finite-difference gradient checks have headroom.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "questforge/rng.hpp"

namespace questforge {

struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * std::size_t(c), 0.0) {}

    double& at(int r, int c) { return a[std::size_t(r) * std::size_t(cols) + std::size_t(c)]; }
    double at(int r, int c) const {
        return a[std::size_t(r) * std::size_t(cols) + std::size_t(c)];
    }
    double* row(int r) { return a.data() + std::size_t(r) * std::size_t(cols); }
    const double* row(int r) const {
        return a.data() + std::size_t(r) * std::size_t(cols);
    }
    std::size_t size() const { return a.size(); }

    void zero() { std::fill(a.begin(), a.end(), 0.0); }

    void fill_uniform(Rng& rng, double scale) {
        for (auto& x : a) x = (rng.uniform01() * 2.0 - 1.0) * scale;
    }

    Mat& operator+=(const Mat& o) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
        return *this;
    }
    Mat& operator*=(double s) {
        for (auto& x : a) x *= s;
        return *this;
    }
};

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

// y = M x (matrix times vector).
inline std::vector<double> matvec(const Mat& m, const std::vector<double>& x) {
    std::vector<double> y(std::size_t(m.rows), 0.0);
    for (int r = 0; r < m.rows; ++r) {
        const double* row = m.row(r);
        double s = 0;
        for (int c = 0; c < m.cols; ++c) s += row[c] * x[std::size_t(c)];
        y[std::size_t(r)] = s;
    }
    return y;
}

// y = M^T x.
inline std::vector<double> matvec_t(const Mat& m, const std::vector<double>& x) {
    std::vector<double> y(std::size_t(m.cols), 0.0);
    for (int r = 0; r < m.rows; ++r) {
        const double* row = m.row(r);
        for (int c = 0; c < m.cols; ++c) y[std::size_t(c)] += row[c] * x[std::size_t(r)];
    }
    return y;
}

inline double l2_norm_sq(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
}

// Numerically stable log-sum-exp over a subset of logits (all when idx empty
// semantics are not needed; callers pass explicit index lists).
inline double logsumexp(const std::vector<double>& logits,
                        const std::vector<int>& idx) {
    double mx = -1e300;
    for (int i : idx) mx = std::max(mx, logits[std::size_t(i)]);
    double s = 0;
    for (int i : idx) s += std::exp(logits[std::size_t(i)] - mx);
    return mx + std::log(s);
}

inline double logsumexp(const std::vector<double>& logits) {
    double mx = -1e300;
    for (double v : logits) mx = std::max(mx, v);
    double s = 0;
    for (double v : logits) s += std::exp(v - mx);
    return mx + std::log(s);
}

} // namespace questforge
