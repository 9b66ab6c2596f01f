#pragma once

// Exact rational Gaussian elimination, small enough for grading solvers.

#include <cstdint>
#include <numeric>
#include <vector>

namespace blue::detail {

struct Frac {
    std::int64_t num = 0, den = 1;
    Frac() = default;
    Frac(std::int64_t n) : num(n), den(1) {}
    Frac(std::int64_t n, std::int64_t d) : num(n), den(d) { reduce(); }
    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }
    bool is_zero() const { return num == 0; }
    friend Frac operator+(Frac a, Frac b) {
        return Frac(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Frac operator-(Frac a, Frac b) {
        return Frac(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend Frac operator*(Frac a, Frac b) { return Frac(a.num * b.num, a.den * b.den); }
    friend Frac operator/(Frac a, Frac b) { return Frac(a.num * b.den, a.den * b.num); }
    friend bool operator==(Frac a, Frac b) { return a.num == b.num && a.den == b.den; }
};

// Basis of { w : M w = 0 }.
inline std::vector<std::vector<Frac>> null_space(std::vector<std::vector<Frac>> m,
                                                 std::size_t cols) {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c].is_zero()) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[rank], m[piv]);
        Frac inv = Frac(1) / m[rank][c];
        for (auto& x : m[rank]) x = x * inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank || m[r][c].is_zero()) continue;
            Frac f = m[r][c];
            for (std::size_t k = 0; k < cols; ++k) m[r][k] = m[r][k] - f * m[rank][k];
        }
        pivot_col.push_back(c);
        ++rank;
    }
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<Frac>> basis;
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        std::vector<Frac> v(cols, Frac(0));
        v[c] = Frac(1);
        for (std::size_t r = 0; r < rank; ++r) v[pivot_col[r]] = Frac(0) - m[r][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace blue::detail
