#include "listcomm/hypergeom.hpp"

#include "listcomm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace listcomm {

namespace {

// Relative size below which further monotone tail terms are dropped.
constexpr double kTailCutoff = 1e-18;

void check_domain(std::uint64_t sx, std::uint64_t sy, std::uint64_t k, std::uint64_t n) {
    const auto describe = [&] {
        return "(size_x=" + std::to_string(sx) + ", size_y=" + std::to_string(sy) +
               ", intersection=" + std::to_string(k) + ", n=" + std::to_string(n) + ")";
    };
    if (n < 1) throw DomainError("overlap: universe must be nonempty " + describe());
    if (sx > n || sy > n) throw DomainError("overlap: list larger than universe " + describe());
    const std::uint64_t lo = sx + sy > n ? sx + sy - n : 0;
    if (k > std::min(sx, sy) || k < lo) throw DomainError("overlap: impossible intersection " + describe());
}

// ln P(X >= k), with lf(m) = ln(m!). The distribution is symmetric in the two
// sizes; evaluating with sx <= sy makes the rounding symmetric too.
template <typename LogFactorial>
double log_tail(std::uint64_t sx, std::uint64_t sy, std::uint64_t k, std::uint64_t n, const LogFactorial& lf) {
    if (sx > sy) std::swap(sx, sy);
    const std::uint64_t lo = sx + sy > n ? sx + sy - n : 0;
    const std::uint64_t hi = std::min(sx, sy);
    if (k <= lo) return 0.0;

    const auto log_choose = [&](std::uint64_t a, std::uint64_t b) { return lf(a) - lf(b) - lf(a - b); };

    // Anchor at the larger of k and the mode; every other tail term is then a
    // ratio <= 1 against the anchor term.
    const std::uint64_t mode = std::clamp<std::uint64_t>((sx + 1) * (sy + 1) / (n + 2), lo, hi);
    const std::uint64_t anchor = std::max(k, mode);
    const double log_anchor = log_choose(sx, anchor) + log_choose(n - sx, sy - anchor) - log_choose(n, sy);

    const double nd = static_cast<double>(n);
    const double xd = static_cast<double>(sx);
    const double yd = static_cast<double>(sy);

    double sum = 1.0;
    double term = 1.0;
    for (std::uint64_t j = anchor; j < hi; ++j) {
        const double jd = static_cast<double>(j);
        term *= ((xd - jd) * (yd - jd)) / ((jd + 1.0) * (nd - xd - yd + jd + 1.0));
        sum += term;
        if (term < sum * kTailCutoff) break;
    }
    term = 1.0;
    for (std::uint64_t j = anchor; j > k; --j) {
        const double jd = static_cast<double>(j);
        term *= (jd * (nd - xd - yd + jd)) / ((xd - jd + 1.0) * (yd - jd + 1.0));
        sum += term;
        if (term < sum * kTailCutoff) break;
    }
    return std::min(0.0, log_anchor + std::log(sum));
}

struct LgammaFactorial {
    double operator()(std::uint64_t m) const { return std::lgamma(static_cast<double>(m) + 1.0); }
};

} // namespace

LogFactorialTable::LogFactorialTable(std::uint64_t max) : table_(max + 1) {
    for (std::uint64_t k = 0; k <= max; ++k) table_[k] = std::lgamma(static_cast<double>(k) + 1.0);
}

double overlap_pvalue(std::uint64_t size_x, std::uint64_t size_y, std::uint64_t intersection, std::uint64_t n) {
    check_domain(size_x, size_y, intersection, n);
    return std::exp(log_tail(size_x, size_y, intersection, n, LgammaFactorial{}));
}

double overlap_lpv(std::uint64_t size_x, std::uint64_t size_y, std::uint64_t intersection, std::uint64_t n) {
    check_domain(size_x, size_y, intersection, n);
    const double lp = log_tail(size_x, size_y, intersection, n, LgammaFactorial{});
    return std::max(0.0, -lp / std::numbers::ln10);
}

double log_overlap_tail(std::uint64_t size_x, std::uint64_t size_y, std::uint64_t intersection, std::uint64_t n,
                        const LogFactorialTable& table) {
    check_domain(size_x, size_y, intersection, n);
    if (table.max() < n) throw DomainError("log_overlap_tail: factorial table too small");
    return log_tail(size_x, size_y, intersection, n, table);
}

} // namespace listcomm
