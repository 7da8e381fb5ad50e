#pragma once

// Significance of the member overlap between two lists under a hypergeometric
// null: draw size_y users without replacement from a universe of n, of which
// size_x are marked; the p-value is P(overlap >= intersection).

#include <cstdint>
#include <vector>

namespace listcomm {

// Throws DomainError unless n >= 1, size_x, size_y <= n and
// max(0, size_x + size_y - n) <= intersection <= min(size_x, size_y).
double overlap_pvalue(std::uint64_t size_x, std::uint64_t size_y, std::uint64_t intersection,
                      std::uint64_t n);

// -log10 of overlap_pvalue, evaluated in log space so it stays finite when the
// p-value underflows. Always >= 0.
double overlap_lpv(std::uint64_t size_x, std::uint64_t size_y, std::uint64_t intersection,
                   std::uint64_t n);

// ln(k!) for k <= max, precomputed. Read-only after construction, so one table
// can serve concurrent evaluations.
class LogFactorialTable {
public:
    explicit LogFactorialTable(std::uint64_t max);

    double operator()(std::uint64_t k) const { return table_[k]; }
    std::uint64_t max() const noexcept { return table_.size() - 1; }

private:
    std::vector<double> table_;
};

// Natural log of the upper tail P(X >= intersection), using a precomputed table
// (table.max() >= n). Preconditions as overlap_pvalue.
double log_overlap_tail(std::uint64_t size_x, std::uint64_t size_y, std::uint64_t intersection,
                        std::uint64_t n, const LogFactorialTable& table);

} // namespace listcomm
