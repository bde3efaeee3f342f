#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace duality {

enum class Measure { Absolute, Relative };

// Within: the check passes when the residual is at most the tolerance.
// Exceeds: a negative control, which passes when the residual is larger.
enum class Expectation { Within, Exceeds };

struct Report {
    std::string name;
    std::string mode;
    double max_abs_residual = 0.0;
    double max_rel_residual = 0.0;
    double tolerance = 0.0;
    Measure measure = Measure::Absolute;
    Expectation expectation = Expectation::Within;
    bool pass = false;
    double wall_time_ms = 0.0;
    std::optional<std::uint64_t> seed;
    std::size_t points = 0;
    std::vector<std::string> notes;

    double residual() const { return measure == Measure::Absolute ? max_abs_residual : max_rel_residual; }
    std::string status() const { return pass ? "pass" : "fail"; }

    void observe(double abs_res, double rel_res = 0.0) {
        // NaN must never look like agreement
        if (std::isnan(abs_res)) abs_res = INFINITY;
        if (std::isnan(rel_res)) rel_res = INFINITY;
        max_abs_residual = std::max(max_abs_residual, abs_res);
        max_rel_residual = std::max(max_rel_residual, rel_res);
        ++points;
    }
    void observe_pair(double lhs_abs, double rhs_abs, double diff) {
        const double denom = std::max({lhs_abs, rhs_abs, 1e-300});
        observe(diff, diff / denom);
    }
    // Relative to the summed size of the terms that cancel, for sides that may vanish exactly.
    void observe_scaled(double diff, double scale) { observe(diff, diff / std::max(scale, 1e-300)); }

    Report& finish() {
        const double r = residual();
        pass = expectation == Expectation::Within ? r <= tolerance : r > tolerance;
        return *this;
    }
};

inline Report make_report(std::string name, std::string mode, double tolerance, Measure measure = Measure::Absolute,
                          Expectation expectation = Expectation::Within) {
    Report r;
    r.name = std::move(name);
    r.mode = std::move(mode);
    r.tolerance = tolerance;
    r.measure = measure;
    r.expectation = expectation;
    return r;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline bool all_pass(const std::vector<Report>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const Report& r) { return r.pass; });
}

}  // namespace duality
