// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

namespace oustein {

/// Continuous piecewise-linear function on [0,1] stored on the dyadic grid
/// of a given level J: values[i] = w(i / 2^J), i = 0..2^J.
///
/// Paths are immutable after construction and safe to share across threads.
class Path {
public:
    Path(int level, std::vector<double> values);

    static Path zero(int level);
    static Path constant(double c, int level);

    int level() const { return level_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Grid-exact for piecewise-linear paths.
    double sup_norm() const;

    /// w(1).
    double terminal() const { return values_.back(); }

    /// Trapezoid rule; exact for piecewise-linear paths.
    double integral() const;

    /// Piecewise-linear interpolation at arbitrary t in [0,1].
    double value_at(double t) const;

    /// Same function on a finer grid (midpoint fill). Requires new_level >= level().
    Path refined(int new_level) const;

    nlohmann::json to_json() const;
    static Path from_json(const nlohmann::json& j);
    void write_csv(std::ostream& os) const;

private:
    int level_;
    std::vector<double> values_;
};

/// a*w + b*z on the common grid (operands refined to the max level).
Path affine(double a, const Path& w, double b, const Path& z);

inline Path constant_path(double c, int level) { return Path::constant(c, level); }
inline double sup_norm(const Path& w) { return w.sup_norm(); }

} // namespace oustein
