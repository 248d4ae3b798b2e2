// SPDX-License-Identifier: Apache-2.0
#include "oustein/path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace oustein {

Path::Path(int level, std::vector<double> values)
    : level_(level), values_(std::move(values)) {
    if (level < 0) throw std::invalid_argument("Path: negative level");
    const std::size_t expected = (std::size_t{1} << level) + 1;
    if (values_.size() != expected)
        throw std::invalid_argument("Path: values length must be 2^J + 1");
    for (double v : values_)
        if (!std::isfinite(v))
            throw std::invalid_argument("Path: non-finite value");
}

Path Path::zero(int level) {
    return Path(level, std::vector<double>((std::size_t{1} << level) + 1, 0.0));
}

Path Path::constant(double c, int level) {
    if (!std::isfinite(c))
        throw std::invalid_argument("constant_path: non-finite value");
    return Path(level, std::vector<double>((std::size_t{1} << level) + 1, c));
}

double Path::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double Path::integral() const {
    const double h = 1.0 / static_cast<double>(values_.size() - 1);
    double acc = 0.5 * (values_.front() + values_.back());
    for (std::size_t i = 1; i + 1 < values_.size(); ++i) acc += values_[i];
    return acc * h;
}

double Path::value_at(double t) const {
    if (t < 0.0 || t > 1.0)
        throw std::invalid_argument("Path::value_at: t outside [0,1]");
    const double x = t * static_cast<double>(values_.size() - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(x), values_.size() - 2);
    const double frac = x - static_cast<double>(i);
    return values_[i] + frac * (values_[i + 1] - values_[i]);
}

Path Path::refined(int new_level) const {
    if (new_level < level_)
        throw std::invalid_argument("Path::refined: target level below current");
    if (new_level == level_) return *this;
    const int shift = new_level - level_;
    const std::size_t stride = std::size_t{1} << shift;
    std::vector<double> out((std::size_t{1} << new_level) + 1);
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
        const double a = values_[i], b = values_[i + 1];
        for (std::size_t j = 0; j < stride; ++j)
            out[i * stride + j] =
                a + (b - a) * static_cast<double>(j) / static_cast<double>(stride);
    }
    out.back() = values_.back();
    return Path(new_level, std::move(out));
}

Path affine(double a, const Path& w, double b, const Path& z) {
    const int J = std::max(w.level(), z.level());
    Path wt = w.refined(J);
    Path zt = z.refined(J);
    std::vector<double> out(wt.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * wt[i] + b * zt[i];
    return Path(J, std::move(out));
}

nlohmann::json Path::to_json() const {
    return nlohmann::json{{"level", level_}, {"values", values_}};
}

Path Path::from_json(const nlohmann::json& j) {
    return Path(j.at("level").get<int>(),
                j.at("values").get<std::vector<double>>());
}

void Path::write_csv(std::ostream& os) const {
    os << "t,w\n";
    const double h = 1.0 / static_cast<double>(values_.size() - 1);
    char buf[64];
    for (std::size_t i = 0; i < values_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n",
                      static_cast<double>(i) * h, values_[i]);
        os << buf;
    }
}

} // namespace oustein
