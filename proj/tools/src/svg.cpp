// Copyright 2026 The Cheshire Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cheshire/cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace cheshire::cli {

namespace {

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Roughly five round tick values covering [lo, hi].
std::vector<double> ticks(double lo, double hi) {
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
        out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return out;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add(std::string name, std::vector<double> x, std::vector<double> y, bool line, int color) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("SvgPlot: x and y sizes differ");
    }
    series_.push_back({std::move(name), std::move(x), std::move(y), line, color});
}

void SvgPlot::add_points(std::string name, std::vector<double> x, std::vector<double> y) {
    add(std::move(name), std::move(x), std::move(y), false, next_color_);
    next_color_ = (next_color_ + 1) % static_cast<int>(kPalette.size());
}

void SvgPlot::add_line(std::string name, std::vector<double> x, std::vector<double> y) {
    add(std::move(name), std::move(x), std::move(y), true, next_color_);
    next_color_ = (next_color_ + 1) % static_cast<int>(kPalette.size());
}

void SvgPlot::add_fit(std::string name, std::vector<double> x, std::vector<double> y) {
    const int color = series_.empty() ? next_color_ : series_.back().color;
    add(std::move(name), std::move(x), std::move(y), true, color);
}

std::string SvgPlot::render(int width, int height) const {
    if (series_.empty()) {
        throw std::invalid_argument("SvgPlot: no series to draw");
    }
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const Series& s : series_) {
        for (double v : s.x) {
            x0 = std::min(x0, v);
            x1 = std::max(x1, v);
        }
        for (double v : s.y) {
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    const double pad = y1 > y0 ? 0.08 * (y1 - y0) : std::max(std::abs(y0) * 0.1, 1.0);
    y0 -= pad;
    y1 += pad;

    const double left = 70, right = 150, top = 36, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;
    const auto sx = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
    const auto sy = [&](double v) { return top + (1.0 - (v - y0) / (y1 - y0)) * ph; };

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n",
        width, height, width, height);
    out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
    out += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                       left + pw / 2, escape(title_));
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"black\"/>\n",
                       left, top, pw, ph);
    for (double t : ticks(x0, x1)) {
        out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>"
                           "<text x=\"{0:.1f}\" y=\"{3:.1f}\" text-anchor=\"middle\">{4:g}</text>\n",
                           sx(t), top + ph, top + ph + 5, top + ph + 18, t);
    }
    for (double t : ticks(y0, y1)) {
        out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>"
                           "<text x=\"{3:.1f}\" y=\"{4:.1f}\" text-anchor=\"end\">{5:g}</text>\n",
                           left - 5, sy(t), left, left - 8, sy(t) + 4, t);
    }
    out += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", left + pw / 2, height - 12,
                       escape(x_label_));
    out += fmt::format("<text transform=\"translate(18 {:.1f}) rotate(-90)\" text-anchor=\"middle\">{}</text>\n",
                       top + ph / 2, escape(y_label_));

    double legend_y = top + 10;
    for (const Series& s : series_) {
        const char* color = kPalette[static_cast<std::size_t>(s.color)];
        if (s.line) {
            std::string pts;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                pts += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", sx(s.x[i]), sy(s.y[i]));
            }
            out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color,
                               pts);
            out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" "
                               "stroke-width=\"1.5\"/>",
                               left + pw + 10, legend_y, left + pw + 28, color);
        } else {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\"/>\n", sx(s.x[i]),
                                   sy(s.y[i]), color);
            }
            out += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"{}\"/>", left + pw + 19, legend_y,
                               color);
        }
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", left + pw + 34, legend_y + 4,
                           escape(s.name));
        legend_y += 18;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace cheshire::cli
