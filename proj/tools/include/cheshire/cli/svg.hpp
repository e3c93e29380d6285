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

#pragma once

#include <string>
#include <vector>

namespace cheshire::cli {

/// Minimal x/y chart: scatter markers and polylines on shared axes.
class SvgPlot {
 public:
    SvgPlot(std::string title, std::string x_label, std::string y_label);

    void add_points(std::string name, std::vector<double> x, std::vector<double> y);
    void add_line(std::string name, std::vector<double> x, std::vector<double> y);
    /// Line drawn in the colour of the previously added series.
    void add_fit(std::string name, std::vector<double> x, std::vector<double> y);

    /// Throws std::invalid_argument if nothing was added.
    std::string render(int width = 640, int height = 420) const;

 private:
    struct Series {
        std::string name;
        std::vector<double> x;
        std::vector<double> y;
        bool line;
        int color;
    };
    void add(std::string name, std::vector<double> x, std::vector<double> y, bool line, int color);

    std::string title_;
    std::string x_label_;
    std::string y_label_;
    std::vector<Series> series_;
    int next_color_ = 0;
};

}  // namespace cheshire::cli
