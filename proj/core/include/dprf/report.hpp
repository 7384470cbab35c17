// Copyright 2026 The DPRF Authors
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

#ifndef DPRF_REPORT_HPP_
#define DPRF_REPORT_HPP_

#include <map>
#include <string>
#include <vector>

#include "dprf/common.hpp"

namespace dprf {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
  std::string to_string() const;
  void write(const std::string& path) const;
  static CsvTable read(const std::string& path);
};

// Mean and sample standard deviation (n-1 denominator; 0 for a single value).
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
MeanStd mean_std(const std::vector<double>& values);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct SeriesPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<Series> series;
};

// Minimal line plot: axes, ticks, legend, one polyline per series.
void write_svg(const SeriesPlot& plot, const std::string& path);

// Run manifest: config echo, versions, warnings and completion status, so
// every artifact is reproducible from the manifest alone.
class Manifest {
 public:
  explicit Manifest(std::string path);

  void set(const std::string& key, const std::string& value);
  void add_warning(const std::string& warning);
  // status: "running", "complete", or an error description. Rewrites the file.
  void write(const std::string& status) const;

 private:
  std::string path_;
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::string> warnings_;
};

}  // namespace dprf

#endif  // DPRF_REPORT_HPP_
