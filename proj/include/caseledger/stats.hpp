#pragma once

#include <cstddef>
#include <vector>

namespace caseledger {

/// Summary of a timing sample set, in nanoseconds.
struct SampleStats {
  std::size_t samples = 0;
  double mean = 0;
  double median = 0;
  double q1 = 0;
  double q3 = 0;
  double max = 0;

  /// Box-plot interquartile range, Q3 - Q1.
  double iqr() const noexcept { return q3 - q1; }
};

/// Quantiles use linear interpolation between order statistics.
SampleStats summarize(std::vector<double> values);

/// Quantile p in [0, 1] of an ascending-sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double p);

}  // namespace caseledger
