#include "discoreward/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "discoreward/error.hpp"

namespace discoreward {

MotifTrendSeries motif_trend(std::span<const std::vector<MotifCounts>> batches,
                             const DistinctiveMotifSet& dset) {
  if (batches.empty()) throw Error(ErrorCode::kInvalidArgument, "no batches to track");
  MotifTrendSeries series;
  series.reserve(batches.size());
  for (std::size_t b = 0; b < batches.size(); ++b) {
    std::uint64_t distinctive = 0;
    std::uint64_t total = 0;
    for (const auto& counts : batches[b]) {
      for (const auto& [key, n] : counts.entries()) {
        total += n;
        if (dset.is_distinctive(key)) distinctive += n;
      }
    }
    TrendPoint point{b, 0.0, total == 0};
    if (total > 0) point.proportion = static_cast<double>(distinctive) / static_cast<double>(total);
    series.push_back(point);
  }
  return series;
}

std::vector<DiffRow> distribution_diff(const MotifVector& before, const MotifVector& after,
                                       const DistinctiveMotifSet& vocab) {
  for (const MotifVector* v : {&before, &after}) {
    if (v->vocab_fingerprint != vocab.fingerprint() || v->values.size() != vocab.size() + 1) {
      throw Error(ErrorCode::kVocabularyMismatch,
                  "motif vector was not built over vocabulary " + vocab.fingerprint());
    }
  }
  std::vector<DiffRow> rows;
  rows.reserve(vocab.size() + 1);
  for (std::size_t i = 0; i <= vocab.size(); ++i) {
    DiffRow row;
    row.key = i < vocab.size() ? vocab.entries()[i].key : std::string(kOovKey);
    row.before = before.values[i];
    row.after = after.values[i];
    row.delta = row.after - row.before;
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const DiffRow& a, const DiffRow& b) {
    const double da = std::abs(a.delta);
    const double db = std::abs(b.delta);
    if (da != db) return da > db;
    return a.key < b.key;
  });
  return rows;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorCode::kLengthMismatch, "pearson needs two series of equal length >= 2");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kZeroVariance, "pearson is undefined for a constant series");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace discoreward
