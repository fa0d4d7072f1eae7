#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "discoreward/motif_engine.hpp"

namespace discoreward {

struct TrendPoint {
  std::size_t batch_index = 0;
  double proportion = 0.0;  // distinctive motif count / all motif counts
  bool empty = false;       // batch held no motifs; proportion recorded as 0
};

using MotifTrendSeries = std::vector<TrendPoint>;

// Share of human-distinctive motifs among all motifs found in each batch.
// Throws kInvalidArgument when `batches` is empty.
MotifTrendSeries motif_trend(std::span<const std::vector<MotifCounts>> batches,
                             const DistinctiveMotifSet& dset);

struct DiffRow {
  std::string key;  // motif key, or "<OOV>" for the out-of-vocabulary bucket
  double before = 0.0;
  double after = 0.0;
  double delta = 0.0;  // after - before
};

// Rows sorted by |delta| descending, ties by key. Both vectors must be built
// over `vocab`; otherwise kVocabularyMismatch.
std::vector<DiffRow> distribution_diff(const MotifVector& before, const MotifVector& after,
                                       const DistinctiveMotifSet& vocab);

// Pearson correlation coefficient. Throws kLengthMismatch when the lengths
// differ or are below 2 and kZeroVariance when either input is constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

}  // namespace discoreward
