#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cabinseg/image.hpp"

namespace cabinseg {

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
};

/// The six pixel-wise metrics. A metric is empty (NA) exactly when its
/// denominator is zero.
struct MetricsReport {
    std::optional<double> pr;   // precision  tp/(tp+fp)
    std::optional<double> re;   // recall     tp/(tp+fn)
    std::optional<double> sp;   // specificity tn/(tn+fp)
    std::optional<double> acc;  // accuracy   (tp+tn)/total
    std::optional<double> sim;  // Jaccard    tp/(tp+fp+fn)
    std::optional<double> f1;   // 2tp/(2tp+fp+fn)
};

/// Per-image reports plus NA-skipping means.
struct BatchReport {
    std::vector<MetricsReport> per_image;
    MetricsReport mean;
    std::array<int, 6> na_counts = {0, 0, 0, 0, 0, 0};  // pr, re, sp, acc, sim, f1
};

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt);

MetricsReport metrics_from_counts(const ConfusionCounts& c);

BatchReport evaluate_batch(const std::vector<std::pair<BinaryMask, BinaryMask>>& pairs);

/// Color-coded comparison: TP white, FP orange, TN black, FN blue.
ByteImage render_overlay(const BinaryMask& pred, const BinaryMask& gt);

/// One row per image (counts and metrics, "NA" for empty), then a
/// terminal mean row.
void write_batch_csv(std::ostream& os, const BatchReport& report,
                     const std::vector<std::string>& names,
                     const std::vector<ConfusionCounts>& counts);

}  // namespace cabinseg
