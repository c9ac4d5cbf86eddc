#include "cabinseg/metrics.hpp"

#include <cstdio>

namespace cabinseg {

namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

std::string format_metric(const std::optional<double>& m) {
    if (!m) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", *m);
    return buf;
}

}  // namespace

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
    require_same_size(pred.width, pred.height, gt.width, gt.height, "confusion");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.bits.size(); ++i) {
        const bool p = pred.bits[i] != 0, g = gt.bits[i] != 0;
        if (p && g)
            ++c.tp;
        else if (p && !g)
            ++c.fp;
        else if (!p && g)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

MetricsReport metrics_from_counts(const ConfusionCounts& c) {
    MetricsReport r;
    r.pr = ratio(c.tp, c.tp + c.fp);
    r.re = ratio(c.tp, c.tp + c.fn);
    r.sp = ratio(c.tn, c.tn + c.fp);
    r.acc = ratio(c.tp + c.tn, c.total());
    r.sim = ratio(c.tp, c.tp + c.fp + c.fn);
    r.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    return r;
}

BatchReport evaluate_batch(const std::vector<std::pair<BinaryMask, BinaryMask>>& pairs) {
    if (pairs.empty()) throw ConfigError("evaluate_batch needs at least one pair");
    BatchReport report;
    report.per_image.reserve(pairs.size());
    for (const auto& [pred, gt] : pairs)
        report.per_image.push_back(metrics_from_counts(confusion(pred, gt)));

    const auto fields = {&MetricsReport::pr, &MetricsReport::re, &MetricsReport::sp,
                         &MetricsReport::acc, &MetricsReport::sim, &MetricsReport::f1};
    int fi = 0;
    for (auto field : fields) {
        double sum = 0.0;
        int n = 0;
        for (const MetricsReport& r : report.per_image) {
            if (r.*field)
                sum += *(r.*field), ++n;
            else
                ++report.na_counts[static_cast<std::size_t>(fi)];
        }
        if (n > 0) report.mean.*field = sum / n;
        ++fi;
    }
    return report;
}

ByteImage render_overlay(const BinaryMask& pred, const BinaryMask& gt) {
    require_same_size(pred.width, pred.height, gt.width, gt.height, "overlay");
    ByteImage img(pred.width, pred.height, 3);
    for (std::size_t i = 0; i < pred.bits.size(); ++i) {
        const bool p = pred.bits[i] != 0, g = gt.bits[i] != 0;
        std::uint8_t r, gr, b;
        if (p && g) {
            r = 255; gr = 255; b = 255;  // TP
        } else if (p && !g) {
            r = 255; gr = 165; b = 0;    // FP
        } else if (!p && g) {
            r = 0; gr = 0; b = 255;      // FN
        } else {
            r = 0; gr = 0; b = 0;        // TN
        }
        img.samples[3 * i] = r;
        img.samples[3 * i + 1] = gr;
        img.samples[3 * i + 2] = b;
    }
    return img;
}

void write_batch_csv(std::ostream& os, const BatchReport& report,
                     const std::vector<std::string>& names,
                     const std::vector<ConfusionCounts>& counts) {
    os << "path,tp,fp,tn,fn,pr,re,sp,acc,sim,f1\n";
    for (std::size_t i = 0; i < report.per_image.size(); ++i) {
        const MetricsReport& r = report.per_image[i];
        const ConfusionCounts& c = counts[i];
        os << names[i] << ',' << c.tp << ',' << c.fp << ',' << c.tn << ',' << c.fn << ','
           << format_metric(r.pr) << ',' << format_metric(r.re) << ',' << format_metric(r.sp)
           << ',' << format_metric(r.acc) << ',' << format_metric(r.sim) << ','
           << format_metric(r.f1) << '\n';
    }
    ConfusionCounts total;
    for (const ConfusionCounts& c : counts) {
        total.tp += c.tp;
        total.fp += c.fp;
        total.tn += c.tn;
        total.fn += c.fn;
    }
    const MetricsReport& m = report.mean;
    os << "mean," << total.tp << ',' << total.fp << ',' << total.tn << ',' << total.fn << ','
       << format_metric(m.pr) << ',' << format_metric(m.re) << ',' << format_metric(m.sp) << ','
       << format_metric(m.acc) << ',' << format_metric(m.sim) << ',' << format_metric(m.f1)
       << '\n';
}

}  // namespace cabinseg
