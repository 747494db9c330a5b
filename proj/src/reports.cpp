#include "reports.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "error.hpp"

namespace fresh {

namespace {

nlohmann::json arch_json(const Architecture& arch) {
  return {{"hidden_layers", arch.hidden_layers},
          {"width", arch.width},
          {"hidden_omega", arch.hidden_omega}};
}

// JSON has no NaN; diverged or undefined values become null.
nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

void write_selection_csv(const SelectionReport& report, std::ostream& out) {
  out << "param,mean_wasserstein,se,chosen\n";
  for (std::size_t i = 0; i < report.scores.size(); ++i) {
    const auto& s = report.scores[i];
    out << fmt::format("{},{},{},{}\n", s.value, s.mean, s.se, i == report.chosen ? 1 : 0);
  }
}

void write_selection_json(const SelectionReport& report, std::ostream& out) {
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& s : report.scores)
    candidates.push_back({{"param", s.value},
                          {"config", describe(s.config)},
                          {"mean_wasserstein", s.mean},
                          {"se", s.se},
                          {"distances", s.distances}});
  const auto& best = report.best();
  nlohmann::json doc = {
      {"model", to_string(report.kind)},
      {"n", report.n},
      {"resolution", report.resolution},
      {"repeats", report.repeats},
      {"seed", report.seed},
      {"architecture", arch_json(report.arch)},
      {"chosen", {{"param", best.value}, {"config", describe(best.config)}, {"index", report.chosen}}},
      {"candidates", candidates},
  };
  out << doc.dump(2) << '\n';
}

void write_train_csv(const TrainReport& report, std::ostream& out) {
  out << "step,mse,psnr\n";
  for (const auto& e : report.log) out << fmt::format("{},{},{}\n", e.step, e.mse, e.psnr);
}

void write_train_json(const TrainReport& report, std::ostream& out) {
  nlohmann::json doc = {
      {"config", describe(report.config)},
      {"seed", report.seed},
      {"learning_rate", report.learning_rate},
      {"steps", report.log.empty() ? 0 : report.log.back().step},
      {"final_mse", number(report.final_mse)},
      {"final_psnr", number(report.final_psnr)},
      {"final_ssim", number(report.final_ssim)},
  };
  out << doc.dump(2) << '\n';
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  out << "param,final_psnr,final_ssim,best\n";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    const int best = report.best && *report.best == i ? 1 : 0;
    if (e.diverged())
      out << fmt::format("{},nan,nan,{}\n", e.value, best);
    else
      out << fmt::format("{},{},{},{}\n", e.value, e.result->report.final_psnr,
                         e.result->report.final_ssim, best);
  }
}

void write_ratio_csv(const std::vector<std::optional<double>>& ratio, std::ostream& out) {
  out << "d,ratio\n";
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    if (ratio[i])
      out << fmt::format("{},{}\n", i + 1, *ratio[i]);
    else
      out << fmt::format("{},\n", i + 1);
  }
}

void write_magnitudes_csv(const std::vector<double>& magnitudes, std::ostream& out) {
  out << "row,magnitude\n";
  for (std::size_t i = 0; i < magnitudes.size(); ++i)
    out << fmt::format("{},{}\n", i, magnitudes[i]);
}

Histogram make_histogram(const std::vector<double>& values, int bins) {
  if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
  double top = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("histogram values must be finite and >= 0");
    top = std::max(top, v);
  }
  if (top == 0.0) top = 1.0;
  Histogram h;
  h.counts.assign(bins, 0);
  for (int b = 0; b <= bins; ++b) h.edges.push_back(top * b / bins);
  for (double v : values) {
    auto b = static_cast<int>(v / top * bins);
    ++h.counts[std::min(b, bins - 1)];
  }
  return h;
}

void write_histogram_csv(const Histogram& histogram, std::ostream& out) {
  out << "bin_start,bin_end,count\n";
  for (std::size_t b = 0; b < histogram.counts.size(); ++b)
    out << fmt::format("{},{},{}\n", histogram.edges[b], histogram.edges[b + 1], histogram.counts[b]);
}

}  // namespace fresh
