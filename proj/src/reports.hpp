#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "select.hpp"
#include "train.hpp"

namespace fresh {

// param,mean_wasserstein,se,chosen
void write_selection_csv(const SelectionReport& report, std::ostream& out);
// Full metadata: model, n, resolution, repeats, seed, architecture, per-candidate distances.
void write_selection_json(const SelectionReport& report, std::ostream& out);

// step,mse,psnr
void write_train_csv(const TrainReport& report, std::ostream& out);
void write_train_json(const TrainReport& report, std::ostream& out);

// param,final_psnr,final_ssim,best; diverged entries report nan.
void write_sweep_csv(const SweepReport& report, std::ostream& out);

// d,ratio; a missing entry leaves the ratio field empty.
void write_ratio_csv(const std::vector<std::optional<double>>& ratio, std::ostream& out);

// row,magnitude
void write_magnitudes_csv(const std::vector<double>& magnitudes, std::ostream& out);

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<std::size_t> counts;
};

// Equal-width bins over [0, max(values)]; the last bin is closed.
Histogram make_histogram(const std::vector<double>& values, int bins);
// bin_start,bin_end,count
void write_histogram_csv(const Histogram& histogram, std::ostream& out);

}  // namespace fresh
