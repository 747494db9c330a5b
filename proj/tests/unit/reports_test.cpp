#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "error.hpp"
#include "reports.hpp"

using namespace fresh;

namespace {

SelectionReport sample_selection() {
  SelectionReport r;
  r.kind = ModelKind::siren;
  r.n = 64;
  r.resolution = 256;
  r.repeats = 2;
  r.seed = 7;
  r.scores = {{SirenEmbedding{10}, 10, 0.5, 0.01, {0.49, 0.51}},
              {SirenEmbedding{20}, 20, 0.25, 0.125, {0.125, 0.375}}};
  r.chosen = 1;
  return r;
}

TrainResult fake_result(double psnr, double ssim) {
  TrainResult r;
  r.report.final_psnr = psnr;
  r.report.final_ssim = ssim;
  return r;
}

}  // namespace

TEST_CASE("selection CSV and JSON") {
  const auto report = sample_selection();
  std::ostringstream csv;
  write_selection_csv(report, csv);
  CHECK(csv.str() == "param,mean_wasserstein,se,chosen\n10,0.5,0.01,0\n20,0.25,0.125,1\n");

  std::ostringstream js;
  write_selection_json(report, js);
  const auto doc = nlohmann::json::parse(js.str());
  CHECK(doc["model"] == "siren");
  CHECK(doc["n"] == 64);
  CHECK(doc["resolution"] == 256);
  CHECK(doc["repeats"] == 2);
  CHECK(doc["seed"] == 7);
  CHECK(doc["architecture"]["width"] == 256);
  CHECK(doc["chosen"]["param"] == 20.0);
  CHECK(doc["chosen"]["index"] == 1);
  CHECK(doc["candidates"].size() == 2);
  CHECK(doc["candidates"][0]["distances"][1] == 0.51);
}

TEST_CASE("training CSV and JSON") {
  TrainReport report;
  report.config = FourierEmbedding{4};
  report.seed = 1;
  report.learning_rate = 1e-3;
  report.log = {{0, 0.1, 10}, {100, 0.001, 30}};
  report.final_mse = 0.001;
  report.final_psnr = 30;
  report.final_ssim = std::nan("");
  std::ostringstream csv;
  write_train_csv(report, csv);
  CHECK(csv.str() == "step,mse,psnr\n0,0.1,10\n100,0.001,30\n");

  std::ostringstream js;
  write_train_json(report, js);
  const auto doc = nlohmann::json::parse(js.str());
  CHECK(doc["steps"] == 100);
  CHECK(doc["final_psnr"] == 30.0);
  CHECK(doc["final_ssim"].is_null());
  CHECK(doc["learning_rate"] == 1e-3);
}

TEST_CASE("sweep CSV marks the best and diverged entries") {
  SweepReport report;
  report.kind = ModelKind::finer;
  report.entries.push_back({FinerEmbedding{30, 0.5}, 0.5, fake_result(28.5, 0.75), ""});
  report.entries.push_back({FinerEmbedding{30, 1}, 1, std::nullopt, "diverged"});
  report.entries.push_back({FinerEmbedding{30, 1.5}, 1.5, fake_result(31, 0.875), ""});
  report.best = 2;
  std::ostringstream csv;
  write_sweep_csv(report, csv);
  CHECK(csv.str() == "param,final_psnr,final_ssim,best\n0.5,28.5,0.75,0\n1,nan,nan,0\n1.5,31,0.875,1\n");
}

TEST_CASE("ratio and magnitude CSVs") {
  std::ostringstream ratio;
  write_ratio_csv({0.5, std::nullopt, 2.0}, ratio);
  CHECK(ratio.str() == "d,ratio\n1,0.5\n2,\n3,2\n");

  std::ostringstream mags;
  write_magnitudes_csv({1.5, 30}, mags);
  CHECK(mags.str() == "row,magnitude\n0,1.5\n1,30\n");
}

TEST_CASE("make_histogram") {
  const auto h = make_histogram({0, 1, 2, 3, 4}, 4);
  CHECK(h.edges == std::vector<double>{0, 1, 2, 3, 4});
  CHECK(h.counts == std::vector<std::size_t>{1, 1, 1, 2});

  const auto zeros = make_histogram({0, 0}, 2);
  CHECK(zeros.edges.back() == 1.0);
  CHECK(zeros.counts == std::vector<std::size_t>{2, 0});

  std::ostringstream csv;
  write_histogram_csv(make_histogram({0.5, 2}, 2), csv);
  CHECK(csv.str() == "bin_start,bin_end,count\n0,1,1\n1,2,1\n");

  CHECK_THROWS_AS(make_histogram({1}, 0), InvalidArgument);
  CHECK_THROWS_AS(make_histogram({-1}, 2), InvalidArgument);
}
