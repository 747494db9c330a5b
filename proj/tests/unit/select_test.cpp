#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "oracles/oracles.hpp"
#include "select.hpp"
#include "seeds.hpp"
#include "train.hpp"

using namespace fresh;

namespace {

Image lcg_image(std::uint64_t seed, int channels, int side) {
  Image im(channels, side, side);
  oracle::Lcg rng(seed);
  for (double& v : im.data) v = rng.uniform();
  return im;
}

SelectOptions small_options() {
  SelectOptions o;
  o.n = 8;
  o.repeats = 3;
  o.resolution = 16;
  o.seed = 5;
  o.arch = {1, 8, 30.0};
  return o;
}

std::vector<double> normalized_head(std::vector<double> s, int n) {
  s.resize(n);
  double total = 0.0;
  for (double v : s) total += v;
  for (double& v : s) v /= total;
  return s;
}

}  // namespace

TEST_CASE("model kinds and grids") {
  CHECK(parse_model_kind("siren") == ModelKind::siren);
  CHECK(parse_model_kind("finer-k0") == ModelKind::finer_k0);
  CHECK_FALSE(parse_model_kind("relu").has_value());
  for (auto kind : {ModelKind::siren, ModelKind::fourier, ModelKind::finer, ModelKind::finer_k0})
    CHECK(parse_model_kind(to_string(kind)) == kind);

  CHECK(default_grid(ModelKind::siren).candidates.size() == 20);
  CHECK(default_grid(ModelKind::fourier).candidates.size() == 20);
  CHECK(default_grid(ModelKind::finer).candidates.size() == 31);
  CHECK(default_grid(ModelKind::finer_k0).candidates.size() == 20);
  CHECK(swept_value(ModelKind::finer, default_grid(ModelKind::finer).candidates.back()) ==
        doctest::Approx(3.0));
  CHECK(swept_value(ModelKind::siren, default_grid(ModelKind::siren).candidates.front()) == 10.0);

  const auto finer = make_config(ModelKind::finer, 0.4, 25.0);
  CHECK(std::get<FinerEmbedding>(finer).omega == 25.0);
  CHECK(std::get<FinerEmbedding>(finer).k == 0.4);
  CHECK(std::get<FinerEmbedding>(make_config(ModelKind::finer_k0, 50)).k == 0.0);

  CHECK_THROWS_AS(make_grid(ModelKind::siren, std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(make_grid(ModelKind::fourier, std::vector<double>{1, -2}), InvalidArgument);
  CandidateGrid mixed{ModelKind::siren, {SirenEmbedding{10}, FourierEmbedding{3}}};
  CHECK_THROWS_AS(validate(mixed), InvalidArgument);
  CandidateGrid biased{ModelKind::finer_k0, {FinerEmbedding{30, 1}}};
  CHECK_THROWS_AS(validate(biased), InvalidArgument);
}

TEST_CASE("derive_seed depends only on the candidate") {
  const EmbeddingConfig a = SirenEmbedding{30};
  CHECK(derive_seed(1, a, 0) == derive_seed(1, SirenEmbedding{30}, 0));
  CHECK(derive_seed(1, a, 0) != derive_seed(2, a, 0));
  CHECK(derive_seed(1, a, 0) != derive_seed(1, a, 1));
  CHECK(derive_seed(1, a, 0) != derive_seed(1, SirenEmbedding{40}, 0));
  CHECK(derive_seed(1, FinerEmbedding{30, 0}, 0) != derive_seed(1, FinerEmbedding{30, 1}, 0));
  CHECK(derive_seed(1, SirenEmbedding{30}, 0) != derive_seed(1, FinerEmbedding{30, 0}, 0));
}

TEST_CASE("score_candidate agrees with brute-force spectra and min-cost transport") {
  const Image target = lcg_image(9, 1, 16);
  const auto options = small_options();
  const auto grid = make_grid(ModelKind::siren, std::vector<double>{20, 60});
  const SelectionReport report = select(grid, target, options);

  const auto target_mass = normalized_head(oracle::brute_spectrum(target), options.n);
  for (std::size_t i = 0; i < grid.candidates.size(); ++i) {
    const auto& score = report.scores[i];
    REQUIRE(score.distances.size() == 3);
    double sum = 0.0;
    for (int r = 0; r < 3; ++r) {
      const Image out = render_init_output(grid.candidates[i], options.arch, 1,
                                           derive_seed(options.seed, grid.candidates[i], r), 16);
      const auto model_mass = normalized_head(oracle::brute_spectrum(out), options.n);
      const double expected = oracle::min_cost_transport(model_mass, target_mass);
      CHECK(score.distances[r] == doctest::Approx(expected).epsilon(1e-6));
      sum += expected;
    }
    const double mean = sum / 3;
    CHECK(score.mean == doctest::Approx(mean).epsilon(1e-6));
    double ss = 0.0;
    for (double d : score.distances) ss += (d - score.mean) * (d - score.mean);
    CHECK(score.se == doctest::Approx(std::sqrt(ss / 2) / std::sqrt(3.0)));
  }
}

TEST_CASE("select") {
  const Image target = lcg_image(10, 3, 16);
  const auto options = small_options();
  const auto grid = make_grid(ModelKind::siren, std::vector<double>{10, 30, 90});

  SUBCASE("chooses the smallest mean distance") {
    const auto report = select(grid, target, options);
    CHECK(report.n == 8);
    CHECK(report.resolution == 16);
    for (const auto& s : report.scores) CHECK(report.best().mean <= s.mean);
    CHECK(report.scores[1].value == 30);
  }
  SUBCASE("scores do not depend on grid position or job count") {
    const auto a = select(grid, target, options);
    auto parallel = options;
    parallel.jobs = 3;
    const auto b = select(make_grid(ModelKind::siren, std::vector<double>{90, 30}), target, parallel);
    CHECK(b.scores[1].distances == a.scores[1].distances);
    CHECK(b.scores[0].distances == a.scores[2].distances);
  }
  SUBCASE("seed changes the draws") {
    auto other = options;
    other.seed = 6;
    CHECK(select(grid, target, other).scores[0].distances != select(grid, target, options).scores[0].distances);
  }
  SUBCASE("a single repeat has zero standard error") {
    auto one = options;
    one.repeats = 1;
    for (const auto& s : select(grid, target, one).scores) CHECK(s.se == 0.0);
  }
  SUBCASE("non-square targets are resampled") {
    Image wide(1, 20, 32);
    oracle::Lcg rng(3);
    for (double& v : wide.data) v = rng.uniform();
    const auto report = select(grid, wide, options);
    CHECK(report.scores.size() == 3);
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(select(grid, Image(1, 16, 16, 0.5), options), DegenerateInput);
    auto bad = options;
    bad.n = 16;
    CHECK_THROWS_AS(select(grid, target, bad), InvalidArgument);
    bad = options;
    bad.repeats = 0;
    CHECK_THROWS_AS(select(grid, target, bad), InvalidArgument);
  }
}

TEST_CASE("smoother targets pick lower embedding frequencies") {
  SelectOptions options;
  options.n = 24;
  options.repeats = 3;
  options.resolution = 48;
  options.arch = {2, 32, 30.0};
  const auto grid = make_grid(ModelKind::siren, std::vector<double>{5, 20, 80, 320});
  const Image smooth = synth_lowfreq(48, 2, 4, 1);
  const Image noise = lcg_image(12, 1, 48);
  const auto low = select(grid, smooth, options);
  const auto high = select(grid, noise, options);
  CHECK(low.best().value < high.best().value);
}

TEST_CASE("selection edge cases") {
  const Image target = lcg_image(13, 1, 16);
  const auto options = small_options();

  SUBCASE("a single candidate is chosen") {
    const auto report = select(make_grid(ModelKind::fourier, std::vector<double>{4}), target, options);
    CHECK(report.chosen == 0);
  }
  SUBCASE("ties go to the lowest frequency") {
    std::vector<CandidateScore> scores(3);
    scores[0].value = 40;
    scores[0].mean = 0.5;
    scores[1].value = 20;
    scores[1].mean = 0.5;
    scores[2].value = 30;
    scores[2].mean = 0.7;
    CHECK(choose_candidate(scores) == 1);
    scores[2].mean = 0.4;
    CHECK(choose_candidate(scores) == 2);
    CHECK_THROWS_AS(choose_candidate({}), InvalidArgument);
  }
  SUBCASE("a scaled target gives the same table") {
    const auto grid = make_grid(ModelKind::siren, std::vector<double>{10, 30, 90});
    const auto base = select(grid, target, options);
    for (double alpha : {0.5, 2.0}) {
      Image scaled = target;
      for (double& v : scaled.data) v *= alpha;
      const auto other = select(grid, scaled, options);
      CHECK(other.chosen == base.chosen);
      for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(other.scores[i].mean - base.scores[i].mean) < 1e-9);
    }
  }
  SUBCASE("distance to the model's own output is zero") {
    const EmbeddingConfig config = SirenEmbedding{40};
    auto one = options;
    one.repeats = 1;
    const Image own = render_init_output(config, one.arch, 1, derive_seed(one.seed, config, 0), one.resolution);
    const NormalizedSpectrum spectrum = normalize(spectrum_cropped(own, one.n));
    const auto score = score_candidate(config, 1, std::span<const NormalizedSpectrum>(&spectrum, 1), one);
    CHECK(score.mean == 0.0);
    CHECK(score.se == 0.0);
  }
  SUBCASE("initial outputs are seeded") {
    const EmbeddingConfig config = FinerEmbedding{30, 1};
    CHECK(render_init_output(config, options.arch, 3, 1, 8).data ==
          render_init_output(config, options.arch, 3, 1, 8).data);
    CHECK(render_init_output(config, options.arch, 3, 1, 8).data !=
          render_init_output(config, options.arch, 3, 2, 8).data);
  }
}

TEST_CASE("mean embedding frequency grows with omega0") {
  double previous = 0.0;
  for (const auto& c : default_grid(ModelKind::siren).candidates) {
    // Same draw for every candidate, so only the scale differs.
    const auto m = init_model<double>(c, {1, 256, 30.0}, 1, 11);
    double mean = 0.0;
    for (double v : frequency_magnitudes(m)) mean += v / 256;
    CHECK(mean > previous);
    previous = mean;
  }
}
