#include <benchmark/benchmark.h>

#include <random>

#include "safebox/dataset.hpp"
#include "safebox/geometry.hpp"
#include "safebox/logic/builtin.hpp"
#include "safebox/logic/derive.hpp"
#include "safebox/logic/parser.hpp"
#include "safebox/logic/proof.hpp"
#include "safebox/postproc.hpp"

namespace {

std::vector<safebox::Detection> random_detections(std::size_t n,
                                                  unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> pos(0.0, 600.0);
  std::uniform_real_distribution<double> size(5.0, 60.0);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::vector<safebox::Detection> dets;
  dets.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pos(gen), y = pos(gen);
    dets.push_back(safebox::Detection{
        safebox::BBox(x, y, x + size(gen), y + size(gen)), score(gen)});
  }
  return dets;
}

void bm_iou(benchmark::State& state) {
  const safebox::BBox a(10, 10, 60, 90);
  const safebox::BBox b(30, 5, 80, 70);
  for (auto _ : state) {
    benchmark::DoNotOptimize(safebox::iou(a, b));
  }
}
BENCHMARK(bm_iou);

void bm_min_enlargement_ratio(benchmark::State& state) {
  const safebox::BBox pred(10, 10, 60, 90);
  const safebox::BBox label(5, 15, 70, 85);
  for (auto _ : state) {
    benchmark::DoNotOptimize(safebox::min_enlargement_ratio(pred, label));
  }
}
BENCHMARK(bm_min_enlargement_ratio);

void bm_nms(benchmark::State& state) {
  const auto dets =
      random_detections(static_cast<std::size_t>(state.range(0)), 42);
  const safebox::NmsConfig config{0.5, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(safebox::nms(dets, config));
  }
}
BENCHMARK(bm_nms)->Arg(64)->Arg(256)->Arg(1024);

void bm_check_script(benchmark::State& state) {
  using namespace safebox::logic;
  const Signature sig = builtin_signature();
  const auto claims = builtin_claims(sig);
  const std::map<std::string, FormulaPtr> axioms{
      {"E2", claims.at("E2")}, {"E3", claims.at("E3")}, {"E4", claims.at("E4")}};
  const auto script = parse_script(
      "lemma E2\nlemma E3\nlemma E4\nskolem 1 d1\ninst -2 d1\ninst -3 d1\n"
      "inst -1 Enlarge(DNN(d1)) label(d1) ground_truth(d1)\nprop\n");
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_script(sig, axioms, claims.at("E5"), script));
  }
}
BENCHMARK(bm_check_script);

void bm_derive_goal(benchmark::State& state) {
  using namespace safebox::logic;
  const Signature sig = builtin_signature();
  const auto claims = builtin_claims(sig);
  const std::map<std::string, FormulaPtr> axioms{{"E1", claims.at("E1")},
                                                 {"E2", claims.at("E2")},
                                                 {"E3", claims.at("E3")},
                                                 {"E4", claims.at("E4")}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        derive_bounded(sig, axioms, claims.at("G1"),
                       static_cast<int>(state.range(0))));
  }
}
BENCHMARK(bm_derive_goal)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
