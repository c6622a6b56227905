#include <benchmark/benchmark.h>

#include <random>

#include "liftlim/gallery.hpp"
#include "liftlim/kernels.hpp"

using namespace liftlim;

namespace {

std::vector<Word> corpus(const Alphabet& a, std::size_t n) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> len(1, 16), gen(0, a.size() - 1);
  std::vector<Word> out;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Letter> letters;
    for (std::size_t i = len(rng); i > 0; --i) letters.push_back({static_cast<std::uint32_t>(gen(rng)), rng() % 2 ? 1 : -1});
    out.emplace_back(a, letters);
  }
  return out;
}

template <bool Parallel>
void BM_pi1_hawaiian(benchmark::State& state) {
  const GalleryEntry e = make_gallery("hawaiian", {{"n", 8}});
  const auto words = corpus(e.base.group->alphabet, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto r = Parallel ? batch_pi1(e.tower, e.base, words, 16) : batch_pi1_serial(e.tower, e.base, words, 16);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_pi1_dyadic(benchmark::State& state) {
  const GalleryEntry e = make_gallery("p-solenoid");
  std::vector<Word> words;
  for (long k = 1; k <= state.range(0); ++k) words.push_back(Word::generator(e.base.group->alphabet, 0, Integer(k)));
  for (auto _ : state) {
    auto r = Parallel ? batch_pi1(e.tower, e.base, words, 24) : batch_pi1_serial(e.tower, e.base, words, 24);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_stage_indices(benchmark::State& state) {
  const GalleryEntry e = make_gallery("p-solenoid", {{"p", 7}});
  const auto h = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto r = Parallel ? stage_indices(e.tower, h) : stage_indices_serial(e.tower, h);
    benchmark::DoNotOptimize(r);
  }
}

}  // namespace

BENCHMARK(BM_pi1_hawaiian<false>)->Arg(256)->Arg(2048);
BENCHMARK(BM_pi1_hawaiian<true>)->Arg(256)->Arg(2048);
BENCHMARK(BM_pi1_dyadic<false>)->Arg(1024);
BENCHMARK(BM_pi1_dyadic<true>)->Arg(1024);
BENCHMARK(BM_stage_indices<false>)->Arg(64);
BENCHMARK(BM_stage_indices<true>)->Arg(64);

BENCHMARK_MAIN();
