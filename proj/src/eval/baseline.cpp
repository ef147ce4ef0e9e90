#include <algorithm>
#include <unordered_map>

#include "hashcoll/eval.hpp"

namespace hashcoll {

std::vector<AccuracyRow> topk_accuracy(const HashBank& bank, const std::vector<NamedImage>& corpus,
                                       const std::vector<AugSpec>& augs, const std::vector<std::size_t>& ks) {
  if (ks.empty()) throw std::invalid_argument("topk_accuracy: no k values");
  std::vector<std::size_t> truth(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto idx = bank.find(corpus[i].id);
    if (!idx) throw std::invalid_argument("topk_accuracy: corpus id not in bank: " + corpus[i].id);
    truth[i] = *idx;
  }
  const std::size_t kmax = *std::max_element(ks.begin(), ks.end());

  std::vector<AccuracyRow> rows;
  for (const auto& aug : augs) {
    // rank[i] = position of the true id in the top-kmax list, or kmax if absent.
    std::vector<std::size_t> rank(corpus.size(), kmax);
    const auto n = static_cast<long>(corpus.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < n; ++i) {
      const auto probe = hash_image(augment(corpus[i].image, aug, static_cast<std::uint64_t>(i)), bank.spec());
      const auto top = nn_query(bank, probe, kmax);
      for (std::size_t p = 0; p < top.size(); ++p) {
        if (top[p].index == truth[i]) {
          rank[i] = p;
          break;
        }
      }
    }
    for (std::size_t k : ks) {
      const auto hits = std::count_if(rank.begin(), rank.end(), [&](std::size_t r) { return r < k; });
      rows.push_back({aug.label(), k, corpus.empty() ? 0.0 : static_cast<double>(hits) / corpus.size()});
    }
  }
  return rows;
}

double collision_rate(const HashBank& bank) {
  if (bank.size() == 0) return 0.0;
  struct WordsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const {
      std::size_t h = 0;
      for (auto w : v) h = h * 0x9e3779b97f4a7c15ULL ^ (w + (h << 6) + (h >> 2));
      return h;
    }
  };
  const std::size_t w = bank.words_per_hash();
  std::unordered_map<std::vector<std::uint64_t>, std::size_t, WordsHash> counts;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    auto first = bank.packed().begin() + static_cast<std::ptrdiff_t>(i * w);
    ++counts[std::vector<std::uint64_t>(first, first + static_cast<std::ptrdiff_t>(w))];
  }
  std::size_t shared = 0;
  for (const auto& [_, c] : counts) {
    if (c > 1) shared += c;
  }
  return static_cast<double>(shared) / static_cast<double>(bank.size());
}

DistanceSamples collect_nn_distances(const HashBank& bank, const std::vector<NamedImage>& members,
                                     const std::vector<NamedImage>& distractors, const std::vector<AugSpec>& augs) {
  DistanceSamples out;
  for (const auto& aug : augs) {
    std::vector<std::size_t> dist(members.size());
    std::vector<char> genuine(members.size());
    const auto n = static_cast<long>(members.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < n; ++i) {
      const auto truth = bank.find(members[i].id);
      const auto probe = hash_image(augment(members[i].image, aug, static_cast<std::uint64_t>(i)), bank.spec());
      const auto nn = nn_query(bank, probe, 1).front();
      dist[i] = nn.distance;
      genuine[i] = truth && nn.index == *truth;
    }
    for (std::size_t i = 0; i < members.size(); ++i) (genuine[i] ? out.genuine : out.impostor).push_back(dist[i]);
  }
  std::vector<std::size_t> dd(distractors.size());
  const auto nd = static_cast<long>(distractors.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < nd; ++i) dd[i] = nn_query(bank, hash_image(distractors[i].image, bank.spec()), 1).front().distance;
  out.impostor.insert(out.impostor.end(), dd.begin(), dd.end());
  return out;
}

}  // namespace hashcoll
