#include "sma/neural.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sma/errors.hpp"
#include "sma/parallel.hpp"
#include "sma/random.hpp"

namespace sma {

namespace {

const std::uint64_t kRowLabel = SeedPath::hash_label("row");

constexpr std::size_t kRowsPerChunk = 4096;  // multiple of 64: chunks own whole output words

// Materialized sweeps above this many synapses fall back to re-evaluation.
constexpr double kMaxMaterializedSynapses = 6.0e7;

void check_layer(int layer) {
  if (layer != 1 && layer != 2) throw UsageError("layer must be 1 or 2");
}

// Compressed rows (incoming synapses) and columns (outgoing synapses) of one
// layer.
struct SparseLayer {
  std::vector<std::uint32_t> row_start;
  std::vector<std::uint32_t> row_source;
  std::vector<std::int8_t> row_sign;
  std::vector<std::uint32_t> col_start;
  std::vector<std::uint32_t> col_target;
  std::vector<std::int8_t> col_sign;
};

}  // namespace

NeuralAllocator::NeuralAllocator(std::size_t n, double p, double c1, double c2,
                                 const SeedPath& seed, std::optional<double> gamma)
    : n_(n), p_(p), c1_(c1), c2_(c2), gamma_(gamma) {
  if (n == 0 || n > 0xFFFFFFFFULL) throw UsageError("layer width must be in [1, 2^32)");
  if (!(p > 0.0 && 2.0 * p <= 1.0)) throw UsageError("edge probability must satisfy 0 < 2p <= 1");
  if (!(c1 > 0.0 && c1 < 1.0) || !(c2 > 0.0 && c2 < 1.0)) {
    throw UsageError("thresholds must lie in (0, 1)");
  }
  layer_key_[0] = seed.child("layer", 1).key();
  layer_key_[1] = seed.child("layer", 2).key();
}

template <class Visit>
void NeuralAllocator::generate_row(int layer, std::size_t target,
                                   std::vector<std::uint32_t>& sources, SampleScratch& scratch,
                                   Visit&& visit) const {
  Rng rng(SeedPath::derive(layer_key_[layer - 1], kRowLabel, target));
  const auto n32 = static_cast<std::uint32_t>(n_);
  const auto k = static_cast<std::uint32_t>(binomial(rng, n_, 2.0 * p_));
  sources.clear();
  sample_distinct(rng, n32, k, sources, scratch);
  std::uint64_t signs = 0;
  for (std::uint32_t e = 0; e < k; ++e) {
    if (e % 64 == 0) signs = rng();
    visit(sources[e], ((signs >> (e % 64)) & 1U) != 0);
  }
}

std::vector<NeuralAllocator::Synapse> NeuralAllocator::row_synapses(int layer,
                                                                    std::size_t target) const {
  check_layer(layer);
  if (target >= n_) throw UsageError("target neuron out of range");
  SampleScratch scratch(n_);
  std::vector<std::uint32_t> sources;
  std::vector<Synapse> out;
  generate_row(layer, target, sources, scratch, [&](std::uint32_t src, bool positive) {
    out.push_back({src, static_cast<std::int8_t>(positive ? 1 : -1)});
  });
  return out;
}

int NeuralAllocator::synapse(int layer, std::size_t source, std::size_t target) const {
  if (source >= n_) throw UsageError("source neuron out of range");
  for (const auto& s : row_synapses(layer, target)) {
    if (s.source == source) return s.sign;
  }
  return 0;
}

std::vector<BitVector> NeuralAllocator::layer_forward(int layer, std::span<const BitVector> xs,
                                                      double c, unsigned threads) const {
  check_layer(layer);
  if (!(c >= 0.0 && c <= 1.0)) throw UsageError("threshold must lie in [0, 1]");
  const std::size_t batch = xs.size();
  std::vector<const std::uint64_t*> in(batch);
  std::vector<BitVectorBuilder> out;
  out.reserve(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    if (xs[b].size() != n_) {
      throw UsageError("input length " + std::to_string(xs[b].size()) +
                       " does not match layer width " + std::to_string(n_));
    }
    in[b] = xs[b].words().data();
    out.emplace_back(n_);
  }
  if (batch == 0) return {};

  const std::size_t chunks = (n_ + kRowsPerChunk - 1) / kRowsPerChunk;
  parallel_for(chunks, threads, [&](std::size_t chunk) {
    SampleScratch scratch(n_);
    std::vector<std::uint32_t> sources;
    std::vector<std::uint32_t> pos(batch), neg(batch);
    const std::size_t begin = chunk * kRowsPerChunk;
    const std::size_t end = std::min(n_, begin + kRowsPerChunk);
    for (std::size_t j = begin; j < end; ++j) {
      if (batch == 1) {
        std::uint32_t p = 0, q = 0;
        const std::uint64_t* w = in[0];
        generate_row(layer, j, sources, scratch, [&](std::uint32_t src, bool positive) {
          const auto bit = static_cast<std::uint32_t>((w[src >> 6] >> (src & 63)) & 1U);
          p += positive ? bit : 0;
          q += positive ? 0 : bit;
        });
        pos[0] = p;
        neg[0] = q;
      } else {
        std::fill(pos.begin(), pos.end(), 0);
        std::fill(neg.begin(), neg.end(), 0);
        generate_row(layer, j, sources, scratch, [&](std::uint32_t src, bool positive) {
          auto& acc = positive ? pos : neg;
          for (std::size_t b = 0; b < batch; ++b) {
            acc[b] += static_cast<std::uint32_t>((in[b][src >> 6] >> (src & 63)) & 1U);
          }
        });
      }
      for (std::size_t b = 0; b < batch; ++b) {
        if (divisive_fires(pos[b], neg[b], c)) out[b].set(j);
      }
    }
  });

  std::vector<BitVector> result;
  result.reserve(batch);
  for (auto& o : out) result.push_back(std::move(o).finish());
  return result;
}

BitVector NeuralAllocator::layer_forward(int layer, const BitVector& x, double c,
                                         unsigned threads) const {
  return std::move(layer_forward(layer, std::span<const BitVector>(&x, 1), c, threads).front());
}

std::vector<NeuralAllocator::Trace> NeuralAllocator::trace(std::span<const BitVector> xs,
                                                           unsigned threads) const {
  auto middle = layer_forward(1, xs, c1_, threads);
  auto output = layer_forward(2, std::span<const BitVector>(middle), c2_, threads);
  std::vector<Trace> traces;
  traces.reserve(xs.size());
  for (std::size_t b = 0; b < xs.size(); ++b) {
    traces.push_back({std::move(middle[b]), std::move(output[b])});
  }
  return traces;
}

NeuralAllocator::Trace NeuralAllocator::trace(const BitVector& x, unsigned threads) const {
  return std::move(trace(std::span<const BitVector>(&x, 1), threads).front());
}

BitVector NeuralAllocator::apply(const BitVector& x) const { return apply(x, 1); }

BitVector NeuralAllocator::apply(const BitVector& x, unsigned threads) const {
  return std::move(trace(x, threads).output);
}

std::vector<std::uint32_t> NeuralAllocator::unit_flip_distances(const BitVector& x) const {
  return unit_flip_distances(std::span<const BitVector>(&x, 1)).front();
}

std::vector<std::vector<std::uint32_t>> NeuralAllocator::unit_flip_distances(
    std::span<const BitVector> xs) const {
  for (const auto& x : xs) {
    if (x.size() != n_) throw UsageError("input length does not match layer width");
  }
  const double expected = 2.0 * static_cast<double>(n_) * static_cast<double>(n_) * 2.0 * p_;
  if (expected > kMaxMaterializedSynapses) {
    std::vector<std::vector<std::uint32_t>> out;
    for (const auto& x : xs) out.push_back(StableMemoryAllocator::unit_flip_distances(x));
    return out;
  }

  SampleScratch scratch(n_);
  std::vector<std::uint32_t> sources;
  SparseLayer layers[2];
  for (int l = 0; l < 2; ++l) {
    auto& L = layers[l];
    L.row_start.assign(n_ + 1, 0);
    L.col_start.assign(n_ + 1, 0);
    for (std::size_t j = 0; j < n_; ++j) {
      generate_row(l + 1, j, sources, scratch, [&](std::uint32_t src, bool positive) {
        L.row_source.push_back(src);
        L.row_sign.push_back(static_cast<std::int8_t>(positive ? 1 : -1));
        ++L.col_start[src + 1];
      });
      L.row_start[j + 1] = static_cast<std::uint32_t>(L.row_source.size());
    }
    for (std::size_t i = 0; i < n_; ++i) L.col_start[i + 1] += L.col_start[i];
    L.col_target.resize(L.row_source.size());
    L.col_sign.resize(L.row_source.size());
    std::vector<std::uint32_t> fill(L.col_start.begin(), L.col_start.end() - 1);
    for (std::size_t j = 0; j < n_; ++j) {
      for (auto e = L.row_start[j]; e < L.row_start[j + 1]; ++e) {
        const auto slot = fill[L.row_source[e]]++;
        L.col_target[slot] = static_cast<std::uint32_t>(j);
        L.col_sign[slot] = L.row_sign[e];
      }
    }
  }

  auto drive = [&](const SparseLayer& L, const std::vector<std::uint8_t>& input,
                   std::vector<std::int32_t>& pos, std::vector<std::int32_t>& neg,
                   std::vector<std::uint8_t>& fired, double c) {
    pos.assign(n_, 0);
    neg.assign(n_, 0);
    fired.assign(n_, 0);
    for (std::size_t j = 0; j < n_; ++j) {
      for (auto e = L.row_start[j]; e < L.row_start[j + 1]; ++e) {
        if (!input[L.row_source[e]]) continue;
        (L.row_sign[e] > 0 ? pos : neg)[j] += 1;
      }
      fired[j] = divisive_fires(static_cast<std::uint32_t>(pos[j]),
                                static_cast<std::uint32_t>(neg[j]), c);
    }
  };

  std::vector<std::uint8_t> in(n_);
  std::vector<std::int32_t> pos1, neg1, pos2, neg2;
  std::vector<std::uint8_t> mid, out;
  std::vector<std::uint32_t> changed_mid;
  std::vector<std::uint32_t> touched;
  std::vector<std::int32_t> dpos(n_, 0), dneg(n_, 0);
  std::vector<std::uint8_t> is_touched(n_, 0);
  const auto& L1 = layers[0];
  const auto& L2 = layers[1];
  std::vector<std::vector<std::uint32_t>> result;
  result.reserve(xs.size());

  for (const auto& x : xs) {
    for (std::size_t i = 0; i < n_; ++i) in[i] = x.test(i);
    drive(layers[0], in, pos1, neg1, mid, c1_);
    drive(layers[1], mid, pos2, neg2, out, c2_);

    std::vector<std::uint32_t> distances(n_);
    for (std::size_t q = 0; q < n_; ++q) {
      const std::int32_t d = in[q] ? -1 : 1;
      changed_mid.clear();
      for (auto e = L1.col_start[q]; e < L1.col_start[q + 1]; ++e) {
        const auto row = L1.col_target[e];
        std::int32_t p = pos1[row], m = neg1[row];
        (L1.col_sign[e] > 0 ? p : m) += d;
        const bool f = divisive_fires(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(m), c1_);
        if (f != static_cast<bool>(mid[row])) changed_mid.push_back(row);
      }
      touched.clear();
      for (auto m : changed_mid) {
        const std::int32_t dm = mid[m] ? -1 : 1;
        for (auto e = L2.col_start[m]; e < L2.col_start[m + 1]; ++e) {
          const auto row = L2.col_target[e];
          if (!is_touched[row]) {
            is_touched[row] = 1;
            touched.push_back(row);
          }
          (L2.col_sign[e] > 0 ? dpos : dneg)[row] += dm;
        }
      }
      std::uint32_t count = 0;
      for (auto row : touched) {
        const bool f = divisive_fires(static_cast<std::uint32_t>(pos2[row] + dpos[row]),
                                      static_cast<std::uint32_t>(neg2[row] + dneg[row]), c2_);
        count += f != static_cast<bool>(out[row]);
        dpos[row] = dneg[row] = 0;
        is_touched[row] = 0;
      }
      distances[q] = count;
    }
    result.push_back(std::move(distances));
  }
  return result;
}

NeuralAllocator sample_neural(std::size_t n, double p, double c1, double c2,
                              const SeedPath& seed) {
  return NeuralAllocator(n, p, c1, c2, seed);
}

BitVector layer_forward(const NeuralAllocator& h, int layer, const BitVector& x, double c) {
  return h.layer_forward(layer, x, c);
}

BitVector apply_neural(const NeuralAllocator& h, const BitVector& x, unsigned threads) {
  return h.apply(x, threads);
}

}  // namespace sma
