// Copyright 2026 qvar developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qvar/landscape.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <thread>
#include <utility>

#include "qvar/error.hpp"
#include "qvar/rng.hpp"
#include "qvar/solvers.hpp"

namespace qvar {

namespace {

constexpr int kScanCapacity = 20;
constexpr int kChunkSamples = 128;

// Per-variable running statistics (Welford) for one chunk of samples.
struct ChunkStats {
  long long count = 0;
  std::vector<double> mean;
  std::vector<double> m2;
};

void accumulate(ChunkStats& stats, std::span<const double> gradients) {
  stats.count += 1;
  for (std::size_t i = 0; i < gradients.size(); ++i) {
    double delta = gradients[i] - stats.mean[i];
    stats.mean[i] += delta / static_cast<double>(stats.count);
    stats.m2[i] += delta * (gradients[i] - stats.mean[i]);
  }
}

// Chan et al. pairwise merge; applied in fixed chunk order.
void merge(ChunkStats& into, const ChunkStats& from) {
  if (from.count == 0) return;
  if (into.count == 0) {
    into = from;
    return;
  }
  const double na = static_cast<double>(into.count);
  const double nb = static_cast<double>(from.count);
  const double total = na + nb;
  for (std::size_t i = 0; i < into.mean.size(); ++i) {
    double delta = from.mean[i] - into.mean[i];
    into.m2[i] += from.m2[i] + delta * delta * na * nb / total;
    into.mean[i] += delta * nb / total;
  }
  into.count += from.count;
}

void gradients_of(const QuboInstance& instance, std::span<const std::uint8_t> bits,
                  std::span<double> out) {
  const int n = instance.n();
  local_fields(instance, bits, out);
  for (int i = 0; i < n; ++i) {
    out[i] *= (1.0 - 2.0 * static_cast<double>(bits[i]));
  }
}

LandscapeReport finalize(const ChunkStats& stats, int n, int samples, std::uint64_t seed,
                         Normalization normalization) {
  LandscapeReport report;
  report.samples = samples;
  report.seed = seed;
  report.normalization = normalization;
  report.per_var.resize(n);
  double aggregate = 0.0;
  for (int i = 0; i < n; ++i) {
    report.per_var[i] = stats.m2[i] / static_cast<double>(stats.count - 1);
    aggregate += report.per_var[i];
  }
  if (normalization == Normalization::kPerVariable) aggregate /= static_cast<double>(n);
  report.sigma2_grad = aggregate;
  report.sigma_grad = std::sqrt(aggregate);
  return report;
}

}  // namespace

double gradient_at(const QuboInstance& instance, std::span<const std::uint8_t> bits, int index) {
  return flip_delta(instance, bits, index);
}

double analytic_gradient_at(const QuboInstance& instance, std::span<const std::uint8_t> bits,
                            int index) {
  const int n = instance.n();
  if (static_cast<int>(bits.size()) != n) {
    throw_invalid("assignment length does not match instance size");
  }
  if (index < 0 || index >= n) throw_invalid("gradient index out of range");
  const double* row = instance.q().row(index);
  double value = row[index];
  for (int j = 0; j < n; ++j) {
    if (j != index && bits[j]) value += 2.0 * row[j];
  }
  return value;
}

LandscapeReport gradient_variance(const QuboInstance& instance, const LandscapeOptions& options) {
  const int n = instance.n();
  if (options.num_samples < 2) throw_invalid("gradient variance requires num_samples >= 2");

  const int num_chunks = (options.num_samples + kChunkSamples - 1) / kChunkSamples;
  std::vector<ChunkStats> chunks(num_chunks);
  for (ChunkStats& c : chunks) {
    c.mean.assign(n, 0.0);
    c.m2.assign(n, 0.0);
  }

  // Each sample's configuration comes from its own stream derived from
  // (seed, sample index); chunk results merge in index order below. Both
  // facts together make the estimate independent of the thread count.
  auto run_chunk = [&](int chunk) {
    std::vector<std::uint8_t> bits(n);
    std::vector<double> grads(n);
    const int begin = chunk * kChunkSamples;
    const int end = std::min(options.num_samples, begin + kChunkSamples);
    for (int s = begin; s < end; ++s) {
      RngStream rng(derive_seed(options.seed, static_cast<std::uint64_t>(s)));
      bits = rng.bits(static_cast<std::size_t>(n));
      gradients_of(instance, bits, grads);
      accumulate(chunks[chunk], grads);
    }
  };

  const int threads = std::max(1, options.threads);
  if (threads == 1 || num_chunks == 1) {
    for (int c = 0; c < num_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, num_chunks);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int c = next.fetch_add(1); c < num_chunks; c = next.fetch_add(1)) {
          run_chunk(c);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  ChunkStats total;
  total.mean.assign(n, 0.0);
  total.m2.assign(n, 0.0);
  for (const ChunkStats& c : chunks) merge(total, c);
  return finalize(total, n, options.num_samples, options.seed, options.normalization);
}

LandscapeReport gradient_variance_from_samples(
    const QuboInstance& instance, const std::vector<std::vector<std::uint8_t>>& samples,
    Normalization normalization) {
  const int n = instance.n();
  if (samples.size() < 2) throw_invalid("gradient variance requires at least two samples");
  ChunkStats total;
  total.mean.assign(n, 0.0);
  total.m2.assign(n, 0.0);
  std::vector<double> grads(n);
  for (const auto& bits : samples) {
    if (static_cast<int>(bits.size()) != n) {
      throw_invalid("sample length does not match instance size");
    }
    gradients_of(instance, bits, grads);
    accumulate(total, grads);
  }
  return finalize(total, n, static_cast<int>(samples.size()), 0, normalization);
}

ScanResult landscape_scan(const QuboInstance& instance) {
  const int n = instance.n();
  if (n > kScanCapacity) {
    throw_capacity("landscape scan is limited to " + std::to_string(kScanCapacity) +
                   " variables (got " + std::to_string(n) + ")");
  }
  const std::size_t count = std::size_t{1} << n;

  ScanResult result;
  result.energies.resize(count);

  std::vector<std::uint8_t> bits(n, 0);
  std::vector<double> fields(n);
  local_fields(instance, bits, fields);
  double energy = instance.offset();

  double min_tracked = energy;
  long long local_minima = 0;

  std::size_t mask = 0;
  for (std::size_t k = 0;; ++k) {
    result.energies[mask] = energy;
    min_tracked = std::min(min_tracked, energy);
    bool is_local_min = true;
    for (int i = 0; i < n; ++i) {
      if ((1.0 - 2.0 * static_cast<double>(bits[i])) * fields[i] < 0.0) {
        is_local_min = false;
        break;
      }
    }
    if (is_local_min) ++local_minima;

    if (k + 1 == count) break;
    // Gray-code step: flip the lowest set bit of k+1.
    int flip = std::countr_zero(k + 1);
    double delta = (1.0 - 2.0 * static_cast<double>(bits[flip])) * fields[flip];
    bits[flip] ^= 1u;
    energy += delta;
    mask ^= std::size_t{1} << flip;
    update_fields_after_flip(instance, bits, flip, fields);
  }

  // The incremental energies can drift by rounding, so minimizer membership
  // is decided by fresh evaluations: gather every configuration within a
  // band of the tracked minimum and re-evaluate exactly those.
  const double band = 1e-7 * (1.0 + std::abs(min_tracked));
  double min_exact = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::size_t, double>> candidates;
  std::vector<std::uint8_t> config(n);
  for (std::size_t m = 0; m < count; ++m) {
    if (result.energies[m] > min_tracked + band) continue;
    for (int i = 0; i < n; ++i) config[i] = static_cast<std::uint8_t>((m >> i) & 1u);
    double exact = evaluate(instance, config);
    candidates.push_back({m, exact});
    min_exact = std::min(min_exact, exact);
  }
  for (const auto& [m, exact] : candidates) {
    if (energies_match(exact, min_exact)) {
      for (int i = 0; i < n; ++i) config[i] = static_cast<std::uint8_t>((m >> i) & 1u);
      result.minimizers.push_back(config);
    }
  }
  std::sort(result.minimizers.begin(), result.minimizers.end());
  result.min_energy = min_exact;
  result.local_minima = local_minima;
  return result;
}

}  // namespace qvar
