// Copyright 2026 The nfdm Authors
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

#include "nfdm/pulse.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "nfdm/errors.hpp"

namespace nfdm {

TimeGrid TimeGrid::centered(double half_width, std::size_t count) {
  TimeGrid g{-half_width, 2.0 * half_width / static_cast<double>(count), count};
  g.validate();
  return g;
}

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t_start))
    throw DomainError("TimeGrid: dt must be positive and finite");
  if (count < 2) throw DomainError("TimeGrid: at least two samples required");
}

SampledPulse::SampledPulse(std::vector<Complex> samples, double t_start, double dt)
    : samples_(std::move(samples)), t_start_(t_start), dt_(dt) {
  TimeGrid{t_start, dt, samples_.size()}.validate();
  for (const auto& s : samples_)
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw DomainError("SampledPulse: non-finite sample");
}

SampledPulse SampledPulse::zeros(const TimeGrid& grid) {
  return SampledPulse(std::vector<Complex>(grid.count), grid.t_start, grid.dt);
}

double SampledPulse::energy() const {
  double sum = 0.0;
  for (const auto& s : samples_) sum += std::norm(s);
  sum -= 0.5 * (std::norm(samples_.front()) + std::norm(samples_.back()));
  return sum * dt_;
}

double SampledPulse::peak() const {
  double p = 0.0;
  for (const auto& s : samples_) p = std::max(p, std::abs(s));
  return p;
}

SampledPulse SampledPulse::slice(std::size_t first, std::size_t count) const {
  if (first + count > samples_.size()) throw DomainError("SampledPulse::slice: out of range");
  return SampledPulse(
      std::vector<Complex>(samples_.begin() + static_cast<std::ptrdiff_t>(first),
                           samples_.begin() + static_cast<std::ptrdiff_t>(first + count)),
      time(first), dt_);
}

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

std::filesystem::path with_suffix(const std::filesystem::path& base, const char* ext) {
  auto p = base;
  p += ext;
  return p;
}

}  // namespace

void write_pulse(const SampledPulse& pulse, const std::filesystem::path& base) {
  std::ofstream bin(with_suffix(base, ".bin"), std::ios::binary);
  if (!bin) throw IoError("cannot open " + with_suffix(base, ".bin").string());
  for (const auto& s : pulse.samples()) {
    for (double part : {s.real(), s.imag()}) {
      const std::uint64_t word = to_le(std::bit_cast<std::uint64_t>(part));
      bin.write(reinterpret_cast<const char*>(&word), sizeof word);
    }
  }
  nlohmann::json meta{{"t_start", pulse.t_start()}, {"dt", pulse.dt()}, {"count", pulse.size()}};
  std::ofstream side(with_suffix(base, ".json"));
  if (!side) throw IoError("cannot open " + with_suffix(base, ".json").string());
  side << meta.dump(2) << '\n';
}

SampledPulse read_pulse(const std::filesystem::path& base) {
  std::ifstream side(with_suffix(base, ".json"));
  if (!side) throw IoError("cannot open " + with_suffix(base, ".json").string());
  const auto meta = nlohmann::json::parse(side);
  const auto count = meta.at("count").get<std::size_t>();
  std::ifstream bin(with_suffix(base, ".bin"), std::ios::binary);
  if (!bin) throw IoError("cannot open " + with_suffix(base, ".bin").string());
  std::vector<Complex> samples(count);
  for (auto& s : samples) {
    std::uint64_t words[2];
    bin.read(reinterpret_cast<char*>(words), sizeof words);
    if (!bin) throw IoError(with_suffix(base, ".bin").string() + ": truncated sample data");
    s = Complex(std::bit_cast<double>(to_le(words[0])), std::bit_cast<double>(to_le(words[1])));
  }
  return SampledPulse(std::move(samples), meta.at("t_start").get<double>(),
                      meta.at("dt").get<double>());
}

}  // namespace nfdm
