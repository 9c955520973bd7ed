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

#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace nfdm {

/// In-place complex FFT of fixed length backed by FFTW. Plans are built with
/// FFTW_ESTIMATE so results are reproducible run to run. Not shareable across
/// threads; create one per task.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;

  std::size_t size() const noexcept { return n_; }

  /// X_k = sum_n x_n exp(-2 pi j k n / N)
  void forward(std::span<std::complex<double>> data) const;
  /// x_n = (1/N) sum_k X_k exp(+2 pi j k n / N)
  void inverse(std::span<std::complex<double>> data) const;

 private:
  void release() noexcept;
  std::size_t n_ = 0;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Angular frequency of FFT bin k for sample spacing dt (natural order,
/// negative frequencies in the upper half).
double angular_frequency(std::size_t k, std::size_t n, double dt) noexcept;

}  // namespace nfdm
