// ----------------------------------------------------------------------------
// Copyright 2026 The GLAN Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ----------------------------------------------------------------------------

#include "glan/numerics/kernels.hpp"

#include <cstdlib>
#include <string>

#include "glan/errors.hpp"

namespace glan::simd {

namespace scalar {

template <typename T>
static T dot_impl(const T* a, const T* b, std::size_t n) {
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

template <typename T>
static void axpy_impl(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

float dot(const float* a, const float* b, std::size_t n) { return dot_impl(a, b, n); }
double dot(const double* a, const double* b, std::size_t n) { return dot_impl(a, b, n); }
void axpy(float alpha, const float* x, float* y, std::size_t n) { axpy_impl(alpha, x, y, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { axpy_impl(alpha, x, y, n); }

}  // namespace scalar

namespace {

struct KernelTable {
  Isa isa;
  float (*dot_f)(const float*, const float*, std::size_t);
  double (*dot_d)(const double*, const double*, std::size_t);
  void (*axpy_f)(float, const float*, float*, std::size_t);
  void (*axpy_d)(double, const double*, double*, std::size_t);
};

KernelTable table_for(Isa isa) {
  switch (isa) {
    case Isa::kAvx2:
      return {isa, avx2::dot, avx2::dot, avx2::axpy, avx2::axpy};
    case Isa::kNeon:
      return {isa, neon::dot, neon::dot, neon::axpy, neon::axpy};
    case Isa::kScalar:
      break;
  }
  return {Isa::kScalar, scalar::dot, scalar::dot, scalar::axpy, scalar::axpy};
}

Isa initial_isa() {
  if (const char* env = std::getenv("GLAN_SIMD")) {
    std::string_view want(env);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (want == isa_name(isa) && isa_supported(isa)) return isa;
    }
  }
  return best_isa();
}

KernelTable& active() {
  static KernelTable table = table_for(initial_isa());
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2: return avx2::available();
    case Isa::kNeon: return neon::available();
  }
  return false;
}

Isa best_isa() {
  if (avx2::available()) return Isa::kAvx2;
  if (neon::available()) return Isa::kNeon;
  return Isa::kScalar;
}

Isa active_isa() { return active().isa; }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw DomainError("SIMD variant not supported on this CPU: " + std::string(isa_name(isa)));
  }
  active() = table_for(isa);
}

float dot(const float* a, const float* b, std::size_t n) { return active().dot_f(a, b, n); }
double dot(const double* a, const double* b, std::size_t n) { return active().dot_d(a, b, n); }
void axpy(float alpha, const float* x, float* y, std::size_t n) { active().axpy_f(alpha, x, y, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { active().axpy_d(alpha, x, y, n); }

}  // namespace glan::simd
