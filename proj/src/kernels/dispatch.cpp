// Copyright 2026 The rratio Authors
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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "rratio/kernels.hpp"

namespace rratio::kernels {

#if !RRATIO_HAVE_AVX2
const KernelTable* avx2_table() noexcept { return nullptr; }
#endif

bool cpu_has_avx2() noexcept {
#if RRATIO_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* initial_table() noexcept {
  const char* forced = std::getenv("RRATIO_ISA");
  if (forced != nullptr && std::string_view{forced} == "scalar") {
    return &scalar_table();
  }
  if (cpu_has_avx2() && avx2_table() != nullptr) {
    return avx2_table();
  }
  return &scalar_table();
}

std::atomic<const KernelTable*>& selection() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& active() noexcept { return *selection().load(std::memory_order_relaxed); }

bool set_isa(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      selection().store(&scalar_table(), std::memory_order_relaxed);
      return true;
    case Isa::kAvx2:
      if (!cpu_has_avx2() || avx2_table() == nullptr) {
        return false;
      }
      selection().store(avx2_table(), std::memory_order_relaxed);
      return true;
  }
  return false;
}

}  // namespace rratio::kernels
