#include "srdm/losses.hpp"

namespace srdm {

std::atomic<uint64_t>& zero_norm_counter() {
  static std::atomic<uint64_t> counter{0};
  return counter;
}

}  // namespace srdm
