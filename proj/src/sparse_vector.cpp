#include "dcsvm/sparse_vector.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace dcsvm {

SparseVector::SparseVector(std::vector<Feature> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].value == 0.0) {
      throw std::invalid_argument("sparse vector stores a zero at index " +
                                  std::to_string(entries_[i].index));
    }
    if (i > 0 && entries_[i].index <= entries_[i - 1].index) {
      throw std::invalid_argument("sparse vector indices must be strictly increasing");
    }
  }
  rehash();
}

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  std::vector<Feature> entries;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) entries.push_back({static_cast<std::uint32_t>(i), dense[i]});
  }
  return SparseVector(std::move(entries));
}

std::vector<double> SparseVector::to_dense(std::size_t dim) const {
  std::vector<double> out(dim, 0.0);
  for (const auto& f : entries_) {
    if (f.index < dim) out[f.index] = f.value;
  }
  return out;
}

void SparseVector::rehash() {
  // FNV-1a over (index, value bits)
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& f : entries_) {
    mix(f.index);
    mix(std::bit_cast<std::uint64_t>(f.value));
  }
  hash_ = h;
}

}  // namespace dcsvm
