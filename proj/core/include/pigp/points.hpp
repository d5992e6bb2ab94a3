#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace pigp {

// Flat row-major storage for a list of points sharing one dimension.
// Cheap to append, cheap to index, no per-point allocation.
class PointSet {
 public:
  PointSet() : dim_(0) {}
  explicit PointSet(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("PointSet: dim must be >= 1");
  }

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }

  void push_back(std::span<const double> p) {
    if (static_cast<int>(p.size()) != dim_)
      throw std::invalid_argument("PointSet: point dimension mismatch");
    data_.insert(data_.end(), p.begin(), p.end());
  }

  void reserve(std::size_t n) { data_.reserve(n * dim_); }
  const std::vector<double>& raw() const { return data_; }

 private:
  int dim_;
  std::vector<double> data_;
};

}  // namespace pigp
