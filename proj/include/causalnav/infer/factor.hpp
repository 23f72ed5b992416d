#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "causalnav/core/error.hpp"

namespace causalnav {

/// Table over discrete variables (integer ids). The first variable varies
/// slowest; strides follow from the cardinalities.
class Factor {
 public:
  Factor() : values_{1.0} {}
  Factor(std::vector<int> vars, std::vector<int> cards, std::vector<double> values)
      : vars_(std::move(vars)), cards_(std::move(cards)), values_(std::move(values)) {
    if (vars_.size() != cards_.size()) throw InferenceError("factor: variable/cardinality mismatch");
    if (values_.size() != expected_size()) throw InferenceError("factor: table size mismatch");
    compute_strides();
  }

  const std::vector<int>& vars() const { return vars_; }
  const std::vector<int>& cards() const { return cards_; }
  const std::vector<double>& values() const { return values_; }
  bool has(int v) const { return std::find(vars_.begin(), vars_.end(), v) != vars_.end(); }

  /// Slice at var = value; the variable disappears.
  Factor restrict(int var, int value) const {
    const auto pos = position(var);
    if (pos == vars_.size()) return *this;
    if (value < 0 || value >= cards_[pos]) throw InferenceError("factor: restricted value out of range");
    Factor out;
    out.vars_ = vars_;
    out.cards_ = cards_;
    out.vars_.erase(out.vars_.begin() + static_cast<std::ptrdiff_t>(pos));
    out.cards_.erase(out.cards_.begin() + static_cast<std::ptrdiff_t>(pos));
    out.compute_strides();
    const std::size_t outer = values_.size() / (strides_[pos] * static_cast<std::size_t>(cards_[pos]));
    const std::size_t inner = strides_[pos];
    out.values_.resize(outer * inner);
    const std::size_t offset = static_cast<std::size_t>(value) * inner;
    for (std::size_t o = 0; o < outer; ++o) {
      const double* src = values_.data() + o * inner * static_cast<std::size_t>(cards_[pos]) + offset;
      std::copy(src, src + inner, out.values_.data() + o * inner);
    }
    return out;
  }

  /// Sums `var` out.
  Factor marginalize(int var) const {
    const auto pos = position(var);
    if (pos == vars_.size()) return *this;
    Factor out;
    out.vars_ = vars_;
    out.cards_ = cards_;
    out.vars_.erase(out.vars_.begin() + static_cast<std::ptrdiff_t>(pos));
    out.cards_.erase(out.cards_.begin() + static_cast<std::ptrdiff_t>(pos));
    out.compute_strides();
    const std::size_t k = static_cast<std::size_t>(cards_[pos]);
    const std::size_t inner = strides_[pos];
    const std::size_t outer = values_.size() / (inner * k);
    out.values_.assign(outer * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t j = 0; j < k; ++j) {
        const double* src = values_.data() + (o * k + j) * inner;
        double* dst = out.values_.data() + o * inner;
        for (std::size_t i = 0; i < inner; ++i) dst[i] += src[i];
      }
    return out;
  }

  friend Factor operator*(const Factor& a, const Factor& b) {
    std::vector<int> vars = a.vars_, cards = a.cards_;
    for (std::size_t i = 0; i < b.vars_.size(); ++i)
      if (!a.has(b.vars_[i])) {
        vars.push_back(b.vars_[i]);
        cards.push_back(b.cards_[i]);
      }
    Factor out;
    out.vars_ = vars;
    out.cards_ = cards;
    out.compute_strides();
    out.values_.assign(out.expected_size(), 0.0);
    // stride of each output variable inside a and b (0 when absent)
    std::vector<std::size_t> sa(vars.size(), 0), sb(vars.size(), 0);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const auto pa = a.position(vars[i]);
      if (pa < a.vars_.size()) sa[i] = a.strides_[pa];
      const auto pb = b.position(vars[i]);
      if (pb < b.vars_.size()) sb[i] = b.strides_[pb];
    }
    std::vector<int> idx(vars.size(), 0);
    std::size_t ia = 0, ib = 0;
    for (std::size_t k = 0; k < out.values_.size(); ++k) {
      out.values_[k] = a.values_[ia] * b.values_[ib];
      for (std::size_t d = vars.size(); d-- > 0;) {
        if (++idx[d] < cards[d]) {
          ia += sa[d];
          ib += sb[d];
          break;
        }
        ia -= sa[d] * static_cast<std::size_t>(cards[d] - 1);
        ib -= sb[d] * static_cast<std::size_t>(cards[d] - 1);
        idx[d] = 0;
      }
    }
    return out;
  }

  double sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
  }

 private:
  std::size_t position(int var) const {
    return static_cast<std::size_t>(std::find(vars_.begin(), vars_.end(), var) - vars_.begin());
  }
  std::size_t expected_size() const {
    std::size_t n = 1;
    for (int c : cards_) n *= static_cast<std::size_t>(c);
    return n;
  }
  void compute_strides() {
    strides_.assign(vars_.size(), 1);
    for (std::size_t i = vars_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * static_cast<std::size_t>(cards_[i]);
  }

  std::vector<int> vars_;
  std::vector<int> cards_;
  std::vector<double> values_;
  std::vector<std::size_t> strides_;
};

}  // namespace causalnav
