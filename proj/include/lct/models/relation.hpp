#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lct::models {

// A binary relation over a fixed event universe 0..n-1, stored as a dense
// bit matrix. All operators return fresh relations; sizes must agree.
class Relation {
 public:
  Relation() = default;
  explicit Relation(int n, std::string name = "");

  static Relation identity(int n);

  int size() const { return n_; }
  const std::string& name() const { return name_; }
  Relation named(std::string name) const;

  bool at(int i, int j) const;
  void set(int i, int j, bool v = true);

  Relation operator|(const Relation& o) const;
  Relation operator&(const Relation& o) const;
  Relation operator-(const Relation& o) const;
  Relation seq(const Relation& o) const;  // composition a;b
  Relation inverse() const;
  Relation plus() const;  // transitive closure
  Relation star() const;  // reflexive-transitive closure

  bool irreflexive() const;
  bool acyclic() const;
  bool empty() const;
  uint64_t count() const;

  bool operator==(const Relation& o) const;
  bool operator!=(const Relation& o) const { return !(*this == o); }

  std::vector<std::pair<int, int>> pairs() const;

 private:
  int n_ = 0;
  int words_per_row_ = 0;
  std::vector<uint64_t> bits_;  // row-major
  std::string name_;

  uint64_t* row(int i) { return bits_.data() + static_cast<size_t>(i) * words_per_row_; }
  const uint64_t* row(int i) const {
    return bits_.data() + static_cast<size_t>(i) * words_per_row_;
  }
};

// Reference closure for the evaluator-correctness oracle: repeated boolean
// matrix multiplication until fixpoint, no in-place tricks.
Relation naive_transitive_closure(const Relation& r);

}  // namespace lct::models
