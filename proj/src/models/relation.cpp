#include "lct/models/relation.hpp"

#include <cassert>

namespace lct::models {

Relation::Relation(int n, std::string name)
    : n_(n), words_per_row_((n + 63) / 64), bits_(static_cast<size_t>(n) * words_per_row_, 0),
      name_(std::move(name)) {}

Relation Relation::identity(int n) {
  Relation r(n, "id");
  for (int i = 0; i < n; ++i) r.set(i, i);
  return r;
}

Relation Relation::named(std::string name) const {
  Relation r = *this;
  r.name_ = std::move(name);
  return r;
}

bool Relation::at(int i, int j) const {
  return (row(i)[j >> 6] >> (j & 63)) & 1;
}

void Relation::set(int i, int j, bool v) {
  uint64_t mask = uint64_t{1} << (j & 63);
  if (v)
    row(i)[j >> 6] |= mask;
  else
    row(i)[j >> 6] &= ~mask;
}

Relation Relation::operator|(const Relation& o) const {
  assert(n_ == o.n_);
  Relation r = *this;
  for (size_t w = 0; w < bits_.size(); ++w) r.bits_[w] |= o.bits_[w];
  return r;
}

Relation Relation::operator&(const Relation& o) const {
  assert(n_ == o.n_);
  Relation r = *this;
  for (size_t w = 0; w < bits_.size(); ++w) r.bits_[w] &= o.bits_[w];
  return r;
}

Relation Relation::operator-(const Relation& o) const {
  assert(n_ == o.n_);
  Relation r = *this;
  for (size_t w = 0; w < bits_.size(); ++w) r.bits_[w] &= ~o.bits_[w];
  return r;
}

Relation Relation::seq(const Relation& o) const {
  assert(n_ == o.n_);
  Relation r(n_);
  for (int i = 0; i < n_; ++i) {
    const uint64_t* ri = row(i);
    uint64_t* out = r.row(i);
    for (int j = 0; j < n_; ++j) {
      if (!((ri[j >> 6] >> (j & 63)) & 1)) continue;
      const uint64_t* rj = o.row(j);
      for (int w = 0; w < words_per_row_; ++w) out[w] |= rj[w];
    }
  }
  return r;
}

Relation Relation::inverse() const {
  Relation r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (at(i, j)) r.set(j, i);
  return r;
}

Relation Relation::plus() const {
  // Warshall over bit rows.
  Relation r = *this;
  for (int k = 0; k < n_; ++k) {
    const uint64_t* rk = r.row(k);
    // Copy k's row first so r.row(i) |= rk is safe when i == k.
    std::vector<uint64_t> krow(rk, rk + words_per_row_);
    for (int i = 0; i < n_; ++i) {
      if (!r.at(i, k)) continue;
      uint64_t* ri = r.row(i);
      for (int w = 0; w < words_per_row_; ++w) ri[w] |= krow[w];
    }
  }
  return r;
}

Relation Relation::star() const { return plus() | identity(n_); }

bool Relation::irreflexive() const {
  for (int i = 0; i < n_; ++i)
    if (at(i, i)) return false;
  return true;
}

bool Relation::acyclic() const { return plus().irreflexive(); }

bool Relation::empty() const {
  for (uint64_t w : bits_)
    if (w) return false;
  return true;
}

uint64_t Relation::count() const {
  uint64_t c = 0;
  for (uint64_t w : bits_) c += static_cast<uint64_t>(__builtin_popcountll(w));
  return c;
}

bool Relation::operator==(const Relation& o) const {
  return n_ == o.n_ && bits_ == o.bits_;
}

std::vector<std::pair<int, int>> Relation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (at(i, j)) out.emplace_back(i, j);
  return out;
}

Relation naive_transitive_closure(const Relation& r) {
  int n = r.size();
  Relation acc = r;
  for (;;) {
    // acc ∪ acc;r, element by element.
    Relation next = acc;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (next.at(i, j)) continue;
        for (int k = 0; k < n; ++k)
          if (acc.at(i, k) && r.at(k, j)) {
            next.set(i, j);
            break;
          }
      }
    if (next == acc) return acc;
    acc = next;
  }
}

}  // namespace lct::models
