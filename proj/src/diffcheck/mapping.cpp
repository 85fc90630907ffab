#include "lct/diffcheck/mapping.hpp"

#include <algorithm>

#include "lct/litmus/error.hpp"

namespace lct::diffcheck {

namespace {

using litmus::LitmusTest;
using litmus::ObservableKey;
using litmus::Width;

// Declared width/signedness of one observable in its test.
std::pair<Width, bool> format_of(const LitmusTest& test, const ObservableKey& key) {
  if (key.kind == ObservableKey::Kind::Mem) {
    auto it = test.init.locations.find(key.name);
    if (it != test.init.locations.end()) return {it->second.width, it->second.is_signed};
    return {Width::B32, true};
  }
  if (const litmus::Thread* t = test.thread(key.thread)) {
    auto it = t->registers.find(key.name);
    if (it != t->registers.end()) return {it->second.width, it->second.is_signed};
  }
  return {Width::B32, true};
}

// Either rendering matches a hint name; hints come from tools that may use
// source or asm spelling.
bool names_key(const LitmusTest& test, const ObservableKey& key, const std::string& name) {
  return test.observable_name(key) == name || key.source_name() == name ||
         key.asm_name() == name;
}

}  // namespace

const MappedPair* StateMapping::by_target(const ObservableKey& k) const {
  for (const MappedPair& p : pairs)
    if (p.tgt == k) return &p;
  return nullptr;
}

StateMapping StateMapping::inverse() const {
  StateMapping inv;
  for (const MappedPair& p : pairs)
    inv.pairs.push_back({p.tgt, p.src, p.tgt_width, p.tgt_signed, p.src_width, p.src_signed});
  std::sort(inv.pairs.begin(), inv.pairs.end(),
            [](const MappedPair& a, const MappedPair& b) { return a.src < b.src; });
  inv.unmapped_source = unmapped_target;
  inv.unmapped_target = unmapped_source;
  return inv;
}

StateMapping infer_state_mapping(const LitmusTest& src, const LitmusTest& tgt,
                                 const std::vector<std::pair<std::string, std::string>>& hints) {
  std::vector<ObservableKey> src_obs = src.observables();
  std::vector<ObservableKey> tgt_obs = tgt.observables();

  // Hints must be injective in both directions.
  for (size_t i = 0; i < hints.size(); ++i) {
    for (size_t j = i + 1; j < hints.size(); ++j) {
      if (hints[i].first == hints[j].first && hints[i].second != hints[j].second)
        throw Error(ErrorKind::AmbiguousMapping,
                    "hint maps '" + hints[i].first + "' to both '" + hints[i].second +
                        "' and '" + hints[j].second + "'");
      if (hints[i].second == hints[j].second && hints[i].first != hints[j].first)
        throw Error(ErrorKind::AmbiguousMapping,
                    "hints map both '" + hints[i].first + "' and '" + hints[j].first +
                        "' to '" + hints[i].second + "'");
    }
  }

  StateMapping m;
  std::set<ObservableKey> used_tgt;

  for (const ObservableKey& s : src_obs) {
    const ObservableKey* match = nullptr;

    for (const auto& [from, to] : hints) {
      if (!names_key(src, s, from)) continue;
      for (const ObservableKey& t : tgt_obs)
        if (names_key(tgt, t, to)) {
          match = &t;
          break;
        }
      break;
    }
    if (!match) {
      for (const ObservableKey& t : tgt_obs)
        if (t == s) {
          match = &t;
          break;
        }
    }
    if (!match || used_tgt.count(*match)) {
      if (match)
        throw Error(ErrorKind::AmbiguousMapping,
                    "two source observables map to '" + tgt.observable_name(*match) + "'");
      m.unmapped_source.insert(s);
      continue;
    }
    used_tgt.insert(*match);
    auto [sw, ss] = format_of(src, s);
    auto [tw, ts] = format_of(tgt, *match);
    m.pairs.push_back({s, *match, sw, ss, tw, ts});
  }

  for (const ObservableKey& t : tgt_obs)
    if (!used_tgt.count(t)) m.unmapped_target.insert(t);
  return m;
}

engine::Outcome apply_mapping(const StateMapping& m, const engine::Outcome& o,
                              std::vector<std::string>* warnings) {
  engine::Outcome out;
  for (const MappedPair& p : m.pairs) {
    auto it = o.bind.find(p.tgt);
    if (it == o.bind.end())
      throw Error(ErrorKind::MissingBinding,
                  "outcome lacks mapped binding '" + p.tgt.source_name() + "'");
    out.bind[p.src] = it->second.narrowed(p.src_width, p.src_signed);
  }
  for (const auto& [key, value] : o.bind) {
    (void)value;
    if (!m.by_target(key) && warnings)
      warnings->push_back("dropped unmapped target binding '" + key.asm_name() + "'");
  }
  return out;
}

}  // namespace lct::diffcheck
