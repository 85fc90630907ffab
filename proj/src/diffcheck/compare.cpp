#include "lct/diffcheck/compare.hpp"

#include <algorithm>
#include <sstream>

namespace lct::diffcheck {

namespace {

std::string outcome_cell(const engine::Outcome& o, bool asm_names) {
  std::string s = "[";
  for (const auto& [key, value] : o.bind) {
    if (s.size() > 1) s += " ";
    s += (asm_names ? key.asm_name() : key.source_name()) + "=" + value.str() + ";";
  }
  return s + "]";
}

}  // namespace

std::string classification_name(DiffReport::Classification c) {
  switch (c) {
    case DiffReport::Classification::Equal: return "Equal";
    case DiffReport::Classification::Positive: return "Positive";
    case DiffReport::Classification::Negative: return "Negative";
    case DiffReport::Classification::Mixed: return "Mixed";
  }
  return "?";
}

DiffReport compare_outcomes(const engine::OutcomeSet& src_out,
                            const engine::OutcomeSet& tgt_out, const StateMapping& m,
                            bool target_asm_names) {
  DiffReport report;
  report.target_asm_names = target_asm_names;
  report.source = src_out.outcomes;

  std::vector<std::string> warnings;
  for (const engine::Outcome& t : tgt_out.outcomes)
    report.mapped_target.insert(apply_mapping(m, t, &warnings));
  std::sort(warnings.begin(), warnings.end());
  warnings.erase(std::unique(warnings.begin(), warnings.end()), warnings.end());
  report.warnings = std::move(warnings);

  for (const engine::Outcome& t : report.mapped_target)
    if (!report.source.count(t)) report.novel.insert(t);
  for (const engine::Outcome& s : report.source)
    if (!report.mapped_target.count(s)) report.missing.insert(s);

  report.classification = !report.novel.empty()     ? DiffReport::Classification::Positive
                          : !report.missing.empty() ? DiffReport::Classification::Negative
                                                    : DiffReport::Classification::Equal;
  return report;
}

std::string render_compare_table(const DiffReport& report) {
  // One row per outcome of the union, sorted; shared outcomes align, novel
  // ones leave the source cell empty, missing ones the target cell.
  struct Row {
    std::string left, right;
  };
  std::vector<Row> rows;
  std::set<engine::Outcome> all = report.source;
  all.insert(report.mapped_target.begin(), report.mapped_target.end());
  for (const engine::Outcome& o : all) {
    Row r;
    if (report.source.count(o)) r.left = outcome_cell(o, false);
    if (report.mapped_target.count(o)) {
      r.right = outcome_cell(o, report.target_asm_names);
      if (report.novel.count(o)) r.right = "+" + r.right;
    }
    rows.push_back(std::move(r));
  }

  size_t width = std::string("source").size();
  for (const Row& r : rows) width = std::max(width, r.left.size());

  std::ostringstream out;
  out << "source";
  out << std::string(width - 6, ' ') << " | target\n";
  if (report.ub_filtered) {
    out << "(comparison skipped: racy source, undefined behaviour)\n";
    return out.str();
  }
  for (const Row& r : rows) {
    out << r.left << std::string(width - r.left.size(), ' ') << " | " << r.right << "\n";
  }
  return out.str();
}

}  // namespace lct::diffcheck
