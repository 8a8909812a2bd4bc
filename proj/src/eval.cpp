#include "avrgen/eval.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace avrgen {

std::optional<int> extract_choice(std::string_view raw, int candidate_count) {
  static const std::regex declaration(
      R"((?:answer\s+is|answer\s*[:=]|choice\s+is|choice\s*[:=]?|option\s*[:=]?|choose)\s*\(?\s*(\d{1,3}))",
      std::regex::icase);

  const std::string text(raw);
  std::optional<int> best;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), declaration);
       it != std::sregex_iterator(); ++it) {
    int v = std::stoi((*it)[1].str());
    if (v >= 1 && v <= candidate_count) best = v;  // last in-range declaration wins
  }
  if (best) return best;

  // Fall back to a bare trailing integer.
  static const std::regex trailing(R"((\d{1,3})\s*[.!)\]]*\s*$)");
  std::smatch m;
  if (std::regex_search(text, m, trailing)) {
    int v = std::stoi(m[1].str());
    if (v >= 1 && v <= candidate_count) return v;
  }
  return std::nullopt;
}

void AnswerKey::add(const std::string& puzzle_id, int answer, const std::string& subtask) {
  if (!entries.emplace(puzzle_id, KeyEntry{answer, subtask}).second) {
    throw std::runtime_error("duplicate puzzle_id in answer key: " + puzzle_id);
  }
  if (std::find(subtask_order.begin(), subtask_order.end(), subtask) ==
      subtask_order.end()) {
    subtask_order.push_back(subtask);
  }
}

long long EvalReport::total() const {
  long long t = 0;
  for (const auto& [_, s] : per_subtask) t += s.total;
  return t;
}

long long EvalReport::correct() const {
  long long c = 0;
  for (const auto& [_, s] : per_subtask) c += s.correct;
  return c;
}

double EvalReport::overall_accuracy() const {
  return total() == 0 ? 0.0 : 100.0 * correct() / total();
}

EvalReport score(const std::vector<Transcript>& transcripts, const AnswerKey& key,
                 bool strict) {
  EvalReport report;
  for (const auto& name : key.subtask_order) report.per_subtask.push_back({name, {}});
  auto row = [&](const std::string& subtask) -> SubtaskScore& {
    for (auto& [name, s] : report.per_subtask) {
      if (name == subtask) return s;
    }
    report.per_subtask.push_back({subtask, {}});
    return report.per_subtask.back().second;
  };

  std::set<std::string> seen;
  for (const auto& t : transcripts) {
    if (!seen.insert(t.puzzle_id).second) {
      throw std::runtime_error("duplicate transcript for puzzle_id " + t.puzzle_id);
    }
    auto it = key.entries.find(t.puzzle_id);
    if (it == key.entries.end()) {
      throw std::runtime_error("transcript for unknown puzzle_id " + t.puzzle_id);
    }
    auto choice = t.extracted_choice ? t.extracted_choice
                                     : extract_choice(t.raw_output, key.candidate_count);
    SubtaskScore& s = row(it->second.subtask);
    s.total += 1;
    if (!choice) {
      report.unparsed += 1;
    } else if (*choice == it->second.answer) {
      s.correct += 1;
    }
  }
  if (strict && seen.size() != key.entries.size()) {
    throw std::runtime_error("missing transcripts: key has " +
                             std::to_string(key.entries.size()) + " ids, got " +
                             std::to_string(seen.size()));
  }
  return report;
}

EvalReport merge(const EvalReport& a, const EvalReport& b) {
  EvalReport out = a;
  for (const auto& [name, s] : b.per_subtask) {
    auto it = std::find_if(out.per_subtask.begin(), out.per_subtask.end(),
                           [&](const auto& p) { return p.first == name; });
    if (it == out.per_subtask.end()) {
      out.per_subtask.push_back({name, s});
    } else {
      it->second.correct += s.correct;
      it->second.total += s.total;
    }
  }
  out.unparsed += b.unparsed;
  if (a.perception_accuracy || b.perception_accuracy) {
    // Perception accuracies merge by simple averaging weighted by presence.
    double sum = a.perception_accuracy.value_or(0) + b.perception_accuracy.value_or(0);
    int n = (a.perception_accuracy ? 1 : 0) + (b.perception_accuracy ? 1 : 0);
    out.perception_accuracy = sum / n;
  }
  return out;
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& [name, s] : report.per_subtask) {
    per.push_back({{"subtask", name},
                   {"correct", s.correct},
                   {"total", s.total},
                   {"accuracy", s.accuracy()}});
  }
  nlohmann::json out = {{"overall_accuracy", report.overall_accuracy()},
                        {"per_subtask", per},
                        {"unparsed_count", report.unparsed}};
  if (report.perception_accuracy) out["perception_accuracy"] = *report.perception_accuracy;
  return out;
}

std::string report_table(const EvalReport& report) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << "Accuracy";
  for (const auto& [name, _] : report.per_subtask) os << "  " << name;
  os << "\n" << report.overall_accuracy();
  for (const auto& [name, s] : report.per_subtask) {
    os << "  ";
    os.width(static_cast<int>(name.size()));
    os << s.accuracy();
  }
  os << "\n";
  if (report.perception_accuracy) {
    os << "Perception: " << *report.perception_accuracy << "\n";
  }
  if (report.unparsed > 0) os << "Unparsed: " << report.unparsed << "\n";
  return os.str();
}

std::string normalize_answer(std::string_view text) {
  std::string lower;
  lower.reserve(text.size());
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

  std::istringstream is(lower);
  std::vector<std::string> words;
  std::string w;
  while (is >> w) {
    while (!w.empty() && std::ispunct(static_cast<unsigned char>(w.back()))) w.pop_back();
    if (!w.empty()) words.push_back(w);
  }
  while (!words.empty() && (words.front() == "a" || words.front() == "an" ||
                            words.front() == "the")) {
    words.erase(words.begin());
  }
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += " ";
    out += words[i];
  }
  return out;
}

double score_perception(const std::vector<std::pair<std::string, std::string>>& pred_gold) {
  if (pred_gold.empty()) return 0.0;
  long long correct = 0;
  for (const auto& [pred, gold] : pred_gold) {
    if (normalize_answer(pred) == normalize_answer(gold)) ++correct;
  }
  return 100.0 * correct / pred_gold.size();
}

}  // namespace avrgen
