#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace avrgen {

struct Transcript {
  std::string puzzle_id;
  std::string raw_output;
  std::optional<int> extracted_choice;
};

// Scans for the last in-range answer declaration; unparsed outputs return
// nullopt and score as incorrect.
std::optional<int> extract_choice(std::string_view raw, int candidate_count);

struct KeyEntry {
  int answer = 0;
  std::string subtask;
};

// Key order is preserved so report rows mirror the key file's column order.
struct AnswerKey {
  std::map<std::string, KeyEntry> entries;
  std::vector<std::string> subtask_order;  // first-seen order
  int candidate_count = 8;

  void add(const std::string& puzzle_id, int answer, const std::string& subtask);
};

struct SubtaskScore {
  long long correct = 0;
  long long total = 0;
  double accuracy() const { return total == 0 ? 0.0 : 100.0 * correct / total; }
};

struct EvalReport {
  std::vector<std::pair<std::string, SubtaskScore>> per_subtask;
  long long unparsed = 0;
  std::optional<double> perception_accuracy;

  long long total() const;
  long long correct() const;
  double overall_accuracy() const;
};

// strict=true requires every key id to have exactly one transcript; duplicate
// or unknown transcript ids always fail hard.
EvalReport score(const std::vector<Transcript>& transcripts, const AnswerKey& key,
                 bool strict = true);

// Associative and commutative over counts; shards can be merged in any order.
EvalReport merge(const EvalReport& a, const EvalReport& b);

nlohmann::json report_to_json(const EvalReport& report);
std::string report_table(const EvalReport& report);

// Perception exact-match normalization: lowercase, trimmed, inner whitespace
// collapsed, leading articles dropped. Idempotent.
std::string normalize_answer(std::string_view text);
double score_perception(const std::vector<std::pair<std::string, std::string>>& pred_gold);

}  // namespace avrgen
