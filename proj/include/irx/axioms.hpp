#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "irx/rankers.hpp"

namespace irx {

/// Ternary pairwise preference: first document preferred (+1), no
/// preference (0), second document preferred (-1).
enum class Preference : int { second = -1, none = 0, first = 1 };

constexpr int value(Preference p) { return static_cast<int>(p); }
constexpr Preference operator-(Preference p) {
  return static_cast<Preference>(-static_cast<int>(p));
}
constexpr Preference preference_of_sign(double x) {
  return x > 0.0 ? Preference::first
                 : (x < 0.0 ? Preference::second : Preference::none);
}

/// Relaxation slack for length and tf comparability.
inline constexpr double kComparabilitySlack = 0.1;

class Axiom {
 public:
  virtual ~Axiom() = default;
  virtual std::string name() const = 0;
  /// Must satisfy preference(q, a, b) == -preference(q, b, a).
  virtual Preference preference(const PositionalIndex& index,
                                const Query& query, std::string_view di,
                                std::string_view dj) const = 0;
};

using AxiomPtr = std::shared_ptr<const Axiom>;

/// TFC1, TFC3, TDC, LNC1, TF_LNC, LB1, PROX1..PROX5, AND.
const std::vector<std::string>& axiom_names();
/// Throws NotFound listing the valid names.
AxiomPtr make_axiom(std::string_view name);

Preference axiom_preference(std::string_view axiom_name,
                            const PositionalIndex& index, const Query& query,
                            std::string_view di, std::string_view dj);

enum class AggregationMode { weighted_sum_sign, majority };

struct WeightedAxiom {
  AxiomPtr axiom;
  double weight = 1.0;
};

/// Combines child preferences: sign of the weighted sum, or sign of
/// (#first - #second). Itself an Axiom, so aggregates nest.
class AggregatedAxiom final : public Axiom {
 public:
  AggregatedAxiom(std::vector<WeightedAxiom> children, AggregationMode mode);
  std::string name() const override;
  Preference preference(const PositionalIndex& index, const Query& query,
                        std::string_view di,
                        std::string_view dj) const override;
  const std::vector<WeightedAxiom>& children() const { return children_; }

 private:
  std::vector<WeightedAxiom> children_;
  AggregationMode mode_;
};

Preference aggregate_preference(const AggregatedAxiom& agg,
                                const PositionalIndex& index,
                                const Query& query, std::string_view di,
                                std::string_view dj);

// Diagnostic tables -----------------------------------------------------

struct DetailsRow {
  std::string label;
  double d1 = 0.0;
  double d2 = 0.0;
  bool integral = false;  // render without decimals
};

struct DetailsTable {
  std::string axiom;
  std::string query;
  std::string qid;
  std::string docid1;
  std::string docid2;
  std::vector<DetailsRow> rows;
  Preference preference = Preference::none;

  const DetailsRow* find(std::string_view label) const;
  std::string render_text() const;
  nlohmann::json to_json() const;
};

/// Mean absolute position difference over all occurrence pairs.
double average_distance(std::span<const std::uint32_t> a,
                        std::span<const std::uint32_t> b);

struct PairDistances {
  std::string first_term;
  std::string second_term;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Appends avg_dist rows, `num pairs` and `Total_avg_dist` (mean of the pair
/// averages) to `table` and sets the PROX1 preference: the smaller total
/// wins, no pairs means no preference.
void finish_prox1_table(DetailsTable& table, std::span<const PairDistances> pairs);

/// Detailed view for PROX1..PROX5, TFC1 and TDC. Other axioms raise
/// InvalidArgument("no detailed view").
DetailsTable explain_details(std::string_view axiom_name,
                             const PositionalIndex& index, const Query& query,
                             std::string_view di, std::string_view dj);

}  // namespace irx
