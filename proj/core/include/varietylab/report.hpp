// SPDX-License-Identifier: Apache-2.0
#pragma once

/// JSON views of the toolkit's result types, with keys in a fixed order.

#include <vector>

#include "varietylab/analysis.hpp"
#include "varietylab/canonical_json.hpp"
#include "varietylab/core_periphery.hpp"
#include "varietylab/harness.hpp"
#include "varietylab/regulator_game.hpp"
#include "varietylab/variety.hpp"

namespace varietylab {

Json to_json(const LabelSet& set);
Json to_json(const PerComponent<LabelSet>& sets);
Json to_json(const Interval& interval);
Json to_json(const Distribution& dist);
Json to_json(const Residual& residual);
Json to_json(const CorePeripheryPartition& partition);
Json to_json(const AbsorptionEvent& event);
Json to_json(const SubsystemLocation& location);
/// Entries in the table's disturbance order.
Json to_json(const OutcomeTable& table, const RegulatorPolicy& policy);
Json to_json(const OutcomeTable& table, const PolicySearchResult& result);
Json to_json(const BoundReport& report, const OutcomeTable& table);
Json to_json(const DominanceScore& score);
Json to_json(const SymmetryCell& cell);
Json to_json(const DeductionReport& report);
Json to_json(const StabilityAssessment& assessment);
Json to_json(const std::vector<MembershipState>& timeline);

}  // namespace varietylab
