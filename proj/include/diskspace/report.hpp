#pragma once

// JSON and CSV renderings of estimator results.

#include <string>
#include <vector>

#include "diskspace/json_util.hpp"
#include "diskspace/lorch.hpp"
#include "diskspace/norm.hpp"
#include "diskspace/witness.hpp"

namespace diskspace {

json to_json(const GridConfig& cfg);
json to_json(const DiskPoint& p);
json to_json(const RingRecord& r);
json to_json(const NormEstimate& e);
json to_json(const RingProfile& p);
json to_json(const GrowthCheck& g);
json to_json(const WitnessResult& w);
json to_json(const ClassificationReport& r);
json to_json(const LacunaryReport& r);
json to_json(const RankResult& r);
json to_json(const SumBoundCheck& c);
json to_json(const QuotientCheck& q);
json to_json(const ResidualReport& r);
json to_json(const LorchAssessment& a);
json to_json(const DecayReport& d);
json to_json(const DiagonalReport& d);

/// Columns k, r_k, ring_max, refined_max; reals with 17 significant digits.
std::string profile_csv(const std::vector<RingRecord>& rings);

/// %.17g rendering.
std::string format_double(double v);

}  // namespace diskspace
