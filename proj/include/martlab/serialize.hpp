#pragma once

#include <json.hpp>

#include "martlab/closure.hpp"
#include "martlab/constructions.hpp"
#include "martlab/martingale.hpp"
#include "martlab/permutation.hpp"
#include "martlab/polynomial.hpp"
#include "martlab/scanner.hpp"
#include "martlab/sequence.hpp"

// Descriptor documents are JSON key/value trees; rationals are always
// "numerator/denominator" strings. Every emitted descriptor re-parses
// to an equivalent object.
namespace martlab {

using json = nlohmann::json;

json polynomial_to_json(const PolynomialNat& p);
PolynomialNat polynomial_from_json(const json& j);

json martingale_to_json(const Martingale& m);
Martingale martingale_from_json(const json& j, const Budget& budget = {});

json sequence_to_json(const SequenceOracle& z);
SequenceOracle sequence_from_json(const json& j);

json prefix_function_to_json(const PrefixFunction& f);
PrefixFunction prefix_function_from_json(const json& j);

json permutation_to_json(const Permutation& s);
Permutation permutation_from_json(const json& j);

json scanner_to_json(const ScanningFunction& v);
ScanningFunction scanner_from_json(const json& j);

json synthetic_to_json(const SyntheticBPP& alg);
SyntheticBPP synthetic_from_json(const json& j);

// {"scanner":..., "martingale":..., "filling":..., "certify_to":N}
json strategy_to_json(const BettingStrategy& g);
BettingStrategy strategy_from_json(const json& j, const Budget& budget = {});

json fairness_report_to_json(const FairnessReport& r);
json filling_report_to_json(const FillingReport& r);
json avg_report_to_json(const AvgReport& r);
json success_report_to_json(const SuccessReport& r);
json measure_report_to_json(const MeasureReport& r);
json block_reports_to_json(const std::vector<BlockReport>& rs);
json delay_points_to_json(const DelayPoints& d);

// Loads and validates a document, mapping json exceptions to ParseError.
json parse_document(const std::string& text);

}  // namespace martlab
