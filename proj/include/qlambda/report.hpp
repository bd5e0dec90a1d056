#pragma once

#include <json.hpp>
#include <string>

#include "qlambda/dyadic.hpp"
#include "qlambda/iwasawa.hpp"
#include "qlambda/twistlab.hpp"

namespace qlambda::report {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kCsvHeader = "R,valid,s_inf,lambda_F,lambda_Fprime,lambda_J,case";

// Big integers are serialized as decimal strings, never floating point.
json to_json(const Integer& n);
json to_json(const QuadElem& x);
json to_json(const PrimeIdeal& P);
json to_json(const SplittingEntry& entry);
json to_json(const TwistRecord& rec);
json to_json(const LambdaReport& rep);
json to_json(const SelmerReport& rep);
json to_json(const RankOneCase& cls);
json to_json(const WitnessSet& w);
json to_json(const WitnessVerification& v);
json to_json(const NormSurjectivityReport& rep);

json envelope(const std::string& command, json inputs, json results, json diagnostics);

struct Options {
    long precision_cap = 4096;
    int jobs = 1;

    AdaptivePrecision precision() const { return AdaptivePrecision{16, precision_cap}; }
};

/// Parse "741", "-11", "a+b*sqrt", or "(a+b*sqrt)/2" into an element of the
/// maximal order.
QuadElem parse_twist(const QuadField& field, const std::string& text);

// Document builders behind each CLI subcommand; python bindings reuse them.
json lambda_document(const QuadField& field, const QuadElem& R, const Options& opts = {});
json classify_document(const QuadField& field, const Integer& R, const Options& opts = {});
json witness_document(const QuadField& field, const QuadElem& R, const Options& opts = {});
json split_document(const QuadField& field, const Integer& ell, const Options& opts = {});
json rayclass_document(const QuadField& field, const Options& opts = {});
json classgroup_document(const QuadField& field, const Options& opts = {});
json verify_norm_document(int degree, int m, int k, const Options& opts = {});
json scan_document(const QuadField& field, const Integer& rmax, const Options& opts = {});

std::string scan_csv_row(const ScanRow& row);

}  // namespace qlambda::report
