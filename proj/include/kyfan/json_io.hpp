#pragma once

#include <string_view>

#include <json.hpp>

#include "kyfan/asymptotics.hpp"
#include "kyfan/checks.hpp"
#include "kyfan/diagnostics.hpp"
#include "kyfan/fractional.hpp"
#include "kyfan/fsup.hpp"
#include "kyfan/models.hpp"

namespace kyfan {

using Json = nlohmann::json;

/// Parses a model spec. Unknown or misplaced fields throw ModelError whose
/// field() is a JSON pointer into the document.
///
///   {"type":"covariance","family":"ar1","rho":0.5}
///   {"type":"covariance","family":"cosine","theta":1.0}
///   {"type":"covariance","table":{"0":1.0,"1":[0.5,0.1]},"horizon":64}
///   {"type":"spectral","atoms":[{"theta":3.141592653589793,"weight":1.0}]}
///   {"type":"orbit","T":[[1,0],[0,[0,1]]],"x0":[1,0],"class":"unitary"}
///
/// Complex numbers are either a real number or a [re, im] pair.
StationaryModel model_from_json(const Json& doc);

/// Inline JSON when the argument starts with '{', otherwise a file path.
StationaryModel load_model(std::string_view path_or_inline);

Json model_to_json(const StationaryModel& model);

Json to_json(const CheckReport& r);
Json to_json(const ScanReport& r);
Json to_json(const ValidationReport& r);
Json to_json(const FeketeTrace& r);
Json to_json(const CesaroReport& r);
Json to_json(const ProjectionReport& r);
Json to_json(const DensityReport& r);
Json to_json(const RatioReport& r);
Json to_json(const ArithmeticReport& r);
Json to_json(const ChainReport& r);
Json to_json(const TrendReport& r);
Json to_json(const FractionalTransform& r);
Json to_json(const DecayTrace& r);
Json to_json(const SeriesReport& r);
Json to_json(const SubadditivityReport& r);
Json to_json(const IRatioReport& r);
Json to_json(const IRatioScan& r);

}  // namespace kyfan
