#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "ringlab/montecarlo.hpp"
#include "ringlab/series.hpp"
#include "ringlab/single_ring.hpp"

namespace ringlab {

/// 17 significant digits: enough to round-trip any double.
std::string format_double(double x);

/// Series as an array of [re, im] pairs, index = power. Plain numbers are
/// accepted on input as real coefficients.
nlohmann::json series_to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const nlohmann::json& j);

/// A serialized transform: {"kind": ..., "coeffs": [...]}. `kind` is one of
/// the TransformKind names or "moments" / "cumulants".
struct SeriesDocument {
  std::string kind;
  TruncatedSeries series;
};

nlohmann::json to_json(const SeriesDocument& doc);
SeriesDocument series_document_from_json(const nlohmann::json& j);

/// Throws Parse on unreadable files or malformed JSON.
nlohmann::json read_json_file(const std::string& path);
/// Throws InvalidArgument when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

/// CSV with a "# {json}" header line, then columns s,F,rho,O.
void write_profile_csv(std::ostream& out, const RadialProfile& profile, const nlohmann::json& metadata);

struct ProfileTable {
  nlohmann::json header;
  std::vector<double> s, F, rho, O;
};

ProfileTable read_profile_csv(std::istream& in);

/// One row per eigenvalue: re, im, O (O empty when overlaps were skipped).
void write_sample_dump(std::ostream& out, const std::vector<SpectralSample>& samples);

nlohmann::json to_json(const ComparisonReport& report);
nlohmann::json to_json(const HermitianReport& report);

}  // namespace ringlab
