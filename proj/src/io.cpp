#include "ringlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ringlab/error.hpp"

namespace ringlab {

using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json series_to_json(const TruncatedSeries& s) {
  json out = json::array();
  for (const cplx& c : s.coeffs()) out.push_back({c.real(), c.imag()});
  return out;
}

TruncatedSeries series_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::Parse, "series must be a non-empty array");
  std::vector<cplx> coeffs;
  coeffs.reserve(j.size());
  for (const json& c : j) {
    if (c.is_number()) {
      coeffs.emplace_back(c.get<double>(), 0.0);
    } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
      coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
    } else {
      throw Error(ErrorKind::Parse, "series coefficient must be a number or [re, im]");
    }
  }
  return TruncatedSeries(std::move(coeffs));
}

json to_json(const SeriesDocument& doc) { return {{"kind", doc.kind}, {"coeffs", series_to_json(doc.series)}}; }

SeriesDocument series_document_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("coeffs") || !j["kind"].is_string()) {
    throw Error(ErrorKind::Parse, "series document needs string 'kind' and 'coeffs'");
  }
  return {j["kind"].get<std::string>(), series_from_json(j["coeffs"])};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorKind::InvalidArgument, "write failed: " + path);
}

void write_profile_csv(std::ostream& out, const RadialProfile& profile, const json& metadata) {
  json header = metadata;
  header["label"] = profile.label;
  header["r_in"] = profile.radii.inner;
  header["r_out"] = profile.radii.outer;
  header["degenerate"] = profile.radii.degenerate;
  header["zero_mode_fraction"] = profile.zero_mode_fraction;
  header["normalization"] = profile.normalization;
  header["multiple_roots"] = profile.multiple_roots;
  out << "# " << header.dump() << "\n";
  out << "s,F,rho,O\n";
  for (std::size_t i = 0; i < profile.s_grid.size(); ++i) {
    out << format_double(profile.s_grid[i]) << ',' << format_double(profile.F[i]) << ','
        << format_double(profile.rho[i]) << ',' << format_double(profile.O[i]) << '\n';
  }
}

ProfileTable read_profile_csv(std::istream& in) {
  ProfileTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw Error(ErrorKind::Parse, "missing profile header");
  try {
    table.header = json::parse(line.substr(2));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("profile header: ") + e.what());
  }
  if (!std::getline(in, line) || line != "s,F,rho,O") throw Error(ErrorKind::Parse, "missing profile columns");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double v[4];
    char sep;
    if (!(row >> v[0] >> sep >> v[1] >> sep >> v[2] >> sep >> v[3])) {
      throw Error(ErrorKind::Parse, "bad profile row: " + line);
    }
    table.s.push_back(v[0]);
    table.F.push_back(v[1]);
    table.rho.push_back(v[2]);
    table.O.push_back(v[3]);
  }
  return table;
}

void write_sample_dump(std::ostream& out, const std::vector<SpectralSample>& samples) {
  out << "re,im,O\n";
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
      out << format_double(s.eigenvalues[i].real()) << ',' << format_double(s.eigenvalues[i].imag()) << ',';
      if (i < s.overlaps.size()) out << format_double(s.overlaps[i]);
      out << '\n';
    }
  }
}

json to_json(const ComparisonReport& r) {
  return {
      {"ks_statistic", r.ks_statistic},
      {"overlap_sup_error", r.overlap_sup_error},
      {"overlap_bins", r.overlap_bins},
      {"overlap_checked", r.overlap_checked},
      {"radii_empirical",
       {{"inner", r.radii_empirical.inner},
        {"outer", r.radii_empirical.outer},
        {"degenerate", r.radii_empirical.degenerate}}},
      {"radii_analytic",
       {{"inner", r.radii_analytic.inner},
        {"outer", r.radii_analytic.outer},
        {"degenerate", r.radii_analytic.degenerate}}},
      {"inner_radius_error", r.inner_radius_error},
      {"outer_radius_error", r.outer_radius_error},
      {"tolerances",
       {{"ks", r.tolerances.ks},
        {"overlap", r.tolerances.overlap},
        {"edge_margin", r.tolerances.edge_margin},
        {"radius", r.tolerances.radius}}},
      {"pass_ks", r.pass_ks},
      {"pass_overlap", r.pass_overlap},
      {"pass_radii", r.pass_radii},
      {"pass", r.all_pass()},
  };
}

json to_json(const HermitianReport& r) {
  std::vector<bool> bulk(r.bulk.begin(), r.bulk.end());
  return {
      {"m2", r.m2},
      {"m4", r.m4},
      {"predicted_m2", r.predicted_m2},
      {"predicted_m4", r.predicted_m4},
      {"kurtosis", r.kurtosis},
      {"kurtosis_derived", r.kurtosis_derived},
      {"kurtosis_alternative", r.kurtosis_alternative},
      {"convention_note", r.convention_note},
      {"density_sup_error", r.density_sup_error},
      {"bin_edges", r.bin_edges},
      {"histogram", r.histogram},
      {"predicted", r.predicted},
      {"bulk", bulk},
      {"pass_moment", r.pass_moment},
      {"pass_density", r.pass_density},
      {"pass", r.all_pass()},
  };
}

}  // namespace ringlab
