#include "apm/harness/json_io.hpp"

#include <fstream>
#include <set>

#include "apm/errors.hpp"

namespace apm {

void require_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (!ok.contains(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

namespace {

Parity parity_from(const std::string& s) {
  if (s == "all") return Parity::All;
  if (s == "odd") return Parity::Odd;
  if (s == "even") return Parity::Even;
  throw ConfigError("unknown parity '" + s + "'");
}

SignPattern signs_from(const std::string& s) {
  if (s == "positive") return SignPattern::Positive;
  if (s == "negative") return SignPattern::Negative;
  if (s == "alternating") return SignPattern::Alternating;
  throw ConfigError("unknown sign pattern '" + s + "'");
}

template <class T>
T get(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + ": bad value for '" + key + "': " + e.what());
  }
}

}  // namespace

Json descriptor_to_json(const GeneratorDesc& desc) {
  Json params = Json::object();
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, FiniteList>) {
          params["values"] = f.values;
        } else if constexpr (std::is_same_v<F, InterleavedHarmonic>) {
          params["offset"] = f.offset;
          params["parity"] = to_string(f.parity);
          params["signs"] = to_string(f.signs);
        } else if constexpr (std::is_same_v<F, InterleavedGeometric>) {
          params["ratio"] = f.ratio;
          params["offset"] = f.offset;
          params["parity"] = to_string(f.parity);
          params["signs"] = to_string(f.signs);
        } else {
          params["coeffs"] = f.coeffs;
          Json parts = Json::array();
          for (const auto& p : f.parts) parts.push_back(descriptor_to_json(p));
          params["parts"] = std::move(parts);
        }
      },
      desc.family());
  Json j;
  j["family"] = desc.family_name();
  j["parameters"] = std::move(params);
  j["normalization"] = desc.normalization();
  return j;
}

GeneratorDesc descriptor_from_json(const Json& j) {
  const std::string where = "descriptor";
  require_keys(j, {"family", "parameters", "normalization"}, where);
  const auto family = get<std::string>(j, "family", where);
  const double normalization = j.contains("normalization") ? get<double>(j, "normalization", where) : 1.0;
  const Json params = j.contains("parameters") ? j.at("parameters") : Json::object();
  const std::string pw = where + " parameters (" + family + ")";
  if (family == "finite_list") {
    require_keys(params, {"values"}, pw);
    return GeneratorDesc(FiniteList{get<std::vector<double>>(params, "values", pw)}, normalization);
  }
  if (family == "interleaved_harmonic") {
    require_keys(params, {"offset", "parity", "signs"}, pw);
    InterleavedHarmonic h;
    if (params.contains("offset")) h.offset = get<std::size_t>(params, "offset", pw);
    if (params.contains("parity")) h.parity = parity_from(get<std::string>(params, "parity", pw));
    if (params.contains("signs")) h.signs = signs_from(get<std::string>(params, "signs", pw));
    return GeneratorDesc(h, normalization);
  }
  if (family == "interleaved_geometric") {
    require_keys(params, {"ratio", "offset", "parity", "signs"}, pw);
    InterleavedGeometric g;
    g.ratio = get<double>(params, "ratio", pw);
    if (params.contains("offset")) g.offset = get<std::size_t>(params, "offset", pw);
    if (params.contains("parity")) g.parity = parity_from(get<std::string>(params, "parity", pw));
    if (params.contains("signs")) g.signs = signs_from(get<std::string>(params, "signs", pw));
    return GeneratorDesc(g, normalization);
  }
  if (family == "scaled_sum") {
    require_keys(params, {"coeffs", "parts"}, pw);
    ScaledSum s;
    s.coeffs = get<std::vector<double>>(params, "coeffs", pw);
    if (!params.contains("parts") || !params.at("parts").is_array()) throw ConfigError(pw + ": parts must be an array");
    for (const auto& p : params.at("parts")) s.parts.push_back(descriptor_from_json(p));
    return GeneratorDesc(std::move(s), normalization);
  }
  throw ConfigError(where + ": unknown family '" + family + "'");
}

Json index_set_to_json(const IndexSet& s) {
  Json j;
  j["pattern"] = s.pattern_name();
  j["finite"] = s.is_finite();
  j["explicit_members"] = s.explicit_members();
  j["threshold"] = s.threshold();
  j["residue_mask"] = s.residue_mask();
  return j;
}

Json verdicts_to_json(const std::vector<Verdict>& verdicts) {
  Json a = Json::array();
  for (Verdict v : verdicts) a.push_back(to_string(v));
  return a;
}

Json analysis_to_json(const AnalysisReport& r) {
  Json j;
  j["verdicts"] = verdicts_to_json(r.verdicts);

  Json overlaps = Json::object();
  for (const auto& o : r.disjoint.overlaps) {
    overlaps["v" + std::to_string(o.i + 1) + "&v" + std::to_string(o.j + 1)] = index_set_to_json(o.overlap);
  }
  j["overlaps"] = std::move(overlaps);

  Json certs = Json::object();
  {
    Json d;
    d["holds"] = r.disjoint.holds;
    d["symbolic"] = r.disjoint.symbolic;
    certs["pairwise_disjoint"] = std::move(d);
  }
  {
    const auto& f = r.finite_intersection;
    Json d;
    d["decision"] = to_string(f.decision);
    d["signed_vector"] = f.signed_index + 1;
    d["sign"] = f.sign;
    d["onset"] = f.onset;
    d["reason"] = f.reason;
    Json fl = Json::array();
    for (std::size_t i = 0; i < f.flipped.size(); ++i) {
      if (f.flipped[i]) fl.push_back(i + 1);
    }
    d["negated_vectors"] = std::move(fl);
    certs["finite_intersection_signed"] = std::move(d);
  }
  {
    const auto& b = r.bb1;
    Json d;
    d["holds"] = b.holds;
    if (b.analytic) {
      d["verified_up_to"] = "Analytic";
    } else {
      d["verified_up_to"] = b.verified_up_to;
    }
    d["via_rotation"] = b.via_rotation;
    d["witness_count"] = b.witnesses.size();
    Json w = Json::array();
    for (std::size_t i = 0; i < b.witnesses.size() && i < 16; ++i) {
      w.push_back({{"k", b.witnesses[i].k}, {"index", b.witnesses[i].index}, {"value", b.witnesses[i].value}});
    }
    d["witnesses"] = std::move(w);
    certs["bb_condition1"] = std::move(d);
  }
  {
    const auto& b = r.bb2;
    Json d;
    d["status"] = to_string(b.status);
    if (b.certificate) {
      d["certificate"] = {{"alpha", b.certificate->alpha},
                          {"beta", b.certificate->beta},
                          {"symbolic_verified", b.certificate->symbolic_verified}};
    }
    Json bi = Json::array();
    for (std::size_t i = 0; i < b.blocking_indices.size() && i < 16; ++i) bi.push_back(b.blocking_indices[i]);
    d["blocking_indices"] = std::move(bi);
    certs["bb_condition2"] = std::move(d);
  }
  certs["disjoint_rotation_found"] = r.rotation_found;
  j["certificates"] = std::move(certs);

  if (r.partition) {
    const auto& p = *r.partition;
    j["partition"] = {{"cone_vector", p.cone_index + 1},   {"signed_vector", p.signed_index + 1},
                      {"symbolic", p.symbolic},            {"V", index_set_to_json(p.V)},
                      {"I", index_set_to_json(p.I)},       {"Z", index_set_to_json(p.Z)},
                      {"N", index_set_to_json(p.N)},       {"P", index_set_to_json(p.P)}};
  } else {
    j["partition"] = nullptr;
  }

  Json vecs = Json::array();
  for (const auto& f : r.facts) {
    Json v;
    v["family"] = f.family;
    v["support"] = index_set_to_json(f.support);
    v["positive"] = index_set_to_json(f.positive);
    v["negative"] = index_set_to_json(f.negative);
    v["symbolic"] = f.symbolic;
    v["signs_resolved"] = f.signs_resolved;
    if (f.eventual) {
      v["eventual_sign"] = {{"sign", f.eventual->sign}, {"onset", f.eventual->onset}};
    } else {
      v["eventual_sign"] = nullptr;
    }
    vecs.push_back(std::move(v));
  }
  j["vectors"] = std::move(vecs);
  return j;
}

Json catalog_entry_to_json(const InstanceCatalogEntry& e) {
  Json j;
  j["id"] = e.id;
  j["description"] = e.description;
  Json g = Json::array();
  for (const auto& d : e.generators) g.push_back(descriptor_to_json(d));
  j["generators"] = std::move(g);
  j["default_start"] = e.default_start;
  j["anchor"] = e.anchor;
  j["expected_verdicts"] = verdicts_to_json(e.expected_verdicts);
  return j;
}

InstanceCatalogEntry catalog_entry_from_json(const Json& j) {
  const std::string where = "catalog entry";
  require_keys(j, {"id", "description", "generators", "default_start", "anchor", "expected_verdicts"}, where);
  InstanceCatalogEntry e;
  e.id = get<std::string>(j, "id", where);
  if (j.contains("description")) e.description = get<std::string>(j, "description", where);
  if (!j.contains("generators") || !j.at("generators").is_array()) throw ConfigError(where + ": generators must be an array");
  for (const auto& g : j.at("generators")) e.generators.push_back(descriptor_from_json(g));
  if (j.contains("default_start")) e.default_start = get<std::string>(j, "default_start", where);
  if (j.contains("anchor")) e.anchor = get<std::string>(j, "anchor", where);
  if (j.contains("expected_verdicts")) {
    for (const auto& s : get<std::vector<std::string>>(j, "expected_verdicts", where)) {
      auto v = verdict_from_string(s);
      if (!v) throw ConfigError(where + ": unknown verdict '" + s + "'");
      e.expected_verdicts.push_back(*v);
    }
  }
  return e;
}

std::vector<InstanceCatalogEntry> load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open catalog file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("catalog file " + path + ": " + e.what());
  }
  require_keys(j, {"schema_version", "entries"}, "catalog file");
  if (get<int>(j, "schema_version", "catalog file") != 1) throw ConfigError("catalog file: unsupported schema_version");
  std::vector<InstanceCatalogEntry> out;
  for (const auto& e : j.at("entries")) out.push_back(catalog_entry_from_json(e));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

}  // namespace apm
