/*
 * Copyright 2026 The overlap-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "overlap/json_io.hpp"

#include <fstream>
#include <sstream>

namespace overlap {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const UsageError& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

BitVec bits(const json& j) { return BitVec::parse(j.get<std::string>()); }

json bit_list(const std::vector<BitVec>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

std::vector<BitVec> bits_list(const json& j) {
  std::vector<BitVec> out;
  for (const auto& x : j) out.push_back(bits(x));
  return out;
}

std::pair<std::string, std::string> split_key(const std::string& k) {
  auto c = k.find(',');
  if (c == std::string::npos) throw ParseError("pair key '" + k + "' lacks a comma");
  return {k.substr(0, c), k.substr(c + 1)};
}

Ordinal ordinal(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ParseError("'" + s + "' is not an ordinal");
  return v;
}

std::string key(Ordinal a, Ordinal b) { return std::to_string(a) + "," + std::to_string(b); }

}  // namespace

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

json forest_to_json(const Forest& f) {
  json t = json::array();
  for (const auto& tr : f.trees()) t.push_back(bit_list(tr.tops()));
  return {{"n", f.height()}, {"trees", t}};
}

Forest forest_from_json(const json& j) {
  return guarded("forest", [&] {
    std::size_t n = j.at("n").get<std::size_t>();
    std::vector<Tree> trees;
    for (const auto& t : j.at("trees")) trees.emplace_back(n, bits_list(t));
    return Forest(n, std::move(trees));
  });
}

json struct_to_json(const MStruct& m) {
  json h = json::object(), g = json::object();
  for (std::size_t a = 0; a < m.width(); ++a)
    for (std::size_t b = 0; b < m.width(); ++b) {
      if (a == b) continue;
      std::string k = m.u[a].str() + "," + m.u[b].str();
      json hv = json::array(), gv = json::array();
      for (std::size_t i = 0; i < m.iota; ++i) {
        hv.push_back(m.h[m.slot(a, b, i)]);
        gv.push_back(m.g[m.slot(a, b, i)].str());
      }
      h[k] = hv;
      g[k] = gv;
    }
  return {{"ell", m.ell}, {"iota", m.iota}, {"u", bit_list(m.u)}, {"h", h}, {"g", g}};
}

MStruct struct_from_json(const json& j) {
  return guarded("structure", [&] {
    std::size_t ell = j.at("ell").get<std::size_t>();
    std::size_t iota = j.at("iota").get<std::size_t>();
    std::vector<BitVec> u = bits_list(j.at("u"));
    std::vector<BitVec> sorted = u;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ParseError("structure: u repeats a node");
    MStruct m = MStruct::blank(ell, iota, sorted);
    std::size_t seen = 0;
    for (const auto& [k, hv] : j.at("h").items()) {
      auto [x, y] = split_key(k);
      auto a = m.position(BitVec::parse(x)), b = m.position(BitVec::parse(y));
      if (!a || !b || *a == *b) throw ParseError("structure: bad pair key " + k);
      const auto& gv = j.at("g").at(k);
      if (hv.size() != iota || gv.size() != iota)
        throw ParseError("structure: pair " + k + " needs iota entries");
      for (std::size_t i = 0; i < iota; ++i) {
        m.h[m.slot(*a, *b, i)] = hv[i].get<std::size_t>();
        m.g[m.slot(*a, *b, i)] = bits(gv[i]);
      }
      ++seen;
    }
    if (seen != m.width() * (m.width() - (m.width() ? 1 : 0)) || j.at("g").size() != seen)
      throw ParseError("structure: h and g must cover every ordered pair of u");
    return m;
  });
}

json condition_to_json(const Condition& p) {
  json eta = json::object(), h = json::object(), g = json::object();
  for (const auto& [a, e] : p.eta) eta[std::to_string(a)] = e.str();
  for (const auto& [k, hv] : p.h) h[key(k.first, k.second)] = hv;
  for (const auto& [k, gv] : p.g) g[key(k.first, k.second)] = bit_list(gv);
  return {{"schema", kSchema}, {"iota", p.iota}, {"w", p.w},   {"n", p.n},
          {"M", p.M},          {"eta", eta},     {"trees", forest_to_json(p.forest)},
          {"r", p.r},          {"h", h},         {"g", g}};
}

Condition condition_from_json(const json& j) {
  return guarded("condition", [&] {
    if (j.contains("schema") && j.at("schema") != kSchema)
      throw ParseError("condition: unknown schema " + j.at("schema").dump());
    Condition p;
    p.iota = j.at("iota").get<std::size_t>();
    p.w = j.at("w").get<std::vector<Ordinal>>();
    p.n = j.at("n").get<std::size_t>();
    p.M = j.at("M").get<std::size_t>();
    for (const auto& [k, v] : j.at("eta").items()) p.eta[ordinal(k)] = bits(v);
    p.forest = forest_from_json(j.at("trees"));
    p.r = j.at("r").get<std::vector<std::size_t>>();
    for (const auto& [k, v] : j.at("h").items()) {
      auto [a, b] = split_key(k);
      p.h[{ordinal(a), ordinal(b)}] = v.get<std::vector<std::size_t>>();
    }
    for (const auto& [k, v] : j.at("g").items()) {
      auto [a, b] = split_key(k);
      p.g[{ordinal(a), ordinal(b)}] = bits_list(v);
    }
    return p;
  });
}

json model_to_json(const FiniteModel& m) {
  json rels = json::array();
  for (const auto& r : m.relations())
    rels.push_back({{"name", r.name}, {"arity", r.arity}, {"tuples", r.tuples}});
  return {{"size", m.size()}, {"relations", rels}};
}

FiniteModel model_from_json(const json& j) {
  return guarded("model", [&] {
    std::vector<Relation> rels;
    for (const auto& r : j.at("relations"))
      rels.push_back({r.at("name").get<std::string>(), r.at("arity").get<std::size_t>(),
                      r.at("tuples").get<std::vector<std::vector<Element>>>()});
    return FiniteModel(j.at("size").get<std::size_t>(), std::move(rels));
  });
}

RankOracle oracle_from_json(const json& j) {
  return guarded("oracle", [&] {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "order")
      return RankOracle::order(j.at("size").get<std::size_t>(), j.at("theta").get<std::size_t>());
    if (kind == "model") {
      RankParams rp;
      rp.theta = j.at("theta").get<std::size_t>();
      rp.max_w = j.value("max_w", rp.max_w);
      std::map<Ordinal, Element> emb;
      if (j.contains("embedding"))
        for (const auto& [k, v] : j.at("embedding").items()) emb[ordinal(k)] = v.get<Element>();
      return RankOracle::model(model_from_json(j.at("model")), rp, std::move(emb));
    }
    if (kind == "table") {
      std::map<OrdinalSet, RankTriple> entries;
      for (const auto& e : j.at("entries")) {
        OrdinalSet v = e.at("v").get<OrdinalSet>();
        std::sort(v.begin(), v.end());
        entries[v] = {e.at("rk").get<int>(), e.at("zeta").get<std::uint64_t>(),
                      e.at("k").get<std::size_t>()};
      }
      return RankOracle::table(std::move(entries));
    }
    throw ParseError("oracle: unknown kind '" + kind + "'");
  });
}

json diagnostics_to_json(const Diagnostics& d) {
  json a = json::array();
  for (const auto& x : d) a.push_back({{"clause", x.clause}, {"message", x.message}});
  return a;
}

json certificates_to_json(const std::vector<OverlapCertificate>& c) {
  json a = json::array();
  for (const auto& x : c)
    a.push_back({{"alpha", x.alpha},
                 {"beta", x.beta},
                 {"overlap", x.overlap},
                 {"points", bit_list(x.points)},
                 {"ok", x.ok}});
  return a;
}

json run_to_json(const GenericRun& run) {
  json chain = json::array(), diags = json::array(), eta = json::object();
  for (const auto& c : run.chain) chain.push_back(condition_to_json(c));
  for (const auto& d : run.step_diagnostics) diags.push_back(diagnostics_to_json(d));
  for (const auto& [a, e] : run.eta) eta[std::to_string(a)] = e.str();
  return {{"schema", kSchema},
          {"kind", "generic_run"},
          {"iota", run.iota},
          {"chain", chain},
          {"step_diagnostics", diags},
          {"final_forest", forest_to_json(run.forest)},
          {"eta", eta},
          {"certificates", certificates_to_json(run.certificates)}};
}

GenericRun run_from_json(const json& j) {
  return guarded("generic run", [&] {
    if (j.at("schema") != kSchema || j.at("kind") != "generic_run")
      throw ParseError("generic run: wrong schema or kind");
    GenericRun run;
    run.iota = j.at("iota").get<std::size_t>();
    for (const auto& c : j.at("chain")) run.chain.push_back(condition_from_json(c));
    for (const auto& d : j.at("step_diagnostics")) {
      Diagnostics ds;
      for (const auto& x : d)
        ds.push_back({x.at("clause").get<std::string>(), x.at("message").get<std::string>()});
      run.step_diagnostics.push_back(std::move(ds));
    }
    run.forest = forest_from_json(j.at("final_forest"));
    for (const auto& [k, v] : j.at("eta").items()) run.eta[ordinal(k)] = bits(v);
    for (const auto& c : j.at("certificates")) {
      OverlapCertificate x;
      x.alpha = c.at("alpha").get<Ordinal>();
      x.beta = c.at("beta").get<Ordinal>();
      x.overlap = c.at("overlap").get<std::size_t>();
      x.points = bits_list(c.at("points"));
      x.ok = c.at("ok").get<bool>();
      run.certificates.push_back(std::move(x));
    }
    return run;
  });
}

json rank_result_to_json(const RankResult& r) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    json st = json::array();
    for (const auto& [nu, n] : s) st.push_back({{"nu", nu.str()}, {"extension", struct_to_json(n)}});
    steps.push_back(st);
  }
  return {{"value", r.value}, {"steps", steps}};
}

json chain_to_json(const ChainWitness& c) {
  json a = json::array();
  for (const auto& m : c.chain) a.push_back(struct_to_json(m));
  return {{"schema", kSchema}, {"kind", "chain"}, {"forest", forest_to_json(c.forest)}, {"chain", a}};
}

ChainWitness chain_from_json(const json& j) {
  return guarded("chain", [&] {
    ChainWitness c;
    c.forest = forest_from_json(j.at("forest"));
    for (const auto& m : j.at("chain")) c.chain.push_back(struct_from_json(m));
    return c;
  });
}

json perfect_to_json(const PerfectWitness& p) {
  json certs = json::array();
  for (const auto& c : p.certificates)
    certs.push_back({{"eta", c.eta.str()},
                     {"nu", c.nu.str()},
                     {"forward", bit_list(c.forward)},
                     {"backward", bit_list(c.backward)},
                     {"overlap", c.overlap},
                     {"ok", c.ok}});
  Forest pf(p.perfect.height(), {p.perfect});
  return {{"perfect", forest_to_json(pf)}, {"certificates", certs}};
}

}  // namespace overlap
