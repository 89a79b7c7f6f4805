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

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "overlap/forcing.hpp"
#include "overlap/gf2.hpp"
#include "overlap/json_io.hpp"
#include "overlap/ndrk.hpp"

using namespace overlap;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string bit_summary(const MStruct& m) {
  std::string s;
  for (const auto& v : m.u) s += (s.empty() ? "" : ",") + v.str();
  return "{" + s + "}";
}

struct Common {
  std::string input, oracle, output, format = "text";
  std::uint64_t seed = 0;
};

void add_common(CLI::App* sc, Common& c, bool needs_input = true) {
  auto* in = sc->add_option("--input", c.input, "input file");
  if (needs_input) in->required();
  sc->add_option("--oracle", c.oracle, "rank oracle file");
  sc->add_option("--output", c.output, "artifact output file");
  sc->add_option("--format", c.format, "report format")->check(CLI::IsMember({"text", "json"}));
  sc->add_option("--seed", c.seed, "seed, echoed in reports");
}

// A report is a flat list of named values plus optional structured payload.
struct Report {
  Report(std::string cmd, const Common* c) : command(std::move(cmd)), common(c) {}

  std::string command;
  const Common* common;
  json body = json::object();
  std::vector<std::string> lines;

  void set(const std::string& k, json v, std::string text = {}) {
    if (text.empty()) text = v.is_string() ? v.get<std::string>() : v.dump();
    lines.push_back(k + ": " + text);
    body[k] = std::move(v);
  }
  void note(std::string line) { lines.push_back(std::move(line)); }

  void emit() const {
    if (common->format == "json") {
      json j = {{"schema", kSchema}, {"tool", std::string("overlap-lab ") + kVersion},
                {"command", command}, {"seed", common->seed}};
      j["result"] = body;
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& l : lines) std::cout << l << "\n";
    }
  }
};

void write_artifact(const Common& c, const json& j, Report& rep) {
  if (c.output.empty()) {
    rep.body["artifact"] = j;
    if (c.format == "text") rep.note(j.dump(2));
  } else {
    write_text_file(c.output, j.dump(2) + "\n");
    rep.set("written", c.output);
  }
}

Condition load_condition(const std::string& path) { return condition_from_json(read_json_file(path)); }

RankOracle oracle_for(const Common& c, const std::vector<const Condition*>& conds) {
  if (!c.oracle.empty()) return oracle_from_json(read_json_file(c.oracle));
  return default_oracle(conds);
}

std::string show_diag(const Diagnostic& d) { return d.clause + " " + d.message; }

int cmd_validate(const Common& c, bool exhaustive) {
  Report rep{"validate", &c};
  Condition p = load_condition(c.input);
  RankOracle o = oracle_for(c, {&p});
  ValidateOptions opt;
  if (exhaustive) opt.rho = RhoSearch::Exhaustive;
  auto d = validate_condition(p, o, opt);
  rep.set("oracle", o.describe());
  rep.set("valid", d.empty());
  rep.body["diagnostics"] = diagnostics_to_json(d);
  for (const auto& x : d) rep.note(show_diag(x));
  rep.emit();
  return d.empty() ? 0 : 1;
}

int cmd_leq(const Common& c, const std::string& other) {
  Report rep{"leq", &c};
  Condition p = load_condition(c.input), q = load_condition(other);
  if (p.iota != q.iota) throw UsageError("conditions have different iota");
  bool r = leq(p, q);
  rep.set("leq", r);
  rep.emit();
  return r ? 0 : 1;
}

int cmd_extend(const Common& c, Ordinal beta) {
  Report rep{"extend", &c};
  Condition p = load_condition(c.input);
  Condition q = extend_add_element(p, beta);
  rep.set("n", q.n);
  rep.set("M", q.M);
  write_artifact(c, condition_to_json(q), rep);
  rep.emit();
  return 0;
}

int cmd_amalgamate(const Common& c, const std::string& other) {
  Report rep{"amalgamate", &c};
  Condition p1 = load_condition(c.input), p2 = load_condition(other);
  RankOracle o = oracle_for(c, {&p1, &p2});
  Condition q = amalgamate(p1, p2, o);
  std::vector<Ordinal> common;
  std::set_intersection(p1.w.begin(), p1.w.end(), p2.w.begin(), p2.w.end(),
                        std::back_inserter(common));
  auto sh = amalgam_shape(p1.iota, common.size(), p1.w.size() - common.size());
  rep.set("k", sh.k);
  rep.set("ell", sh.ell);
  rep.set("N0", sh.N0);
  rep.set("N", sh.N);
  rep.set("n", q.n);
  rep.set("M", q.M);
  write_artifact(c, condition_to_json(q), rep);
  rep.emit();
  return 0;
}

int cmd_chain(const Common& c, const std::vector<Ordinal>& adds, std::size_t min_n,
              std::size_t min_M, std::size_t pool) {
  Report rep{"chain", &c};
  Condition seed = load_condition(c.input);
  Ordinal top = seed.w.empty() ? 0 : seed.w.back();
  for (auto b : adds) top = std::max(top, b);
  FreshOrdinals fresh(top + 1, top + pool);
  RankOracle o = c.oracle.empty() ? RankOracle::order(top + pool + 2, top + pool + 1)
                                  : oracle_from_json(read_json_file(c.oracle));
  std::vector<ScheduleStep> schedule;
  for (auto b : adds) schedule.push_back({b, min_n, min_M});
  if (schedule.empty() && (min_n || min_M)) schedule.push_back({seed.w.front(), min_n, min_M});
  GenericRun run = build_chain(seed, schedule, o, fresh);
  const Condition& last = run.chain.back();
  rep.set("oracle", o.describe());
  rep.set("steps", run.chain.size() - 1);
  rep.set("final_w", last.w);
  rep.set("final_n", last.n);
  rep.set("final_M", last.M);
  bool ok = true;
  std::size_t minimum = SIZE_MAX;
  for (std::size_t j = 1; j < run.chain.size(); ++j) ok = ok && leq(run.chain[j - 1], run.chain[j]);
  rep.set("increasing", ok);
  for (const auto& cert : run.certificates) {
    ok = ok && cert.ok;
    minimum = std::min(minimum, cert.overlap);
  }
  std::size_t invalid = 0;
  for (const auto& d : run.step_diagnostics) invalid += d.empty() ? 0 : 1;
  rep.set("invalid_steps", invalid);
  for (std::size_t j = 0; j < run.step_diagnostics.size(); ++j)
    for (const auto& d : run.step_diagnostics[j])
      rep.note("step " + std::to_string(j) + ": " + show_diag(d));
  rep.set("min_overlap", minimum == SIZE_MAX ? 0 : minimum);
  rep.set("certificates_ok", ok);
  write_artifact(c, run_to_json(run), rep);
  rep.emit();
  return ok && invalid == 0 ? 0 : 1;
}

int cmd_ndrk(const Common& c, std::size_t iota, std::size_t max_u, bool per_structure,
             const std::string& witness) {
  Report rep{"ndrk", &c};
  Forest f = forest_from_json(read_json_file(c.input));
  StructurePoset poset(f, iota, max_u);
  RankTable table = ndrk_table(poset);
  std::size_t sup = 0, best = 0;
  for (std::size_t i = 0; i < poset.size(); ++i) {
    if (table.rank[i] + 1 > sup) best = i;
    sup = std::max(sup, table.rank[i] + 1);
  }
  rep.set("structures", poset.size());
  rep.set("NDRK", sup);
  if (per_structure) {
    json rows = json::array();
    for (std::size_t i = 0; i < poset.size(); ++i) {
      json s = struct_to_json(poset.at(i));
      rows.push_back({{"structure", s}, {"ndrk", table.rank[i]}});
      rep.note("ell=" + std::to_string(poset.at(i).ell) + " u=" + bit_summary(poset.at(i)) +
               " ndrk=" + std::to_string(table.rank[i]));
    }
    rep.body["per_structure"] = rows;
  }
  if (!witness.empty()) {
    if (poset.size() == 0) throw UsageError("no structures, so no witness chain");
    ChainWitness w = witness_chain(poset, table, best);
    write_text_file(witness, chain_to_json(w).dump(2) + "\n");
    rep.set("witness", witness);
    rep.set("witness_length", w.chain.size());
    auto d = check_chain(w);
    rep.set("witness_valid", d.empty());
    if (d.empty()) {
      auto pw = extract_perfect_witness(w);
      std::size_t ok = 0;
      for (const auto& cert : pw.certificates) ok += cert.ok;
      rep.set("perfect_branches", pw.perfect.tops().size());
      rep.set("certificates_ok", std::to_string(ok) + "/" + std::to_string(pw.certificates.size()));
    }
  }
  rep.emit();
  return 0;
}

int cmd_check_chain(const Common& c) {
  Report rep{"check-chain", &c};
  ChainWitness w = chain_from_json(read_json_file(c.input));
  auto d = check_chain(w);
  rep.set("valid", d.empty());
  rep.body["diagnostics"] = diagnostics_to_json(d);
  for (const auto& x : d) rep.note(show_diag(x));
  bool ok = d.empty();
  if (ok) {
    auto pw = extract_perfect_witness(w);
    for (const auto& cert : pw.certificates) ok = ok && cert.ok;
    rep.set("perfect_branches", pw.perfect.tops().size());
    rep.set("certificates_ok", ok);
    if (!c.output.empty()) write_text_file(c.output, perfect_to_json(pw).dump(2) + "\n");
  }
  rep.emit();
  return ok ? 0 : 1;
}

int cmd_overlap(const Common& c, const std::string& x, const std::string& y, long k) {
  Report rep{k < 0 ? "overlap" : "stnd", &c};
  Forest f = forest_from_json(read_json_file(c.input));
  BitVec bx = BitVec::parse(x), by = BitVec::parse(y);
  if (bx.size() != f.height() || by.size() != f.height())
    throw UsageError("x and y must have the forest height as length");
  std::size_t ov = ::overlap::overlap(f, bx, by);
  rep.set("overlap", ov);
  if (k >= 0) rep.set("stnd", stnd_at_depth(f, static_cast<std::size_t>(k), bx, by));
  rep.emit();
  return 0;
}

int cmd_rank(const Common& c, std::size_t order_n, std::size_t theta, std::size_t max_w, bool star,
             long eps) {
  Report rep{"rank", &c};
  if (theta < 1) throw UsageError("theta must be at least 1");
  if (c.input.empty() && order_n == 0) throw UsageError("rank needs --input or --order");
  FiniteModel m = c.input.empty() ? order_model(order_n) : model_from_json(read_json_file(c.input));
  RankParams p{theta, max_w};
  ThetaRank tr(m, p);
  json rows = json::array();
  std::vector<Element> w;
  std::function<void(Element)> walk = [&](Element from) {
    if (!w.empty()) {
      json row = {{"w", w}, {"rk", tr.rk(w)}};
      std::string line = "w=" + json(w).dump() + " rk=" + std::to_string(tr.rk(w));
      if (star) {
        row["rk_star"] = tr.rk_star(w);
        line += " rk*=" + std::to_string(tr.rk_star(w));
      }
      rows.push_back(row);
      rep.note(line);
    }
    if (w.size() == max_w) return;
    for (Element a = from; a < m.size(); ++a) {
      w.push_back(a);
      walk(a + 1);
      w.pop_back();
    }
  };
  walk(0);
  rep.body["table"] = rows;
  if (eps >= 0) rep.set("npr", npr_check(m, static_cast<int>(eps), p));
  rep.emit();
  return 0;
}

std::string bits_of(std::uint64_t v, std::size_t len) {
  BitVec b(len);
  for (std::size_t i = 0; i < len; ++i)
    if ((v >> (len - 1 - i)) & 1) b.set(i);
  return b.str();
}

BitVec random_vec(std::mt19937_64& rng, std::size_t len) { return BitVec::parse(bits_of(rng(), len)); }

int cmd_lemma43(const Common& c, int part, std::size_t depth, std::size_t cases) {
  Report rep{"lemma43", &c};
  if (depth == 0 || depth > 20) throw UsageError("depth must lie in [1, 20]");
  std::mt19937_64 rng(c.seed);
  std::size_t pass = 0, fail = 0, run = 0;
  if (part == 1) {
    if (depth < 5) throw UsageError("part 1 needs depth >= 5");
    while (run < cases) {
      std::size_t s = 5 + rng() % std::min<std::size_t>(3, depth - 4);
      std::vector<BitVec> b;
      while (b.size() < s) {
        b.push_back(random_vec(rng, depth));
        if (!is_independent(b)) b.pop_back();
      }
      BitVec x = random_vec(rng, depth);
      std::vector<BitVec> a;
      for (const auto& e : b)
        if (a.size() < 5 || rng() % 2) a.push_back(e + x);
      ++run;
      auto got = solve_translate(a, b);
      (got && *got == x) ? ++pass : ++fail;
    }
  } else if (part == 2) {
    // every independent family is a linear image of a standard basis prefix
    for (std::size_t s = 3; s <= std::min<std::size_t>(6, depth); ++s)
      for (std::size_t star = 0; star < s; ++star) {
        std::vector<BitVec> basis;
        for (std::size_t i = 0; i < s; ++i) basis.push_back(BitVec::unit(depth, i));
        std::vector<BitVec> elems;
        for (std::size_t i = 0; i < s; ++i)
          if (i != star) {
            elems.push_back(basis[i]);
            elems.push_back(basis[i] + basis[star]);
          }
        std::vector<BitPair> pairs;
        for (std::size_t i = 0; i < elems.size(); ++i)
          for (std::size_t j = i + 1; j < elems.size(); ++j) pairs.emplace_back(elems[i], elems[j]);
        for (std::size_t i = 0; i < pairs.size(); ++i)
          for (std::size_t j = i + 1; j < pairs.size(); ++j)
            for (std::size_t k = j + 1; k < pairs.size(); ++k) {
              std::vector<BitPair> t{pairs[i], pairs[j], pairs[k]};
              BitVec sum = t[0].first + t[0].second;
              if (t[1].first + t[1].second != sum || t[2].first + t[2].second != sum) continue;
              std::vector<BitVec> all{t[0].first, t[0].second, t[1].first,
                                      t[1].second, t[2].first, t[2].second};
              std::sort(all.begin(), all.end());
              if (std::adjacent_find(all.begin(), all.end()) != all.end()) continue;
              ++run;
              check_pair_family(basis[star], basis, t) ? ++pass : ++fail;
            }
      }
  } else {
    throw UsageError("--part must be 1 or 2");
  }
  rep.set("part", part);
  rep.set("depth", depth);
  rep.set("cases", run);
  rep.set("pass", pass);
  rep.set("fail", fail);
  rep.emit();
  return fail == 0 ? 0 : 1;
}

int cmd_bootstrap(const Common& c, std::vector<Ordinal> w, std::size_t iota) {
  Report rep{"bootstrap", &c};
  Condition p = bootstrap(std::move(w), iota);
  rep.set("n", p.n);
  rep.set("M", p.M);
  write_artifact(c, condition_to_json(p), rep);
  rep.emit();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"overlap-lab: translation overlap structures, ranks and forcing conditions"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Common c;

  auto* validate = app.add_subcommand("validate", "validate a condition");
  add_common(validate, c);
  bool exhaustive = false;
  validate->add_flag("--exhaustive-rho", exhaustive, "sweep all translations at small levels");

  std::string other;
  auto* leqc = app.add_subcommand("leq", "test p <= q");
  add_common(leqc, c);
  leqc->add_option("--other", other, "the stronger condition")->required();

  Ordinal beta = 0;
  auto* extend = app.add_subcommand("extend", "add one ordinal to a condition");
  add_common(extend, c);
  extend->add_option("--beta", beta, "ordinal to add")->required();

  auto* amal = app.add_subcommand("amalgamate", "amalgamate twin conditions");
  add_common(amal, c);
  amal->add_option("--other", other, "the second twin")->required();

  std::vector<Ordinal> adds;
  std::size_t min_n = 0, min_M = 0, pool = 64;
  auto* chain = app.add_subcommand("chain", "build a generic chain");
  add_common(chain, c);
  chain->add_option("--add", adds, "ordinal to add (repeatable)");
  chain->add_option("--min-n", min_n, "final n must exceed this");
  chain->add_option("--min-M", min_M, "final M must exceed this");
  chain->add_option("--fresh-pool", pool, "number of fresh ordinals available");

  std::size_t iota = 2, max_u = 3;
  bool per_structure = false;
  std::string witness;
  auto* ndrk = app.add_subcommand("ndrk", "bounded ndrk over a forest");
  add_common(ndrk, c);
  ndrk->add_option("--iota", iota, "pairs per node pair");
  ndrk->add_option("--max-u", max_u, "largest |u| enumerated");
  ndrk->add_flag("--per-structure", per_structure, "list every structure with its rank");
  ndrk->add_option("--witness", witness, "write a witness chain here");

  auto* chk = app.add_subcommand("check-chain", "check a witness chain and extract a perfect tree");
  add_common(chk, c);

  std::string x, y;
  long k = -1;
  auto* ov = app.add_subcommand("overlap", "overlap count of two translates");
  add_common(ov, c);
  ov->add_option("--x", x, "bit string")->required();
  ov->add_option("--y", y, "bit string")->required();
  auto* st = app.add_subcommand("stnd", "spectrum membership at depth n");
  add_common(st, c);
  st->add_option("--x", x, "bit string")->required();
  st->add_option("--y", y, "bit string")->required();
  st->add_option("--k", k, "overlap threshold")->required();

  std::size_t theta = 1, max_w = 3, order_n = 0;
  bool star = false;
  long eps = -1;
  auto* rank = app.add_subcommand("rank", "theta-rank table of a finite model");
  add_common(rank, c, false);
  rank->add_option("--order", order_n, "use the order model on this many elements");
  rank->add_option("--theta", theta, "count standing in for uncountable")->required();
  rank->add_option("--max-w", max_w, "largest |w| ranked");
  rank->add_flag("--star", star, "add the rk* column");
  rank->add_option("--eps", eps, "report whether every rank is below eps");

  int part = 1;
  std::size_t depth = 6, cases = 1000;
  auto* l43 = app.add_subcommand("lemma43", "randomized or exhaustive GF(2) lemma checks");
  add_common(l43, c, false);
  l43->add_option("--part", part, "1: translation recovery, 2: pair families");
  l43->add_option("--depth", depth, "vector length");
  l43->add_option("--cases", cases, "random cases for part 1");

  std::vector<Ordinal> bw;
  auto* boot = app.add_subcommand("bootstrap", "block-construction starting condition");
  add_common(boot, c, false);
  boot->add_option("--w", bw, "comma-separated ordinals")->required()->delimiter(',');
  std::size_t boot_iota = 3;
  boot->add_option("--iota", boot_iota, "at least 3");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(c, exhaustive);
    if (*leqc) return cmd_leq(c, other);
    if (*extend) return cmd_extend(c, beta);
    if (*amal) return cmd_amalgamate(c, other);
    if (*chain) return cmd_chain(c, adds, min_n, min_M, pool);
    if (*ndrk) return cmd_ndrk(c, iota, max_u, per_structure, witness);
    if (*chk) return cmd_check_chain(c);
    if (*ov) return cmd_overlap(c, x, y, -1);
    if (*st) return cmd_overlap(c, x, y, k);
    if (*rank) return cmd_rank(c, order_n, theta, max_w, star, eps);
    if (*l43) return cmd_lemma43(c, part, depth, cases);
    if (*boot) return cmd_bootstrap(c, bw, boot_iota);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
