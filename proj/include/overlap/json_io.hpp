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

#pragma once

#include <json.hpp>
#include <string>

#include "overlap/forcing.hpp"
#include "overlap/model_rank.hpp"
#include "overlap/ndrk.hpp"
#include "overlap/oracle.hpp"
#include "overlap/structures.hpp"

namespace overlap {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "overlap-lab/1";

// Parse failures and shape errors surface as ParseError.
json parse_json(const std::string& text, const std::string& origin = "<input>");
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

json forest_to_json(const Forest& f);
Forest forest_from_json(const json& j);

json struct_to_json(const MStruct& m);
MStruct struct_from_json(const json& j);

json condition_to_json(const Condition& p);
Condition condition_from_json(const json& j);

json model_to_json(const FiniteModel& m);
FiniteModel model_from_json(const json& j);

// {"kind":"order","size":N,"theta":t}
// {"kind":"model","model":{..},"theta":t,"max_w":w,"embedding":{"a":e}}
// {"kind":"table","entries":[{"v":[..],"rk":r,"zeta":z,"k":k}]}
RankOracle oracle_from_json(const json& j);

json diagnostics_to_json(const Diagnostics& d);
json certificates_to_json(const std::vector<OverlapCertificate>& c);

json run_to_json(const GenericRun& run);
GenericRun run_from_json(const json& j);

json rank_result_to_json(const RankResult& r);
json chain_to_json(const ChainWitness& c);
ChainWitness chain_from_json(const json& j);
json perfect_to_json(const PerfectWitness& p);

}  // namespace overlap
