#pragma once

#include <json.hpp>

#include "atemp/equivalence.hpp"
#include "atemp/intensional.hpp"
#include "atemp/learner.hpp"

namespace atemp {

using json = nlohmann::json;

json to_json(const FinSet& s);
json to_json(const FinFun& f);
json to_json(const FinRel& r);
json to_json(const Learner& m);
json to_json(const IntLearner& m);
json to_json(const Witness& w);

FinSet finset_from_json(const json& j);
FinFun finfun_from_json(const json& j);
FinRel finrel_from_json(const json& j);
Learner learner_from_json(const json& j);
IntLearner intlearner_from_json(const json& j);

/// Human-readable function table, one "x -> y" line per element.
std::string format_table(const FinFun& f, const std::string& indent = "  ");
/// Relation as sorted "x ~ y" lines (lexicographic by labels).
std::string format_relation(const FinRel& r, const std::string& indent = "  ");
std::string format_witness(const Witness& w);

}  // namespace atemp
