#include "bandjoin/plan.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

namespace bandjoin {

std::string kind_name(Plan::Kind kind) {
  switch (kind) {
    case Plan::Kind::RecPart: return "recpart";
    case Plan::Kind::OneBucket: return "one-bucket";
    case Plan::Kind::Grid: return "grid";
    case Plan::Kind::Quantile: return "quantile";
  }
  throw std::logic_error("kind_name: unreachable");
}

std::string to_json(const Plan& plan) {
  using nlohmann::ordered_json;
  switch (plan.kind) {
    case Plan::Kind::RecPart:
      return to_json(plan.tree);  // already tagged kind:"recpart"
    case Plan::Kind::OneBucket: {
      ordered_json j;
      j["kind"] = "one-bucket";
      j["r"] = plan.oneBucket.r;
      j["c"] = plan.oneBucket.c;
      return j.dump(2);
    }
    case Plan::Kind::Grid: {
      ordered_json j;
      j["kind"] = "grid";
      j["j"] = plan.grid.j;
      j["anchor"] = plan.grid.anchor;
      return j.dump(2);
    }
    case Plan::Kind::Quantile: {
      ordered_json j;
      j["kind"] = "quantile";
      j["sizePerBlock"] = plan.sizePerBlock;
      return j.dump(2);
    }
  }
  throw std::logic_error("to_json(Plan): unreachable");
}

Plan plan_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  Plan p;
  if (kind == "recpart") {
    p.kind = Plan::Kind::RecPart;
    p.tree = split_tree_from_json(text);
  } else if (kind == "one-bucket") {
    p.kind = Plan::Kind::OneBucket;
    p.oneBucket.r = j.at("r").get<int>();
    p.oneBucket.c = j.at("c").get<int>();
    if (p.oneBucket.r < 1 || p.oneBucket.c < 1)
      throw std::runtime_error("plan: one-bucket shape must be positive");
  } else if (kind == "grid") {
    p.kind = Plan::Kind::Grid;
    p.grid.j = j.at("j").get<int>();
    p.grid.anchor = j.at("anchor").get<std::vector<double>>();
    if (p.grid.j < 1) throw std::runtime_error("plan: grid j must be >= 1");
  } else if (kind == "quantile") {
    p.kind = Plan::Kind::Quantile;
    p.sizePerBlock = j.at("sizePerBlock").get<size_t>();
    if (p.sizePerBlock < 1)
      throw std::runtime_error("plan: sizePerBlock must be >= 1");
  } else {
    throw std::runtime_error("plan: unknown kind '" + kind + "'");
  }
  return p;
}

}  // namespace bandjoin
