// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
//   balprice balance      --instance I --pricing P [--alpha A --beta B | --beta1 --beta2]
//   balprice simulate     --instance I --pricing P [--order fixed:2,1|all|random|adversary]
//   balprice ratio        --instance I --pricing P [--exact | --trials T --seed S]
//   balprice permeability --instance I [--rule opt|greedy] [--grid 0,1,2,3]
//   balprice catalog NAME [--key value ...] -o out.json
//
// Exit codes: 0 success, 1 certification failure, 2 input error, 3 cap exceeded.

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "balprice/balprice.hpp"

namespace balprice {
namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;
constexpr const char* kRatioSchema = "balprice.ratio.v1";

const std::vector<std::string> kPricingNames = {
    "single-item", "intro-bundle", "xos",         "mph",
    "fractional-ca", "knapsack",   "pip",         "matroid",
    "warmup",      "alg1-greedy",  "alg2-opt",    "compose-add",
    "compose-max"};

struct RunConfig {
  std::string subcommand;
  std::string instance;
  std::string pricing;
  double alpha = 1;
  double beta = 1;
  std::optional<double> beta1;
  std::optional<double> beta2;
  std::string order = "adversary";
  std::string tie = "adversarial";
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  bool exact = false;
  std::size_t cap_feasible = Caps::Default().feasible;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string output;
  std::string rule = "opt";
  std::string grid = "0,1,2,3";
  std::string generator;
  Json generator_params = Json::object();

  BalanceParams Params() const {
    if (beta1 || beta2) {
      return BalanceParams::Weak(alpha, beta1.value_or(0), beta2.value_or(0));
    }
    return BalanceParams::Strong(alpha, beta);
  }

  Json ToJson() const {
    Json j = {{"subcommand", subcommand}};
    if (subcommand == "catalog") {
      j["generator"] = generator;
      j["params"] = generator_params;
      return j;
    }
    j["instance"] = instance;
    j["cap_feasible"] = cap_feasible;
    if (subcommand == "permeability") {
      j["rule"] = rule;
      j["grid"] = grid;
      return j;
    }
    j["pricing"] = pricing;
    j["params"] = Params().ToJson();
    j["tie"] = tie;
    if (subcommand != "balance") j["order"] = order;
    if (subcommand == "balance" && order != "adversary") j["order"] = order;
    if (subcommand == "ratio") {
      j["exact"] = exact;
      j["trials"] = trials;
      j["seed"] = seed;
    }
    if (subcommand == "simulate") j["seed"] = seed;
    return j;
  }
};

// Locale-independent shortest round-trip formatting.
std::string Num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string CsvQuote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<int> ParseList(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    int v = 0;
    auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (res.ec != std::errc() || res.ptr != part.data() + part.size()) {
      throw ParseError("bad integer list: " + text);
    }
    out.push_back(v);
  }
  return out;
}

std::vector<Money> ParseMoneyList(const std::string& text) {
  std::vector<Money> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    double v = 0;
    auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (res.ec != std::errc() || res.ptr != part.data() + part.size()) {
      throw ParseError("bad number list: " + text);
    }
    out.push_back(v);
  }
  return out;
}

TiePolicy ParseTie(const std::string& s) {
  if (s == "null") return TiePolicy::kPreferNull;
  if (s == "buy") return TiePolicy::kPreferBuyLexmin;
  if (s == "adversarial") return TiePolicy::kAdversarial;
  throw ParseError("unknown tie policy " + s);
}

// A 1-based permutation written as "fixed:2,1" or "2,1"; returns 0-based.
std::optional<std::vector<int>> ParseFixedOrder(const std::string& s, int n) {
  std::string body = s;
  if (body.rfind("fixed:", 0) == 0) {
    body = body.substr(6);
  } else if (body.empty() || !std::isdigit(static_cast<unsigned char>(body[0]))) {
    return std::nullopt;
  }
  std::vector<int> order = ParseList(body);
  std::vector<bool> seen(n, false);
  if (static_cast<int>(order.size()) != n) {
    throw ParseError("order must list all " + std::to_string(n) + " agents");
  }
  for (int& a : order) {
    if (a < 1 || a > n || seen[a - 1]) throw ParseError("order is not a permutation");
    seen[a - 1] = true;
    --a;
  }
  return order;
}

std::vector<int> OneBased(const std::vector<int>& order) {
  std::vector<int> out;
  for (int a : order) out.push_back(a + 1);
  return out;
}

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------------------
// Pricing constructions by name.

class Pricing {
 public:
  Pricing(const Instance& inst, const std::string& name, std::size_t cap)
      : inst_(inst),
        name_(name),
        space_(std::make_shared<const FeasibleSpace>(inst.env, cap)),
        cap_(cap) {
    if (std::find(kPricingNames.begin(), kPricingNames.end(), name) ==
        kPricingNames.end()) {
      throw ParseError("unknown pricing " + name);
    }
  }

  const FeasibleSpace& space() const { return *space_; }

  Allocation Alg(const ValuationProfile& v) const {
    if (name_ == "alg1-greedy") return Greedy(inst_.env, v);
    return Opt(*space_, v);
  }

  PricingRule Build(const ValuationProfile& v) const {
    const Environment& env = inst_.env;
    if (name_ == "single-item") return SingleItemPrices(env, v);
    if (name_ == "intro-bundle") return IntroBundleItemPrices(env, v, Alg(v));
    if (name_ == "xos") return XosItemPrices(env, v, Alg(v));
    if (name_ == "mph") return MphkItemPrices(env, v, Alg(v));
    if (name_ == "fractional-ca") {
      return FractionalCaItemPrices(env, v, FractionalOptConfigLp(env, v));
    }
    if (name_ == "knapsack") return KnapsackPrices(env, Welfare(env, v, Alg(v)));
    if (name_ == "pip") return PipPrices(env, v, Alg(v));
    if (name_ == "matroid") return MatroidDynamicPrices(env, v);
    if (name_ == "warmup") return WarmupCriticalPrices(space_, v);
    if (name_ == "alg1-greedy") return GreedyDerivedPrices(space_, v, Alg(v));
    if (name_ == "alg2-opt") return OptDerivedPrices(space_, v, Alg(v));
    if (name_ == "compose-max") {
      return ComposeMax(
          [&](const ValuationProfile& s) { return AdditiveItemPrices(env, s); },
          env, v, Alg(v),
          [this](const ValuationProfile& s) { return Opt(*space_, s); });
    }
    // compose-add: the default construction in every market.
    const auto& markets = env.as<ProductEnv>().markets;
    std::vector<PricingRule> parts;
    for (std::size_t l = 0; l < markets.size(); ++l) {
      Instance market;
      market.env = markets[l];
      market.agents = MarketProfile(v, static_cast<int>(l));
      Pricing inner(market, MarketDefault(markets[l]), cap_);
      parts.push_back(inner.Build(market.agents));
    }
    return ComposeAdd(env, parts);
  }

  ExchangeFamily Family() const {
    return FamilyFor(name_, inst_.env);
  }

 private:
  static std::string MarketDefault(const Environment& env) {
    switch (env.kind()) {
      case EnvKind::kSingleItem: return "single-item";
      case EnvKind::kMatroid: return "matroid";
      case EnvKind::kCombinatorialAuction: return "xos";
      case EnvKind::kFractionalCa: return "fractional-ca";
      case EnvKind::kKnapsack: return "knapsack";
      case EnvKind::kPip: return "pip";
      default: throw KindMismatch("no default construction for this market");
    }
  }

  static ExchangeFamily FamilyFor(const std::string& name, const Environment& env) {
    if (name == "single-item") return ExchangeFamily::Of(FamilyKind::kSingleItemGate);
    if (name == "knapsack") return ExchangeFamily::Of(FamilyKind::kKnapsackThreshold);
    if (name == "pip") return ExchangeFamily::Of(FamilyKind::kPipThreshold);
    if (name == "matroid" || name == "warmup" || name == "alg1-greedy" ||
        name == "alg2-opt") {
      return ExchangeFamily::Of(FamilyKind::kCanonicalContraction);
    }
    if (name == "compose-add") {
      std::vector<ExchangeFamily> parts;
      for (const Environment& m : env.as<ProductEnv>().markets) {
        parts.push_back(FamilyFor(MarketDefault(m), m));
      }
      return ExchangeFamily::Product(parts);
    }
    return ExchangeFamily::Of(FamilyKind::kItemDisjoint);
  }

  const Instance& inst_;
  std::string name_;
  std::shared_ptr<const FeasibleSpace> space_;
  std::size_t cap_;
};

// ---------------------------------------------------------------------------
// Subcommands.

int CmdBalance(const RunConfig& cfg) {
  Instance inst = LoadInstance(cfg.instance);
  Pricing pricing(inst, cfg.pricing, cfg.cap_feasible);
  const int n = inst.env.agents();
  BalanceOptions opts;
  if (auto fixed = ParseFixedOrder(cfg.order, n)) {
    opts.orders = {*fixed};
  } else if (cfg.order == "all" || (cfg.order == "adversary" && n <= 6)) {
    opts.orders = AllOrders(n, Caps::Default().orders);
  } else if (cfg.order != "adversary") {
    throw ParseError("balance supports --order fixed:<perm> or all");
  }
  const ValuationProfile& v = inst.agents;
  BalanceReport r = CheckBalance(pricing.space(), v, pricing.Build(v),
                                 pricing.Alg(v), pricing.Family(), cfg.Params(),
                                 opts);
  Json report = {{"config", cfg.ToJson()}, {"report", r.ToJson()}};
  if (!cfg.output.empty()) WriteOutput(cfg.output, report.dump(2) + "\n");
  std::cout << (r.passed ? "PASS" : "FAIL") << " " << cfg.pricing << " "
            << cfg.Params().ToJson().dump() << ": " << r.feasible_examined
            << " allocations, " << r.orders_checked << " orders, "
            << r.violations << " violations\n";
  for (std::size_t k = 0; k < r.witnesses.size() && k < 3; ++k) {
    std::cout << "  witness " << r.witnesses[k].ToJson().dump() << "\n";
  }
  return r.passed ? kExitPass : kExitFail;
}

int CmdSimulate(const RunConfig& cfg) {
  Instance inst = LoadInstance(cfg.instance);
  Pricing pricing(inst, cfg.pricing, cfg.cap_feasible);
  const int n = inst.env.agents();
  const TiePolicy tie = ParseTie(cfg.tie);
  const ValuationProfile& v = inst.agents;
  PricingRule p = pricing.Build(v);
  std::vector<int> order;
  Json extra = Json::object();
  if (auto fixed = ParseFixedOrder(cfg.order, n)) {
    order = *fixed;
  } else if (cfg.order == "random") {
    order = IdentityOrder(n);
    CounterRng rng(cfg.seed);
    for (int k = n - 1; k > 0; --k) std::swap(order[k], order[rng.UniformInt(0, k)]);
  } else if (cfg.order == "adversary" || cfg.order == "all") {
    OrderedWelfare worst =
        WorstOrderWelfare(inst.env, p, v, tie, Caps::Default(), cfg.jobs);
    order = worst.order;
    if (cfg.order == "all") {
      Json per_order = Json::array();
      for (const auto& o : AllOrders(n, Caps::Default().orders)) {
        per_order.push_back(
            {{"order", OneBased(o)},
             {"welfare", RunPostedPrice(inst.env, p, v, o, tie).welfare}});
      }
      extra["orders"] = per_order;
    }
  } else {
    throw ParseError("unknown order " + cfg.order);
  }
  MechanismTrace t = RunPostedPrice(inst.env, p, v, order, tie);
  Json report = {{"config", cfg.ToJson()}, {"trace", t.ToJson()}};
  report["trace"]["order"] = OneBased(t.order);
  if (!extra.empty()) report["all_orders"] = extra["orders"];
  Money opt = Welfare(inst.env, v, Opt(pricing.space(), v));
  report["opt_welfare"] = opt;
  if (!cfg.output.empty()) WriteOutput(cfg.output, report.dump(2) + "\n");
  std::cout << "welfare " << Num(t.welfare) << " revenue " << Num(t.revenue)
            << " opt " << Num(opt) << " order " << Json(OneBased(t.order)).dump()
            << "\n";
  return kExitPass;
}

int CmdRatio(const RunConfig& cfg) {
  Instance inst = LoadInstance(cfg.instance);
  Pricing pricing(inst, cfg.pricing, cfg.cap_feasible);
  const int n = inst.env.agents();
  const TiePolicy tie = ParseTie(cfg.tie);
  ProductDistribution dist = inst.Distribution();
  OrderMode mode = OrderMode::Worst();
  if (auto fixed = ParseFixedOrder(cfg.order, n)) {
    mode = OrderMode::Fixed(*fixed);
  } else if (cfg.order == "random") {
    mode = OrderMode::Random();
  } else if (cfg.order != "adversary" && cfg.order != "all") {
    throw ParseError("unknown order " + cfg.order);
  }
  Caps caps = Caps::Default();
  auto ctor = [&](const ValuationProfile& v) { return pricing.Build(v); };
  SampleMode sample = (cfg.exact || dist.SupportSize() <= caps.support)
                          ? SampleMode::Exact()
                          : SampleMode::Sampled(std::max<std::size_t>(cfg.trials, 1),
                                                cfg.seed);
  PricingRule p = ExpectedScaledPrices(inst.env, dist, ctor, sample, cfg.Params(),
                                       caps.support);
  RatioEstimate r =
      cfg.exact ? ExactRatio(pricing.space(), p, dist, mode, tie, caps, cfg.jobs)
                : MonteCarloRatio(pricing.space(), p, dist, mode, cfg.trials,
                                  cfg.seed, tie, caps, cfg.jobs);
  std::ostringstream csv;
  csv << "schema,instance,pricing,order_mode,trials,seed,welfare,opt,ratio,ci95,"
         "exact,config\n";
  csv << kRatioSchema << "," << CsvQuote(cfg.instance) << "," << cfg.pricing << ","
      << mode.Name() << "," << (cfg.exact ? 0 : cfg.trials) << "," << cfg.seed
      << "," << Num(r.expected_mechanism_welfare) << "," << Num(r.expected_opt)
      << "," << Num(r.ratio) << "," << Num(r.ci95_halfwidth) << ","
      << (r.exact ? "true" : "false") << "," << CsvQuote(cfg.ToJson().dump())
      << "\n";
  WriteOutput(cfg.output, csv.str());
  if (!cfg.output.empty()) std::cout << "ratio " << Num(r.ratio) << "\n";
  return kExitPass;
}

int CmdPermeability(const RunConfig& cfg) {
  Instance inst = LoadInstance(cfg.instance);
  FeasibleSpace space(inst.env, cfg.cap_feasible);
  RuleKind rule;
  if (cfg.rule == "opt") {
    rule = RuleKind::kOpt;
  } else if (cfg.rule == "greedy") {
    rule = RuleKind::kGreedy;
  } else {
    throw ParseError("unknown rule " + cfg.rule);
  }
  PermeabilityReport r = Permeability(rule, space, ParseMoneyList(cfg.grid));
  Json report = {{"config", cfg.ToJson()},
                 {"gamma", r.gamma.unbounded ? Json("unbounded") : Json(r.gamma.value)},
                 {"worst_bids", r.worst_bids},
                 {"worst_fixed", r.worst_fixed},
                 {"bid_vectors", r.bid_vectors}};
  WriteOutput(cfg.output, report.dump(2) + "\n");
  if (!cfg.output.empty()) {
    std::cout << "gamma " << (r.gamma.unbounded ? "unbounded" : Num(r.gamma.value))
              << "\n";
  }
  return kExitPass;
}

// Generator parameters arrive as "--key value" pairs; bare flags mean true.
Json GeneratorParams(const std::vector<std::string>& args) {
  Json params = Json::object();
  for (std::size_t k = 0; k < args.size(); ++k) {
    const std::string& a = args[k];
    if (a.rfind("--", 0) != 0 || a.size() < 3) {
      throw ParseError("unexpected argument " + a);
    }
    std::string key = a.substr(2);
    std::string value;
    if (auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else if (k + 1 < args.size() && args[k + 1].rfind("--", 0) != 0) {
      value = args[++k];
    } else {
      params[key] = true;
      continue;
    }
    if (value == "true" || value == "false") {
      params[key] = value == "true";
      continue;
    }
    long long i = 0;
    auto ri = std::from_chars(value.data(), value.data() + value.size(), i);
    if (ri.ec == std::errc() && ri.ptr == value.data() + value.size()) {
      params[key] = i;
      continue;
    }
    double d = 0;
    auto rd = std::from_chars(value.data(), value.data() + value.size(), d);
    if (rd.ec == std::errc() && rd.ptr == value.data() + value.size()) {
      params[key] = d;
      continue;
    }
    params[key] = value;
  }
  return params;
}

int CmdCatalog(const RunConfig& cfg) {
  Instance inst = Generate(cfg.generator, cfg.generator_params);
  WriteOutput(cfg.output, InstanceToJson(inst).dump(2) + "\n");
  return kExitPass;
}

void AddShared(CLI::App* sub, RunConfig& cfg, bool pricing) {
  sub->add_option("--instance", cfg.instance, "Instance JSON file")->required();
  sub->add_option("--cap-feasible", cfg.cap_feasible, "Feasible-set cap")
      ->check(CLI::PositiveNumber);
  sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("-o,--output", cfg.output, "Output path");
  if (!pricing) return;
  sub->add_option("--pricing", cfg.pricing, "Pricing construction")
      ->required()
      ->check(CLI::IsMember(kPricingNames));
  sub->add_option("--alpha", cfg.alpha, "alpha")->check(CLI::PositiveNumber);
  sub->add_option("--beta", cfg.beta, "beta")->check(CLI::NonNegativeNumber);
  sub->add_option("--beta1", cfg.beta1, "beta1 (weak form)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--beta2", cfg.beta2, "beta2 (weak form)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--order", cfg.order,
                  "fixed:<1-based perm>, all, random or adversary");
  sub->add_option("--tie", cfg.tie, "Tie policy")
      ->check(CLI::IsMember({"null", "buy", "adversarial"}));
  sub->add_option("--seed", cfg.seed, "Random seed");
}

int Run(int argc, char** argv) {
  CLI::App app{"Balanced prices: certification and posted-price simulation"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* balance = app.add_subcommand("balance", "Certify balancedness");
  AddShared(balance, cfg, true);
  auto* simulate = app.add_subcommand("simulate", "Run the posted-price mechanism");
  AddShared(simulate, cfg, true);
  auto* ratio = app.add_subcommand("ratio", "Expected welfare ratio");
  AddShared(ratio, cfg, true);
  ratio->add_option("--trials", cfg.trials, "Monte Carlo trials");
  ratio->add_flag("--exact", cfg.exact, "Exact enumeration");
  auto* perm = app.add_subcommand("permeability", "Measure permeability");
  AddShared(perm, cfg, false);
  perm->add_option("--rule", cfg.rule, "opt or greedy");
  perm->add_option("--grid", cfg.grid, "Comma-separated bid grid");
  auto* catalog = app.add_subcommand("catalog", "Generate a catalog instance");
  catalog->add_option("name", cfg.generator, "Generator name")->required();
  catalog->add_option("-o,--output", cfg.output, "Output path");
  catalog->allow_extras();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (balance->parsed()) {
      cfg.subcommand = "balance";
      if (!balance->count("--order")) cfg.order = "adversary";
      return CmdBalance(cfg);
    }
    if (simulate->parsed()) {
      cfg.subcommand = "simulate";
      if (!simulate->count("--tie")) cfg.tie = "buy";
      return CmdSimulate(cfg);
    }
    if (ratio->parsed()) {
      cfg.subcommand = "ratio";
      if (!cfg.exact && cfg.trials == 0) {
        throw ParseError("--trials must be positive without --exact");
      }
      return CmdRatio(cfg);
    }
    if (perm->parsed()) {
      cfg.subcommand = "permeability";
      return CmdPermeability(cfg);
    }
    cfg.subcommand = "catalog";
    cfg.generator_params = GeneratorParams(catalog->remaining());
    return CmdCatalog(cfg);
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kExitCap;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace
}  // namespace balprice

int main(int argc, char** argv) { return balprice::Run(argc, argv); }
