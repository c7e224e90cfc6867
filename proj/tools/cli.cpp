#include "bvtk/cli.hpp"

#include "bvtk/arith.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace bvtk::cli {

namespace {

enum class Kind { Int, Rat, Json, Str, Flag, IntList, RatList };

struct OptionDef {
  std::string flag;  // without leading dashes; the JSON key swaps '-' for '_'
  Kind kind;
  std::string help;
};

const std::map<std::string, std::vector<OptionDef>>& option_table() {
  static const OptionDef model{"model", Kind::Json, R"(local pair, e.g. {"n":2,"coeffs":["1/2","1"]})"};
  static const OptionDef bdiv{"B", Kind::Json, R"(b-divisor deviations, e.g. {"deviations":[{"v":[1,2],"value":"0"}]})"};
  static const OptionDef vec{"v", Kind::IntList, "valuation vector, e.g. 1,2"};
  static const OptionDef set{"set", Kind::Json, R"(coefficient set, e.g. {"kind":"adj_closure","base":{"kind":"standard"}})"};
  static const std::map<std::string, std::vector<OptionDef>> table{
      {"ldisc", {model, vec}},
      {"lcoeff", {model, vec, bdiv}},
      {"ltrace", {model, {"blowups", Kind::Json, "list of vectors to star-subdivide at, in order"}}},
      {"mld", {model}},
      {"round-check", {{"coeffs", Kind::RatList, "coefficients in [0,1)"}, {"m", Kind::Int, "positive integer"}}},
      {"fset", {model}},
      {"weight", {model, bdiv, {"stratum", Kind::IntList, "coordinates (0-based) cutting out a stratum"}}},
      {"reduce", {model, bdiv, {"box", Kind::Int, "check L <= B on [0,box]^n after reducing"}}},
      {"verify",
       {model, bdiv, {"box", Kind::Int, "box size (default 12)"}, {"threads", Kind::Int, "worker threads"},
        {"initial", Kind::Flag, "check the unreduced model instead"}}},
      {"closure",
       {{"base", Kind::RatList, "generators"}, {"bound", Kind::Int, "denominator bound"},
        {"mode", Kind::Str, "pairwise (default) or generated"}}},
      {"chain", {set, {"length", Kind::Int, "chain length"}, {"bound", Kind::Int, "denominator bound (default 2000)"}}},
      {"dcc", {set, {"threshold", Kind::Int, "witness length (default 5)"}, {"bound", Kind::Int, "denominator bound (default 2000)"}}},
      {"sylvester", {{"k", Kind::Int, "number of recursion steps"}}},
      {"minvol", {{"n", Kind::Int, "dimension"}}},
      {"pnvol", {{"n", Kind::Int, "dimension"}, {"a", Kind::RatList, "n+2 coefficients (default: Sylvester)"}}},
      {"polyvol", {{"polytope", Kind::Json, R"({"dim":2,"halfspaces":[{"normal":[1,0],"offset":"0"},...]})"}}},
      {"hurwitz", {{"g", Kind::Int, "genus"}}},
      {"product", {{"n", Kind::Int, "number of factors"}, {"g", Kind::Int, "genus"}}},
      {"fermat",
       {{"n", Kind::Int, "dimension"}, {"m", Kind::Int, "degree"}, {"scan", Kind::Flag, "scan n = 1..n-max"},
        {"m-rule", Kind::Str, "degree rule for the scan, n+K (default n+3)"}, {"n-max", Kind::Int, "scan limit (default 10)"},
        {"format", Kind::Str, "scan output: csv (default) or json"}}},
      {"unitary", {{"n", Kind::Int, "n"}, {"q", Kind::Int, "prime power; omit for the polynomial"}}},
      {"charp", {{"q-max", Kind::Int, "largest q"}}},
      {"constants",
       {{"n", Kind::Int, "dimension"}, {"eps", Kind::Rat, "epsilon"}, {"gamma0", Kind::Rat, "gamma_0 (default 1)"},
        {"delta", Kind::Rat, "delta"}}},
  };
  return table;
}

std::string json_key(std::string flag) {
  std::replace(flag.begin(), flag.end(), '-', '_');
  return flag;
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw PreconditionError(what + " is not valid JSON: " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

json int_value(const std::string& text) {
  const Integer v = parse_integer(text);
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return v.convert_to<long long>();
  return to_string(v);
}

json option_value(const OptionDef& def, const std::string& text) {
  switch (def.kind) {
    case Kind::Int:
      return int_value(text);
    case Kind::Rat:
    case Kind::Str:
      return text;
    case Kind::Json:
      return parse_json_text(text, "--" + def.flag);
    case Kind::Flag:
      return true;
    case Kind::IntList:
    case Kind::RatList: {
      if (!text.empty() && text.front() == '[') return parse_json_text(text, "--" + def.flag);
      json a = json::array();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) a.push_back(def.kind == Kind::IntList ? int_value(item) : json(item));
      return a;
    }
  }
  return nullptr;
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw PreconditionError("cannot write " + path);
  f << text;
}

json entry_error(const std::string& kind, const std::string& message, int code) {
  json e = error_json(kind, message);
  e["exit_code"] = code;
  e["status"] = "error";
  return e;
}

}  // namespace

json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

BatchResult run_batch(const json& batch, unsigned parallelism, bool verify) {
  if (parallelism < 1) throw PreconditionError("parallelism must be at least 1");
  const json& list = batch.is_object() && batch.contains("commands") ? batch.at("commands") : batch;
  if (!list.is_array()) throw PreconditionError("a batch is a list of commands or {\"commands\": [...]}");
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& e : list) {
    if (!e.is_object() || !e.contains("id") || !e.at("id").is_string())
      throw PreconditionError("every batch entry needs a string id");
    const auto id = e.at("id").get<std::string>();
    if (!seen.insert(id).second) throw PreconditionError("duplicate batch id '" + id + "'");
    ids.push_back(id);
  }

  std::vector<json> results(list.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < list.size();) {
      const json& e = list[i];
      try {
        if (!e.contains("command") || !e.at("command").is_string())
          throw PreconditionError("entry has no command name");
        const json args = e.contains("args") ? e.at("args") : json::object();
        results[i] = {{"output", execute(e.at("command").get<std::string>(), args, verify)}, {"status", "ok"}};
      } catch (const PreconditionError& ex) {
        results[i] = entry_error("precondition", ex.what(), kPrecondition);
      } catch (const InvariantError& ex) {
        results[i] = entry_error("invariant", ex.what(), kInvariant);
      } catch (const std::exception& ex) {
        results[i] = entry_error("internal", ex.what(), kInvariant);
      }
    }
  };
  const unsigned workers = std::min<unsigned>(parallelism, static_cast<unsigned>(std::max<std::size_t>(1, list.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  int code = kOk;
  json first = nullptr;
  json by_id = json::object();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i]["status"] == "error") {
      code = std::max(code, results[i]["exit_code"].get<int>());
      if (first.is_null()) first = ids[i];
    }
    by_id[ids[i]] = results[i];
  }
  return {{{"exit_code", code}, {"first_error", first}, {"results", by_id}}, code};
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with toric b-divisors, coefficient sets and explicit bounds", "bvtk"};
  app.require_subcommand(1);

  struct Parsed {
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::string json_text, file, out_path;
    bool verify = false;
    unsigned parallel = 1;
  };
  std::map<std::string, Parsed> parsed;
  std::map<std::string, CLI::App*> subs;

  for (const auto& [name, specs] : option_table()) {
    auto* sub = app.add_subcommand(name);
    subs[name] = sub;
    Parsed& p = parsed[name];
    sub->add_option("--json", p.json_text, "all arguments as one JSON object");
    sub->add_option("--file", p.file, "read the JSON arguments from a file");
    sub->add_option("--out", p.out_path, "write the result to a file");
    sub->add_flag("--verify", p.verify, "recompute with an independent method and fail on mismatch");
    for (const auto& s : specs) {
      if (s.kind == Kind::Flag)
        sub->add_flag("--" + s.flag, p.flags[s.flag], s.help);
      else
        sub->add_option("--" + s.flag, p.values[s.flag], s.help);
    }
  }
  auto* batch = app.add_subcommand("batch", "run a JSON list of {id, command, args} entries");
  Parsed& bp = parsed["batch"];
  batch->add_option("--file", bp.file, "batch file")->required();
  batch->add_option("--out", bp.out_path, "write the results to a file");
  batch->add_option("--parallel", bp.parallel, "worker threads")->check(CLI::PositiveNumber);
  batch->add_flag("--verify", bp.verify, "verify every entry");

  if (argv.size() > 1 && !argv[1].empty() && argv[1][0] != '-' && argv[1] != "batch" &&
      option_table().count(argv[1]) == 0) {
    err << render(error_json("usage", "unknown command '" + argv[1] + "'"));
    return kPrecondition;
  }
  std::vector<std::string> rest(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    for (const auto* sub : app.get_subcommands())
      if (!sub->get_name().empty()) message = sub->get_name() + ": " + message;
    err << render(error_json("usage", message));
    return kPrecondition;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  Parsed& p = parsed[name];
  try {
    if (name == "batch") {
      const auto result = run_batch(read_json_file(p.file), p.parallel, p.verify);
      write_output(render(result.output), p.out_path, out);
      if (result.exit_code != kOk)
        err << render(error_json("batch", "entry '" + result.output["first_error"].get<std::string>() + "' failed"));
      return result.exit_code;
    }
    json args = json::object();
    if (!p.file.empty()) args = read_json_file(p.file);
    if (!p.json_text.empty()) args = parse_json_text(p.json_text, "--json");
    if (!args.is_object()) throw PreconditionError("arguments must be a JSON object");
    for (const auto& s : option_table().at(name)) {
      auto* opt = subs[name]->get_option_no_throw("--" + s.flag);
      if (opt == nullptr || opt->count() == 0) continue;
      args[json_key(s.flag)] = option_value(s, s.kind == Kind::Flag ? std::string() : p.values[s.flag]);
    }
    std::string format = "csv";
    if (name == "fermat" && args.contains("format")) {
      format = args["format"].get<std::string>();
      args.erase("format");
      if (format != "csv" && format != "json") throw PreconditionError("format must be csv or json");
    }
    const json result = execute(name, args, p.verify);
    const bool csv = name == "fermat" && result.contains("rows") && format == "csv";
    write_output(csv ? scan_csv(result) : render(result), p.out_path, out);
    return kOk;
  } catch (const PreconditionError& e) {
    err << render(error_json("precondition", e.what()));
    return kPrecondition;
  } catch (const InvariantError& e) {
    err << render(error_json("invariant", e.what()));
    return kInvariant;
  } catch (const json::exception& e) {
    err << render(error_json("precondition", e.what()));
    return kPrecondition;
  } catch (const std::exception& e) {
    err << render(error_json("internal", e.what()));
    return kInvariant;
  }
}

}  // namespace bvtk::cli
