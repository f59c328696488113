#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "acceptance.hpp"
#include "pintersect/counting.hpp"
#include "pintersect/errors.hpp"
#include "pintersect/fourier.hpp"
#include "pintersect/increment.hpp"
#include "pintersect/intersective.hpp"
#include "pintersect/json_io.hpp"
#include "pintersect/polycore.hpp"
#include "pintersect/primes.hpp"

namespace pintersect::cli {

namespace {

using nlohmann::json;
namespace io = pintersect::json;

struct Globals {
  unsigned threads = 1;
  u64 seed = 20240601;
  bool csv = false;
  std::string config;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IndexSet load_set(const std::string& path) {
  try {
    return io::parse_index_set(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("set file '" + path + "': " + e.what());
  }
}

/// A set from --set, or a seeded random set from --random-density with --L.
struct SetSource {
  std::string path;
  std::optional<double> density;
  std::optional<u64> L;

  void attach(CLI::App* sub) {
    sub->add_option("--set", path, "JSON file {\"L\": n, \"members\": [...]}");
    sub->add_option("--random-density", density, "draw a random set of this density (uses --seed)");
  }

  IndexSet load(u64 seed, json& provenance) const {
    if (!path.empty()) {
      provenance = {{"set", path}};
      return load_set(path);
    }
    if (!density || !L) throw CLI::ValidationError("--set or --random-density with --L is required");
    if (*density < 0 || *density > 1) throw CLI::ValidationError("--random-density must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(*density);
    IndexSet B{*L, {}};
    for (u64 x = 1; x <= *L; ++x)
      if (coin(rng)) B.members.push_back(x);
    provenance = {{"random_density", *density}, {"L", *L}, {"seed", seed}};
    return B;
  }
};

json complex_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}, {"abs", std::abs(c)}}; }

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

void emit_csv(std::ostream& out, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

std::string num(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

std::vector<u64> parse_list(const std::string& text) {
  std::vector<u64> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    tok = trim(tok);
    if (tok.empty()) continue;
    std::size_t used = 0;
    const unsigned long long v = std::stoull(tok, &used);
    if (used != tok.size()) throw CLI::ValidationError("not an integer list: " + text);
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  int lineno = 0;
  for (std::string line; std::getline(ss, line);) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    std::replace(key.begin(), key.end(), '_', '-');
    out[key] = value;
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prime-difference structure in dense sets: intersectivity, counts, exponential sums, density increments"};
  app.name("pintersect");
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, "worker threads for independent instances")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed of the single random generator");
  app.add_flag("--csv", g.csv, "CSV instead of JSON where a table makes sense");
  app.add_option("--config", g.config, "file of 'key = value' defaults, overridden by flags");

  std::string poly_text;
  auto add_poly = [&](CLI::App* sub) { sub->add_option("--poly", poly_text, "coefficients, lowest first, as JSON")->required(); };

  // certify
  u64 qmax = 10000;
  auto* certify = app.add_subcommand("certify", "decide P-intersectivity up to a modulus bound");
  add_poly(certify);
  certify->add_option("--qmax", qmax, "modulus bound")->check(CLI::PositiveNumber);

  // aux
  u64 d = 1;
  auto* aux = app.add_subcommand("aux", "auxiliary polynomial h_d and its root data");
  add_poly(aux);
  aux->add_option("--d", d, "modulus d")->required()->check(CLI::PositiveNumber);

  // psi
  u64 psi_x = 0, psi_q = 1;
  i64 psi_a = 0;
  auto* psi_cmd = app.add_subcommand("psi", "Chebyshev psi(X; a, q)");
  psi_cmd->add_option("--x", psi_x, "upper limit X")->required();
  psi_cmd->add_option("--a", psi_a, "residue a");
  psi_cmd->add_option("--q", psi_q, "modulus q")->check(CLI::PositiveNumber);

  // count
  std::optional<u64> L, s_opt;
  std::string method = "both";
  bool list_pairs = false;
  SetSource count_set;
  auto* count = app.add_subcommand("count", "weighted count R_d(B) of pairs differing by h_d(y), y prime-indexed");
  add_poly(count);
  count->add_option("--d", d, "modulus d")->check(CLI::PositiveNumber);
  count->add_option("--L", L, "ambient length (random sets)");
  count->add_option("--s", s_opt, "range parameter s (default 2^k + 6)");
  count->add_option("--method", method, "direct, fft or both")->check(CLI::IsMember({"direct", "fft", "both"}));
  count->add_flag("--pairs", list_pairs, "list solution pairs (x, y)");
  count_set.attach(count);

  // weyl
  std::string alpha_text;
  std::optional<u64> X;
  auto* weyl = app.add_subcommand("weyl", "weighted Weyl sum S_X(alpha)");
  add_poly(weyl);
  weyl->add_option("--d", d, "modulus d")->check(CLI::PositiveNumber);
  weyl->add_option("--L", L, "length L, fixing H_d and M_d")->required();
  weyl->add_option("--alpha", alpha_text, "p/q, p/q+beta, or a decimal")->required();
  weyl->add_option("--X", X, "sum length (default floor(M_d))");
  weyl->add_option("--s", s_opt, "range parameter s (default 2^k + 6)");

  // gauss
  u64 gq = 1;
  i64 ga = 1;
  bool all_a = false;
  auto* gauss = app.add_subcommand("gauss", "Gauss sums G(a, q) of h_d");
  add_poly(gauss);
  gauss->add_option("--d", d, "modulus d")->check(CLI::PositiveNumber);
  gauss->add_option("--q", gq, "modulus q")->required()->check(CLI::PositiveNumber);
  gauss->add_option("--a", ga, "numerator a, coprime to q");
  gauss->add_flag("--all-a", all_a, "every a coprime to q");

  // arcs
  double eta = 1.0 / 16, gamma = 2.25;
  SetSource arcs_set;
  u64 arcs_L = 0;
  std::size_t max_arcs = 2'000'000;
  bool list_arcs = false;
  auto* arcs_cmd = app.add_subcommand("arcs", "major-arc system, and the L2 mass of a set's balance function on it");
  arcs_cmd->add_option("--L", arcs_L, "length L")->required()->check(CLI::PositiveNumber);
  arcs_cmd->add_option("--eta", eta, "eta")->check(CLI::Range(1e-9, 1.0));
  arcs_cmd->add_option("--gamma", gamma, "gamma = k + epsilon/2")->check(CLI::PositiveNumber);
  arcs_cmd->add_option("--max-arcs", max_arcs, "refuse larger arc systems");
  arcs_cmd->add_flag("--list", list_arcs, "list every major arc");
  arcs_set.attach(arcs_cmd);

  // iterate
  IterationConfig cfg;
  std::string budget_text = "auto", floor_text = "auto", deficiency_text;
  SetSource iter_set;
  auto* iterate = app.add_subcommand("iterate", "density-increment iteration with a recorded trace");
  add_poly(iterate);
  iter_set.attach(iterate);
  iterate->add_option("--L", L, "ambient length (random sets)");
  iterate->add_option("--budget", budget_text, "step budget, or auto for ceil(C delta^-(gamma-1))");
  iterate->add_option("--budget-C", cfg.budget_C, "the constant C of the automatic budget");
  iterate->add_option("--epsilon", cfg.epsilon, "gamma = k + epsilon/2")->check(CLI::PositiveNumber);
  iterate->add_option("--c2", cfg.c2, "eta = c2 sigma")->check(CLI::PositiveNumber);
  iterate->add_option("--deficiency", deficiency_text, "structure gate factor (inf disables)");
  iterate->add_option("--ceiling", cfg.ceiling, "stop once the density exceeds this");
  iterate->add_option("--floor", floor_text, "length floor, or auto for ceil(sqrt N)");
  iterate->add_option("--q0", cfg.q0, "initial pigeonhole modulus")->check(CLI::PositiveNumber);
  iterate->add_option("--d0", cfg.d0, "initial modulus")->check(CLI::PositiveNumber);
  iterate->add_option("--s", s_opt, "range parameter s (default 2^k + 6)");
  iterate->add_option("--max-arcs", cfg.max_arcs, "refuse larger arc systems");

  // profile
  std::string Ns_text, mode_text = "primes";
  auto* profile = app.add_subcommand("profile", "greedy difference-avoiding set densities");
  add_poly(profile);
  profile->add_option("--N", Ns_text, "comma-separated lengths")->required();
  profile->add_option("--mode", mode_text, "primes, all-n or both")->check(CLI::IsMember({"primes", "all-n", "both"}));

  // verify
  std::string level_text = "fast", only_text;
  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--level", level_text, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--only", only_text, "comma-separated criterion numbers");

  // Config defaults: append "--key value" for keys the chosen command knows and argv lacks.
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") g.config = args[i + 1];
  if (!g.config.empty()) {
    std::map<std::string, std::string> conf;
    try {
      conf = parse_config(read_file(g.config));
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
    CLI::App* sub = nullptr;
    for (const auto& a : args)
      if (auto* c = app.get_subcommand_no_throw(a)) {
        sub = c;
        break;
      }
    for (const auto& [key, value] : conf) {
      const std::string flag = "--" + key;
      if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
      const CLI::Option* opt = sub ? sub->get_option_no_throw(flag) : nullptr;
      if (!opt) opt = app.get_option_no_throw(flag);
      if (!opt) {
        err << "warning: config key '" << key << "' is not used by this command\n";
        continue;
      }
      if (opt->get_type_size() == 0) {
        if (value == "true" || value == "1" || value == "yes") args.push_back(flag);
      } else {
        args.push_back(flag);
        args.push_back(value);
      }
    }
  }
  std::vector<const char*> cargv{argv[0]};
  for (const auto& a : args) cargv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    auto poly = [&] { return io::parse_poly_text(poly_text); };

    if (certify->parsed()) {
      const auto v = certify_P_intersective(poly(), qmax);
      if (g.csv) {
        emit_csv(out, {"kind", "modulus", "bound"},
                 {{to_string(v.kind), std::to_string(v.modulus), std::to_string(v.bound)}});
      } else {
        emit(out, io::verdict(v));
      }
    } else if (aux->parsed()) {
      const RootBook book(poly());
      const auto a = book.aux(d);
      if (g.csv) {
        emit_csv(out, {"d", "r_d", "lambda_d", "b_d", "h_d"},
                 {{std::to_string(d), a.r_d.get_str(), a.lambda_d.get_str(), a.b_d.get_str(), a.h_d.to_string()}});
      } else {
        json j = io::aux(a);
        j["content"] = io::big(content(a.h_d));
        json roots = json::array();
        for (const auto& [p, c] : book.choices_for(d)) roots.push_back(io::padic_choice(c));
        j["roots"] = roots;
        emit(out, j);
      }
    } else if (psi_cmd->parsed()) {
      const double v = psi(psi_x, psi_a, psi_q);
      if (g.csv) {
        emit_csv(out, {"X", "a", "q", "psi"}, {{std::to_string(psi_x), std::to_string(psi_a), std::to_string(psi_q), num(v)}});
      } else {
        out << std::setprecision(17) << v << '\n';
      }
    } else if (count->parsed()) {
      const IntPoly h = poly();
      count_set.L = L;
      json prov;
      const IndexSet B = count_set.load(g.seed, prov);
      const RootBook book(h);
      const auto a = book.aux(d);
      const auto wp = weighted_primes(a, B.L, s_opt.value_or((u64{1} << h.degree()) + 6));
      json j{{"input", prov}, {"d", d}, {"L", B.L}, {"size", B.size()}, {"psi", wp.psi_total}};
      CountOptions co;
      co.list_pairs = list_pairs;
      std::optional<RCount> direct, fft;
      if (method != "fft") direct = count_R_direct(B, a, wp, co);
      if (method != "direct") fft = count_R_fft(B, a, wp);
      const RCount& main = direct ? *direct : *fft;
      j["R"] = io::r_count(main);
      j["value"] = main.value;
      if (direct && fft) j["fft_value"] = fft->value;
      if (g.csv) {
        emit_csv(out, {"d", "L", "size", "R", "psi"},
                 {{std::to_string(d), std::to_string(B.L), std::to_string(B.size()), num(main.value), num(wp.psi_total)}});
      } else {
        emit(out, j);
      }
    } else if (weyl->parsed()) {
      const IntPoly h = poly();
      const RootBook book(h);
      const auto a = book.aux(d);
      const auto wp = weighted_primes(a, *L, s_opt.value_or((u64{1} << h.degree()) + 6));
      const auto alpha = Frequency::parse(alpha_text);
      const u64 xs = X.value_or(wp.M_floor);
      if (xs >= wp.nu.size()) throw std::invalid_argument("--X exceeds the tabulated range " + std::to_string(wp.nu.size() - 1));
      const Complex S = weyl_sum(a, wp, xs, alpha);
      json j = complex_json(S);
      j["alpha"] = alpha_text;
      j["X"] = xs;
      j["psi"] = wp.psi_total;
      j["ratio"] = wp.psi_total > 0 ? std::abs(S) / wp.psi_total : 0.0;
      if (g.csv) {
        emit_csv(out, {"alpha", "X", "re", "im", "abs", "psi"},
                 {{alpha_text, std::to_string(xs), num(S.real()), num(S.imag()), num(std::abs(S)), num(wp.psi_total)}});
      } else {
        emit(out, j);
      }
    } else if (gauss->parsed()) {
      const IntPoly h = poly();
      const RootBook book(h);
      const auto a = book.aux(d);
      const double norm = std::pow(static_cast<double>(gq), 1.0 - 1.0 / h.degree());
      auto row = [&](u64 x, Complex G) {
        json r{{"a", x}};
        r.update(complex_json(G));
        r["ratio"] = std::abs(G) / norm;
        return r;
      };
      json arr = json::array();
      if (all_a) {
        const auto G = gauss_sums_all(a, gq);
        for (u64 x = 0; x < gq; ++x)
          if (gq == 1 || std::gcd(x, gq) == 1) arr.push_back(row(x, G[x]));
      } else {
        arr.push_back(row(static_cast<u64>(((ga % static_cast<i64>(gq)) + static_cast<i64>(gq)) % static_cast<i64>(gq)),
                          gauss_sum(a, ga, gq)));
      }
      if (g.csv) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : arr)
          rows.push_back({std::to_string(r["a"].get<u64>()), num(r["re"]), num(r["im"]), num(r["abs"]), num(r["ratio"])});
        emit_csv(out, {"a", "re", "im", "abs", "ratio"}, rows);
      } else {
        emit(out, all_a ? arr : arr[0]);
      }
    } else if (arcs_cmd->parsed()) {
      const auto arcs = make_arcs(arcs_L, eta, gamma, max_arcs);
      json j{{"L", arcs.L}, {"eta", arcs.eta}, {"gamma", arcs.gamma}, {"Q", arcs.Q}, {"radius", arcs.radius},
             {"arcs", arcs.majors.size()}};
      if (list_arcs) {
        json list = json::array();
        for (const auto& m : arcs.majors) list.push_back({m.a, m.q});
        j["majors"] = list;
      }
      const bool with_set = !arcs_set.path.empty() || arcs_set.density;
      std::optional<L2Report> rep;
      if (with_set) {
        arcs_set.L = arcs_L;
        json prov;
        const IndexSet B = arcs_set.load(g.seed, prov);
        if (B.L != arcs_L) throw std::invalid_argument("set length differs from --L");
        rep = l2_concentration(B, arcs, default_grid(arcs_L));
        json by_q = json::object();
        for (const auto& [q, m] : rep->mass_by_q) by_q[std::to_string(q)] = m;
        j["input"] = prov;
        j["l2"] = {{"grid", rep->grid},         {"mass_by_q", by_q},
                   {"major", rep->major_mass},  {"minor", rep->minor_mass},
                   {"plancherel", rep->plancherel_mass}, {"direct", rep->direct_mass}};
      }
      if (g.csv) {
        std::vector<std::vector<std::string>> rows;
        if (rep)
          for (const auto& [q, m] : rep->mass_by_q) rows.push_back({std::to_string(q), num(m)});
        emit_csv(out, {"q", "mass"}, rows);
      } else {
        emit(out, j);
      }
    } else if (iterate->parsed()) {
      const IntPoly h = poly();
      iter_set.L = L;
      json prov;
      const IndexSet A = iter_set.load(g.seed, prov);
      if (budget_text != "auto") cfg.budget = parse_list(budget_text).at(0);
      if (floor_text != "auto") cfg.floor = parse_list(floor_text).at(0);
      if (!deficiency_text.empty())
        cfg.deficiency = deficiency_text == "inf" ? std::numeric_limits<double>::infinity() : std::stod(deficiency_text);
      if (s_opt) cfg.s = *s_opt;
      const auto t = run_iteration(A, h, cfg);
      if (g.csv) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& s : t.steps)
          rows.push_back({s.branch, num(s.sigma_in.get_d()), num(s.sigma_out.get_d()), std::to_string(s.q),
                          std::to_string(s.lambda_q), std::to_string(s.L_out), std::to_string(s.d_out), num(s.r_before),
                          num(s.r_after)});
        emit_csv(out, {"branch", "sigma_in", "sigma_out", "q", "lambda_q", "L_out", "d_out", "r_before", "r_after"}, rows);
      } else {
        json j = io::trace(t);
        j["input"] = prov;
        j["poly"] = io::poly(h);
        j["violations"] = trace_violations(t);
        emit(out, j);
      }
    } else if (profile->parsed()) {
      const IntPoly h = poly();
      const auto Ns = parse_list(Ns_text);
      if (Ns.empty()) throw CLI::ValidationError("--N needs at least one length");
      std::vector<GapMode> modes;
      if (mode_text != "all-n") modes.push_back(GapMode::Primes);
      if (mode_text != "primes") modes.push_back(GapMode::AllN);
      std::vector<std::vector<std::string>> rows;
      json arr = json::array();
      const std::string pname = h.to_string();
      for (GapMode m : modes)
        for (const auto& r : density_profile(h, Ns, m)) {
          rows.push_back({std::to_string(r.N), num(r.density), std::to_string(r.set_size), to_string(m), "\"" + pname + "\""});
          arr.push_back({{"N", r.N}, {"density", r.density}, {"set_size", r.set_size}, {"mode", to_string(m)}, {"poly", pname}});
        }
      if (g.csv) {
        emit_csv(out, {"N", "density", "set_size", "mode", "poly"}, rows);
      } else {
        emit(out, arr);
      }
    } else if (verify->parsed()) {
      AcceptanceOptions ao;
      ao.level = parse_level(level_text);
      ao.seed = g.seed;
      ao.threads = g.threads;
      for (u64 id : parse_list(only_text)) ao.only.push_back(static_cast<int>(id));
      const auto results = run_acceptance(ao, [&](const CriterionResult& r) { err << format_line(r) << '\n'; });
      emit(out, report(ao, results));
      return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; }) ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace pintersect::cli
