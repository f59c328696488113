#include "pintersect/json_io.hpp"

#include <limits>
#include <stdexcept>

namespace pintersect::json {

namespace {

using Kind = IntersectivityVerdict::Kind;

Kind parse_kind(const std::string& s) {
  for (auto k : {Kind::CertifiedUpTo, Kind::FailsAt, Kind::SufficientCondition})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown verdict kind '" + s + "'");
}

}  // namespace

json big(const BigInt& v) { return v.get_str(); }

BigInt parse_big(const json& j) {
  if (j.is_string()) {
    BigInt v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw std::invalid_argument("not a decimal integer: " + j.dump());
    return v;
  }
  if (j.is_number_unsigned()) return BigInt(static_cast<unsigned long>(j.get<std::uint64_t>()));
  if (j.is_number_integer()) return BigInt(static_cast<long>(j.get<std::int64_t>()));
  throw std::invalid_argument("expected an integer, got " + j.dump());
}

json rational(const BigRational& v) { return v.get_str(); }

BigRational parse_rational(const json& j) {
  if (!j.is_string()) return BigRational(parse_big(j));
  BigRational r;
  if (r.set_str(j.get<std::string>(), 10) != 0) throw std::invalid_argument("not a rational: " + j.dump());
  r.canonicalize();
  return r;
}

json poly(const IntPoly& p) {
  json arr = json::array();
  for (const auto& c : p.coeffs()) arr.push_back(big(c));
  return arr;
}

IntPoly parse_poly(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("polynomial must be a JSON array of coefficients");
  std::vector<BigInt> cs;
  for (const auto& c : j) cs.push_back(parse_big(c));
  return IntPoly(std::move(cs));
}

IntPoly parse_poly_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("polynomial is not valid JSON: ") + e.what());
  }
  return parse_poly(j);
}

json index_set(const IndexSet& B) { return {{"L", B.L}, {"members", B.members}}; }

IndexSet parse_index_set(const json& j) {
  if (!j.is_object() || !j.contains("L") || !j.contains("members"))
    throw std::invalid_argument("set must be an object with \"L\" and \"members\"");
  return IndexSet::from_members(j.at("L").get<u64>(), j.at("members").get<std::vector<u64>>());
}

json verdict(const IntersectivityVerdict& v) {
  json j{{"kind", to_string(v.kind)}};
  switch (v.kind) {
    case Kind::CertifiedUpTo: j["bound"] = v.bound; break;
    case Kind::FailsAt:
      j["modulus"] = v.modulus;
      j["roots"] = v.roots;
      break;
    case Kind::SufficientCondition: j["condition"] = v.condition; break;
  }
  if (!v.details.empty()) j["details"] = v.details;
  return j;
}

IntersectivityVerdict parse_verdict(const json& j) {
  IntersectivityVerdict v;
  v.kind = parse_kind(j.at("kind").get<std::string>());
  v.bound = j.value("bound", u64{0});
  v.modulus = j.value("modulus", u64{0});
  v.roots = j.value("roots", std::vector<u64>{});
  v.condition = j.value("condition", std::string{});
  v.details = j.value("details", std::string{});
  return v;
}

json aux(const AuxData& a) {
  return {{"d", a.d}, {"r_d", big(a.r_d)}, {"lambda_d", big(a.lambda_d)}, {"h_d", poly(a.h_d)}, {"b_d", big(a.b_d)}};
}

AuxData parse_aux(const json& j) {
  AuxData a;
  a.d = j.at("d").get<u64>();
  a.r_d = parse_big(j.at("r_d"));
  a.lambda_d = parse_big(j.at("lambda_d"));
  a.h_d = parse_poly(j.at("h_d"));
  a.b_d = parse_big(j.at("b_d"));
  return a;
}

json padic_choice(const PadicRootChoice& c) {
  return {{"prime", c.prime},   {"residue", big(c.residue)}, {"multiplicity", c.multiplicity},
          {"depth", c.depth},   {"coprime", c.coprime},      {"t", c.t},
          {"lift", big(c.lift)}, {"precision", c.precision}};
}

json r_count(const RCount& r) {
  json terms = json::array();
  for (const auto& t : r.terms) terms.push_back({{"y", t.y}, {"prime", t.prime}, {"pairs", t.pairs}});
  json j{{"value", r.value}, {"weight", rational(r.weight)}, {"terms", terms}};
  if (r.pairs) {
    json pairs = json::array();
    for (const auto& [x, y] : *r.pairs) pairs.push_back({x, y});
    j["pairs"] = pairs;
  }
  return j;
}

RCount parse_r_count(const json& j) {
  RCount r;
  r.value = j.at("value").get<double>();
  r.weight = parse_rational(j.at("weight"));
  for (const auto& t : j.at("terms")) r.terms.push_back({t.at("y"), t.at("prime"), t.at("pairs")});
  if (j.contains("pairs")) {
    r.pairs.emplace();
    for (const auto& p : j.at("pairs")) r.pairs->emplace_back(p.at(0).get<u64>(), p.at(1).get<u64>());
  }
  return r;
}

json step(const IncrementStep& s) {
  return {{"branch", s.branch},
          {"sigma_in", s.sigma_in.get_d()},
          {"sigma_out", s.sigma_out.get_d()},
          {"sigma_in_exact", rational(s.sigma_in)},
          {"sigma_out_exact", rational(s.sigma_out)},
          {"q", s.q},
          {"lambda_q", s.lambda_q},
          {"x0", s.x0},
          {"r_before", s.r_before},
          {"r_after", s.r_after},
          {"threshold", s.threshold},
          {"L_in", s.L_in},
          {"L_out", s.L_out},
          {"d_in", s.d_in},
          {"d_out", s.d_out},
          {"omega", s.omega},
          {"increment_target", s.increment_target},
          {"increment_ratio", s.sigma_out.get_d() / s.sigma_in.get_d()},
          {"size_out", s.B_out.size()}};
}

IncrementStep parse_step(const json& j) {
  IncrementStep s;
  s.branch = j.at("branch").get<std::string>();
  s.sigma_in = j.contains("sigma_in_exact") ? parse_rational(j.at("sigma_in_exact")) : BigRational(j.at("sigma_in").get<double>());
  s.sigma_out =
      j.contains("sigma_out_exact") ? parse_rational(j.at("sigma_out_exact")) : BigRational(j.at("sigma_out").get<double>());
  s.q = j.at("q").get<u64>();
  s.lambda_q = j.at("lambda_q").get<u64>();
  s.x0 = j.value("x0", i64{0});
  s.r_before = j.at("r_before").get<double>();
  s.r_after = j.at("r_after").get<double>();
  const auto& th = j.contains("threshold") ? j.at("threshold") : json(0.0);
  s.threshold = th.is_null() ? std::numeric_limits<double>::infinity() : th.get<double>();
  s.L_in = j.value("L_in", u64{0});
  s.L_out = j.at("L_out").get<u64>();
  s.d_in = j.value("d_in", u64{1});
  s.d_out = j.at("d_out").get<u64>();
  s.omega = j.value("omega", 0.0);
  s.increment_target = j.value("increment_target", 0.0);
  s.B_out.L = s.L_out;
  return s;
}

json trace(const IterationTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) steps.push_back(step(s));
  const auto& st = t.start;
  return {{"start",
           {{"N", st.N},
            {"size", st.size},
            {"delta", st.delta.get_d()},
            {"delta_exact", rational(st.delta)},
            {"d0", st.d0},
            {"q0", st.q0},
            {"s", st.s},
            {"gamma", st.gamma},
            {"floor", st.floor},
            {"budget", st.budget}}},
          {"steps", steps},
          {"outcome", to_string(t.outcome)},
          {"detail", t.detail},
          {"final_R", t.final_R},
          {"final_d", t.final_d},
          {"final_L", t.final_set.L},
          {"final_size", t.final_set.size()}};
}

IterationTrace parse_trace(const json& j) {
  IterationTrace t;
  const auto& s = j.at("start");
  t.start.N = s.at("N").get<u64>();
  t.start.size = s.value("size", u64{0});
  t.start.delta = s.contains("delta_exact") ? parse_rational(s.at("delta_exact")) : BigRational(s.at("delta").get<double>());
  t.start.d0 = s.value("d0", u64{1});
  t.start.q0 = s.value("q0", u64{1});
  t.start.s = s.value("s", u64{0});
  t.start.gamma = s.value("gamma", 0.0);
  t.start.floor = s.value("floor", u64{0});
  t.start.budget = s.value("budget", u64{0});
  for (const auto& st : j.at("steps")) t.steps.push_back(parse_step(st));
  t.outcome = parse_outcome(j.at("outcome").get<std::string>());
  t.detail = j.value("detail", std::string{});
  t.final_R = j.value("final_R", 0.0);
  t.final_d = j.value("final_d", u64{1});
  t.final_set.L = j.value("final_L", u64{0});
  return t;
}

}  // namespace pintersect::json
