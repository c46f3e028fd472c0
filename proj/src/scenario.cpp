#include "flownet/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "flownet/error.hpp"

namespace flownet {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void schema_fail(const std::string& context, const std::string& what) {
  throw Error(ErrorKind::Schema, context + ": " + what);
}

void check_keys(const Json& obj, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) known |= item.key() == key;
    if (!known) schema_fail(context, "unknown field '" + item.key() + "'");
  }
}

const Json& member(const Json& obj, const char* key, const std::string& context) {
  if (!obj.is_object()) schema_fail(context, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(context, std::string("missing field '") + key + "'");
  return *it;
}

double number_field(const Json& obj, const char* key, const std::string& context) {
  const Json& v = member(obj, key, context);
  if (!v.is_number()) schema_fail(context, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::string string_field(const Json& obj, const char* key, const std::string& context) {
  const Json& v = member(obj, key, context);
  if (!v.is_string()) schema_fail(context, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> number_array(const Json& v, const std::string& context) {
  if (!v.is_array()) schema_fail(context, "expected an array of numbers");
  std::vector<double> out;
  for (const Json& e : v) {
    if (!e.is_number()) schema_fail(context, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

LinkSignal parse_signal(const Json& j, const std::string& context) {
  std::string kind = string_field(j, "kind", context);
  if (kind == "constant") {
    check_keys(j, {"kind", "level"}, context);
    return LinkSignal::constant(number_field(j, "level", context));
  }
  if (kind == "sinusoid") {
    check_keys(j, {"kind", "amplitude", "omega", "phase", "phase_is_parameter"}, context);
    bool flagged = false;
    if (j.contains("phase_is_parameter")) {
      if (!j["phase_is_parameter"].is_boolean())
        schema_fail(context, "field 'phase_is_parameter' must be a boolean");
      flagged = j["phase_is_parameter"].get<bool>();
    }
    return LinkSignal::sinusoid(number_field(j, "amplitude", context),
                                number_field(j, "omega", context),
                                number_field(j, "phase", context), flagged);
  }
  if (kind == "piecewise") {
    check_keys(j, {"kind", "times", "levels"}, context);
    return LinkSignal::piecewise(number_array(member(j, "times", context), context + ".times"),
                                 number_array(member(j, "levels", context), context + ".levels"));
  }
  if (kind == "zero_after") {
    check_keys(j, {"kind", "cutoff", "inner"}, context);
    return LinkSignal::zero_after(parse_signal(member(j, "inner", context), context + ".inner"),
                                  number_field(j, "cutoff", context));
  }
  schema_fail(context, "unknown inflow kind '" + kind + "'");
}

Json signal_to_json(const LinkSignal& s) {
  Json j;
  switch (s.kind) {
    case LinkSignal::Kind::Constant:
      j["kind"] = "constant";
      j["level"] = s.level;
      break;
    case LinkSignal::Kind::Sinusoid:
      j["kind"] = "sinusoid";
      j["amplitude"] = s.amplitude;
      j["omega"] = s.omega;
      j["phase"] = s.phase;
      if (s.phase_is_parameter) j["phase_is_parameter"] = true;
      break;
    case LinkSignal::Kind::Piecewise:
      j["kind"] = "piecewise";
      j["times"] = s.times;
      j["levels"] = s.levels;
      break;
    case LinkSignal::Kind::ZeroAfter:
      j["kind"] = "zero_after";
      j["cutoff"] = s.cutoff;
      j["inner"] = signal_to_json(*s.inner);
      break;
  }
  return j;
}

FlowFamily parse_family(const Json& j, const FlowGraph& graph, const std::string& context) {
  std::string family = string_field(j, "family", context);
  if (family == "saturating_exp") {
    check_keys(j, {"family", "capacity"}, context);
    return SaturatingExp{number_field(j, "capacity", context)};
  }
  if (family == "linear") {
    check_keys(j, {"family", "rate"}, context);
    return LinearFlow{number_field(j, "rate", context)};
  }
  if (family == "node_proportional") {
    check_keys(j, {"family", "kappa"}, context);
    return NodeProportional{number_field(j, "kappa", context)};
  }
  if (family == "phase_proportional") {
    check_keys(j, {"family", "kappa", "phase"}, context);
    const Json& phase = member(j, "phase", context);
    if (!phase.is_array()) schema_fail(context, "field 'phase' must be an array of link names");
    PhaseProportional p;
    p.kappa = number_field(j, "kappa", context);
    for (const Json& e : phase) {
      if (!e.is_string()) schema_fail(context, "field 'phase' must be an array of link names");
      int id = graph.link_index(e.get<std::string>());
      if (id < 0)
        throw Error(ErrorKind::Validation,
                    context + ": phase names unknown link '" + e.get<std::string>() + "'");
      p.phase.push_back(id);
    }
    return p;
  }
  schema_fail(context, "unknown flow family '" + family + "'");
}

Json family_to_json(const FlowFamily& fam, const FlowGraph& graph) {
  Json j;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, SaturatingExp>) {
          j["family"] = "saturating_exp";
          j["capacity"] = f.capacity;
        } else if constexpr (std::is_same_v<T, LinearFlow>) {
          j["family"] = "linear";
          j["rate"] = f.rate;
        } else if constexpr (std::is_same_v<T, NodeProportional>) {
          j["family"] = "node_proportional";
          j["kappa"] = f.kappa;
        } else if constexpr (std::is_same_v<T, PhaseProportional>) {
          j["family"] = "phase_proportional";
          j["kappa"] = f.kappa;
          Json names = Json::array();
          for (int id : f.phase) names.push_back(graph.links[id].name);
          j["phase"] = names;
        } else {
          throw Error(ErrorKind::Structural,
                      "custom flow families exist only in code and cannot be written to a file");
        }
      },
      fam);
  return j;
}

Mat parse_matrix(const Json& j, int m, const std::string& context) {
  if (!j.is_array() || static_cast<int>(j.size()) != m)
    schema_fail(context, "expected " + std::to_string(m) + " rows");
  Mat out(m, m);
  for (int i = 0; i < m; ++i) {
    std::vector<double> row = number_array(j[i], context + " row " + std::to_string(i));
    if (static_cast<int>(row.size()) != m)
      schema_fail(context, "row " + std::to_string(i) + " must have " + std::to_string(m) +
                               " entries");
    for (int k = 0; k < m; ++k) out(i, k) = row[k];
  }
  return out;
}

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

InflowSignal parse_inflow(const Json& j, int m, const std::string& context) {
  if (!j.is_array() || static_cast<int>(j.size()) != m)
    schema_fail(context, "expected one inflow entry per link (" + std::to_string(m) + ")");
  InflowSignal inflow;
  for (int i = 0; i < m; ++i)
    inflow.links.push_back(parse_signal(j[i], context + "[" + std::to_string(i) + "]"));
  return inflow;
}

Vec parse_vector(const Json& j, int m, const std::string& context) {
  std::vector<double> values = number_array(j, context);
  if (static_cast<int>(values.size()) != m)
    schema_fail(context, "expected " + std::to_string(m) + " entries");
  return Eigen::Map<const Vec>(values.data(), m);
}

Json vector_to_json(const Vec& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

void Scenario::validate() const {
  if (schema_version != 1)
    throw Error(ErrorKind::Schema,
                "unsupported schema_version " + std::to_string(schema_version));
  if (name.empty()) throw Error(ErrorKind::Validation, "scenario name must not be empty");
  graph.check_structure();
  const int m = graph.link_count();
  if (m < 1) throw Error(ErrorKind::Validation, "scenario needs at least one link");

  FlowField built_field = field();  // throws on family inconsistencies

  auto check_single = [&](const Mat& R, const InflowSignal& lambda, const Vec& x0,
                          const std::string& label) {
    ValidationReport report = validate_network(graph, R);
    if (!report.valid())
      throw Error(ErrorKind::Validation, label + " routing is invalid:\n" + report.to_text());
    if (lambda.size() != m)
      throw Error(ErrorKind::Validation, label + " inflow must have one entry per link");
    lambda.check();
    if (x0.size() != m)
      throw Error(ErrorKind::Validation, label + " initial state must have one entry per link");
    for (int i = 0; i < m; ++i)
      if (!(x0[i] >= 0.0) || !std::isfinite(x0[i]))
        throw Error(ErrorKind::Validation, label + " initial state must be nonnegative");
  };

  if (multicommodity()) {
    if (routing.size() != 0 || inflow.size() != 0 || initial_state.size() != 0)
      throw Error(ErrorKind::Validation,
                  "a scenario is either single-commodity or multicommodity, not both");
    std::set<std::string> ids;
    for (const CommoditySpec& c : commodities) {
      if (c.id.empty() || !ids.insert(c.id).second)
        throw Error(ErrorKind::Validation, "commodity ids must be nonempty and unique");
      check_single(c.routing, c.inflow, c.initial_state, "commodity '" + c.id + "'");
    }
    if (!built_field.bounded())
      throw Error(ErrorKind::Validation,
                  "multicommodity scenarios need a finite capacity on every link");
    if (sim.mode == SimMode::Inclusion)
      throw Error(ErrorKind::Validation,
                  "multicommodity scenarios only support smooth mode");
  } else {
    check_single(routing, inflow, initial_state, "scenario");
    if (sim.mode == SimMode::Smooth && !built_field.flow_vanishes_iff_empty())
      throw Error(ErrorKind::Validation,
                  "this flow field can release mass from empty links; sim.mode must be "
                  "\"inclusion\"");
  }

  if (!(sim.dt > 0.0) || !(sim.horizon > 0.0) || sim.dt > sim.horizon)
    throw Error(ErrorKind::Validation, "sim needs 0 < dt <= horizon");
  if (sim.store_every < 1)
    throw Error(ErrorKind::Validation, "sim.store_every must be at least 1");
  if (!(sim.divergence_multiplier > 1.0))
    throw Error(ErrorKind::Validation, "sim.divergence_multiplier must exceed 1");
}

Scenario parse_scenario(const std::string& json_text, const std::string& origin) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, origin + ": " + e.what());
  }
  if (!doc.is_object()) schema_fail(origin, "top level must be an object");
  check_keys(doc,
             {"schema_version", "name", "notes", "nodes", "links", "flows", "routing", "inflow",
              "initial_state", "commodities", "sim"},
             origin);

  Scenario sc;
  const Json& version = member(doc, "schema_version", origin);
  if (!version.is_number_integer()) schema_fail(origin, "schema_version must be an integer");
  sc.schema_version = version.get<int>();
  sc.name = string_field(doc, "name", origin);
  if (doc.contains("notes")) {
    if (!doc["notes"].is_string()) schema_fail(origin, "field 'notes' must be a string");
    sc.notes = doc["notes"].get<std::string>();
  }

  const Json& nodes = member(doc, "nodes", origin);
  if (!nodes.is_array() || nodes.empty()) schema_fail(origin, "'nodes' must be a nonempty array");
  std::map<std::string, int> node_ids;
  for (const Json& n : nodes) {
    if (!n.is_string()) schema_fail(origin, "'nodes' must contain strings");
    sc.graph.node_names.push_back(n.get<std::string>());
    node_ids.emplace(sc.graph.node_names.back(), sc.graph.node_count() - 1);
  }

  const Json& links = member(doc, "links", origin);
  if (!links.is_array() || links.empty()) schema_fail(origin, "'links' must be a nonempty array");
  for (const Json& l : links) {
    std::string ctx = origin + ".links[" + std::to_string(sc.graph.link_count()) + "]";
    check_keys(l, {"name", "tail", "head"}, ctx);
    Link link;
    link.name = string_field(l, "name", ctx);
    std::string tail = string_field(l, "tail", ctx);
    std::string head = string_field(l, "head", ctx);
    auto t = node_ids.find(tail);
    auto h = node_ids.find(head);
    if (t == node_ids.end())
      throw Error(ErrorKind::Validation, ctx + ": unknown tail node '" + tail + "'");
    if (h == node_ids.end())
      throw Error(ErrorKind::Validation, ctx + ": unknown head node '" + head + "'");
    link.tail = t->second;
    link.head = h->second;
    sc.graph.links.push_back(link);
  }
  const int m = sc.graph.link_count();

  const Json& flows = member(doc, "flows", origin);
  if (!flows.is_array() || static_cast<int>(flows.size()) != m)
    schema_fail(origin, "'flows' must have one entry per link");
  for (int i = 0; i < m; ++i)
    sc.families.push_back(
        parse_family(flows[i], sc.graph, origin + ".flows[" + std::to_string(i) + "]"));

  bool single = doc.contains("routing") || doc.contains("inflow") || doc.contains("initial_state");
  bool multi = doc.contains("commodities");
  if (single && multi)
    schema_fail(origin, "give either routing/inflow/initial_state or commodities, not both");
  if (!single && !multi)
    schema_fail(origin, "give either routing/inflow/initial_state or commodities");

  if (single) {
    sc.routing = parse_matrix(member(doc, "routing", origin), m, origin + ".routing");
    sc.inflow = parse_inflow(member(doc, "inflow", origin), m, origin + ".inflow");
    sc.initial_state =
        parse_vector(member(doc, "initial_state", origin), m, origin + ".initial_state");
  } else {
    const Json& commodities = member(doc, "commodities", origin);
    if (!commodities.is_array() || commodities.empty())
      schema_fail(origin, "'commodities' must be a nonempty array");
    for (const Json& c : commodities) {
      std::string ctx = origin + ".commodities[" + std::to_string(sc.commodities.size()) + "]";
      check_keys(c, {"id", "routing", "inflow", "initial_state"}, ctx);
      CommoditySpec spec;
      spec.id = string_field(c, "id", ctx);
      spec.routing = parse_matrix(member(c, "routing", ctx), m, ctx + ".routing");
      spec.inflow = parse_inflow(member(c, "inflow", ctx), m, ctx + ".inflow");
      spec.initial_state =
          parse_vector(member(c, "initial_state", ctx), m, ctx + ".initial_state");
      sc.commodities.push_back(std::move(spec));
    }
  }

  const Json& sim = member(doc, "sim", origin);
  check_keys(sim, {"dt", "horizon", "mode", "store_every", "divergence_multiplier"},
             origin + ".sim");
  sc.sim.dt = number_field(sim, "dt", origin + ".sim");
  sc.sim.horizon = number_field(sim, "horizon", origin + ".sim");
  std::string mode = string_field(sim, "mode", origin + ".sim");
  if (mode == "smooth") sc.sim.mode = SimMode::Smooth;
  else if (mode == "inclusion") sc.sim.mode = SimMode::Inclusion;
  else schema_fail(origin + ".sim", "mode must be \"smooth\" or \"inclusion\"");
  if (sim.contains("store_every")) {
    if (!sim["store_every"].is_number_integer())
      schema_fail(origin + ".sim", "store_every must be an integer");
    sc.sim.store_every = sim["store_every"].get<int>();
  }
  if (sim.contains("divergence_multiplier"))
    sc.sim.divergence_multiplier = number_field(sim, "divergence_multiplier", origin + ".sim");

  sc.validate();
  return sc;
}

std::string scenario_to_json(const Scenario& sc) {
  Json doc;
  doc["schema_version"] = sc.schema_version;
  doc["name"] = sc.name;
  if (!sc.notes.empty()) doc["notes"] = sc.notes;
  doc["nodes"] = sc.graph.node_names;
  Json links = Json::array();
  for (const Link& l : sc.graph.links) {
    Json j;
    j["name"] = l.name;
    j["tail"] = sc.graph.node_names[l.tail];
    j["head"] = sc.graph.node_names[l.head];
    links.push_back(j);
  }
  doc["links"] = links;
  Json flows = Json::array();
  for (const FlowFamily& fam : sc.families) flows.push_back(family_to_json(fam, sc.graph));
  doc["flows"] = flows;
  if (!sc.multicommodity()) {
    doc["routing"] = matrix_to_json(sc.routing);
    Json inflow = Json::array();
    for (const LinkSignal& s : sc.inflow.links) inflow.push_back(signal_to_json(s));
    doc["inflow"] = inflow;
    doc["initial_state"] = vector_to_json(sc.initial_state);
  } else {
    Json commodities = Json::array();
    for (const CommoditySpec& c : sc.commodities) {
      Json j;
      j["id"] = c.id;
      j["routing"] = matrix_to_json(c.routing);
      Json inflow = Json::array();
      for (const LinkSignal& s : c.inflow.links) inflow.push_back(signal_to_json(s));
      j["inflow"] = inflow;
      j["initial_state"] = vector_to_json(c.initial_state);
      commodities.push_back(j);
    }
    doc["commodities"] = commodities;
  }
  Json sim;
  sim["dt"] = sc.sim.dt;
  sim["horizon"] = sc.sim.horizon;
  sim["mode"] = to_string(sc.sim.mode);
  if (sc.sim.store_every != 1) sim["store_every"] = sc.sim.store_every;
  if (sc.sim.divergence_multiplier != 40.0)
    sim["divergence_multiplier"] = sc.sim.divergence_multiplier;
  doc["sim"] = sim;
  return doc.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open scenario file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "cannot read scenario file: " + path.string());
  return parse_scenario(buffer.str(), path.filename().string());
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  scenario.validate();
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open file for writing: " + path.string());
  out << scenario_to_json(scenario);
  if (!out) throw Error(ErrorKind::Io, "failed writing scenario: " + path.string());
}

namespace {

int retune_sinusoids(LinkSignal& s, double value, bool phase_only) {
  if (s.kind == LinkSignal::Kind::Sinusoid) {
    if (phase_only) {
      if (!s.phase_is_parameter) return 0;
      s.phase = value;
    } else {
      s.amplitude = value;
    }
    return 1;
  }
  if (s.kind == LinkSignal::Kind::ZeroAfter) {
    LinkSignal inner_copy = *s.inner;
    int touched = retune_sinusoids(inner_copy, value, phase_only);
    if (touched > 0) s.inner = std::make_shared<const LinkSignal>(std::move(inner_copy));
    return touched;
  }
  return 0;
}

int retune_inflow(InflowSignal& inflow, double value, bool phase_only) {
  int touched = 0;
  for (LinkSignal& s : inflow.links) touched += retune_sinusoids(s, value, phase_only);
  return touched;
}

}  // namespace

void apply_param(Scenario& sc, const std::string& key, double value) {
  if (!std::isfinite(value))
    throw Error(ErrorKind::Param, "parameter '" + key + "' must be finite");

  auto for_each_inflow = [&](auto&& fn) {
    if (sc.multicommodity()) {
      for (CommoditySpec& c : sc.commodities) fn(c.inflow);
    } else {
      fn(sc.inflow);
    }
  };

  if (key == "A") {
    if (value < 0.0) throw Error(ErrorKind::Param, "amplitude must be nonnegative");
    int touched = 0;
    for_each_inflow([&](InflowSignal& inflow) { touched += retune_inflow(inflow, value, false); });
    if (touched == 0)
      throw Error(ErrorKind::Param, "parameter 'A' applies to sinusoid inflows; none here");
    return;
  }
  if (key == "phi") {
    int touched = 0;
    for_each_inflow([&](InflowSignal& inflow) { touched += retune_inflow(inflow, value, true); });
    if (touched == 0)
      throw Error(ErrorKind::Param,
                  "parameter 'phi' applies to sinusoids flagged phase_is_parameter; none here");
    return;
  }
  if (key == "kappa") {
    if (!(value > 0.0)) throw Error(ErrorKind::Param, "kappa must be positive");
    int touched = 0;
    for (FlowFamily& fam : sc.families) {
      if (auto* np = std::get_if<NodeProportional>(&fam)) {
        np->kappa = value;
        ++touched;
      } else if (auto* pp = std::get_if<PhaseProportional>(&fam)) {
        pp->kappa = value;
        ++touched;
      }
    }
    if (touched == 0)
      throw Error(ErrorKind::Param,
                  "parameter 'kappa' applies to proportional-pool families; none here");
    return;
  }
  if (key.rfind("lambda", 0) == 0) {
    if (value < 0.0) throw Error(ErrorKind::Param, "inflow level must be nonnegative");
    std::string rest = key.substr(6);
    if (rest.empty()) throw Error(ErrorKind::Param, "use lambda<i> or lambda<C>_<i>");
    size_t underscore = rest.rfind('_');
    InflowSignal* target = nullptr;
    std::string index_text;
    if (underscore == std::string::npos) {
      if (sc.multicommodity())
        throw Error(ErrorKind::Param,
                    "this scenario has commodities; use lambda<C>_<i> (for example lambda" +
                        sc.commodities.front().id + "_1)");
      target = &sc.inflow;
      index_text = rest;
    } else {
      std::string id = rest.substr(0, underscore);
      index_text = rest.substr(underscore + 1);
      for (CommoditySpec& c : sc.commodities)
        if (c.id == id) target = &c.inflow;
      if (!target)
        throw Error(ErrorKind::Param, "no commodity named '" + id + "' in this scenario");
    }
    if (index_text.empty() ||
        index_text.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorKind::Param, "bad link index in parameter '" + key + "'");
    int index = std::stoi(index_text);
    if (index < 1 || index > target->size())
      throw Error(ErrorKind::Param, "link index " + index_text + " is out of range (1.." +
                                        std::to_string(target->size()) + ")");
    target->links[index - 1] = LinkSignal::constant(value);
    return;
  }
  throw Error(ErrorKind::Param,
              "unknown parameter '" + key + "' (known: A, phi, kappa, lambda<i>, lambda<C>_<i>)");
}

Scenario resolve_scenario(const std::string& path_or_name) {
  std::error_code ec;
  if (std::filesystem::exists(path_or_name, ec)) return load_scenario(path_or_name);
  for (const BundledScenario& b : bundled_scenarios())
    if (b.name == path_or_name) return load_bundled_scenario(path_or_name);
  throw Error(ErrorKind::Io, "'" + path_or_name +
                                 "' is neither a scenario file nor a bundled scenario name "
                                 "(see list-scenarios)");
}

std::vector<CertificateReport> certify_scenario(const Scenario& sc) {
  sc.validate();
  FlowField field = sc.field();
  std::vector<CertificateReport> reports;
  if (sc.multicommodity()) {
    reports.push_back(mc_certify(field, sc.commodities, sc.sim.horizon));
    return reports;
  }

  LeontiefOperator op = LeontiefOperator::build(sc.routing);
  reports.push_back(certify_iss(op, field, sc.inflow, sc.sim.horizon));
  reports.push_back(certify_iss_normalized(op, field, sc.inflow, sc.sim.horizon));
  if (field.needs_inclusion() || sc.sim.mode == SimMode::Inclusion)
    reports.push_back(certify_inclusion(op, field, sc.inflow, sc.sim.horizon));

  bool local = sc.routing.isZero(0.0) && sc.inflow.all_constant();
  if (local) {
    int head = sc.graph.links.front().head;
    for (const Link& l : sc.graph.links) local &= l.head == head;
  }
  if (local && field.bounded() && !field.needs_inclusion())
    reports.push_back(check_local_overload(field, sc.routing, sc.inflow.value(0.0)));
  return reports;
}

RunOutput run_scenario(const Scenario& sc) {
  sc.validate();
  RunOutput out;
  FlowField field = sc.field();
  if (sc.multicommodity()) {
    out.multi = true;
    out.mc = mc_simulate(field, sc.commodities, sc.sim);
  } else {
    LeontiefOperator op = LeontiefOperator::build(sc.routing);
    out.single = simulate(op, field, sc.inflow, sc.initial_state, sc.sim);
  }
  return out;
}

}  // namespace flownet
