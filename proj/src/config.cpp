#include "cppm/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cppm {

double Law::at(double t) const {
  switch (kind) {
    case LawKind::fixed: return 0.0;
    case LawKind::velocity: return rate * t;
    case LawKind::cosine: return t < t1 ? 0.5 * amplitude * (1.0 - std::cos(M_PI * t / t1)) : amplitude;
    case LawKind::ramp: return t < t0 ? value * t / t0 : value;
    case LawKind::constant: return value;
  }
  return 0.0;
}

double Law::rate_at(double t) const {
  switch (kind) {
    case LawKind::fixed: return 0.0;
    case LawKind::velocity: return rate;
    case LawKind::cosine: return t < t1 ? 0.5 * amplitude * M_PI / t1 * std::sin(M_PI * t / t1) : 0.0;
    case LawKind::ramp: return t < t0 ? value / t0 : 0.0;
    case LawKind::constant: return 0.0;
  }
  return 0.0;
}

namespace {

// Map reader that records consumed keys so leftovers can be reported.
class Reader {
 public:
  Reader(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(path_, "expected a mapping");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return node_ && node_.IsMap() && node_[key] && !node_[key].IsNull(); }

  template <class T>
  T get(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) throw ConfigError(field(key), "missing required field");
    return convert<T>(node_[key], field(key));
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    return convert<T>(node_[key], field(key));
  }

  template <class T>
  std::optional<T> maybe(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return convert<T>(node_[key], field(key));
  }

  Reader child(const std::string& key, bool required = true) {
    seen_.insert(key);
    if (!has(key)) {
      if (required) throw ConfigError(field(key), "missing required section");
      return Reader(YAML::Node(), field(key));
    }
    return Reader(node_[key], field(key));
  }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return has(key) ? node_[key] : YAML::Node();
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ConfigError(field(key), "unknown key");
    }
  }

 private:
  template <class T>
  static T convert(const YAML::Node& n, const std::string& where) {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where, "invalid value '" + (n.IsScalar() ? n.Scalar() : std::string("<node>")) + "'");
    }
  }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class E>
E parse_enum(const std::string& value, const std::map<std::string, E>& options, const std::string& field) {
  auto it = options.find(value);
  if (it == options.end()) {
    std::string list;
    for (const auto& [k, v] : options) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError(field, "unknown value '" + value + "' (expected " + list + ")");
  }
  return it->second;
}

Law parse_law(Reader r) {
  Law law;
  const std::string kind = r.get<std::string>("law");
  law.kind = parse_enum<LawKind>(kind,
                                 {{"fixed", LawKind::fixed},
                                  {"velocity", LawKind::velocity},
                                  {"cosine", LawKind::cosine},
                                  {"ramp", LawKind::ramp},
                                  {"constant", LawKind::constant}},
                                 r.field("law"));
  switch (law.kind) {
    case LawKind::fixed: break;
    case LawKind::velocity: law.rate = r.get<double>("rate"); break;
    case LawKind::cosine:
      law.amplitude = r.get<double>("amplitude");
      law.t1 = r.get<double>("t1");
      if (!(law.t1 > 0.0)) throw ConfigError(r.field("t1"), "must be positive");
      break;
    case LawKind::ramp:
      law.value = r.get<double>("value");
      law.t0 = r.get<double>("t0");
      if (!(law.t0 > 0.0)) throw ConfigError(r.field("t0"), "must be positive");
      break;
    case LawKind::constant: law.value = r.get<double>("value"); break;
  }
  r.finish();
  return law;
}

Region parse_region(Reader r) {
  Region g;
  g.side = parse_enum<Side>(r.get<std::string>("side"),
                            {{"top", Side::top},
                             {"bottom", Side::bottom},
                             {"left", Side::left},
                             {"right", Side::right},
                             {"box", Side::box}},
                            r.field("side"));
  g.depth = r.get<int>("depth", 0);
  if (g.depth < 0) throw ConfigError(r.field("depth"), "must be non-negative");
  if (g.side == Side::box) {
    g.x0 = r.get<double>("x0");
    g.y0 = r.get<double>("y0");
    g.x1 = r.get<double>("x1");
    g.y1 = r.get<double>("y1");
    if (!(g.x1 >= g.x0 && g.y1 >= g.y0)) throw ConfigError(r.field("x1"), "box bounds are inverted");
  }
  r.finish();
  return g;
}

}  // namespace

SimulationConfig parse_config(const YAML::Node& root) {
  SimulationConfig c;
  Reader top(root, "");
  c.name = top.get<std::string>("name", "custom");

  {
    Reader g = top.child("geometry");
    c.geometry.nx = g.get<long>("nx");
    c.geometry.ny = g.get<long>("ny");
    c.geometry.dx = g.get<double>("dx");
    c.geometry.thickness = g.get<double>("thickness");
    c.geometry.horizon_factor = g.get<double>("horizon_factor");
    if (g.has("notch")) {
      Reader n = g.child("notch");
      c.geometry.notch = Segment{{n.get<double>("x0"), n.get<double>("y0")}, {n.get<double>("x1"), n.get<double>("y1")}};
      n.finish();
    } else {
      g.maybe<std::string>("notch");
    }
    g.finish();
  }

  {
    Reader m = top.child("material");
    auto& mat = c.material;
    mat.model = parse_enum<ModelKind>(m.get<std::string>("model"),
                                      {{"viscoplastic", ModelKind::viscoplastic},
                                       {"maxwell_viscoelastic", ModelKind::maxwell_viscoelastic},
                                       {"bond_viscoelastic", ModelKind::bond_viscoelastic}},
                                      m.field("model"));
    mat.density_kind = parse_enum<DensityKind>(m.get<std::string>("density_kind", "partial"),
                                               {{"partial", DensityKind::partial}, {"intrinsic", DensityKind::intrinsic}},
                                               m.field("density_kind"));
    mat.density = m.get<double>("density");
    mat.volume_fraction = m.get<double>("volume_fraction", 1.0);
    mat.E = m.get<double>("E");
    mat.nu = m.get<double>("nu");
    mat.mu_c_ratio = m.get<double>("mu_c_ratio");
    mat.cosserat_length = m.get<double>("cosserat_length");
    mat.micro_inertia = m.get<double>("micro_inertia", 0.0);

    if (mat.model == ModelKind::viscoplastic) {
      Reader v = m.child("viscoplastic");
      auto& vp = mat.viscoplastic;
      vp.c0 = v.get<double>("cohesion");
      vp.h = v.get<double>("softening_modulus");
      vp.phi_f = v.get<double>("friction_angle_deg") * M_PI / 180.0;
      vp.psi = v.get<double>("dilation_angle_deg") * M_PI / 180.0;
      vp.eta = v.get<double>("viscosity");
      vp.a1 = v.get<double>("a1", vp.a1);
      vp.a2 = v.get<double>("a2", vp.a2);
      vp.a3 = v.get<double>("a3", vp.a3);
      vp.c_floor_ratio = v.get<double>("cohesion_floor_ratio", vp.c_floor_ratio);
      vp.substep_limit = v.get<double>("substep_limit", vp.substep_limit);
      v.finish();
    } else if (m.has("viscoplastic")) {
      throw ConfigError(m.field("viscoplastic"), "only valid with model: viscoplastic");
    }
    if (mat.model != ModelKind::viscoplastic) {
      Reader v = m.child("viscoelastic");
      mat.relaxation_time = v.get<double>("relaxation_time");
      mat.k1 = v.maybe<double>("k1");
      mat.k2 = v.maybe<double>("k2");
      mat.km = v.maybe<double>("km");
      v.finish();
    } else if (m.has("viscoelastic")) {
      throw ConfigError(m.field("viscoelastic"), "not valid with model: viscoplastic");
    }
    m.finish();
  }

  {
    Reader s = top.child("stabilization", false);
    c.stabilization.G1 = s.get<double>("G1", 0.0);
    c.stabilization.G2 = s.get<double>("G2", 0.0);
    s.finish();
  }

  {
    Reader d = top.child("damage", false);
    c.damage.mode = parse_enum<DamageMode>(d.get<std::string>("mode", "none"),
                                           {{"none", DamageMode::none},
                                            {"bilinear", DamageMode::bilinear},
                                            {"energy", DamageMode::energy}},
                                           d.field("mode"));
    // Keys of the inactive modes are accepted so a mode can be switched by override.
    const auto s0 = d.maybe<double>("s0");
    const auto sc = d.maybe<double>("sc");
    c.damage.G_cr = d.maybe<double>("G_cr");
    c.damage.K_I = d.maybe<double>("K_I");
    c.damage.critical_energy_scale = d.get<double>("critical_energy_scale", 1.0);
    if (c.damage.mode == DamageMode::bilinear) {
      if (!s0) throw ConfigError(d.field("s0"), "bilinear mode needs s0");
      if (!sc) throw ConfigError(d.field("sc"), "bilinear mode needs sc");
    }
    c.damage.s0 = s0.value_or(0.0);
    c.damage.sc = sc.value_or(0.0);
    if (c.damage.mode == DamageMode::energy && !c.damage.G_cr && !c.damage.K_I)
      throw ConfigError(d.field("G_cr"), "energy mode needs G_cr or K_I");
    d.finish();
  }

  {
    Reader l = top.child("loading", false);
    c.loading.initial_pressure = l.get<double>("initial_pressure", 0.0);
    YAML::Node list = l.raw("boundaries");
    if (list && !list.IsSequence()) throw ConfigError(l.field("boundaries"), "expected a list");
    for (std::size_t i = 0; list && i < list.size(); ++i) {
      Reader b(list[i], l.field("boundaries." + std::to_string(i)));
      Boundary bd;
      bd.name = b.get<std::string>("name", "boundary" + std::to_string(i));
      bd.region = parse_region(b.child("region"));
      if (b.has("ux")) bd.ux = parse_law(b.child("ux"));
      if (b.has("uy")) bd.uy = parse_law(b.child("uy"));
      if (b.has("rot")) bd.rot = parse_law(b.child("rot"));
      if (b.has("traction")) bd.traction = parse_law(b.child("traction"));
      b.finish();
      c.loading.boundaries.push_back(std::move(bd));
    }
    if (l.has("reaction")) {
      Reader r = l.child("reaction");
      c.loading.reaction_boundary = r.get<std::string>("boundary");
      const auto comp = r.get<std::string>("component", "y");
      if (comp != "x" && comp != "y") throw ConfigError(r.field("component"), "must be x or y");
      c.loading.reaction_component = comp[0];
      r.finish();
    }
    l.finish();
  }

  {
    Reader t = top.child("time");
    c.time.dt = t.get<double>("dt");
    c.time.n_steps = t.get<long>("n_steps");
    t.finish();
  }

  {
    Reader o = top.child("output", false);
    c.output.snapshot_interval = o.get<long>("snapshot_interval", 0);
    c.output.directory = o.get<std::string>("directory", "out");
    c.output.format = parse_enum<OutputFormat>(o.get<std::string>("format", "csv"),
                                               {{"csv", OutputFormat::csv}, {"vtk", OutputFormat::vtk}, {"both", OutputFormat::both}},
                                               o.field("format"));
    c.output.snapshots = o.get<bool>("snapshots", true);
    o.finish();
  }

  c.audit_tolerance = top.get<double>("audit_tolerance", 1e-2);
  top.finish();
  c.validate();
  return c;
}

void SimulationConfig::validate() const {
  const auto& g = geometry;
  if (g.nx < 1) throw ConfigError("geometry.nx", "must be positive");
  if (g.ny < 1) throw ConfigError("geometry.ny", "must be positive");
  if (!(g.dx > 0.0)) throw ConfigError("geometry.dx", "must be positive");
  if (!(g.thickness > 0.0)) throw ConfigError("geometry.thickness", "must be positive");
  if (!(g.horizon_factor >= 1.0)) throw ConfigError("geometry.horizon_factor", "must be at least 1");

  const auto& m = material;
  if (!(m.density > 0.0)) throw ConfigError("material.density", "must be positive");
  if (!(m.volume_fraction > 0.0 && m.volume_fraction <= 1.0))
    throw ConfigError("material.volume_fraction", "must lie in (0, 1]");
  if (!(m.mu_c_ratio >= 0.0)) throw ConfigError("material.mu_c_ratio", "must be non-negative");
  (void)m.moduli();
  if (m.model == ModelKind::viscoplastic) {
    m.viscoplastic.validate();
    if (m.viscoplastic.psi > m.viscoplastic.phi_f)
      throw ConfigError("material.viscoplastic.dilation_angle_deg", "must not exceed the friction angle");
  } else {
    if (!(m.relaxation_time > 0.0)) throw ConfigError("material.viscoelastic.relaxation_time", "must be positive");
    for (auto [v, name] : {std::pair{m.k1, "k1"}, std::pair{m.k2, "k2"}, std::pair{m.km, "km"}})
      if (v && !(*v >= 0.0)) throw ConfigError(std::string("material.viscoelastic.") + name, "must be non-negative");
  }

  if (!(stabilization.G1 >= 0.0)) throw ConfigError("stabilization.G1", "must be non-negative");
  if (!(stabilization.G2 >= 0.0)) throw ConfigError("stabilization.G2", "must be non-negative");

  if (damage.mode == DamageMode::bilinear) {
    if (!(damage.s0 > 0.0)) throw ConfigError("damage.s0", "must be positive");
    if (!(damage.sc > damage.s0) && !std::isinf(damage.sc)) throw ConfigError("damage.sc", "must exceed s0");
  }
  if (damage.mode == DamageMode::energy) {
    if (damage.G_cr && !(*damage.G_cr > 0.0)) throw ConfigError("damage.G_cr", "must be positive");
    if (damage.K_I && !(*damage.K_I > 0.0)) throw ConfigError("damage.K_I", "must be positive");
    if (!(damage.critical_energy_scale > 0.0)) throw ConfigError("damage.critical_energy_scale", "must be positive");
  }

  const double W = g.nx * g.dx, H = g.ny * g.dx;
  std::set<std::string> names;
  for (std::size_t i = 0; i < loading.boundaries.size(); ++i) {
    const auto& b = loading.boundaries[i];
    const std::string f = "loading.boundaries." + std::to_string(i);
    if (!names.insert(b.name).second) throw ConfigError(f + ".name", "duplicate boundary name '" + b.name + "'");
    if (b.region.side == Side::box) {
      const auto& r = b.region;
      if (r.x0 < 0.0 || r.y0 < 0.0 || r.x1 > W || r.y1 > H)
        throw ConfigError(f + ".region", "box lies outside the domain");
      if (b.traction) throw ConfigError(f + ".traction", "tractions need a side region");
    }
    if (b.region.side != Side::box && (b.region.depth > (b.region.side == Side::top || b.region.side == Side::bottom ? g.ny : g.nx)))
      throw ConfigError(f + ".region.depth", "deeper than the domain");
    if (!b.ux && !b.uy && !b.rot && !b.traction) throw ConfigError(f, "no law given");
  }
  if (!loading.reaction_boundary.empty() && !names.count(loading.reaction_boundary))
    throw ConfigError("loading.reaction.boundary", "unknown boundary '" + loading.reaction_boundary + "'");
  if (!(loading.initial_pressure >= 0.0)) throw ConfigError("loading.initial_pressure", "must be non-negative");
  if (g.notch) {
    for (const Vec2& p : {g.notch->a, g.notch->b})
      if (p.x < 0.0 || p.y < 0.0 || p.x > W || p.y > H) throw ConfigError("geometry.notch", "outside the domain");
  }

  if (!(time.dt > 0.0)) throw ConfigError("time.dt", "must be positive");
  if (time.n_steps < 0) throw ConfigError("time.n_steps", "must be non-negative");
  if (output.snapshot_interval < 0) throw ConfigError("output.snapshot_interval", "must be non-negative");
  if (!(audit_tolerance > 0.0)) throw ConfigError("audit_tolerance", "must be positive");
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str());
}

SimulationConfig load_config_text(const std::string& yaml, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!root.IsMap()) throw ConfigError("<document>", "expected a mapping at the top level");
  for (const auto& o : overrides) apply_override(root, o);
  return parse_config(root);
}

namespace {
void assign_path(YAML::Node node, const std::vector<std::string>& keys, std::size_t pos, const std::string& value,
                 const std::string& full) {
  const std::string& key = keys[pos];
  const bool last = pos + 1 == keys.size();
  if (node.IsSequence()) {
    std::vector<std::size_t> idx;
    if (key == "*") {
      // Wildcards only touch entries that already carry the next key.
      for (std::size_t i = 0; i < node.size(); ++i)
        if (last || (node[i].IsMap() && node[i][keys[pos + 1]])) idx.push_back(i);
      if (idx.empty()) throw ConfigError(full, "no list entry has '" + keys[pos + 1] + "'");
    } else {
      const bool numeric = key.find_first_not_of("0123456789") == std::string::npos;
      if (numeric) {
        idx.push_back(std::stoul(key));
        if (idx.back() >= node.size()) throw ConfigError(full, "list index out of range");
      } else {
        for (std::size_t i = 0; i < node.size(); ++i)
          if (node[i].IsMap() && node[i]["name"] && node[i]["name"].as<std::string>() == key) idx.push_back(i);
        if (idx.empty()) throw ConfigError(full, "no list entry named '" + key + "'");
      }
    }
    for (std::size_t i : idx) {
      if (last) {
        node[i] = YAML::Load(value);
      } else {
        assign_path(node[i], keys, pos + 1, value, full);
      }
    }
    return;
  }
  if (!node.IsMap()) throw ConfigError(full, "cannot descend into a scalar at '" + key + "'");
  if (last) {
    node[key] = YAML::Load(value);
    return;
  }
  if (!node[key]) node[key] = YAML::Node(YAML::NodeType::Map);
  assign_path(node[key], keys, pos + 1, value, full);
}
}  // namespace

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(assignment, "override must look like key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  std::vector<std::string> keys;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError(path, "empty key segment");
    keys.push_back(part);
  }
  try {
    assign_path(root, keys, 0, value, path);
  } catch (const YAML::Exception& e) {
    throw ConfigError(path, e.what());
  }
}

SimulationConfig preset(const std::string& name, const std::vector<std::string>& overrides) {
  return load_config_text(preset_text(name), overrides);
}

}  // namespace cppm
