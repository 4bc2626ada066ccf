#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "levylap/rng.hpp"

namespace levylap::cli {

namespace {

// Reads one JSON object, records every value it hands out (defaults included) in
// `out`, and rejects keys nobody asked for.
class Reader {
 public:
  Reader(const json* in, json* out, std::string path) : in_(in), out_(out), path_(std::move(path)) {
    if (in_ && !in_->is_object()) fail("", "expected a table");
    if (!out_->is_object()) *out_ = json::object();
  }

  double num(const std::string& key, double def) {
    const json* v = get(key);
    double x = def;
    if (v) {
      if (!v->is_number()) fail(key, "expected a number");
      x = v->get<double>();
    }
    (*out_)[key] = x;
    return x;
  }

  long integer(const std::string& key, long def, long lo) {
    const json* v = get(key);
    long x = def;
    if (v) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      x = v->get<long>();
    }
    if (x < lo) fail(key, "must be at least " + std::to_string(lo));
    (*out_)[key] = x;
    return x;
  }

  bool flag(const std::string& key, bool def) {
    const json* v = get(key);
    bool x = def;
    if (v) {
      if (!v->is_boolean()) fail(key, "expected true or false");
      x = v->get<bool>();
    }
    (*out_)[key] = x;
    return x;
  }

  std::string str(const std::string& key, const std::string& def, const std::vector<std::string>& allowed) {
    const json* v = get(key);
    std::string x = def;
    if (v) {
      if (!v->is_string()) fail(key, "expected a string");
      x = v->get<std::string>();
    }
    if (!allowed.empty()) {
      bool ok = false;
      for (const auto& a : allowed) ok = ok || a == x;
      if (!ok) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(key, "unknown value '" + x + "' (expected one of: " + list + ")");
      }
    }
    (*out_)[key] = x;
    return x;
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& def, std::size_t size = 0) {
    const json* v = get(key);
    std::vector<double> x = def;
    if (v) {
      if (!v->is_array()) fail(key, "expected an array of numbers");
      x.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) fail(key, "expected an array of numbers");
        x.push_back(e.get<double>());
      }
    }
    if (size && x.size() != size) fail(key, "expected " + std::to_string(size) + " numbers");
    (*out_)[key] = x;
    return x;
  }

  Vec4 vec4(const std::string& key, const Vec4& def) {
    const auto v = numbers(key, {def[0], def[1], def[2], def[3]}, 4);
    return {v[0], v[1], v[2], v[3]};
  }

  Vec3 vec3(const std::string& key, const Vec3& def) {
    const auto v = numbers(key, {def[0], def[1], def[2]}, 3);
    return {v[0], v[1], v[2]};
  }

  Reader sub(const std::string& key) {
    const json* v = get(key);
    return Reader(v, &(*out_)[key], path_ + "." + key);
  }

  // Array of tables; `def` is used when the key is absent.
  template <class Fn>
  void each(const std::string& key, const json& def, Fn&& fn) {
    const json* v = get(key);
    const json& arr = v ? *v : def;
    if (!arr.is_array()) fail(key, "expected an array of tables");
    json& out = (*out_)[key] = json::array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.push_back(json::object());
      Reader r(&arr[i], &out.back(), path_ + "." + key + "[" + std::to_string(i) + "]");
      fn(r, i);
      r.finish();
    }
  }

  bool has(const std::string& key) const { return in_ && in_->contains(key); }

  void finish() const {
    if (!in_) return;
    for (auto it = in_->begin(); it != in_->end(); ++it)
      if (!seen_.count(it.key())) fail(it.key(), "unknown key");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError("config " + path_ + (key.empty() ? "" : "." + key) + ": " + msg);
  }

 private:
  const json* get(const std::string& key) {
    seen_.insert(key);
    if (!in_) return nullptr;
    auto it = in_->find(key);
    return it == in_->end() ? nullptr : &*it;
  }

  const json* in_;
  json* out_;
  std::string path_;
  std::set<std::string> seen_;
};

geometry::ScalarField read_scalar(Reader r) {
  const auto fam = r.str("family", "gaussian", {"constant", "quadratic", "gaussian", "product"});
  geometry::ScalarField f = geometry::ScalarField::constant(0.0);
  if (fam == "constant") {
    f = geometry::ScalarField::constant(r.num("value", 0.0));
  } else if (fam == "quadratic") {
    const double a = r.num("amplitude", 0.1);
    f = geometry::ScalarField::quadratic(a, r.vec4("center", {}));
  } else if (fam == "gaussian") {
    const double a = r.num("amplitude", 0.3);
    const Vec4 c = r.vec4("center", {});
    f = geometry::ScalarField::gaussian(a, c, r.num("width", 0.8));
  } else {
    const int i = int(r.integer("i", 0, 0)), j = int(r.integer("j", 1, 0));
    if (i > 3 || j > 3 || i == j) r.fail("", "product needs distinct indices in 0..3");
    f = geometry::ScalarField::product(i, j, r.num("amplitude", 0.1));
  }
  r.finish();
  return f;
}

geometry::MetricChart read_chart(Reader r) {
  const auto preset = r.str("preset", "flat", {"flat", "conformally_flat", "round_s4", "s1xs3"});
  const double radius = r.num("radius", 1.0);
  if (!(radius > 0.0)) r.fail("radius", "must be positive");
  const auto orient = r.str("orientation", "right", {"right", "left"});
  geometry::MetricChart c = geometry::MetricChart::flat();
  if (preset == "conformally_flat") {
    c = geometry::MetricChart::conformally_flat(read_scalar(r.sub("phi")));
  } else if (preset == "round_s4") {
    c = geometry::MetricChart::round_s4(radius);
  } else if (preset == "s1xs3") {
    c = geometry::MetricChart::s1xs3(radius);
  }
  r.finish();
  return orient == "left" ? c.with_orientation(geometry::Orientation::Left) : c;
}

Mat4 read_so4(Reader r) {
  const Vec3 l = r.vec3("left", {0.0, 0.0, 0.0});
  const Vec3 rt = r.vec3("right", {0.0, 0.0, 0.0});
  r.finish();
  return algebra::left_matrix(l[0], l[1], l[2]) + algebra::right_matrix(rt[0], rt[1], rt[2]);
}

connection::Connection read_connection(Reader r, int depth = 0) {
  if (depth > 4) r.fail("", "connection nesting too deep");
  const auto preset =
      r.str("preset", "instanton", {"zero", "instanton", "anti_instanton", "perturbed", "gauge_transformed"});
  connection::Connection a = connection::Connection::zero();
  if (preset == "instanton" || preset == "anti_instanton") {
    const double rho = r.num("rho", 1.0);
    if (!(rho > 0.0)) r.fail("rho", "must be positive");
    a = connection::Connection::instanton(rho, r.vec4("center", {}),
                                          preset == "instanton" ? connection::Duality::AntiSelfDual
                                                                : connection::Duality::SelfDual);
  } else if (preset == "perturbed") {
    connection::Connection base = read_connection(r.sub("base"), depth + 1);
    Reader b = r.sub("bump");
    connection::Bump bump;
    bump.center = b.vec4("center", {});
    bump.radius = b.num("radius", 1.0);
    bump.polarization = b.vec4("polarization", {1.0, 0.0, 0.0, 0.0});
    const auto f = b.numbers("field", {0, 0, 0, 0, 0, 0}, 6);  // f01 f02 f03 f12 f13 f23
    const int idx[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (int k = 0; k < 6; ++k) {
      bump.field(idx[k][0], idx[k][1]) = f[k];
      bump.field(idx[k][1], idx[k][0]) = -f[k];
    }
    bump.direction = b.vec3("direction", {1.0, 0.0, 0.0});
    bump.amplitude = b.num("amplitude", 0.1);
    b.finish();
    if (!(bump.radius > 0.0)) r.fail("bump.radius", "must be positive");
    a = connection::Connection::perturbed(base, bump);
  } else if (preset == "gauge_transformed") {
    connection::Connection base = read_connection(r.sub("base"), depth + 1);
    Reader g = r.sub("gauge");
    const Vec3 axis = g.vec3("axis", {0.0, 0.6, 0.8});
    const double n = norm3(axis);
    if (!(n > 0.0)) g.fail("axis", "must be nonzero");
    connection::Phase p;
    p.amplitude = g.num("amplitude", 0.7);
    p.wave = g.vec4("wave", {0.3, -0.5, 0.2, 0.4});
    p.offset = g.num("offset", 0.1);
    p.quadratic = g.num("quadratic", 0.05);
    p.center = g.vec4("center", {});
    g.finish();
    a = connection::gauge_transform(base, connection::GaugeField::axial({axis[0] / n, axis[1] / n, axis[2] / n}, p));
  }
  r.finish();
  return a;
}

json default_rotations() {
  return json::parse(R"([
    {"id": "W1", "kind": "constant", "generator": {"left": [1, 0, 0]}},
    {"id": "W2", "kind": "constant", "generator": {"left": [0.6, -0.8, 0.3]}},
    {"id": "W3", "kind": "trigonometric", "generator": {"left": [0.3, 0.8, -0.2]},
     "cos": [{"left": [0.5, 0, 0.4]}], "sin": [{"left": [-0.2, 0.3, 0.1]}]}
  ])");
}

NamedRotation read_rotation(Reader& r, std::size_t i) {
  NamedRotation out;
  out.id = r.str("id", "W" + std::to_string(i + 1), {});
  const auto kind = r.str("kind", "constant", {"identity", "constant", "trigonometric", "product_exp"});
  if (kind == "identity") {
    out.w = algebra::RotationCurve::identity();
  } else if (kind == "constant") {
    out.w = algebra::RotationCurve::constant(read_so4(r.sub("generator")));
  } else if (kind == "trigonometric") {
    const Mat4 c = read_so4(r.sub("generator"));
    std::vector<Mat4> cs, ss;
    r.each("cos", json::array(), [&](Reader& e, std::size_t) {
      const Vec3 l = e.vec3("left", {0, 0, 0}), rt = e.vec3("right", {0, 0, 0});
      cs.push_back(algebra::left_matrix(l[0], l[1], l[2]) + algebra::right_matrix(rt[0], rt[1], rt[2]));
    });
    r.each("sin", json::array(), [&](Reader& e, std::size_t) {
      const Vec3 l = e.vec3("left", {0, 0, 0}), rt = e.vec3("right", {0, 0, 0});
      ss.push_back(algebra::left_matrix(l[0], l[1], l[2]) + algebra::right_matrix(rt[0], rt[1], rt[2]));
    });
    const int steps = int(r.integer("steps", 512, 16));
    out.w = algebra::RotationCurve::trigonometric(c, cs, ss, steps);
  } else {
    const Mat4 x = read_so4(r.sub("x"));
    const Mat4 y = read_so4(r.sub("y"));
    out.w = algebra::RotationCurve::product_exp(x, y);
  }
  return out;
}

transport::Curve read_curve_item(Reader& r, std::uint64_t seed) {
  const auto kind = r.str("kind", "fourier", {"fourier", "circle", "figure_eight", "segment", "hermite"});
  if (kind == "fourier") {
    const Vec4 base = r.vec4("base", {});
    const double scale = r.num("scale", 0.4);
    const int modes = int(r.integer("modes", 3, 1));
    return transport::Curve::fourier_loop(std::uint64_t(r.integer("seed", long(seed % (1ull << 62)), 0)), base,
                                          scale, modes);
  }
  if (kind == "circle" || kind == "figure_eight") {
    const Vec4 c = r.vec4(kind == "circle" ? "center" : "base", {});
    const double size = r.num(kind == "circle" ? "radius" : "size", 0.5);
    const int i = int(r.integer("i", 0, 0)), j = int(r.integer("j", 1, 0));
    if (i > 3 || j > 3 || i == j) r.fail("", "plane indices must be distinct and in 0..3");
    return kind == "circle" ? transport::Curve::circle(c, size, i, j) : transport::Curve::figure_eight(c, size, i, j);
  }
  if (kind == "segment") {
    const Vec4 a = r.vec4("from", {});
    return transport::Curve::segment(a, r.vec4("to", {1.0, 0.0, 0.0, 0.0}));
  }
  std::vector<double> t;
  std::vector<Point4> x;
  r.each("nodes", json::array(), [&](Reader& e, std::size_t) {
    t.push_back(e.num("t", 0.0));
    x.push_back(e.vec4("x", {}));
  });
  if (t.size() < 2) r.fail("nodes", "hermite curves need at least two nodes");
  return transport::Curve::hermite(t, x);
}

void read_curves(Reader r, std::uint64_t seed, std::vector<transport::Curve>& out) {
  const auto family = r.str("family", "fourier", {"fourier", "list"});
  if (family == "fourier") {
    const long count = r.integer("count", 20, 1);
    const Vec4 base = r.vec4("base", {0.2, 0.1, 0.0, 0.0});
    const double scale = r.num("scale", 0.4);
    const int modes = int(r.integer("modes", 3, 1));
    Rng rng(seed);
    for (long i = 0; i < count; ++i) out.push_back(transport::Curve::fourier_loop(rng.next_u64(), base, scale, modes));
  } else {
    Rng rng(seed);
    r.each("items", json::array(), [&](Reader& e, std::size_t) { out.push_back(read_curve_item(e, rng.next_u64())); });
    if (out.empty()) r.fail("items", "list family needs at least one curve");
  }
  r.finish();
}

}  // namespace

ExperimentConfig load_config(const json& doc, std::optional<std::uint64_t> seed_override) {
  ExperimentConfig cfg;
  cfg.resolved = json::object();
  Reader root(&doc, &cfg.resolved, "");
  long seed = root.integer("seed", 1, 0);
  if (seed_override) {
    seed = long(*seed_override % (1ull << 62));
    cfg.resolved["seed"] = seed;
  }
  cfg.seed = std::uint64_t(seed);

  cfg.chart = read_chart(root.sub("chart"));
  cfg.connection = read_connection(root.sub("connection"));
  root.each("rotation_curves", default_rotations(),
            [&](Reader& r, std::size_t i) { cfg.rotations.push_back(read_rotation(r, i)); });
  read_curves(root.sub("curves"), cfg.seed, cfg.curves);

  {
    Reader r = root.sub("resolution");
    cfg.transport.steps = int(r.integer("steps", 2000, 8));
    cfg.transport.min_segment_steps = int(r.integer("min_segment_steps", 16, 2));
    cfg.region = connection::Region::ball(r.vec4("ball_center", {}), r.num("ball_radius", 50.0),
                                          int(r.integer("radial", 1600, 4)), int(r.integer("angular", 8, 2)));
    cfg.grid = int(r.integer("grid", 20, 2));
    cfg.grid_half_width = r.num("grid_half_width", 2.0);
    r.finish();
  }
  {
    Reader r = root.sub("levy");
    cfg.levy_expect = r.str("expect", "vanish", {"vanish", "nonvanish"});
    r.finish();
  }
  {
    Reader r = root.sub("charge");
    if (r.has("expect")) cfg.expect_charge = r.num("expect", 0.0);
    r.finish();
  }
  {
    Reader r = root.sub("holonomy");
    cfg.holonomy.loops = std::size_t(r.integer("loops", 50, 1));
    cfg.holonomy.scale = r.num("scale", 0.3);
    cfg.holonomy.base = r.vec4("base", {});
    cfg.holonomy.synthetic_so2 = r.flag("synthetic_so2", false);
    cfg.holonomy.expect = r.str("expect", "", {"", "Trivial", "SO2", "SO3"});
    cfg.holonomy.orbit_samples = std::size_t(r.integer("orbit_samples", 64, 1));
    r.finish();
  }
  {
    Reader r = root.sub("lemma2");
    cfg.lemma2_r = r.numbers("r", {0.5, 0.25, 0.125, 0.0625});
    cfg.lemma2_curve = std::size_t(r.integer("curve", 0, 0));
    cfg.lemma2_rotation = std::size_t(r.integer("rotation_curve", 0, 0));
    r.finish();
    if (cfg.lemma2_r.size() < 2) throw ConfigError("config .lemma2.r: need at least two values");
    for (double x : cfg.lemma2_r)
      if (!(x > 0.0 && x <= 1.0)) throw ConfigError("config .lemma2.r: values must lie in (0, 1]");
    if (cfg.lemma2_curve >= cfg.curves.size()) throw ConfigError("config .lemma2.curve: index out of range");
    if (cfg.lemma2_rotation >= cfg.rotations.size())
      throw ConfigError("config .lemma2.rotation_curve: index out of range");
  }
  {
    Reader r = root.sub("tolerances");
    cfg.tol.instanton_ratio = r.num("instanton_ratio", 1e-10);
    cfg.tol.codifferential = r.num("codifferential", 1e-6);
    cfg.tol.action_relative = r.num("action_relative", 0.01);
    cfg.tol.charge_absolute = r.num("charge_absolute", 0.02);
    cfg.tol.lemma2_r_squared = r.num("lemma2_r_squared", 0.99);
    cfg.tol.nonvanishing = r.num("nonvanishing", 1e-3);
    r.finish();
  }
  root.finish();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return load_config(doc, seed_override);
}

std::string config_hash(const json& resolved) {
  const std::string s = resolved.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace levylap::cli
