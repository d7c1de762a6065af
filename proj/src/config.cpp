#include "landau/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace landau {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    const auto a = cur.find_first_not_of(" \t");
    const auto b = cur.find_last_not_of(" \t");
    out.push_back(a == std::string::npos ? std::string() : cur.substr(a, b - a + 1));
  }
  return out;
}

double to_double(const std::string& s) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(x))
    throw ConfigError("not a finite real: '" + s + "'");
  return x;
}

long long to_int(const std::string& s) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("not an integer: '" + s + "'");
  return x;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

std::optional<double> to_auto(const std::string& s) {
  if (s == "auto") return std::nullopt;
  return to_double(s);
}

std::string fmt(double x) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : "auto"; }

const char* const kInitialNames[] = {"anisotropic", "maxwellian", "bimodal", "perturbed"};

struct Key {
  const char* section;
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define REAL(sec, key, field)                                                        \
  Key {                                                                              \
    sec, key, [](RunConfig& c, const std::string& v) { c.field = to_double(v); },    \
        [](const RunConfig& c) { return fmt(c.field); }                              \
  }
#define INT(sec, key, field)                                                                      \
  Key {                                                                                           \
    sec, key, [](RunConfig& c, const std::string& v) { c.field = static_cast<int>(to_int(v)); }, \
        [](const RunConfig& c) { return std::to_string(c.field); }                                \
  }
#define AUTO(sec, key, field)                                                     \
  Key {                                                                           \
    sec, key, [](RunConfig& c, const std::string& v) { c.field = to_auto(v); },   \
        [](const RunConfig& c) { return fmt(c.field); }                           \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      REAL("kernel", "gamma", gamma),
      INT("grid", "n", n),
      REAL("grid", "vmax", vmax),
      {"weights", "list",
       [](RunConfig& c, const std::string& v) { c.weight_specs = split(v, ','); },
       [](const RunConfig& c) {
         std::string s;
         for (const auto& w : c.weight_specs) s += (s.empty() ? "" : ",") + w;
         return s;
       }},
      AUTO("split", "a", split_a),
      REAL("evolve", "t_end", evolve.t_end),
      AUTO("evolve", "dt", evolve.dt),
      REAL("evolve", "output_every", evolve.output_every),
      REAL("evolve", "eps", evolve.eps),
      {"evolve", "conserve_project",
       [](RunConfig& c, const std::string& v) { c.evolve.conserve_project = to_bool(v); },
       [](const RunConfig& c) { return std::string(c.evolve.conserve_project ? "true" : "false"); }},
      REAL("evolve", "floor", evolve.floor),
      REAL("evolve", "blowup_factor", evolve.blowup_factor),
      REAL("evolve", "solver_tol", evolve.solver_tol),
      {"evolve", "initial",
       [](RunConfig& c, const std::string& v) {
         for (int i = 0; i < 4; ++i)
           if (v == kInitialNames[i]) {
             c.initial = static_cast<InitialData>(i);
             return;
           }
         throw ConfigError("unknown initial data '" + v + "'");
       },
       [](const RunConfig& c) { return std::string(kInitialNames[static_cast<int>(c.initial)]); }},
      {"evolve", "anisotropy",
       [](RunConfig& c, const std::string& v) {
         const auto p = split(v, ',');
         if (p.size() != 3) throw ConfigError("anisotropy needs three temperatures");
         for (int i = 0; i < 3; ++i) c.anisotropy[i] = to_double(p[static_cast<std::size_t>(i)]);
       },
       [](const RunConfig& c) {
         return fmt(c.anisotropy[0]) + "," + fmt(c.anisotropy[1]) + "," + fmt(c.anisotropy[2]);
       }},
      REAL("semigroup", "t_end", semigroup.t_end),
      REAL("semigroup", "dt", semigroup.dt),
      REAL("semigroup", "output_every", semigroup.output_every),
      INT("semigroup", "samples", semigroup.samples),
      INT("decay", "n", decay.n),
      REAL("decay", "vmax", decay.vmax),
      REAL("decay", "t_end", decay.t_end),
      REAL("decay", "dt", decay.dt),
      REAL("decay", "output_every", decay.output_every),
      AUTO("decay", "lambda0", decay.lambda0),
      REAL("decay", "window_fraction", decay.fit.window_fraction),
      REAL("decay", "rel_tol", decay.fit.rel_tol),
      REAL("decay", "r2_min", decay.fit.r2_min),
      REAL("bootstrap", "ell", bootstrap.ell),
      REAL("bootstrap", "k", bootstrap.k),
      REAL("bootstrap", "threshold", bootstrap.threshold),
      INT("spectrum", "top_k", top_k),
      INT("spectrum", "leading", leading),
      {"output", "dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; },
       [](const RunConfig& c) { return c.out_dir; }},
      {"run", "seed",
       [](RunConfig& c, const std::string& v) {
         const long long s = to_int(v);
         if (s < 0) throw ConfigError("seed must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
  };
  return k;
}

#undef REAL
#undef INT
#undef AUTO

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(std::string(key) + ": " + what);
}

}  // namespace

Weight parse_weight(const std::string& spec, const CollisionKernel& k) {
  const auto p = split(spec, ':');
  if (p.empty()) throw ConfigError("weights.list: empty weight");
  try {
    if (p[0] == "poly" && p.size() == 3) return Weight::polynomial(to_double(p[1]), to_double(p[2]), k);
    if (p[0] == "sexp" && p.size() == 4) return Weight::stretched_exp(to_double(p[1]), to_double(p[2]), to_double(p[3]));
  } catch (const DomainError& e) {
    throw ConfigError("weights.list: '" + spec + "': " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError("weights.list: '" + spec + "': " + e.what());
  }
  throw ConfigError("weights.list: '" + spec + "' is not poly:k:p or sexp:r:s:p");
}

std::vector<Weight> RunConfig::weights() const {
  std::vector<Weight> w;
  for (const auto& s : weight_specs) w.push_back(parse_weight(s, kernel()));
  return w;
}

double RunConfig::split_target() const { return split_a.value_or(kDefaultSplitTarget); }

GridField RunConfig::initial_state(const VelocityGrid& g) const {
  switch (initial) {
    case InitialData::Anisotropic:
      return anisotropic_gaussian(g, anisotropy);
    case InitialData::Maxwellian:
      return GridField::sample(g, [](const Vec3& v) { return maxwellian(v); });
    case InitialData::Bimodal:
      // centres +-e1 and temperature 2/3: mass 1, mean 0, energy 3
      return GridField::sample(g, [](const Vec3& v) {
        const double T = 2.0 / 3.0, c = std::pow(2.0 * M_PI * T, -1.5);
        const Vec3 e(1.0, 0.0, 0.0);
        return 0.5 * c * (std::exp(-(v - e).squaredNorm() / (2 * T)) + std::exp(-(v + e).squaredNorm() / (2 * T)));
      });
    case InitialData::Perturbed: {
      const double eps = evolve.eps;
      return GridField::sample(g, [eps](const Vec3& v) { return maxwellian(v) * (1.0 + eps * (v[0] * v[0] - v[2] * v[2])); });
    }
  }
  throw ConfigError("evolve.initial: unhandled value");
}

void RunConfig::validate() const {
  try {
    (void)kernel();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("kernel.gamma: ") + e.what());
  }
  try {
    (void)grid();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  try {
    (void)decay_grid();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("decay: ") + e.what());
  }
  require(!weight_specs.empty(), "weights.list", "needs at least one weight");
  (void)weights();
  require(!split_a || *split_a < 0.0, "split.a", "must be < 0");
  try {
    evolve.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  require(anisotropy.minCoeff() > 0.0, "evolve.anisotropy", "temperatures must be > 0");
  if (initial == InitialData::Perturbed)
    require(evolve.eps * vmax * vmax < 1.0, "evolve.eps", "perturbed data must stay positive: eps vmax^2 < 1");
  require(semigroup.t_end > 0.0, "semigroup.t_end", "must be > 0");
  require(semigroup.dt > 0.0, "semigroup.dt", "must be > 0");
  require(semigroup.output_every >= semigroup.dt, "semigroup.output_every", "must be >= dt");
  require(semigroup.samples >= 1, "semigroup.samples", "must be >= 1");
  require(decay.t_end > 0.0, "decay.t_end", "must be > 0");
  require(decay.dt > 0.0, "decay.dt", "must be > 0");
  require(decay.output_every >= decay.dt, "decay.output_every", "must be >= dt");
  require(!decay.lambda0 || *decay.lambda0 > 0.0, "decay.lambda0", "must be > 0");
  require(decay.fit.window_fraction > 0.0 && decay.fit.window_fraction <= 1.0, "decay.window_fraction",
          "must lie in (0, 1]");
  require(decay.fit.rel_tol > 0.0, "decay.rel_tol", "must be > 0");
  require(decay.fit.r2_min >= 0.0 && decay.fit.r2_min <= 1.0, "decay.r2_min", "must lie in [0, 1]");
  require(bootstrap.ell >= 0.0 && bootstrap.k >= 0.0, "bootstrap", "ell and k must be >= 0");
  require(bootstrap.threshold > 0.0, "bootstrap.threshold", "must be > 0");
  require(top_k >= 0, "spectrum.top_k", "must be >= 0");
  require(leading >= 1, "spectrum.leading", "must be >= 1");
  require(!out_dir.empty(), "output.dir", "must not be empty");
}

RunConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  RunConfig c;
  for (const auto& [sec, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + sec + "' outside a section");
    bool known = false;
    for (const auto& k : keys()) known = known || sec == k.section;
    if (!known) throw ConfigError("unknown section [" + sec + "]");
    for (const auto& [name, val] : body) {
      const Key* hit = nullptr;
      for (const auto& k : keys())
        if (sec == k.section && name == k.name) hit = &k;
      if (!hit) throw ConfigError("unknown key [" + sec + "] " + name);
      try {
        hit->set(c, val.data());
      } catch (const ConfigError& e) {
        throw ConfigError(sec + "." + name + ": " + e.what());
      }
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) {
  std::string out, sec;
  for (const auto& k : keys()) {
    if (sec != k.section) {
      out += (sec.empty() ? "[" : "\n[") + std::string(k.section) + "]\n";
      sec = k.section;
    }
    out += std::string(k.name) + " = " + k.get(c) + "\n";
  }
  return out;
}

void apply_quick(RunConfig& c) {
  c.n = 12;
  c.decay.n = 12;
  c.semigroup.samples = std::min(c.semigroup.samples, 3);
}

}  // namespace landau
