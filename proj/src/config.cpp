#include "regulab/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace regulab {

namespace {

Error config_error(int line, const std::string& what) {
  return Error("config-error", "line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

// strip a # comment that is not inside a string
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

nlohmann::json parse_value(const std::string& v, int line);

nlohmann::json parse_array(const std::string& v, int line) {
  nlohmann::json arr = nlohmann::json::array();
  std::string inner = trim(v.substr(1, v.size() - 2));
  std::string cur;
  bool quoted = false;
  for (char ch : inner) {
    if (ch == '"') quoted = !quoted;
    if (ch == ',' && !quoted) {
      if (!trim(cur).empty()) arr.push_back(parse_value(trim(cur), line));
      cur.clear();
      continue;
    }
    if (ch == '[' && !quoted) throw config_error(line, "nested arrays are not supported");
    cur += ch;
  }
  if (quoted) throw config_error(line, "unterminated string in array");
  if (!trim(cur).empty()) arr.push_back(parse_value(trim(cur), line));
  return arr;
}

nlohmann::json parse_value(const std::string& v, int line) {
  if (v.empty()) throw config_error(line, "missing value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw config_error(line, "unterminated string");
    return v.substr(1, v.size() - 2);
  }
  if (v.front() == '[') {
    if (v.back() != ']') throw config_error(line, "unterminated array");
    return parse_array(v, line);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  std::string num;
  for (char ch : v)
    if (ch != '_') num += ch;
  try {
    size_t used = 0;
    if (num.find_first_of(".eE") == std::string::npos || num.find("0x") == 0) {
      long long k = std::stoll(num, &used, 0);
      if (used == num.size()) return k;
    }
    double d = std::stod(num, &used);
    if (used == num.size()) return d;
  } catch (const std::exception&) {
  }
  throw config_error(line, "cannot parse value '" + v + "'");
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char ch : k)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-')) return false;
  return true;
}

}  // namespace

nlohmann::json parse_toml(const std::string& text) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* table = &root;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) throw config_error(line, "malformed table header");
      std::string name = trim(s.substr(1, s.size() - 2));
      table = &root;
      std::stringstream parts(name);
      std::string part;
      while (std::getline(parts, part, '.')) {
        part = trim(part);
        if (!valid_key(part)) throw config_error(line, "bad table name '" + name + "'");
        if (table->contains(part) && !(*table)[part].is_object())
          throw config_error(line, "'" + part + "' is already a value");
        table = &(*table)[part];
        if (table->is_null()) *table = nlohmann::json::object();
      }
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) throw config_error(line, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    if (!valid_key(key)) throw config_error(line, "bad key '" + key + "'");
    if (table->contains(key)) throw config_error(line, "duplicate key '" + key + "'");
    (*table)[key] = parse_value(trim(s.substr(eq + 1)), line);
  }
  return root;
}

nlohmann::json load_toml(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("config-error", "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_toml(ss.str());
  } catch (const Error& e) {
    throw Error("config-error", path + ": " + e.what());
  }
}

namespace {

real get_real(const nlohmann::json& t, const char* key, real fallback) {
  if (!t.contains(key)) return fallback;
  if (!t[key].is_number()) throw Error("config-error", std::string("tolerances.") + key + " must be a number");
  real v = t[key].get<double>();
  if (!(v > 0)) throw Error("config-error", std::string("tolerances.") + key + " must be positive");
  return v;
}

const std::vector<std::string> kStages = {"verify",    "homology", "periods", "gamma",
                                          "regulator", "carlson",  "compare", "mhs-selftest"};

}  // namespace

RunConfig config_from_json(const nlohmann::json& j, const std::string& source) {
  RunConfig rc;
  rc.source = source;
  rc.raw = j;
  if (j.contains("run")) {
    const auto& r = j["run"];
    if (r.contains("stages")) {
      for (auto& s : r["stages"]) {
        std::string name = s.get<std::string>();
        if (std::find(kStages.begin(), kStages.end(), name) == kStages.end())
          throw Error("config-error", "run.stages: unknown stage '" + name + "'");
        rc.stages.push_back(name);
      }
    }
    if (r.contains("out")) rc.out_dir = r["out"].get<std::string>();
    if (r.contains("seed")) rc.seed = r["seed"].get<std::uint64_t>();
    if (r.contains("precision_bits")) rc.precision_bits = r["precision_bits"].get<int>();
    if (r.contains("strict")) rc.strict = r["strict"].get<bool>();
  }
  if (rc.precision_bits > 64) {
    rc.precision_bits = 64;
    rc.precision_capped = true;
  }
  if (j.contains("function") && j["function"].contains("normalize")) {
    if (!j["function"]["normalize"].is_boolean())
      throw Error("config-error", "function.normalize must be a boolean");
    rc.normalize_f = j["function"]["normalize"].get<bool>();
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    rc.tol.period = get_real(t, "period", rc.tol.period);
    rc.tol.winding = get_real(t, "winding", rc.tol.winding);
    rc.tol.gamma_arg = get_real(t, "gamma_arg", rc.tol.gamma_arg);
    rc.tol.gamma_period = get_real(t, "gamma_period", rc.tol.gamma_period);
    rc.tol.torsion = get_real(t, "torsion", rc.tol.torsion);
    rc.tol.disc = get_real(t, "disc", rc.tol.disc);
    rc.tol.main_theorem = get_real(t, "main_theorem", rc.tol.main_theorem);
    rc.tol.surface = get_real(t, "surface", rc.tol.surface);
  }
  return rc;
}

RunConfig load_config(const std::string& path) { return config_from_json(load_toml(path), path); }

namespace {

CurvePoint point_from(const Curve& c, const nlohmann::json& pts, const std::string& name) {
  if (!pts.contains(name)) throw Error("config-error", "points." + name + " is missing");
  const auto& v = pts[name];
  CurvePoint p;
  p.label = name;
  if (v.is_string()) {
    p.x = parse_complex(v.get<std::string>());
    int sheet = pts.value(name + "_sheet", 0);
    auto fib = c.fiber(p.x);
    if (sheet < 0 || sheet >= static_cast<int>(fib.size()))
      throw Error("config-error", "points." + name + "_sheet out of range");
    p.y = fib[sheet];
  } else if (v.is_array() && v.size() == 2) {
    p.x = parse_complex(v[0].get<std::string>());
    p.y = parse_complex(v[1].get<std::string>());
  } else {
    throw Error("config-error", "points." + name + " must be \"x\" or [\"x\", \"y\"]");
  }
  return p;
}

Poly x_polynomial(const std::string& s) {
  BiPoly b = parse_bipoly(s);
  if (b.deg_y() > 0) throw Error("config-error", "curve.p must not involve y");
  std::vector<cplx> c;
  for (int i = 0; i <= b.deg_x(); ++i) c.push_back(b.get(i, 0));
  return Poly(c);
}

}  // namespace

CurveModel model_from_config(const nlohmann::json& j) {
  if (!j.contains("curve")) throw Error("config-error", "missing [curve] table");
  const auto& cj = j["curve"];
  std::string kind = cj.value("kind", "hyperelliptic");
  Curve c;
  if (kind == "hyperelliptic") {
    c = Curve::hyperelliptic(x_polynomial(cj.at("p").get<std::string>()));
  } else if (kind == "fermat") {
    c = Curve::fermat(cj.at("n").get<int>());
  } else if (kind == "superelliptic") {
    c = Curve::superelliptic(cj.at("n").get<int>(), x_polynomial(cj.at("p").get<std::string>()),
                             "superelliptic");
  } else {
    throw Error("config-error", "curve.kind must be hyperelliptic, fermat or superelliptic");
  }
  if (!j.contains("points")) throw Error("config-error", "missing [points] table");
  const auto& pts = j["points"];
  CurvePoint P = point_from(c, pts, "P"), Q = point_from(c, pts, "Q"),
             R = point_from(c, pts, "R");
  if (!j.contains("function")) throw Error("config-error", "missing [function] table");
  const auto& fj = j["function"];
  RationalFunction f;
  f.num = parse_bipoly(fj.at("num").get<std::string>());
  f.den = parse_bipoly(fj.value("den", std::string("1")));
  // gamma and the cycle are always built from the normalised function; the
  // as-given convention is applied as a decomposable correction downstream
  return make_model(c, P, Q, R, f, true);
}

}  // namespace regulab
