#include "wavint/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wavint/error.hpp"

namespace wavint::config {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
  std::string label;  // key prefix used in error messages
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_double(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  std::string_view v = t;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(key, "expected a finite number, got '" + t + "'");
  }
  return out;
}

int to_int(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key, "expected an integer, got '" + t + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = lower(text);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(to_double(key, part));
  return out;
}

std::string format(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format(xs[i]);
  }
  return out;
}

// Profile grammar: number | munk([axis_depth, scale, epsilon, axis_speed])
// | pseudolinear(a, b) | table(z:v, z:v, ...).
Profile parse_profile(const std::string& key, const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos) return Profile::constant(to_double(key, text));
  if (text.back() != ')') throw ConfigError(key, "unterminated profile '" + text + "'");
  const std::string name = lower(trim(std::string_view(text).substr(0, open)));
  const std::string body = trim(std::string_view(text).substr(open + 1, text.size() - open - 2));
  const std::vector<std::string> args = body.empty() ? std::vector<std::string>{} : split(body, ',');

  if (name == "munk") {
    MunkProfile m;
    if (!args.empty() && args.size() != 4) {
      throw ConfigError(key, "munk takes no arguments or (axis_depth, scale, epsilon, axis_speed)");
    }
    if (args.size() == 4) {
      m.axis_depth = to_double(key, args[0]);
      m.scale = to_double(key, args[1]);
      m.epsilon = to_double(key, args[2]);
      m.axis_speed = to_double(key, args[3]);
    }
    if (!(m.scale > 0.0) || !(m.axis_speed > 0.0)) throw ConfigError(key, "munk scale and axis speed must be positive");
    return Profile(m);
  }
  if (name == "pseudolinear") {
    if (args.size() != 2) throw ConfigError(key, "pseudolinear takes (a, b)");
    return Profile(PseudolinearProfile{to_double(key, args[0]), to_double(key, args[1])});
  }
  if (name == "table") {
    std::vector<double> depths;
    std::vector<double> values;
    for (const auto& pair : args) {
      const auto colon = pair.find(':');
      if (colon == std::string::npos) throw ConfigError(key, "table entries are depth:value, got '" + pair + "'");
      depths.push_back(to_double(key, std::string_view(pair).substr(0, colon)));
      values.push_back(to_double(key, std::string_view(pair).substr(colon + 1)));
    }
    try {
      return Profile::tabulated(std::move(depths), std::move(values));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  }
  throw ConfigError(key, "unknown profile '" + name + "'");
}

std::string format_profile(const Profile& p) {
  struct Visitor {
    std::string operator()(const ConstantProfile& c) const { return format(c.value); }
    std::string operator()(const MunkProfile& m) const {
      return "munk(" + format(m.axis_depth) + ", " + format(m.scale) + ", " + format(m.epsilon) + ", " +
             format(m.axis_speed) + ")";
    }
    std::string operator()(const PseudolinearProfile& q) const {
      return "pseudolinear(" + format(q.a) + ", " + format(q.b) + ")";
    }
    std::string operator()(const TabulatedProfile& t) const {
      std::string out = "table(";
      for (std::size_t i = 0; i < t.depths.size(); ++i) {
        if (i) out += ", ";
        out += format(t.depths[i]) + ":" + format(t.values[i]);
      }
      return out + ")";
    }
  };
  return std::visit(Visitor{}, p.variant());
}

std::vector<Section> read_sections(std::istream& in) {
  std::vector<Section> sections;
  std::string raw;
  int line_no = 0;
  int layer_count = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no), "malformed section header");
      Section s;
      s.name = lower(trim(std::string_view(line).substr(1, line.size() - 2)));
      s.line = line_no;
      s.label = s.name == "layer" ? "layer[" + std::to_string(layer_count++) + "]" : s.name;
      static const char* known[] = {"source", "spectral", "layer", "bottom", "wavenumber", "output"};
      if (std::find(std::begin(known), std::end(known), s.name) == std::end(known)) {
        throw ConfigError(s.name, "unknown section (line " + std::to_string(line_no) + ")");
      }
      if (s.name != "layer") {
        for (const auto& other : sections) {
          if (other.name == s.name) throw ConfigError(s.name, "section repeated (line " + std::to_string(line_no) + ")");
        }
      }
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    if (sections.empty()) throw ConfigError("line " + std::to_string(line_no), "key outside of any section");
    Section& s = sections.back();
    const std::string key = lower(trim(std::string_view(line).substr(0, eq)));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(s.label, "empty key (line " + std::to_string(line_no) + ")");
    if (s.entries.count(key)) throw ConfigError(s.label + "." + key, "key repeated (line " + std::to_string(line_no) + ")");
    s.entries[key] = Entry{value, line_no, false};
  }
  return sections;
}

class Reader {
 public:
  explicit Reader(Section& s) : s_(s) {}

  std::string key(const std::string& k) const { return s_.label + "." + k; }
  bool has(const std::string& k) const { return s_.entries.count(k) > 0; }

  const std::string& raw(const std::string& k) {
    auto it = s_.entries.find(k);
    if (it == s_.entries.end()) throw ConfigError(key(k), "required key missing");
    it->second.used = true;
    return it->second.value;
  }

  double number(const std::string& k) { return to_double(key(k), raw(k)); }
  int integer(const std::string& k) { return to_int(key(k), raw(k)); }

  void finish() const {
    for (const auto& [k, e] : s_.entries) {
      if (!e.used) throw ConfigError(key(k), "unknown key (line " + std::to_string(e.line) + ")");
    }
  }

 private:
  Section& s_;
};

void read_source(Reader r, RunConfig& c) {
  if (r.has("geometry")) {
    const std::string g = lower(r.raw("geometry"));
    if (g == "point") {
      c.source.geometry = SourceGeometry::point;
    } else if (g == "line") {
      c.source.geometry = SourceGeometry::line;
    } else {
      throw ConfigError(r.key("geometry"), "expected point or line");
    }
  }
  c.source.depth = r.number("depth");
  c.source.frequency = r.number("frequency");
  r.finish();
}

void read_layer(Reader r, RunConfig& c) {
  LayerSpec l;
  l.z_top = r.number("top");
  l.z_bot = r.number("bottom");
  l.c = parse_profile(r.key("c"), r.raw("c"));
  if (r.has("rho")) l.rho = parse_profile(r.key("rho"), r.raw("rho"));
  if (r.has("alpha")) l.alpha = parse_profile(r.key("alpha"), r.raw("alpha"));
  if (r.has("order")) l.order = r.integer("order");
  r.finish();
  c.layers.push_back(std::move(l));
}

void read_bottom(Reader r, RunConfig& c) {
  const std::string t = lower(r.raw("type"));
  if (t == "pressure-release") {
    c.bottom.kind = BottomKind::pressure_release;
  } else if (t == "rigid") {
    c.bottom.kind = BottomKind::rigid;
  } else if (t == "halfspace") {
    c.bottom.kind = BottomKind::halfspace;
    c.bottom.halfspace.c = r.number("c");
    c.bottom.halfspace.rho = r.number("rho");
    c.bottom.halfspace.alpha = r.has("alpha") ? r.number("alpha") : 0.0;
  } else {
    throw ConfigError(r.key("type"), "expected pressure-release, rigid or halfspace");
  }
  r.finish();
}

void read_wavenumber(Reader r, RunConfig& c) {
  const bool explicit_bounds = r.has("k_min") || r.has("k_max");
  if (r.has("interval")) {
    const std::string mode = lower(r.raw("interval"));
    if (mode == "auto") {
      if (explicit_bounds) throw ConfigError(r.key("interval"), "auto interval conflicts with k_min/k_max");
      c.wavenumber.automatic = true;
    } else if (mode != "explicit") {
      throw ConfigError(r.key("interval"), "expected auto or explicit");
    } else {
      c.wavenumber.automatic = false;
    }
  } else {
    c.wavenumber.automatic = !explicit_bounds;
  }
  if (!c.wavenumber.automatic) {
    c.wavenumber.k_min = r.number("k_min");
    c.wavenumber.k_max = r.number("k_max");
  }
  c.wavenumber.count = r.integer("count");
  r.finish();
}

void read_output(Reader r, RunConfig& c) {
  OutputSpec& o = c.output;
  for (const auto& p : split(r.raw("products"), ',')) {
    const std::string name = lower(p);
    if (name == "spectrum") {
      o.spectrum = true;
    } else if (name == "tl_grid") {
      o.tl_grid = true;
    } else if (name == "tl_line") {
      o.tl_line = true;
    } else {
      throw ConfigError(r.key("products"), "unknown product '" + p + "'");
    }
  }
  if (r.has("r_min")) o.r_min = r.number("r_min");
  if (r.has("r_max")) o.r_max = r.number("r_max");
  if (r.has("nr")) o.nr = r.integer("nr");
  if (r.has("depths") && r.has("nz")) throw ConfigError(r.key("depths"), "give either depths or nz, not both");
  if (r.has("depths")) o.depths = to_list(r.key("depths"), r.raw("depths"));
  if (r.has("nz")) o.nz = r.integer("nz");
  if (r.has("probe_depths")) o.probe_depths = to_list(r.key("probe_depths"), r.raw("probe_depths"));
  if (r.has("tl_binary")) o.tl_binary = to_bool(r.key("tl_binary"), r.raw("tl_binary"));
  if (r.has("normalization")) {
    const std::string n = lower(r.raw("normalization"));
    if (n == "standard") {
      o.normalization = kspace::Normalization::standard;
    } else if (n == "line-h0-at-1") {
      o.normalization = kspace::Normalization::line_h0_at_1;
    } else {
      throw ConfigError(r.key("normalization"), "expected standard or line-h0-at-1");
    }
  }
  r.finish();
}

void check_depth(const std::string& key, double z, double depth) {
  if (!(z >= 0.0 && z <= depth)) {
    throw ConfigError(key, "depth " + format(z) + " outside [0, " + format(depth) + "]");
  }
}

}  // namespace

RunConfig parse(std::istream& in) {
  std::vector<Section> sections = read_sections(in);
  RunConfig c;
  bool have_source = false;
  bool have_bottom = false;
  bool have_wavenumber = false;
  bool have_output = false;
  for (auto& s : sections) {
    Reader r(s);
    if (s.name == "source") {
      read_source(r, c);
      have_source = true;
    } else if (s.name == "spectral") {
      c.order = r.integer("order");
      r.finish();
    } else if (s.name == "layer") {
      read_layer(r, c);
    } else if (s.name == "bottom") {
      read_bottom(r, c);
      have_bottom = true;
    } else if (s.name == "wavenumber") {
      read_wavenumber(r, c);
      have_wavenumber = true;
    } else if (s.name == "output") {
      read_output(r, c);
      have_output = true;
    }
  }
  if (!have_source) throw ConfigError("source", "section missing");
  if (c.layers.empty()) throw ConfigError("layer", "at least one layer section is required");
  if (!have_bottom) throw ConfigError("bottom", "section missing");
  if (!have_wavenumber) throw ConfigError("wavenumber", "section missing");
  if (!have_output) throw ConfigError("output", "section missing");
  validate(c);
  return c;
}

RunConfig parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse(in);
}

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  out << "[source]\n";
  out << "geometry = " << (c.source.geometry == SourceGeometry::point ? "point" : "line") << "\n";
  out << "depth = " << format(c.source.depth) << "\n";
  out << "frequency = " << format(c.source.frequency) << "\n";

  out << "\n[spectral]\norder = " << c.order << "\n";

  for (const auto& l : c.layers) {
    out << "\n[layer]\n";
    out << "top = " << format(l.z_top) << "\n";
    out << "bottom = " << format(l.z_bot) << "\n";
    out << "c = " << format_profile(l.c) << "\n";
    out << "rho = " << format_profile(l.rho) << "\n";
    out << "alpha = " << format_profile(l.alpha) << "\n";
    if (l.order) out << "order = " << *l.order << "\n";
  }

  out << "\n[bottom]\n";
  switch (c.bottom.kind) {
    case BottomKind::pressure_release:
      out << "type = pressure-release\n";
      break;
    case BottomKind::rigid:
      out << "type = rigid\n";
      break;
    case BottomKind::halfspace:
      out << "type = halfspace\n";
      out << "c = " << format(c.bottom.halfspace.c) << "\n";
      out << "rho = " << format(c.bottom.halfspace.rho) << "\n";
      out << "alpha = " << format(c.bottom.halfspace.alpha) << "\n";
      break;
  }

  out << "\n[wavenumber]\n";
  if (c.wavenumber.automatic) {
    out << "interval = auto\n";
  } else {
    out << "k_min = " << format(c.wavenumber.k_min) << "\n";
    out << "k_max = " << format(c.wavenumber.k_max) << "\n";
  }
  out << "count = " << c.wavenumber.count << "\n";

  const OutputSpec& o = c.output;
  out << "\n[output]\n";
  std::vector<std::string> products;
  if (o.spectrum) products.emplace_back("spectrum");
  if (o.tl_grid) products.emplace_back("tl_grid");
  if (o.tl_line) products.emplace_back("tl_line");
  out << "products = ";
  for (std::size_t i = 0; i < products.size(); ++i) out << (i ? ", " : "") << products[i];
  out << "\n";
  out << "r_min = " << format(o.r_min) << "\n";
  out << "r_max = " << format(o.r_max) << "\n";
  out << "nr = " << o.nr << "\n";
  if (!o.depths.empty()) out << "depths = " << format_list(o.depths) << "\n";
  if (o.nz > 0) out << "nz = " << o.nz << "\n";
  if (!o.probe_depths.empty()) out << "probe_depths = " << format_list(o.probe_depths) << "\n";
  out << "tl_binary = " << (o.tl_binary ? "true" : "false") << "\n";
  out << "normalization = " << (o.normalization == kspace::Normalization::standard ? "standard" : "line-h0-at-1")
      << "\n";
  return out.str();
}

void validate(const RunConfig& c) {
  if (!(c.source.frequency > 0.0)) throw ConfigError("source.frequency", "must be positive");
  if (c.order < 4) throw ConfigError("spectral.order", "must be at least 4");
  if (c.layers.empty()) throw ConfigError("layer", "at least one layer is required");

  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    const LayerSpec& l = c.layers[i];
    const std::string prefix = "layer[" + std::to_string(i) + "].";
    const double expected_top = i == 0 ? 0.0 : c.layers[i - 1].z_bot;
    if (l.z_top != expected_top) {
      throw ConfigError(prefix + "top", "must equal " + format(expected_top) + " (layers are contiguous from z = 0)");
    }
    if (!(l.z_bot > l.z_top)) throw ConfigError(prefix + "bottom", "must exceed top");
    if (l.order && *l.order < 4) throw ConfigError(prefix + "order", "must be at least 4");
    const std::pair<const char*, const Profile*> profiles[] = {{"c", &l.c}, {"rho", &l.rho}, {"alpha", &l.alpha}};
    for (const auto& [name, profile] : profiles) {
      const std::string key = prefix + name;
      if (!profile->covers(l.z_top, l.z_bot)) throw ConfigError(key, "profile does not cover the layer");
      for (int j = 0; j <= 64; ++j) {
        const double z = l.z_top + (l.z_bot - l.z_top) * j / 64.0;
        double v = 0.0;
        try {
          v = profile->evaluate(z);
        } catch (const std::exception& e) {
          throw ConfigError(key, e.what());
        }
        const bool ok = std::string(name) == "alpha" ? v >= 0.0 : v > 0.0;
        if (!ok || !std::isfinite(v)) {
          throw ConfigError(key, std::string(name) == "alpha" ? "must be non-negative" : "must be positive");
        }
      }
    }
  }
  const double depth = c.layers.back().z_bot;

  if (!(c.source.depth > 0.0 && c.source.depth < depth)) {
    throw ConfigError("source.depth", "must lie strictly between 0 and the bottom depth " + format(depth));
  }

  if (c.bottom.kind == BottomKind::halfspace) {
    if (!(c.bottom.halfspace.c > 0.0)) throw ConfigError("bottom.c", "must be positive");
    if (!(c.bottom.halfspace.rho > 0.0)) throw ConfigError("bottom.rho", "must be positive");
    if (!(c.bottom.halfspace.alpha >= 0.0)) throw ConfigError("bottom.alpha", "must be non-negative");
  }

  if (c.wavenumber.count < 2) throw ConfigError("wavenumber.count", "must be at least 2");
  if (!c.wavenumber.automatic) {
    if (!(c.wavenumber.k_min >= 0.0)) throw ConfigError("wavenumber.k_min", "must be non-negative");
    if (!(c.wavenumber.k_max > c.wavenumber.k_min)) throw ConfigError("wavenumber.k_max", "must exceed k_min");
  }

  const OutputSpec& o = c.output;
  if (!o.spectrum && !o.tl_grid && !o.tl_line) throw ConfigError("output.products", "no product requested");
  if (o.tl_grid || o.tl_line) {
    if (o.nr < 1) throw ConfigError("output.nr", "must be at least 1");
    if (!(o.r_min >= 1.0)) throw ConfigError("output.r_min", "must be at least 1 m");
    if (o.nr == 1 ? !(o.r_max >= o.r_min) : !(o.r_max > o.r_min)) {
      throw ConfigError("output.r_max", "must exceed r_min");
    }
  }
  if (o.tl_grid) {
    if (o.depths.empty() && o.nz < 1) throw ConfigError("output.nz", "tl_grid needs depths or nz >= 1");
  }
  if (o.nz < 0) throw ConfigError("output.nz", "must be non-negative");
  for (double z : o.depths) check_depth("output.depths", z, depth);
  for (std::size_t i = 1; i < o.depths.size(); ++i) {
    if (!(o.depths[i] > o.depths[i - 1])) throw ConfigError("output.depths", "must be strictly increasing");
  }
  if ((o.spectrum || o.tl_line) && o.probe_depths.empty()) {
    throw ConfigError("output.probe_depths", "spectrum and tl_line need at least one probe depth");
  }
  for (double z : o.probe_depths) check_depth("output.probe_depths", z, depth);
  if (o.normalization == kspace::Normalization::line_h0_at_1 && c.source.geometry != SourceGeometry::line) {
    throw ConfigError("output.normalization", "line-h0-at-1 applies to line sources only");
  }

  try {
    wavint::validate(build_environment(c));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("layer", e.what());
  }
  try {
    (void)build_grid(c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("wavenumber.count", e.what());
  }
}

Environment build_environment(const RunConfig& c) {
  Environment env;
  for (const auto& spec : c.layers) {
    Layer l;
    l.z_top = spec.z_top;
    l.z_bot = spec.z_bot;
    l.c = spec.c;
    l.rho = spec.rho;
    l.alpha = spec.alpha;
    l.order = spec.order.value_or(c.order);
    env.layers.push_back(std::move(l));
  }
  env.bottom = c.bottom;
  env.source = c.source;
  return env;
}

double max_real_wavenumber(const Environment& env) {
  double k0 = 0.0;
  for (const auto& layer : env.layers) {
    const std::vector<double> nodes = spectral::cgl_nodes(std::max(layer.order, 64));
    for (double t : nodes) {
      const double z = layer.to_depth(t);
      const Complex k = complex_wavenumber(layer.c.evaluate(z), layer.alpha.evaluate(z), env.source.frequency);
      k0 = std::max(k0, k.real());
    }
  }
  return k0;
}

kspace::WavenumberGrid build_grid(const RunConfig& c) {
  if (c.wavenumber.automatic) {
    const double k0 = max_real_wavenumber(build_environment(c));
    return kspace::make_grid(0.0, 2.0 * k0, c.wavenumber.count);
  }
  return kspace::make_grid(c.wavenumber.k_min, c.wavenumber.k_max, c.wavenumber.count);
}

std::vector<double> receiver_depths(const RunConfig& c) {
  if (!c.output.depths.empty()) return c.output.depths;
  const int nz = c.output.nz;
  const double depth = c.layers.back().z_bot;
  std::vector<double> z(static_cast<std::size_t>(std::max(nz, 0)));
  for (int i = 0; i < nz; ++i) z[i] = nz == 1 ? 0.0 : depth * i / (nz - 1);
  if (nz > 1) z.back() = depth;
  return z;
}

std::vector<double> receiver_ranges(const RunConfig& c) {
  const int nr = c.output.nr;
  std::vector<double> r(static_cast<std::size_t>(std::max(nr, 0)));
  for (int i = 0; i < nr; ++i) {
    r[i] = nr == 1 ? c.output.r_min : c.output.r_min + (c.output.r_max - c.output.r_min) * i / (nr - 1);
  }
  if (nr > 1) r.back() = c.output.r_max;
  return r;
}

}  // namespace wavint::config
