#include "causaltree/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <optional>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "causaltree/error.hpp"

namespace causaltree::io {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json& require(const json& obj, const char* field) {
  if (!obj.is_object()) throw ParseError("model: expected a JSON object");
  auto it = obj.find(field);
  if (it == obj.end()) throw ParseError(std::string("model: missing field '") + field + "'");
  return *it;
}

std::size_t positive_int(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ParseError("model: field '" + field + "' must be a positive integer");
  return v.get<std::size_t>();
}

model::Coordinate coordinate(const json& v, const std::string& field,
                             const model::ProcessLayout& layout) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
    throw ParseError("model: field '" + field + "' must be [process, time]");
  const long long i = v[0].get<long long>();
  const long long t = v[1].get<long long>();
  if (i < 0 || t < 0 || static_cast<std::size_t>(i) >= layout.processes() ||
      static_cast<std::size_t>(t) >= layout.timesteps())
    throw ParseError("model: field '" + field + "' is outside the m x n layout");
  return {static_cast<std::size_t>(i), static_cast<std::size_t>(t)};
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError("model: field '" + field + "' must be a number");
  return v.get<double>();
}

}  // namespace

model::GenerativeModel model_from_json(const json& j) {
  const std::size_t m = positive_int(require(j, "m"), "m");
  const std::size_t n = positive_int(require(j, "n"), "n");
  const model::ProcessLayout layout(m, n);
  model::GenerativeModel model(layout);

  const json& coeffs = require(j, "coeffs");
  if (!coeffs.is_array()) throw ParseError("model: field 'coeffs' must be an array");
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const std::string prefix = "coeffs[" + std::to_string(k) + "]";
    const json& c = coeffs[k];
    if (!c.is_object()) throw ParseError("model: field '" + prefix + "' must be an object");
    for (const char* f : {"to", "from", "value"})
      if (!c.contains(f)) throw ParseError("model: field '" + prefix + "." + f + "' is missing");
    model.set_coeff(coordinate(c["to"], prefix + ".to", layout),
                    coordinate(c["from"], prefix + ".from", layout),
                    number(c["value"], prefix + ".value"));
  }

  const json& noise = require(j, "noise_vars");
  if (noise.is_number()) {
    for (std::size_t v = 0; v < layout.size(); ++v)
      model.set_noise_var(layout.coordinate(v), noise.get<double>());
  } else if (noise.is_array()) {
    if (noise.size() != layout.size())
      throw ParseError("model: field 'noise_vars' must have m*n = " + std::to_string(layout.size()) +
                       " entries");
    for (std::size_t v = 0; v < layout.size(); ++v)
      model.set_noise_var(layout.coordinate(v),
                          number(noise[v], "noise_vars[" + std::to_string(v) + "]"));
  } else {
    throw ParseError("model: field 'noise_vars' must be a number or an array");
  }

  const model::ValidationReport report = model.validate();
  for (const auto& v : report.violations)
    if (v.kind == model::Violation::Kind::kNotStrictlyCausal)
      throw NotStrictlyCausal("model: " + report.summary());
  if (!report.ok()) throw InvalidModel("model: " + report.summary());
  return model;
}

json model_to_json(const model::GenerativeModel& model) {
  const auto& layout = model.layout();
  json coeffs = json::array();
  for (std::size_t u = 0; u < layout.size(); ++u)
    for (std::size_t v = 0; v < layout.size(); ++v) {
      const double a = model.coeffs()(u, v);
      if (a == 0.0) continue;
      const auto to = layout.coordinate(u);
      const auto from = layout.coordinate(v);
      coeffs.push_back({{"to", {to.process, to.time}}, {"from", {from.process, from.time}}, {"value", a}});
    }
  return {{"m", layout.processes()},
          {"n", layout.timesteps()},
          {"coeffs", coeffs},
          {"noise_vars", model.noise_vars()}};
}

model::GenerativeModel read_model(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("model " + path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

void write_samples_csv(std::ostream& os, const model::ProcessLayout& layout,
                       const linalg::Matrix& samples) {
  for (std::size_t v = 0; v < layout.size(); ++v) os << (v ? "," : "") << layout.variable_label(v);
  os << '\n';
  for (std::size_t r = 0; r < samples.rows(); ++r) {
    for (std::size_t c = 0; c < samples.cols(); ++c) os << (c ? "," : "") << format_double(samples(r, c));
    os << '\n';
  }
}

void write_weights_csv(std::ostream& os, const info::WeightMatrix& w) {
  os << "# layout m=" << w.layout.processes() << " n=" << w.layout.timesteps() << '\n';
  const auto labels = w.labels();
  os << "label";
  for (const auto& l : labels) os << ',' << l;
  os << '\n';
  for (std::size_t a = 0; a < w.size(); ++a) {
    os << labels[a];
    for (std::size_t b = 0; b < w.size(); ++b) os << ',' << format_double(w(a, b));
    os << '\n';
  }
  os << "# units=nats; kind=" << info::kind_name(w.kind) << '\n';
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, std::size_t line_no) {
  const std::string t = trim(cell);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ParseError("weights: line " + std::to_string(line_no) + ": bad number '" + t + "'");
  return v;
}

}  // namespace

info::WeightMatrix read_weights_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::string> kind;
  std::size_t layout_m = 0, layout_n = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto kpos = line.find("kind=");
      if (line.find("units=") != std::string::npos && kpos != std::string::npos) {
        if (line.find("units=nats") == std::string::npos) throw ParseError("weights: units must be nats");
        std::string k = line.substr(kpos + 5);
        k = trim(k.substr(0, k.find(';')));
        kind = k;
      }
      if (line.rfind("# layout", 0) == 0) {
        std::istringstream ss(line.substr(8));
        std::string tok;
        while (ss >> tok) {
          if (tok.rfind("m=", 0) == 0) layout_m = std::stoul(tok.substr(2));
          if (tok.rfind("n=", 0) == 0) layout_n = std::stoul(tok.substr(2));
        }
      }
      continue;
    }
    const auto cells = split(line, ',');
    if (labels.empty()) {
      labels.assign(cells.begin() + 1, cells.end());
      for (auto& l : labels) l = trim(l);
      continue;
    }
    if (cells.size() != labels.size() + 1)
      throw ParseError("weights: line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(labels.size() + 1));
    if (trim(cells[0]) != labels[rows.size()])
      throw ParseError("weights: line " + std::to_string(line_no) + ": row label '" + trim(cells[0]) +
                       "' does not match column label '" + labels[rows.size()] + "'");
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(parse_number(cells[c], line_no));
    rows.push_back(std::move(row));
  }
  if (!kind) throw ParseError("weights: missing footer '# units=nats; kind=<MI|DI|MIvar>'");
  if (labels.empty() || rows.size() != labels.size())
    throw ParseError("weights: matrix is not square");

  info::WeightMatrix w;
  w.kind = info::parse_kind(*kind);
  const std::size_t size = labels.size();
  w.weights = linalg::Matrix(size, size);
  for (std::size_t a = 0; a < size; ++a)
    for (std::size_t b = 0; b < size; ++b) w.weights(a, b) = a == b ? 0.0 : rows[a][b];
  if (layout_m == 0 && w.kind == info::WeightKind::kMIVar) {
    // No layout line: recover m and n from the p<i>_t<t> labels.
    for (const auto& l : labels) {
      std::size_t i = 0, t = 0;
      if (std::sscanf(l.c_str(), "p%zu_t%zu", &i, &t) != 2)
        throw ParseError("weights: cannot infer layout from label '" + l + "'");
      layout_m = std::max(layout_m, i + 1);
      layout_n = std::max(layout_n, t + 1);
    }
  } else if (layout_m == 0) {
    layout_m = size;
    layout_n = 1;
  }
  w.layout = model::ProcessLayout(layout_m, layout_n);
  const std::size_t expected = w.kind == info::WeightKind::kMIVar ? w.layout.size() : layout_m;
  if (expected != size) throw ParseError("weights: matrix size does not match the declared layout");
  return w;
}

info::WeightMatrix read_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_weights_csv(in);
}

json tree_to_json(const ProcessTree& tree, const std::vector<std::string>& labels) {
  json edges = json::array();
  const auto list = tree.directed() ? tree.edges() : tree.undirected_edges();
  for (const auto& [a, b] : list) edges.push_back({a, b});
  json j;
  j["directed"] = tree.directed();
  j["root"] = tree.directed() ? json(tree.root()) : json(nullptr);
  j["edges"] = edges;
  j["score_nats"] = tree.score();
  j["labels"] = labels;
  return j;
}

ProcessTree tree_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("tree: expected a JSON object");
  for (const char* f : {"directed", "root", "edges", "labels"})
    if (!j.contains(f)) throw ParseError(std::string("tree: missing field '") + f + "'");
  if (!j["directed"].is_boolean()) throw ParseError("tree: field 'directed' must be a boolean");
  if (!j["labels"].is_array()) throw ParseError("tree: field 'labels' must be an array");
  if (!j["edges"].is_array()) throw ParseError("tree: field 'edges' must be an array");
  const bool directed = j["directed"].get<bool>();
  const std::size_t nodes = j["labels"].size();
  std::optional<std::size_t> root;
  if (!j["root"].is_null()) {
    if (!j["root"].is_number_integer()) throw ParseError("tree: field 'root' must be an integer or null");
    root = j["root"].get<std::size_t>();
  }
  std::vector<ProcessTree::Edge> edges;
  for (std::size_t k = 0; k < j["edges"].size(); ++k) {
    const json& e = j["edges"][k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw ParseError("tree: field 'edges[" + std::to_string(k) + "]' must be [parent, child]");
    edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  const double score = j.contains("score_nats") && j["score_nats"].is_number()
                           ? j["score_nats"].get<double>()
                           : 0.0;
  return ProcessTree::from_edges(nodes, edges, directed, root, score);
}

ProcessTree read_tree(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("tree " + path.string() + ": " + e.what());
  }
  return tree_from_json(j);
}

void write_dot(std::ostream& os, const ProcessTree& tree, const std::vector<std::string>& labels) {
  const char* arrow = tree.directed() ? " -> " : " -- ";
  os << (tree.directed() ? "digraph" : "graph") << " tree {\n";
  for (std::size_t v = 0; v < tree.node_count(); ++v)
    os << "  n" << v << " [label=\"" << (v < labels.size() ? labels[v] : std::to_string(v)) << "\"];\n";
  const auto list = tree.directed() ? tree.edges() : tree.undirected_edges();
  for (const auto& [a, b] : list) os << "  n" << a << arrow << "n" << b << ";\n";
  os << "}\n";
}

void write_roc_csv(std::ostream& os, const std::vector<hypothesis::RocCurve>& curves) {
  os << "scorer,threshold,fpr,tpr\n";
  for (const auto& c : curves)
    for (const auto& p : c.points)
      os << c.scorer << ',' << format_double(p.threshold) << ',' << format_double(p.fpr) << ','
         << format_double(p.tpr) << '\n';
  for (const auto& c : curves) os << "# auc_" << c.scorer << '=' << format_double(c.auc) << '\n';
}

std::string file_digest(const std::filesystem::path& path) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : read_file(path)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string manifest(const std::string& subcommand, std::uint64_t seed,
                     const std::vector<ManifestInput>& inputs) {
  std::ostringstream os;
  os << "causaltree " << kToolVersion << " subcommand=" << subcommand << " seed=" << seed;
  for (const auto& in : inputs)
    os << ' ' << in.name << '=' << in.path.filename().string() << '@' << file_digest(in.path);
  return os.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DataError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace causaltree::io
