#include "disgan/model_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "disgan/dataset.hpp"

namespace disgan {

namespace {

class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error("model file: " + what) {}
};

void write_net(std::ostream& os, const std::string& label, const Mlp& net) {
  os << "net " << label << ' ' << net.layer_count();
  for (auto w : net.widths()) os << ' ' << w;
  for (auto a : net.activations()) os << ' ' << to_string(a);
  os << '\n';
  for (const auto& p : net.params().items()) {
    os << "param " << label << ' ' << p.name << ' ' << (p.frozen ? 1 : 0) << ' ' << p.tensor.rows() << ' '
       << p.tensor.cols();
    for (double v : p.tensor.values()) os << ' ' << format_double(v);
    os << '\n';
  }
}

struct ParsedModel {
  std::string kind;
  std::map<std::string, std::string> header;
  std::map<std::string, Mlp> nets;
};

ParsedModel parse_model(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "disgan-model") throw FormatError("missing 'disgan-model' header");
  if (version != kModelFormatVersion) throw FormatError("unsupported version " + std::to_string(version));

  ParsedModel out;
  std::map<std::string, std::size_t> params_seen;
  bool ended = false;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "end") {
      ended = true;
      break;
    }
    if (key == "net") {
      std::string label;
      std::size_t layers = 0;
      if (!(ls >> label >> layers) || layers == 0) throw FormatError("bad net line: " + line);
      std::vector<std::size_t> widths(layers + 1);
      std::vector<Activation> acts(layers);
      for (auto& w : widths)
        if (!(ls >> w)) throw FormatError("bad widths in: " + line);
      for (auto& a : acts) {
        std::string s;
        if (!(ls >> s)) throw FormatError("bad activations in: " + line);
        a = activation_from_string(s);
      }
      out.nets.emplace(label, Mlp(widths, acts));
      params_seen[label] = 0;
    } else if (key == "param") {
      std::string label, name;
      int frozen = 0;
      std::size_t rows = 0, cols = 0;
      if (!(ls >> label >> name >> frozen >> rows >> cols)) throw FormatError("bad param line: " + line);
      auto it = out.nets.find(label);
      if (it == out.nets.end()) throw FormatError("param for undeclared net " + label);
      auto& p = it->second.params().get(name);
      if (p.tensor.rows() != rows || p.tensor.cols() != cols) {
        throw FormatError("param " + label + "/" + name + " has shape " + shape_string({rows, cols}) +
                          ", topology expects " + shape_string(p.tensor.shape()));
      }
      for (auto& v : p.tensor.values()) {
        std::string tok;
        if (!(ls >> tok)) throw FormatError("too few values for " + label + "/" + name);
        try {
          v = std::stod(tok);
        } catch (const std::exception&) {
          throw FormatError("bad number '" + tok + "' in " + label + "/" + name);
        }
      }
      std::string extra;
      if (ls >> extra) throw FormatError("too many values for " + label + "/" + name);
      p.frozen = frozen != 0;
      ++params_seen[label];
    } else {
      std::string rest;
      std::getline(ls >> std::ws, rest);
      if (key == "kind")
        out.kind = rest;
      else
        out.header[key] = rest;
    }
  }
  if (!ended) throw FormatError("truncated (no 'end' line)");
  for (const auto& [label, net] : out.nets) {
    if (params_seen[label] != net.params().size()) throw FormatError("net " + label + " is missing parameters");
  }
  return out;
}

const std::string& header_value(const ParsedModel& m, const std::string& key) {
  auto it = m.header.find(key);
  if (it == m.header.end()) throw FormatError("missing header field '" + key + "'");
  return it->second;
}

Mlp take_net(ParsedModel& m, const std::string& label) {
  auto it = m.nets.find(label);
  if (it == m.nets.end()) throw FormatError("missing net '" + label + "'");
  return it->second;
}

}  // namespace

std::string serialize_classifier(const ClassifierNet& net) {
  std::ostringstream os;
  os << "disgan-model " << kModelFormatVersion << "\n";
  os << "kind classifier\n";
  os << "input_dim " << net.input_dim() << "\n";
  os << "linear " << (net.is_linear() ? 1 : 0) << "\n";
  if (net.extractor()) write_net(os, "extractor", *net.extractor());
  write_net(os, "head", net.head());
  os << "end\n";
  return os.str();
}

ClassifierNet parse_classifier(const std::string& text) {
  auto m = parse_model(text);
  if (m.kind != "classifier") throw FormatError("expected kind 'classifier', got '" + m.kind + "'");
  ClassifierArch arch;
  arch.input_dim = std::stoul(header_value(m, "input_dim"));
  arch.linear = header_value(m, "linear") == "1";
  std::optional<Mlp> extractor;
  if (!arch.linear) {
    extractor = take_net(m, "extractor");
    arch.hidden = extractor->widths().size() > 2 ? extractor->widths()[1] : 0;
    arch.penultimate = extractor->out_dim();
  }
  return ClassifierNet::from_parts(arch, std::move(extractor), take_net(m, "head"));
}

std::string serialize_bundle(const GanBundle& bundle) {
  std::ostringstream os;
  os << "disgan-model " << kModelFormatVersion << "\n";
  os << "kind gan-bundle\n";
  os << "dim " << bundle.dim() << "\n";
  os << "lambda_ver_dis " << format_double(bundle.weights.ver_dis) << "\n";
  os << "lambda_hor_dis " << format_double(bundle.weights.hor_dis) << "\n";
  os << "lambda_inter_cyc " << format_double(bundle.weights.inter_cyc) << "\n";
  os << "lambda_intra_cyc " << format_double(bundle.weights.intra_cyc) << "\n";
  os << "normalize_vertical " << (bundle.geometry.normalize_vertical ? 1 : 0) << "\n";
  for (auto m : kMappings) write_net(os, "gen." + to_string(m), bundle.generator(m));
  for (auto m : kMappings) write_net(os, "disc." + to_string(m), bundle.discriminator(m));
  os << "end\n";
  return os.str();
}

GanBundle parse_bundle(const std::string& text, std::shared_ptr<const AuxiliaryClassifier> aux) {
  auto m = parse_model(text);
  if (m.kind != "gan-bundle") throw FormatError("expected kind 'gan-bundle', got '" + m.kind + "'");
  GanBundle b;
  b.weights.ver_dis = std::stod(header_value(m, "lambda_ver_dis"));
  b.weights.hor_dis = std::stod(header_value(m, "lambda_hor_dis"));
  b.weights.inter_cyc = std::stod(header_value(m, "lambda_inter_cyc"));
  b.weights.intra_cyc = std::stod(header_value(m, "lambda_intra_cyc"));
  b.geometry.normalize_vertical = header_value(m, "normalize_vertical") == "1";
  for (auto k : kMappings) {
    b.generators[index(k)] = take_net(m, "gen." + to_string(k));
    b.discriminators[index(k)] = take_net(m, "disc." + to_string(k));
  }
  const std::size_t dim = std::stoul(header_value(m, "dim"));
  if (b.dim() != dim) throw FormatError("generator width disagrees with dim header");
  if (aux && aux->input_dim() != dim) throw ShapeError("bundle dimension differs from the auxiliary classifier's");
  b.aux = std::move(aux);
  return b;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void save_classifier(const ClassifierNet& net, const std::filesystem::path& path) {
  write_text_file(path, serialize_classifier(net));
}

ClassifierNet load_classifier(const std::filesystem::path& path) { return parse_classifier(read_text_file(path)); }

void save_bundle(const GanBundle& bundle, const std::filesystem::path& path) {
  write_text_file(path, serialize_bundle(bundle));
}

GanBundle load_bundle(const std::filesystem::path& path, std::shared_ptr<const AuxiliaryClassifier> aux) {
  return parse_bundle(read_text_file(path), std::move(aux));
}

}  // namespace disgan
