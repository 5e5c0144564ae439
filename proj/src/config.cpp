#include "disgan/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <vector>

#include "disgan/dataset.hpp"
#include "disgan/model_io.hpp"

namespace disgan {

namespace {

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(d)) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return d;
}

long long to_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long n = 0;
  try {
    n = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return n;
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const long long n = to_integer(key, v);
  if (n < 0) throw ConfigError(key + ": must be non-negative, got " + v);
  return static_cast<std::size_t>(n);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string from_bool(bool b) { return b ? "true" : "false"; }

// shortest text that parses back to the same double
std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

#define DISGAN_DOUBLE(KEY, MEMBER)                                                     \
  Field {                                                                              \
    KEY, [](const RunConfig& c) { return shortest(c.MEMBER); },                   \
        [](RunConfig& c, const std::string& v) { c.MEMBER = to_double(KEY, v); }       \
  }
#define DISGAN_INT(KEY, MEMBER)                                                                           \
  Field {                                                                                                 \
    KEY, [](const RunConfig& c) { return std::to_string(c.MEMBER); },                                     \
        [](RunConfig& c, const std::string& v) { c.MEMBER = static_cast<int>(to_integer(KEY, v)); }       \
  }
#define DISGAN_COUNT(KEY, MEMBER)                                                  \
  Field {                                                                          \
    KEY, [](const RunConfig& c) { return std::to_string(c.MEMBER); },              \
        [](RunConfig& c, const std::string& v) { c.MEMBER = to_count(KEY, v); }    \
  }
#define DISGAN_BOOL(KEY, MEMBER)                                                   \
  Field {                                                                          \
    KEY, [](const RunConfig& c) { return from_bool(c.MEMBER); },                   \
        [](RunConfig& c, const std::string& v) { c.MEMBER = to_bool(KEY, v); }     \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      Field{"seed", [](const RunConfig& c) { return std::to_string(c.seed); },
            [](RunConfig& c, const std::string& v) {
              if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
                throw ConfigError("seed: expected an unsigned integer, got '" + v + "'");
              c.seed = std::stoull(v);
            }},
      Field{"data.generator", [](const RunConfig& c) { return c.data.generator; },
            [](RunConfig& c, const std::string& v) { c.data.generator = v; }},
      DISGAN_COUNT("data.count_x", data.count_x),
      DISGAN_COUNT("data.count_y", data.count_y),
      DISGAN_COUNT("data.dim", data.dim),
      DISGAN_DOUBLE("data.noise", data.noise),
      DISGAN_DOUBLE("data.separation", data.separation),
      DISGAN_COUNT("data.clusters", data.clusters),
      DISGAN_DOUBLE("data.split_train", data.split_train),
      DISGAN_DOUBLE("data.split_val", data.split_val),
      DISGAN_DOUBLE("data.split_test", data.split_test),
      DISGAN_INT("train.epochs", epochs),
      DISGAN_INT("train.warm_epochs", warm_epochs),
      DISGAN_DOUBLE("train.lr", lr),
      DISGAN_DOUBLE("train.beta1", beta1),
      DISGAN_DOUBLE("train.beta2", beta2),
      DISGAN_COUNT("train.batch_size", batch_size),
      DISGAN_COUNT("gan.gen_hidden", gan_arch.gen_hidden),
      DISGAN_COUNT("gan.disc_hidden", gan_arch.disc_hidden),
      DISGAN_DOUBLE("gan.lambda_ver_dis", weights.ver_dis),
      DISGAN_DOUBLE("gan.lambda_hor_dis", weights.hor_dis),
      DISGAN_DOUBLE("gan.lambda_inter_cyc", weights.inter_cyc),
      DISGAN_DOUBLE("gan.lambda_intra_cyc", weights.intra_cyc),
      DISGAN_BOOL("geometry.normalize_vertical", geometry.normalize_vertical),
      DISGAN_BOOL("clf.linear", clf_arch.linear),
      DISGAN_COUNT("clf.hidden", clf_arch.hidden),
      DISGAN_COUNT("clf.penultimate", clf_arch.penultimate),
      DISGAN_INT("clf.epochs", clf_epochs),
      DISGAN_INT("clf.warm_epochs", clf_warm_epochs),
      DISGAN_DOUBLE("clf.lr", clf_lr),
      DISGAN_DOUBLE("clf.l2", clf_l2),
      DISGAN_BOOL("cprime.warm_start", warm_start_cprime),
      Field{"cprime.mode",
            [](const RunConfig& c) {
              return std::string(c.cprime_mode == CPrimeMode::per_iteration ? "per_iteration" : "post_hoc");
            },
            [](RunConfig& c, const std::string& v) {
              if (v == "per_iteration")
                c.cprime_mode = CPrimeMode::per_iteration;
              else if (v == "post_hoc")
                c.cprime_mode = CPrimeMode::post_hoc;
              else
                throw ConfigError("cprime.mode: expected per_iteration or post_hoc, got '" + v + "'");
            }},
  };
  return table;
}

#undef DISGAN_DOUBLE
#undef DISGAN_INT
#undef DISGAN_COUNT
#undef DISGAN_BOOL

void check_schedule(const char* prefix, int epochs, int warm) {
  if (epochs < 1) throw ConfigError(std::string(prefix) + ".epochs must be >= 1");
  if (warm < 0 || warm > epochs) {
    throw ConfigError(std::string(prefix) + ".warm_epochs must lie in [0, " + prefix + ".epochs]");
  }
}

}  // namespace

void DatasetSpec::validate() const {
  if (generator != "gaussians" && generator != "moons" && generator != "subclusters") {
    throw ConfigError("data.generator: expected gaussians, moons or subclusters, got '" + generator + "'");
  }
  if (count_x < 1) throw ConfigError("data.count_x must be >= 1");
  if (count_y < 1) throw ConfigError("data.count_y must be >= 1");
  if (dim < 1) throw ConfigError("data.dim must be >= 1");
  if (generator == "moons" && dim < 2) throw ConfigError("data.dim must be >= 2 for moons");
  if (generator == "subclusters" && clusters < 2) throw ConfigError("data.clusters must be >= 2 for subclusters");
  if (generator == "subclusters" && dim < 2) throw ConfigError("data.dim must be >= 2 for subclusters");
  if (!(noise >= 0.0)) throw ConfigError("data.noise must be >= 0");
  if (!(split_train > 0.0) || !(split_val >= 0.0) || !(split_test >= 0.0)) {
    throw ConfigError("data.split_*: train share must be positive and val/test non-negative");
  }
  if (std::abs(split_train + split_val + split_test - 1.0) > 1e-9) {
    throw ConfigError("data.split_train + data.split_val + data.split_test must equal 1");
  }
}

ClassifierTrainConfig RunConfig::classifier_train_config() const {
  ClassifierTrainConfig c;
  c.epochs = clf_epochs;
  c.warm_epochs = clf_warm_epochs;
  c.lr = clf_lr;
  c.beta1 = beta1;
  c.beta2 = beta2;
  c.batch_size = batch_size;
  c.l2 = clf_l2;
  return c;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(*this, trim(value));
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

std::map<std::string, std::string> RunConfig::to_map() const {
  std::map<std::string, std::string> out;
  for (const auto& f : fields()) out[f.key] = f.get(*this);
  return out;
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  for (const auto& [k, v] : to_map()) os << k << " = " << v << "\n";
  return os.str();
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) { return parse(read_text_file(path)); }

std::string RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void RunConfig::validate() const {
  data.validate();
  check_schedule("train", epochs, warm_epochs);
  check_schedule("clf", clf_epochs, clf_warm_epochs);
  if (!(lr >= 0.0)) throw ConfigError("train.lr must be >= 0");
  if (!(clf_lr >= 0.0)) throw ConfigError("clf.lr must be >= 0");
  if (!(clf_l2 >= 0.0)) throw ConfigError("clf.l2 must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("train.beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("train.beta2 must lie in [0, 1)");
  if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (gan_arch.gen_hidden < 1 || gan_arch.disc_hidden < 1) throw ConfigError("gan.*_hidden must be >= 1");
  if (!clf_arch.linear && (clf_arch.hidden < 1 || clf_arch.penultimate < 1)) {
    throw ConfigError("clf.hidden and clf.penultimate must be >= 1");
  }
  try {
    weights.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("gan.") + e.what());
  }
}

}  // namespace disgan
