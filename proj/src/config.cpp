#include "nbldpc/sim.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nbldpc {

static double parse_num(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number for " + key + ": '" + v + "'");
  }
  if (pos != v.size()) throw std::invalid_argument("bad number for " + key + ": '" + v + "'");
  return x;
}

static long parse_long(const std::string& key, const std::string& v) {
  size_t pos = 0;
  long x;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer for " + key + ": '" + v + "'");
  }
  if (pos != v.size()) throw std::invalid_argument("bad integer for " + key + ": '" + v + "'");
  return x;
}

static bool parse_flag(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw std::invalid_argument("bad on/off value for " + key + ": '" + v + "'");
}

static std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_num(key, item));
  }
  if (out.empty()) throw std::invalid_argument("empty list for " + key);
  return out;
}

void set_config_key(SimConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "code") {
    cfg.code_path = value;
  } else if (key == "code_name") {
    cfg.code_name = value;
  } else if (key == "decoder") {
    if (value == "lp") cfg.decoder = DecoderSel::lp;
    else if (value == "penalized") cfg.decoder = DecoderSel::penalized;
    else if (value == "penalized-fast") cfg.decoder = DecoderSel::penalized_fast;
    else throw std::invalid_argument("unknown decoder: '" + value + "'");
  } else if (key == "embedding") {
    if (value == "flanagan") cfg.embedding = EmbeddingKind::flanagan;
    else if (value == "cw") cfg.embedding = EmbeddingKind::constant_weight;
    else throw std::invalid_argument("unknown embedding: '" + value + "'");
    cfg.embedding_explicit = true;
  } else if (key == "snr") {
    cfg.snr_db = parse_list(key, value);
  } else if (key == "trials") {
    cfg.trials = int(parse_long(key, value));
  } else if (key == "min_word_errors") {
    cfg.min_word_errors = int(parse_long(key, value));
  } else if (key == "seed") {
    cfg.seed = uint64_t(parse_long(key, value));
  } else if (key == "workers") {
    cfg.workers = int(parse_long(key, value));
  } else if (key == "timing") {
    cfg.timing = value == "measure" ? true : (value == "off" ? false : parse_flag(key, value));
  } else if (key == "out") {
    cfg.out_path = value;
  } else if (key == "mu") {
    cfg.lp.mu = cfg.pen.mu = parse_num(key, value);
  } else if (key == "rho") {
    cfg.lp.rho = cfg.pen.rho = parse_num(key, value);
  } else if (key == "tmax") {
    cfg.lp.t_max = cfg.pen.t_max = int(parse_long(key, value));
  } else if (key == "eps") {
    cfg.lp.eps = cfg.pen.eps = parse_num(key, value);
  } else if (key == "alpha") {
    cfg.pen.alpha = parse_num(key, value);
  } else if (key == "early_term") {
    cfg.lp.early_term = cfg.pen.early_term = parse_flag(key, value);
  } else if (key == "inner_mu") {
    cfg.pen.inner.mu = parse_num(key, value);
  } else if (key == "inner_eps") {
    cfg.pen.inner.eps = parse_num(key, value);
  } else if (key == "inner_tmax") {
    cfg.pen.inner.t_max = int(parse_long(key, value));
  } else if (key == "lp.mu") {
    cfg.lp.mu = parse_num(key, value);
  } else if (key == "lp.rho") {
    cfg.lp.rho = parse_num(key, value);
  } else if (key == "lp.tmax") {
    cfg.lp.t_max = int(parse_long(key, value));
  } else if (key == "lp.eps") {
    cfg.lp.eps = parse_num(key, value);
  } else if (key == "lp.early_term") {
    cfg.lp.early_term = parse_flag(key, value);
  } else if (key == "penalized.mu") {
    cfg.pen.mu = parse_num(key, value);
  } else if (key == "penalized.rho") {
    cfg.pen.rho = parse_num(key, value);
  } else if (key == "penalized.tmax") {
    cfg.pen.t_max = int(parse_long(key, value));
  } else if (key == "penalized.eps") {
    cfg.pen.eps = parse_num(key, value);
  } else if (key == "penalized.alpha") {
    cfg.pen.alpha = parse_num(key, value);
  } else if (key == "penalized.early_term") {
    cfg.pen.early_term = parse_flag(key, value);
  } else if (key == "penalized.inner_mu") {
    cfg.pen.inner.mu = parse_num(key, value);
  } else if (key == "penalized.inner_eps") {
    cfg.pen.inner.eps = parse_num(key, value);
  } else if (key == "penalized.inner_tmax") {
    cfg.pen.inner.t_max = int(parse_long(key, value));
  } else {
    throw std::invalid_argument("unknown config key: '" + key + "'");
  }
}

static std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void load_config_file(SimConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      if (line.front() == '[') {
        if (line.back() != ']') throw std::invalid_argument("unterminated section header");
        section = trim(line.substr(1, line.size() - 2));
        if (section != "lp" && section != "penalized")
          throw std::invalid_argument("unknown section: '" + section + "'");
        continue;
      }
      const size_t eq = line.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("expected key = value");
      std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw std::invalid_argument("empty key");
      if (!section.empty()) key = section + "." + key;
      set_config_key(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace nbldpc
