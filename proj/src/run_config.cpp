#include "beamforge/run_config.hpp"

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace beamforge {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& key, int line, const std::string& what) {
  throw std::invalid_argument("config error: key '" + key + "' (line " +
                              std::to_string(line) + "): " + what);
}

std::int64_t parse_int(const std::string& key, const std::string& value,
                       int line) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(key, line, "expected an integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value,
                    int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(key, line, "expected a number, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value,
                        int line) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(key, line, "expected a non-negative integer, got '" + value + "'");
  }
}

}  // namespace

void RunConfig::validate() const {
  scenario.validate();
  training.validate();
  if (dataset_count < 1) {
    throw std::invalid_argument("dataset_count: must be >= 1");
  }
  if (train_snr_lo_db > train_snr_hi_db) {
    throw std::invalid_argument("train_snr_lo_db: must be <= train_snr_hi_db");
  }
  if (eval_snr_lo_db > eval_snr_hi_db) {
    throw std::invalid_argument("eval_snr_lo_db: must be <= eval_snr_hi_db");
  }
  if (!(eval_snr_step_db > 0.0)) {
    throw std::invalid_argument("eval_snr_step_db: must be > 0");
  }
  if (eval_trials < 1) {
    throw std::invalid_argument("eval_trials: must be >= 1");
  }
  if (threads < 0) {
    throw std::invalid_argument("threads: must be >= 0");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> key_lines;

  using Setter = std::function<void(const std::string&, int)>;
  const std::map<std::string, Setter> setters = {
      {"n_antennas", [&](const std::string& v, int l) {
         cfg.scenario.n_antennas = static_cast<int>(parse_int("n_antennas", v, l));
       }},
      {"n_rf", [&](const std::string& v, int l) {
         cfg.scenario.n_rf = static_cast<int>(parse_int("n_rf", v, l));
       }},
      {"n_slots", [&](const std::string& v, int l) {
         cfg.scenario.n_slots = static_cast<int>(parse_int("n_slots", v, l));
       }},
      {"n_users", [&](const std::string& v, int l) {
         cfg.scenario.n_users = static_cast<int>(parse_int("n_users", v, l));
       }},
      {"n_paths", [&](const std::string& v, int l) {
         cfg.scenario.n_paths = static_cast<int>(parse_int("n_paths", v, l));
       }},
      {"los_gain_var", [&](const std::string& v, int l) {
         cfg.scenario.los_gain_var = parse_double("los_gain_var", v, l);
       }},
      {"nlos_gain_var", [&](const std::string& v, int l) {
         cfg.scenario.nlos_gain_var = parse_double("nlos_gain_var", v, l);
       }},
      {"epochs", [&](const std::string& v, int l) {
         cfg.training.epochs = parse_int("epochs", v, l);
       }},
      {"batches_per_epoch", [&](const std::string& v, int l) {
         cfg.training.batches_per_epoch =
             static_cast<int>(parse_int("batches_per_epoch", v, l));
       }},
      {"batch_size", [&](const std::string& v, int l) {
         cfg.training.batch_size = static_cast<int>(parse_int("batch_size", v, l));
       }},
      {"lr_initial", [&](const std::string& v, int l) {
         cfg.training.lr_initial = parse_double("lr_initial", v, l);
       }},
      {"lr_decay_factor", [&](const std::string& v, int l) {
         cfg.training.lr_decay_factor = parse_double("lr_decay_factor", v, l);
       }},
      {"lr_decay_every", [&](const std::string& v, int l) {
         cfg.training.lr_decay_every = parse_int("lr_decay_every", v, l);
       }},
      {"validation_every", [&](const std::string& v, int l) {
         cfg.training.validation_every =
             static_cast<int>(parse_int("validation_every", v, l));
       }},
      {"preset", [&](const std::string& v, int l) {
         try {
           cfg.training.preset = preset_from_name(v);
         } catch (const std::exception& e) {
           fail("preset", l, e.what());
         }
       }},
      {"dataset_count", [&](const std::string& v, int l) {
         cfg.dataset_count = parse_int("dataset_count", v, l);
       }},
      {"train_snr_lo_db", [&](const std::string& v, int l) {
         cfg.train_snr_lo_db = parse_double("train_snr_lo_db", v, l);
       }},
      {"train_snr_hi_db", [&](const std::string& v, int l) {
         cfg.train_snr_hi_db = parse_double("train_snr_hi_db", v, l);
       }},
      {"eval_snr_lo_db", [&](const std::string& v, int l) {
         cfg.eval_snr_lo_db = parse_double("eval_snr_lo_db", v, l);
       }},
      {"eval_snr_hi_db", [&](const std::string& v, int l) {
         cfg.eval_snr_hi_db = parse_double("eval_snr_hi_db", v, l);
       }},
      {"eval_snr_step_db", [&](const std::string& v, int l) {
         cfg.eval_snr_step_db = parse_double("eval_snr_step_db", v, l);
       }},
      {"eval_trials", [&](const std::string& v, int l) {
         cfg.eval_trials = parse_int("eval_trials", v, l);
       }},
      {"seed", [&](const std::string& v, int l) {
         cfg.seed = parse_u64("seed", v, l);
       }},
      {"threads", [&](const std::string& v, int l) {
         cfg.threads = static_cast<int>(parse_int("threads", v, l));
       }},
  };

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config error: line " +
                                  std::to_string(line_no) +
                                  ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw std::invalid_argument("config error: unknown key '" + key +
                                  "' (line " + std::to_string(line_no) + ")");
    }
    if (value.empty()) fail(key, line_no, "empty value");
    it->second(value, line_no);
    key_lines[key] = line_no;
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    // Attach the source line when the offending key came from the file.
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    const std::string key = colon == std::string::npos ? "" : msg.substr(0, colon);
    const auto it = key_lines.find(key);
    if (it != key_lines.end()) {
      throw std::invalid_argument("config error: key '" + key + "' (line " +
                                  std::to_string(it->second) + "):" +
                                  msg.substr(colon + 1));
    }
    throw std::invalid_argument("config error: " + msg);
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(e.what()) + " in '" + path + "'");
  }
}

}  // namespace beamforge
