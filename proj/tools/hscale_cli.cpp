#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hscale/experiments/config.hpp"
#include "hscale/experiments/runner.hpp"

namespace ex = hscale::experiments;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out,
            const std::string& format) {
  const ex::Format fmt = ex::parse_format(format);
  const auto cfg = ex::parse_config(read_file(config_path), seed);
  const auto rec = ex::run_experiment(cfg);
  ex::emit_record(rec, fmt, out, std::cout);
  std::cout.flush();
  ex::print_summary(rec, std::cerr);
  return rec.exit_code();
}

int cmd_validate(const std::string& config_path) {
  const auto cfg = ex::parse_config(read_file(config_path));
  std::cout << cfg.echo().dump(2) << "\n";
  std::cerr << "ok: " << cfg.experiment() << "\n";
  return ex::kExitOk;
}

int cmd_list(bool as_json) {
  if (as_json) {
    ex::ordered_json all = ex::ordered_json::array();
    for (const auto& s : ex::experiment_schemas()) {
      ex::ordered_json e;
      e["name"] = s.name;
      e["description"] = s.description;
      e["fields"] = ex::schema_json(s.fields);
      all.push_back(std::move(e));
    }
    std::cout << all.dump(2) << "\n";
    return ex::kExitOk;
  }
  for (const auto& s : ex::experiment_schemas()) {
    std::cout << s.name << "\n  " << s.description << "\n";
    const auto print = [](const auto& self, const std::vector<ex::FieldSpec>& fields, const std::string& prefix) -> void {
      for (const auto& f : fields) {
        if (f.type == ex::FieldType::object) {
          self(self, f.children, prefix + f.name + ".");
          continue;
        }
        std::cout << "    " << prefix << f.name << " (" << ex::to_string(f.type) << ", default "
                  << f.default_value.dump() << ")";
        if (!f.choices.empty()) {
          std::cout << " one of:";
          for (const auto& c : f.choices) std::cout << " " << c;
        }
        std::cout << ": " << f.description << "\n";
      }
    };
    print(print, s.fields, "");
  }
  return ex::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat-scale SPDE experiments"};
  app.set_version_flag("--version", std::string(HSCALE_VERSION));
  app.require_subcommand(1);

  std::string config_path, out, format = "csv";
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("--config", config_path, "experiment configuration (JSON)")->required();
  run->add_option("--seed", seed, "override the configuration seed");
  run->add_option("--out", out, "output file; stdout when omitted");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  bool list_json = false;
  auto* list = app.add_subcommand("list", "list experiments and their parameter schemas");
  list->add_flag("--json", list_json, "print schemas as JSON");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a configuration and print its normalized form");
  validate->add_option("--config", validate_path, "experiment configuration (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ex::kExitOk : ex::kExitError;
  }

  try {
    if (*run) return cmd_run(config_path, seed, out, format);
    if (*list) return cmd_list(list_json);
    if (*validate) return cmd_validate(validate_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ex::kExitError;
  }
  return ex::kExitError;
}
