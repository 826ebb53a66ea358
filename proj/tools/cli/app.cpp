// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <memory>

#include "common.hpp"
#include "semstyle/errors.hpp"

namespace {

using semstyle::cli::Command;
using semstyle::cli::Common;

// A JSON object of option values. Keys are long flag names, with either
// dashes or underscores.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames().front();
      if (opt->count() > 0) {
        j[name] = opt->results().size() == 1 ? nlohmann::ordered_json(opt->results().front())
                                             : nlohmann::ordered_json(opt->results());
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConfigError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (auto it = j.begin(); it != j.end(); ++it) {
      CLI::ConfigItem item;
      item.name = it.key();
      std::replace(item.name.begin(), item.name.end(), '_', '-');
      auto render = [](const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
        if (v.is_number() || v.is_null()) return v.dump();
        throw CLI::ConfigError("config values must be scalars or arrays of scalars");
      };
      if (it.value().is_array()) {
        for (const auto& v : it.value()) item.inputs.push_back(render(v));
      } else {
        item.inputs.push_back(render(it.value()));
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

void print_overview(std::ostream& out) {
  out << "usage: semstyle <command> [options]\n\ncommands:\n";
  for (const auto& c : semstyle::cli::commands()) {
    out << "  " << c.name;
    for (std::size_t i = c.name.size(); i < 16; ++i) out << ' ';
    out << c.summary << '\n';
  }
  out << "\nRun 'semstyle <command> --help' for the options of a command.\n";
}

int dispatch(int argc, char** argv) {
  if (argc < 2) {
    print_overview(std::cerr);
    return 1;
  }
  const std::string name = argv[1];
  if (name == "--help" || name == "-h" || name == "help") {
    print_overview(std::cout);
    return 0;
  }
  const auto& cmds = semstyle::cli::commands();
  auto cmd = std::find_if(cmds.begin(), cmds.end(), [&](const Command& c) { return c.name == name; });
  if (cmd == cmds.end()) {
    std::cerr << "semstyle: unknown command '" << name << "'\n\n";
    print_overview(std::cerr);
    return 1;
  }

  Common common;
  std::function<int()> action;
  auto app = semstyle::cli::make_app(*cmd, common, &action);
  try {
    app->parse(argc - 1, argv + 1);
  } catch (const CLI::CallForHelp&) {
    std::cout << app->help();
    return 0;
  } catch (const CLI::ConfigError& e) {
    std::cerr << "semstyle " << cmd->name << ": config: " << e.what() << '\n';
    return 1;
  } catch (const CLI::ParseError& e) {
    std::cerr << "semstyle " << cmd->name << ": " << e.what() << "\n\n" << app->help();
    return 1;
  }
  return action();
}

}  // namespace

namespace semstyle::cli {

std::unique_ptr<CLI::App> make_app(const Command& cmd, Common& common, std::function<int()>* action) {
  auto app = std::make_unique<CLI::App>(cmd.summary, "semstyle " + cmd.name);
  app->config_formatter(std::make_shared<JsonConfig>());
  app->set_config("--config", "", "JSON file of option values; command-line flags take precedence");
  app->allow_config_extras(false);
  app->add_option("--seed", common.seed, "seed for every random component")->capture_default_str();
  app->add_option("--threads", common.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  auto a = cmd.setup(*app, common);
  if (action) *action = std::move(a);
  return app;
}

int run(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const ShapeError& e) {
    std::cerr << "data error: incompatible shapes: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace semstyle::cli
