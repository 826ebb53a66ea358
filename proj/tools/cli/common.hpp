// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semstyle/trainer.hpp"

namespace semstyle::cli {

// Options shared by every subcommand.
struct Common {
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct Command {
  std::string name;
  std::string summary;
  // Declares options on `app` and returns the action run after parsing.
  std::function<std::function<int()>(CLI::App& app, Common& common)> setup;
};

const std::vector<Command>& commands();

// Builds the parser of one subcommand with the shared options; `action`
// receives the function to run after parsing.
std::unique_ptr<CLI::App> make_app(const Command& cmd, Common& common, std::function<int()>* action = nullptr);

// Full command line to exit code: 0 ok, 1 usage, 2 data, 3 numeric.
int run(int argc, char** argv);

// Training flags named after the TrainConfig fields with dashes.
void add_train_options(CLI::App& app, trainer::TrainConfig& cfg, std::string& mode);
// Copies the shared seed and thread count and the parsed mode into cfg.
void finish_train_config(trainer::TrainConfig& cfg, const std::string& mode, const Common& common);

std::vector<std::vector<std::string>> read_sentences(const std::string& path);
std::vector<std::string> read_lines(const std::string& path);  // "-" reads stdin
void write_text(const std::string& path, const std::string& content);
std::string fixed(double v, int digits = 6);

// Per-epoch rows on stdout.
trainer::EpochCallback epoch_printer();

}  // namespace semstyle::cli
