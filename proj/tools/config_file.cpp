#include "config_file.hpp"

#include <filesystem>

namespace potd::cli {

namespace {

CLI::Option* find_option(CLI::App& app, const std::string& name) {
  for (CLI::Option* option : app.get_options()) {
    for (const auto& long_name : option->get_lnames()) {
      if (long_name == name) return option;
    }
  }
  return nullptr;
}

}  // namespace

void apply_config_overrides(CLI::App& app, CLI::App* command, const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw CLI::FileError::Missing(path);
  }
  const auto items = CLI::ConfigTOML().from_file(path);
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty()) {
      const bool matches = command != nullptr && item.parents.size() == 1 &&
                           item.parents.front() == command->get_name();
      if (!matches) continue;
    }
    CLI::Option* option = command != nullptr ? find_option(*command, item.name) : nullptr;
    if (option == nullptr) option = find_option(app, item.name);
    if (option == nullptr || option->get_lnames().front() == "config") {
      throw CLI::ConfigError::Extras("unknown config key '" + item.name + "'");
    }
    option->clear();
    for (const auto& value : item.inputs) option->add_result(value);
    option->run_callback();
  }
}

}  // namespace potd::cli
