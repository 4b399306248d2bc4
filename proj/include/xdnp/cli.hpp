#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "xdnp/analyzer.hpp"
#include "xdnp/codegen.hpp"

namespace xdnp {

// Exit codes, disjoint by failure class.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDiagnostics = 1;  // syntax/semantic errors, bad packet spec
inline constexpr int kExitIo = 2;
inline constexpr int kExitUnknownTemplate = 3;
inline constexpr int kExitBadHostCount = 4;

struct CliConfig {
    bool fail_fast = false;
    DefaultAction default_action = DefaultAction::NormalForwarding;
    std::optional<std::filesystem::path> template_dir;
    std::optional<std::filesystem::path> output_path;
};

enum class EmitKind { Controller, FlowTable };

// Default output file name: policy name + the template's extension for
// controller output, policy name + ".flows.json" for flow tables.
std::string default_output_name(const std::string& policy_name, EmitKind emit,
                                const Template* tmpl);

int cmd_check(const std::filesystem::path& policy_path, const CliConfig& config,
              std::ostream& out, std::ostream& err);

int cmd_compile(const std::filesystem::path& policy_path, EmitKind emit,
                const std::string& template_id, const CliConfig& config,
                std::ostream& out, std::ostream& err);

int cmd_eval(const std::filesystem::path& policy_path, const std::string& packet_spec,
             const CliConfig& config, std::ostream& out, std::ostream& err);

int cmd_simulate(const std::filesystem::path& policy_path, std::size_t hosts,
                 const CliConfig& config, std::ostream& out, std::ostream& err);

int cmd_stats(const std::filesystem::path& policy_path, const CliConfig& config,
              std::ostream& out, std::ostream& err);

// Full argument parsing + dispatch for the xdnp binary.
int run_cli(int argc, const char* const* argv);

}  // namespace xdnp
