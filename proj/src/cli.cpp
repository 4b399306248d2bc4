#include "xdnp/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "xdnp/engine.hpp"
#include "xdnp/netsim.hpp"
#include "xdnp/parser.hpp"

namespace xdnp {

namespace {

std::optional<std::string> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return buffer.str();
}

void print_diagnostics(const std::vector<Diagnostic>& diags,
                       const std::filesystem::path& path, std::ostream& err) {
    for (const Diagnostic& diag : diags) {
        err << format_diagnostic(diag, path.string()) << '\n';
    }
}

// parse + validate + DNF compile; prints diagnostics and fills exit_code on
// failure
std::optional<CompiledPolicy> load_compiled(const std::filesystem::path& path,
                                            const CliConfig& config, std::ostream& err,
                                            int& exit_code) {
    LoadResult loaded = parse_file(path, config.fail_fast);
    if (loaded.io_error) {
        err << "error: " << *loaded.io_error << '\n';
        exit_code = kExitIo;
        return std::nullopt;
    }
    print_diagnostics(loaded.diagnostics, path, err);
    if (!loaded.policy) {
        exit_code = kExitDiagnostics;
        return std::nullopt;
    }
    CompileResult compiled = compile(*loaded.policy, config.default_action);
    print_diagnostics(compiled.diagnostics, path, err);  // clause warnings
    if (!compiled.policy) {
        exit_code = kExitDiagnostics;
        return std::nullopt;
    }
    return std::move(compiled.policy);
}

// built-ins plus the template directory (flag, overridden by
// XDNP_TEMPLATE_DIR); unloadable files degrade to warnings
TemplateRegistry make_registry(const CliConfig& config, std::ostream& err) {
    TemplateRegistry registry = TemplateRegistry::with_builtins();
    std::optional<std::filesystem::path> dir = config.template_dir;
    if (const char* env = std::getenv("XDNP_TEMPLATE_DIR"); env != nullptr && *env != '\0') {
        dir = std::filesystem::path(env);
    }
    if (dir) {
        for (const std::string& failure : registry.load_directory(*dir)) {
            err << "warning: " << failure << '\n';
        }
    }
    return registry;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += sep;
        out += items[i];
    }
    return out;
}

}  // namespace

std::string default_output_name(const std::string& policy_name, EmitKind emit,
                                const Template* tmpl) {
    if (emit == EmitKind::FlowTable) return policy_name + ".flows.json";
    return policy_name + (tmpl != nullptr ? tmpl->extension : ".txt");
}

int cmd_check(const std::filesystem::path& policy_path, const CliConfig& config,
              std::ostream& out, std::ostream& err) {
    int exit_code = kExitOk;
    if (!load_compiled(policy_path, config, err, exit_code)) return exit_code;
    out << "OK\n";
    return kExitOk;
}

int cmd_compile(const std::filesystem::path& policy_path, EmitKind emit,
                const std::string& template_id, const CliConfig& config,
                std::ostream& out, std::ostream& err) {
    int exit_code = kExitOk;
    const std::optional<CompiledPolicy> compiled =
        load_compiled(policy_path, config, err, exit_code);
    if (!compiled) return exit_code;

    const Template* tmpl = nullptr;
    TemplateRegistry registry = make_registry(config, err);
    if (emit == EmitKind::Controller) {
        tmpl = registry.find(template_id);
        if (tmpl == nullptr) {
            err << "error: unknown template '" << template_id
                << "' (available: " << join(registry.ids(), ", ") << ")\n";
            return kExitUnknownTemplate;
        }
    }

    const std::string output = emit == EmitKind::Controller
                                   ? emit_controller_source(*compiled, *tmpl)
                                   : emit_flow_table(*compiled);
    const std::filesystem::path out_path =
        config.output_path.value_or(default_output_name(compiled->name, emit, tmpl));
    {
        std::ofstream file(out_path, std::ios::binary);
        file << output;
        file.flush();
        if (!file) {
            err << "error: cannot write file: " << out_path.string() << '\n';
            return kExitIo;
        }
    }

    const std::optional<std::string> input = slurp(policy_path);
    const SizeMetrics metrics = measure(input.value_or(""), output);
    out << "wrote " << out_path.string() << '\n';
    out << "input:  " << metrics.input_lines << " lines, " << metrics.input_bytes << " bytes\n";
    out << "output: " << metrics.output_lines << " lines, " << metrics.output_bytes
        << " bytes\n";
    out << std::fixed << std::setprecision(2);
    out << "ratio:  " << metrics.line_ratio << "x lines, " << metrics.byte_ratio
        << "x bytes\n";
    return kExitOk;
}

int cmd_eval(const std::filesystem::path& policy_path, const std::string& packet_spec,
             const CliConfig& config, std::ostream& out, std::ostream& err) {
    int exit_code = kExitOk;
    const std::optional<CompiledPolicy> compiled =
        load_compiled(policy_path, config, err, exit_code);
    if (!compiled) return exit_code;

    std::string packet_error;
    const std::optional<PacketHeader> packet = parse_packet(packet_spec, &packet_error);
    if (!packet) {
        err << "error: bad packet spec: " << packet_error << '\n';
        return kExitDiagnostics;
    }

    const MatchResult result = evaluate(*compiled, *packet);
    if (result.is_default()) {
        out << (std::holds_alternative<Drop>(result.action) ? "default:drop"
                                                            : "default:normal")
            << '\n';
        return kExitOk;
    }
    if (const auto* forward = std::get_if<Forward>(&result.action)) {
        out << "forward:" << forward->port;
    } else {
        out << "drop";
    }
    out << " entry=" << *result.entry_index << " clause=" << *result.clause_index << '\n';
    return kExitOk;
}

int cmd_simulate(const std::filesystem::path& policy_path, std::size_t hosts,
                 const CliConfig& config, std::ostream& out, std::ostream& err) {
    if (hosts < 2 || hosts > 254) {
        err << "error: host count must be between 2 and 254\n";
        return kExitBadHostCount;
    }
    int exit_code = kExitOk;
    const std::optional<CompiledPolicy> compiled =
        load_compiled(policy_path, config, err, exit_code);
    if (!compiled) return exit_code;

    const Topology topo = Topology::single(hosts);
    SwitchState state;
    const PingReport report = pingall(topo, *compiled, state);
    out << render_matrix(topo, report);
    out << std::fixed << std::setprecision(2);
    out << "pingall packet loss (request delivery): " << report.request_loss_pct << "%\n";
    out << "round-trip loss: " << report.roundtrip_loss_pct << "%\n";
    out << "switch stats: packet_ins=" << state.stats.packet_ins
        << " table_hits=" << state.stats.table_hits << " installs=" << state.stats.installs
        << " packets_total=" << state.stats.packets_total << '\n';
    return kExitOk;
}

int cmd_stats(const std::filesystem::path& policy_path, const CliConfig& config,
              std::ostream& out, std::ostream& err) {
    int exit_code = kExitOk;
    const std::optional<CompiledPolicy> compiled =
        load_compiled(policy_path, config, err, exit_code);
    if (!compiled) return exit_code;

    std::size_t clauses = 0;
    std::size_t atoms = 0;
    for (const FlowEntry& entry : compiled->entries) {
        clauses += entry.predicate.any_of.size();
        for (const Clause& clause : entry.predicate.any_of) atoms += clause.all_of.size();
    }
    out << "policy: " << compiled->name << '\n';
    out << "flow entries: " << compiled->entries.size() << '\n';
    out << "dnf clauses: " << clauses << '\n';
    out << "atoms: " << atoms << '\n';
    out << "default: "
        << (compiled->default_action == DefaultAction::Drop ? "drop" : "normal") << '\n';
    return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"XDNP: XML-defined network policy compiler and switch simulator"};
    app.require_subcommand(1);

    std::string file;
    CliConfig config;
    bool fail_fast = false;
    std::string default_action = "normal";
    std::string template_dir;
    std::string out_path;

    const auto add_common = [&](CLI::App* cmd, bool with_default) {
        cmd->add_option("file", file, "policy document")->required();
        cmd->add_flag("--fail-fast", fail_fast, "stop at the first diagnostic");
        if (with_default) {
            cmd->add_option("--default", default_action,
                            "action for unmatched packets (normal|drop)")
                ->check(CLI::IsMember({"normal", "drop"}));
        }
    };

    CLI::App* check = app.add_subcommand("check", "parse and validate a policy");
    add_common(check, false);

    CLI::App* compile_cmd =
        app.add_subcommand("compile", "emit controller source or a flow table");
    add_common(compile_cmd, true);
    std::string emit = "controller";
    std::string template_id = "floodlight";
    compile_cmd->add_option("--emit", emit, "output kind (controller|flowtable)")
        ->check(CLI::IsMember({"controller", "flowtable"}));
    compile_cmd->add_option("--template", template_id, "controller template id");
    compile_cmd->add_option("--template-dir", template_dir,
                            "directory of extra template *.json files");
    compile_cmd->add_option("--out", out_path, "output file path");

    CLI::App* eval = app.add_subcommand("eval", "evaluate one packet against a policy");
    add_common(eval, true);
    std::string packet_spec;
    eval->add_option("--packet", packet_spec,
                     "packet literal src=IPv4,dst=IPv4,sport=INT,dport=INT")
        ->required();

    CLI::App* simulate =
        app.add_subcommand("simulate", "pingall over a single switch with N hosts");
    add_common(simulate, true);
    long long hosts = 3;
    simulate->add_option("--hosts", hosts, "host count (default 3)");

    CLI::App* stats = app.add_subcommand("stats", "print compiled policy counters");
    add_common(stats, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);  // usage errors exit >= 100; --help exits 0
    }

    config.fail_fast = fail_fast;
    config.default_action = default_action == "drop" ? DefaultAction::Drop
                                                     : DefaultAction::NormalForwarding;
    if (!template_dir.empty()) config.template_dir = template_dir;
    if (!out_path.empty()) config.output_path = out_path;

    if (app.got_subcommand(check)) {
        return cmd_check(file, config, std::cout, std::cerr);
    }
    if (app.got_subcommand(compile_cmd)) {
        const EmitKind kind = emit == "flowtable" ? EmitKind::FlowTable : EmitKind::Controller;
        return cmd_compile(file, kind, template_id, config, std::cout, std::cerr);
    }
    if (app.got_subcommand(eval)) {
        return cmd_eval(file, packet_spec, config, std::cout, std::cerr);
    }
    if (app.got_subcommand(simulate)) {
        if (hosts < 2 || hosts > 254) {
            std::cerr << "error: host count must be between 2 and 254\n";
            return kExitBadHostCount;
        }
        return cmd_simulate(file, static_cast<std::size_t>(hosts), config, std::cout,
                            std::cerr);
    }
    return cmd_stats(file, config, std::cout, std::cerr);
}

}  // namespace xdnp
