#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xdnp/analyzer.hpp"

namespace xdnp {

// A controller-source template. Fragments carry {{placeholders}}:
//   header/footer          {{class_name}}
//   branch (one per clause) {{predicate}} {{action}} {{priority}}
//                           {{entry_index}} {{clause_index}}
//   forward                {{port}}
//   field_exprs[field]     {{value}}
// Rendering an entry instantiates `branch` once per DNF clause, in priority
// order; the trailing default fragment encodes the policy's default action.
struct Template {
    std::string id;
    std::string extension = ".txt";
    std::string header;
    std::string branch;
    std::string and_joiner = " && ";
    std::map<Field, std::string> field_exprs;
    std::string forward;
    std::string drop;
    std::string default_normal;
    std::string default_drop;
    std::string footer;
};

class TemplateRegistry {
public:
    // Registry holding the built-in "floodlight" template.
    static TemplateRegistry with_builtins();

    void add(Template tmpl);
    const Template* find(std::string_view id) const;
    std::vector<std::string> ids() const;

    // Loads every *.json template file in `dir`; files loaded later (and
    // directory templates generally) override earlier entries with the same
    // id. Returns one message per file that failed to load.
    std::vector<std::string> load_directory(const std::filesystem::path& dir);

private:
    std::map<std::string, Template, std::less<>> templates_;
};

// Parses a single template definition (JSON object). Returns nullopt and
// fills `error` on malformed input.
std::optional<Template> parse_template_json(std::string_view text, std::string* error = nullptr);

// Deterministic controller-module source text for a compiled policy.
std::string emit_controller_source(const CompiledPolicy& cp, const Template& tmpl);

// Neutral flow-rule interchange document; lossless (see parse_flow_table).
std::string emit_flow_table(const CompiledPolicy& cp);

// Inverse of emit_flow_table. Returns nullopt on any schema violation.
std::optional<CompiledPolicy> parse_flow_table(std::string_view json_text);

struct SizeMetrics {
    std::size_t input_lines = 0;   // non-blank lines
    std::size_t input_bytes = 0;   // UTF-8 length
    std::size_t output_lines = 0;
    std::size_t output_bytes = 0;
    double line_ratio = 0.0;  // output/input; 0 when the input is empty
    double byte_ratio = 0.0;
};

SizeMetrics measure(std::string_view input_source, std::string_view output_source);

// Lines with at least one non-whitespace character.
std::size_t non_blank_line_count(std::string_view text);

}  // namespace xdnp
