#include "xdnp/codegen.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace xdnp {

Template builtin_floodlight_template();  // templates_builtin.cpp

namespace {

using ordered_json = nlohmann::ordered_json;

void replace_all(std::string& text, std::string_view key, std::string_view value) {
    const std::string needle = "{{" + std::string(key) + "}}";
    std::size_t at = 0;
    while ((at = text.find(needle, at)) != std::string::npos) {
        text.replace(at, needle.size(), value);
        at += value.size();
    }
}

std::string render(std::string fragment,
                   std::initializer_list<std::pair<std::string_view, std::string>> subs) {
    for (const auto& [key, value] : subs) replace_all(fragment, key, value);
    return fragment;
}

std::string_view default_action_name(DefaultAction action) {
    return action == DefaultAction::NormalForwarding ? "normal" : "drop";
}

// ---- flow-table JSON ----

ordered_json value_to_json(const Value& value) {
    if (const auto* ip = std::get_if<Ipv4>(&value)) return ip->to_string();
    return std::get<PortNumber>(value).value;
}

// object holds exactly `keys`, no more, no fewer
bool has_exact_keys(const ordered_json& obj, std::initializer_list<std::string_view> keys) {
    if (!obj.is_object() || obj.size() != keys.size()) return false;
    return std::all_of(keys.begin(), keys.end(),
                       [&](std::string_view k) { return obj.contains(k); });
}

bool parse_value(const ordered_json& j, Field field, Value& out) {
    if (j.is_string()) {
        if (field_kind(field) != ValueKind::Ip) return false;
        std::optional<Ipv4> ip = Ipv4::parse(j.get<std::string>());
        if (!ip) return false;
        out = *ip;
        return true;
    }
    if (j.is_number_integer()) {
        if (field_kind(field) != ValueKind::Port) return false;
        const auto n = j.get<std::int64_t>();
        if (n < 0 || n > 65535) return false;
        out = PortNumber{static_cast<std::uint16_t>(n)};
        return true;
    }
    return false;
}

bool parse_atom(const ordered_json& j, AtomicMatch& out) {
    if (!has_exact_keys(j, {"field", "op", "value"})) return false;
    if (!j["field"].is_string() || !j["op"].is_string()) return false;
    if (j["op"].get<std::string>() != "eq") return false;
    std::optional<Field> field = field_from_keyword(j["field"].get<std::string>());
    if (!field) return false;
    out.field = *field;
    return parse_value(j["value"], *field, out.value);
}

bool parse_action(const ordered_json& j, Action& out) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) return false;
    const std::string type = j["type"].get<std::string>();
    if (type == "drop") {
        if (!has_exact_keys(j, {"type"})) return false;
        out = Drop{};
        return true;
    }
    if (type == "forward") {
        if (!has_exact_keys(j, {"type", "port"})) return false;
        if (!j["port"].is_number_integer()) return false;
        const auto port = j["port"].get<std::int64_t>();
        if (port < 1 || port > 65535) return false;
        out = Forward{static_cast<std::uint16_t>(port)};
        return true;
    }
    return false;
}

bool parse_entry(const ordered_json& j, FlowEntry& out) {
    if (!has_exact_keys(j, {"priority", "match", "action"})) return false;
    if (!j["priority"].is_number_integer()) return false;
    const auto priority = j["priority"].get<std::int64_t>();
    if (priority < 1 || priority > std::numeric_limits<int>::max()) return false;
    out.priority = static_cast<int>(priority);

    const ordered_json& match = j["match"];
    if (!has_exact_keys(match, {"any_of"}) || !match["any_of"].is_array() ||
        match["any_of"].empty()) {
        return false;
    }
    for (const ordered_json& clause_json : match["any_of"]) {
        if (!has_exact_keys(clause_json, {"all_of"}) || !clause_json["all_of"].is_array() ||
            clause_json["all_of"].empty()) {
            return false;
        }
        Clause clause;
        for (const ordered_json& atom_json : clause_json["all_of"]) {
            AtomicMatch atom;
            if (!parse_atom(atom_json, atom)) return false;
            clause.all_of.push_back(atom);
        }
        out.predicate.any_of.push_back(std::move(clause));
    }
    return parse_action(j["action"], out.action);
}

// ---- template JSON ----

// A fragment is a JSON string, or an array of line strings joined with
// newlines (plus a trailing one) for readability.
bool read_fragment(const ordered_json& j, std::string& out) {
    if (j.is_string()) {
        out = j.get<std::string>();
        return true;
    }
    if (j.is_array()) {
        std::string text;
        for (const ordered_json& line : j) {
            if (!line.is_string()) return false;
            text += line.get<std::string>();
            text += '\n';
        }
        out = std::move(text);
        return true;
    }
    return false;
}

}  // namespace

TemplateRegistry TemplateRegistry::with_builtins() {
    TemplateRegistry registry;
    registry.add(builtin_floodlight_template());
    return registry;
}

void TemplateRegistry::add(Template tmpl) {
    templates_.insert_or_assign(tmpl.id, std::move(tmpl));
}

const Template* TemplateRegistry::find(std::string_view id) const {
    const auto it = templates_.find(id);
    return it == templates_.end() ? nullptr : &it->second;
}

std::vector<std::string> TemplateRegistry::ids() const {
    std::vector<std::string> out;
    out.reserve(templates_.size());
    for (const auto& [id, tmpl] : templates_) out.push_back(id);
    return out;
}

std::vector<std::string> TemplateRegistry::load_directory(const std::filesystem::path& dir) {
    std::vector<std::string> failures;
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        failures.push_back("template directory not found: " + dir.string());
        return failures;
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        if (!in) {
            failures.push_back(file.string() + ": cannot read");
            continue;
        }
        std::string error;
        std::optional<Template> tmpl = parse_template_json(buffer.str(), &error);
        if (!tmpl) {
            failures.push_back(file.string() + ": " + error);
            continue;
        }
        add(std::move(*tmpl));
    }
    return failures;
}

std::optional<Template> parse_template_json(std::string_view text, std::string* error) {
    const auto fail = [&](std::string message) -> std::optional<Template> {
        if (error) *error = std::move(message);
        return std::nullopt;
    };

    const ordered_json doc = ordered_json::parse(text, nullptr, false);
    if (doc.is_discarded()) return fail("not valid JSON");
    if (!doc.is_object()) return fail("template must be a JSON object");

    static const std::map<std::string, int, std::less<>> kKnown{
        {"id", 0},          {"extension", 0},      {"header", 0},
        {"branch", 0},      {"and_joiner", 0},     {"field_exprs", 0},
        {"forward", 0},     {"drop", 0},           {"default_normal", 0},
        {"default_drop", 0}, {"footer", 0}};
    for (const auto& [key, unused] : doc.items()) {
        if (!kKnown.contains(key)) return fail("unknown key '" + key + "'");
    }
    for (std::string_view required : {"id", "branch", "field_exprs", "forward", "drop"}) {
        if (!doc.contains(required)) {
            return fail("missing required key '" + std::string(required) + "'");
        }
    }

    Template tmpl;
    if (!doc["id"].is_string()) return fail("'id' must be a string");
    tmpl.id = doc["id"].get<std::string>();
    if (tmpl.id.empty()) return fail("'id' must be non-empty");

    const auto read_optional = [&](std::string_view key, std::string& out) {
        if (!doc.contains(key)) return true;
        return read_fragment(doc[std::string(key)], out);
    };
    if (doc.contains("extension")) {
        if (!doc["extension"].is_string()) return fail("'extension' must be a string");
        tmpl.extension = doc["extension"].get<std::string>();
    }
    if (doc.contains("and_joiner")) {
        if (!doc["and_joiner"].is_string()) return fail("'and_joiner' must be a string");
        tmpl.and_joiner = doc["and_joiner"].get<std::string>();
    }
    if (!read_optional("header", tmpl.header)) return fail("'header' must be a string or string array");
    if (!read_fragment(doc["branch"], tmpl.branch)) return fail("'branch' must be a string or string array");
    if (!read_fragment(doc["forward"], tmpl.forward)) return fail("'forward' must be a string or string array");
    if (!read_fragment(doc["drop"], tmpl.drop)) return fail("'drop' must be a string or string array");
    if (!read_optional("default_normal", tmpl.default_normal)) {
        return fail("'default_normal' must be a string or string array");
    }
    if (!read_optional("default_drop", tmpl.default_drop)) {
        return fail("'default_drop' must be a string or string array");
    }
    if (!read_optional("footer", tmpl.footer)) return fail("'footer' must be a string or string array");

    const ordered_json& exprs = doc["field_exprs"];
    if (!exprs.is_object()) return fail("'field_exprs' must be an object");
    for (const auto& [key, value] : exprs.items()) {
        std::optional<Field> field = field_from_keyword(key);
        if (!field) return fail("'field_exprs' has unknown field '" + key + "'");
        std::string fragment;
        if (!read_fragment(value, fragment)) {
            return fail("'field_exprs." + key + "' must be a string or string array");
        }
        tmpl.field_exprs[*field] = std::move(fragment);
    }
    for (Field field : {Field::SrcIp, Field::DstIp, Field::SrcPort, Field::DstPort}) {
        if (!tmpl.field_exprs.contains(field)) {
            return fail("'field_exprs' is missing '" + std::string(field_keyword(field)) + "'");
        }
    }
    return tmpl;
}

std::string emit_controller_source(const CompiledPolicy& cp, const Template& tmpl) {
    std::string out = render(tmpl.header, {{"class_name", cp.name}});
    for (std::size_t ei = 0; ei < cp.entries.size(); ++ei) {
        const FlowEntry& entry = cp.entries[ei];
        const std::string action_text =
            std::holds_alternative<Forward>(entry.action)
                ? render(tmpl.forward,
                         {{"port", std::to_string(std::get<Forward>(entry.action).port)}})
                : tmpl.drop;
        for (std::size_t ci = 0; ci < entry.predicate.any_of.size(); ++ci) {
            const Clause& clause = entry.predicate.any_of[ci];
            std::string predicate;
            for (std::size_t ai = 0; ai < clause.all_of.size(); ++ai) {
                if (ai > 0) predicate += tmpl.and_joiner;
                predicate += render(tmpl.field_exprs.at(clause.all_of[ai].field),
                                    {{"value", value_to_string(clause.all_of[ai].value)}});
            }
            out += render(tmpl.branch, {{"predicate", predicate},
                                        {"action", action_text},
                                        {"priority", std::to_string(entry.priority)},
                                        {"entry_index", std::to_string(ei)},
                                        {"clause_index", std::to_string(ci)},
                                        {"class_name", cp.name}});
        }
    }
    out += render(cp.default_action == DefaultAction::NormalForwarding ? tmpl.default_normal
                                                                       : tmpl.default_drop,
                  {{"class_name", cp.name}});
    out += render(tmpl.footer, {{"class_name", cp.name}});
    return out;
}

std::string emit_flow_table(const CompiledPolicy& cp) {
    ordered_json doc;
    doc["name"] = cp.name;
    doc["default"] = std::string(default_action_name(cp.default_action));
    doc["entries"] = ordered_json::array();
    for (const FlowEntry& entry : cp.entries) {
        ordered_json entry_json;
        entry_json["priority"] = entry.priority;
        ordered_json any_of = ordered_json::array();
        for (const Clause& clause : entry.predicate.any_of) {
            ordered_json all_of = ordered_json::array();
            for (const AtomicMatch& atom : clause.all_of) {
                ordered_json atom_json;
                atom_json["field"] = std::string(field_keyword(atom.field));
                atom_json["op"] = "eq";
                atom_json["value"] = value_to_json(atom.value);
                all_of.push_back(std::move(atom_json));
            }
            any_of.push_back(ordered_json{{"all_of", std::move(all_of)}});
        }
        entry_json["match"] = ordered_json{{"any_of", std::move(any_of)}};
        if (std::holds_alternative<Forward>(entry.action)) {
            entry_json["action"] = ordered_json{{"type", "forward"},
                                                {"port", std::get<Forward>(entry.action).port}};
        } else {
            entry_json["action"] = ordered_json{{"type", "drop"}};
        }
        doc["entries"].push_back(std::move(entry_json));
    }
    return doc.dump(2) + "\n";
}

std::optional<CompiledPolicy> parse_flow_table(std::string_view json_text) {
    const ordered_json doc = ordered_json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !has_exact_keys(doc, {"name", "default", "entries"})) {
        return std::nullopt;
    }
    if (!doc["name"].is_string() || !doc["default"].is_string() || !doc["entries"].is_array()) {
        return std::nullopt;
    }

    CompiledPolicy cp;
    cp.name = doc["name"].get<std::string>();
    const std::string default_text = doc["default"].get<std::string>();
    if (default_text == "normal") {
        cp.default_action = DefaultAction::NormalForwarding;
    } else if (default_text == "drop") {
        cp.default_action = DefaultAction::Drop;
    } else {
        return std::nullopt;
    }

    int previous_priority = std::numeric_limits<int>::max();
    for (const ordered_json& entry_json : doc["entries"]) {
        FlowEntry entry;
        if (!parse_entry(entry_json, entry)) return std::nullopt;
        if (entry.priority >= previous_priority) return std::nullopt;  // strictly decreasing
        previous_priority = entry.priority;
        cp.entries.push_back(std::move(entry));
    }
    return cp;
}

std::size_t non_blank_line_count(std::string_view text) {
    std::size_t count = 0;
    bool line_has_ink = false;
    for (const char c : text) {
        if (c == '\n') {
            count += line_has_ink;
            line_has_ink = false;
        } else if (c != ' ' && c != '\t' && c != '\r') {
            line_has_ink = true;
        }
    }
    return count + line_has_ink;  // final line may lack a newline
}

SizeMetrics measure(std::string_view input_source, std::string_view output_source) {
    SizeMetrics m;
    m.input_lines = non_blank_line_count(input_source);
    m.input_bytes = input_source.size();
    m.output_lines = non_blank_line_count(output_source);
    m.output_bytes = output_source.size();
    if (m.input_lines > 0) {
        m.line_ratio = static_cast<double>(m.output_lines) / static_cast<double>(m.input_lines);
    }
    if (m.input_bytes > 0) {
        m.byte_ratio = static_cast<double>(m.output_bytes) / static_cast<double>(m.input_bytes);
    }
    return m;
}

}  // namespace xdnp
