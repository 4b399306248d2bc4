#include <doctest.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "xdnp/codegen.hpp"

using namespace xdnp;

namespace {

Policy demo_policy() {
    Policy policy;
    policy.name = "Demo";
    Rule forward_rule;
    forward_rule.conditions.push_back(
        {Connector::None, Field::DstIp, Comparator::Eq, Ipv4{{10, 0, 0, 2}}, {}});
    forward_rule.conditions.push_back(
        {Connector::Or, Field::SrcIp, Comparator::Eq, Ipv4{{192, 168, 0, 1}}, {}});
    forward_rule.action = Forward{1};
    Rule drop_rule;
    drop_rule.conditions.push_back(
        {Connector::None, Field::SrcPort, Comparator::Eq, PortNumber{23}, {}});
    drop_rule.action = Drop{};
    policy.rules = {forward_rule, drop_rule};
    return policy;
}

CompiledPolicy compiled_demo() {
    const CompileResult result = compile(demo_policy());
    REQUIRE(result.ok());
    return *result.policy;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

bool braces_balanced(const std::string& text) {
    long depth = 0;
    for (char c : text) {
        if (c == '{') ++depth;
        if (c == '}') --depth;
        if (depth < 0) return false;
    }
    return depth == 0;
}

std::size_t total_clauses(const CompiledPolicy& cp) {
    std::size_t n = 0;
    for (const FlowEntry& entry : cp.entries) n += entry.predicate.any_of.size();
    return n;
}

const char* kDemoFlowJson = R"({
  "name": "Demo",
  "default": "normal",
  "entries": [
    {
      "priority": 2,
      "match": {
        "any_of": [
          {
            "all_of": [
              {
                "field": "dest_ip",
                "op": "eq",
                "value": "10.0.0.2"
              }
            ]
          },
          {
            "all_of": [
              {
                "field": "src_ip",
                "op": "eq",
                "value": "192.168.0.1"
              }
            ]
          }
        ]
      },
      "action": {
        "type": "forward",
        "port": 1
      }
    },
    {
      "priority": 1,
      "match": {
        "any_of": [
          {
            "all_of": [
              {
                "field": "src_prt",
                "op": "eq",
                "value": 23
              }
            ]
          }
        ]
      },
      "action": {
        "type": "drop"
      }
    }
  ]
}
)";

const char* kDemoPseudocode = R"(policy Demo
on packet(src_ip, dest_ip, src_prt, dest_prt):
  rule 0 clause 0 priority 2:
    when dest_ip = 10.0.0.2
    then forward out port 1
  rule 0 clause 1 priority 2:
    when src_ip = 192.168.0.1
    then forward out port 1
  rule 1 clause 0 priority 1:
    when src_prt = 23
    then drop
  otherwise:
    forward normally
end
)";

// minimal but complete template definition, array-of-lines fragments included
const char* kTinyTemplateJson = R"({
  "id": "tiny",
  "extension": ".tiny",
  "header": ["# {{class_name}}"],
  "branch": ["{{entry_index}}/{{clause_index}}@{{priority}}: {{predicate}} -> {{action}}"],
  "and_joiner": " & ",
  "field_exprs": {
    "src_ip": "s={{value}}",
    "dest_ip": "d={{value}}",
    "src_prt": "sp={{value}}",
    "dest_prt": "dp={{value}}"
  },
  "forward": "fwd {{port}}",
  "drop": "drop",
  "default_normal": ["*: normal"],
  "default_drop": ["*: drop"],
  "footer": ""
})";

}  // namespace

TEST_SUITE("codegen") {

TEST_CASE("flow table for the demo policy matches the golden document") {
    CHECK(emit_flow_table(compiled_demo()) == kDemoFlowJson);
}

TEST_CASE("flow table for an empty policy") {
    Policy policy;
    policy.name = "Empty";
    const CompileResult result = compile(policy);
    REQUIRE(result.ok());
    CHECK(emit_flow_table(*result.policy) ==
          "{\n  \"name\": \"Empty\",\n  \"default\": \"normal\",\n  \"entries\": []\n}\n");
}

TEST_CASE("default action is spelled in the document") {
    Policy policy;
    policy.name = "D";
    const CompileResult result = compile(policy, DefaultAction::Drop);
    REQUIRE(result.ok());
    CHECK(emit_flow_table(*result.policy).find("\"default\": \"drop\"") != std::string::npos);
}

TEST_CASE("flow table round-trips for random policies") {
    std::mt19937 rng(0xF10A);
    for (int i = 0; i < 400; ++i) {
        const Policy policy = testgen::random_policy(rng, 6, 5, /*pooled=*/false);
        const DefaultAction def = i % 2 ? DefaultAction::Drop : DefaultAction::NormalForwarding;
        const CompileResult result = compile(policy, def);
        REQUIRE(result.ok());
        const std::string json = emit_flow_table(*result.policy);
        const std::optional<CompiledPolicy> back = parse_flow_table(json);
        if (!back || !(*back == *result.policy)) {
            CAPTURE(json);
            REQUIRE(back.has_value());
            REQUIRE(*back == *result.policy);
        }
    }
}

TEST_CASE("parse_flow_table accepts the golden document") {
    const std::optional<CompiledPolicy> cp = parse_flow_table(kDemoFlowJson);
    REQUIRE(cp.has_value());
    CHECK(*cp == compiled_demo());
}

TEST_CASE("parse_flow_table rejects schema violations") {
    auto rejected = [](const std::string& text) { return !parse_flow_table(text).has_value(); };
    const std::string golden = kDemoFlowJson;
    auto with = [&](const std::string& from, const std::string& to) {
        std::string text = golden;
        const std::size_t pos = text.find(from);
        REQUIRE(pos != std::string::npos);
        return text.replace(pos, from.size(), to);
    };

    CHECK(rejected("not json"));
    CHECK(rejected("[]"));                       // root must be an object
    CHECK(rejected("{}"));                       // missing keys
    CHECK(rejected(with("\"name\"", "\"nam\"")));
    CHECK(rejected(with("\"default\": \"normal\"", "\"default\": \"flood\"")));
    CHECK(rejected(with("\"default\": \"normal\"", "\"default\": \"normal\", \"extra\": 1")));
    CHECK(rejected(with("\"entries\": [", "\"entries\": 3, \"x\": [")));
    CHECK(rejected(with("\"priority\": 2", "\"priority\": 0")));
    CHECK(rejected(with("\"priority\": 2", "\"priority\": 1")));   // not strictly decreasing
    CHECK(rejected(with("\"priority\": 2", "\"priority\": 2.5")));
    CHECK(rejected(with("\"op\": \"eq\"", "\"op\": \"ne\"")));
    CHECK(rejected(with("\"field\": \"dest_ip\"", "\"field\": \"dst_ip\"")));
    CHECK(rejected(with("\"value\": \"10.0.0.2\"", "\"value\": 2")));      // ip field, int value
    CHECK(rejected(with("\"value\": 23", "\"value\": \"23\"")));           // port field, string
    CHECK(rejected(with("\"value\": \"10.0.0.2\"", "\"value\": \"0.1.2.3\"")));
    CHECK(rejected(with("\"value\": \"10.0.0.2\"", "\"value\": \"10.0.0.01\"")));
    CHECK(rejected(with("\"value\": 23", "\"value\": 65536")));
    CHECK(rejected(with("\"value\": 23", "\"value\": -1")));
    CHECK(rejected(with("\"value\": 23", "\"value\": true")));
    CHECK(rejected(with("\"port\": 1", "\"port\": 0")));
    CHECK(rejected(with("\"port\": 1", "\"port\": 65536")));
    CHECK(rejected(with("\"type\": \"drop\"", "\"type\": \"drop\", \"port\": 1")));
    CHECK(rejected(with("\"type\": \"forward\",\n        \"port\": 1", "\"type\": \"forward\"")));
    CHECK(rejected(with("\"type\": \"drop\"", "\"type\": \"log\"")));
    CHECK(rejected(with("\"any_of\"", "\"one_of\"")));
    CHECK(rejected(with("\"all_of\"", "\"each_of\"")));
    CHECK(rejected(with("\"op\": \"eq\",\n                \"value\": 23",
                        "\"op\": \"eq\",\n                \"value\": 23,\n                \"z\": 0")));

    SUBCASE("empty clause lists") {
        CHECK(rejected(
            "{\"name\": \"X\", \"default\": \"normal\", \"entries\": [{\"priority\": 1, "
            "\"match\": {\"any_of\": []}, \"action\": {\"type\": \"drop\"}}]}"));
        CHECK(rejected(
            "{\"name\": \"X\", \"default\": \"normal\", \"entries\": [{\"priority\": 1, "
            "\"match\": {\"any_of\": [{\"all_of\": []}]}, \"action\": {\"type\": \"drop\"}}]}"));
    }
    SUBCASE("equal priorities") {
        const std::string twice =
            "{\"name\": \"X\", \"default\": \"normal\", \"entries\": ["
            "{\"priority\": 2, \"match\": {\"any_of\": [{\"all_of\": [{\"field\": \"src_prt\", "
            "\"op\": \"eq\", \"value\": 1}]}]}, \"action\": {\"type\": \"drop\"}},"
            "{\"priority\": 2, \"match\": {\"any_of\": [{\"all_of\": [{\"field\": \"src_prt\", "
            "\"op\": \"eq\", \"value\": 2}]}]}, \"action\": {\"type\": \"drop\"}}]}";
        CHECK(rejected(twice));
    }
}

TEST_CASE("floodlight module for the demo policy") {
    const TemplateRegistry registry = TemplateRegistry::with_builtins();
    const Template* tmpl = registry.find("floodlight");
    REQUIRE(tmpl != nullptr);
    CHECK(tmpl->extension == ".java");
    const std::string java = emit_controller_source(compiled_demo(), *tmpl);

    CHECK(java.find("public class Demo") != std::string::npos);
    CHECK(count_occurrences(java, "// rule") == 3);  // one branch per DNF clause
    CHECK(java.find("IPv4Address.of(\"10.0.0.2\")") != std::string::npos);
    CHECK(java.find("IPv4Address.of(\"192.168.0.1\")") != std::string::npos);
    CHECK(java.find("srcPort == 23") != std::string::npos);
    CHECK(java.find("OFPort.of(1), 2)") != std::string::npos);  // action carries its priority
    CHECK(java.find("return Command.CONTINUE;") != std::string::npos);
    CHECK(braces_balanced(java));

    const std::size_t lines = non_blank_line_count(java);
    CHECK(lines >= 100);
    CHECK(lines <= 300);
}

TEST_CASE("branch markers track clause count on random policies") {
    std::mt19937 rng(0xC0DE);
    const TemplateRegistry registry = TemplateRegistry::with_builtins();
    const Template* tmpl = registry.find("floodlight");
    REQUIRE(tmpl != nullptr);
    for (int i = 0; i < 60; ++i) {
        const Policy policy = testgen::random_policy(rng, 8, 6, /*pooled=*/true);
        const CompileResult result = compile(policy);
        REQUIRE(result.ok());
        const std::string java = emit_controller_source(*result.policy, *tmpl);
        CHECK(count_occurrences(java, "// rule") == total_clauses(*result.policy));
        CHECK(braces_balanced(java));
        CHECK(java.find("public class " + policy.name) != std::string::npos);
    }
}

TEST_CASE("codegen is deterministic") {
    const TemplateRegistry registry = TemplateRegistry::with_builtins();
    const Template* tmpl = registry.find("floodlight");
    REQUIRE(tmpl != nullptr);
    const CompiledPolicy cp = compiled_demo();
    CHECK(emit_controller_source(cp, *tmpl) == emit_controller_source(cp, *tmpl));
    CHECK(emit_flow_table(cp) == emit_flow_table(cp));
}

TEST_CASE("empty policy renders only the default branch") {
    Policy policy;
    policy.name = "Idle";
    const TemplateRegistry registry = TemplateRegistry::with_builtins();
    const Template* tmpl = registry.find("floodlight");
    REQUIRE(tmpl != nullptr);

    SUBCASE("normal default") {
        const CompileResult result = compile(policy);
        REQUIRE(result.ok());
        const std::string java = emit_controller_source(*result.policy, *tmpl);
        CHECK(count_occurrences(java, "// rule") == 0);
        CHECK(java.find("return Command.CONTINUE;") != std::string::npos);
        CHECK(braces_balanced(java));
    }
    SUBCASE("drop default") {
        const CompileResult result = compile(policy, DefaultAction::Drop);
        REQUIRE(result.ok());
        const std::string java = emit_controller_source(*result.policy, *tmpl);
        CHECK(java.find("installAndDrop") != std::string::npos);
    }
}

TEST_CASE("pseudocode template matches the golden rendering") {
    TemplateRegistry registry = TemplateRegistry::with_builtins();
    const auto failures = registry.load_directory(XDNP_TEMPLATE_DIR_SRC);
    CHECK(failures.empty());
    const Template* tmpl = registry.find("pseudocode");
    REQUIRE(tmpl != nullptr);
    CHECK(tmpl->extension == ".rules.txt");
    CHECK(emit_controller_source(compiled_demo(), *tmpl) == kDemoPseudocode);
}

TEST_CASE("template registry lookup and override") {
    TemplateRegistry registry = TemplateRegistry::with_builtins();
    REQUIRE(registry.find("floodlight") != nullptr);
    CHECK(registry.find("nope") == nullptr);
    const auto ids = registry.ids();
    CHECK(std::find(ids.begin(), ids.end(), "floodlight") != ids.end());

    Template replacement = *registry.find("floodlight");
    replacement.extension = ".kt";
    registry.add(replacement);
    CHECK(registry.find("floodlight")->extension == ".kt");
    CHECK(registry.ids().size() == ids.size());
}

TEST_CASE("load_directory reports missing directories") {
    TemplateRegistry registry = TemplateRegistry::with_builtins();
    const auto failures = registry.load_directory("/nonexistent/templates");
    REQUIRE(failures.size() == 1);
    CHECK(failures[0].find("not found") != std::string::npos);
}

TEST_CASE("load_directory keeps good templates next to broken files") {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / ("xdnp-tmpl-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    {
        std::ofstream good(dir / "tiny.json");
        good << kTinyTemplateJson;
        std::ofstream bad(dir / "broken.json");
        bad << "{ not json";
    }
    TemplateRegistry registry = TemplateRegistry::with_builtins();
    const auto failures = registry.load_directory(dir);
    fs::remove_all(dir);
    REQUIRE(failures.size() == 1);
    CHECK(failures[0].find("broken.json") != std::string::npos);
    REQUIRE(registry.find("tiny") != nullptr);
    CHECK(registry.find("tiny")->and_joiner == " & ");
}

TEST_CASE("single-file template definitions") {
    SUBCASE("array-of-lines fragments join with newlines") {
        const std::optional<Template> tmpl = parse_template_json(kTinyTemplateJson);
        REQUIRE(tmpl.has_value());
        CHECK(tmpl->header == "# {{class_name}}\n");
        CHECK(tmpl->branch ==
              "{{entry_index}}/{{clause_index}}@{{priority}}: {{predicate}} -> {{action}}\n");

        const std::string text = emit_controller_source(compiled_demo(), *tmpl);
        CHECK(text.find("# Demo\n") == 0);
        CHECK(text.find("0/0@2: d=10.0.0.2 -> fwd 1\n") != std::string::npos);
        CHECK(text.find("0/1@2: s=192.168.0.1 -> fwd 1\n") != std::string::npos);
        CHECK(text.find("1/0@1: sp=23 -> drop\n") != std::string::npos);
        CHECK(text.find("*: normal\n") != std::string::npos);
    }
    SUBCASE("and_joiner splices conjunctions") {
        const std::optional<Template> tmpl = parse_template_json(kTinyTemplateJson);
        REQUIRE(tmpl.has_value());
        Policy policy;
        policy.name = "J";
        Rule rule;
        rule.conditions.push_back(
            {Connector::None, Field::SrcPort, Comparator::Eq, PortNumber{1}, {}});
        rule.conditions.push_back(
            {Connector::And, Field::DstPort, Comparator::Eq, PortNumber{2}, {}});
        rule.action = Drop{};
        policy.rules = {rule};
        const CompileResult result = compile(policy);
        REQUIRE(result.ok());
        const std::string text = emit_controller_source(*result.policy, *tmpl);
        CHECK(text.find("sp=1 & dp=2 -> drop") != std::string::npos);
    }
    SUBCASE("malformed definitions are refused with a message") {
        std::string error;
        CHECK_FALSE(parse_template_json("[]", &error).has_value());
        CHECK_FALSE(error.empty());

        CHECK_FALSE(parse_template_json(R"({"branch": "x"})").has_value());  // no id
        CHECK_FALSE(parse_template_json(
            R"({"id": "t", "branch": "b", "forward": "f", "drop": "d",
                "field_exprs": {"src_ip": "s", "dest_ip": "d", "src_prt": "sp"}})")
                        .has_value());  // dest_prt missing
        error.clear();
        CHECK_FALSE(parse_template_json(
                        R"({"id": "t", "branch": "b", "forward": "f", "drop": "d", "mystery": 1,
                "field_exprs": {"src_ip": "s", "dest_ip": "d", "src_prt": "sp",
                                "dest_prt": "dp"}})",
                        &error)
                        .has_value());
        CHECK(error.find("mystery") != std::string::npos);
        CHECK_FALSE(parse_template_json(
                        R"({"id": "t", "branch": 7, "forward": "f", "drop": "d",
                "field_exprs": {"src_ip": "s", "dest_ip": "d", "src_prt": "sp",
                                "dest_prt": "dp"}})")
                        .has_value());  // fragment must be text
    }
}

TEST_CASE("size metrics") {
    SUBCASE("line ratio uses non-blank lines") {
        std::string input;
        for (int i = 0; i < 18; ++i) input += "line\n";
        std::string output;
        for (int i = 0; i < 147; ++i) output += "line\n";
        const SizeMetrics m = measure(input, output);
        CHECK(m.input_lines == 18);
        CHECK(m.output_lines == 147);
        CHECK(m.line_ratio == doctest::Approx(147.0 / 18.0));
        CHECK(m.byte_ratio == doctest::Approx(147.0 / 18.0));
    }
    SUBCASE("blank lines do not count") {
        const SizeMetrics m = measure("a\n\n  \nb\n", "x\n");
        CHECK(m.input_lines == 2);
        CHECK(m.output_lines == 1);
        CHECK(m.input_bytes == 8);
        CHECK(m.output_bytes == 2);
    }
    SUBCASE("identical texts have ratio one") {
        const SizeMetrics m = measure("a\nb\n", "a\nb\n");
        CHECK(m.line_ratio == doctest::Approx(1.0));
        CHECK(m.byte_ratio == doctest::Approx(1.0));
    }
    SUBCASE("empty input yields zero ratios") {
        const SizeMetrics m = measure("", "a\n");
        CHECK(m.input_lines == 0);
        CHECK(m.line_ratio == 0.0);
        CHECK(m.byte_ratio == 0.0);
    }
}

TEST_CASE("non_blank_line_count") {
    CHECK(non_blank_line_count("") == 0);
    CHECK(non_blank_line_count("\n\n") == 0);
    CHECK(non_blank_line_count(" \t\n") == 0);
    CHECK(non_blank_line_count("a") == 1);
    CHECK(non_blank_line_count("a\nb\n") == 2);
    CHECK(non_blank_line_count("a\n \nb") == 2);
}

TEST_CASE("the demo policy source stays small") {
    const std::string source = slurp(XDNP_FIXTURE_DIR "/demo.xml");
    CHECK(non_blank_line_count(source) <= 20);
}

TEST_CASE("controller output grows the policy source by design") {
    const std::string source = slurp(XDNP_FIXTURE_DIR "/demo.xml");
    const TemplateRegistry registry = TemplateRegistry::with_builtins();
    const Template* tmpl = registry.find("floodlight");
    REQUIRE(tmpl != nullptr);
    const std::string java = emit_controller_source(compiled_demo(), *tmpl);
    const SizeMetrics m = measure(source, java);
    CHECK(m.line_ratio >= 4.0);
}

}  // TEST_SUITE
