#include "lcpbridge/assets.hpp"
#include "lcpbridge/error.hpp"
#include "lcpbridge/llm.hpp"
#include "lcpbridge/plantuml.hpp"

namespace lcpbridge::llm {

namespace {

std::string asset(const std::string& path) {
    const auto text = embedded_asset(path);
    if (!text) throw std::logic_error("missing embedded asset " + path);
    return std::string(*text);
}

std::string replace_all(std::string text, std::string_view key, std::string_view value) {
    for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
        text.replace(pos, key.size(), value);
    }
    return text;
}

std::string trim_trailing(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
    return s;
}

}  // namespace

PromptContext prompt_context(std::string_view platform_id, const orchestrator::CapabilityMatrix& registry) {
    const auto& platform = registry.platform(platform_id);
    const auto specific = embedded_asset("prompts/" + platform.id + ".txt");
    return {platform.id, trim_trailing(std::string(specific ? *specific : asset("prompts/generic.txt"))), ""};
}

std::string build_prompt(const PromptContext& context, const pivot::DomainModel* partial,
                         const orchestrator::CapabilityMatrix& registry) {
    const auto& platform = registry.platform(context.platform_id);
    std::string out = trim_trailing(replace_all(asset("prompts/base.txt"), "{{platform}}", platform.name)) + "\n\n";
    if (!context.syntax_description.empty()) out += trim_trailing(context.syntax_description) + "\n\n";
    if (!context.extra_instructions.empty()) out += trim_trailing(context.extra_instructions) + "\n\n";
    if (partial) {
        const auto block = trim_trailing(plantuml::emit_plantuml(*partial));
        out += trim_trailing(replace_all(asset("prompts/partial.txt"), "{{partial}}", block)) + "\n\n";
    }
    out += trim_trailing(asset("prompts/answer.txt")) + "\n";
    return out;
}

}  // namespace lcpbridge::llm
