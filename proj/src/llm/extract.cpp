#include "lcpbridge/error.hpp"
#include "lcpbridge/llm.hpp"
#include "lcpbridge/plantuml.hpp"

namespace lcpbridge::llm {

Extraction extract_model(std::string_view completion, std::string_view model_name) {
    const auto blocks = plantuml::find_blocks(completion);
    if (blocks.empty()) throw Error(ErrorCode::NoPlantUmlBlock, "completion contains no @startuml..@enduml block");
    Extraction out;
    out.block = blocks.front();
    try {
        auto parsed = plantuml::parse_plantuml(out.block, model_name);
        out.model = std::move(parsed.model);
        out.losses = std::move(parsed.losses);
    } catch (Error& e) {
        e.set_attachment(out.block);
        throw;
    }
    if (blocks.size() > 1) {
        out.losses.add("model", out.model.name, LossReason::Dropped, Severity::Warning,
                       "completion had " + std::to_string(blocks.size()) + " PlantUML blocks; used the first");
    }
    out.losses.add("model", out.model.name, LossReason::LlmInferred, Severity::Warning,
                   "model read from a screenshot by a vision LLM; completeness is not guaranteed");
    return out;
}

}  // namespace lcpbridge::llm
