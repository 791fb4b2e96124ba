#pragma once

#include "fedeval/backend.hpp"
#include "fedeval/prompting.hpp"
#include "fedeval/protocol.hpp"

namespace fedeval {

// Everything the judge/generate loops need besides the backends themselves.
struct EngineOptions {
    TemplateSet templates = TemplateSet::builtin();
    DecodingParams answer_decoding{0.7, 512};
    DecodingParams judge_decoding{0.0, 512};  // referees decode greedily
    RenderOptions render;
    ProtocolOptions protocol;
    int workers = 1;
};

} // namespace fedeval
