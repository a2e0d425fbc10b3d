#pragma once

#include <json.hpp>

#include "incidence/flags.hpp"
#include "incidence/schubert.hpp"
#include "incidence/smoothness.hpp"

namespace incidence {

using Json = nlohmann::ordered_json;

// Experiment driver. `config` carries the experiment id plus its parameters;
// unknown fields are rejected per experiment. The returned report echoes the
// config, lists per-item records and aggregates, and carries "pass" /
// "undecided" flags. Everything outside "runtime_ms" is a deterministic
// function of the config (items are derived from the seed index-wise, and all
// aggregation is order-independent, so partitioned execution cannot change
// any reported field).
Json run_experiment(const Json& config);

Json exp_double_count(const Json& config);
Json exp_gensm(const Json& config);
Json exp_fano(const Json& config);
Json exp_codim(const Json& config);
Json exp_cubic(const Json& config);
Json exp_predict_vs_count(const Json& config);

}  // namespace incidence
