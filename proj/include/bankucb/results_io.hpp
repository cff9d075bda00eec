#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "bankucb/metrics.hpp"

namespace bankucb {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// run,t,batch,c0..c{d-1},chosen_arm,optimal_arm,reward,inst_regret,cum_regret
std::string trace_csv(const RegretTrace& trace, int dim);
RegretTrace parse_trace_csv(const std::string& text);

/// algorithm,t,<value_column>[,half_width]; the half-width column is left
/// out when the summary has no band (single run).
std::string summary_csv(const std::string& algorithm, const SummarySeries& summary,
                        const std::string& value_column);

std::string format_double(double v);

}  // namespace bankucb
