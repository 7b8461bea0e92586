#pragma once

#include <filesystem>
#include <ostream>
#include <string>

namespace crowdec {

struct RunResult;

/// Shortest decimal string that parses back to the same double.
std::string format_real(double value);

inline constexpr const char* kConvergenceHeader =
    "generation,fes,best_F,best_f_true,alive,layered_accuracy";
inline constexpr const char* kDetectionHeader = "generation,agent_id,bound_value,tail_level";
inline constexpr const char* kTupleHeader = "generation,id1,id2,result";

void write_convergence_csv(std::ostream& out, const RunResult& result);
void write_detections_csv(std::ostream& out, const RunResult& result);
void write_tuples_csv(std::ostream& out, const RunResult& result);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace crowdec
