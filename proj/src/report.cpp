#include "crowdec/report.hpp"

#include <charconv>
#include <fstream>

#include "crowdec/engine.hpp"
#include "crowdec/error.hpp"

namespace crowdec {

std::string format_real(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_convergence_csv(std::ostream& out, const RunResult& result) {
    out << kConvergenceHeader << '\n';
    for (const auto& r : result.convergence) {
        out << r.generation << ',' << r.fes << ',' << format_real(r.best_F) << ','
            << format_real(r.best_f_true) << ',' << r.alive << ',' << format_real(r.layered_accuracy)
            << '\n';
    }
}

void write_detections_csv(std::ostream& out, const RunResult& result) {
    out << kDetectionHeader << '\n';
    for (const auto& d : result.detections) {
        out << d.generation << ',' << d.agent << ',' << format_real(d.bound_value) << ','
            << static_cast<int>(d.tail_level) << '\n';
    }
}

void write_tuples_csv(std::ostream& out, const RunResult& result) {
    out << kTupleHeader << '\n';
    for (const auto& t : result.tuples) {
        out << t.generation << ',' << t.tuple.id1 << ',' << t.tuple.id2 << ',' << t.tuple.result
            << '\n';
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace crowdec
