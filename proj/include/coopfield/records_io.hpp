#ifndef COOPFIELD_RECORDS_IO_HPP
#define COOPFIELD_RECORDS_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "coopfield/experiments.hpp"

namespace coopfield {

enum class RecordFormat { Csv, Json };

// Pinned column schema; both emitters are byte-stable for identical inputs.
inline constexpr const char* kRecordCsvHeader =
    "beta,b,c,gamma,n,solver,mode,mean_density,density_variance,stderr,tau_int";

std::string solver_name(Solver solver);
Solver parse_solver(const std::string& name);
std::string mode_name(RiskKind kind);
RiskKind parse_mode(const std::string& name);

// Reals carry 12 significant digits; NaN fields serialize as empty (CSV) or
// null (JSON).
void emit_records(const std::vector<SweepRecord>& records, RecordFormat format,
                  std::ostream& out);
void emit_records(const std::vector<SweepRecord>& records, RecordFormat format,
                  const std::string& path);

// Strict inverse of the CSV emitter (header must match the pinned schema).
std::vector<SweepRecord> parse_records_csv(std::istream& in);
std::vector<SweepRecord> parse_records_csv_file(const std::string& path);

}  // namespace coopfield

#endif
