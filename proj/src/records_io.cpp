#include "coopfield/records_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "coopfield/errors.hpp"

namespace coopfield {

namespace {

std::string fmt_real(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_json_real(double v) {
    if (std::isnan(v)) return "null";
    return fmt_real(v);
}

double parse_real_field(const std::string& field) {
    if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw IoError("malformed numeric field '" + field + "'");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::string solver_name(Solver solver) {
    switch (solver) {
        case Solver::MC: return "mc";
        case Solver::Exact: return "exact";
        case Solver::Series: return "series";
        case Solver::Digamma: return "digamma";
    }
    return "exact";
}

Solver parse_solver(const std::string& name) {
    if (name == "mc") return Solver::MC;
    if (name == "exact") return Solver::Exact;
    if (name == "series") return Solver::Series;
    if (name == "digamma") return Solver::Digamma;
    throw UsageError("unknown solver '" + name + "' (expected mc|exact|series|digamma)");
}

std::string mode_name(RiskKind kind) {
    switch (kind) {
        case RiskKind::Bare: return "bare";
        case RiskKind::MeanFieldClosedForm: return "meanfield";
        case RiskKind::SelfConsistent: return "selfconsistent";
    }
    return "meanfield";
}

RiskKind parse_mode(const std::string& name) {
    if (name == "bare") return RiskKind::Bare;
    if (name == "meanfield") return RiskKind::MeanFieldClosedForm;
    if (name == "selfconsistent") return RiskKind::SelfConsistent;
    throw UsageError("unknown risk mode '" + name +
                     "' (expected bare|meanfield|selfconsistent)");
}

void emit_records(const std::vector<SweepRecord>& records, RecordFormat format,
                  std::ostream& out) {
    if (records.empty()) throw ParameterError("no records to emit");
    if (format == RecordFormat::Csv) {
        out << kRecordCsvHeader << '\n';
        for (const auto& r : records) {
            out << fmt_real(r.beta) << ',' << fmt_real(r.b) << ',' << fmt_real(r.c) << ','
                << fmt_real(r.gamma) << ',' << r.n_players << ',' << solver_name(r.solver)
                << ',' << mode_name(r.mode) << ',' << fmt_real(r.mean_density) << ','
                << fmt_real(r.density_variance) << ',' << fmt_real(r.std_error) << ','
                << fmt_real(r.tau_int) << '\n';
        }
    } else {
        out << "[\n";
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& r = records[i];
            out << "{\"beta\":" << fmt_json_real(r.beta) << ",\"b\":" << fmt_json_real(r.b)
                << ",\"c\":" << fmt_json_real(r.c) << ",\"gamma\":" << fmt_json_real(r.gamma)
                << ",\"n\":" << r.n_players << ",\"solver\":\"" << solver_name(r.solver)
                << "\",\"mode\":\"" << mode_name(r.mode)
                << "\",\"mean_density\":" << fmt_json_real(r.mean_density)
                << ",\"density_variance\":" << fmt_json_real(r.density_variance)
                << ",\"stderr\":" << fmt_json_real(r.std_error)
                << ",\"tau_int\":" << fmt_json_real(r.tau_int) << '}'
                << (i + 1 < records.size() ? ",\n" : "\n");
        }
        out << "]\n";
    }
    if (!out) throw IoError("write failed while emitting records");
}

void emit_records(const std::vector<SweepRecord>& records, RecordFormat format,
                  const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    emit_records(records, format, out);
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<SweepRecord> parse_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty record stream");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRecordCsvHeader) {
        throw IoError("unexpected CSV header '" + line + "'");
    }
    std::vector<SweepRecord> records;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 11) {
            throw IoError("expected 11 fields, got " + std::to_string(fields.size()) +
                          " in line '" + line + "'");
        }
        SweepRecord r;
        r.beta = parse_real_field(fields[0]);
        r.b = parse_real_field(fields[1]);
        r.c = parse_real_field(fields[2]);
        r.gamma = parse_real_field(fields[3]);
        r.n_players = static_cast<int>(parse_real_field(fields[4]));
        r.solver = parse_solver(fields[5]);
        r.mode = parse_mode(fields[6]);
        r.mean_density = parse_real_field(fields[7]);
        r.density_variance = parse_real_field(fields[8]);
        r.std_error = parse_real_field(fields[9]);
        r.tau_int = parse_real_field(fields[10]);
        r.ok = !std::isnan(r.mean_density);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<SweepRecord> parse_records_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return parse_records_csv(in);
}

}  // namespace coopfield
