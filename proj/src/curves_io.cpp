#include "d3f/curves_io.hpp"
#include "d3f/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace d3f {

namespace {

const char* CSV_HEADER = "hypothesis,gamma,n,kind,value,zeta,I,t_star,trials,events,"
                         "wilson_low,wilson_high,low_confidence,clamped";

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T> std::string opt_num(const std::optional<T>& v) {
    if (!v) {
        return "";
    }
    if constexpr (std::is_same_v<T, double>) {
        return num(*v);
    } else if constexpr (std::is_same_v<T, bool>) {
        return *v ? "1" : "0";
    } else {
        return std::to_string(*v);
    }
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

} // namespace

void write_curves_csv(const std::filesystem::path& path, std::span<const CurveRecord> records) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << CSV_HEADER << "\n";
    for (const CurveRecord& r : records) {
        out << name(r.hypothesis) << ',' << num(r.gamma) << ',' << r.n << ',' << r.kind << ','
            << num(r.value) << ',' << opt_num(r.zeta) << ',' << opt_num(r.rate) << ','
            << opt_num(r.tilt) << ',' << opt_num(r.trials) << ',' << opt_num(r.events) << ','
            << opt_num(r.wilson_low) << ',' << opt_num(r.wilson_high) << ','
            << opt_num(r.low_confidence) << ',' << opt_num(r.clamped) << "\n";
    }
    if (!out) {
        throw IoError("write failure on " + path.string());
    }
}

std::vector<CurveRecord> read_curves_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != CSV_HEADER) {
        throw FormatError("curves csv " + path.string() + ": unexpected header");
    }
    std::vector<CurveRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv_row(line);
        if (cells.size() != 14) {
            throw FormatError("curves csv " + path.string() + ": row with " +
                              std::to_string(cells.size()) + " cells");
        }
        CurveRecord r;
        if (cells[0] != "h0" && cells[0] != "h1") {
            throw FormatError("curves csv: unknown hypothesis '" + cells[0] + "'");
        }
        r.hypothesis = cells[0] == "h0" ? Hypothesis::h0 : Hypothesis::h1;
        r.gamma = std::stod(cells[1]);
        r.n = std::stoi(cells[2]);
        r.kind = cells[3];
        if (r.kind != "empirical" && r.kind != "clt" && r.kind != "ldp") {
            throw FormatError("curves csv: unknown kind '" + r.kind + "'");
        }
        r.value = std::stod(cells[4]);
        if (!cells[5].empty()) r.zeta = std::stod(cells[5]);
        if (!cells[6].empty()) r.rate = std::stod(cells[6]);
        if (!cells[7].empty()) r.tilt = std::stod(cells[7]);
        if (!cells[8].empty()) r.trials = std::stol(cells[8]);
        if (!cells[9].empty()) r.events = std::stol(cells[9]);
        if (!cells[10].empty()) r.wilson_low = std::stod(cells[10]);
        if (!cells[11].empty()) r.wilson_high = std::stod(cells[11]);
        if (!cells[12].empty()) r.low_confidence = cells[12] == "1";
        if (!cells[13].empty()) r.clamped = cells[13] == "1";
        records.push_back(std::move(r));
    }
    return records;
}

void write_curves_json(const std::filesystem::path& path, std::span<const CurveRecord> records) {
    nlohmann::json rows = nlohmann::json::array();
    for (const CurveRecord& r : records) {
        nlohmann::json row;
        row["hypothesis"] = name(r.hypothesis);
        row["gamma"] = r.gamma;
        row["n"] = r.n;
        row["kind"] = r.kind;
        row["value"] = r.value;
        if (r.zeta) row["zeta"] = *r.zeta;
        if (r.rate) row["I"] = *r.rate;
        if (r.tilt) row["t_star"] = *r.tilt;
        if (r.trials) row["trials"] = *r.trials;
        if (r.events) row["events"] = *r.events;
        if (r.wilson_low) row["wilson_low"] = *r.wilson_low;
        if (r.wilson_high) row["wilson_high"] = *r.wilson_high;
        if (r.low_confidence) row["low_confidence"] = *r.low_confidence;
        if (r.clamped) row["clamped"] = *r.clamped;
        rows.push_back(std::move(row));
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << rows.dump(2) << "\n";
    if (!out) {
        throw IoError("write failure on " + path.string());
    }
}

} // namespace d3f
