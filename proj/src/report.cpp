#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fuzzystab/harness.hpp"

namespace fuzzystab::harness {

using nlohmann::ordered_json;

Format parse_format(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw InputError("unknown format '" + s + "' (expected json or csv)");
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string vec_field(const Vector& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += num(v[i]);
    }
    return out;
}

// Quotes a CSV field when it holds a separator, quote or newline.
std::string field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

ordered_json json_number(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::string to_json(const RunReport& r) {
    ordered_json doc;
    doc["command"] = to_string(r.command);
    doc["bound"] = r.bound;
    doc["seed"] = r.seed;
    doc["control"] = r.control;

    ordered_json axioms = ordered_json::array();
    for (const auto& sec : r.axioms) {
        ordered_json checks = ordered_json::array();
        for (const auto& c : sec.report.checks) {
            checks.push_back({{"axiom", c.axiom},
                              {"checks", c.checks},
                              {"violations", c.violations},
                              {"worst_slack", c.worst_slack},
                              {"status", fuzzy::to_string(c.status)},
                              {"note", c.note}});
        }
        axioms.push_back({{"norm", sec.norm}, {"checks", std::move(checks)}});
    }
    doc["axioms"] = std::move(axioms);

    ordered_json hyp = ordered_json::array();
    for (const auto& h : r.hypothesis) {
        hyp.push_back({{"check", h.check},
                       {"scheme", h.scheme},
                       {"holds", h.holds},
                       {"value", h.value},
                       {"note", h.note}});
    }
    doc["hypothesis"] = std::move(hyp);

    ordered_json ext = ordered_json::array();
    for (const auto& e : r.extraction) {
        ext.push_back({{"x_index", e.x_index},
                       {"component", e.component},
                       {"scheme", e.scheme},
                       {"x", e.x},
                       {"limit", e.limit},
                       {"converged", e.converged},
                       {"ratio_estimate", e.ratio_estimate},
                       {"n_used", e.n_used},
                       {"stop_reason", e.stop_reason}});
    }
    doc["extraction"] = std::move(ext);

    if (r.verification) {
        const auto& v = *r.verification;
        ordered_json rows = ordered_json::array();
        for (const auto& row : v.rows) {
            rows.push_back({{"x_index", row.x_index},
                            {"x_norm", row.x_norm},
                            {"a", row.a},
                            {"lhs", row.lhs},
                            {"rhs", row.rhs},
                            {"slack", row.slack}});
        }
        doc["verification"] = {{"theorem_id", control::to_string(v.bound)},
                               {"hypothesis_satisfied", v.hypothesis_satisfied},
                               {"hypothesis_notes", v.hypothesis_notes},
                               {"premise_checks", v.premise_checks},
                               {"premise_violations", v.premise_violations},
                               {"premise_worst_slack", json_number(v.premise_worst_slack)},
                               {"worst_slack", json_number(v.worst_slack)},
                               {"violations", v.violations},
                               {"rows", std::move(rows)}};
    } else {
        doc["verification"] = nullptr;
    }

    ordered_json repairs = ordered_json::array();
    for (const auto& id : r.repairs) {
        repairs.push_back({{"id", id}, {"description", control::repair::describe(id)}});
    }
    doc["repair_log"] = std::move(repairs);
    doc["messages"] = r.messages;
    doc["exit_status"] = r.exit_status;
    return doc.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> to_csv(const RunReport& r) {
    std::vector<std::pair<std::string, std::string>> files;

    std::ostringstream ax;
    ax << "norm,axiom,checks,violations,worst_slack,status,note\n";
    for (const auto& sec : r.axioms) {
        for (const auto& c : sec.report.checks) {
            ax << sec.norm << ',' << c.axiom << ',' << c.checks << ',' << c.violations << ','
               << num(c.worst_slack) << ',' << fuzzy::to_string(c.status) << ',' << field(c.note)
               << '\n';
        }
    }
    files.emplace_back("axioms.csv", ax.str());

    std::ostringstream hy;
    hy << "check,scheme,holds,value,note\n";
    for (const auto& h : r.hypothesis) {
        hy << h.check << ',' << h.scheme << ',' << (h.holds ? "true" : "false") << ','
           << num(h.value) << ',' << field(h.note) << '\n';
    }
    files.emplace_back("hypothesis.csv", hy.str());

    std::ostringstream ex;
    ex << "x_index,component,scheme,x,limit,converged,ratio_estimate,n_used,stop_reason\n";
    for (const auto& e : r.extraction) {
        ex << e.x_index << ',' << e.component << ',' << e.scheme << ',' << vec_field(e.x) << ','
           << vec_field(e.limit) << ',' << (e.converged ? "true" : "false") << ','
           << num(e.ratio_estimate) << ',' << e.n_used << ',' << field(e.stop_reason) << '\n';
    }
    files.emplace_back("extraction.csv", ex.str());

    std::ostringstream ve;
    ve << "theorem_id,x_index,x_norm,a,lhs,rhs,slack\n";
    if (r.verification) {
        const char* id = control::to_string(r.verification->bound);
        for (const auto& row : r.verification->rows) {
            ve << id << ',' << row.x_index << ',' << num(row.x_norm) << ',' << num(row.a) << ','
               << num(row.lhs) << ',' << num(row.rhs) << ',' << num(row.slack) << '\n';
        }
    }
    files.emplace_back("verification.csv", ve.str());

    std::ostringstream re;
    re << "repair_id,description\n";
    for (const auto& id : r.repairs) {
        re << id << ',' << field(control::repair::describe(id)) << '\n';
    }
    files.emplace_back("repair_log.csv", re.str());

    std::ostringstream st;
    st << "command,bound,seed,exit_status\n"
       << to_string(r.command) << ',' << r.bound << ',' << r.seed << ',' << r.exit_status << '\n';
    files.emplace_back("status.csv", st.str());
    return files;
}

bool emit_report(const RunReport& report, const std::string& out_dir, Format format) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) return false;

    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(fs::path(out_dir) / name, std::ios::binary | std::ios::trunc);
        if (!out) return false;
        out << text;
        return static_cast<bool>(out.flush());
    };
    if (format == Format::json) return write("report.json", to_json(report));
    for (const auto& [name, text] : to_csv(report)) {
        if (!write(name, text)) return false;
    }
    return true;
}

int run(const RunOptions& opts, std::ostream& err) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(opts.config_path);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadConfig;
    }
    RunReport report = run_pipeline(cfg, opts.command);
    for (const auto& m : report.messages) {
        if (report.exit_status == kExitScale) err << "error: " << m << '\n';
    }
    if (!emit_report(report, opts.out_dir, opts.format)) {
        err << "error: cannot write report to '" << opts.out_dir << "'\n";
        return kExitUnwritable;
    }
    return report.exit_status;
}

}  // namespace fuzzystab::harness
