#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "reidgale/bundles.hpp"
#include "reidgale/fan.hpp"
#include "reidgale/gale.hpp"
#include "reidgale/group.hpp"
#include "reidgale/surfaces.hpp"
#include "reidgale/zmat.hpp"

namespace {

using namespace reidgale;

std::vector<long long> parse_ll_list(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
    return out;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

void emit(const nlohmann::json& j, const std::string& out_path) {
    std::string body = j.dump(2);
    body.push_back('\n');
    if (out_path.empty()) {
        std::cout << body;
    } else {
        std::ofstream os(out_path);
        if (!os) throw Error(ErrorCode::IoError, "cannot write " + out_path);
        os << body;
    }
}

void emit_csv_side_files(const GaleReport& rep, const std::string& out_path) {
    std::string stem = out_path;
    if (auto dot = stem.rfind(".json"); dot != std::string::npos) stem.resize(dot);
    auto dump = [&](const char* name, const ZMatrix& m) {
        std::ofstream os(stem + "_" + name + ".csv");
        write_matrix_csv(os, m);
    };
    dump("L", rep.L);
    dump("K", rep.K);
    dump("Kt", rep.Kt);
    dump("Lt", rep.Lt);
    if (rep.geometric) dump("Kt_ordered", rep.Kt_ordered);
}

int report_exit(const GaleReport& rep, bool strict) {
    return strict && !rep.diagnostics.empty() ? 2 : 0;
}

struct AnalyzeArgs {
    std::string group, fan, out, format = "json", dump_degrees, dump_euler;
    bool strict = false;
};

int run_analyze(const AnalyzeArgs& a) {
    auto g = parse_ll_list(a.group);
    if (g.size() != 4) throw Error(ErrorCode::ValidationError, "--group expects r,a,b,c");
    CyclicAction action = validate_action(g[0], g[1], g[2], g[3]);
    CrepantFan fan = CrepantFan::load(a.fan);
    if (fan.action().r != action.r || fan.action().weights != action.weights)
        throw Error(ErrorCode::ValidationError, "--group disagrees with the fan file header");

    SupportTable supports = SupportTable::compute(fan);
    ZMatrix degrees = degree_matrix(fan, supports);

    if (!a.dump_degrees.empty()) {
        std::ofstream os(a.dump_degrees);
        const auto& cw = fan.compact_walls();
        for (std::size_t i = 0; i < cw.size(); ++i) {
            const Wall& w = fan.walls()[cw[i]];
            os << w.v1 << "," << w.v2;
            for (std::size_t j = 0; j < degrees.cols(); ++j) os << "," << degrees(i, j);
            os << "\n";
        }
    }
    GaleReport rep = analyze(fan, degrees);
    if (!a.dump_euler.empty()) {
        std::ofstream os(a.dump_euler);
        ZMatrix euler = euler_table(fan, degrees);
        for (std::size_t i = 0; i < euler.rows(); ++i) {
            const Point& p = fan.point(fan.interior_points()[i]);
            os << p[0] << "," << p[1] << "," << p[2];
            for (std::size_t j = 0; j < euler.cols(); ++j) os << "," << euler(i, j);
            os << "\n";
        }
    }
    emit(rep.to_json(), a.out);
    if (a.format == "csv") {
        if (a.out.empty()) throw Error(ErrorCode::IoError, "--format csv requires --out");
        emit_csv_side_files(rep, a.out);
    }
    return report_exit(rep, a.strict);
}

struct MatrixArgs {
    std::string l_path, k_path, v, labels, out, format = "json";
    bool strict = false;
};

int run_matrix(const MatrixArgs& a) {
    ZMatrix l = read_matrix_file(a.l_path);
    std::optional<ZMatrix> k;
    if (!a.k_path.empty()) k = read_matrix_file(a.k_path);
    std::vector<Int> v;
    if (!a.v.empty())
        for (long long x : parse_ll_list(a.v)) v.push_back(Int(x));
    std::vector<std::string> labels;
    if (!a.labels.empty()) labels = split_list(a.labels);
    GaleReport rep = matrix_mode(l, k, std::move(v), std::move(labels));
    emit(rep.to_json(), a.out);
    if (a.format == "csv") {
        if (a.out.empty()) throw Error(ErrorCode::IoError, "--format csv requires --out");
        emit_csv_side_files(rep, a.out);
    }
    return report_exit(rep, a.strict);
}

int run_validate(const std::string& fan_path, const std::string& out) {
    std::ifstream in(fan_path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + fan_path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::vector<FanCheck> checks = CrepantFan::validate_report(ss.str());
    bool valid = true;
    nlohmann::json items = nlohmann::json::array();
    for (const auto& c : checks) {
        valid = valid && c.pass;
        items.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    emit({{"valid", valid}, {"checks", items}}, out);
    return valid ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gale-dual matrices (L, K^t) and Reid's-recipe markings for "
                 "crepant resolutions of cyclic quotient singularities"};
    app.require_subcommand(1);

    AnalyzeArgs aa;
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "run the full toric pipeline");
    analyze_cmd->add_option("--group", aa.group, "group as r,a,b,c")->required();
    analyze_cmd->add_option("--fan", aa.fan, "crepant fan JSON file")->required();
    analyze_cmd->add_option("--out", aa.out, "report path (stdout when omitted)");
    analyze_cmd->add_option("--format", aa.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    analyze_cmd->add_option("--dump-degrees", aa.dump_degrees, "write the curve-degree matrix CSV");
    analyze_cmd->add_option("--dump-euler", aa.dump_euler, "write the Euler-characteristic table CSV");
    analyze_cmd->add_flag("--strict", aa.strict, "exit 2 when diagnostics fire");

    MatrixArgs ma;
    CLI::App* matrix_cmd = app.add_subcommand("matrix", "run the matrix pipeline on user L (and K)");
    matrix_cmd->add_option("--L", ma.l_path, "linearisation matrix (CSV or JSON)")->required();
    matrix_cmd->add_option("--K", ma.k_path, "kernel/relations matrix (CSV or JSON)");
    matrix_cmd->add_option("--v", ma.v, "dimension vector for i != 0, comma separated");
    matrix_cmd->add_option("--labels", ma.labels, "column labels, comma separated");
    matrix_cmd->add_option("--out", ma.out, "report path (stdout when omitted)");
    matrix_cmd->add_option("--format", ma.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    matrix_cmd->add_flag("--strict", ma.strict, "exit 2 when diagnostics fire");

    std::string vf_fan, vf_out;
    CLI::App* validate_cmd = app.add_subcommand("validate-fan", "check all fan invariants");
    validate_cmd->add_option("--fan", vf_fan, "crepant fan JSON file")->required();
    validate_cmd->add_option("--out", vf_out, "diagnostic path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze_cmd->parsed()) return run_analyze(aa);
        if (matrix_cmd->parsed()) return run_matrix(ma);
        return run_validate(vf_fan, vf_out);
    } catch (const reidgale::Error& e) {
        nlohmann::json err{{"error", {{"code", reidgale::to_string(e.code())}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        std::cerr << "reidgale: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "reidgale: " << e.what() << "\n";
        return 1;
    }
}
