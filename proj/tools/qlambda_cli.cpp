// qlambda: exact lambda-invariants, Selmer coranks, and splitting data for
// quadratic twists over the 2-adic tower of an imaginary quadratic field.
//
// Exit codes: 0 success, 1 usage, 2 mathematically invalid input, 3 resource
// budget exceeded.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "qlambda/report.hpp"

namespace {

using namespace qlambda;
using report::json;

struct GlobalFlags {
    std::string q;
    std::string R = "1";
    std::string rmax = "100";
    std::string prime;
    bool as_json = false;
    bool as_csv = false;
    int jobs = 1;
    long precision_cap = 4096;
    int degree = 2;
    int m = 2;
    int prec = 8;
};

report::Options options_of(const GlobalFlags& f) {
    report::Options opts;
    opts.precision_cap = f.precision_cap;
    opts.jobs = f.jobs;
    return opts;
}

Integer parse_integer(const std::string& text, const char* what) {
    Integer n;
    if (mpz_set_str(n.get_mpz_t(), text.c_str(), 10) != 0)
        throw InvalidInput(std::string("cannot parse ") + what + ": '" + text + "'");
    return n;
}

void emit(const json& doc, bool as_json) {
    if (as_json) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    const json& results = doc["results"];
    std::cout << "command: " << doc["command"].get<std::string>() << "\n";
    for (auto& [key, value] : doc["inputs"].items()) {
        if (value.is_string())
            std::cout << "  " << key << " = " << value.get<std::string>() << "\n";
        else
            std::cout << "  " << key << " = " << value.dump() << "\n";
    }
    std::cout << results.dump(2) << "\n";
}

void print_lambda_human(const json& doc) {
    const json& res = doc["results"];
    const json& twist = res["twist"];
    std::cout << "q = " << doc["inputs"]["q"].get<std::string>() << "\n";
    std::cout << "twist valid: " << (twist["valid"].get<bool>() ? "yes" : "no") << "\n";
    if (!twist["valid"].get<bool>()) {
        std::cout << "violations:";
        for (const auto& v : twist["violations"]) std::cout << " " << v.get<std::string>();
        std::cout << "\n";
        return;
    }
    const json& lam = res["lambda"];
    std::cout << "s_inf = " << lam["s_inf"].get<std::string>() << "\n";
    std::cout << "prime                          generator            ord  count\n";
    for (const auto& e : lam["entries"]) {
        const json& p = e["prime"];
        std::string label = p["kind"].get<std::string>() + " " + p["ell"].get<std::string>();
        if (p.contains("u")) label += " (u=" + p["u"].get<std::string>() + ")";
        printf("%-30s %-20s %-4ld %s\n", label.c_str(),
               e["generator_pretty"].get<std::string>().c_str(), e["ord"].get<long>(),
               e["count"].get<std::string>().c_str());
    }
    auto opt = [](const json& v) { return v.is_null() ? std::string("-") : v.get<std::string>(); };
    std::cout << "lambda_F      = " << lam["lambda_F"].get<std::string>() << "\n";
    std::cout << "lambda_Fprime = " << opt(lam["lambda_Fprime"]) << "\n";
    std::cout << "lambda_J      = " << opt(lam["lambda_J"]) << "\n";
    const json& sel = res["selmer"];
    std::cout << "selmer corank over F_inf = " << sel["corank_F_inf"].get<std::string>() << "  ("
              << sel["identity_F"].get<std::string>() << ")\n";
    std::cout << "selmer corank over J_inf = " << opt(sel["corank_J_inf"]) << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"exact splitting counts and lambda-invariants over 2-adic towers"};
    app.require_subcommand(1);
    GlobalFlags f;

    auto add_common = [&](CLI::App* sub, bool wants_R) {
        sub->add_option("--q", f.q, "prime q = 7 mod 8")->required();
        if (wants_R)
            sub->add_option("--R", f.R, "twist: integer, a+b*sqrt, or (a+b*sqrt)/2");
        sub->add_flag("--json", f.as_json, "machine-readable output");
        sub->add_option("--precision-cap", f.precision_cap, "2-adic working precision cap");
        return sub;
    };

    auto* cmd_lambda = add_common(app.add_subcommand("lambda", "lambda-invariants and coranks"),
                                  true);
    auto* cmd_scan = app.add_subcommand("scan", "enumerate squarefree twists");
    cmd_scan->add_option("--q", f.q)->required();
    cmd_scan->add_option("--rmax", f.rmax, "bound on |R|");
    cmd_scan->add_flag("--json", f.as_json);
    cmd_scan->add_flag("--csv", f.as_csv);
    cmd_scan->add_option("--jobs", f.jobs, "parallel workers");
    cmd_scan->add_option("--precision-cap", f.precision_cap);
    auto* cmd_classify =
        add_common(app.add_subcommand("classify", "rank-one case classification"), true);
    auto* cmd_witness =
        add_common(app.add_subcommand("witness", "construct and verify generators"), true);
    auto* cmd_split = app.add_subcommand("split", "splitting of a rational prime in the tower");
    cmd_split->add_option("--q", f.q)->required();
    cmd_split->add_option("--prime", f.prime, "rational prime")->required();
    cmd_split->add_flag("--json", f.as_json);
    cmd_split->add_option("--precision-cap", f.precision_cap);
    auto* cmd_rayclass =
        add_common(app.add_subcommand("rayclass", "ray class order mod the dyadic square"), false);
    auto* cmd_classgroup = add_common(app.add_subcommand("classgroup", "class number"), false);
    auto* cmd_verify_norm =
        app.add_subcommand("verify-norm", "norm surjectivity on an unramified extension");
    cmd_verify_norm->add_option("--deg", f.degree, "extension degree (1..4)");
    cmd_verify_norm->add_option("--m", f.m, "congruence level (>= 2)");
    cmd_verify_norm->add_option("--prec", f.prec, "working precision k, m+2 <= k <= m+8");
    cmd_verify_norm->add_flag("--json", f.as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        report::Options opts = options_of(f);
        if (cmd_verify_norm->parsed()) {
            json doc = report::verify_norm_document(f.degree, f.m, f.prec, opts);
            if (f.as_json) {
                std::cout << doc.dump(2) << "\n";
            } else {
                const json& rep = doc["results"]["norm_surjectivity"];
                std::cout << "degree " << rep["degree"] << ", 1 + 2^" << rep["m"].get<int>()
                          << " classes mod 2^" << rep["k"].get<int>() << ": "
                          << (rep["surjective"].get<bool>() ? "surjective" : "NOT surjective")
                          << " (" << rep["elements_enumerated"] << " elements)\n";
            }
            return doc["results"]["norm_surjectivity"]["surjective"].get<bool>() ? 0 : 2;
        }

        QuadField field(parse_integer(f.q, "--q"));

        if (cmd_lambda->parsed()) {
            QuadElem R = report::parse_twist(field, f.R);
            json doc = report::lambda_document(field, R, opts);
            if (f.as_json)
                std::cout << doc.dump(2) << "\n";
            else
                print_lambda_human(doc);
            return doc["results"]["twist"]["valid"].get<bool>() ? 0 : 2;
        }
        if (cmd_scan->parsed()) {
            Integer rmax = parse_integer(f.rmax, "--rmax");
            if (f.as_csv) {
                std::cout << report::kCsvHeader << "\n";
                try {
                    auto rows = enumerate_twists(field, rmax, f.jobs, opts.precision());
                    for (const auto& row : rows) std::cout << report::scan_csv_row(row) << "\n";
                } catch (const ResourceError& e) {
                    std::cout << "#partial: " << e.what() << "\n";
                    std::cout.flush();
                    return 3;
                }
                return 0;
            }
            json doc = report::scan_document(field, rmax, opts);
            emit(doc, f.as_json);
            return 0;
        }
        if (cmd_classify->parsed()) {
            QuadElem R = report::parse_twist(field, f.R);
            auto rational = R.as_integer();
            if (!rational)
                throw InvalidInput("classify: R must be a rational squarefree integer");
            json doc = report::classify_document(field, *rational, opts);
            emit(doc, f.as_json);
            return 0;
        }
        if (cmd_witness->parsed()) {
            QuadElem R = report::parse_twist(field, f.R);
            json doc = report::witness_document(field, R, opts);
            emit(doc, f.as_json);
            return doc["results"]["verification"]["all_checks_pass"].get<bool>() ? 0 : 2;
        }
        if (cmd_split->parsed()) {
            json doc = report::split_document(field, parse_integer(f.prime, "--prime"), opts);
            emit(doc, f.as_json);
            return 0;
        }
        if (cmd_rayclass->parsed()) {
            emit(report::rayclass_document(field, opts), f.as_json);
            return 0;
        }
        if (cmd_classgroup->parsed()) {
            emit(report::classgroup_document(field, opts), f.as_json);
            return 0;
        }
        return 1;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
