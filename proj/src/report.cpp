#include "qlambda/report.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qlambda::report {

json to_json(const Integer& n) { return n.get_str(); }

json to_json(const QuadElem& x) {
    return json{{"a", x.a().get_str()}, {"b", x.b().get_str()}, {"denominator", 2}};
}

json to_json(const PrimeIdeal& P) {
    json j{{"ell", P.ell().get_str()}, {"kind", kind_name(P.kind())}};
    if (P.kind() == Kind::Split) j["u"] = P.u().get_str();
    return j;
}

json to_json(const SplittingEntry& entry) {
    return json{{"prime", to_json(entry.prime)},
                {"generator", to_json(entry.generator)},
                {"generator_pretty", entry.generator.to_string()},
                {"ord", entry.ord},
                {"count", entry.count.get_str()}};
}

json to_json(const TwistRecord& rec) {
    json violations = json::array();
    for (auto v : rec.violations) violations.push_back(violation_name(v));
    return json{{"R", to_json(rec.R)}, {"valid", rec.valid}, {"violations", violations}};
}

json to_json(const LambdaReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries) entries.push_back(to_json(e));
    json j{{"q", rep.q.get_str()},
           {"R", to_json(rep.R)},
           {"s_inf", rep.s_inf.get_str()},
           {"entries", entries},
           {"lambda_F", rep.lambda_F.get_str()},
           {"q_mod_16", rep.q_mod_16}};
    j["lambda_Fprime"] = rep.lambda_Fprime ? json(rep.lambda_Fprime->get_str()) : json(nullptr);
    j["lambda_J"] = rep.lambda_J ? json(rep.lambda_J->get_str()) : json(nullptr);
    return j;
}

json to_json(const SelmerReport& rep) {
    json j{{"corank_F_inf", rep.corank_F_inf.get_str()}, {"identity_F", rep.identity_F}};
    j["corank_J_inf"] = rep.corank_J_inf ? json(rep.corank_J_inf->get_str()) : json(nullptr);
    j["identity_J"] = rep.identity_J.empty() ? json(nullptr) : json(rep.identity_J);
    return j;
}

json to_json(const RankOneCase& cls) {
    json j{{"case", rank_one_label_name(cls.label)}};
    j["r"] = cls.r ? json(cls.r->get_str()) : json(nullptr);
    if (cls.consequences) {
        const auto& c = *cls.consequences;
        j["consequences"] = json{{"base_selmer_finite", c.base_selmer_finite},
                                 {"corank_over_layers", c.corank_over_layers},
                                 {"corank_one_iff_L_vanishes", c.corank_one_iff_L_vanishes},
                                 {"L_vanishes_all_layers", c.L_vanishes_all_layers}};
    } else {
        j["consequences"] = nullptr;
    }
    if (!cls.reason.empty()) j["reason"] = cls.reason;
    return j;
}

json to_json(const WitnessSet& w) {
    json alphas = json::array(), supports = json::array(), exps = json::array(),
         pretty = json::array();
    for (const auto& a : w.alphas) {
        alphas.push_back(to_json(a));
        pretty.push_back(a.to_string());
    }
    for (const auto& p : w.supports) supports.push_back(to_json(p));
    for (auto e : w.exponents) exps.push_back(e);
    return json{{"h_prime", w.h_prime.get_str()},
                {"alphas", alphas},
                {"alphas_pretty", pretty},
                {"supports", supports},
                {"exponents", exps}};
}

json to_json(const WitnessVerification& v) {
    return json{{"ideal_equalities", v.ideal_equalities},
                {"congruences", v.congruences},
                {"product_relation", v.product_relation},
                {"distinct_supports", v.distinct_supports},
                {"odd_orders", v.odd_orders},
                {"all_checks_pass", v.all()},
                {"failures", v.failures}};
}

json to_json(const NormSurjectivityReport& rep) {
    json classes = json::array();
    for (const auto& c : rep.classes) {
        json e{{"target_residue", c.target_residue}, {"covered", c.covered}};
        e["preimage_coeffs"] = c.preimage_coeffs;
        classes.push_back(e);
    }
    return json{{"degree", rep.degree},
                {"m", rep.m},
                {"k", rep.k},
                {"poly", rep.poly},
                {"surjective", rep.surjective},
                {"elements_enumerated", rep.elements_enumerated},
                {"classes", classes}};
}

json envelope(const std::string& command, json inputs, json results, json diagnostics) {
    return json{{"schema_version", kSchemaVersion},
                {"command", command},
                {"inputs", std::move(inputs)},
                {"results", std::move(results)},
                {"diagnostics", std::move(diagnostics)}};
}

QuadElem parse_twist(const QuadField& field, const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw InvalidInput("parse_twist: empty value");

    bool halved = false;
    if (s.size() > 3 && s.front() == '(' && s.substr(s.size() - 3) == ")/2") {
        halved = true;
        s = s.substr(1, s.size() - 4);
    }
    auto pos = s.find("sqrt");
    if (pos == std::string::npos) {
        if (halved) throw InvalidInput("parse_twist: rational value cannot carry /2");
        Integer n;
        if (mpz_set_str(n.get_mpz_t(), s.c_str(), 10) != 0)
            throw InvalidInput("parse_twist: cannot parse integer '" + s + "'");
        return QuadElem::from_integer(field, n);
    }
    // Forms a+b*sqrt / a-b*sqrt; b may carry an explicit sign, * is optional.
    std::string head = s.substr(0, pos);
    if (!head.empty() && head.back() == '*') head.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = head.size(); i-- > 1;) {
        if (head[i] == '+' || head[i] == '-') {
            split = i;
            break;
        }
    }
    std::string a_part, b_part;
    if (split == std::string::npos) {
        a_part = "0";
        b_part = head.empty() ? "1" : head;
    } else {
        a_part = head.substr(0, split);
        b_part = head.substr(split);
    }
    if (b_part.empty() || b_part == "+") b_part = "1";
    if (b_part == "-") b_part = "-1";
    Integer a, b;
    if (mpz_set_str(a.get_mpz_t(), a_part.c_str(), 10) != 0 ||
        mpz_set_str(b.get_mpz_t(), b_part.c_str(), 10) != 0)
        throw InvalidInput("parse_twist: cannot parse '" + text + "'");
    if (!halved) {
        a *= 2;
        b *= 2;
    }
    return QuadElem(field, a, b);
}

namespace {

json base_inputs(const QuadField& field) { return json{{"q", field.q().get_str()}}; }

json diagnostics_for(const Options& opts, long precision_used) {
    return json{{"precision_cap", opts.precision_cap},
                {"precision_used", precision_used},
                {"factor_trial_bound", FactorConfig{}.trial_bound}};
}

}  // namespace

json lambda_document(const QuadField& field, const QuadElem& R, const Options& opts) {
    TwistRecord rec = validate_twist(R);
    json inputs = base_inputs(field);
    inputs["R"] = to_json(R);
    if (!rec.valid) {
        json results{{"twist", to_json(rec)}};
        return envelope("lambda", inputs, results, diagnostics_for(opts, 0));
    }
    LambdaReport lam = lambda_invariants(R, opts.precision());
    SelmerReport sel = selmer_report(lam);
    json results{{"twist", to_json(rec)}, {"lambda", to_json(lam)}, {"selmer", to_json(sel)}};
    results["rank_identity_ok"] =
        lam.q_mod_16 == 7 ? json(rank_identity_check(lam)) : json(nullptr);
    return envelope("lambda", inputs, results, diagnostics_for(opts, lam.max_precision_used));
}

json classify_document(const QuadField& field, const Integer& R, const Options& opts) {
    json inputs = base_inputs(field);
    inputs["R"] = R.get_str();
    RankOneCase cls = classify_rank_one(field, R);
    return envelope("classify", inputs, json{{"classification", to_json(cls)}},
                    diagnostics_for(opts, 0));
}

json witness_document(const QuadField& field, const QuadElem& R, const Options& opts) {
    json inputs = base_inputs(field);
    inputs["R"] = to_json(R);
    WitnessSet w = construct_witnesses(R, opts.precision());
    WitnessVerification v = verify_witnesses(R, w, opts.precision());
    json results{{"witnesses", to_json(w)}, {"verification", to_json(v)}};
    return envelope("witness", inputs, results, diagnostics_for(opts, 0));
}

json split_document(const QuadField& field, const Integer& ell, const Options& opts) {
    json inputs = base_inputs(field);
    inputs["prime"] = ell.get_str();
    Kind kind = splitting_kind(field, ell);
    json entries = json::array();
    long used = 0;
    for (const auto& P : primes_above(field, ell)) {
        if (P.kind() == Kind::DyadicP) {
            entries.push_back(json{{"prime", to_json(P)},
                                   {"note", "distinguished dyadic prime: no splitting entry"}});
            continue;
        }
        SplittingEntry entry = splitting_entry(P, opts.precision());
        used = std::max(used, entry.precision_used);
        entries.push_back(to_json(entry));
    }
    json results{{"kind", kind_name(kind)}, {"entries", entries}};
    return envelope("split", inputs, results, diagnostics_for(opts, used));
}

json rayclass_document(const QuadField& field, const Options& opts) {
    Integer order = ray_class_order(field);
    json results{{"ray_class_order", order.get_str()},
                 {"parity", mpz_odd_p(order.get_mpz_t()) ? "odd" : "even"},
                 {"modulus", "square of the conjugate dyadic prime"}};
    return envelope("rayclass", base_inputs(field), results, diagnostics_for(opts, 0));
}

json classgroup_document(const QuadField& field, const Options& opts) {
    Integer h = class_number(field);
    json results{{"class_number", h.get_str()},
                 {"parity", mpz_odd_p(h.get_mpz_t()) ? "odd" : "even"}};
    return envelope("classgroup", base_inputs(field), results, diagnostics_for(opts, 0));
}

json verify_norm_document(int degree, int m, int k, const Options& opts) {
    NormSurjectivityReport rep = verify_norm_surjectivity(degree, m, k);
    json inputs{{"degree", degree}, {"m", m}, {"precision", k}};
    return envelope("verify-norm", inputs, json{{"norm_surjectivity", to_json(rep)}},
                    diagnostics_for(opts, k));
}

std::string scan_csv_row(const ScanRow& row) {
    std::ostringstream os;
    os << row.R.get_str() << "," << (row.record.valid ? "true" : "false") << ","
       << row.lambda.s_inf.get_str() << "," << row.lambda.lambda_F.get_str() << ",";
    if (row.lambda.lambda_Fprime) os << row.lambda.lambda_Fprime->get_str();
    os << ",";
    if (row.lambda.lambda_J) os << row.lambda.lambda_J->get_str();
    os << "," << rank_one_label_name(row.classification.label);
    return os.str();
}

json scan_document(const QuadField& field, const Integer& rmax, const Options& opts) {
    std::vector<ScanRow> rows = enumerate_twists(field, rmax, opts.jobs, opts.precision());
    json inputs = base_inputs(field);
    inputs["rmax"] = rmax.get_str();
    json jrows = json::array();
    long used = 0;
    for (const auto& row : rows) {
        json r{{"R", row.R.get_str()},
               {"valid", row.record.valid},
               {"s_inf", row.lambda.s_inf.get_str()},
               {"lambda_F", row.lambda.lambda_F.get_str()},
               {"case", rank_one_label_name(row.classification.label)}};
        r["lambda_Fprime"] =
            row.lambda.lambda_Fprime ? json(row.lambda.lambda_Fprime->get_str()) : json(nullptr);
        r["lambda_J"] = row.lambda.lambda_J ? json(row.lambda.lambda_J->get_str()) : json(nullptr);
        used = std::max(used, row.lambda.max_precision_used);
        jrows.push_back(r);
    }
    return envelope("scan", inputs, json{{"rows", jrows}}, diagnostics_for(opts, used));
}

}  // namespace qlambda::report
