#include "pnf/io.hpp"

#include <fstream>
#include <sstream>

namespace pnf {

Json scalar_to_json(const Scalar& s) {
    return Json{{"re", rational_str(s.re)}, {"im", rational_str(s.im)}};
}

Scalar scalar_from_json(const Json& j) {
    return Scalar(parse_rational(j.at("re").get<std::string>()),
                  parse_rational(j.at("im").get<std::string>()));
}

Json jet_to_json(const Jet& f) {
    Json terms = Json::array();
    for (const auto& [q, c] : f.terms()) {
        Json t;
        t["monomial"] = q.exponents();
        t["re"] = rational_str(c.re);
        t["im"] = rational_str(c.im);
        terms.push_back(std::move(t));
    }
    return terms;
}

Jet jet_from_json(const Json& j, const JetRing& ring) {
    if (!j.is_array()) fail(ErrorKind::parse, "jet must be an array of terms");
    Jet f(ring);
    for (const Json& t : j) {
        auto exps = t.at("monomial").get<std::vector<int>>();
        if (static_cast<int>(exps.size()) != ring.nvars())
            fail(ErrorKind::parse, "monomial length does not match variable count");
        Scalar c(parse_rational(t.at("re").get<std::string>()),
                 t.contains("im") ? parse_rational(t.at("im").get<std::string>())
                                  : Rational(0));
        MultiIndex q(exps);
        if (q.degree() > ring.order)
            fail(ErrorKind::parse, "term of degree " + std::to_string(q.degree()) +
                                       " exceeds order " + std::to_string(ring.order));
        f.add_term(q, c);
    }
    return f;
}

Json polyvector_to_json(const PolyVector& t) {
    Json out;
    out["degree"] = t.degree();
    Json terms = Json::array();
    for (const auto& [idx, f] : t.terms()) {
        Json e;
        Json indices = Json::array();
        for (int i : idx) indices.push_back(i + 1);
        e["indices"] = std::move(indices);
        e["jet"] = jet_to_json(f);
        terms.push_back(std::move(e));
    }
    out["terms"] = std::move(terms);
    return out;
}

PolyVector polyvector_from_json(const Json& j, const JetRing& ring) {
    PolyVector t(j.at("degree").get<int>(), ring);
    for (const Json& e : j.at("terms")) {
        std::vector<int> idx;
        for (const Json& i : e.at("indices")) idx.push_back(i.get<int>() - 1);
        t.add_term(idx, jet_from_json(e.at("jet"), ring));
    }
    return t;
}

Json diffeo_to_json(const DiffeoJet& d) {
    Json out;
    out["order"] = d.order();
    Json comps = Json::array();
    for (const Jet& c : d.components()) comps.push_back(jet_to_json(c));
    out["components"] = std::move(comps);
    return out;
}

DiffeoJet diffeo_from_json(const Json& j, const JetRing& ring) {
    JetRing r = ring;
    if (j.contains("order")) r.order = j.at("order").get<int>();
    std::vector<Jet> comps;
    for (const Json& c : j.at("components")) comps.push_back(jet_from_json(c, r));
    return DiffeoJet::make(std::move(comps), /*require_identity_tangent=*/false);
}

// ---------------------------------------------------------------------------

ProblemFile parse_problem(const std::string& text, int order_override) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::parse, std::string("invalid JSON: ") + e.what());
    }
    ProblemFile pf;
    try {
        pf.n = j.at("n").get<int>();
        pf.p = j.at("p").get<int>();
        if (j.contains("order")) pf.order = j.at("order").get<int>();
        if (order_override > 0) pf.order = order_override;
        if (pf.n < 1 || pf.p < 1 || pf.order < 2)
            fail(ErrorKind::parse, "need n >= 1, p >= 1, order >= 2");

        const Json& lj = j.at("lambda");
        if (static_cast<int>(lj.size()) != pf.p)
            fail(ErrorKind::parse, "lambda must have p rows");
        Mat lambda;
        for (const Json& row : lj) {
            if (static_cast<int>(row.size()) != pf.n)
                fail(ErrorKind::parse, "lambda rows must have n entries");
            Vec r;
            for (const Json& e : row) r.push_back(Scalar::parse(e.get<std::string>()));
            lambda.push_back(std::move(r));
        }
        pf.family = LinearFamily(pf.n, pf.p, std::move(lambda));

        JetRing ring{pf.n, pf.p, pf.order};
        PolyVector biv(2, ring);
        // the linear part is implied by lambda; bracket entries add to it
        for (int k = 0; k < pf.p; ++k)
            for (int i = 0; i < pf.n; ++i)
                biv.add_term({i, pf.n + k},
                             pf.family.lam(k, i) * Jet::variable(ring, i));
        if (j.contains("bracket"))
            for (const auto& [key, val] : j.at("bracket").items()) {
                auto comma = key.find(',');
                if (comma == std::string::npos)
                    fail(ErrorKind::parse, "bracket key '" + key + "' is not 'i,j'");
                int bi = std::stoi(key.substr(0, comma)) - 1;
                int bj = std::stoi(key.substr(comma + 1)) - 1;
                if (bi < 0 || bj < 0 || bi >= bj || bj >= ring.nvars())
                    fail(ErrorKind::parse, "bracket key '" + key + "' out of range");
                biv.add_term({bi, bj}, jet_from_json(val, ring));
            }
        pf.bivector = std::move(biv);
        if (j.contains("metadata")) pf.metadata = j.at("metadata");
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, std::string("problem file: ") + e.what());
    }
    return pf;
}

ProblemFile load_problem(const std::string& path, int order_override) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::parse, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str(), order_override);
}

std::string serialize_problem(const ProblemFile& pf) {
    Json j;
    j["n"] = pf.n;
    j["p"] = pf.p;
    j["order"] = pf.order;
    Json lambda = Json::array();
    for (int k = 0; k < pf.p; ++k) {
        Json row = Json::array();
        for (int i = 0; i < pf.n; ++i) row.push_back(pf.family.lam(k, i).str());
        lambda.push_back(std::move(row));
    }
    j["lambda"] = std::move(lambda);
    Json bracket;
    JetRing ring = pf.bivector.ring();
    for (const auto& [idx, c] : pf.bivector.terms()) {
        Jet stored = c;
        if (idx[1] >= pf.n && idx[0] < pf.n) {
            // strip the linear part implied by lambda
            stored -= pf.family.lam(idx[1] - pf.n, idx[0]) * Jet::variable(ring, idx[0]);
        }
        if (stored.is_zero()) continue;
        bracket[std::to_string(idx[0] + 1) + "," + std::to_string(idx[1] + 1)] =
            jet_to_json(stored);
    }
    j["bracket"] = std::move(bracket);
    if (!pf.metadata.is_null()) j["metadata"] = pf.metadata;
    return j.dump(2) + "\n";
}

std::string digest(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------

namespace {

Json hyp_item(const HypothesisItem& h) {
    Json j;
    j["pass"] = h.pass;
    if (!h.pass) {
        Json c = Json::array();
        for (int v : h.counterexample) c.push_back(v + 1);
        j["counterexample"] = std::move(c);
    }
    return j;
}

}  // namespace

Json jet_matrix_to_json(const JetMat& m) {
    Json rows = Json::array();
    for (const auto& row : m) {
        Json jr = Json::array();
        for (const Jet& e : row) jr.push_back(jet_to_json(e));
        rows.push_back(std::move(jr));
    }
    return rows;
}

Json normalization_to_json(const NormalizationResult& r) {
    Json j;
    j["diffeo"] = diffeo_to_json(r.diffeo);
    Json nf = Json::array();
    for (const PolyVector& y : r.normal_forms) nf.push_back(polyvector_to_json(y));
    j["normal_forms"] = std::move(nf);
    j["resonance_support"] = resonance_report_to_json(r.resonance_support);
    return j;
}

Json hypotheses_to_json(const HypothesesReport& h) {
    Json j;
    j["h1_distinct_eigenvalues"] = hyp_item(h.h1);
    j["h2_no_zero_eigenvalue"] = hyp_item(h.h2);
    j["h3_no_opposite_pair"] = hyp_item(h.h3);
    j["h4_no_pair_sum"] = hyp_item(h.h4);
    Json nr;
    nr["verdict"] = h.nonres.pass() ? (h.nonres.exact ? "non-resonant" : "no violation found")
                                    : "resonant";
    nr["exact"] = h.nonres.exact;
    nr["bound"] = h.nonres.bound;
    nr["kernel_basis"] = h.nonres.kernel_basis;
    nr["violations"] = h.nonres.violations;
    j["linear_part_nonresonance"] = std::move(nr);
    return j;
}

Json resonance_report_to_json(const ResonanceReport& r) {
    Json j;
    switch (r.kind) {
        case ResonanceKind::function: j["kind"] = "function"; break;
        case ResonanceKind::vector: j["kind"] = "vector"; break;
        case ResonanceKind::bivector: j["kind"] = "bivector"; break;
    }
    j["degree_bound"] = r.degree_bound;
    Json entries = Json::array();
    for (const ResonanceEntry& e : r.entries) {
        Json je;
        je["monomial"] = e.q.exponents();
        if (e.i >= 0) je["i"] = e.i + 1;
        if (e.j >= 0) je["j"] = e.j + 1;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    return j;
}

Json invariant_ring_to_json(const InvariantRing& r) {
    Json j;
    Json gens = Json::array();
    for (const MultiIndex& g : r.generators) gens.push_back(g.exponents());
    j["generators"] = std::move(gens);
    j["degree_bound"] = r.degree_bound;
    j["complete"] = r.complete;
    return j;
}

Json omega_to_json(const OmegaSequence& o) {
    Json j;
    Json entries = Json::array();
    for (const OmegaEntry& e : o.entries) {
        Json je;
        je["k"] = e.k;
        je["attained"] = e.attained;
        if (e.attained) {
            je["omega_squared"] = rational_str(e.omega2);
            je["omega_float_diagnostic"] = e.omega;
            je["argmin_monomial"] = e.argmin_q.exponents();
            je["argmin_target"] = e.argmin_j + 1;
        }
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    j["brjuno_partial_sum_diagnostic"] = o.brjuno_partial;
    return j;
}

Json stage_checks_to_json(const std::vector<StageCheck>& checks) {
    Json j = Json::array();
    for (const StageCheck& c : checks) {
        Json jc;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        if (!c.detail.empty()) jc["detail"] = c.detail;
        j.push_back(std::move(jc));
    }
    return j;
}

Json stage_records_to_json(const std::vector<StageRecord>& stages) {
    Json j = Json::array();
    for (const StageRecord& s : stages) {
        Json js;
        js["name"] = s.name;
        js["diffeo"] = s.diffeo.components().empty() ? Json(nullptr) : diffeo_to_json(s.diffeo);
        js["checks"] = stage_checks_to_json(s.checks);
        j.push_back(std::move(js));
    }
    return j;
}

Json poisson_to_json(const PoissonJet& p) {
    Json j;
    j["n"] = p.n();
    j["p"] = p.p();
    j["order"] = p.order();
    Json lambda = Json::array();
    for (int k = 0; k < p.p(); ++k) {
        Json row = Json::array();
        for (int i = 0; i < p.n(); ++i) row.push_back(p.family().lam(k, i).str());
        lambda.push_back(std::move(row));
    }
    j["lambda"] = std::move(lambda);
    j["bivector"] = polyvector_to_json(p.bivector());
    return j;
}

}  // namespace pnf
