#pragma once

#include "json.hpp"
#include "pnf/poisson.hpp"

namespace pnf {

using Json = nlohmann::ordered_json;

// Exact values serialize as rational strings; floats appear only in fields
// explicitly marked diagnostic.
Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j);

Json jet_to_json(const Jet& f);
Jet jet_from_json(const Json& j, const JetRing& ring);

Json polyvector_to_json(const PolyVector& t);
PolyVector polyvector_from_json(const Json& j, const JetRing& ring);

Json diffeo_to_json(const DiffeoJet& d);
DiffeoJet diffeo_from_json(const Json& j, const JetRing& ring);

/// Problem file: {"n":2, "p":1, "order":4, "lambda":[["2","3"]],
/// "bracket":{"1,3":[{"monomial":[1,0,0],"re":"2","im":"0"}, ...]},
/// "metadata":{...}}. Bracket keys are 1-based "i,j" pairs with i < j.
struct ProblemFile {
    int n = 0, p = 0;
    int order = 6;
    LinearFamily family;
    PolyVector bivector;
    Json metadata;

    PoissonJet to_poisson() const { return PoissonJet::make(bivector, family); }
};

ProblemFile parse_problem(const std::string& text, int order_override = 0);
ProblemFile load_problem(const std::string& path, int order_override = 0);
std::string serialize_problem(const ProblemFile& pf);

/// FNV-1a over the canonical serialized input; stable across runs.
std::string digest(const std::string& bytes);

Json hypotheses_to_json(const HypothesesReport& h);
Json normalization_to_json(const NormalizationResult& r);
Json jet_matrix_to_json(const JetMat& m);
Json resonance_report_to_json(const ResonanceReport& r);
Json invariant_ring_to_json(const InvariantRing& r);
Json omega_to_json(const OmegaSequence& o);
Json stage_records_to_json(const std::vector<StageRecord>& stages);
Json stage_checks_to_json(const std::vector<StageCheck>& checks);
Json poisson_to_json(const PoissonJet& p);

}  // namespace pnf
