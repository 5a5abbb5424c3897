#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "weilforge/affine.hpp"
#include "weilforge/points.hpp"

namespace weilforge {

using Json = nlohmann::json;

inline std::string algebra_hash_string(const AlgebraPtr& A) { return hash_to_hex(A->hash); }

// ---------------------------------------------------------------------------
// Algebras: {labels, dim, structure_constants, maximal_basis}
// ---------------------------------------------------------------------------

inline Json algebra_to_json(const AlgebraPtr& A) {
  int d = A->dim();
  Json constants = Json::array();
  for (int i = 0; i < d; ++i) {
    Json row = Json::array();
    for (int j = 0; j < d; ++j) {
      Json entry = Json::array();
      QVec prod = sparse_to_dense(A->basis_product(i, j), d);
      for (const Rat& c : prod) entry.push_back(rat_to_string(c));
      row.push_back(std::move(entry));
    }
    constants.push_back(std::move(row));
  }
  return Json{{"labels", A->labels},
              {"dim", d},
              {"structure_constants", std::move(constants)},
              {"maximal_basis", A->maximal_basis},
              {"hash", algebra_hash_string(A)}};
}

/// Parses and fully re-validates a serialized algebra (the table goes through
/// the same checks as any user-supplied table).
inline AlgebraPtr algebra_from_json(const Json& j) {
  require(j.is_object() && j.contains("labels") && j.contains("structure_constants"), errc::io_error,
          "algebra document needs 'labels' and 'structure_constants'");
  std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
  int d = static_cast<int>(labels.size());
  const Json& sc = j.at("structure_constants");
  require(sc.is_array() && static_cast<int>(sc.size()) == d, errc::io_error, "structure_constants has wrong shape");
  std::vector<std::vector<QVec>> table(static_cast<std::size_t>(d), std::vector<QVec>(static_cast<std::size_t>(d)));
  for (int i = 0; i < d; ++i) {
    require(sc[static_cast<std::size_t>(i)].is_array() && static_cast<int>(sc[static_cast<std::size_t>(i)].size()) == d,
            errc::io_error, "structure_constants has wrong shape");
    for (int jj = 0; jj < d; ++jj) {
      const Json& cell = sc[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)];
      require(cell.is_array() && static_cast<int>(cell.size()) == d, errc::io_error,
              "structure_constants has wrong shape");
      QVec v;
      for (const Json& entry : cell) v.push_back(rat_from_string(entry.get<std::string>()));
      table[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)] = std::move(v);
    }
  }
  return algebra_from_table(labels, table);
}

// ---------------------------------------------------------------------------
// Ideals, elements, points, jets
// ---------------------------------------------------------------------------

inline Json coords_to_json(const QVec& v) {
  Json out = Json::array();
  for (const Rat& c : v) out.push_back(rat_to_string(c));
  return out;
}

inline QVec coords_from_json(const Json& j) {
  QVec out;
  for (const Json& entry : j) out.push_back(rat_from_string(entry.get<std::string>()));
  return out;
}

inline Json ideal_to_json(const Ideal& I) {
  Json basis = Json::array();
  for (const QVec& row : I.basis.rows()) basis.push_back(coords_to_json(row));
  return Json{{"algebra", algebra_hash_string(I.algebra)},
              {"basis", std::move(basis)},
              {"invariant_by_construction", I.invariant_by_construction}};
}

inline Ideal ideal_from_json(const Json& j, const AlgebraPtr& A) {
  require(j.contains("algebra") && j.at("algebra").get<std::string>() == algebra_hash_string(A), errc::io_error,
          "ideal document references a different algebra (content hash mismatch)");
  std::vector<Element> gens;
  for (const Json& row : j.at("basis")) gens.push_back({A, coords_from_json(row)});
  return ideal_span(A, gens);
}

inline Json element_to_json(const Element& e) {
  return Json{{"algebra", algebra_hash_string(e.algebra)}, {"coords", coords_to_json(e.coords)}};
}

inline Json near_point_to_json(const NearPoint& p) {
  Json images = Json::array();
  for (const Element& im : p.images) images.push_back(coords_to_json(im.coords));
  return Json{{"algebra", algebra_hash_string(p.algebra)},
              {"n", p.n},
              {"base", coords_to_json(p.base)},
              {"images", std::move(images)}};
}

inline Json jet_to_json(const Jet& j) {
  Json kernel = Json::array();
  for (const QVec& row : j.kernel.rows()) kernel.push_back(coords_to_json(row));
  return Json{{"algebra", algebra_hash_string(j.representative.algebra)},
              {"n", j.representative.n},
              {"base", coords_to_json(j.representative.base)},
              {"degree", j.degree},
              {"kernel_basis", std::move(kernel)}};
}

inline Json matrix_to_json(const QMat& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows; ++r) rows.push_back(coords_to_json(m.row(r)));
  return Json{{"rows", m.rows}, {"cols", m.cols}, {"entries", std::move(rows)}};
}

inline Json morphism_to_json(const Morphism& phi) {
  return Json{{"source", algebra_hash_string(phi.source)},
              {"target", algebra_hash_string(phi.target)},
              {"matrix", matrix_to_json(phi.matrix)}};
}

inline Json automorphism_to_json(const Automorphism& s) {
  return Json{{"algebra", algebra_hash_string(s.algebra)}, {"matrix", matrix_to_json(s.matrix)}};
}

inline Json derivation_space_to_json(const DerivationSpace& d) {
  Json basis = Json::array();
  for (const QMat& D : d.basis) basis.push_back(matrix_to_json(D));
  return Json{{"source", algebra_hash_string(d.module.source)},
              {"module", d.module.describe()},
              {"dim", d.dim()},
              {"basis", std::move(basis)}};
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json criterion_to_json(const Criterion& c) {
  return Json{{"name", c.name},
              {"condition", c.condition},
              {"holds", c.holds},
              {"evaluated", c.evaluated},
              {"witness", c.witness}};
}

inline Json report_to_json(const AffineReport& r) {
  Json criteria = Json::array();
  for (const Criterion& c : r.criteria) criteria.push_back(criterion_to_json(c));
  Json hypothesis = Json::array();
  for (const Criterion& c : r.hypothesis) hypothesis.push_back(criterion_to_json(c));
  Json thresholds;
  if (r.thresholds.has_value())
    thresholds = Json{{"m", r.thresholds->m},       {"l", r.thresholds->l},
                      {"k", r.thresholds->k},       {"formula", r.thresholds->formula},
                      {"predicted", r.thresholds->predicted}, {"agrees", r.thresholds->agrees}};
  else
    thresholds = nullptr;
  return Json{{"subject", subject_name(r.subject)}, {"holds", r.holds},   {"hypothesis", std::move(hypothesis)},
              {"criteria", std::move(criteria)},    {"thresholds", thresholds}, {"caveats", r.caveats}};
}

inline std::string report_to_text(const AffineReport& r) {
  std::ostringstream out;
  out << subject_name(r.subject) << ": " << (r.holds ? "HOLDS" : "FAILS") << "\n";
  auto emit = [&](const char* section, const std::vector<Criterion>& list) {
    for (const Criterion& c : list) {
      out << "  " << section << " " << c.name << ": " << c.condition << " -> ";
      if (!c.evaluated)
        out << "not evaluated";
      else
        out << (c.holds ? "holds" : "FAILS");
      if (!c.witness.empty()) out << " [" << c.witness << "]";
      out << "\n";
    }
  };
  emit("hypothesis", r.hypothesis);
  emit("criterion", r.criteria);
  if (r.thresholds.has_value()) {
    const ThresholdCheck& t = *r.thresholds;
    out << "  threshold (m=" << t.m << ", l=" << t.l << ", k=" << t.k << "): " << t.formula << " -> "
        << (t.predicted ? "predicts holds" : "predicts fails") << (t.agrees ? " (agrees)" : " (DISAGREES)") << "\n";
  }
  for (const std::string& c : r.caveats) out << "  caveat: " << c << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

inline Json scan_to_json(const ScanResult& s) {
  Json rows = Json::array();
  for (const ScanRow& r : s.rows)
    rows.push_back(Json{{"m", r.m},
                        {"l", r.l},
                        {"k", r.k},
                        {"weil", r.weil},
                        {"regular", r.regular},
                        {"aut", r.aut},
                        {"jet", r.jet},
                        {"predicted_weil", r.predicted_weil},
                        {"predicted_jet", r.predicted_jet},
                        {"agree", r.agree}});
  return Json{{"rows", std::move(rows)}, {"disagreements", s.disagreements}};
}

inline std::string scan_to_csv(const ScanResult& s) {
  std::ostringstream out;
  out << "m,l,k,weil,regular,aut,jet,predicted_weil,predicted_jet,agree\n";
  auto b = [](bool v) { return v ? "true" : "false"; };
  for (const ScanRow& r : s.rows)
    out << r.m << "," << r.l << "," << r.k << "," << b(r.weil) << "," << b(r.regular) << "," << b(r.aut) << ","
        << b(r.jet) << "," << b(r.predicted_weil) << "," << b(r.predicted_jet) << "," << b(r.agree) << "\n";
  return out.str();
}

inline std::string scan_to_text(const ScanResult& s) {
  std::ostringstream out;
  out << "  m  l  k  weil     regular  aut      jet      pred_weil pred_jet  status\n";
  auto b = [](bool v) { return v ? "holds " : "fails "; };
  for (const ScanRow& r : s.rows) {
    out << std::setw(3) << r.m << std::setw(3) << r.l << std::setw(3) << r.k << "  " << b(r.weil) << "   "
        << b(r.regular) << "   " << b(r.aut) << "   " << b(r.jet) << "   " << b(r.predicted_weil) << "    "
        << b(r.predicted_jet) << "   " << (r.agree ? "ok" : "FAILURE") << "\n";
  }
  out << "rows: " << s.rows.size() << ", disagreements: " << s.disagreements << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Tangent dimensions
// ---------------------------------------------------------------------------

inline Json dims_to_json(const AlgebraPtr& A, int n, const TangentDims& t) {
  return Json{{"algebra", algebra_hash_string(A)},
              {"ambient", n},
              {"dim_point_tangent", t.point_tangent},
              {"dim_der_AA", t.der_AA},
              {"dim_jet_tangent", t.jet_tangent}};
}

}  // namespace weilforge
