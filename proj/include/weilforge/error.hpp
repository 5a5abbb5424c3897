#pragma once

#include <stdexcept>
#include <string>

namespace weilforge {

enum class errc {
  // algebra construction and validation
  not_commutative,
  not_associative,
  no_unit,
  not_local,
  dim_cap_exceeded,
  // ideals and elements
  improper_ideal,
  algebra_mismatch,
  generator_not_nilpotent,
  element_not_in_maximal,
  // derivations and automorphisms
  incompatible_module,
  not_invariant,
  hypothesis_violated,
  relations_violated,
  not_invertible,
  not_automorphism,
  presentation_missing,
  // points and jets
  not_regular,
  base_mismatch,
  // scripting front end
  syntax_error,
  name_error,
  type_error,
  io_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::not_commutative: return "NotCommutative";
    case errc::not_associative: return "NotAssociative";
    case errc::no_unit: return "NoUnit";
    case errc::not_local: return "NotLocal";
    case errc::dim_cap_exceeded: return "DimCapExceeded";
    case errc::improper_ideal: return "ImproperIdeal";
    case errc::algebra_mismatch: return "AlgebraMismatch";
    case errc::generator_not_nilpotent: return "GeneratorNotNilpotent";
    case errc::element_not_in_maximal: return "ElementNotInMaximal";
    case errc::incompatible_module: return "IncompatibleModule";
    case errc::not_invariant: return "NotInvariant";
    case errc::hypothesis_violated: return "HypothesisViolated";
    case errc::relations_violated: return "RelationsViolated";
    case errc::not_invertible: return "NotInvertible";
    case errc::not_automorphism: return "NotAutomorphism";
    case errc::presentation_missing: return "PresentationMissing";
    case errc::not_regular: return "NotRegular";
    case errc::base_mismatch: return "BaseMismatch";
    case errc::syntax_error: return "SyntaxError";
    case errc::name_error: return "NameError";
    case errc::type_error: return "TypeError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool ok, errc code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

}  // namespace weilforge
