#include "mtforge/corpus/parallel_pair.hpp"

#include "mtforge/core/error.hpp"
#include "mtforge/core/languages.hpp"

namespace mtforge::corpus {

void ParallelPair::validate() const {
  require(!source.empty(), ErrorCode::InvalidArgument, "pair source is empty");
  require(!target.empty(), ErrorCode::InvalidArgument, "pair target is empty");
  require(lp0.code() != lp1.code(), ErrorCode::InvalidArgument,
          "pair languages are identical (" + lp0.code() + ")");
}

ParallelPair pair_from_json(const Json& j) {
  ParallelPair p{string_field(j, "source"), string_field(j, "target"), language_from_json(field(j, "lp0")),
                 language_from_json(field(j, "lp1")), optional_string_field(j, "provenance").value_or("")};
  try {
    p.validate();
  } catch (const Error& e) {
    fail(ErrorCode::DataError, e.detail());
  }
  return p;
}

Json to_json(const ParallelPair& p) {
  return Json{{"source", p.source},
              {"target", p.target},
              {"lp0", p.lp0.code()},
              {"lp1", p.lp1.code()},
              {"provenance", p.provenance}};
}

}  // namespace mtforge::corpus
