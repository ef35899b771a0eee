#pragma once

#include <stdexcept>
#include <string>

namespace degeneig {

// Base class for everything this library throws. `code()` is a stable
// machine-readable tag; the CLI maps codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define DEGENEIG_DEFINE_ERROR(Name, code_str)                      \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(code_str, what) {} \
  }

DEGENEIG_DEFINE_ERROR(InvalidArgumentError, "invalid-argument");
DEGENEIG_DEFINE_ERROR(InvalidMeshError, "invalid-mesh");
DEGENEIG_DEFINE_ERROR(NonConformingMeshError, "non-conforming-mesh");
DEGENEIG_DEFINE_ERROR(InvalidSubdomainError, "invalid-subdomain");
DEGENEIG_DEFINE_ERROR(PreconditionError, "precondition-violation");
DEGENEIG_DEFINE_ERROR(UndefinedRatioError, "undefined-ratio");
DEGENEIG_DEFINE_ERROR(SpanInsufficientError, "span-insufficient");
DEGENEIG_DEFINE_ERROR(FactorizationError, "factorization-failure");
DEGENEIG_DEFINE_ERROR(ConvergenceError, "convergence-failure");
DEGENEIG_DEFINE_ERROR(NoDomainsError, "no-domains");
DEGENEIG_DEFINE_ERROR(DomainTooCoarseError, "domain-too-coarse");
DEGENEIG_DEFINE_ERROR(ClusterTrackingError, "cluster-tracking-failure");
DEGENEIG_DEFINE_ERROR(SplittingError, "splitting-failure");
DEGENEIG_DEFINE_ERROR(SimplificationError, "simplification-failure");
DEGENEIG_DEFINE_ERROR(ConfigError, "config-error");
DEGENEIG_DEFINE_ERROR(MissingArtifactError, "missing-artifact");
DEGENEIG_DEFINE_ERROR(IoError, "io-error");

#undef DEGENEIG_DEFINE_ERROR

}  // namespace degeneig
