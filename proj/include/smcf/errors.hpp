#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace smcf {

/// Base class for all solver errors.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// The graph left (or never entered) the spacelike regime: largest singular
/// value of Df reached 1 - eps_guard.  Carries the offending value and,
/// when known, the node where it happened.
class NotSpacelike : public SolverError {
public:
    explicit NotSpacelike(double lambda1, std::int64_t node = -1)
        : SolverError("not spacelike: lambda1 = " + std::to_string(lambda1) +
                      (node >= 0 ? " at node " + std::to_string(node) : "")),
          lambda1_(lambda1),
          node_(node) {}
    NotSpacelike(double lambda1, const std::string& where)
        : SolverError("not spacelike: lambda1 = " + std::to_string(lambda1) + " at " + where),
          lambda1_(lambda1),
          node_(-1) {}
    double lambda1() const { return lambda1_; }
    std::int64_t node() const { return node_; }

private:
    double lambda1_;
    std::int64_t node_;
};

class UnboundedDomain : public SolverError {
public:
    explicit UnboundedDomain(const std::string& what) : SolverError(what) {}
};

class DegenerateGrid : public SolverError {
public:
    explicit DegenerateGrid(const std::string& what) : SolverError(what) {}
};

class NotOnBoundary : public SolverError {
public:
    explicit NotOnBoundary(const std::string& what) : SolverError(what) {}
};

class ExteriorNode : public SolverError {
public:
    explicit ExteriorNode(const std::string& what) : SolverError(what) {}
};

class InsufficientStencil : public SolverError {
public:
    explicit InsufficientStencil(const std::string& what) : SolverError(what) {}
};

class NonFiniteError : public SolverError {
public:
    explicit NonFiniteError(const std::string& what) : SolverError(what) {}
};

class InvalidXi : public SolverError {
public:
    explicit InvalidXi(const std::string& what) : SolverError(what) {}
};

class InvalidParameter : public SolverError {
public:
    explicit InvalidParameter(const std::string& what) : SolverError(what) {}
};

/// Scenario text failed strict parsing; `path()` points at the offending key.
class ParseError : public SolverError {
public:
    ParseError(const std::string& path, const std::string& what)
        : SolverError("parse error at '" + path + "': " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class DimensionMismatch : public SolverError {
public:
    explicit DimensionMismatch(const std::string& what) : SolverError(what) {}
};

class UnknownCatalogId : public SolverError {
public:
    explicit UnknownCatalogId(const std::string& what) : SolverError(what) {}
};

class NonOracleScenario : public SolverError {
public:
    explicit NonOracleScenario(const std::string& what) : SolverError(what) {}
};

}  // namespace smcf
