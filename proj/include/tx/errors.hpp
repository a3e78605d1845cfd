#pragma once

#include <stdexcept>
#include <string>

namespace tx {

// Every contract violation surfaces as an Error carrying a stable kind tag,
// which the CLI copies verbatim into reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& detail)
        : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define TX_ERROR_KIND(Name)                                               \
    struct Name : Error {                                                 \
        explicit Name(const std::string& detail) : Error(#Name, detail) {} \
    };

TX_ERROR_KIND(ParseError)
TX_ERROR_KIND(ShapeError)
TX_ERROR_KIND(ContainmentViolation)
TX_ERROR_KIND(InfiniteDimensional)
TX_ERROR_KIND(BadRelation)
TX_ERROR_KIND(NotAssociative)
TX_ERROR_KIND(NotIdempotent)
TX_ERROR_KIND(NotProjective)
TX_ERROR_KIND(NotBasic)
TX_ERROR_KIND(NotModule)
TX_ERROR_KIND(NotComplex)
TX_ERROR_KIND(NotExact)
TX_ERROR_KIND(LengthExceeded)
TX_ERROR_KIND(ClassMismatch)
TX_ERROR_KIND(WindowTooSmall)
TX_ERROR_KIND(TableMismatch)
TX_ERROR_KIND(UnitCoboundary)
TX_ERROR_KIND(ArityOverflow)
TX_ERROR_KIND(LinearNotInvertible)
TX_ERROR_KIND(ClosureViolation)
TX_ERROR_KIND(PatternViolation)
TX_ERROR_KIND(DimMismatch)
TX_ERROR_KIND(PhiNotIso)
TX_ERROR_KIND(SolverInconsistent)

#undef TX_ERROR_KIND

}  // namespace tx
