#pragma once

#include <stdexcept>
#include <string>

namespace refinery {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define REFINERY_ERROR(Name)                                            \
    class Name : public Error {                                         \
    public:                                                             \
        explicit Name(const std::string& what) : Error(#Name, what) {}  \
    }

REFINERY_ERROR(NotALatticePoint);
REFINERY_ERROR(InvalidDigitSet);
REFINERY_ERROR(InvalidDilation);
REFINERY_ERROR(NotInTile);
REFINERY_ERROR(NotExpansive);
REFINERY_ERROR(BudgetExceeded);
REFINERY_ERROR(WindowTooSmall);
REFINERY_ERROR(ZeroEigenvalue);
REFINERY_ERROR(NotInKernel);
REFINERY_ERROR(IllConditioned);
REFINERY_ERROR(DegenerateEigenvalue);
REFINERY_ERROR(NoTestPoints);
REFINERY_ERROR(SingularBasis);
REFINERY_ERROR(SpecError);

#undef REFINERY_ERROR

}  // namespace refinery
