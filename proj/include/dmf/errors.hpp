#pragma once

#include <stdexcept>
#include <string>

namespace dmf {

// Base class for all library errors so callers can catch dmf::error
// and still distinguish the precise condition by type.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

#define DMF_DEFINE_ERROR(Name)                                        \
    struct Name : error {                                             \
        explicit Name(const std::string& msg = #Name) : error(msg) {} \
    }

DMF_DEFINE_ERROR(NonPrimeCharacteristic);
DMF_DEFINE_ERROR(ReducibleModulus);
DMF_DEFINE_ERROR(EvenCharacteristic);
DMF_DEFINE_ERROR(OddCharacteristic);
DMF_DEFINE_ERROR(ZeroPolynomial);
DMF_DEFINE_ERROR(NotIrreducible);
DMF_DEFINE_ERROR(NotMonic);
DMF_DEFINE_ERROR(NotDegreeTwo);
DMF_DEFINE_ERROR(InseparableModel);
DMF_DEFINE_ERROR(NegativeGenus);
DMF_DEFINE_ERROR(NonIntegralZeta);
DMF_DEFINE_ERROR(NotImaginary);
DMF_DEFINE_ERROR(CapExceeded);
DMF_DEFINE_ERROR(WrongDegree);
DMF_DEFINE_ERROR(RangeViolation);
DMF_DEFINE_ERROR(DimensionAtLeastP);
DMF_DEFINE_ERROR(InsufficientTerms);

#undef DMF_DEFINE_ERROR

}  // namespace dmf
