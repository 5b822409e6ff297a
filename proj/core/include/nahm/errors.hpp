#pragma once

#include <stdexcept>
#include <string>

namespace nahm {

struct NahmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// type validation
struct NonIncreasingMasses : NahmError { using NahmError::NahmError; };
struct ParityViolation : NahmError { using NahmError::NahmError; };
struct EmptyInterval : NahmError { using NahmError::NahmError; };
struct NonPositiveCharge : NahmError { using NahmError::NahmError; };
struct NonPositiveKappa : NahmError { using NahmError::NahmError; };

// lattice / adhm
struct ShapeMismatch : NahmError { using NahmError::NahmError; };
struct SingularGauge : NahmError { using NahmError::NahmError; };
struct OffBlockViolation : NahmError { using NahmError::NahmError; };
struct ZeroPoint : NahmError { using NahmError::NahmError; };
struct DegenerateMonad : NahmError { using NahmError::NahmError; };
struct WeightOutOfRange : NahmError { using NahmError::NahmError; };

// solver
struct UnsupportedType : NahmError { using NahmError::NahmError; };

// ratmap
struct SingularGamma : NahmError { using NahmError::NahmError; };
struct NormalizationFailed : NahmError { using NahmError::NahmError; };
struct PoleAtX : NahmError { using NahmError::NahmError; };
struct ZeroHorosphere : NahmError { using NahmError::NahmError; };
struct DegenerateFlag : NahmError { using NahmError::NahmError; };
struct DegenerateSmallMonad : NahmError { using NahmError::NahmError; };
struct StencilAcrossPole : NahmError { using NahmError::NahmError; };

// serialization
struct SchemaMismatch : NahmError { using NahmError::NahmError; };
struct ParseError : NahmError { using NahmError::NahmError; };
struct IoError : NahmError { using NahmError::NahmError; };

} // namespace nahm
