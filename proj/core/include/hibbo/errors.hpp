#pragma once

#include <stdexcept>
#include <string>

namespace hibbo {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define HIBBO_DEFINE_ERROR(Name)                                      \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& msg) : Error(msg) {}         \
    }

HIBBO_DEFINE_ERROR(DimensionMismatch);
HIBBO_DEFINE_ERROR(NotPositiveDefinite);
HIBBO_DEFINE_ERROR(SingularDiagonal);
HIBBO_DEFINE_ERROR(DisconnectedNode);
HIBBO_DEFINE_ERROR(InvalidOrder);
HIBBO_DEFINE_ERROR(ChannelMismatch);
HIBBO_DEFINE_ERROR(ShapeMismatch);
HIBBO_DEFINE_ERROR(EmptySequence);
HIBBO_DEFINE_ERROR(EmptyState);
HIBBO_DEFINE_ERROR(EmptyInput);
HIBBO_DEFINE_ERROR(OrderTooLow);
HIBBO_DEFINE_ERROR(EmptyDataset);
HIBBO_DEFINE_ERROR(NonFiniteLoss);
HIBBO_DEFINE_ERROR(EmptyGrid);
HIBBO_DEFINE_ERROR(EmptyProbeSet);
HIBBO_DEFINE_ERROR(GridTooLarge);
HIBBO_DEFINE_ERROR(BudgetExhaustedBeforeStart);
HIBBO_DEFINE_ERROR(MixedProblems);
HIBBO_DEFINE_ERROR(ConfigInvalid);
HIBBO_DEFINE_ERROR(RuntimeFailure);

#undef HIBBO_DEFINE_ERROR

}  // namespace hibbo
