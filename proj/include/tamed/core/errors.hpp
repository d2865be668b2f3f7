#pragma once

#include <stdexcept>
#include <string>

namespace tamed {

// Invalid experiment configuration; the message names the offending key.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// A coefficient function returned NaN/Inf at a finite input.
class ModelEvaluationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Not enough usable points to fit a convergence order.
class FitError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace tamed
