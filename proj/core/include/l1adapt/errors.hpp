#pragma once

#include <stdexcept>
#include <string>

namespace l1adapt {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NotMinimumPhase : public Error {
public:
  explicit NotMinimumPhase(const std::string& what) : Error(what) {}
};

class NonConvergent : public Error {
public:
  explicit NonConvergent(const std::string& what) : Error(what) {}
};

class EmptyPolytope : public Error {
public:
  explicit EmptyPolytope(const std::string& what) : Error(what) {}
};

class IterationLimit : public Error {
public:
  explicit IterationLimit(const std::string& what) : Error(what) {}
};

class DenominatorNotPositive : public Error {
public:
  explicit DenominatorNotPositive(const std::string& what) : Error(what) {}
};

class NonFinite : public Error {
public:
  NonFinite(const std::string& what, long when) : Error(what), time(when) {}
  long time;  // step index at which the signal became non-finite
};

class Falsified : public Error {
public:
  explicit Falsified(const std::string& what) : Error(what) {}
};

class MissingAux : public Error {
public:
  explicit MissingAux(const std::string& what) : Error(what) {}
};

class ScheduleUndefined : public Error {
public:
  explicit ScheduleUndefined(const std::string& what) : Error(what) {}
};

class ProjectionNotConverged : public Error {
public:
  explicit ProjectionNotConverged(const std::string& what) : Error(what) {}
};

class RobustlyUnstabilizable : public Error {
public:
  explicit RobustlyUnstabilizable(const std::string& what) : Error(what) {}
};

}  // namespace l1adapt
