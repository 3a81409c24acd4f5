#pragma once

// Named verification checks, their reports, and the suite runner.

#include "galdual/paramgroups.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace galdual {

class UnknownCheckError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidParamsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Status { pass, fail, skipped };
std::string_view to_string(Status s);

enum class Profile { quick, full };
std::string_view to_string(Profile p);
Profile parse_profile(std::string_view text);

struct CheckParams {
  std::optional<unsigned> ell;
  std::optional<Twist> twist;
  // Full enables the exhaustive l = 7 enumerations.
  Profile profile = Profile::quick;
};

struct CheckReport {
  std::string check_id;
  std::map<std::string, std::string> params;
  Status status = Status::pass;
  std::string reason;
  std::map<std::string, std::int64_t> counts;
  std::optional<std::string> witness;
  std::int64_t runtime_ms = 0;
};

// Collects the outcome of one check.
class CheckContext {
 public:
  explicit CheckContext(CheckReport& r) : report_(r) {}

  void count(const std::string& name, std::int64_t value) { report_.counts[name] = value; }
  // Records a failed assertion by name; the first one becomes the reason.
  bool expect(bool ok, const std::string& name);
  void witness(std::string text) { report_.witness = std::move(text); }
  bool failed() const { return report_.status == Status::fail; }

 private:
  CheckReport& report_;
};

struct CheckDefinition {
  std::string id;
  std::string summary;
  // Primes the check accepts; empty when it takes no l.
  std::vector<unsigned> ells;
  // Twists the check accepts; empty when it takes no twist.
  std::vector<Twist> twists;
  // Excluded from the quick profile.
  bool full_only = false;
  std::function<void(const Prime*, Twist, const CheckParams&, CheckContext&)> body;
};

const std::vector<CheckDefinition>& registry();

// Throws UnknownCheckError or InvalidParamsError. A prime outside
// {2, 3, 5, 7} yields a skipped report.
CheckReport run_check(std::string_view check_id, const CheckParams& params = {});

// Every check over its accepted parameters, ordered by id then params.
std::vector<CheckReport> run_all(Profile profile, unsigned threads = 0);
std::vector<CheckReport> run_all(const std::vector<CheckDefinition>& checks, Profile profile,
                                 unsigned threads = 0);

std::string render(const CheckReport& r, bool include_runtime = true);
std::string render(const std::vector<CheckReport>& reports, bool include_runtime = true);

bool all_passed(const std::vector<CheckReport>& reports);

}  // namespace galdual
