#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agentkernel {

// Every failure the kernel can report. The execution layer exposes the
// wire-visible subset through ActionResult; the rest surface at load or
// configuration time.
enum class ErrorCode {
  StaleRef,
  UnknownRef,
  EmptyTree,
  EmptyRange,
  ElementObscured,
  ElementDisabled,
  NotInteractive,
  Timeout,
  NoDialogPending,
  NoSuchTab,
  InvalidBulk,
  PolicyDenied,
  ConfirmationRequired,
  MalformedUrl,
  UnknownTemplate,
  InvalidParams,
  ParseError,
  InvalidDirective,
  MissingMemory,
  InvalidLedger,
  ScenarioError,
  IncomparableRuns,
};

std::string_view to_string(ErrorCode code);

class KernelError : public std::runtime_error {
 public:
  KernelError(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// StaleRef carries both versions so the agent can see how far behind it is.
class StaleRefError : public KernelError {
 public:
  StaleRefError(int expected_version, int got_version)
      : KernelError(ErrorCode::StaleRef,
                    "stale ref: snapshot version is " +
                        std::to_string(expected_version) + ", ref targets version " +
                        std::to_string(got_version)),
        expected_(expected_version),
        got_(got_version) {}

  int expected_version() const { return expected_; }
  int got_version() const { return got_; }

 private:
  int expected_;
  int got_;
};

}  // namespace agentkernel
