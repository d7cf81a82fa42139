#pragma once

#include <iosfwd>

namespace cvqt::cli {

/// Entry point shared by the executable and the tests.
/// Errors are reported on `err` as a one-line JSON object.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cvqt::cli
