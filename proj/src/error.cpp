#include "capsym/error.hpp"

#include <cstdio>

namespace capsym {

namespace {
WarningSink& warning_sink() {
  static WarningSink sink;
  return sink;
}
}  // namespace

void set_warning_sink(WarningSink sink) { warning_sink() = std::move(sink); }

void warn(const std::string& message) {
  if (warning_sink()) {
    warning_sink()(message);
  } else {
    std::fprintf(stderr, "warning: %s\n", message.c_str());
  }
}

}  // namespace capsym
