#include "ctrack/denoiser.hpp"

#include <string>

namespace ctrack {

std::string_view to_string(ConditioningTag tag) {
  switch (tag) {
    case ConditioningTag::edited:
      return "edited";
    case ConditioningTag::unedited:
      return "unedited";
  }
  throw InvalidArgument("unknown conditioning tag");
}

ConditioningTag parse_conditioning_tag(std::string_view text) {
  if (text == "edited") return ConditioningTag::edited;
  if (text == "unedited") return ConditioningTag::unedited;
  throw InvalidArgument("unknown conditioning tag '" + std::string(text) + "'");
}

}  // namespace ctrack
