#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctrack/image.hpp"
#include "ctrack/latent.hpp"

namespace ctrack {

/// edited = first frame with the marker drawn in; unedited = original.
enum class ConditioningTag { edited, unedited };

std::string_view to_string(ConditioningTag tag);
ConditioningTag parse_conditioning_tag(std::string_view text);

/// First-frame conditioning. The text prompt is always empty and is not
/// represented.
struct Conditioning {
  Image first_frame;
  ConditioningTag tag = ConditioningTag::unedited;
};

/// Noise predictor eps(x_t, t, c).
///
/// Implementations must return a tensor shaped like x_t and be deterministic
/// for fixed inputs. Backends that cannot take concurrent calls serialize
/// internally and report it through concurrent_calls().
template <typename Scalar>
class Denoiser {
 public:
  using Latent = LatentVideo<Scalar>;

  virtual ~Denoiser() = default;

  virtual Latent epsilon(const Latent& x_t, int t, const Conditioning& c) const = 0;

  /// One prediction per conditioning, in order. Backends that can share
  /// work across conditionings override this.
  virtual std::vector<Latent> epsilon_batch(const Latent& x_t, int t,
                                            std::span<const Conditioning* const> conditionings) const {
    std::vector<Latent> out;
    out.reserve(conditionings.size());
    for (const Conditioning* c : conditionings) out.push_back(epsilon(x_t, t, *c));
    return out;
  }

  virtual bool concurrent_calls() const { return true; }
};

}  // namespace ctrack
