#ifndef GAUSSCOND_DENOTE_HPP
#define GAUSSCOND_DENOTE_HPP

#include "gausscond/channel.hpp"
#include "gausscond/syntax.hpp"

namespace gausscond {

/// Compositional translation of a typed term into a conditioning channel
/// from the flattened context to the flattened result type. Conditioning
/// s =:= t becomes the channel of s - t composed with observe(0).
Channel denote(const Ctx& ctx, const TermPtr& t);

}  // namespace gausscond

#endif
