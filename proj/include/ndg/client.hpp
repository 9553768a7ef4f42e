#pragma once

#include <string>

#include "ndg/eval.hpp"

namespace ndg {

// Sends one chat-completions request carrying the prompt as the only user
// message, retrying connection failures and 408/429/5xx replies with
// exponential backoff. The credential is read from the environment
// variable named in the config and sent as a Bearer token.
//
// Throws Error(kConfig) when the credential or endpoint is unusable (before
// any request), kAuth on 401/403, kTransport when retries run out or the
// server rejects the request, kMalformedResponse when the reply carries no
// message content.
TranscriptRecord query_model(const std::string& prompt, const EvalConfig& config);

Responder http_responder(const EvalConfig& config);

}  // namespace ndg
