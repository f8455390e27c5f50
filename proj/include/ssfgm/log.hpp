#pragma once

namespace ssfgm {

/// Sends library logging to stderr at the level named by SSFGM_LOG
/// (trace, debug, info, warn, error, off); warn when unset.
void configure_logging_from_env();

}  // namespace ssfgm
